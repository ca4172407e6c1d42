use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::complex::ExactComplex;
use super::monomial::Monomial;
use crate::error::{Error, Result};

/// Sparse polynomial in `z_1..z_n`, `z̄_1..z̄_n` and `u` with Gaussian-rational
/// coefficients. Zero coefficients are never stored, so equal polynomials have
/// identical term maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, ExactComplex>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: ExactComplex) -> Self {
        Self::monomial(n, Monomial::one(n), c)
    }

    pub fn monomial(n: usize, mono: Monomial, c: ExactComplex) -> Self {
        assert_eq!(mono.n(), n, "monomial dimension mismatch");
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(mono, c);
        }
        p
    }

    /// The holomorphic coordinate `z_{j+1}` (zero-based index).
    pub fn z(n: usize, j: usize) -> Self {
        let mut alpha = vec![0; n];
        alpha[j] = 1;
        Self::monomial(n, Monomial::new(alpha, vec![0; n], 0), ExactComplex::one())
    }

    /// The conjugate coordinate `z̄_{j+1}` (zero-based index).
    pub fn zbar(n: usize, j: usize) -> Self {
        let mut beta = vec![0; n];
        beta[j] = 1;
        Self::monomial(n, Monomial::new(vec![0; n], beta, 0), ExactComplex::one())
    }

    pub fn u(n: usize) -> Self {
        Self::monomial(n, Monomial::new(vec![0; n], vec![0; n], 1), ExactComplex::one())
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, ExactComplex)>,
    {
        let mut p = Self::zero(n);
        for (mono, c) in terms {
            p.add_term(mono, &c);
        }
        p
    }

    fn add_term(&mut self, mono: Monomial, c: &ExactComplex) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (graded lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactComplex)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> ExactComplex {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &ExactComplex) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.n, ExactComplex::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Complex conjugate: swaps `z ↔ z̄` and conjugates every coefficient.
    pub fn conj(&self) -> Self {
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect(),
        }
    }

    /// `(self + conj(self)) / 2`.
    pub fn real_part(&self) -> Self {
        (self + &self.conj()).scale(&ExactComplex::from_ratio(1, 2))
    }

    /// `(self − conj(self)) / 2i`.
    pub fn imag_part(&self) -> Self {
        let half_over_i = ExactComplex::new(BigRational::zero(), BigRational::new((-1).into(), 2.into()));
        (self - &self.conj()).scale(&half_over_i)
    }

    /// Keeps the terms selected by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial, &ExactComplex) -> bool) -> Self {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| keep(m, c))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// True iff `coeff(α,β,m) = conj(coeff(β,α,m))` for every term.
    pub fn is_real_valued(&self) -> bool {
        self.terms
            .iter()
            .all(|(m, c)| self.terms.get(&m.conj()).is_some_and(|d| *d == c.conj()))
    }

    pub fn has_u(&self) -> bool {
        self.terms.keys().any(|m| m.m > 0)
    }

    /// True iff no term mixes `z` and `z̄`; the zero polynomial counts as
    /// pluriharmonic.
    pub fn is_pluriharmonic(&self) -> Result<bool> {
        if self.has_u() {
            return Err(Error::precondition(
                "pluriharmonicity is defined for u-independent polynomials",
                "input depends on u",
            ));
        }
        Ok(self.terms.keys().all(|m| !m.is_mixed()))
    }

    pub fn max_total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// `Some(d)` when every term is u-free and of degree `d` in `(z, z̄)`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        if first.m != 0 {
            return None;
        }
        let d = first.z_degree();
        it.all(|m| m.m == 0 && m.z_degree() == d).then_some(d)
    }

    /// Weighted degree `m + Σ (α_i + β_i) λ_i` of a monomial.
    pub fn weighted_degree(mono: &Monomial, weights: &[BigRational]) -> BigRational {
        let mut w = BigRational::from_integer(mono.m.into());
        for (s, l) in mono.exponent_sums().into_iter().zip(weights) {
            if s > 0 {
                w += l * BigRational::from_integer(s.into());
            }
        }
        w
    }

    /// Splits the polynomial into weighted-homogeneous components keyed by weighted degree.
    pub fn weighted_decomposition(&self, weights: &[BigRational]) -> BTreeMap<BigRational, Polynomial> {
        assert_eq!(weights.len(), self.n, "weight length must equal the dimension");
        let mut out: BTreeMap<BigRational, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(Self::weighted_degree(m, weights))
                .or_insert_with(|| Polynomial::zero(self.n))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Evaluates at complex `z` and real `u`.
    pub fn evaluate(&self, z: &[Complex64], u: f64) -> Complex64 {
        assert_eq!(z.len(), self.n);
        let zbar: Vec<Complex64> = z.iter().map(|v| v.conj()).collect();
        let mut acc = Complex64::zero();
        for (m, c) in &self.terms {
            let mut t = c.to_complex64();
            for j in 0..self.n {
                if m.alpha[j] > 0 {
                    t *= z[j].powu(m.alpha[j]);
                }
                if m.beta[j] > 0 {
                    t *= zbar[j].powu(m.beta[j]);
                }
            }
            if m.m > 0 {
                t *= u.powi(m.m as i32);
            }
            acc += t;
        }
        acc
    }

    /// Evaluates at real coordinates `(x_1, y_1, …, x_n, y_n, u)`, returning the real part.
    pub fn evaluate_real(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), 2 * self.n + 1);
        let z: Vec<Complex64> = (0..self.n)
            .map(|j| Complex64::new(point[2 * j], point[2 * j + 1]))
            .collect();
        self.evaluate(&z, point[2 * self.n]).re
    }

    /// `∂/∂z_j`.
    pub fn d_z(&self, j: usize) -> Self {
        Polynomial::from_terms(
            self.n,
            self.terms.iter().filter(|(m, _)| m.alpha[j] > 0).map(|(m, c)| {
                let mut m2 = m.clone();
                m2.alpha[j] -= 1;
                (m2, c * &ExactComplex::from_integer(m.alpha[j] as i64))
            }),
        )
    }

    /// `∂/∂z̄_j`.
    pub fn d_zbar(&self, j: usize) -> Self {
        Polynomial::from_terms(
            self.n,
            self.terms.iter().filter(|(m, _)| m.beta[j] > 0).map(|(m, c)| {
                let mut m2 = m.clone();
                m2.beta[j] -= 1;
                (m2, c * &ExactComplex::from_integer(m.beta[j] as i64))
            }),
        )
    }

    pub fn d_u(&self) -> Self {
        Polynomial::from_terms(
            self.n,
            self.terms.iter().filter(|(m, _)| m.m > 0).map(|(m, c)| {
                let mut m2 = m.clone();
                m2.m -= 1;
                (m2, c * &ExactComplex::from_integer(m.m as i64))
            }),
        )
    }

    /// Derivative along real coordinate `a` of `(x_1, y_1, …, x_n, y_n, u)`,
    /// via `∂_x = ∂_z + ∂_z̄` and `∂_y = i(∂_z − ∂_z̄)`.
    pub fn d_real(&self, a: usize) -> Self {
        let n = self.n;
        assert!(a <= 2 * n);
        if a == 2 * n {
            return self.d_u();
        }
        let j = a / 2;
        if a % 2 == 0 {
            &self.d_z(j) + &self.d_zbar(j)
        } else {
            (&self.d_z(j) - &self.d_zbar(j)).scale(&ExactComplex::i())
        }
    }

    /// Renames variables: `z_j` of the result is `z_{perm[j]}` of `self`.
    pub fn permute_variables(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let alpha = perm.iter().map(|&p| m.alpha[p]).collect();
                    let beta = perm.iter().map(|&p| m.beta[p]).collect();
                    (Monomial::new(alpha, beta, m.m), c.clone())
                })
                .collect(),
        }
    }

    /// Lifts into a higher ambient dimension, appending unused variables.
    pub fn embed(&self, n: usize) -> Self {
        assert!(n >= self.n);
        Polynomial {
            n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut alpha = m.alpha.clone();
                    let mut beta = m.beta.clone();
                    alpha.resize(n, 0);
                    beta.resize(n, 0);
                    (Monomial::new(alpha, beta, m.m), c.clone())
                })
                .collect(),
        }
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c.clone());
        }
        out
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = Polynomial::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&ExactComplex::from_integer(-1))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            for j in 0..self.n {
                push_power(&mut factors, &format!("z{}", j + 1), m.alpha[j]);
                push_power(&mut factors, &format!("Z{}", j + 1), m.beta[j]);
            }
            push_power(&mut factors, "u", m.m);
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if *c == ExactComplex::one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", c, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn push_power(out: &mut Vec<String>, var: &str, e: u32) {
    match e {
        0 => {}
        1 => out.push(var.to_string()),
        _ => out.push(format!("{var}^{e}")),
    }
}

/// Assignment of polynomials to `z_1..z_n` (and optionally `u`); conjugate
/// variables receive the conjugated expressions.
#[derive(Clone, Debug, PartialEq)]
pub struct Substitution {
    pub z: Vec<Polynomial>,
    pub u: Option<Polynomial>,
}

impl Substitution {
    pub fn identity(n: usize) -> Self {
        Substitution {
            z: (0..n).map(|j| Polynomial::z(n, j)).collect(),
            u: None,
        }
    }

    /// `z_i ↦ Σ_j L[i][j] z_j`.
    pub fn linear(matrix: &[Vec<ExactComplex>]) -> Self {
        let n = matrix.len();
        let z = matrix
            .iter()
            .map(|row| {
                assert_eq!(row.len(), n, "linear map must be square");
                row.iter()
                    .enumerate()
                    .fold(Polynomial::zero(n), |acc, (j, c)| &acc + &Polynomial::z(n, j).scale(c))
            })
            .collect();
        Substitution { z, u: None }
    }

    pub fn target_dim(&self) -> usize {
        self.z.first().map(Polynomial::n).unwrap_or(0)
    }

    /// The map `self ∘ inner`: first `inner`, then `self`, so that
    /// `p.substitute(&self).substitute(&inner) == p.substitute(&self.compose(&inner))`.
    pub fn compose(&self, inner: &Substitution) -> Substitution {
        let u = match (&self.u, &inner.u) {
            (Some(su), _) => Some(su.substitute(inner)),
            (None, Some(iu)) => Some(iu.clone()),
            (None, None) => None,
        };
        Substitution {
            z: self.z.iter().map(|p| p.substitute(inner)).collect(),
            u,
        }
    }
}

impl Polynomial {
    /// Exact expansion of `self(z ↦ map.z, z̄ ↦ conj(map.z), u ↦ map.u)`.
    pub fn substitute(&self, map: &Substitution) -> Polynomial {
        assert_eq!(map.z.len(), self.n, "substitution must assign every z variable");
        let target = map.target_dim();
        let u_image = map.u.clone().unwrap_or_else(|| Polynomial::u(target));
        let conj_images: Vec<Polynomial> = map.z.iter().map(Polynomial::conj).collect();

        let mut holo_cache: Vec<Vec<Polynomial>> = vec![Vec::new(); self.n];
        let mut anti_cache: Vec<Vec<Polynomial>> = vec![Vec::new(); self.n];
        let mut u_cache: Vec<Polynomial> = Vec::new();

        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for j in 0..self.n {
                if m.alpha[j] > 0 {
                    t = &t * cached_pow(&mut holo_cache[j], &map.z[j], m.alpha[j]);
                }
                if m.beta[j] > 0 {
                    t = &t * cached_pow(&mut anti_cache[j], &conj_images[j], m.beta[j]);
                }
            }
            if m.m > 0 {
                t = &t * cached_pow(&mut u_cache, &u_image, m.m);
            }
            for (mm, cc) in t.terms {
                out.add_term(mm, &cc);
            }
        }
        out
    }
}

fn cached_pow<'a>(cache: &'a mut Vec<Polynomial>, base: &Polynomial, e: u32) -> &'a Polynomial {
    if cache.is_empty() {
        cache.push(Polynomial::constant(base.n(), ExactComplex::one()));
    }
    while cache.len() <= e as usize {
        let next = cache.last().expect("non-empty") * base;
        cache.push(next);
    }
    &cache[e as usize]
}

impl Polynomial {
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.total_degree() == 0 && c.re.is_one() && c.im.is_zero())
    }
}
