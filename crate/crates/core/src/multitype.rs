//! Weights, distinguished weights and the multitype computed in fixed
//! coordinates, plus weighted homogeneity of transformations and linear
//! equivalence of weighted homogeneous models.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::poly::{fmt_ratio, ExactComplex, Monomial, Polynomial, Substitution};

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn one() -> BigRational {
    BigRational::one()
}

/// `0 ≤ λ_j ≤ 1/2`, nonincreasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    lambdas: Vec<BigRational>,
}

impl Weight {
    pub fn new(lambdas: Vec<BigRational>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::Domain("a weight needs at least one entry".into()));
        }
        if !in_range(&lambdas) {
            return Err(Error::Domain("weight entries must lie in [0, 1/2]".into()));
        }
        if !is_monotone(&lambdas) {
            return Err(Error::Domain("weight entries must be nonincreasing".into()));
        }
        Ok(Weight { lambdas })
    }

    /// Parses entries such as `1/4`.
    pub fn parse(entries: &[&str]) -> Result<Self> {
        let v = entries
            .iter()
            .map(|s| crate::poly::parse_ratio(s).ok_or_else(|| Error::Domain(format!("bad weight entry '{s}'"))))
            .collect::<Result<Vec<_>>>()?;
        Weight::new(v)
    }

    pub fn lambdas(&self) -> &[BigRational] {
        &self.lambdas
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.lambdas.iter().map(fmt_ratio).collect()
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

fn in_range(l: &[BigRational]) -> bool {
    let h = half();
    l.iter().all(|x| !x.is_negative() && *x <= h)
}

fn is_monotone(l: &[BigRational]) -> bool {
    l.windows(2).all(|w| w[0] >= w[1])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightValidation {
    pub valid: bool,
    pub in_range: bool,
    pub monotone: bool,
    /// For each `k`, nonnegative integers `l` with `l_k > 0` and `Σ l_j λ_j = 1`.
    pub witnesses: Vec<Option<Vec<u32>>>,
}

/// Checks the range, monotonicity and integer feasibility conditions of a weight.
pub fn validate_weight(lambdas: &[BigRational]) -> WeightValidation {
    let in_range = in_range(lambdas);
    let monotone = is_monotone(lambdas);
    let witnesses: Vec<Option<Vec<u32>>> = if in_range {
        (0..lambdas.len()).map(|k| feasibility_witness(lambdas, k)).collect()
    } else {
        vec![None; lambdas.len()]
    };
    WeightValidation {
        valid: in_range && monotone && witnesses.iter().all(Option::is_some),
        in_range,
        monotone,
        witnesses,
    }
}

/// Smallest-support solution of `Σ l_j λ_j = 1`, `l_k > 0`, ties broken by the
/// lexicographically largest vector.
fn feasibility_witness(lambdas: &[BigRational], k: usize) -> Option<Vec<u32>> {
    let n = lambdas.len();
    let bounds: Vec<u32> = lambdas
        .iter()
        .map(|l| if l.is_zero() { 0 } else { (one() / l).ceil().to_integer().to_u32().unwrap_or(u32::MAX) })
        .collect();
    let mut best: Option<Vec<u32>> = None;
    let mut cur = vec![0u32; n];
    // zero columns contribute nothing; l_k = 1 suffices for them
    if lambdas[k].is_zero() {
        cur[k] = 1;
    }
    fn better(a: &[u32], b: &[u32]) -> bool {
        let sa = a.iter().filter(|&&x| x > 0).count();
        let sb = b.iter().filter(|&&x| x > 0).count();
        sa < sb || (sa == sb && a > b)
    }
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        j: usize,
        sum: BigRational,
        lambdas: &[BigRational],
        bounds: &[u32],
        k: usize,
        cur: &mut Vec<u32>,
        best: &mut Option<Vec<u32>>,
    ) {
        if sum > one() {
            return;
        }
        if j == lambdas.len() {
            if sum.is_one() && cur[k] > 0 && best.as_ref().is_none_or(|b| better(cur, b)) {
                *best = Some(cur.clone());
            }
            return;
        }
        if lambdas[j].is_zero() {
            dfs(j + 1, sum, lambdas, bounds, k, cur, best);
            return;
        }
        let start = u32::from(j == k);
        for v in start..=bounds[j] {
            cur[j] = v;
            let s = &sum + &lambdas[j] * BigRational::from_integer(v.into());
            if s > one() {
                break;
            }
            dfs(j + 1, s, lambdas, bounds, k, cur, best);
        }
        cur[j] = 0;
    }
    dfs(0, BigRational::zero(), lambdas, &bounds, k, &mut cur, &mut best);
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistinguishedReport {
    pub distinguished: bool,
    /// Weighted-degree-one component of `Ψ`.
    pub weight1_part: String,
    /// Terms of weighted degree below one, as `term (weight w)`.
    pub failing_terms: Vec<String>,
    /// Pluriharmonic terms of weight below one; a holomorphic change of `w` can remove them.
    pub absorbable_hints: Vec<String>,
    pub reason: Option<String>,
    #[serde(skip)]
    pub weight1: Polynomial,
}

fn term_string(n: usize, m: &Monomial, c: &ExactComplex) -> String {
    Polynomial::monomial(n, m.clone(), c.clone()).to_string()
}

/// Decides in the given coordinates whether `Λ` is distinguished for `Ψ`:
/// every term has weighted degree ≥ 1 and the degree-one part is `u`-free and
/// not pluriharmonic.
pub fn is_distinguished(weight: &Weight, psi: &Polynomial) -> DistinguishedReport {
    let n = psi.n();
    if weight.n() != n {
        return DistinguishedReport {
            distinguished: false,
            weight1_part: "0".into(),
            failing_terms: Vec::new(),
            absorbable_hints: Vec::new(),
            reason: Some(format!("weight has {} entries but Ψ has n = {n}", weight.n())),
            weight1: Polynomial::zero(n),
        };
    }
    let l = weight.lambdas();
    let mut failing = Vec::new();
    let mut hints = Vec::new();
    let mut w1 = Vec::new();
    for (m, c) in psi.terms() {
        let w = Polynomial::weighted_degree(m, l);
        match w.cmp(&one()) {
            Ordering::Less => {
                let s = format!("{} (weight {})", term_string(n, m, c), fmt_ratio(&w));
                if m.m == 0 && !m.is_mixed() {
                    hints.push(s.clone());
                }
                failing.push(s);
            }
            Ordering::Equal => w1.push((m.clone(), c.clone())),
            Ordering::Greater => {}
        }
    }
    let weight1 = Polynomial::from_terms(n, w1);
    let reason = if !failing.is_empty() {
        Some("terms of weighted degree below one".to_string())
    } else if weight1.is_zero() {
        Some("weighted-degree-one part is empty".to_string())
    } else if weight1.has_u() {
        Some("weighted-degree-one part depends on u".to_string())
    } else if weight1.terms().all(|(m, _)| !m.is_mixed()) {
        Some("weighted-degree-one part is pluriharmonic".to_string())
    } else {
        None
    };
    DistinguishedReport {
        distinguished: reason.is_none(),
        weight1_part: weight1.to_string(),
        failing_terms: failing,
        absorbable_hints: hints,
        reason,
        weight1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    FixedCoordinates,
    PermutationSearched,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultitypeCertificate {
    pub witnesses: Vec<Option<Vec<u32>>>,
    pub weight1_part: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultitypeResult {
    pub weight: Weight,
    /// `1/λ_j`, or `"inf"` for `λ_j = 0`.
    pub multitype: Vec<String>,
    pub scope: Scope,
    /// `z_j` of the analysed coordinates is `z_{permutation[j]}` of the input.
    pub permutation: Vec<usize>,
    pub certificate: MultitypeCertificate,
}

impl MultitypeResult {
    /// `Some(1/λ_j)` for positive entries, `None` for infinite ones.
    pub fn entries(&self) -> Vec<Option<BigRational>> {
        self.weight
            .lambdas()
            .iter()
            .map(|l| (!l.is_zero()).then(|| l.recip()))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct MultitypeOptions {
    pub permute: bool,
    pub max_denominator: u64,
}

impl Default for MultitypeOptions {
    fn default() -> Self {
        MultitypeOptions {
            permute: false,
            max_denominator: 1000,
        }
    }
}

/// Hyperplane `coeffs · λ = rhs`.
#[derive(Clone, Debug)]
struct Hyperplane {
    coeffs: Vec<BigRational>,
    rhs: BigRational,
}

fn arrangement(psi: &Polynomial) -> Vec<Hyperplane> {
    let n = psi.n();
    let mut hs = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (m, _) in psi.terms() {
        if m.m == 0 {
            let s = m.exponent_sums();
            if s.iter().any(|&x| x > 0) && seen.insert(s.clone()) {
                hs.push(Hyperplane {
                    coeffs: s.iter().map(|&x| BigRational::from_integer(x.into())).collect(),
                    rhs: one(),
                });
            }
        }
    }
    let unit = |j: usize| -> Vec<BigRational> {
        (0..n).map(|i| if i == j { one() } else { BigRational::zero() }).collect()
    };
    for j in 0..n {
        hs.push(Hyperplane {
            coeffs: unit(j),
            rhs: BigRational::zero(),
        });
        hs.push(Hyperplane {
            coeffs: unit(j),
            rhs: half(),
        });
        if j + 1 < n {
            let mut c = unit(j);
            c[j + 1] = -one();
            hs.push(Hyperplane {
                coeffs: c,
                rhs: BigRational::zero(),
            });
        }
    }
    hs
}

/// Exact Gaussian elimination; `None` when singular.
fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &p;
                for c in col..n {
                    let v = &f * &a[col][c];
                    a[r][c] -= v;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

fn denominators_within(l: &[BigRational], bound: u64) -> bool {
    let b = BigInt::from(bound);
    l.iter().all(|x| *x.denom() <= b)
}

/// Lexicographically smallest valid distinguished weight in fixed coordinates.
///
/// The minimum over the polyhedron cut out by the term inequalities, the range
/// and monotonicity, intersected with the hyperplane of some mixed term, is a
/// vertex of the hyperplane arrangement; every vertex is tested exactly.
fn infer_fixed(psi: &Polynomial, max_denominator: u64) -> Option<(Weight, DistinguishedReport, WeightValidation)> {
    let n = psi.n();
    let hs = arrangement(psi);
    combinations(hs.len(), n)
        .into_par_iter()
        .filter_map(|subset| {
            let a = subset.iter().map(|&i| hs[i].coeffs.clone()).collect();
            let b = subset.iter().map(|&i| hs[i].rhs.clone()).collect();
            let l = solve_exact(a, b)?;
            if !in_range(&l) || !is_monotone(&l) || !denominators_within(&l, max_denominator) {
                return None;
            }
            let w = Weight { lambdas: l };
            let rep = is_distinguished(&w, psi);
            if !rep.distinguished {
                return None;
            }
            let val = validate_weight(w.lambdas());
            val.valid.then_some((w, rep, val))
        })
        .min_by(|x, y| x.0.cmp(&y.0))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(i: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == p.len() {
            out.push(p.clone());
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            rec(i + 1, p, out);
            p.swap(i, j);
        }
    }
    rec(0, &mut p, &mut out);
    out.sort();
    out
}

/// Multitype in the given coordinates, optionally minimized over axis permutations.
pub fn infer_multitype(psi: &Polynomial, opts: &MultitypeOptions) -> Result<MultitypeResult> {
    if !psi.is_real_valued() {
        return Err(Error::precondition("defining function must be real valued", "Ψ is not real valued"));
    }
    if !psi.terms().any(|(m, _)| m.m == 0 && m.is_mixed()) {
        return Err(Error::precondition(
            "Ψ needs a mixed u-free term",
            "no mixed z–z̄ term without u",
        ));
    }
    let perms = if opts.permute {
        permutations(psi.n())
    } else {
        vec![(0..psi.n()).collect()]
    };
    let best = perms
        .into_iter()
        .filter_map(|perm| {
            let q = psi.permute_variables(&perm);
            infer_fixed(&q, opts.max_denominator).map(|r| (r, perm))
        })
        .min_by(|x, y| x.0 .0.cmp(&y.0 .0).then_with(|| x.1.cmp(&y.1)));
    let ((weight, rep, val), permutation) = best.ok_or_else(|| {
        Error::Domain(format!(
            "no distinguished weight with denominator ≤ {}",
            opts.max_denominator
        ))
    })?;
    let multitype = weight
        .lambdas()
        .iter()
        .map(|l| if l.is_zero() { "inf".to_string() } else { fmt_ratio(&l.recip()) })
        .collect();
    Ok(MultitypeResult {
        weight,
        multitype,
        scope: if opts.permute {
            Scope::PermutationSearched
        } else {
            Scope::FixedCoordinates
        },
        permutation,
        certificate: MultitypeCertificate {
            witnesses: val.witnesses,
            weight1_part: rep.weight1_part,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HomogeneityClass {
    Homogeneous,
    Subhomogeneous,
    Superhomogeneous,
    None,
}

/// Compares each monomial weight of `f_i` with `λ_i` and of `g` with one; the
/// `u` variable stands for `w` and carries weight one.
pub fn classify_transformation(f: &[Polynomial], g: &Polynomial, weight: &Weight) -> Result<HomogeneityClass> {
    if f.len() != weight.n() {
        return Err(Error::Domain(format!(
            "transformation has {} components, weight has {}",
            f.len(),
            weight.n()
        )));
    }
    let l = weight.lambdas();
    let mut le = true;
    let mut ge = true;
    let targets = f.iter().zip(l.iter().cloned()).chain(std::iter::once((g, one())));
    for (p, mu) in targets {
        if p.n() != weight.n() {
            return Err(Error::Domain("component dimension does not match the weight".into()));
        }
        for (m, _) in p.terms() {
            match Polynomial::weighted_degree(m, l).cmp(&mu) {
                Ordering::Less => ge = false,
                Ordering::Greater => le = false,
                Ordering::Equal => {}
            }
        }
    }
    Ok(match (le, ge) {
        (true, true) => HomogeneityClass::Homogeneous,
        (true, false) => HomogeneityClass::Subhomogeneous,
        (false, true) => HomogeneityClass::Superhomogeneous,
        (false, false) => HomogeneityClass::None,
    })
}

/// `z ↦ Lz`, `w ↦ cw` with `c·P(Lz) = P̃(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearEquivalence {
    pub l: Vec<Vec<ExactComplex>>,
    pub c: BigRational,
}

impl LinearEquivalence {
    pub fn verify(&self, p: &Polynomial, target: &Polynomial) -> bool {
        p.substitute(&Substitution::linear(&self.l))
            .scale(&ExactComplex::real(self.c.clone()))
            == *target
    }
}

fn require_weight_one(p: &Polynomial, weight: &Weight, name: &str) -> Result<()> {
    if p.n() != weight.n() {
        return Err(Error::Domain(format!("{name} has n = {}, weight has {}", p.n(), weight.n())));
    }
    let ok = !p.is_zero()
        && !p.has_u()
        && p.terms().all(|(m, _)| Polynomial::weighted_degree(m, weight.lambdas()).is_one());
    if !ok {
        return Err(Error::precondition(
            "model must be weighted homogeneous of weighted degree one",
            format!("{name} not Λ-homogeneous of weight one"),
        ));
    }
    if !p.is_real_valued() {
        return Err(Error::precondition("model must be real valued", format!("{name} is not real valued")));
    }
    if p.terms().all(|(m, _)| !m.is_mixed()) {
        return Err(Error::precondition("model must not be pluriharmonic", format!("{name} is pluriharmonic")));
    }
    Ok(())
}

/// Continued-fraction approximation `p/q` with `q ≤ max_den` within `tol`.
fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some(BigRational::new(h1.into(), k1.into()));
        }
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    ((x - h1 as f64 / k1 as f64).abs() <= tol && k1 > 0).then(|| BigRational::new(h1.into(), k1.into()))
}

/// Deterministic sample points in the unit polydisc.
fn sample_points(n: usize, count: usize) -> Vec<Vec<Complex64>> {
    (0..count)
        .map(|s| {
            (0..n)
                .map(|j| {
                    let t = (s * n + j + 1) as f64;
                    Complex64::new((t * 0.754_877_666).fract() - 0.5, (t * 0.569_840_291).fract() - 0.5) * 1.6
                })
                .collect()
        })
        .collect()
}

/// Variables with equal weight form blocks that a weight-preserving linear map may mix.
fn weight_blocks(weight: &Weight) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (j, l) in weight.lambdas().iter().enumerate() {
        match blocks.last_mut() {
            Some(b) if weight.lambdas()[b[0]] == *l => b.push(j),
            _ => blocks.push(vec![j]),
        }
    }
    blocks
}

#[derive(Clone, Copy)]
enum ScaleMode {
    Fixed(f64),
    Free,
}

/// Parameter layout: the free entries of `L` (re, im pairs), then `c` when free.
struct Search<'a> {
    n: usize,
    p: &'a Polynomial,
    target_vals: Vec<Complex64>,
    samples: Vec<Vec<Complex64>>,
    slots: Vec<(usize, usize)>,
    mode: ScaleMode,
}

impl Search<'_> {
    fn unpack(&self, x: &[f64]) -> (Vec<Vec<Complex64>>, f64) {
        let mut l = vec![vec![Complex64::default(); self.n]; self.n];
        for (s, &(i, j)) in self.slots.iter().enumerate() {
            l[i][j] = Complex64::new(x[2 * s], x[2 * s + 1]);
        }
        let c = match self.mode {
            ScaleMode::Fixed(c) => c,
            ScaleMode::Free => x[2 * self.slots.len()],
        };
        (l, c)
    }

    fn residual(&self, x: &[f64]) -> f64 {
        let (l, c) = self.unpack(x);
        self.samples
            .iter()
            .zip(&self.target_vals)
            .map(|(z, t)| {
                let lz: Vec<Complex64> = l.iter().map(|row| row.iter().zip(z).map(|(a, b)| a * b).sum()).collect();
                (self.p.evaluate(&lz, 0.0) * c - t).norm_sqr()
            })
            .sum()
    }

    fn exact_candidates(&self, x: &[f64]) -> Vec<LinearEquivalence> {
        let (l, c) = self.unpack(x);
        let mut out = Vec::new();
        let Some(c_exact) = rationalize(c, 1000, 1e-6) else { return out };
        if c_exact.is_zero() {
            return out;
        }
        // the raw matrix, and the matrix with each row rotated so its leading entry is positive
        for rotate in [false, true] {
            let mut rows = Vec::with_capacity(self.n);
            let mut ok = true;
            for row in &l {
                let phase = if rotate {
                    row.iter()
                        .find(|v| v.norm() > 1e-6)
                        .map(|v| v.conj() / v.norm())
                        .unwrap_or(Complex64::new(1.0, 0.0))
                } else {
                    Complex64::new(1.0, 0.0)
                };
                let mut exact_row = Vec::with_capacity(self.n);
                for v in row {
                    let v = v * phase;
                    match (rationalize(v.re, 1000, 1e-6), rationalize(v.im, 1000, 1e-6)) {
                        (Some(a), Some(b)) => exact_row.push(ExactComplex::new(a, b)),
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    break;
                }
                rows.push(exact_row);
            }
            if ok {
                out.push(LinearEquivalence {
                    l: rows,
                    c: c_exact.clone(),
                });
            }
        }
        out
    }
}

/// Searches for `z ↦ Lz`, `w ↦ cw` (`c` real, nonzero) with `c·P(Lz) = P̃(z)`.
///
/// `L` is block diagonal over groups of equal weight. Diagonal and
/// block-permutation shapes are tried first, then full blocks; every numeric
/// candidate is rationalized and accepted only after exact verification.
pub fn solve_linear_model_equivalence(
    p: &Polynomial,
    target: &Polynomial,
    weight: &Weight,
) -> Result<Option<LinearEquivalence>> {
    require_weight_one(p, weight, "P")?;
    require_weight_one(target, weight, "P̃")?;
    let n = p.n();
    let identity: Vec<Vec<ExactComplex>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { ExactComplex::one() } else { ExactComplex::zero() }).collect())
        .collect();
    for c in [1i64, -1] {
        let cand = LinearEquivalence {
            l: identity.clone(),
            c: BigRational::from_integer(c.into()),
        };
        if cand.verify(p, target) {
            return Ok(Some(cand));
        }
    }

    let samples = sample_points(n, 6 * n + 12);
    let target_vals: Vec<Complex64> = samples.iter().map(|z| target.evaluate(z, 0.0)).collect();
    let blocks = weight_blocks(weight);
    let opts = NelderMeadOptions {
        max_iterations: 4000,
        tolerance: 1e-22,
        initial_step: 0.25,
    };
    let modes = [ScaleMode::Fixed(1.0), ScaleMode::Fixed(-1.0), ScaleMode::Free];

    // diagonal times a permutation inside each block
    let block_perms: Vec<Vec<Vec<usize>>> = blocks
        .iter()
        .map(|b| permutations(b.len()).into_iter().map(|p| p.iter().map(|&i| b[i]).collect()).collect())
        .collect();
    let mut shapes: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for (b, perms) in blocks.iter().zip(&block_perms) {
        let mut next = Vec::new();
        for s in &shapes {
            for perm in perms {
                let mut s2 = s.clone();
                s2.extend(b.iter().zip(perm).map(|(&i, &j)| (i, j)));
                next.push(s2);
            }
        }
        shapes = next;
    }
    let full: Vec<(usize, usize)> = blocks
        .iter()
        .flat_map(|b| b.iter().flat_map(move |&i| b.iter().map(move |&j| (i, j))))
        .collect();
    if full.len() > n {
        shapes.push(full);
    }

    let starts = [1.0, 0.5, 2.0, 0.8];
    for slots in &shapes {
        for mode in modes {
            let search = Search {
                n,
                p,
                target_vals: target_vals.clone(),
                samples: samples.clone(),
                slots: slots.clone(),
                mode,
            };
            for (si, &s0) in starts.iter().enumerate() {
                let mut x0 = Vec::new();
                for (k, &(i, j)) in slots.iter().enumerate() {
                    let diag_like = slots.iter().filter(|(a, _)| *a == i).count() == 1 || i == j;
                    let off = 0.1 * ((k + si) % 3) as f64;
                    x0.push(if diag_like { s0 } else { off });
                    x0.push(0.05 * si as f64);
                }
                if let ScaleMode::Free = mode {
                    x0.push(1.0);
                }
                let mut r = nelder_mead(|x| search.residual(x), &x0, &opts);
                // restart from the best point to escape a collapsed simplex
                for _ in 0..3 {
                    r = nelder_mead(|x| search.residual(x), &r.x, &opts);
                }
                if r.value > 1e-10 {
                    continue;
                }
                for cand in search.exact_candidates(&r.x) {
                    if cand.verify(p, target) {
                        return Ok(Some(cand));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_defining_equation;

    fn r(s: &str) -> BigRational {
        crate::poly::parse_ratio(s).unwrap()
    }

    fn w(entries: &[&str]) -> Weight {
        Weight::parse(entries).unwrap()
    }

    #[test]
    fn validation_examples() {
        let v = validate_weight(&[r("1/2"), r("1/2")]);
        assert!(v.valid);
        assert_eq!(v.witnesses, vec![Some(vec![2, 0]), Some(vec![0, 2])]);

        let v = validate_weight(&[r("1/2"), r("1/3")]);
        assert!(v.valid);
        assert_eq!(v.witnesses, vec![Some(vec![2, 0]), Some(vec![0, 3])]);

        let v = validate_weight(&[r("1/2"), r("2/5")]);
        assert!(!v.valid);
        assert_eq!(v.witnesses[1], None);

        assert!(!validate_weight(&[r("1/3"), r("1/2")]).valid);
        assert!(!validate_weight(&[r("3/4")]).valid);
        let v = validate_weight(&[r("1/2"), r("0")]);
        assert!(v.valid);
        assert_eq!(v.witnesses[1], Some(vec![2, 1]));
    }

    #[test]
    fn distinguished_examples() {
        let psi = parse_defining_equation("|z1|^4 + |z2|^6", 2).unwrap();
        let rep = is_distinguished(&w(&["1/4", "1/6"]), &psi);
        assert!(rep.distinguished);
        assert_eq!(rep.weight1, psi);

        let rep = is_distinguished(&w(&["1/2", "1/6"]), &psi);
        assert!(rep.distinguished);
        assert_eq!(rep.weight1, parse_defining_equation("|z2|^6", 2).unwrap());

        let psi = parse_defining_equation("|z2|^6", 2).unwrap();
        assert!(!is_distinguished(&w(&["1/4", "1/4"]), &psi).distinguished);

        let psi = parse_defining_equation("Re(z1^2) + |z1|^4", 1).unwrap();
        let rep = is_distinguished(&w(&["1/4"]), &psi);
        assert!(!rep.distinguished);
        assert_eq!(rep.absorbable_hints.len(), 2);
    }

    #[test]
    fn multitype_examples() {
        let opts = MultitypeOptions::default();
        let m = infer_multitype(&parse_defining_equation("|z1|^4 + |z2|^6", 2).unwrap(), &opts).unwrap();
        assert_eq!(m.weight, w(&["1/4", "1/6"]));
        assert_eq!(m.multitype, vec!["4", "6"]);

        let m = infer_multitype(
            &parse_defining_equation("|z1|^4 + |z2|^4 + |z1|^2*|z2|^2", 2).unwrap(),
            &opts,
        )
        .unwrap();
        assert_eq!(m.multitype, vec!["4", "4"]);

        let m = infer_multitype(&parse_defining_equation("|z1|^2", 2).unwrap(), &opts).unwrap();
        assert_eq!(m.weight, w(&["1/2", "0"]));
        assert_eq!(m.multitype, vec!["2", "inf"]);
    }

    #[test]
    fn permutation_search_lowers_weight() {
        let psi = parse_defining_equation("|z1|^6 + |z2|^4", 2).unwrap();
        let fixed = infer_multitype(&psi, &MultitypeOptions::default()).unwrap();
        assert_eq!(fixed.weight, w(&["1/4", "1/4"]));
        let permuted = infer_multitype(
            &psi,
            &MultitypeOptions {
                permute: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(permuted.weight, w(&["1/4", "1/6"]));
        assert_eq!(permuted.permutation, vec![1, 0]);
        assert_eq!(permuted.scope, Scope::PermutationSearched);
    }

    #[test]
    fn multitype_denominator_bound() {
        let psi = parse_defining_equation("|z1|^14", 1).unwrap();
        let err = infer_multitype(
            &psi,
            &MultitypeOptions {
                permute: false,
                max_denominator: 12,
            },
        )
        .unwrap_err();
        assert!(err.to_string().contains("denominator"));
    }

    #[test]
    fn transformation_classes() {
        let n = 2;
        let z = |j| Polynomial::z(n, j);
        let wt = w(&["1/4", "1/6"]);
        let g = Polynomial::u(n);
        assert_eq!(
            classify_transformation(&[z(0), z(1)], &g, &wt).unwrap(),
            HomogeneityClass::Homogeneous
        );
        assert_eq!(
            classify_transformation(&[&z(0) + &z(1), z(1)], &g, &wt).unwrap(),
            HomogeneityClass::Subhomogeneous
        );
        assert_eq!(
            classify_transformation(&[&z(0) + &(&z(0) * &g), z(1)], &g, &wt).unwrap(),
            HomogeneityClass::Superhomogeneous
        );
        assert_eq!(
            classify_transformation(&[&(&z(0) + &z(1)) + &(&z(0) * &g), z(1)], &g, &wt).unwrap(),
            HomogeneityClass::None
        );
    }

    #[test]
    fn linear_equivalence_examples() {
        let wt = w(&["1/4", "1/4"]);
        let p = parse_defining_equation("|z1|^4 + |z2|^4", 2).unwrap();
        let q = parse_defining_equation("16*|z1|^4 + |z2|^4", 2).unwrap();
        let eq = solve_linear_model_equivalence(&p, &q, &wt).unwrap().unwrap();
        assert!(eq.verify(&p, &q));
        assert_eq!(eq.l[0][0].norm_sqr(), r("4"));
        assert_eq!(eq.l[1][1].norm_sqr(), r("1"));

        let same = solve_linear_model_equivalence(&p, &p, &wt).unwrap().unwrap();
        assert_eq!(same.l[0][0], ExactComplex::one());
        assert_eq!(same.c, r("1"));

        let bad = parse_defining_equation("|z1|^4 + |z2|^6", 2).unwrap();
        let err = solve_linear_model_equivalence(&p, &bad, &wt).unwrap_err();
        assert!(err.to_string().contains("not Λ-homogeneous of weight one"));
    }

    #[test]
    fn linear_equivalence_swap_and_sign() {
        let wt = w(&["1/4", "1/4"]);
        let p = parse_defining_equation("|z1|^4 + 4*|z2|^4", 2).unwrap();
        let q = parse_defining_equation("-4*|z1|^4 - |z2|^4", 2).unwrap();
        let eq = solve_linear_model_equivalence(&p, &q, &wt).unwrap().unwrap();
        assert!(eq.verify(&p, &q));
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.75, 100, 1e-9), Some(r("3/4")));
        assert_eq!(rationalize(-2.0, 100, 1e-9), Some(r("-2")));
        assert_eq!(rationalize(std::f64::consts::PI, 100, 1e-9), None);
    }
}
