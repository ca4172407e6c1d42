//! Invariants of hypersurfaces `v = P(z, z̄) + F(z, z̄, u)` in ℂ² at a point of
//! finite type `k`: the essential type `e`, the rotation order `d`, the
//! normalization of the leading term, the model class, normal-form conditions
//! and the classification of the stability group.
//!
//! The leading polynomial is written `P = Σ_{j=e}^{k−e} a_j z^j z̄^{k−j}`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{fmt_ratio, ratio_to_f64, ExactComplex, Monomial, Polynomial};

/// Float tolerance for phase comparisons that cannot be decided exactly.
pub const PHASE_TOL: f64 = 1e-12;

const NORMAL_COORDS: &str = "requires normal coordinates";
const PRE_NORMALIZED: &str = "not in pre-normalized shape";

/// `Ψ = P + F` with `P` the lowest-degree mixed homogeneous part.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingData {
    pub k: u32,
    pub p: Polynomial,
    pub f: Polynomial,
}

impl LeadingData {
    /// `a_j` for `j = 0..=k`.
    pub fn coefficients(&self) -> Vec<ExactComplex> {
        leading_coefficients(&self.p, self.k)
    }

    /// Largest total degree present in `Ψ`; the analysis is only as good as this truncation.
    pub fn truncation_degree(&self) -> u32 {
        self.p
            .max_total_degree()
            .into_iter()
            .chain(self.f.max_total_degree())
            .max()
            .unwrap_or(0)
    }
}

fn leading_coefficients(p: &Polynomial, k: u32) -> Vec<ExactComplex> {
    (0..=k)
        .map(|j| p.coeff(&Monomial::new(vec![j], vec![k - j], 0)))
        .collect()
}

fn require_planar(p: &Polynomial) -> Result<()> {
    if p.n() != 1 {
        return Err(Error::precondition(
            "planar invariants need a hypersurface in C^2 (n = 1)",
            format!("got n = {}", p.n()),
        ));
    }
    Ok(())
}

/// Splits `Ψ` into its leading mixed part of degree `k` and the remainder.
pub fn extract_leading(psi: &Polynomial) -> Result<LeadingData> {
    require_planar(psi)?;
    if !psi.is_real_valued() {
        return Err(Error::precondition("defining function must be real valued", "Ψ is not real valued"));
    }
    let k = psi
        .terms()
        .filter(|(m, _)| m.m == 0 && m.is_mixed())
        .map(|(m, _)| m.z_degree())
        .min()
        .ok_or_else(|| {
            Error::precondition(
                "point must be of finite type",
                "no mixed u-free term z^j z̄^l in the given truncation",
            )
        })?;

    let mut bad = Vec::new();
    for (m, _) in psi.terms() {
        if m.m == 0 && !m.is_mixed() && m.z_degree() <= k {
            bad.push(format!("harmonic term {} of degree {} ≤ {k}", term_label(m), m.z_degree()));
        }
        if m.m > 0 && m.z_degree() == 0 && m.m < k {
            bad.push(format!("pure u term u^{} of degree < {k}", m.m));
        }
    }
    if !bad.is_empty() {
        return Err(Error::precondition(PRE_NORMALIZED, bad.join("; ")));
    }

    let p = psi.filter(|m, _| m.m == 0 && m.z_degree() == k);
    let f = psi - &p;
    Ok(LeadingData { k, p, f })
}

fn term_label(m: &Monomial) -> String {
    format!("({},{},{})", m.alpha[0], m.beta[0], m.m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanarInvariants {
    pub k: u32,
    pub e: u32,
    pub d: Option<u32>,
    pub m_indices: Vec<u32>,
    pub q_chain: Vec<u32>,
}

impl PlanarInvariants {
    pub fn is_circular(&self) -> bool {
        2 * self.e == self.k
    }

    /// `g_i = gcd(k − 2m_0, …, k − 2m_i)`.
    fn gcd_chain(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.m_indices.len());
        let mut g = 0u32;
        for &m in &self.m_indices {
            g = g.gcd(&(self.k - 2 * m));
            out.push(g);
        }
        out
    }
}

fn invariants_from_pattern(k: u32, nonzero: impl Fn(u32) -> bool) -> Result<PlanarInvariants> {
    let e = (1..k).find(|&j| nonzero(j)).ok_or_else(|| {
        Error::precondition("leading polynomial must be nonzero and mixed", "no a_j ≠ 0 with 1 ≤ j ≤ k−1")
    })?;
    if 2 * e > k {
        return Err(Error::precondition(
            "leading polynomial must be real valued",
            "a_e ≠ 0 only above k/2",
        ));
    }
    let m_indices: Vec<u32> = (e..).take_while(|&j| 2 * j < k).filter(|&j| nonzero(j)).collect();
    let mut inv = PlanarInvariants {
        k,
        e,
        d: None,
        m_indices,
        q_chain: Vec::new(),
    };
    if !inv.is_circular() {
        let g = inv.gcd_chain();
        inv.d = g.last().copied();
        inv.q_chain = g.windows(2).map(|w| w[0] / w[1]).collect();
    }
    Ok(inv)
}

fn leading_degree(p: &Polynomial) -> Result<u32> {
    require_planar(p)?;
    let k = p.homogeneous_degree().ok_or_else(|| {
        Error::precondition(
            "leading polynomial must be homogeneous in (z, z̄) without u",
            "terms of several degrees or u-dependence",
        )
    })?;
    if p.terms().any(|(m, _)| !m.is_mixed()) {
        return Err(Error::precondition("leading polynomial has no harmonic terms", "harmonic term present"));
    }
    if !p.is_real_valued() {
        return Err(Error::precondition("leading polynomial must be real valued", "not real valued"));
    }
    Ok(k)
}

/// `e`, `m_i`, `d` and the `q_i` chain of a leading polynomial.
pub fn planar_invariants(p: &Polynomial) -> Result<PlanarInvariants> {
    let k = leading_degree(p)?;
    let a = leading_coefficients(p, k);
    invariants_from_pattern(k, |j| !a[j as usize].is_zero())
}

/// An angle with an exact value in units of π when one is known.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Angle {
    #[serde(serialize_with = "ser_opt_r64")]
    pub over_pi: Option<Rational64>,
    pub radians: f64,
}

fn ser_opt_r64<S: serde::Serializer>(v: &Option<Rational64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) if *r.denom() == 1 => s.serialize_some(&r.numer().to_string()),
        Some(r) => s.serialize_some(&format!("{}/{}", r.numer(), r.denom())),
        None => s.serialize_none(),
    }
}

impl Angle {
    pub fn zero() -> Self {
        Angle {
            over_pi: Some(Rational64::zero()),
            radians: 0.0,
        }
    }

    fn exact(r: Rational64) -> Self {
        let r = reduce_mod2(r);
        Angle {
            over_pi: Some(r),
            radians: PI * (*r.numer() as f64) / (*r.denom() as f64),
        }
    }

    fn approx(rad: f64) -> Self {
        Angle {
            over_pi: None,
            radians: rad.rem_euclid(2.0 * PI),
        }
    }

    fn scaled(&self, by: i64) -> Angle {
        match self.over_pi {
            Some(r) => Angle::exact(r * by),
            None => Angle::approx(self.radians * by as f64),
        }
    }

    fn plus(&self, other: &Angle) -> Angle {
        match (self.over_pi, other.over_pi) {
            (Some(a), Some(b)) => Angle::exact(a + b),
            _ => Angle::approx(self.radians + other.radians),
        }
    }

    fn plus_pi_multiple(&self, r: Rational64) -> Angle {
        self.plus(&Angle::exact(r))
    }

    /// `e^{iθ}` exactly, when it is a power of `i`.
    fn exact_unit(&self) -> Option<ExactComplex> {
        let r = self.over_pi?;
        let twice = r * 2;
        twice.is_integer().then(|| ExactComplex::i_pow(*twice.numer()))
    }
}

fn reduce_mod2(r: Rational64) -> Rational64 {
    let two = Rational64::from_integer(2);
    let q = (r / two).floor();
    r - q * two
}

/// `arg(c)/π` in `[0, 2)` when `c` lies on an axis or a diagonal; for Gaussian
/// rationals these are the only arguments that are rational multiples of π.
fn exact_arg(c: &ExactComplex) -> Option<Rational64> {
    let (re, im) = (&c.re, &c.im);
    let r = |n: i64, d: i64| Some(Rational64::new(n, d));
    if c.is_zero() {
        return None;
    }
    if im.is_zero() {
        return if re.is_positive() { r(0, 1) } else { r(1, 1) };
    }
    if re.is_zero() {
        return if im.is_positive() { r(1, 2) } else { r(3, 2) };
    }
    if re.abs() == im.abs() {
        return match (re.is_positive(), im.is_positive()) {
            (true, true) => r(1, 4),
            (false, true) => r(3, 4),
            (false, false) => r(5, 4),
            (true, false) => r(7, 4),
        };
    }
    None
}

fn arg_angle(c: &ExactComplex) -> Angle {
    match exact_arg(c) {
        Some(r) => Angle::exact(r),
        None => Angle::approx(c.to_complex64().arg()),
    }
}

fn float_arg_angle(c: Complex64) -> Angle {
    Angle::approx(c.arg())
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// Sector index `⌊φ / (2π/q)⌋` of a phase, snapping to sector boundaries within [`PHASE_TOL`].
fn sector_of(phase: &Angle, q: u32) -> u32 {
    match phase.over_pi {
        Some(r) => {
            let width = Rational64::new(2, q as i64);
            (reduce_mod2(r) / width).floor().to_integer() as u32 % q
        }
        None => {
            let width = 2.0 * PI / q as f64;
            let x = phase.radians.rem_euclid(2.0 * PI) / width;
            let nearest = x.round();
            let s = if (x - nearest).abs() * width <= PHASE_TOL {
                nearest
            } else {
                x.floor()
            };
            (s as i64).rem_euclid(q as i64) as u32
        }
    }
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

/// Result of bringing the leading polynomial to the normalized form
/// `a_e = 1`, `arg a_{m_{i+1}} ∈ [0, 2π/q_i)`.
///
/// The normalized coefficients are `a_j* = scale · a_j · e^{i(2j−k)θ}`; they are
/// always available in floating point and, when the rotation is a power of `i`
/// and the scale is rational, also exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedLeading {
    pub k: u32,
    pub invariants: PlanarInvariants,
    pub coefficients: Vec<Complex64>,
    pub exact: Option<Polynomial>,
    pub scale: f64,
    pub scale_exact: Option<BigRational>,
    pub theta: Angle,
}

impl NormalizedLeading {
    /// Phase of `a_j*` (exact in units of π when known).
    pub fn phase(&self, j: u32) -> Angle {
        if let Some(p) = &self.exact {
            let c = p.coeff(&Monomial::new(vec![j], vec![self.k - j], 0));
            return arg_angle(&c);
        }
        float_arg_angle(self.coefficients[j as usize])
    }

    /// Checks `a_e* = 1` and every `arg a_{m_{i+1}}* ∈ [0, 2π/q_i)`.
    pub fn satisfies_conditions(&self) -> bool {
        let inv = &self.invariants;
        let e = inv.e as usize;
        let ae_ok = match &self.exact {
            Some(p) => p.coeff(&Monomial::new(vec![inv.e], vec![self.k - inv.e], 0)) == ExactComplex::one(),
            None => (self.coefficients[e] - Complex64::new(1.0, 0.0)).norm() <= PHASE_TOL,
        };
        ae_ok
            && inv
                .q_chain
                .iter()
                .zip(inv.m_indices.iter().skip(1))
                .all(|(&q, &m)| sector_of(&self.phase(m), q) == 0)
    }
}

/// Normalizes an exact leading polynomial.
pub fn normalize_leading(p: &Polynomial) -> Result<NormalizedLeading> {
    let k = leading_degree(p)?;
    let a = leading_coefficients(p, k);
    let inv = invariants_from_pattern(k, |j| !a[j as usize].is_zero())?;
    let phases: Vec<Angle> = a.iter().map(arg_angle).collect();
    let floats: Vec<Complex64> = a.iter().map(ExactComplex::to_complex64).collect();

    let e = inv.e as usize;
    let (scale, scale_exact) = if inv.is_circular() {
        // a_{k/2} is real; w ↦ cw with c = 1/a_{k/2} (possibly negative).
        let s = a[e].re.recip();
        (ratio_to_f64(&s), Some(s))
    } else {
        let n2 = a[e].norm_sqr();
        match rational_sqrt(&n2) {
            Some(r) => {
                let s = r.recip();
                (ratio_to_f64(&s), Some(s))
            }
            None => (1.0 / ratio_to_f64(&n2).sqrt(), None),
        }
    };
    let theta = rotation_angle(&inv, &phases);

    let coefficients: Vec<Complex64> = floats
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let rot = theta.scaled(2 * j as i64 - k as i64);
            c * scale * Complex64::from_polar(1.0, rot.radians)
        })
        .collect();

    let exact = scale_exact.as_ref().and_then(|s| {
        let mut terms = Vec::new();
        for (j, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let unit = theta.scaled(2 * j as i64 - k as i64).exact_unit()?;
            terms.push((
                Monomial::new(vec![j as u32], vec![k - j as u32], 0),
                (c * &unit).scale(s),
            ));
        }
        Some(Polynomial::from_terms(1, terms))
    });

    Ok(NormalizedLeading {
        k,
        invariants: inv,
        coefficients,
        exact,
        scale,
        scale_exact,
        theta,
    })
}

/// Normalizes floating-point leading coefficients `a_0..a_k` (zero entries are
/// treated as absent).
pub fn normalize_coefficients(k: u32, a: &[Complex64]) -> Result<NormalizedLeading> {
    if a.len() != k as usize + 1 {
        return Err(Error::Domain(format!("expected {} coefficients", k + 1)));
    }
    let inv = invariants_from_pattern(k, |j| a[j as usize] != Complex64::default())?;
    let e = inv.e as usize;
    let scale = if inv.is_circular() { 1.0 / a[e].re } else { 1.0 / a[e].norm() };
    let phases: Vec<Angle> = a.iter().map(|c| float_arg_angle(*c)).collect();
    let theta = rotation_angle(&inv, &phases);
    let coefficients = a
        .iter()
        .enumerate()
        .map(|(j, c)| c * scale * Complex64::from_polar(1.0, theta.scaled(2 * j as i64 - k as i64).radians))
        .collect();
    Ok(NormalizedLeading {
        k,
        invariants: inv,
        coefficients,
        exact: None,
        scale,
        scale_exact: None,
        theta,
    })
}

/// θ such that `a_e e^{i(2e−k)θ} > 0` and each later `m_{i+1}` lands in its
/// first sector, descending the chain of residual rotation subgroups.
fn rotation_angle(inv: &PlanarInvariants, phases: &[Angle]) -> Angle {
    if inv.is_circular() {
        return Angle::zero();
    }
    let k = inv.k as i64;
    let e = inv.e as i64;
    // (k − 2e)θ = arg a_e
    let mut theta = match phases[e as usize].over_pi {
        Some(r) => Angle::exact(r / (k - 2 * e)),
        None => Angle::approx(phases[e as usize].radians / (k - 2 * e) as f64),
    };
    if theta.over_pi.is_none() {
        // keep θ in the canonical branch [0, 2π/(k−2e))
        theta.radians = phases[e as usize].radians / (k - 2 * e) as f64;
    }
    let g = inv.gcd_chain();
    for (i, &q) in inv.q_chain.iter().enumerate() {
        let m = inv.m_indices[i + 1] as i64;
        let current = phases[m as usize].plus(&theta.scaled(2 * m - k));
        let r = sector_of(&current, q) as i64;
        if r == 0 {
            continue;
        }
        let a_step = (k - 2 * m) / g[i + 1] as i64;
        let t = (r * mod_inverse(a_step.rem_euclid(q as i64), q as i64)).rem_euclid(q as i64);
        theta = theta.plus_pi_multiple(Rational64::new(2 * t, g[i] as i64));
    }
    theta
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelTag {
    Circular,
    Tubular,
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelClass {
    pub tag: ModelTag,
    pub k: u32,
    pub d: Option<u32>,
}

/// Compares the leading polynomial with the circular and tubular models.
///
/// The tubular test is exact and independent of normalization: `P` is a
/// normalization of `T_k` iff `b_j = a_j / t_j` (with `t_j = C(k,j)/k`) satisfies
/// `b_{j+1} = r b_j` for a unimodular `r` and `b_1² r^{k−2} > 0`, plus
/// `b_1 r^{(k−2)/2} > 0` for even `k`.
pub fn classify_model(p: &Polynomial) -> Result<ModelClass> {
    let inv = planar_invariants(p)?;
    let k = inv.k;
    if inv.is_circular() {
        return Ok(ModelClass {
            tag: ModelTag::Circular,
            k,
            d: None,
        });
    }
    let tag = if is_tubular(&leading_coefficients(p, k), k) {
        ModelTag::Tubular
    } else {
        ModelTag::Generic
    };
    Ok(ModelClass { tag, k, d: inv.d })
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Coefficients of `(1/k)[(z + z̄)^k − 2 Re z^k]`.
pub fn tubular_coefficient(k: u32, j: u32) -> BigRational {
    if j == 0 || j == k {
        BigRational::zero()
    } else {
        BigRational::new(binomial(k, j), BigInt::from(k))
    }
}

/// The tubular model polynomial `T_k` as an exact polynomial in one variable.
pub fn tubular_model(k: u32) -> Polynomial {
    Polynomial::from_terms(
        1,
        (1..k).map(|j| (Monomial::new(vec![j], vec![k - j], 0), ExactComplex::real(tubular_coefficient(k, j)))),
    )
}

fn is_tubular(a: &[ExactComplex], k: u32) -> bool {
    if k < 3 || (1..k).any(|j| a[j as usize].is_zero()) {
        return false;
    }
    let b: Vec<ExactComplex> = (1..k)
        .map(|j| a[j as usize].scale(&tubular_coefficient(k, j).recip()))
        .collect();
    let r = &b[1] * &b[0].inv().expect("nonzero");
    if !r.norm_sqr().is_one() {
        return false;
    }
    if b.windows(2).any(|w| w[1] != &w[0] * &r) {
        return false;
    }
    let positive_real = |c: &ExactComplex| c.im.is_zero() && c.re.is_positive();
    if k % 2 == 0 {
        positive_real(&(&b[0] * &r.pow((k - 2) / 2)))
    } else {
        positive_real(&(&(&b[0] * &b[0]) * &r.pow(k - 2)))
    }
}

/// Description of the stability group of a model hypersurface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelAutGroup {
    pub symbol: String,
    pub dimension: u32,
    pub description: String,
}

pub fn model_aut_description(mc: &ModelClass) -> ModelAutGroup {
    match mc.tag {
        ModelTag::Circular => ModelAutGroup {
            symbol: "3-dimensional".into(),
            dimension: 3,
            description: format!(
                "z -> delta e^(i theta) z / (1 + mu w)^(1/{e}), w -> delta^{k} w / (1 + mu w); delta > 0, theta and mu real",
                e = mc.k / 2,
                k = mc.k
            ),
        },
        ModelTag::Tubular | ModelTag::Generic => {
            let d = mc.d.unwrap_or(1);
            let (r, delta) = if mc.k % 2 == 0 {
                ("R+", "delta > 0")
            } else {
                ("R*", "delta real nonzero")
            };
            ModelAutGroup {
                symbol: format!("{r} (+) Z_{d}"),
                dimension: 1,
                description: format!(
                    "z -> delta e^(i theta) z, w -> delta^{k} w; {delta}, e^(i theta) a {d}-th root of unity",
                    k = mc.k
                ),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionCheck {
    pub condition: String,
    pub passed: bool,
    /// Offending `(j, l, m)` indices or a short explanation.
    pub offending: Vec<String>,
    /// False when the decision relied on floating-point phase arithmetic.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalFormReport {
    pub branch: ModelTag,
    pub checks: Vec<ConditionCheck>,
    pub failures: Vec<String>,
}

impl NormalFormReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `F_{jl}(u)` as a map `m ↦ a_{jlm}`.
fn f_coeffs(f: &Polynomial) -> BTreeMap<(u32, u32), BTreeMap<u32, ExactComplex>> {
    let mut out: BTreeMap<(u32, u32), BTreeMap<u32, ExactComplex>> = BTreeMap::new();
    for (m, c) in f.terms() {
        out.entry((m.alpha[0], m.beta[0])).or_default().insert(m.m, c.clone());
    }
    out
}

fn vanishing(
    name: String,
    fj: &BTreeMap<(u32, u32), BTreeMap<u32, ExactComplex>>,
    pred: impl Fn(u32, u32) -> bool,
) -> ConditionCheck {
    let offending: Vec<String> = fj
        .iter()
        .filter(|((j, l), _)| pred(*j, *l))
        .flat_map(|((j, l), ms)| ms.keys().map(move |m| format!("({j},{l},{m})")))
        .collect();
    ConditionCheck {
        condition: name,
        passed: offending.is_empty(),
        offending,
        exact: true,
    }
}

/// `Re(e^{i(j−l)θ} F_{jl}(u)) = 0` coefficientwise.
fn real_part_vanishes(
    name: String,
    fj: &BTreeMap<(u32, u32), BTreeMap<u32, ExactComplex>>,
    j: u32,
    l: u32,
    theta: &Angle,
) -> ConditionCheck {
    let rot = theta.scaled(j as i64 - l as i64);
    let unit = rot.exact_unit();
    let mut offending = Vec::new();
    if let Some(ms) = fj.get(&(j, l)) {
        for (m, c) in ms {
            let zero = match &unit {
                Some(u) => (c * u).re.is_zero(),
                None => (c.to_complex64() * Complex64::from_polar(1.0, rot.radians)).re.abs() <= PHASE_TOL,
            };
            if !zero {
                offending.push(format!("({j},{l},{m})"));
            }
        }
    }
    ConditionCheck {
        condition: name,
        passed: offending.is_empty(),
        offending,
        exact: unit.is_some() || !fj.contains_key(&(j, l)),
    }
}

/// Evaluates the normal-form conditions of the branch selected by `mc`.
pub fn check_normal_form(l: &LeadingData, mc: &ModelClass) -> Result<NormalFormReport> {
    let inv = planar_invariants(&l.p)?;
    let k = l.k;
    let e = inv.e;
    let fj = f_coeffs(&l.f);
    let mut checks = Vec::new();
    match mc.tag {
        ModelTag::Circular => {
            checks.push(vanishing("F_{j,0} = 0, j >= 0".into(), &fj, |_, b| b == 0));
            checks.push(vanishing(format!("F_{{{e},{e}+j}} = 0, j >= 0"), &fj, |a, b| a == e && b >= e));
            for (a, b) in [(2 * e, 2 * e), (3 * e, 3 * e), (2 * e, 2 * e - 1)] {
                checks.push(vanishing(format!("F_{{{a},{b}}} = 0"), &fj, move |x, y| x == a && y == b));
            }
        }
        ModelTag::Tubular => {
            let theta = normalize_leading(&l.p)?.theta;
            checks.push(vanishing("F_{j,0} = 0, j >= 1".into(), &fj, |a, b| b == 0 && a >= 1));
            checks.push(vanishing(
                format!("F_{{{}+j,1}} = 0, j >= 0", k - 1),
                &fj,
                move |a, b| b == 1 && a >= k - 1,
            ));
            checks.push(vanishing(
                format!("F_{{{},2}} = 0", 2 * k - 2),
                &fj,
                move |a, b| a == 2 * k - 2 && b == 2,
            ));
            checks.push(real_part_vanishes(format!("Re F_{{{},1}} = 0", k - 2), &fj, k - 2, 1, &theta));
            checks.push(real_part_vanishes(format!("Re F_{{{},{}}} = 0", k, k - 1), &fj, k, k - 1, &theta));
        }
        ModelTag::Generic => {
            checks.push(vanishing("F_{j,0} = 0, j >= 1".into(), &fj, |a, b| b == 0 && a >= 1));
            checks.push(vanishing(
                format!("F_{{{}+j,{e}}} = 0, j >= 0", k - e),
                &fj,
                move |a, b| b == e && a >= k - e,
            ));
            checks.push(vanishing(
                format!("F_{{{},{}}} = 0", 2 * k - 2 * e, 2 * e),
                &fj,
                move |a, b| a == 2 * k - 2 * e && b == 2 * e,
            ));
            checks.push(pairing_check(&fj, &l.coefficients(), k));
        }
    }
    let failures = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} violated by {}", c.condition, c.offending.join(", ")))
        .collect();
    Ok(NormalFormReport {
        branch: mc.tag,
        checks,
        failures,
    })
}

/// `Σ_{j=1}^{k−2} F_{j,k−1−j}(u)(j+1) conj(a_{j+1}) = 0` as a polynomial in `u`.
fn pairing_check(fj: &BTreeMap<(u32, u32), BTreeMap<u32, ExactComplex>>, a: &[ExactComplex], k: u32) -> ConditionCheck {
    let mut sum: BTreeMap<u32, ExactComplex> = BTreeMap::new();
    for j in 1..k.saturating_sub(1) {
        let Some(ms) = fj.get(&(j, k - 1 - j)) else { continue };
        let w = a[j as usize + 1].conj().scale(&BigRational::from_integer((j + 1).into()));
        for (m, c) in ms {
            *sum.entry(*m).or_default() += &(c * &w);
        }
    }
    let offending: Vec<String> = sum
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| format!("u^{m} coefficient {c}"))
        .collect();
    ConditionCheck {
        condition: "(F_{k-1}, P_z) = 0".into(),
        passed: offending.is_empty(),
        offending,
        exact: true,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaMu {
    pub theta: BTreeSet<(u32, u32, u32)>,
    pub mu0: Option<u32>,
}

/// `Θ = Θ₁ ∪ Θ₂` with `Θ₁` the off-diagonal support of `F` and `Θ₂` that of the
/// leading polynomial, and `μ₀ = gcd |j − l|` over `Θ`.
pub fn theta_mu(l: &LeadingData) -> ThetaMu {
    let mut theta = BTreeSet::new();
    for (m, _) in l.f.terms() {
        if m.alpha[0] != m.beta[0] {
            theta.insert((m.alpha[0], m.beta[0], m.m));
        }
    }
    for (j, a) in l.coefficients().iter().enumerate() {
        let j = j as u32;
        if !a.is_zero() && 2 * j != l.k {
            theta.insert((j, l.k - j, 0));
        }
    }
    let mu0 = theta
        .iter()
        .map(|(j, l, _)| j.abs_diff(*l))
        .reduce(|a, b| a.gcd(&b));
    ThetaMu { theta, mu0 }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutTag {
    Model(ModelAutGroup),
    Infinite,
    Finite(u32),
    Trivial,
}

impl AutTag {
    pub fn label(&self) -> String {
        match self {
            AutTag::Model(_) => "Model".into(),
            AutTag::Infinite => "Infinite".into(),
            AutTag::Finite(m) => format!("Finite({m})"),
            AutTag::Trivial => "Trivial".into(),
        }
    }
}

impl Serialize for AutTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutClassification {
    pub tag: AutTag,
    pub theta: BTreeSet<(u32, u32, u32)>,
    pub mu0: Option<u32>,
    pub truncation_degree: u32,
    pub caveats: Vec<String>,
}

/// Classifies the local stability group from a defining function in normal coordinates.
pub fn aut_classification(psi: &Polynomial) -> Result<AutClassification> {
    let report = analyze(psi)?;
    report
        .aut
        .ok_or_else(|| Error::precondition(NORMAL_COORDS, report.normal_form.failures.join("; ")))
}

/// Full planar analysis; `aut` is absent when the normal-form check fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanarReport {
    pub k: u32,
    pub e: u32,
    pub d: Option<u32>,
    pub m_indices: Vec<u32>,
    pub q_chain: Vec<u32>,
    pub model: ModelTag,
    pub model_group: ModelAutGroup,
    pub normalization: NormalizationSummary,
    pub normal_form: NormalFormReport,
    pub theta: Vec<[u32; 3]>,
    pub mu0: Option<u32>,
    #[serde(serialize_with = "ser_aut_tag")]
    pub aut: Option<AutClassification>,
    pub truncation_degree: u32,
    pub caveats: Vec<String>,
}

fn ser_aut_tag<S: serde::Serializer>(v: &Option<AutClassification>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(a) => s.serialize_some(&a.tag.label()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizationSummary {
    pub scale: f64,
    pub scale_exact: Option<String>,
    pub theta: Angle,
    pub normalized_leading: Option<String>,
}

impl From<&NormalizedLeading> for NormalizationSummary {
    fn from(n: &NormalizedLeading) -> Self {
        NormalizationSummary {
            scale: n.scale,
            scale_exact: n.scale_exact.as_ref().map(fmt_ratio),
            theta: n.theta.clone(),
            normalized_leading: n.exact.as_ref().map(|p| p.to_string()),
        }
    }
}

/// Runs the whole planar pipeline: leading part, invariants, normalization,
/// model class, normal-form check, `Θ`/`μ₀` and, when the normal form holds,
/// the stability-group classification.
pub fn analyze(psi: &Polynomial) -> Result<PlanarReport> {
    let lead = extract_leading(psi)?;
    let inv = planar_invariants(&lead.p)?;
    let norm = normalize_leading(&lead.p)?;
    let mc = classify_model(&lead.p)?;
    let group = model_aut_description(&mc);
    let nf = check_normal_form(&lead, &mc)?;
    let tm = theta_mu(&lead);
    let truncation_degree = lead.truncation_degree();

    let mut caveats = Vec::new();
    let aut = if nf.passed() {
        let tag = if lead.f.is_zero() {
            AutTag::Model(group.clone())
        } else {
            match tm.mu0 {
                None => AutTag::Infinite,
                Some(1) => AutTag::Trivial,
                Some(m) => AutTag::Finite(m),
            }
        };
        let theta1_empty = lead.f.terms().all(|(m, _)| m.alpha[0] == m.beta[0]);
        if !lead.f.is_zero() && theta1_empty {
            caveats.push(format!(
                "F is nonzero but has no terms with j != l up to degree {truncation_degree}; equivalence to the model is not excluded beyond this truncation"
            ));
        }
        Some(AutClassification {
            tag,
            theta: tm.theta.clone(),
            mu0: tm.mu0,
            truncation_degree,
            caveats: caveats.clone(),
        })
    } else {
        None
    };

    Ok(PlanarReport {
        k: inv.k,
        e: inv.e,
        d: inv.d,
        m_indices: inv.m_indices.clone(),
        q_chain: inv.q_chain.clone(),
        model: mc.tag,
        model_group: group,
        normalization: NormalizationSummary::from(&norm),
        normal_form: nf,
        theta: tm.theta.iter().map(|&(a, b, c)| [a, b, c]).collect(),
        mu0: tm.mu0,
        aut,
        truncation_degree,
        caveats,
    })
}

/// Like [`analyze`] but fails when the normal-form hypothesis does not hold.
pub fn classify(psi: &Polynomial) -> Result<PlanarReport> {
    let report = analyze(psi)?;
    if !report.normal_form.passed() {
        return Err(Error::precondition(NORMAL_COORDS, report.normal_form.failures.join("; ")));
    }
    Ok(report)
}
