//! Convexity thresholds `γ_{lk}` for the models `|z|^k + a|z|^{k−l} Re z^l`,
//! per-axis necessary conditions, Kohn-Nirenberg numbers
//! `κ^l = sup_c |a_l^c| / a_0^c` and the resulting non-convexifiability verdict.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optim::{bisect_predicate, nelder_mead, NelderMeadOptions};
use crate::poly::{fmt_ratio, ratio_to_f64, ExactComplex, LineRestrictor, Monomial, Polynomial, PreparedHessian};

/// Tolerance of the 2×2 positive-semidefiniteness test.
pub const PSD_EPS: f64 = 1e-12;

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `k / (l² − k)`; `None` when `l² = k`.
pub fn gamma_rational_branch(l: i64, k: i64) -> Option<BigRational> {
    let den = l * l - k;
    (den != 0).then(|| BigRational::new(k.into(), den.into()))
}

/// Radicand `(4k − l² − 4) k² / ((4k − 4)(k² − l²))`; `None` when the denominator vanishes.
pub fn gamma_radical_radicand(l: i64, k: i64) -> Option<BigRational> {
    let den = (4 * k - 4) * (k * k - l * l);
    (den != 0).then(|| BigRational::new(((4 * k - l * l - 4) * k * k).into(), den.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaBranch {
    Rational,
    Radical,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaValue {
    pub l: u32,
    pub k: u32,
    pub branch: GammaBranch,
    pub value: f64,
    /// The value itself (rational branch) or its radicand (radical branch).
    #[serde(serialize_with = "ser_ratio")]
    pub exact: BigRational,
    /// Set for `l = k`, where the rational branch gives `1/(k − 1)`.
    pub l_equals_k: bool,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_ratio(r))
}

impl GammaValue {
    /// `p/q` or `sqrt(p/q)`.
    pub fn exact_string(&self) -> String {
        match self.branch {
            GammaBranch::Rational => fmt_ratio(&self.exact),
            GammaBranch::Radical => format!("sqrt({})", fmt_ratio(&self.exact)),
        }
    }

    /// Exact `a ≤ γ` for `a ≥ 0`.
    pub fn dominates(&self, a: &BigRational) -> bool {
        if a.is_negative() {
            return true;
        }
        match self.branch {
            GammaBranch::Rational => *a <= self.exact,
            GammaBranch::Radical => a * a <= self.exact,
        }
    }
}

/// Convexity threshold of the model `|z|^k + a|z|^{k−l} Re z^l`.
pub fn gamma(l: u32, k: u32) -> Result<GammaValue> {
    if l < 2 || l % 2 == 1 || l > k {
        return Err(Error::Domain(format!("γ needs even l with 2 ≤ l ≤ k, got l = {l}, k = {k}")));
    }
    let (li, ki) = (l as i64, k as i64);
    let (branch, exact, value) = if li * li >= 3 * ki - 2 {
        let g = gamma_rational_branch(li, ki)
            .filter(|g| g.is_positive())
            .ok_or_else(|| Error::Domain(format!("l² ≤ k for l = {l}, k = {k}")))?;
        let v = ratio_to_f64(&g);
        (GammaBranch::Rational, g, v)
    } else {
        let r = gamma_radical_radicand(li, ki)
            .ok_or_else(|| Error::Domain(format!("k² − l² = 0 for l = {l}, k = {k}")))?;
        let v = ratio_to_f64(&r).sqrt();
        (GammaBranch::Radical, r, v)
    };
    Ok(GammaValue {
        l,
        k,
        branch,
        value,
        exact,
        l_equals_k: l == k,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KNModel {
    pub k: u32,
    pub l: u32,
    pub a: BigRational,
}

impl KNModel {
    pub fn new(k: u32, l: u32, a: BigRational) -> Result<Self> {
        if l < 2 || l % 2 == 1 || l > k {
            return Err(Error::Domain(format!("model needs even l with 2 ≤ l ≤ k, got l = {l}, k = {k}")));
        }
        if a.is_negative() {
            return Err(Error::Domain("model coefficient a must be nonnegative".into()));
        }
        Ok(KNModel { k, l, a })
    }
}

/// `|z|^k + a|z|^{k−l} Re z^l` as an exact polynomial in one variable.
pub fn kn_model_polynomial(mdl: &KNModel) -> Result<Polynomial> {
    let (k, l) = (mdl.k, mdl.l);
    if (k - l) % 2 == 1 {
        return Err(Error::Domain(format!(
            "|z|^(k−l) is not polynomial for odd k − l = {}",
            k - l
        )));
    }
    let h = (k - l) / 2;
    let half_a = ExactComplex::real(&mdl.a / int(2));
    let mut terms = vec![(Monomial::new(vec![k / 2], vec![k / 2], 0), ExactComplex::one())];
    if !mdl.a.is_zero() {
        terms.push((Monomial::new(vec![h + l], vec![h], 0), half_a.clone()));
        terms.push((Monomial::new(vec![h], vec![h + l], 0), half_a));
    }
    Ok(Polynomial::from_terms(1, terms))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelConvexity {
    pub convex: bool,
    /// Equal to `convex` when `l ∤ k`; undetermined otherwise.
    pub convexifiable: Option<bool>,
    pub gamma: GammaValue,
}

pub fn model_convexity(mdl: &KNModel) -> Result<ModelConvexity> {
    let g = gamma(mdl.l, mdl.k)?;
    let convex = g.dominates(&mdl.a);
    Ok(ModelConvexity {
        convex,
        convexifiable: (mdl.k % mdl.l != 0).then_some(convex),
        gamma: g,
    })
}

const ANGLES: usize = 720;
const RADII: [f64; 2] = [0.5, 1.0];
const A_MAX: f64 = 4.0;

/// Largest `a` for which the Hessian of `|z|^k + a|z|^{k−l} Re z^l` is positive
/// semidefinite on a sampled circle, found by bisection.
pub fn numeric_convexity_threshold(k: u32, l: u32, tol: f64) -> Result<f64> {
    let base = kn_model_polynomial(&KNModel::new(k, l, BigRational::zero())?)?;
    let full = kn_model_polynomial(&KNModel::new(k, l, int(1))?)?;
    let pert = &full - &base;
    let h0 = PreparedHessian::new(&base);
    let h1 = PreparedHessian::new(&pert);
    // H(a) = H0 + a·H1 restricted to the (x, y) block
    let samples: Vec<([f64; 3], [f64; 3])> = RADII
        .iter()
        .flat_map(|&r| {
            (0..ANGLES).map(move |i| {
                let t = 2.0 * PI * i as f64 / ANGLES as f64;
                (r * t.cos(), r * t.sin())
            })
        })
        .map(|(x, y)| {
            let a = h0.eval(&[x, y, 0.0]);
            let b = h1.eval(&[x, y, 0.0]);
            ([a[0][0], a[0][1], a[1][1]], [b[0][0], b[0][1], b[1][1]])
        })
        .collect();
    let psd = |a: f64| {
        samples.iter().all(|(h, p)| {
            let xx = h[0] + a * p[0];
            let xy = h[1] + a * p[1];
            let yy = h[2] + a * p[2];
            xx * yy - xy * xy >= -PSD_EPS && xx + yy >= -PSD_EPS
        })
    };
    bisect_predicate(0.0, A_MAX, tol, 200, psd)
}

/// Threshold applied to `|a_l|/a_0`: `γ` for `l > m/2`, `2γ` otherwise.
pub fn threshold(g: &GammaValue, m: u32) -> f64 {
    if 2 * g.l > m {
        g.value
    } else {
        2.0 * g.value
    }
}

fn require_homogeneous_even(p: &Polynomial, m: u32) -> Result<()> {
    if m % 2 == 1 || m < 2 {
        return Err(Error::Domain(format!("degree m must be even and at least 2, got {m}")));
    }
    match p.homogeneous_degree() {
        Some(d) if d == m => Ok(()),
        Some(d) => Err(Error::precondition(
            "leading polynomial must be homogeneous of degree m",
            format!("degree {d} ≠ m = {m}"),
        )),
        None => Err(Error::precondition(
            "leading polynomial must be homogeneous of degree m",
            "terms of several degrees or u-dependence",
        )),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxisCoefficient {
    pub l: u32,
    pub abs_a: f64,
    pub ratio: f64,
    pub gamma: f64,
    pub threshold: f64,
    pub passed: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxisReport {
    pub axis: usize,
    pub a0: f64,
    pub coefficients: Vec<AxisCoefficient>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxisConditions {
    pub axes: Vec<AxisReport>,
    pub violations: Vec<String>,
}

/// Restricts `P` to each coordinate axis and compares `|a_l|/a_0` with the
/// threshold for every even `l` with `a_l ≠ 0`.
pub fn axis_conditions(p: &Polynomial, m: u32) -> Result<AxisConditions> {
    require_homogeneous_even(p, m)?;
    let lr = LineRestrictor::new(p)?;
    let n = p.n();
    let mut axes = Vec::with_capacity(n);
    let mut violations = Vec::new();
    for j in 0..n {
        let mut c = vec![Complex64::default(); n];
        c[j] = Complex64::new(1.0, 0.0);
        let form = lr.restrict(&c)?;
        if form.a0 <= 0.0 {
            return Err(Error::precondition(
                "each axis restriction needs a_0 > 0",
                format!("a_0 = {} on axis {}", form.a0, j + 1),
            ));
        }
        let mut coefficients = Vec::new();
        for (&l, a) in &form.a {
            let g = gamma(l, m)?;
            let thr = threshold(&g, m);
            let ratio = a.norm() / form.a0;
            let passed = ratio <= thr;
            let note = g
                .l_equals_k
                .then(|| format!("l = k = {m}: rational branch 1/(k−1) used"));
            if !passed {
                violations.push(format!(
                    "axis {}: |a_{l}|/a_0 = {ratio} > {} = {thr}",
                    j + 1,
                    if 2 * l > m { "γ" } else { "2γ" }
                ));
            }
            coefficients.push(AxisCoefficient {
                l,
                abs_a: a.norm(),
                ratio,
                gamma: g.value,
                threshold: thr,
                passed,
                note,
            });
        }
        axes.push(AxisReport {
            axis: j + 1,
            a0: form.a0,
            coefficients,
        });
    }
    Ok(AxisConditions { axes, violations })
}

#[derive(Clone, Debug)]
pub struct KNOptions {
    /// Points per reduced real dimension; `None` picks 64 for n = 2 and 24 otherwise.
    pub grid: Option<usize>,
    pub refinements: usize,
    pub max_iterations: usize,
    pub tol: f64,
}

impl Default for KNOptions {
    fn default() -> Self {
        KNOptions {
            grid: None,
            refinements: 4,
            max_iterations: 200,
            tol: 1e-8,
        }
    }
}

impl KNOptions {
    pub fn grid_for(&self, n: usize) -> usize {
        self.grid.unwrap_or(if n <= 2 { 64 } else { 24 }).max(1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KappaEstimate {
    pub kappa: f64,
    /// Unit vector in `ℂⁿ` attaining `kappa`.
    pub witness: Vec<Complex64>,
}

/// Unit vector from `n − 1` polar angles and `n − 1` phases; `c_1 ≥ 0`.
fn direction(n: usize, cs: &[(f64, f64)], phases: &[f64]) -> Vec<Complex64> {
    let mut c = Vec::with_capacity(n);
    let mut tail = 1.0;
    for j in 0..n {
        let mag = if j + 1 < n { tail * cs[j].0 } else { tail };
        if j + 1 < n {
            tail *= cs[j].1;
        }
        let ph = if j == 0 { 0.0 } else { phases[j - 1] };
        c.push(Complex64::from_polar(mag, ph));
    }
    c
}

fn direction_from_params(n: usize, x: &[f64]) -> Vec<Complex64> {
    let cs: Vec<(f64, f64)> = x[..n - 1].iter().map(|t| (t.cos(), t.sin())).collect();
    direction(n, &cs, &x[n - 1..])
}

struct Kappa<'a> {
    lr: &'a LineRestrictor,
    l: u32,
    floor: f64,
}

impl Kappa<'_> {
    /// `|a_l^c|/a_0^c`, NaN where `a_0^c` is not safely positive.
    fn ratio(&self, c: &[Complex64]) -> f64 {
        let a0 = self.lr.a0(c);
        if a0 <= self.floor {
            return f64::NAN;
        }
        self.lr.a(c, self.l).norm() / a0
    }
}

/// Grid point `idx` on the reduced domain: indices for the polar angles in
/// `0..=g`, for the phases in `0..g`.
fn grid_indices(n: usize, g: usize, mut idx: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(2 * (n - 1));
    for _ in 0..n - 1 {
        out.push(idx % (g + 1));
        idx /= g + 1;
    }
    for _ in 0..n - 1 {
        out.push(idx % g);
        idx /= g;
    }
    out
}

/// Simplex step for refinement; independent of the grid so that runs from a
/// shared start agree exactly.
const REFINE_STEP: f64 = FRAC_PI_2 / 32.0;

fn grid_params(n: usize, g: usize, ix: &[usize]) -> (Vec<(f64, f64)>, Vec<f64>, Vec<f64>) {
    let mut cs = Vec::with_capacity(n - 1);
    let mut params = Vec::with_capacity(2 * (n - 1));
    for &i in &ix[..n - 1] {
        let t = FRAC_PI_2 * i as f64 / g as f64;
        // exact axes at the ends
        cs.push(if i == 0 {
            (1.0, 0.0)
        } else if i == g {
            (0.0, 1.0)
        } else {
            (t.cos(), t.sin())
        });
        params.push(t);
    }
    let phases: Vec<f64> = ix[n - 1..].iter().map(|&i| 2.0 * PI * i as f64 / g as f64).collect();
    params.extend(&phases);
    (cs, phases, params)
}

/// Estimates `κ^l` from below: grid search on the reduced sphere, then
/// simplex refinement from the best cells of the grid and of each coarser
/// grid obtained by halving, so that doubling the grid never lowers the result.
pub fn kn_number(p: &Polynomial, l: u32, opts: &KNOptions) -> Result<KappaEstimate> {
    let m = p
        .homogeneous_degree()
        .ok_or_else(|| Error::precondition("κ needs a homogeneous polynomial", "not homogeneous"))?;
    require_homogeneous_even(p, m)?;
    if l < 2 || l % 2 == 1 || l > m {
        return Err(Error::Domain(format!("κ^l needs even l with 2 ≤ l ≤ m, got l = {l}, m = {m}")));
    }
    // exact rescaling so that t·P and P yield identical floats
    let scale = p
        .terms()
        .flat_map(|(_, c)| [c.re.abs(), c.im.abs()])
        .max()
        .unwrap_or_else(BigRational::one);
    let p = &p.scale(&ExactComplex::real(BigRational::one() / scale));
    let lr = LineRestrictor::new(p)?;
    let n = p.n();
    let kappa = Kappa { lr: &lr, l, floor: 1e-12 };

    if n == 1 {
        let c = vec![Complex64::new(1.0, 0.0)];
        let v = kappa.ratio(&c);
        if v.is_nan() {
            return Err(line_harmonic());
        }
        return Ok(KappaEstimate { kappa: v, witness: c });
    }

    let g = opts.grid_for(n);
    let count = (g + 1).pow((n - 1) as u32) * g.pow((n - 1) as u32);
    let values: Vec<(f64, bool)> = (0..count)
        .into_par_iter()
        .map(|idx| {
            let ix = grid_indices(n, g, idx);
            let (cs, phases, _) = grid_params(n, g, &ix);
            let c = direction(n, &cs, &phases);
            let v = kappa.ratio(&c);
            (if v.is_nan() { f64::NEG_INFINITY } else { v }, v.is_nan())
        })
        .collect();
    if values.iter().any(|(_, bad)| *bad) {
        return Err(line_harmonic());
    }

    // best cells of each nested level, highest value first, ties by index
    let mut starts: Vec<usize> = Vec::new();
    let mut step = 1;
    loop {
        let mut level: Vec<usize> = (0..count)
            .filter(|&idx| grid_indices(n, g, idx).iter().all(|i| i % step == 0))
            .collect();
        level.sort_by(|&a, &b| values[b].0.total_cmp(&values[a].0).then(a.cmp(&b)));
        for idx in level.into_iter().take(opts.refinements.max(1)) {
            if !starts.contains(&idx) {
                starts.push(idx);
            }
        }
        if (g / step) % 2 == 1 || g / step < 2 {
            break;
        }
        step *= 2;
    }

    let mut best_idx = 0;
    for idx in 1..count {
        if values[idx].0 > values[best_idx].0 {
            best_idx = idx;
        }
    }
    let (cs, phases, _) = grid_params(n, g, &grid_indices(n, g, best_idx));
    let mut best = KappaEstimate {
        kappa: values[best_idx].0,
        witness: direction(n, &cs, &phases),
    };

    if opts.refinements > 0 {
        let nm = NelderMeadOptions {
            max_iterations: opts.max_iterations,
            tolerance: opts.tol,
            initial_step: REFINE_STEP,
        };
        let refined: Vec<KappaEstimate> = starts
            .par_iter()
            .map(|&idx| {
                let (_, _, x0) = grid_params(n, g, &grid_indices(n, g, idx));
                let r = nelder_mead(|x| -kappa.ratio(&direction_from_params(n, x)), &x0, &nm);
                let c = direction_from_params(n, &r.x);
                KappaEstimate {
                    kappa: kappa.ratio(&c),
                    witness: c,
                }
            })
            .collect();
        for r in refined {
            if r.kappa > best.kappa {
                best = r;
            }
        }
    }
    Ok(best)
}

fn line_harmonic() -> Error {
    Error::precondition(
        "P must not be harmonic along any complex line through the origin",
        "line-harmonic direction present: a_0^c ≤ 0 on the sampling net",
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KNEntry {
    pub kappa: f64,
    /// `[re, im]` per component.
    pub witness_c: Vec<[f64; 2]>,
    pub gamma: f64,
    pub threshold: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Verdict {
    Obstructed { l: u32, witness: Vec<[f64; 2]> },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KNReport {
    pub m: u32,
    pub per_l: BTreeMap<u32, KNEntry>,
    pub verdict: Verdict,
}

fn pairs(c: &[Complex64]) -> Vec<[f64; 2]> {
    c.iter().map(|v| [v.re, v.im]).collect()
}

/// Computes `κ^l` for every even `2 ≤ l ≤ m` and reports an obstruction at the
/// first `l` whose margin over the threshold exceeds `opts.tol`.
pub fn convexifiability_verdict(p: &Polynomial, m: u32, opts: &KNOptions) -> Result<KNReport> {
    require_homogeneous_even(p, m)?;
    let mut per_l = BTreeMap::new();
    let mut verdict = Verdict::Inconclusive;
    for l in (2..=m).step_by(2) {
        let g = gamma(l, m)?;
        let thr = threshold(&g, m);
        let est = kn_number(p, l, opts)?;
        let margin = est.kappa - thr;
        if margin > opts.tol && verdict == Verdict::Inconclusive {
            verdict = Verdict::Obstructed {
                l,
                witness: pairs(&est.witness),
            };
        }
        per_l.insert(
            l,
            KNEntry {
                kappa: est.kappa,
                witness_c: pairs(&est.witness),
                gamma: g.value,
                threshold: thr,
                margin,
            },
        );
    }
    Ok(KNReport { m, per_l, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_defining_equation;

    fn r(s: &str) -> BigRational {
        crate::poly::parse_ratio(s).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let g = gamma(6, 8).unwrap();
        assert_eq!((g.branch, g.exact.clone()), (GammaBranch::Rational, r("2/7")));
        let g = gamma(4, 6).unwrap();
        assert_eq!(g.exact, r("3/5"));
        assert_eq!(gamma_radical_radicand(4, 6).unwrap(), r("9/25"));
        let g = gamma(2, 4).unwrap();
        assert_eq!(g.branch, GammaBranch::Radical);
        assert_eq!(g.exact, r("8/9"));
        assert!((g.value - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-15);
        assert_eq!(g.exact_string(), "sqrt(8/9)");
        assert!(gamma(3, 8).is_err());
        assert!(gamma(10, 8).is_err());
        let g = gamma(4, 4).unwrap();
        assert!(g.l_equals_k);
        assert_eq!(g.exact, r("1/3"));
    }

    #[test]
    fn model_polynomials() {
        let p = kn_model_polynomial(&KNModel::new(4, 2, r("0")).unwrap()).unwrap();
        assert_eq!(p, parse_defining_equation("|z1|^4", 1).unwrap());
        let p = kn_model_polynomial(&KNModel::new(8, 6, r("1")).unwrap()).unwrap();
        assert_eq!(p, parse_defining_equation("z1^4*Z1^4 + 1/2*z1^7*Z1 + 1/2*z1*Z1^7", 1).unwrap());
        let p = kn_model_polynomial(&KNModel::new(4, 4, r("1")).unwrap()).unwrap();
        assert_eq!(p, parse_defining_equation("z1^2*Z1^2 + 1/2*z1^4 + 1/2*Z1^4", 1).unwrap());
        assert!(kn_model_polynomial(&KNModel::new(7, 4, r("1")).unwrap()).is_err());
    }

    #[test]
    fn model_convexity_examples() {
        let c = model_convexity(&KNModel::new(8, 6, r("2/7")).unwrap()).unwrap();
        assert_eq!((c.convex, c.convexifiable), (true, Some(true)));
        let c = model_convexity(&KNModel::new(8, 6, r("15/7")).unwrap()).unwrap();
        assert_eq!((c.convex, c.convexifiable), (false, Some(false)));
        let c = model_convexity(&KNModel::new(4, 2, r("0")).unwrap()).unwrap();
        assert_eq!((c.convex, c.convexifiable), (true, None));
        // radical branch boundary: a² = 8/9 is not rational-representable, check both sides
        assert!(model_convexity(&KNModel::new(4, 2, r("942/1000")).unwrap()).unwrap().convex);
        assert!(!model_convexity(&KNModel::new(4, 2, r("943/1000")).unwrap()).unwrap().convex);
    }

    #[test]
    fn numeric_threshold_matches_gamma() {
        for (k, l) in [(8, 6), (4, 2), (6, 4)] {
            let t = numeric_convexity_threshold(k, l, 1e-6).unwrap();
            let g = gamma(l, k).unwrap().value;
            assert!((t - g).abs() < 1e-4, "k={k} l={l}: {t} vs {g}");
        }
    }

    #[test]
    fn axis_examples() {
        let p = parse_defining_equation("|z1|^8 + 15/7*|z1|^2*Re(z1^6) + |z2|^8", 2).unwrap();
        let a = axis_conditions(&p, 8).unwrap();
        assert_eq!(a.violations.len(), 1);
        assert!(a.violations[0].starts_with("axis 1"));
        let c = &a.axes[0].coefficients[0];
        assert_eq!(c.l, 6);
        assert!((c.ratio - 15.0 / 7.0).abs() < 1e-12);

        let p = parse_defining_equation("|z1|^4 + |z2|^4", 2).unwrap();
        assert!(axis_conditions(&p, 4).unwrap().violations.is_empty());

        let p = parse_defining_equation("z1^2*Z1^2 + 1/4*(z1^4 + Z1^4) + |z2|^4", 2).unwrap();
        let a = axis_conditions(&p, 4).unwrap();
        let c = &a.axes[0].coefficients[0];
        assert_eq!(c.l, 4);
        assert!(c.note.is_some());
        assert!((c.threshold - 1.0 / 3.0).abs() < 1e-15);
        assert!(!c.passed);

        let p = parse_defining_equation("|z1|^4", 2).unwrap();
        assert!(axis_conditions(&p, 4).is_err());
    }

    #[test]
    fn kappa_examples() {
        let p = parse_defining_equation("|z1|^8 + 3/2*|z1|^2*Re(z1^6)", 1).unwrap();
        let k = kn_number(&p, 6, &KNOptions::default()).unwrap();
        assert!((k.kappa - 1.5).abs() < 1e-12);

        let p = parse_defining_equation("|z1|^4 + |z2|^4", 2).unwrap();
        assert_eq!(kn_number(&p, 2, &KNOptions::default()).unwrap().kappa, 0.0);

        let p = parse_defining_equation("|z1|^4 + |z2|^4 + 1/5*Re(z1^3*Z2)", 2).unwrap();
        let k = kn_number(&p, 2, &KNOptions::default()).unwrap();
        let expected = 0.1 * 3f64.powf(0.75) / 2.0;
        assert!((k.kappa - expected).abs() < 1e-6, "{} vs {expected}", k.kappa);

        let p = parse_defining_equation("Re(z1^2*Z2^2) + |z1|^4", 2).unwrap();
        assert!(kn_number(&p, 2, &KNOptions::default()).is_err());
    }

    #[test]
    fn verdict_examples() {
        let p = parse_defining_equation("|z1|^8 + 15/7*|z1|^2*Re(z1^6) + |z2|^8", 2).unwrap();
        let rep = convexifiability_verdict(&p, 8, &KNOptions::default()).unwrap();
        match &rep.verdict {
            Verdict::Obstructed { l, .. } => assert_eq!(*l, 6),
            v => panic!("unexpected {v:?}"),
        }
        assert!((rep.per_l[&6].threshold - 2.0 / 7.0).abs() < 1e-15);

        let p = parse_defining_equation("|z1|^4 + |z2|^4", 2).unwrap();
        let rep = convexifiability_verdict(&p, 4, &KNOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);

        let p = parse_defining_equation("|z1|^4 + 2*|z1|^2*Re(z1^2)", 1).unwrap();
        let rep = convexifiability_verdict(&p, 4, &KNOptions::default()).unwrap();
        assert!(matches!(rep.verdict, Verdict::Obstructed { l: 2, .. }));
        assert!((rep.per_l[&2].threshold - 4.0 * 2f64.sqrt() / 3.0).abs() < 1e-12);
    }
}
