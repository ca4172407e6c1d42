//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). The process fails only on
//! criteria outside `KNOWN_UNATTAINABLE`; those are still evaluated literally
//! and reported, together with the reason they cannot pass.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};

use crinv::convexity::{
    convexifiability_verdict, gamma, gamma_radical_radicand, gamma_rational_branch, kn_number, model_convexity,
    numeric_convexity_threshold, GammaBranch, KNModel, KNOptions, Verdict,
};
use crinv::multitype::{infer_multitype, MultitypeOptions};
use crinv::planar::{
    aut_classification, normalize_coefficients, normalize_leading, planar_invariants, tubular_model, AutTag,
};
use crinv::poly::{parse_defining_equation, ratio_to_f64, ExactComplex, Monomial, Polynomial, Substitution};

/// Criteria that cannot pass as stated, with the reason.
const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[(
    4,
    "the stated constant t·3^(3/4)/4 is half the true maximum of |a_2|/a_0 = 2t·r³s/(r⁴+s⁴), \
     which is t·3^(3/4)/2; the corrected value is checked separately",
)];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn poly(expr: &str, n: usize) -> Polynomial {
    parse_defining_equation(expr, n).unwrap_or_else(|e| panic!("{expr}: {e}"))
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    // boundary l² = 3k − 2 with even l ≤ k ≤ 20
    let mut even_boundaries = 0;
    for k in 2i64..=20 {
        for l in (2i64..=k).step_by(2) {
            if l * l != 3 * k - 2 {
                continue;
            }
            match (gamma_rational_branch(l, k), gamma_radical_radicand(l, k)) {
                (Some(r), Some(rad)) => {
                    even_boundaries += 1;
                    let a = ratio_to_f64(&r);
                    let b = ratio_to_f64(&rad).sqrt();
                    let agree = (a - b).abs() <= 1e-12 && r.clone() * r.clone() == rad;
                    ok &= agree;
                    notes.push(format!("(k,l)=({k},{l}): {a} vs {b}"));
                }
                (r, _) => notes.push(format!(
                    "(k,l)=({k},{l}): radical branch is 0/0, rational branch {}",
                    r.map_or("undefined".into(), |v| v.to_string())
                )),
            }
        }
    }
    ok &= even_boundaries >= 1;
    // odd-l boundaries exercise the same identity
    for (k, l) in [(9i64, 5i64), (17, 7)] {
        let r = gamma_rational_branch(l, k).unwrap();
        let rad = gamma_radical_radicand(l, k).unwrap();
        let agree = r.clone() * r == rad;
        ok &= agree;
        notes.push(format!("odd (k,l)=({k},{l}) agree={agree}"));
    }
    let g68 = gamma(6, 8).unwrap();
    let g24 = gamma(2, 4).unwrap();
    let spot_68 = g68.branch == GammaBranch::Rational && g68.exact == q(2, 7);
    let spot_24 = g24.branch == GammaBranch::Radical
        && g24.exact == q(8, 9)
        && (g24.value - 2.0 * 2f64.sqrt() / 3.0).abs() <= 1e-12;
    ok &= spot_68 && spot_24;
    notes.push(format!("γ_(6,8) = {}, γ_(2,4) = {}", g68.exact_string(), g24.exact_string()));
    outcome(ok, notes.join("; "))
}

fn criterion_2() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (k, l) in [(4u32, 2u32), (6, 4), (8, 6), (8, 2), (6, 2)] {
        let g = gamma(l, k).unwrap();
        let num = numeric_convexity_threshold(k, l, 1e-6).unwrap();
        let err = (num - g.value).abs();
        let boundary = match g.branch {
            // a = γ exactly
            GammaBranch::Rational => model_convexity(&KNModel::new(k, l, g.exact.clone()).unwrap()).unwrap().convex,
            // γ irrational: rationals bracketing it to 1e-9 fall on either side
            GammaBranch::Radical => {
                let below = q((g.value * 1e9).floor() as i64, 1_000_000_000);
                let above = q((g.value * 1e9).ceil() as i64, 1_000_000_000);
                below != above
                    && model_convexity(&KNModel::new(k, l, below).unwrap()).unwrap().convex
                    && !model_convexity(&KNModel::new(k, l, above).unwrap()).unwrap().convex
            }
        };
        ok &= err <= 1e-4 && boundary;
        notes.push(format!("({k},{l}): numeric {num:.6}, γ {:.6}, boundary convex {boundary}", g.value));
    }
    outcome(ok, notes.join("; "))
}

fn criterion_3() -> Outcome {
    let opts = KNOptions::default();
    let p = poly("|z1|^8 + 15/7*|z1|^2*Re(z1^6) + |z2|^8", 2);
    let rep = convexifiability_verdict(&p, 8, &opts).unwrap();
    let e6 = &rep.per_l[&6];
    let obstructed_at_6 = matches!(rep.verdict, Verdict::Obstructed { l: 6, .. });
    let kappa_ok = e6.kappa >= 15.0 / 7.0;
    let thr_ok = (e6.threshold - 2.0 / 7.0).abs() <= 1e-12;
    let flat = poly("|z1|^4 + |z2|^4", 2);
    let rep2 = convexifiability_verdict(&flat, 4, &opts).unwrap();
    let inconclusive = rep2.verdict == Verdict::Inconclusive;
    outcome(
        obstructed_at_6 && kappa_ok && thr_ok && inconclusive,
        format!(
            "κ⁶ = {:.12} (≥ 15/7 = {:.12}), threshold {:.12}, obstructed at 6: {obstructed_at_6}; |z1|⁴+|z2|⁴ inconclusive: {inconclusive}",
            e6.kappa,
            15.0 / 7.0,
            e6.threshold
        ),
    )
}

fn criterion_4() -> (Outcome, String) {
    let opts = KNOptions::default();
    let mut ok = true;
    let mut notes = Vec::new();
    let mut corrected_ok = true;
    for (num, den) in [(1i64, 10i64), (1, 1)] {
        let t = num as f64 / den as f64;
        let p = poly(&format!("|z1|^4 + |z2|^4 + 2*{num}/{den}*Re(z1^3*Z2)"), 2);
        let est = kn_number(&p, 2, &opts).unwrap();
        let stated = t * 3f64.powf(0.75) / 4.0;
        let corrected = t * 3f64.powf(0.75) / 2.0;
        let r4 = est.witness[0].norm().powi(4);
        let s4 = est.witness[1].norm().powi(4);
        let frac = r4 / (r4 + s4);
        let witness_ok = (frac - 0.75).abs() <= 1e-2;
        ok &= (est.kappa - stated).abs() <= 1e-3 && witness_ok;
        corrected_ok &= (est.kappa - corrected).abs() <= 1e-3 && witness_ok;
        notes.push(format!(
            "t={t}: κ² = {:.6}, stated {:.6}, |c1|⁴/(|c1|⁴+|c2|⁴) = {frac:.4}",
            est.kappa, stated
        ));
    }
    (
        outcome(ok, notes.join("; ")),
        format!("corrected constant t·3^(3/4)/2 within 1e-3 and witness within 1e-2: {corrected_ok}"),
    )
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (expr, want) in [
        ("|z1|^4 + z1^3*Z1*u + z1*Z1^3*u", AutTag::Finite(2)),
        ("|z1|^4 + z1^3*Z1*u + z1*Z1^3*u + z1^2*Z1*u^2 + z1*Z1^2*u^2", AutTag::Trivial),
        ("|z1|^4 + |z1|^2*u", AutTag::Infinite),
    ] {
        let got = aut_classification(&poly(expr, 1)).map(|a| a.tag);
        let pass = got.as_ref().ok() == Some(&want);
        ok &= pass;
        notes.push(format!("{expr} -> {}", got.map_or_else(|e| e.to_string(), |t| t.label())));
    }
    let models: [(Polynomial, &str); 4] = [
        (poly("|z1|^6", 1), "3-dimensional"),
        (tubular_model(4), "R+ (+) Z_2"),
        (tubular_model(6), "R+ (+) Z_2"),
        (tubular_model(5), "R* (+) Z_1"),
    ];
    for (p, symbol) in models {
        let got = aut_classification(&p).map(|a| a.tag);
        let pass = matches!(&got, Ok(AutTag::Model(g)) if g.symbol == symbol)
            && (symbol != "3-dimensional"
                || matches!(&got, Ok(AutTag::Model(g)) if g.description.contains("(1 + mu w)^(1/3)")));
        ok &= pass;
        notes.push(format!(
            "{p} -> {}",
            match &got {
                Ok(AutTag::Model(g)) => g.symbol.clone(),
                Ok(t) => t.label(),
                Err(e) => e.to_string(),
            }
        ));
    }
    outcome(ok, notes.join("; "))
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (k, want) in [(4u32, 2u32), (6, 2), (8, 2), (5, 1), (7, 1)] {
        let d = planar_invariants(&tubular_model(k)).unwrap().d;
        ok &= d == Some(want);
        notes.push(format!("T_{k}: d = {d:?}"));
    }
    outcome(ok, notes.join("; "))
}

/// All rationals in `[0, 1/2]` with denominator ≤ `max_den`.
fn fractions(max_den: i64) -> Vec<BigRational> {
    let mut v: Vec<BigRational> = (1..=max_den)
        .flat_map(|d| (0..=d).filter(move |&p| 2 * p <= d).map(move |p| q(p, d)))
        .collect();
    v.sort();
    v.dedup();
    v
}

fn oracle_valid(l: &[BigRational]) -> bool {
    let n = l.len();
    let bounds: Vec<i64> = l
        .iter()
        .map(|x| if x.is_zero() { 1 } else { (BigRational::one() / x).ceil().to_integer().try_into().unwrap() })
        .collect();
    (0..n).all(|k| {
        let mut counts = vec![0i64; n];
        loop {
            let sum: BigRational = counts.iter().zip(l).map(|(&c, x)| x * BigRational::from_integer(c.into())).sum();
            if counts[k] > 0 && sum.is_one() {
                return true;
            }
            let mut j = 0;
            loop {
                if j == n {
                    return false;
                }
                counts[j] += 1;
                if counts[j] <= bounds[j] {
                    break;
                }
                counts[j] = 0;
                j += 1;
            }
        }
    })
}

fn oracle_distinguished(l: &[BigRational], psi: &Polynomial) -> bool {
    let mut mixed_weight_one = false;
    for (m, _) in psi.terms() {
        let w: BigRational = m
            .alpha
            .iter()
            .zip(&m.beta)
            .zip(l)
            .map(|((a, b), x)| x * BigRational::from_integer((a + b).into()))
            .sum::<BigRational>()
            + BigRational::from_integer(m.m.into());
        if w < BigRational::one() {
            return false;
        }
        if w.is_one() {
            if m.m > 0 {
                return false;
            }
            let holo = m.alpha.iter().any(|&a| a > 0);
            let anti = m.beta.iter().any(|&b| b > 0);
            mixed_weight_one |= holo && anti;
        }
    }
    mixed_weight_one
}

/// Lexicographically smallest valid distinguished weight by exhaustive enumeration.
fn oracle_multitype(psi: &Polynomial, max_den: i64) -> Option<Vec<BigRational>> {
    let fr = fractions(max_den);
    let n = psi.n();
    let mut best: Option<Vec<BigRational>> = None;
    let mut cur: Vec<usize> = vec![0; n];
    // nonincreasing index vectors into `fr`, visited in lex order of the weight
    fn rec(
        j: usize,
        cur: &mut Vec<usize>,
        fr: &[BigRational],
        psi: &Polynomial,
        best: &mut Option<Vec<BigRational>>,
    ) {
        let n = cur.len();
        if j == n {
            let l: Vec<BigRational> = cur.iter().map(|&i| fr[i].clone()).collect();
            if oracle_distinguished(&l, psi) && oracle_valid(&l) && best.as_ref().is_none_or(|b| l < *b) {
                *best = Some(l);
            }
            return;
        }
        let top = if j == 0 { fr.len() - 1 } else { cur[j - 1] };
        for i in 0..=top {
            cur[j] = i;
            rec(j + 1, cur, fr, psi, best);
        }
    }
    rec(0, &mut cur, &fr, psi, &mut best);
    best
}

fn criterion_7() -> Outcome {
    let suite: &[(&str, usize, bool)] = &[
        ("|z1|^4 + |z2|^6", 2, false),
        ("|z1|^4 + |z2|^4 + |z1|^2*|z2|^2", 2, false),
        ("|z1|^2", 2, false),
        ("|z1|^2 + |z2|^4", 2, false),
        ("|z1|^4 + |z1|^2*|z2|^2 + |z2|^6", 2, false),
        ("|z1|^4 + |z2|^4 + Re(z1^3*Z2)", 2, false),
        ("|z1|^6 + |z2|^6 + Re(z1^2*Z2^2)", 2, false),
        ("|z1|^2*|z2|^2 + |z1|^6 + |z2|^6", 2, false),
        ("|z1|^4 + |z2|^6 + u*|z1|^2", 2, false),
        ("|z1|^4 + Re(z1^3) + |z2|^4", 2, false),
        ("|z1|^2 + |z2|^2 + |z3|^6", 3, false),
        ("|z1|^2 + |z2|^4 + |z3|^6 + Re(z2^2*Z3^3)", 3, false),
        ("|z1|^2 + |z2|^8 + |z3|^4", 3, false),
        ("|z1|^2 + |z2|^8 + |z3|^4", 3, true),
        ("|z1|^6 + |z2|^2 + |z1|^2*|z3|^4", 3, true),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for &(expr, n, permute) in suite {
        let psi = poly(expr, n);
        let lib = infer_multitype(
            &psi,
            &MultitypeOptions {
                permute,
                max_denominator: 12,
            },
        )
        .ok()
        .map(|r| r.weight.lambdas().to_vec());
        let oracle = if permute {
            permutations(n)
                .into_iter()
                .filter_map(|p| oracle_multitype(&psi.permute_variables(&p), 12))
                .min()
        } else {
            oracle_multitype(&psi, 12)
        };
        let agree = lib == oracle;
        ok &= agree;
        let show = |w: &Option<Vec<BigRational>>| {
            w.as_ref().map_or("none".to_string(), |v| {
                format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            })
        };
        if !agree {
            notes.push(format!("{expr} (permute {permute}): library {} vs oracle {}", show(&lib), show(&oracle)));
        }
    }
    let fixed_46 = infer_multitype(&poly("|z1|^4 + |z2|^6", 2), &MultitypeOptions::default())
        .map(|r| r.multitype)
        .unwrap_or_default();
    let fixed_44 = infer_multitype(&poly("|z1|^4 + |z2|^4 + |z1|^2*|z2|^2", 2), &MultitypeOptions::default())
        .map(|r| r.multitype)
        .unwrap_or_default();
    ok &= fixed_46 == ["4", "6"] && fixed_44 == ["4", "4"];
    notes.push(format!(
        "{} polynomials agree: {}; (4,6) -> {fixed_46:?}, (4,4) -> {fixed_44:?}",
        suite.len(),
        notes.is_empty()
    ));
    outcome(ok, notes.join("; "))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut v = p.clone();
            v.insert(i, n - 1);
            out.push(v);
        }
    }
    out
}

fn gauss(re: i64, im: i64) -> ExactComplex {
    ExactComplex::new(q(re, 1), q(im, 1))
}

/// Random real leading polynomial of degree `k` in one variable.
fn random_leading(rng: &mut impl Rng) -> Polynomial {
    loop {
        let k: u32 = rng.gen_range(2..=10);
        let mut terms = Vec::new();
        for j in 1..=k / 2 {
            if rng.gen_bool(0.4) {
                continue;
            }
            let c = if 2 * j == k {
                gauss(rng.gen_range(-5..=5), 0)
            } else {
                gauss(rng.gen_range(-5..=5), rng.gen_range(-5..=5))
            };
            if c.is_zero() {
                continue;
            }
            terms.push((Monomial::new(vec![j], vec![k - j], 0), c.clone()));
            if 2 * j != k {
                terms.push((Monomial::new(vec![k - j], vec![j], 0), c.conj()));
            }
        }
        let p = Polynomial::from_terms(1, terms);
        // the leading polynomial needs a mixed term
        if p.terms().any(|(m, _)| m.alpha[0] > 0 && m.beta[0] > 0) {
            return p;
        }
    }
}

fn in_sector(c: Complex64, q: u32) -> bool {
    let width = 2.0 * PI / q as f64;
    let mut a = c.arg();
    if a < 0.0 {
        a += 2.0 * PI;
    }
    if a >= 2.0 * PI - 1e-12 {
        a -= 2.0 * PI;
    }
    a >= -1e-12 && a < width + 1e-12
}

fn criterion_8() -> Outcome {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let (mut exact_cases, mut float_cases) = (0, 0);
    let mut failures = Vec::new();
    for _ in 0..100 {
        let p = random_leading(&mut rng);
        let n1 = match normalize_leading(&p) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("{p}: {e}"));
                continue;
            }
        };
        let inv = &n1.invariants;
        let e = inv.e as usize;
        let mut ok = n1.satisfies_conditions();
        ok &= (n1.coefficients[e] - Complex64::new(1.0, 0.0)).norm() <= 1e-12;
        for (&qi, &m) in inv.q_chain.iter().zip(inv.m_indices.iter().skip(1)) {
            ok &= in_sector(n1.coefficients[m as usize], qi);
        }
        match &n1.exact {
            Some(exact) => {
                exact_cases += 1;
                let ae = exact.coeff(&Monomial::new(vec![inv.e], vec![inv.k - inv.e], 0));
                ok &= ae == ExactComplex::one();
                ok &= normalize_leading(exact).ok().and_then(|n2| n2.exact).as_ref() == Some(exact);
            }
            None => {
                float_cases += 1;
                match normalize_coefficients(n1.k, &n1.coefficients) {
                    Ok(n2) => {
                        ok &= n1
                            .coefficients
                            .iter()
                            .zip(&n2.coefficients)
                            .all(|(a, b)| (a - b).norm() <= 1e-12 * a.norm().max(1.0));
                    }
                    Err(_) => ok = false,
                }
            }
        }
        if !ok {
            failures.push(p.to_string());
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "100 polynomials ({exact_cases} exact, {float_cases} float); failures: {}",
            if failures.is_empty() { "none".into() } else { failures.join(", ") }
        ),
    )
}

/// Seeded in-process sample of the property suite.
fn criterion_9() -> Outcome {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    let mut failures = Vec::new();
    let random_poly = |rng: &mut rand_chacha::ChaCha8Rng| {
        let terms: Vec<_> = (0..4)
            .map(|_| {
                let a = (0..2).map(|_| rng.gen_range(0..=2)).collect();
                let b = (0..2).map(|_| rng.gen_range(0..=2)).collect();
                (Monomial::new(a, b, rng.gen_range(0..=1)), gauss(rng.gen_range(-3..=3), rng.gen_range(-3..=3)))
            })
            .collect();
        Polynomial::from_terms(2, terms)
    };
    for _ in 0..50 {
        let p = random_poly(&mut rng).real_part();
        let r = random_poly(&mut rng).real_part();
        if !(&p + &r).is_real_valued() || !(&p * &r).is_real_valued() {
            failures.push("reality closure".to_string());
        }
        let mut mat = || -> Vec<Vec<ExactComplex>> {
            (0..2).map(|_| (0..2).map(|_| gauss(rng.gen_range(-2..=2), rng.gen_range(-2..=2))).collect()).collect()
        };
        let (sa, sb) = (Substitution::linear(&mat()), Substitution::linear(&mat()));
        if p.substitute(&sa).substitute(&sb) != p.substitute(&sa.compose(&sb)) {
            failures.push("substitution composition".to_string());
        }
    }
    let hom = poly("|z1|^4 + 3*Re(z1^3*Z2) + 1/2*Im(z1*Z2^3) + |z1|^2*|z2|^2 + |z2|^4", 2);
    for _ in 0..50 {
        let c: Vec<Complex64> = (0..2).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let zeta = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let form = hom.restrict_to_line(&c).unwrap();
        let z: Vec<Complex64> = c.iter().map(|v| v * zeta).collect();
        if (form.evaluate(zeta) - hom.evaluate(&z, 0.0).re).abs() > 1e-10 {
            failures.push("restriction consistency".to_string());
        }
    }
    let full = poly("|z1|^4 + 2*Re(z1^3*Z2) + |z2|^2*u + 1/3*Im(z1*Z2^2)*u^2", 2);
    let h = 1e-4;
    for _ in 0..100 {
        let x: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let hess = full.real_hessian_eval(&x);
        let scale = hess.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        let f = |d: [(usize, f64); 2]| {
            let mut y = x.clone();
            for (i, s) in d {
                y[i] += s;
            }
            full.evaluate_real(&y)
        };
        for a in 0..5 {
            for b in 0..5 {
                let fd = (f([(a, h), (b, h)]) - f([(a, h), (b, -h)]) - f([(a, -h), (b, h)]) + f([(a, -h), (b, -h)]))
                    / (4.0 * h * h);
                if (fd - hess[a][b]).abs() > 1e-6 * scale {
                    failures.push(format!("Hessian entry ({a},{b})"));
                }
            }
        }
    }
    let opts = KNOptions { grid: Some(16), ..KNOptions::default() };
    let base = kn_number(&hom, 2, &opts).unwrap().kappa;
    for t in [q(1, 7), q(3, 2), q(1000, 3)] {
        let scaled = hom.scale(&ExactComplex::real(t));
        if (kn_number(&scaled, 2, &opts).unwrap().kappa - base).abs() > 1e-10 {
            failures.push("κ scale invariance".to_string());
        }
    }
    let mut prev = 0.0;
    for (grid, refinements) in [(8, 0), (8, 2), (16, 2), (32, 4)] {
        let o = KNOptions { grid: Some(grid), refinements, ..KNOptions::default() };
        let k = kn_number(&hom, 2, &o).unwrap().kappa;
        if k < prev {
            failures.push(format!("monotonicity at grid {grid}, refinements {refinements}"));
        }
        prev = k;
    }
    failures.dedup();
    outcome(
        failures.is_empty(),
        format!(
            "closure, composition, restriction, Hessian, scale invariance, monotonicity; failures: {}",
            if failures.is_empty() { "none".into() } else { failures.join(", ") }
        ),
    )
}

fn main() {
    let limits: [(u32, Option<Duration>); 9] = [
        (1, Some(Duration::from_secs(1))),
        (2, Some(Duration::from_secs(30))),
        (3, Some(Duration::from_secs(10))),
        (4, None),
        (5, None),
        (6, None),
        (7, Some(Duration::from_secs(60))),
        (8, None),
        (9, None),
    ];
    let mut unexpected = Vec::new();
    for (id, limit) in limits {
        let start = Instant::now();
        let mut extra = None;
        let mut res = match id {
            1 => criterion_1(),
            2 => criterion_2(),
            3 => criterion_3(),
            4 => {
                let (o, note) = criterion_4();
                extra = Some(note);
                o
            }
            5 => criterion_5(),
            6 => criterion_6(),
            7 => criterion_7(),
            8 => criterion_8(),
            _ => criterion_9(),
        };
        let elapsed = start.elapsed();
        if let Some(l) = limit {
            if elapsed > l {
                res.passed = false;
                res.detail.push_str(&format!("; runtime {elapsed:.2?} exceeds {l:.0?}"));
            }
        }
        println!(
            "{} criterion {id}: {} [{elapsed:.2?}]",
            if res.passed { "PASS" } else { "FAIL" },
            res.detail
        );
        if let Some(note) = extra {
            println!("    note: {note}");
        }
        if !res.passed {
            match KNOWN_UNATTAINABLE.iter().find(|(k, _)| *k == id) {
                Some((_, why)) => println!("    known unattainable: {why}"),
                None => unexpected.push(id),
            }
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
