use std::collections::BTreeMap;

use num_complex::Complex64;

use super::polynomial::Polynomial;
use crate::error::{Error, Result};

/// `a0·|ζ|^m + Σ_j |ζ|^{m−j} Re(a_j ζ^j)` over even `j` in `2..=m`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircularForm {
    pub degree: u32,
    pub a0: f64,
    pub a: BTreeMap<u32, Complex64>,
}

impl CircularForm {
    pub fn coefficient(&self, j: u32) -> Complex64 {
        self.a.get(&j).copied().unwrap_or_default()
    }

    pub fn evaluate(&self, zeta: Complex64) -> f64 {
        let r = zeta.norm();
        let m = self.degree as i32;
        let mut v = self.a0 * r.powi(m);
        for (&j, &aj) in &self.a {
            v += r.powi(m - j as i32) * (aj * zeta.powu(j)).re;
        }
        v
    }

    /// `|a_l| / a0`; infinite when `a0 ≤ 0`.
    pub fn ratio(&self, l: u32) -> f64 {
        if self.a0 <= 0.0 {
            f64::INFINITY
        } else {
            self.coefficient(l).norm() / self.a0
        }
    }
}

/// Float copy of a homogeneous polynomial grouped by `p − q`, for repeated
/// restriction to many complex lines.
#[derive(Clone, Debug)]
pub struct LineRestrictor {
    n: usize,
    degree: u32,
    // (j = |α| − |β| ≥ 0, coefficient, α, β)
    terms: Vec<(u32, Complex64, Vec<u32>, Vec<u32>)>,
}

impl LineRestrictor {
    pub fn new(p: &Polynomial) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::precondition(
                "line restriction needs a nonzero homogeneous polynomial",
                "input is the zero polynomial",
            ));
        }
        if p.has_u() {
            return Err(Error::precondition(
                "line restriction needs a u-independent polynomial",
                "input depends on u",
            ));
        }
        if !p.is_real_valued() {
            return Err(Error::precondition(
                "line restriction needs a real-valued polynomial",
                "input is not real valued",
            ));
        }
        let degree = p.homogeneous_degree().ok_or_else(|| {
            Error::precondition(
                "line restriction needs a homogeneous polynomial",
                "terms of several degrees in (z, z̄)",
            )
        })?;
        if degree % 2 == 1 {
            return Err(Error::precondition(
                "the circular form a0|ζ|^m + Σ|ζ|^(m−j)Re(a_j ζ^j) needs even degree",
                format!("degree {degree} is odd"),
            ));
        }
        // Terms with p < q are conjugates of terms with p > q and carry no extra information.
        let terms = p
            .terms()
            .filter(|(m, _)| m.holo_degree() >= m.anti_degree())
            .map(|(m, c)| {
                (
                    m.holo_degree() - m.anti_degree(),
                    c.to_complex64(),
                    m.alpha.clone(),
                    m.beta.clone(),
                )
            })
            .collect();
        Ok(LineRestrictor {
            n: p.n(),
            degree,
            terms,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn b(&self, c: &[Complex64], j: u32) -> Complex64 {
        let cbar: Vec<Complex64> = c.iter().map(|v| v.conj()).collect();
        self.terms
            .iter()
            .filter(|t| t.0 == j)
            .map(|(_, coef, alpha, beta)| {
                let mut v = *coef;
                for i in 0..self.n {
                    if alpha[i] > 0 {
                        v *= c[i].powu(alpha[i]);
                    }
                    if beta[i] > 0 {
                        v *= cbar[i].powu(beta[i]);
                    }
                }
                v
            })
            .sum()
    }

    /// `a0^c`.
    pub fn a0(&self, c: &[Complex64]) -> f64 {
        self.b(c, 0).re
    }

    /// `a_j^c = 2·b_{(m+j)/2,(m−j)/2}` for even `j ≥ 2`.
    pub fn a(&self, c: &[Complex64], j: u32) -> Complex64 {
        self.b(c, j) * 2.0
    }

    pub fn restrict(&self, c: &[Complex64]) -> Result<CircularForm> {
        if c.len() != self.n {
            return Err(Error::Domain(format!(
                "direction has {} components, expected {}",
                c.len(),
                self.n
            )));
        }
        if c.iter().all(|v| v.norm_sqr() == 0.0) {
            return Err(Error::Domain("direction vector must be nonzero".into()));
        }
        let a = (2..=self.degree)
            .step_by(2)
            .map(|j| (j, self.a(c, j)))
            .filter(|(_, v)| *v != Complex64::default())
            .collect();
        Ok(CircularForm {
            degree: self.degree,
            a0: self.a0(c),
            a,
        })
    }

    /// `|a_l^c| / a0^c`, or `None` when `a0^c ≤ 0`.
    pub fn ratio(&self, c: &[Complex64], l: u32) -> Option<f64> {
        let a0 = self.a0(c);
        (a0 > 0.0).then(|| self.a(c, l).norm() / a0)
    }
}

impl Polynomial {
    /// Restricts to the complex line `{ζ c}` and rewrites the result in circular form.
    pub fn restrict_to_line(&self, c: &[Complex64]) -> Result<CircularForm> {
        LineRestrictor::new(self)?.restrict(c)
    }
}
