use serde::{Deserialize, Serialize};

use super::complex::{fmt_ratio, parse_ratio, ExactComplex};
use super::monomial::Monomial;
use super::polynomial::Polynomial;
use crate::error::{Error, Result};

/// Wire form `{"n": 2, "terms": [{"alpha": [..], "beta": [..], "m": 0, "re": "p/q", "im": "p/q"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub m: u32,
    pub re: String,
    pub im: String,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        PolynomialJson {
            n: p.n(),
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    alpha: m.alpha.clone(),
                    beta: m.beta.clone(),
                    m: m.m,
                    re: fmt_ratio(&c.re),
                    im: fmt_ratio(&c.im),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolynomialJson> for Polynomial {
    type Error = Error;

    fn try_from(j: &PolynomialJson) -> Result<Polynomial> {
        if j.n == 0 {
            return Err(Error::Json("n must be at least 1".into()));
        }
        let mut terms = Vec::with_capacity(j.terms.len());
        for (k, t) in j.terms.iter().enumerate() {
            if t.alpha.len() != j.n || t.beta.len() != j.n {
                return Err(Error::Json(format!("term {k}: exponent vectors must have length {}", j.n)));
            }
            let re = parse_ratio(&t.re).ok_or_else(|| Error::Json(format!("term {k}: bad rational '{}'", t.re)))?;
            let im = parse_ratio(&t.im).ok_or_else(|| Error::Json(format!("term {k}: bad rational '{}'", t.im)))?;
            terms.push((Monomial::new(t.alpha.clone(), t.beta.clone(), t.m), ExactComplex::new(re, im)));
        }
        Ok(Polynomial::from_terms(j.n, terms))
    }
}

impl Polynomial {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolynomialJson::from(self)).expect("polynomial serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Polynomial> {
        let j: PolynomialJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        Polynomial::try_from(&j)
    }
}
