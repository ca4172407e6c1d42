use std::cmp::Ordering;

/// `z^alpha · z̄^beta · u^m` in `n` complex variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub m: u32,
}

impl Monomial {
    pub fn new(alpha: Vec<u32>, beta: Vec<u32>, m: u32) -> Self {
        debug_assert_eq!(alpha.len(), beta.len());
        Monomial { alpha, beta, m }
    }

    pub fn one(n: usize) -> Self {
        Monomial::new(vec![0; n], vec![0; n], 0)
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    /// `|alpha|`.
    pub fn holo_degree(&self) -> u32 {
        self.alpha.iter().sum()
    }

    /// `|beta|`.
    pub fn anti_degree(&self) -> u32 {
        self.beta.iter().sum()
    }

    /// Degree in `(z, z̄)` only.
    pub fn z_degree(&self) -> u32 {
        self.holo_degree() + self.anti_degree()
    }

    pub fn total_degree(&self) -> u32 {
        self.z_degree() + self.m
    }

    /// Both a holomorphic and an antiholomorphic factor are present.
    pub fn is_mixed(&self) -> bool {
        self.holo_degree() > 0 && self.anti_degree() > 0
    }

    /// The monomial whose coefficient must be the conjugate of this one in a real polynomial.
    pub fn conj(&self) -> Monomial {
        Monomial::new(self.beta.clone(), self.alpha.clone(), self.m)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.alpha.iter().zip(&other.alpha).map(|(a, b)| a + b).collect(),
            self.beta.iter().zip(&other.beta).map(|(a, b)| a + b).collect(),
            self.m + other.m,
        )
    }

    /// Per-variable exponent sum `alpha_j + beta_j`.
    pub fn exponent_sums(&self) -> Vec<u32> {
        self.alpha.iter().zip(&self.beta).map(|(a, b)| a + b).collect()
    }
}

/// Graded lexicographic order on `(total degree, alpha, beta, m)`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.alpha.cmp(&other.alpha))
            .then_with(|| self.beta.cmp(&other.beta))
            .then_with(|| self.m.cmp(&other.m))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
