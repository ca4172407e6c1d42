use super::polynomial::Polynomial;

/// Second partial derivatives of a real polynomial in the real coordinates
/// `(x_1, y_1, …, x_n, y_n, u)`, differentiated exactly once and evaluated in
/// floating point on demand.
#[derive(Clone, Debug)]
pub struct PreparedHessian {
    dim: usize,
    // upper triangle, row-major
    entries: Vec<Polynomial>,
}

impl PreparedHessian {
    pub fn new(p: &Polynomial) -> Self {
        let dim = 2 * p.n() + 1;
        let first: Vec<Polynomial> = (0..dim).map(|a| p.d_real(a)).collect();
        let mut entries = Vec::with_capacity(dim * (dim + 1) / 2);
        for (a, da) in first.iter().enumerate() {
            for b in a..dim {
                entries.push(da.d_real(b));
            }
        }
        PreparedHessian { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, point: &[f64]) -> Vec<Vec<f64>> {
        assert_eq!(point.len(), self.dim, "point must have 2n+1 real coordinates");
        let mut h = vec![vec![0.0; self.dim]; self.dim];
        let mut k = 0;
        for a in 0..self.dim {
            for b in a..self.dim {
                let v = self.entries[k].evaluate_real(point);
                h[a][b] = v;
                h[b][a] = v;
                k += 1;
            }
        }
        h
    }
}

impl Polynomial {
    /// Real Hessian at `(x_1, y_1, …, x_n, y_n, u)`; symmetric by construction.
    pub fn real_hessian_eval(&self, point: &[f64]) -> Vec<Vec<f64>> {
        PreparedHessian::new(self).eval(point)
    }
}

#[cfg(test)]
mod tests {
    use crate::poly::parse_defining_equation;

    #[test]
    fn modulus_squared() {
        let h = parse_defining_equation("|z1|^2", 1)
            .unwrap()
            .real_hessian_eval(&[0.3, -1.2, 0.5]);
        assert_eq!(h, vec![vec![2.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 0.0]]);
    }

    #[test]
    fn real_part_of_square() {
        let h = parse_defining_equation("Re(z1^2)", 1)
            .unwrap()
            .real_hessian_eval(&[1.0, 2.0, 0.0]);
        assert_eq!(h[0][0], 2.0);
        assert_eq!(h[1][1], -2.0);
        assert_eq!(h[0][1], 0.0);
    }
}
