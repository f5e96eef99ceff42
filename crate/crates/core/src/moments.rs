//! Closed-form integrals of `exp(quadratic) * polynomial` via Gaussian moments.
//!
//! `integral exp(-a x^2 + b x + c) Q(x) dx` is reduced by completing the
//! square, `x = y + b / (2a)`, to a normal distribution of variance
//! `1 / (2a)` whose moments are summed against the shifted coefficients of `Q`.

use std::f64::consts::PI;

/// Real polynomial with ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPoly(pub Vec<f64>);

impl RealPoly {
    pub fn constant(c: f64) -> Self {
        RealPoly(vec![c])
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &RealPoly) -> RealPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return RealPoly(Vec::new());
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RealPoly(out)
    }

    pub fn scale(&self, s: f64) -> RealPoly {
        RealPoly(self.0.iter().map(|c| c * s).collect())
    }

    /// Coefficients of `y -> Q(y + x0)`.
    pub fn shift(&self, x0: f64) -> RealPoly {
        let n = self.0.len();
        let mut out = vec![0.0; n];
        for (j, &c) in self.0.iter().enumerate() {
            let mut binom = 1.0;
            let mut pow = 1.0;
            // term c * (y + x0)^j, walk k = j, j-1, ..., 0
            for k in (0..=j).rev() {
                out[k] += c * binom * pow;
                binom *= k as f64 / (j - k + 1) as f64;
                pow *= x0;
            }
        }
        RealPoly(out)
    }

    /// Physicists' Hermite polynomial `H_n`.
    pub fn hermite(n: usize) -> RealPoly {
        let mut prev = vec![1.0];
        if n == 0 {
            return RealPoly(prev);
        }
        let mut cur = vec![0.0, 2.0];
        for j in 1..n {
            let mut next = vec![0.0; j + 2];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += 2.0 * c;
            }
            for (i, c) in prev.iter().enumerate() {
                next[i] -= 2.0 * j as f64 * c;
            }
            prev = cur;
            cur = next;
        }
        RealPoly(cur)
    }
}

/// `E[y^n]` for `y ~ N(0, sigma^2)`: zero for odd `n`, `sigma^n (n-1)!!` for even `n`.
pub fn centered_moment(n: usize, sigma: f64) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let double_factorial: f64 = (1..n).step_by(2).map(|k| k as f64).product();
    sigma.powi(n as i32) * double_factorial
}

/// `integral_R exp(-a x^2 + b x + c) poly(x) dx` for `a > 0`.
pub fn gaussian_poly_integral(a: f64, b: f64, c: f64, poly: &RealPoly) -> f64 {
    assert!(a > 0.0, "Gaussian factor must decay");
    let x0 = b / (2.0 * a);
    let sigma = (0.5 / a).sqrt();
    let gamma = poly.shift(x0);
    let moments: f64 = gamma
        .0
        .iter()
        .enumerate()
        .map(|(n, g)| g * centered_moment(n, sigma))
        .sum();
    (c + b * b / (4.0 * a)).exp() * (PI / a).sqrt() * moments
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn moment_table() {
        let s = 0.7;
        assert_eq!(centered_moment(0, s), 1.0);
        assert_eq!(centered_moment(1, s), 0.0);
        assert_eq!(centered_moment(3, s), 0.0);
        assert_abs_diff_eq!(centered_moment(2, s), s * s, epsilon = 1e-15);
        assert_abs_diff_eq!(centered_moment(4, s), 3.0 * s.powi(4), epsilon = 1e-15);
        assert_abs_diff_eq!(centered_moment(6, s), 15.0 * s.powi(6), epsilon = 1e-15);
    }

    #[test]
    fn hermite_coefficients() {
        assert_eq!(RealPoly::hermite(0).0, vec![1.0]);
        assert_eq!(RealPoly::hermite(2).0, vec![-2.0, 0.0, 4.0]);
        assert_eq!(RealPoly::hermite(3).0, vec![0.0, -12.0, 0.0, 8.0]);
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = RealPoly(vec![0.3, -1.2, 0.5, 2.0, -0.1]);
        let shifted = p.shift(0.8);
        for x in [-2.0, -0.3, 0.0, 1.7] {
            assert_abs_diff_eq!(shifted.eval(x), p.eval(x + 0.8), epsilon = 1e-12);
        }
    }

    #[test]
    fn integral_against_riemann_sum() {
        let poly = RealPoly(vec![1.0, -0.5, 0.25, 0.1]);
        let (a, b, c) = (0.8, 0.6, -0.2);
        let h = 1e-3;
        let brute: f64 = (-20_000..=20_000)
            .map(|i| {
                let x = i as f64 * h;
                (-a * x * x + b * x + c).exp() * poly.eval(x)
            })
            .sum::<f64>()
            * h;
        assert_abs_diff_eq!(gaussian_poly_integral(a, b, c, &poly), brute, epsilon = 1e-10);
    }
}
