//! Gauss-Legendre rules on finite intervals.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

/// Nodes and weights mapped onto `[a, b]`, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Rule> {
    let degree = NonZeroUsize::new(n).ok_or_else(|| Error::InvalidParameter("need at least one node".into()))?;
    let rule = GaussLegendre::new(degree);
    let (half, mid) = (0.5 * (b - a), 0.5 * (b + a));
    let mut pairs: Vec<(f64, f64)> = rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

impl Rule {
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_low_degree_polynomials() {
        let rule = gauss_legendre(8, -0.3, 0.7).unwrap();
        // degree 15 is integrated exactly by 8 nodes
        let exact = (0.7f64.powi(16) - 0.3f64.powi(16)) / 16.0;
        assert!((rule.integrate(|x| x.powi(15)) - exact).abs() < 1e-15);
        assert!((rule.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(gauss_legendre(0, 0.0, 1.0).is_err());
    }
}
