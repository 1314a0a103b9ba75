use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fisher_rao::ParametricFamily;
use crate::measure::{DiscreteMeasure, Measure, ScaleConfig};

/// All probability measures on `n` points, parameterized by the first
/// `n - 1` weights; the last weight is `1 - sum p`.
#[derive(Clone, Copy, Debug)]
pub struct SimplexFamily {
    points: usize,
}

impl SimplexFamily {
    pub fn new(points: usize) -> Self {
        assert!(points >= 2, "a simplex family needs at least two points");
        Self { points }
    }

    fn weights(p: &[f64]) -> Vec<f64> {
        let last = 1.0 - p.iter().sum::<f64>();
        p.iter().copied().chain(std::iter::once(last)).collect()
    }
}

impl ParametricFamily for SimplexFamily {
    fn param_dim(&self) -> usize {
        self.points - 1
    }

    fn in_domain(&self, p: &[f64]) -> bool {
        p.len() == self.points - 1 && Self::weights(p).iter().all(|&w| w > 0.0)
    }

    fn realize(&self, p: &[f64]) -> Result<Measure> {
        if p.len() != self.points - 1 {
            return Err(Error::DimensionMismatch {
                expected: self.points - 1,
                found: p.len(),
            });
        }
        Ok(DiscreteMeasure::from_weights(&Self::weights(p))?.into())
    }

    /// `(sigma^2 / 4) (delta_ij / w_i + 1 / w_n)`.
    fn closed_form_metric(&self, p: &[f64], cfg: &ScaleConfig) -> Option<DMatrix<f64>> {
        if !self.in_domain(p) {
            return None;
        }
        let w = Self::weights(p);
        let last = w[self.points - 1];
        let q = 0.25 * cfg.sigma() * cfg.sigma();
        let n = self.points - 1;
        Some(DMatrix::from_fn(n, n, |i, j| {
            q * (if i == j { 1.0 / w[i] } else { 0.0 } + 1.0 / last)
        }))
    }
}
