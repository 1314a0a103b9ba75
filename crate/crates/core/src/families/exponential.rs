use nalgebra::DMatrix;

use super::check_positive;
use crate::error::{Error, Result};
use crate::fisher_rao::ParametricFamily;
use crate::measure::{GridMeasure, Measure, ScaleConfig};

/// `He^2 = 2 sigma^2 (1 - prod sqrt(a_i b_i) / ((a_i + b_i) / 2))` for
/// products of exponential distributions with rates `a` and `b`.
pub fn exp_hellinger(alpha: &[f64], beta: &[f64], cfg: &ScaleConfig) -> Result<f64> {
    check_positive(alpha, beta)?;
    let aff: f64 = alpha
        .iter()
        .zip(beta)
        .map(|(a, b)| (a * b).sqrt() / (0.5 * (a + b)))
        .product();
    Ok((2.0 * cfg.sigma() * cfg.sigma() * (1.0 - aff).max(0.0)).sqrt())
}

/// `(sigma / 2) |log a - log b|`.
pub fn exp_fr(alpha: &[f64], beta: &[f64], cfg: &ScaleConfig) -> Result<f64> {
    check_positive(alpha, beta)?;
    let sq: f64 = alpha.iter().zip(beta).map(|(a, b)| (a / b).ln().powi(2)).sum();
    Ok(0.5 * cfg.sigma() * sq.sqrt())
}

/// Diagonal metric `sigma^2 / (4 a_i^2)`.
pub fn exp_metric(alpha: &[f64], cfg: &ScaleConfig) -> Result<DMatrix<f64>> {
    check_positive(alpha, alpha)?;
    let s2 = cfg.sigma() * cfg.sigma();
    Ok(DMatrix::from_fn(alpha.len(), alpha.len(), |i, j| {
        if i == j {
            0.25 * s2 / (alpha[i] * alpha[i])
        } else {
            0.0
        }
    }))
}

/// Products of exponential distributions, realized as densities on the box
/// `[0, length]^dim` sampled at cell midpoints.
#[derive(Clone, Copy, Debug)]
pub struct ExponentialFamily {
    dim: usize,
    length: f64,
    cells: usize,
}

impl ExponentialFamily {
    /// Box of side 80; `2^16` cells in one dimension, `2^10` per axis otherwise.
    pub fn new(dim: usize) -> Self {
        let cells = if dim == 1 { 1 << 16 } else { 1 << 10 };
        Self {
            dim,
            length: 80.0,
            cells,
        }
    }

    pub fn with_grid(dim: usize, length: f64, cells: usize) -> Self {
        Self { dim, length, cells }
    }
}

impl ParametricFamily for ExponentialFamily {
    fn param_dim(&self) -> usize {
        self.dim
    }

    fn in_domain(&self, p: &[f64]) -> bool {
        p.len() == self.dim && p.iter().all(|x| *x > 0.0 && x.is_finite())
    }

    fn realize(&self, p: &[f64]) -> Result<Measure> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        check_positive(p, p)?;
        let h = self.length / self.cells as f64;
        let g = GridMeasure::from_fn(vec![0.0; self.dim], vec![h; self.dim], vec![self.cells; self.dim], |x| {
            x.iter().zip(p).map(|(x, a)| a * (-a * x).exp()).product()
        })?;
        Ok(g.into())
    }

    fn closed_form_metric(&self, p: &[f64], cfg: &ScaleConfig) -> Option<DMatrix<f64>> {
        exp_metric(p, cfg).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hellinger::hellinger_distance;

    #[test]
    fn closed_form_examples() {
        let cfg = ScaleConfig::default();
        assert_eq!(exp_hellinger(&[2.0], &[2.0], &cfg).unwrap(), 0.0);
        assert!((exp_hellinger(&[1.0], &[4.0], &cfg).unwrap() - 0.4f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            exp_hellinger(&[1.0, 3.0], &[4.0, 0.5], &cfg).unwrap(),
            exp_hellinger(&[4.0, 0.5], &[1.0, 3.0], &cfg).unwrap()
        );
        assert!((exp_fr(&[1.0], &[1f64.exp().powi(2)], &cfg).unwrap() - 1.0).abs() < 1e-15);
        assert!(exp_fr(&[-1.0], &[1.0], &cfg).is_err());
    }

    #[test]
    fn scale_invariance() {
        let cfg = ScaleConfig::new(2.5).unwrap();
        let (a, b, d) = ([0.3, 2.0], [1.7, 0.2], [5.0, 0.01]);
        let scale = |v: &[f64]| -> Vec<f64> { v.iter().zip(&d).map(|(x, y)| x * y).collect() };
        let lhs = exp_fr(&scale(&a), &scale(&b), &cfg).unwrap();
        assert!((lhs - exp_fr(&a, &b, &cfg).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn grid_realization_matches_closed_form() {
        let cfg = ScaleConfig::default();
        let fam = ExponentialFamily::new(1);
        let (a, b) = (fam.realize(&[0.7]).unwrap(), fam.realize(&[2.0]).unwrap());
        let he = hellinger_distance(&a, &b, &cfg).unwrap();
        assert!((he - exp_hellinger(&[0.7], &[2.0], &cfg).unwrap()).abs() < 1e-6);
    }
}
