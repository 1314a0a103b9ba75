use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::{gaussian_fisher_form, GaussianParams};
use crate::error::{Error, Result};
use crate::fisher_rao::ParametricFamily;
use crate::linalg::{check_spd, spd_inverse};
use crate::measure::{GridMeasure, Measure, ScaleConfig};

/// Gaussian densities in dimension 1 or 2 sampled on a fixed box.
///
/// Parameters are `(m, S)` for `d = 1` and `(m1, m2, S11, S12, S22)` for
/// `d = 2`. The metric reported as closed form is the Gaussian Fisher form
/// in these coordinates.
#[derive(Clone, Debug)]
pub struct GaussianGridFamily {
    dim: usize,
    origin: Vec<f64>,
    spacing: Vec<f64>,
    points: usize,
}

impl GaussianGridFamily {
    /// Box with the given lower corner and side lengths, `points` cells per axis.
    pub fn new(lower: Vec<f64>, sides: Vec<f64>, points: usize) -> Result<Self> {
        let dim = lower.len();
        if !(1..=2).contains(&dim) || sides.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim.clamp(1, 2),
                found: sides.len(),
            });
        }
        let spacing = sides.iter().map(|s| s / points as f64).collect();
        Ok(Self {
            dim,
            origin: lower,
            spacing,
            points,
        })
    }

    /// Box covering eight standard deviations around every given Gaussian,
    /// with `2^12` points per axis in one dimension and `2^9` in two.
    pub fn covering(gaussians: &[&GaussianParams]) -> Result<Self> {
        let first = gaussians.first().ok_or(Error::DimensionMismatch { expected: 1, found: 0 })?;
        let dim = first.dim();
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for g in gaussians {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.dim(),
                });
            }
            for i in 0..dim {
                let sd = g.cov()[(i, i)].sqrt();
                lo[i] = lo[i].min(g.mean()[i] - 8.0 * sd);
                hi[i] = hi[i].max(g.mean()[i] + 8.0 * sd);
            }
        }
        let points = if dim == 1 { 1 << 12 } else { 1 << 9 };
        let sides = lo.iter().zip(&hi).map(|(a, b)| b - a).collect();
        Self::new(lo, sides, points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params_to_vec(&self, g: &GaussianParams) -> Vec<f64> {
        let (m, s) = (g.mean(), g.cov());
        if self.dim == 1 {
            vec![m[0], s[(0, 0)]]
        } else {
            vec![m[0], m[1], s[(0, 0)], s[(0, 1)], s[(1, 1)]]
        }
    }

    pub fn vec_to_params(&self, p: &[f64]) -> Result<GaussianParams> {
        let (mean, cov) = self.split(p)?;
        GaussianParams::new(mean, cov)
    }

    fn split(&self, p: &[f64]) -> Result<(DVector<f64>, DMatrix<f64>)> {
        if p.len() != self.param_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.param_dim(),
                found: p.len(),
            });
        }
        Ok(if self.dim == 1 {
            (DVector::from_element(1, p[0]), DMatrix::from_element(1, 1, p[1]))
        } else {
            (
                DVector::from_vec(vec![p[0], p[1]]),
                DMatrix::from_row_slice(2, 2, &[p[2], p[3], p[3], p[4]]),
            )
        })
    }

    /// Tangent vector `(v, V)` for a parameter displacement.
    fn tangent(&self, dp: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        self.split(dp).expect("displacement has parameter length")
    }
}

impl ParametricFamily for GaussianGridFamily {
    fn param_dim(&self) -> usize {
        if self.dim == 1 {
            2
        } else {
            5
        }
    }

    fn in_domain(&self, p: &[f64]) -> bool {
        match self.split(p) {
            Ok((m, s)) => m.iter().all(|x| x.is_finite()) && check_spd(&s).is_ok(),
            Err(_) => false,
        }
    }

    fn realize(&self, p: &[f64]) -> Result<Measure> {
        let g = self.vec_to_params(p)?;
        let inv = spd_inverse(g.cov())?;
        let det = g.cov().determinant();
        let norm = 1.0 / ((2.0 * PI).powi(self.dim as i32) * det).sqrt();
        let mean = g.mean().clone();
        let grid = GridMeasure::from_fn(self.origin.clone(), self.spacing.clone(), vec![self.points; self.dim], |x| {
            let y = DVector::from_iterator(x.len(), x.iter().zip(mean.iter()).map(|(a, b)| a - b));
            norm * (-0.5 * y.dot(&(&inv * &y))).exp()
        })?;
        Ok(grid.into())
    }

    fn closed_form_metric(&self, p: &[f64], cfg: &ScaleConfig) -> Option<DMatrix<f64>> {
        let g = self.vec_to_params(p).ok()?;
        let n = self.param_dim();
        let form = |dp: &[f64]| -> Option<f64> {
            let (v, vv) = self.tangent(dp);
            gaussian_fisher_form(&g, &v, &vv, cfg).ok()
        };
        let unit = |i: usize, j: Option<usize>, sign: f64| -> Vec<f64> {
            (0..n)
                .map(|k| {
                    if k == i {
                        1.0
                    } else if Some(k) == j {
                        sign
                    } else {
                        0.0
                    }
                })
                .collect()
        };
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = form(&unit(i, None, 0.0))?;
            for j in 0..i {
                let v = 0.25 * (form(&unit(i, Some(j), 1.0))? - form(&unit(i, Some(j), -1.0))?);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Some(m)
    }

    fn project(&self, p: Vec<f64>) -> Vec<f64> {
        if self.in_domain(&p) {
            return p;
        }
        // Lift the covariance eigenvalues to a small positive floor.
        match self.split(&p) {
            Ok((m, s)) => {
                let eig = nalgebra::SymmetricEigen::new(crate::linalg::symmetrize(&s));
                let vals = eig.eigenvalues.map(|l| l.max(1e-6));
                let fixed = &eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.transpose();
                let g = GaussianParams::new(m, crate::linalg::symmetrize(&fixed));
                g.map(|g| self.params_to_vec(&g)).unwrap_or(p)
            }
            Err(_) => p,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::gaussian::gaussian_hellinger;
    use crate::hellinger::hellinger_distance;

    #[test]
    fn grid_hellinger_matches_closed_form() {
        let cfg = ScaleConfig::default();
        let g0 = GaussianParams::scalar(0.0, 1.0).unwrap();
        let g1 = GaussianParams::scalar(0.7, 2.5).unwrap();
        let fam = GaussianGridFamily::covering(&[&g0, &g1]).unwrap();
        let a = fam.realize(&fam.params_to_vec(&g0)).unwrap();
        let b = fam.realize(&fam.params_to_vec(&g1)).unwrap();
        let grid = hellinger_distance(&a, &b, &cfg).unwrap();
        assert!((grid - gaussian_hellinger(&g0, &g1, &cfg).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn metric_is_symmetric_and_matches_form() {
        let cfg = ScaleConfig::new(0.5).unwrap();
        let g = GaussianParams::from_slices(&[0.1, 0.2], &[1.0, 0.3, 0.3, 2.0]).unwrap();
        let fam = GaussianGridFamily::covering(&[&g]).unwrap();
        let p = fam.params_to_vec(&g);
        let m = fam.closed_form_metric(&p, &cfg).unwrap();
        assert_eq!(m, m.transpose());
        let dp = [0.3, -0.1, 0.2, 0.05, -0.4];
        let (v, vv) = fam.tangent(&dp);
        let direct = gaussian_fisher_form(&g, &v, &vv, &cfg).unwrap();
        let w = DVector::from_row_slice(&dp);
        assert!((w.dot(&(&m * &w)) - direct).abs() < 1e-13);
    }
}
