//! Gaussian measures `N(m, S)`: Hellinger distance, the Fisher form, the
//! Hamiltonian geodesic system and the known Fisher-Rao closed forms.
//!
//! Fisher-Rao distances use the metric
//! `sigma^2 (v . S^-1 v + tr(S^-1 V S^-1 V) / 2)` on tangent vectors `(v, V)`.
//! Along a geodesic the dual variables `(x, X)` satisfy `m' = S x` and
//! `S' = 2 S X S`.

mod bvp;
mod closed;
mod grid;
mod ode;

pub use bvp::{gaussian_fr_bvp, BvpOptions, BvpSolution};
pub use closed::{gaussian_fr_1d, gaussian_fr_eigvec_case, gaussian_fr_same_center, gaussian_m};
pub use grid::GaussianGridFamily;
pub use ode::{
    gaussian_conserved, gaussian_geodesic_ode, gaussian_hamiltonian, integrate_geodesic, semicircle_residual,
    Conserved, GaussianFlow, GeodesicSample,
};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{asymmetry, check_spd, quad_form, spd_inverse};
use crate::measure::ScaleConfig;

/// Mean and covariance of a nondegenerate Gaussian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRepr", into = "ParamsRepr")]
pub struct GaussianParams {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
struct ParamsRepr {
    mean: Vec<f64>,
    cov: Vec<Vec<f64>>,
}

impl TryFrom<ParamsRepr> for GaussianParams {
    type Error = Error;
    fn try_from(r: ParamsRepr) -> Result<Self> {
        let d = r.mean.len();
        if r.cov.len() != d || r.cov.iter().any(|row| row.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: r.cov.len(),
            });
        }
        let cov = DMatrix::from_fn(d, d, |i, j| r.cov[i][j]);
        GaussianParams::new(DVector::from_vec(r.mean), cov)
    }
}

impl From<GaussianParams> for ParamsRepr {
    fn from(g: GaussianParams) -> Self {
        let d = g.dim();
        ParamsRepr {
            mean: g.mean.iter().copied().collect(),
            cov: (0..d).map(|i| (0..d).map(|j| g.cov[(i, j)]).collect()).collect(),
        }
    }
}

impl GaussianParams {
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        if cov.nrows() != mean.len() || cov.ncols() != mean.len() {
            return Err(Error::DimensionMismatch {
                expected: mean.len(),
                found: cov.nrows(),
            });
        }
        if mean.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        check_spd(&cov)?;
        Ok(Self { mean, cov })
    }

    pub fn from_slices(mean: &[f64], cov: &[f64]) -> Result<Self> {
        let d = mean.len();
        if cov.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: cov.len(),
            });
        }
        Self::new(DVector::from_column_slice(mean), DMatrix::from_row_slice(d, d, cov))
    }

    /// One-dimensional Gaussian with mean `m` and variance `var`.
    pub fn scalar(m: f64, var: f64) -> Result<Self> {
        Self::from_slices(&[m], &[var])
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("parameters always serialize")
    }
}

/// Dual variables `(x, X)` of a Gaussian geodesic; `X` is symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianCotangent {
    mean_dual: DVector<f64>,
    cov_dual: DMatrix<f64>,
}

impl GaussianCotangent {
    pub fn new(mean_dual: DVector<f64>, cov_dual: DMatrix<f64>) -> Result<Self> {
        if cov_dual.nrows() != mean_dual.len() || cov_dual.ncols() != mean_dual.len() {
            return Err(Error::DimensionMismatch {
                expected: mean_dual.len(),
                found: cov_dual.nrows(),
            });
        }
        if asymmetry(&cov_dual) > 1e-12 {
            return Err(Error::ConditionViolated("covariance dual must be symmetric".into()));
        }
        Ok(Self { mean_dual, cov_dual })
    }

    pub fn zeros(d: usize) -> Self {
        Self {
            mean_dual: DVector::zeros(d),
            cov_dual: DMatrix::zeros(d, d),
        }
    }

    pub fn mean_dual(&self) -> &DVector<f64> {
        &self.mean_dual
    }

    pub fn cov_dual(&self) -> &DMatrix<f64> {
        &self.cov_dual
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: a, found: b })
    }
}

/// `He^2 = 2 sigma^2 (1 - BC)` with the Bhattacharyya coefficient
/// `BC = (det S0 det S1)^(1/4) / det((S0 + S1)/2)^(1/2) * exp(-dm . (S0 + S1)^-1 dm / 4)`.
pub fn gaussian_hellinger(g0: &GaussianParams, g1: &GaussianParams, cfg: &ScaleConfig) -> Result<f64> {
    same_dim(g0.dim(), g1.dim())?;
    let avg = (&g0.cov + &g1.cov) * 0.5;
    let chol = avg.clone().cholesky().ok_or(Error::NotSpd)?;
    let log_det = |m: &DMatrix<f64>| -> Result<f64> {
        let l = m.clone().cholesky().ok_or(Error::NotSpd)?.l();
        Ok(2.0 * l.diagonal().iter().map(|x| x.ln()).sum::<f64>())
    };
    let dm = &g1.mean - &g0.mean;
    // (S0 + S1)^-1 = avg^-1 / 2
    let maha = 0.5 * dm.dot(&chol.solve(&dm));
    let log_bc = 0.25 * (log_det(&g0.cov)? + log_det(&g1.cov)?) - 0.5 * log_det(&avg)? - 0.25 * maha;
    let two_sig2 = 2.0 * cfg.sigma() * cfg.sigma();
    Ok((two_sig2 * -log_bc.exp_m1()).max(0.0).sqrt())
}

/// `sigma^2 (v . S^-1 v + tr(S^-1 V S^-1 V) / 2)` for a tangent vector
/// `(v, V) = (mean_rate, cov_rate)` at `g`.
pub fn gaussian_fisher_form(
    g: &GaussianParams,
    mean_rate: &DVector<f64>,
    cov_rate: &DMatrix<f64>,
    cfg: &ScaleConfig,
) -> Result<f64> {
    same_dim(g.dim(), mean_rate.len())?;
    same_dim(g.dim(), cov_rate.nrows())?;
    same_dim(g.dim(), cov_rate.ncols())?;
    let inv = spd_inverse(&g.cov)?;
    let w = &inv * cov_rate;
    let val = quad_form(&inv, mean_rate) + 0.5 * (&w * &w).trace();
    Ok(cfg.sigma() * cfg.sigma() * val.max(0.0))
}

/// How [`gaussian_fr`] obtained its value.
#[derive(Clone, Debug, PartialEq)]
pub enum FrMethod {
    OneDimensional,
    CommonMean,
    EigenvectorShift,
    Shooting { residual: f64, newton_iterations: usize },
}

impl FrMethod {
    pub fn describe(&self) -> &'static str {
        match self {
            FrMethod::OneDimensional => "closed form, one dimension",
            FrMethod::CommonMean => "closed form, common mean",
            FrMethod::EigenvectorShift => "closed form, mean shift along an eigenvector",
            FrMethod::Shooting { .. } => "shooting",
        }
    }
}

/// Fisher-Rao distance from the first applicable closed form, falling back
/// to shooting with default options.
pub fn gaussian_fr(g0: &GaussianParams, g1: &GaussianParams, cfg: &ScaleConfig) -> Result<(f64, FrMethod)> {
    same_dim(g0.dim(), g1.dim())?;
    if g0.dim() == 1 {
        return Ok((gaussian_fr_1d(g0, g1, cfg)?, FrMethod::OneDimensional));
    }
    if g0.mean == g1.mean {
        return Ok((gaussian_fr_same_center(&g0.cov, &g1.cov, cfg)?, FrMethod::CommonMean));
    }
    match gaussian_fr_eigvec_case(g0, g1, cfg) {
        Ok(v) => Ok((v, FrMethod::EigenvectorShift)),
        Err(Error::ConditionViolated(_)) => {
            let sol = gaussian_fr_bvp(g0, g1, cfg, &BvpOptions::default())?;
            let method = FrMethod::Shooting {
                residual: sol.residual,
                newton_iterations: sol.newton_iterations,
            };
            Ok((sol.distance, method))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_json_round_trip() {
        let g = GaussianParams::from_slices(&[0.5, -1.0], &[2.0, 0.3, 0.3, 1.0]).unwrap();
        let text = g.to_json();
        assert_eq!(text, r#"{"mean":[0.5,-1.0],"cov":[[2.0,0.3],[0.3,1.0]]}"#);
        assert_eq!(GaussianParams::from_json(&text).unwrap(), g);
        assert!(GaussianParams::from_json(r#"{"mean":[0.0],"cov":[[-1.0]]}"#).is_err());
        assert!(GaussianParams::from_json(r#"{"mean":[0.0,1.0],"cov":[[1.0]]}"#).is_err());
    }

    #[test]
    fn hellinger_examples() {
        let cfg = ScaleConfig::default();
        let a = GaussianParams::scalar(0.0, 1.0).unwrap();
        assert_eq!(gaussian_hellinger(&a, &a, &cfg).unwrap(), 0.0);
        let b = GaussianParams::scalar(0.0, 4.0).unwrap();
        let he = gaussian_hellinger(&a, &b, &cfg).unwrap();
        assert!((he * he - 0.211146).abs() < 1e-6, "{}", he * he);
        // Unit variances: BC = exp(-dm^2 / 8).
        let c = GaussianParams::scalar(2.0, 1.0).unwrap();
        let he = gaussian_hellinger(&a, &c, &cfg).unwrap();
        assert!((he * he - 2.0 * (1.0 - (-0.5f64).exp())).abs() < 1e-14);
        assert!(gaussian_hellinger(&a, &GaussianParams::from_slices(&[0.0, 0.0], &[1.0, 0.0, 0.0, 1.0]).unwrap(), &cfg).is_err());
    }

    #[test]
    fn hellinger_translation_invariant() {
        let cfg = ScaleConfig::new(0.9).unwrap();
        let a = GaussianParams::from_slices(&[0.0, 1.0], &[2.0, 0.3, 0.3, 1.0]).unwrap();
        let b = GaussianParams::from_slices(&[1.0, -1.0], &[1.0, -0.2, -0.2, 0.5]).unwrap();
        let a2 = GaussianParams::from_slices(&[5.0, 6.0], &[2.0, 0.3, 0.3, 1.0]).unwrap();
        let b2 = GaussianParams::from_slices(&[6.0, 4.0], &[1.0, -0.2, -0.2, 0.5]).unwrap();
        let d1 = gaussian_hellinger(&a, &b, &cfg).unwrap();
        let d2 = gaussian_hellinger(&a2, &b2, &cfg).unwrap();
        assert!((d1 - d2).abs() < 1e-14);
    }

    #[test]
    fn fisher_form_examples() {
        let cfg = ScaleConfig::default();
        let g = GaussianParams::scalar(0.0, 1.0).unwrap();
        let zero = gaussian_fisher_form(&g, &DVector::zeros(1), &DMatrix::zeros(1, 1), &cfg).unwrap();
        assert_eq!(zero, 0.0);
        let one = gaussian_fisher_form(&g, &DVector::from_element(1, 1.0), &DMatrix::zeros(1, 1), &cfg).unwrap();
        assert_eq!(one, 1.0);
    }

    #[test]
    fn cotangent_must_be_symmetric() {
        let bad = GaussianCotangent::new(DVector::zeros(2), DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        assert!(bad.is_err());
    }

    #[test]
    fn dispatch_picks_the_applicable_route() {
        let cfg = ScaleConfig::default();
        let g = |m: &[f64], c: &[f64]| GaussianParams::from_slices(m, c).unwrap();
        let (_, m) = gaussian_fr(&g(&[0.0], &[1.0]), &g(&[1.0], &[2.0]), &cfg).unwrap();
        assert_eq!(m, FrMethod::OneDimensional);
        let id = g(&[0.0, 0.0], &[1.0, 0.0, 0.0, 1.0]);
        let (_, m) = gaussian_fr(&id, &g(&[0.0, 0.0], &[2.0, 0.3, 0.3, 1.0]), &cfg).unwrap();
        assert_eq!(m, FrMethod::CommonMean);
        let (_, m) = gaussian_fr(&id, &g(&[1.0, 0.0], &[2.0, 0.0, 0.0, 1.0]), &cfg).unwrap();
        assert_eq!(m, FrMethod::EigenvectorShift);
        let (d, m) = gaussian_fr(&id, &g(&[1.0, 0.5], &[2.0, 0.3, 0.3, 1.0]), &cfg).unwrap();
        assert!(matches!(m, FrMethod::Shooting { .. }));
        assert!(d > 0.0);
    }
}
