use nalgebra::{DMatrix, SymmetricEigen};

use super::{same_dim, GaussianParams};
use crate::error::{Error, Result};
use crate::linalg::{check_spd, generalized_eigenvalues, sym_inv_sqrt, symmetrize};
use crate::measure::ScaleConfig;

/// Hyperbolic kernel
/// `sqrt(2) ln( (sqrt(D + 2 (a + 1/a)^2) + sqrt(D + 2 (a - 1/a)^2))^2 / 8 )`
/// with `a = L^(1/4)`.
pub fn gaussian_m(delta: f64, lambda: f64) -> Result<f64> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::ConditionViolated(format!("first argument must be >= 0, got {delta}")));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::ConditionViolated(format!("second argument must be > 0, got {lambda}")));
    }
    let a = lambda.powf(0.25);
    let plus = (delta + 2.0 * (a + 1.0 / a).powi(2)).sqrt();
    let minus = (delta + 2.0 * (a - 1.0 / a).powi(2)).sqrt();
    // sqrt(2) ln(x^2 / 8) written as 2 sqrt(2) ln(x / sqrt(8)).
    let ratio = (plus + minus) / 8f64.sqrt();
    Ok((2.0 * std::f64::consts::SQRT_2 * ratio.ln()).max(0.0))
}

/// One-dimensional closed form `sigma M(dm^2 / sqrt(S0 S1), S1 / S0)`.
pub fn gaussian_fr_1d(g0: &GaussianParams, g1: &GaussianParams, cfg: &ScaleConfig) -> Result<f64> {
    for g in [g0, g1] {
        if g.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: g.dim(),
            });
        }
    }
    let (s0, s1) = (g0.cov()[(0, 0)], g1.cov()[(0, 0)]);
    let dm = g1.mean()[0] - g0.mean()[0];
    Ok(cfg.sigma() * gaussian_m(dm * dm / (s0 * s1).sqrt(), s1 / s0)?)
}

/// Same-center closed form `sigma sqrt(sum (ln L_n)^2 / 2)` over the
/// generalized eigenvalues `L_n` of `(S1, S0)`.
pub fn gaussian_fr_same_center(cov0: &DMatrix<f64>, cov1: &DMatrix<f64>, cfg: &ScaleConfig) -> Result<f64> {
    same_dim(cov0.nrows(), cov1.nrows())?;
    check_spd(cov0)?;
    check_spd(cov1)?;
    let sq: f64 = generalized_eigenvalues(cov0, cov1)?.iter().map(|l| l.ln().powi(2)).sum();
    Ok(cfg.sigma() * (0.5 * sq).sqrt())
}

/// Closed form when `u = S0^(-1/2) (m1 - m0)` is an eigenvector of
/// `W = S0^(-1/2) S1 S0^(-1/2)`: the eigen-direction of `u` contributes a
/// one-dimensional block `M(|S0^(-1/2) dm| |S1^(-1/2) dm|, L_u)`, the other
/// eigenvalues contribute `M(0, L_n)`.
pub fn gaussian_fr_eigvec_case(g0: &GaussianParams, g1: &GaussianParams, cfg: &ScaleConfig) -> Result<f64> {
    same_dim(g0.dim(), g1.dim())?;
    let dm = g1.mean() - g0.mean();
    let inv_root = sym_inv_sqrt(g0.cov());
    let whitened = symmetrize(&(&inv_root * g1.cov() * &inv_root));
    let u = &inv_root * &dm;
    let eig = SymmetricEigen::new(whitened.clone());
    let mut lambdas: Vec<f64> = eig.eigenvalues.iter().copied().collect();

    let mut sq = 0.0;
    let un = u.norm();
    if un > 0.0 {
        let wu = &whitened * &u;
        let rayleigh = u.dot(&wu) / (un * un);
        let off = (&wu - &u * rayleigh).norm();
        if off > 1e-8 * wu.norm() {
            return Err(Error::ConditionViolated(format!(
                "mean shift is not a generalized eigenvector (residual {:.3e})",
                off / wu.norm()
            )));
        }
        let (pos, _) = lambdas
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - rayleigh).abs().total_cmp(&(b.1 - rayleigh).abs()))
            .expect("nonempty spectrum");
        let lam = lambdas.remove(pos);
        // |S1^(-1/2) dm|^2 = u . W^-1 u = |u|^2 / L_u.
        let spread = un * (un / lam.sqrt());
        sq += gaussian_m(spread, lam)?.powi(2);
    }
    for l in lambdas {
        sq += gaussian_m(0.0, l)?.powi(2);
    }
    Ok(cfg.sigma() * sq.sqrt())
}
