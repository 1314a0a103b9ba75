//! Closed forms for parametric families: translations of a fixed profile,
//! Poisson and exponential distributions, the probability simplex and
//! Gaussians, together with the Gaussian geodesic system.

mod exponential;
pub mod gaussian;
mod poisson;
mod simplex;
mod translation;

pub use exponential::{exp_fr, exp_hellinger, exp_metric, ExponentialFamily};
pub use gaussian::{
    gaussian_conserved, gaussian_fisher_form, gaussian_fr, gaussian_fr_1d, gaussian_fr_bvp, gaussian_fr_eigvec_case,
    gaussian_fr_same_center, gaussian_geodesic_ode, gaussian_hamiltonian, gaussian_hellinger, gaussian_m,
    BvpOptions, BvpSolution, Conserved, FrMethod, GaussianCotangent, GaussianGridFamily, GaussianParams,
};
pub use poisson::{poisson_fr, poisson_hellinger, poisson_metric, PoissonFamily};
pub use simplex::SimplexFamily;
pub use translation::{
    indicator_chord_length, translation_fr, translation_indicator_demo, translation_metric, IndicatorDemo,
};

use crate::error::{Error, Result};

pub(crate) fn check_positive(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.is_empty() || a.iter().chain(b).any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Error::NonPositiveParam);
    }
    Ok(())
}
