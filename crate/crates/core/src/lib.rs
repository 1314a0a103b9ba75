//! Hellinger geometry of finite measures and Fisher-Rao distances on
//! families of measures.
//!
//! The crate is organised bottom-up:
//!
//! - [`measure`]: discrete and gridded measures, products, pushforwards, TV norm.
//! - [`hellinger`]: affinity, distance, geodesics and the identities they obey.
//! - [`curves`]: sampled curves, metric speed, growth rates and curve length.
//! - [`fisher_rao`]: finite-difference Fisher matrices, numerical geodesics,
//!   the spherical (Bhattacharyya) distance, cones and products.
//! - [`families`]: closed forms for translations, Poisson, exponential and
//!   Gaussian families, including the Gaussian geodesic system.
//! - [`oracle`]: brute-force and quadrature references used by [`verify`].
//! - [`verify`]: the self-check suites behind the CLI `verify` command.

#![forbid(unsafe_code)]

pub mod curves;
pub mod error;
pub mod families;
pub mod fisher_rao;
pub mod hellinger;
pub(crate) mod linalg;
pub mod measure;
pub mod oracle;
pub mod verify;

pub use error::{Error, Result};
pub use measure::{DiscreteMeasure, GridMeasure, Label, Measure, ScaleConfig};
