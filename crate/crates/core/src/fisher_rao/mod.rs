//! Fisher-Rao distances: intrinsic distances on subsets of measures when the
//! Hellinger distance is the ambient metric.
//!
//! For a smooth family `p -> mu(p)` the induced Riemannian metric is the
//! second-order coefficient of `He(mu(p), mu(p + v))^2`; it is recovered here
//! by finite differences or supplied in closed form by the family.

mod cone;
mod optimizer;
mod spherical;

pub use cone::{cone_distance, cone_geodesic, cos_pi, ConePoint};
pub use optimizer::{fr_distance_numeric, FrOptions, FrPath};
pub use spherical::{bhattacharyya_distance, spherical_geodesic};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hellinger::hellinger_distance;
use crate::linalg::symmetrize;
use crate::measure::{Measure, ScaleConfig};

/// A finite-dimensional parameterized family of measures.
pub trait ParametricFamily {
    fn param_dim(&self) -> usize;

    fn in_domain(&self, p: &[f64]) -> bool;

    /// The measure at parameter `p`; all realizations must be mutually comparable.
    fn realize(&self, p: &[f64]) -> Result<Measure>;

    /// Exact metric matrix, if the family knows it.
    fn closed_form_metric(&self, _p: &[f64], _cfg: &ScaleConfig) -> Option<DMatrix<f64>> {
        None
    }

    /// Maps a point that left the domain back into it.
    fn project(&self, p: Vec<f64>) -> Vec<f64> {
        p
    }
}

impl<F: ParametricFamily + ?Sized> ParametricFamily for &F {
    fn param_dim(&self) -> usize {
        (**self).param_dim()
    }
    fn in_domain(&self, p: &[f64]) -> bool {
        (**self).in_domain(p)
    }
    fn realize(&self, p: &[f64]) -> Result<Measure> {
        (**self).realize(p)
    }
    fn closed_form_metric(&self, p: &[f64], cfg: &ScaleConfig) -> Option<DMatrix<f64>> {
        (**self).closed_form_metric(p, cfg)
    }
    fn project(&self, p: Vec<f64>) -> Vec<f64> {
        (**self).project(p)
    }
}

pub(crate) fn check_dim<F: ParametricFamily + ?Sized>(family: &F, p: &[f64]) -> Result<()> {
    if p.len() == family.param_dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: family.param_dim(),
            found: p.len(),
        })
    }
}

pub(crate) fn check_domain<F: ParametricFamily + ?Sized>(family: &F, p: &[f64]) -> Result<()> {
    check_dim(family, p)?;
    if family.in_domain(p) {
        Ok(())
    } else {
        Err(Error::StepOutOfDomain(format!("{p:?}")))
    }
}

/// Default finite-difference step `1e-4 * (1 + |p|)`.
pub fn default_step(p: &[f64]) -> f64 {
    1e-4 * (1.0 + p.iter().map(|x| x * x).sum::<f64>().sqrt())
}

fn offset(p: &[f64], v: &[f64], t: f64) -> Vec<f64> {
    p.iter().zip(v).map(|(a, b)| a + t * b).collect()
}

/// `[He(p, p + eps v)^2 + He(p, p - eps v)^2] / (2 eps^2)`.
fn second_difference<F: ParametricFamily + ?Sized>(
    family: &F,
    centre: &Measure,
    p: &[f64],
    v: &[f64],
    eps: f64,
    cfg: &ScaleConfig,
) -> Result<f64> {
    let mut total = 0.0;
    for t in [eps, -eps] {
        let q = offset(p, v, t);
        check_domain(family, &q)?;
        total += hellinger_distance(centre, &family.realize(&q)?, cfg)?.powi(2);
    }
    Ok(total / (2.0 * eps * eps))
}

/// Richardson-extrapolated quadratic form `v . G(p) v` from steps `eps` and `eps/2`.
fn quadratic_form<F: ParametricFamily + ?Sized>(
    family: &F,
    centre: &Measure,
    p: &[f64],
    v: &[f64],
    eps: f64,
    cfg: &ScaleConfig,
) -> Result<f64> {
    let coarse = second_difference(family, centre, p, v, eps, cfg)?;
    let fine = second_difference(family, centre, p, v, 0.5 * eps, cfg)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Fisher matrix from second differences of `He^2`, with off-diagonal
/// entries obtained by polarization. The result is symmetric.
pub fn fisher_matrix_fd<F: ParametricFamily + ?Sized>(
    family: &F,
    p: &[f64],
    eps: f64,
    cfg: &ScaleConfig,
) -> Result<DMatrix<f64>> {
    check_domain(family, p)?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::StepOutOfDomain(format!("step {eps}")));
    }
    let n = family.param_dim();
    let centre = family.realize(p)?;
    let unit = |i: usize| -> Vec<f64> { (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect() };
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = quadratic_form(family, &centre, p, &unit(i), eps, cfg)?;
    }
    for i in 0..n {
        for j in i + 1..n {
            let plus: Vec<f64> = (0..n).map(|k| if k == i || k == j { 1.0 } else { 0.0 }).collect();
            let minus: Vec<f64> = (0..n)
                .map(|k| match k {
                    k if k == i => 1.0,
                    k if k == j => -1.0,
                    _ => 0.0,
                })
                .collect();
            let qp = quadratic_form(family, &centre, p, &plus, eps, cfg)?;
            let qm = quadratic_form(family, &centre, p, &minus, eps, cfg)?;
            g[(i, j)] = 0.25 * (qp - qm);
            g[(j, i)] = g[(i, j)];
        }
    }
    Ok(symmetrize(&g))
}

/// The closed-form metric when available, otherwise the finite-difference one.
pub fn metric_at<F: ParametricFamily + ?Sized>(family: &F, p: &[f64], cfg: &ScaleConfig) -> Result<DMatrix<f64>> {
    check_domain(family, p)?;
    match family.closed_form_metric(p, cfg) {
        Some(g) => Ok(g),
        None => fisher_matrix_fd(family, p, default_step(p), cfg),
    }
}

fn check_path<F: ParametricFamily + ?Sized>(family: &F, path: &[Vec<f64>]) -> Result<()> {
    if path.is_empty() {
        return Err(Error::InvalidCurve("empty parameter path".into()));
    }
    path.iter().try_for_each(|p| check_domain(family, p))
}

/// Riemannian length `sum_k sqrt(dp_k . G(mid_k) dp_k)` of a polygonal
/// parameter path, with the metric evaluated at segment midpoints.
pub fn path_length<F: ParametricFamily + ?Sized>(family: &F, path: &[Vec<f64>], cfg: &ScaleConfig) -> Result<f64> {
    check_path(family, path)?;
    let mut total = 0.0;
    for w in path.windows(2) {
        let dp: Vec<f64> = w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect();
        if dp.iter().all(|&x| x == 0.0) {
            continue;
        }
        let mid: Vec<f64> = w[0].iter().zip(&w[1]).map(|(a, b)| 0.5 * (a + b)).collect();
        let g = metric_at(family, &mid, cfg)?;
        let v = nalgebra::DVector::from_vec(dp);
        total += crate::linalg::quad_form(&g, &v).max(0.0).sqrt();
    }
    Ok(total)
}

/// Polygonal length `sum_k He(mu(p_k), mu(p_{k+1}))`; never exceeds the
/// Riemannian length and agrees with it as the path is refined.
pub fn path_length_chords<F: ParametricFamily + ?Sized>(family: &F, path: &[Vec<f64>], cfg: &ScaleConfig) -> Result<f64> {
    check_path(family, path)?;
    let measures = path.iter().map(|p| family.realize(p)).collect::<Result<Vec<_>>>()?;
    measures
        .windows(2)
        .map(|w| hellinger_distance(&w[0], &w[1], cfg))
        .sum()
}

/// `sqrt(fr1^2 + fr2^2)`: the distance on a product of two families.
pub fn product_fr(fr1: f64, fr2: f64) -> f64 {
    fr1.hypot(fr2)
}
