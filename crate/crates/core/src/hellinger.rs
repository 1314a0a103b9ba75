//! Hellinger affinity, distance, geodesics and the Hilbert-like identities
//! they satisfy.
//!
//! Every pairwise operation works pointwise on the weights of the two
//! measures relative to their common reference (see [`crate::measure`]).
//! Taking square roots of the weights maps a measure isometrically into a
//! Euclidean space, which is why geodesics, averages and angles all have
//! planar closed forms.

use crate::error::{clamped_acos, clamped_sqrt, Error, Result};
use crate::measure::{pair, DiscreteMeasure, Measure, Paired, ScaleConfig};

fn check_s(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::SOutOfRange(s))
    }
}

/// Squared distance `sum (sqrt w1 - sqrt w0)^2 * volume` with `sigma = 1`.
fn unit_sq_distance(p: &Paired) -> f64 {
    p.volume
        * p.w0
            .iter()
            .zip(&p.w1)
            .map(|(a, b)| {
                let d = b.sqrt() - a.sqrt();
                d * d
            })
            .sum::<f64>()
}

/// Pointwise geometric mean `sqrt(w0 * w1)`.
pub fn hellinger_affinity(mu0: &Measure, mu1: &Measure) -> Result<Measure> {
    let p = pair(mu0, mu1)?;
    let w = p.w0.iter().zip(&p.w1).map(|(a, b)| (a * b).sqrt()).collect();
    p.build(w)
}

/// Total mass of the affinity measure (the Hellinger integral).
pub fn affinity_mass(mu0: &Measure, mu1: &Measure) -> Result<f64> {
    let p = pair(mu0, mu1)?;
    Ok(p.volume * p.w0.iter().zip(&p.w1).map(|(a, b)| (a * b).sqrt()).sum::<f64>())
}

/// Pointwise `w0^alpha * w1^(1-alpha)`; `alpha = 1` returns `mu0`, `alpha = 0` returns `mu1`.
pub fn alpha_affinity(mu0: &Measure, mu1: &Measure, alpha: f64) -> Result<Measure> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let p = pair(mu0, mu1)?;
    let w = p
        .w0
        .iter()
        .zip(&p.w1)
        .map(|(&a, &b)| {
            if alpha == 1.0 {
                a
            } else if alpha == 0.0 {
                b
            } else {
                a.powf(alpha) * b.powf(1.0 - alpha)
            }
        })
        .collect();
    p.build(w)
}

/// Hellinger distance `sigma * sqrt(mass0 + mass1 - 2 * affinity_mass)`.
///
/// Evaluated as `sigma * ||sqrt(w1) - sqrt(w0)||`, which is the same quantity
/// without the cancellation of the mass form.
pub fn hellinger_distance(mu0: &Measure, mu1: &Measure, cfg: &ScaleConfig) -> Result<f64> {
    let p = pair(mu0, mu1)?;
    Ok(cfg.sigma() * unit_sq_distance(&p).sqrt())
}

/// Constant-speed geodesic `((1-s) sqrt w0 + s sqrt w1)^2`; the endpoints are returned verbatim.
pub fn hellinger_geodesic(mu0: &Measure, mu1: &Measure, s: f64) -> Result<Measure> {
    check_s(s)?;
    let p = pair(mu0, mu1)?;
    if s == 0.0 {
        return Ok(mu0.clone());
    }
    if s == 1.0 {
        return Ok(mu1.clone());
    }
    let w = p
        .w0
        .iter()
        .zip(&p.w1)
        .map(|(a, b)| {
            let r = (1.0 - s) * a.sqrt() + s * b.sqrt();
            r * r
        })
        .collect();
    p.build(w)
}

/// Total mass along the geodesic, `(1-s) m0 + s m1 - (s - s^2) He^2 / sigma^2`.
pub fn geodesic_mass(mu0: &Measure, mu1: &Measure, s: f64, cfg: &ScaleConfig) -> Result<f64> {
    check_s(s)?;
    let he = hellinger_distance(mu0, mu1, cfg)?;
    let sig2 = cfg.sigma() * cfg.sigma();
    Ok((1.0 - s) * mu0.total_mass() + s * mu1.total_mass() - (s - s * s) * he * he / sig2)
}

/// Geodesic midpoint `mu0/4 + mu1/4 + sqrt(mu0 mu1)/2`.
pub fn hellinger_average(mu0: &Measure, mu1: &Measure) -> Result<Measure> {
    let p = pair(mu0, mu1)?;
    let w = p
        .w0
        .iter()
        .zip(&p.w1)
        .map(|(a, b)| 0.25 * a + 0.25 * b + 0.5 * (a * b).sqrt())
        .collect();
    p.build(w)
}

/// Hellinger quadratic form `(sigma^2/4) sum nu1 nu2 / w` for signed
/// perturbations given atom-by-atom in the stored order of `mu`.
///
/// Returns `+inf` when a perturbation charges an atom of zero weight.
pub fn hellinger_quadratic_form(mu: &DiscreteMeasure, nu1: &[f64], nu2: &[f64], cfg: &ScaleConfig) -> Result<f64> {
    let w = mu.weights();
    if nu1.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            found: nu1.len(),
        });
    }
    if nu2.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            found: nu2.len(),
        });
    }
    let mut acc = 0.0;
    for ((&wi, &a), &b) in w.iter().zip(nu1).zip(nu2) {
        if wi > crate::measure::NULL_WEIGHT {
            acc += a * b / wi;
        } else if a != 0.0 || b != 0.0 {
            return Ok(f64::INFINITY);
        }
    }
    Ok(0.25 * cfg.sigma() * cfg.sigma() * acc)
}

/// Angle at `mu0` between the geodesics towards `mu1` and `mu2`.
pub fn angle_between(mu0: &Measure, mu1: &Measure, mu2: &Measure, cfg: &ScaleConfig) -> Result<f64> {
    let a = hellinger_distance(mu0, mu1, cfg)?;
    let b = hellinger_distance(mu0, mu2, cfg)?;
    let c = hellinger_distance(mu1, mu2, cfg)?;
    if a == 0.0 || b == 0.0 {
        return Err(Error::DegenerateAngle);
    }
    clamped_acos((a * a + b * b - c * c) / (2.0 * a * b), "angle_between")
}

/// `He(r0^2 mu0, r1^2 mu1)` from `He(mu0, mu1)` and the two masses.
pub fn scaled_distance(r0: f64, r1: f64, mu0: &Measure, mu1: &Measure, cfg: &ScaleConfig) -> Result<f64> {
    if !(r0 >= 0.0 && r1 >= 0.0) {
        return Err(Error::ConditionViolated("radii must be nonnegative".into()));
    }
    let he = hellinger_distance(mu0, mu1, cfg)?;
    let sig2 = cfg.sigma() * cfg.sigma();
    let (m0, m1) = (mu0.total_mass(), mu1.total_mass());
    let sq = r0 * r1 * he * he + sig2 * (r0 * r0 - r0 * r1) * m0 + sig2 * (r1 * r1 - r0 * r1) * m1;
    let scale = sig2 * (r0 * r0 * m0 + r1 * r1 * m1);
    clamped_sqrt(sq, scale, "scaled_distance")
}

/// Distance between the product measures `nu1 x nu2` and `eta1 x eta2`
/// from the factor masses and factor distances alone.
///
/// The first factor pairs `nu1` with `eta1`, the second `nu2` with `eta2`.
pub fn product_hellinger(
    nu1: &Measure,
    eta1: &Measure,
    nu2: &Measure,
    eta2: &Measure,
    cfg: &ScaleConfig,
) -> Result<f64> {
    let sig2 = cfg.sigma() * cfg.sigma();
    let he1 = hellinger_distance(nu1, eta1, cfg)?;
    let he2 = hellinger_distance(nu2, eta2, cfg)?;
    let (n1, e1, n2, e2) = (nu1.total_mass(), eta1.total_mass(), nu2.total_mass(), eta2.total_mass());
    let sq = sig2 * (n1 * n2 + e1 * e2) - 0.5 * sig2 * (n1 + e1 - he1 * he1 / sig2) * (n2 + e2 - he2 * he2 / sig2);
    clamped_sqrt(sq, sig2 * (n1 * n2 + e1 * e2), "product_hellinger")
}

/// Distance between products of probability measures from the factor
/// distances: `1 - He^2/(2 sigma^2) = prod (1 - He_k^2/(2 sigma^2))`.
pub fn product_hellinger_prob(factor_distances: &[f64], cfg: &ScaleConfig) -> Result<f64> {
    let two_sig2 = 2.0 * cfg.sigma() * cfg.sigma();
    let aff: f64 = factor_distances.iter().map(|h| 1.0 - h * h / two_sig2).product();
    clamped_sqrt(two_sig2 * (1.0 - aff), two_sig2, "product_hellinger_prob")
}
