use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::measure::{Measure, ScaleConfig};

const CONE_MASS_TOL: f64 = 1e-12;

/// The scaled probability measure `radius^2 * base`.
#[derive(Clone, Debug)]
pub struct ConePoint {
    radius: f64,
    base: Measure,
}

impl ConePoint {
    pub fn new(radius: f64, base: Measure) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::InvalidMeasure(format!("cone radius {radius}")));
        }
        let mass = base.total_mass();
        if (mass - 1.0).abs() > CONE_MASS_TOL {
            return Err(Error::NotProbability { mass });
        }
        Ok(Self { radius, base })
    }

    /// Splits a nonzero measure into radius `sqrt(mass)` and normalized base.
    pub fn from_measure(mu: &Measure) -> Result<Self> {
        let base = crate::measure::normalize(mu)?;
        Ok(Self {
            radius: mu.total_mass().sqrt(),
            base,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn base(&self) -> &Measure {
        &self.base
    }

    pub fn measure(&self) -> Result<Measure> {
        self.base.scaled(self.radius * self.radius)
    }
}

/// `cos(min(|r|, pi))`.
pub fn cos_pi(r: f64) -> f64 {
    r.abs().min(PI).cos()
}

/// Cone distance `sigma sqrt(r0^2 + r1^2 - 2 r0 r1 cos_pi(base_fr / sigma))`.
pub fn cone_distance(a: &ConePoint, b: &ConePoint, base_fr: f64, cfg: &ScaleConfig) -> f64 {
    let (r0, r1) = (a.radius, b.radius);
    let delta = base_fr / cfg.sigma();
    let sq = r0 * r0 + r1 * r1 - 2.0 * r0 * r1 * cos_pi(delta);
    cfg.sigma() * sq.max(0.0).sqrt()
}

/// Point at time `s` on the cone geodesic, given a constant-speed geodesic
/// `base_geodesic` of the base space and the base distance `base_fr`.
///
/// For base angles of `pi` or more the geodesic runs through the apex.
pub fn cone_geodesic(
    a: &ConePoint,
    b: &ConePoint,
    base_geodesic: impl Fn(f64) -> Result<Measure>,
    base_fr: f64,
    s: f64,
    cfg: &ScaleConfig,
) -> Result<Measure> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::SOutOfRange(s));
    }
    let (r0, r1) = (a.radius, b.radius);
    if r0 == 0.0 && r1 == 0.0 {
        return Err(Error::DegenerateGeodesic("both cone points are the apex"));
    }
    if s == 0.0 {
        return a.measure();
    }
    if s == 1.0 {
        return b.measure();
    }
    let delta = base_fr / cfg.sigma();
    if delta >= PI {
        let turn = r0 / (r0 + r1);
        return if s <= turn {
            a.base.scaled((r0 - (r0 + r1) * s).powi(2))
        } else {
            b.base.scaled(((r0 + r1) * s - r0).powi(2))
        };
    }
    let cos = delta.cos();
    let r_sq = (1.0 - s).powi(2) * r0 * r0 + s * s * r1 * r1 + 2.0 * (s - s * s) * r0 * r1 * cos;
    let zeta = if delta == 0.0 {
        s
    } else {
        let angle = (s * r1 * delta.sin()).atan2((1.0 - s) * r0 + s * r1 * cos);
        (angle / delta).clamp(0.0, 1.0)
    };
    base_geodesic(zeta)?.scaled(r_sq.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fisher_rao::{bhattacharyya_distance, spherical_geodesic};
    use crate::hellinger::{hellinger_distance, hellinger_geodesic};
    use crate::measure::DiscreteMeasure;

    fn dm(w: &[f64]) -> Measure {
        DiscreteMeasure::from_weights(w).unwrap().into()
    }

    #[test]
    fn full_space_is_cone_over_spherical_distance() {
        let cfg = ScaleConfig::new(1.4).unwrap();
        let (mu0, mu1) = (dm(&[0.3, 1.2, 0.0]), dm(&[0.7, 0.1, 2.0]));
        let (a, b) = (ConePoint::from_measure(&mu0).unwrap(), ConePoint::from_measure(&mu1).unwrap());
        let bh = bhattacharyya_distance(a.base(), b.base(), &cfg).unwrap();
        let he = hellinger_distance(&mu0, &mu1, &cfg).unwrap();
        assert!((cone_distance(&a, &b, bh, &cfg) - he).abs() < 1e-12);

        let geo = |s: f64| spherical_geodesic(a.base(), b.base(), s, &cfg);
        for k in 0..=10 {
            let s = k as f64 / 10.0;
            let c = cone_geodesic(&a, &b, geo, bh, s, &cfg).unwrap();
            let h = hellinger_geodesic(&mu0, &mu1, s).unwrap();
            let (cw, hw) = (c.as_discrete().unwrap().weights(), h.as_discrete().unwrap().weights());
            for (x, y) in cw.iter().zip(&hw) {
                assert!((x - y).abs() < 1e-12, "{s}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn apex_cases() {
        let cfg = ScaleConfig::new(2.0).unwrap();
        let a = ConePoint::new(1.5, dm(&[1.0, 0.0])).unwrap();
        let b = ConePoint::new(0.5, dm(&[0.0, 1.0])).unwrap();
        let apex = ConePoint::new(0.0, dm(&[0.0, 1.0])).unwrap();
        assert_eq!(cone_distance(&a, &b, 2.0 * PI * 1.01, &cfg), 2.0 * 2.0);
        assert_eq!(cone_distance(&a, &apex, 0.3, &cfg), 2.0 * 1.5);
        let geo = |_: f64| -> Result<Measure> { unreachable!() };
        let mid = cone_geodesic(&a, &b, geo, 2.0 * PI, 0.5, &cfg).unwrap();
        assert_eq!(mid.as_discrete().unwrap().weights(), vec![0.25, 0.0]);
        let q = cone_geodesic(&a, &b, geo, 2.0 * PI, 0.875, &cfg).unwrap();
        assert_eq!(q.as_discrete().unwrap().weights(), vec![0.0, 0.0625]);
        assert!(cone_geodesic(&apex, &apex, geo, 1.0, 0.5, &cfg).is_err());
    }

    #[test]
    fn obtuse_angle_follows_planar_picture() {
        // Angles above pi/2 exercise the quadrant handling of the base time.
        let cfg = ScaleConfig::default();
        let a = ConePoint::new(1.0, dm(&[1.0])).unwrap();
        let b = ConePoint::new(3.0, dm(&[1.0])).unwrap();
        let delta = 2.5;
        let total = cone_distance(&a, &b, delta, &cfg);
        let pts: Vec<(f64, f64)> = (0..=10)
            .map(|k| {
                let s = k as f64 / 10.0;
                let seen = std::cell::Cell::new(f64::NAN);
                let g = cone_geodesic(&a, &b, |z| {
                    seen.set(z);
                    Ok(dm(&[1.0]))
                }, delta, s, &cfg)
                .unwrap();
                let x = (1.0 - s) + s * 3.0 * delta.cos();
                let y = s * 3.0 * delta.sin();
                assert!((x.hypot(y) - g.total_mass().sqrt()).abs() < 1e-12);
                if k > 0 && k < 10 {
                    assert!((y.atan2(x) / delta - seen.get()).abs() < 1e-12);
                }
                (x, y)
            })
            .collect();
        for w in pts.windows(2) {
            let d = (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1);
            assert!((d - total / 10.0).abs() < 1e-12);
        }
    }
}
