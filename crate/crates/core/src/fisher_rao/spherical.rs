use crate::error::{Error, Result};
use crate::hellinger::{hellinger_distance, hellinger_geodesic};
use crate::measure::{Measure, ScaleConfig};

const PROBABILITY_TOL: f64 = 1e-9;

pub(crate) fn check_probability(mu: &Measure) -> Result<()> {
    let mass = mu.total_mass();
    if (mass - 1.0).abs() <= PROBABILITY_TOL {
        Ok(())
    } else {
        Err(Error::NotProbability { mass })
    }
}

/// Spherical distance `2 sigma asin(He / (2 sigma))` between probability
/// measures, with values in `[0, sigma pi / 2]`.
pub fn bhattacharyya_distance(nu0: &Measure, nu1: &Measure, cfg: &ScaleConfig) -> Result<f64> {
    check_probability(nu0)?;
    check_probability(nu1)?;
    let he = hellinger_distance(nu0, nu1, cfg)?;
    let sigma = cfg.sigma();
    Ok(2.0 * sigma * (he / (2.0 * sigma)).min(1.0).asin())
}

/// Point at time `s` on the great-circle arc between two probability measures.
///
/// This is the Hellinger geodesic reparameterized by
/// `t(s) = sin(s d) / (sin((1-s) d) + sin(s d))` and rescaled by
/// `((sin((1-s) d) + sin(s d)) / sin d)^2`, where `d = Bh / sigma`. Equal
/// endpoints give the constant curve.
pub fn spherical_geodesic(nu0: &Measure, nu1: &Measure, s: f64, cfg: &ScaleConfig) -> Result<Measure> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::SOutOfRange(s));
    }
    let delta = bhattacharyya_distance(nu0, nu1, cfg)? / cfg.sigma();
    if s == 0.0 || delta == 0.0 {
        return Ok(nu0.clone());
    }
    if s == 1.0 {
        return Ok(nu1.clone());
    }
    let (a, b) = (((1.0 - s) * delta).sin(), (s * delta).sin());
    let t = b / (a + b);
    let n = ((a + b) / delta.sin()).powi(2);
    hellinger_geodesic(nu0, nu1, t)?.scaled(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::DiscreteMeasure;
    use std::f64::consts::FRAC_PI_2;

    fn dm(w: &[f64]) -> Measure {
        DiscreteMeasure::from_weights(w).unwrap().into()
    }

    #[test]
    fn distance_examples() {
        let cfg = ScaleConfig::default();
        let (a, b) = (dm(&[0.5, 0.5]), dm(&[0.9, 0.1]));
        assert_eq!(bhattacharyya_distance(&a, &a, &cfg).unwrap(), 0.0);
        let bh = bhattacharyya_distance(&a, &b, &cfg).unwrap();
        assert!((bh - 0.463648).abs() < 1e-6, "{bh}");
        let he = hellinger_distance(&a, &b, &cfg).unwrap();
        let alt = (1.0 - he * he / 2.0).acos();
        assert!((bh - alt).abs() < 1e-12);
        let sing = bhattacharyya_distance(&dm(&[1.0, 0.0]), &dm(&[0.0, 1.0]), &ScaleConfig::new(2.0).unwrap()).unwrap();
        assert!((sing - 2.0 * FRAC_PI_2).abs() < 1e-15);
        assert!(matches!(
            bhattacharyya_distance(&dm(&[0.5, 0.6]), &a, &cfg),
            Err(Error::NotProbability { .. })
        ));
    }

    #[test]
    fn geodesic_mass_and_speed() {
        let cfg = ScaleConfig::new(0.8).unwrap();
        let (a, b) = (dm(&[0.2, 0.3, 0.5]), dm(&[0.6, 0.4, 0.0]));
        let bh = bhattacharyya_distance(&a, &b, &cfg).unwrap();
        let pts: Vec<Measure> = (0..=10)
            .map(|k| spherical_geodesic(&a, &b, k as f64 / 10.0, &cfg).unwrap())
            .collect();
        for (i, p) in pts.iter().enumerate() {
            assert!((p.total_mass() - 1.0).abs() < 1e-12);
            for (j, q) in pts.iter().enumerate() {
                let d = bhattacharyya_distance(p, q, &cfg).unwrap();
                assert!((d - (i as f64 - j as f64).abs() / 10.0 * bh).abs() < 1e-9);
            }
        }
        assert_eq!(pts[0].to_json(), a.to_json());
        assert_eq!(pts[10].to_json(), b.to_json());
        assert_eq!(spherical_geodesic(&a, &a, 0.3, &cfg).unwrap().to_json(), a.to_json());
    }
}
