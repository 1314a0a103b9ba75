//! Curves of measures: metric speed, growth rates, the speed identity and
//! intrinsic length.
//!
//! A curve solves the growth equation `d/ds mu_s = xi_s mu_s` (in weak form,
//! set to zero) and its metric speed equals `sigma/2 * ||xi_s||_{L^2(mu_s)}`.
//! Growth rates are only defined where the current weight is positive; atoms
//! carrying no mass contribute nothing to the `L^2(mu_s)` norm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{common_layout, pair, DiscreteMeasure, Label, Layout, Measure, ScaleConfig};

/// Time samples of a curve of measures on one common support.
#[derive(Clone, Debug)]
pub struct SampledCurve {
    times: Vec<f64>,
    layout: Layout,
    weights: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct CurveRepr {
    times: Vec<f64>,
    states: Vec<Measure>,
}

impl SampledCurve {
    pub fn new(times: Vec<f64>, states: Vec<Measure>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InvalidCurve("a curve needs at least two samples".into()));
        }
        if times.len() != states.len() {
            return Err(Error::InvalidCurve(format!(
                "{} times but {} states",
                times.len(),
                states.len()
            )));
        }
        if times.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(Error::InvalidCurve("times must lie in [0, 1]".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidCurve("times must be strictly increasing".into()));
        }
        let (layout, weights) = common_layout(&states)?;
        Ok(Self { times, layout, weights })
    }

    pub fn from_discrete(times: Vec<f64>, states: Vec<DiscreteMeasure>) -> Result<Self> {
        Self::new(times, states.into_iter().map(Measure::Discrete).collect())
    }

    /// Samples `f` at `n + 1` uniform times on `[0, 1]`.
    pub fn uniform(n: usize, f: impl Fn(f64) -> Result<Measure>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidCurve("a curve needs at least two samples".into()));
        }
        let times: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
        let states = times.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Self::new(times, states)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Merged support labels, or `None` for grid curves.
    pub fn labels(&self) -> Option<&[Label]> {
        match &self.layout {
            Layout::Discrete(l) => Some(l),
            Layout::Grid(_) => None,
        }
    }

    pub fn weights(&self, k: usize) -> &[f64] {
        &self.weights[k]
    }

    pub fn state(&self, k: usize) -> Measure {
        self.layout
            .build(self.weights[k].clone())
            .expect("stored weights are valid")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        let repr: CurveRepr = serde_json::from_str(text).map_err(|e| e.to_string())?;
        Self::new(repr.times, repr.states).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        let repr = CurveRepr {
            times: self.times.clone(),
            states: (0..self.len()).map(|k| self.state(k)).collect(),
        };
        serde_json::to_string(&repr).expect("curves always serialize")
    }

    fn distance(&self, i: usize, j: usize, cfg: &ScaleConfig) -> f64 {
        let sq: f64 = self.weights[i]
            .iter()
            .zip(&self.weights[j])
            .map(|(a, b)| {
                let d = b.sqrt() - a.sqrt();
                d * d
            })
            .sum();
        cfg.sigma() * (self.layout.volume() * sq).sqrt()
    }
}

/// Growth-rate samples `xi(s_k, omega)`; `None` where the weight vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthField {
    pub times: Vec<f64>,
    pub values: Vec<Vec<Option<f64>>>,
}

/// Metric speed at sample `k`: central difference inside, one-sided at the ends.
pub fn metric_speed(curve: &SampledCurve, k: usize, cfg: &ScaleConfig) -> Result<f64> {
    let n = curve.len();
    if k >= n {
        return Err(Error::InvalidCurve(format!("index {k} out of range for {n} samples")));
    }
    let (i, j) = if k == 0 {
        (0, 1)
    } else if k == n - 1 {
        (n - 2, n - 1)
    } else {
        (k - 1, k + 1)
    };
    Ok(curve.distance(i, j, cfg) / (curve.times[j] - curve.times[i]))
}

/// Finite-difference growth rates `(w_{k+1} - w_{k-1}) / ((t_{k+1} - t_{k-1}) w_k)`.
pub fn growth_rate(curve: &SampledCurve) -> Result<GrowthField> {
    let n = curve.len();
    if n < 3 {
        return Err(Error::InvalidCurve("growth rates need at least three samples".into()));
    }
    let values = (0..n)
        .map(|k| {
            let (i, j) = if k == 0 {
                (0, 1)
            } else if k == n - 1 {
                (n - 2, n - 1)
            } else {
                (k - 1, k + 1)
            };
            let dt = curve.times[j] - curve.times[i];
            curve.weights[k]
                .iter()
                .enumerate()
                .map(|(a, &w)| {
                    (w > 0.0).then(|| (curve.weights[j][a] - curve.weights[i][a]) / (dt * w))
                })
                .collect()
        })
        .collect();
    Ok(GrowthField {
        times: curve.times.clone(),
        values,
    })
}

/// `sigma/2 * ||xi||_{L^2(mu)}` for one time slice.
fn growth_norm(weights: &[f64], xi: &[Option<f64>], volume: f64, cfg: &ScaleConfig) -> f64 {
    let sq: f64 = weights
        .iter()
        .zip(xi)
        .filter_map(|(w, x)| x.map(|x| x * x * w))
        .sum();
    0.5 * cfg.sigma() * (volume * sq).sqrt()
}

/// Per interior sample: `(time, metric speed, sigma/2 ||xi||, |difference|)`.
pub fn speed_identity_profile(curve: &SampledCurve, cfg: &ScaleConfig) -> Result<Vec<(f64, f64, f64, f64)>> {
    let xi = growth_rate(curve)?;
    let volume = curve.layout.volume();
    (1..curve.len() - 1)
        .map(|k| {
            let speed = metric_speed(curve, k, cfg)?;
            let rhs = growth_norm(&curve.weights[k], &xi.values[k], volume, cfg);
            Ok((curve.times[k], speed, rhs, (speed - rhs).abs()))
        })
        .collect()
}

/// Largest interior mismatch between the metric speed and `sigma/2 ||xi||_{L^2(mu)}`.
pub fn speed_identity_residual(curve: &SampledCurve, cfg: &ScaleConfig) -> Result<f64> {
    Ok(speed_identity_profile(curve, cfg)?
        .into_iter()
        .map(|(_, _, _, r)| r)
        .fold(0.0, f64::max))
}

/// Exact growth rate `2 (f1 - f0) / ((1-s) f0 + s f1)` along the Hellinger
/// geodesic, with `f_j = sqrt(w_j)`, at the single time `s`.
pub fn geodesic_growth_rate(mu0: &Measure, mu1: &Measure, s: f64) -> Result<GrowthField> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::SOutOfRange(s));
    }
    let p = pair(mu0, mu1)?;
    let values = p
        .w0
        .iter()
        .zip(&p.w1)
        .map(|(a, b)| {
            let (f0, f1) = (a.sqrt(), b.sqrt());
            let den = (1.0 - s) * f0 + s * f1;
            (den > 0.0).then(|| 2.0 * (f1 - f0) / den)
        })
        .collect();
    Ok(GrowthField {
        times: vec![s],
        values: vec![values],
    })
}

/// Polygonal length `sum_k He(mu_k, mu_{k+1})`.
pub fn curve_length(curve: &SampledCurve, cfg: &ScaleConfig) -> f64 {
    (0..curve.len() - 1).map(|k| curve.distance(k, k + 1, cfg)).sum()
}

/// `N * sum He(mu_k, mu_{k+1})^2` for a uniformly sampled curve; converges to
/// the squared length of a constant-speed curve.
pub fn chord_energy(curve: &SampledCurve, cfg: &ScaleConfig) -> f64 {
    let n = (curve.len() - 1) as f64;
    n * (0..curve.len() - 1)
        .map(|k| curve.distance(k, k + 1, cfg).powi(2))
        .sum::<f64>()
}

/// Two-atom curve `(1-s)^g0 delta_w0 + theta s^g1 delta_w1` sampled at `n`
/// uniform times, together with the midpoint-rule value (on `n` nodes) of
/// `int_0^1 sum_w xi(s,w)^2 mu_s(w) ds` for the exact rates `xi = a'/a`.
pub fn degenerate_example_curve(gamma0: f64, gamma1: f64, theta: f64, n: usize) -> Result<(SampledCurve, f64)> {
    for g in [gamma0, gamma1] {
        if !(g > 3.0) {
            return Err(Error::ExponentTooSmall(g));
        }
    }
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(Error::ConditionViolated(format!("theta must be nonnegative, got {theta}")));
    }
    if n < 2 {
        return Err(Error::InvalidCurve("a curve needs at least two samples".into()));
    }
    let state = |s: f64| -> Result<Measure> {
        Ok(DiscreteMeasure::from_pairs(vec![
            (Label::from("omega0"), (1.0 - s).powf(gamma0)),
            (Label::from("omega1"), theta * s.powf(gamma1)),
        ])?
        .into())
    };
    let curve = SampledCurve::uniform(n - 1, state)?;

    let h = 1.0 / n as f64;
    let mut energy = 0.0;
    for k in 0..n {
        let s = (k as f64 + 0.5) * h;
        let w0 = (1.0 - s).powf(gamma0);
        let xi0 = -gamma0 / (1.0 - s);
        energy += xi0 * xi0 * w0;
        if theta > 0.0 {
            let w1 = theta * s.powf(gamma1);
            let xi1 = gamma1 / s;
            energy += xi1 * xi1 * w1;
        }
    }
    Ok((curve, energy * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hellinger::{hellinger_distance, hellinger_geodesic};

    fn dm(w: &[f64]) -> Measure {
        DiscreteMeasure::from_weights(w).unwrap().into()
    }

    fn cfg() -> ScaleConfig {
        ScaleConfig::new(1.7).unwrap()
    }

    #[test]
    fn rejects_bad_curves() {
        assert!(SampledCurve::new(vec![0.0], vec![dm(&[1.0])]).is_err());
        assert!(SampledCurve::new(vec![0.5, 0.5], vec![dm(&[1.0]), dm(&[1.0])]).is_err());
        assert!(SampledCurve::new(vec![0.0, 1.5], vec![dm(&[1.0]), dm(&[1.0])]).is_err());
    }

    #[test]
    fn constant_curve() {
        let c = SampledCurve::uniform(10, |_| Ok(dm(&[0.3, 0.0, 0.7]))).unwrap();
        for k in 0..c.len() {
            assert_eq!(metric_speed(&c, k, &cfg()).unwrap(), 0.0);
        }
        let xi = growth_rate(&c).unwrap();
        for row in &xi.values {
            assert_eq!(row[0], Some(0.0));
            assert_eq!(row[1], None);
        }
        assert_eq!(speed_identity_residual(&c, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn geodesic_speed_and_length() {
        let (a, b) = (dm(&[0.2, 0.5, 0.3]), dm(&[0.6, 0.1, 0.9]));
        let he = hellinger_distance(&a, &b, &cfg()).unwrap();
        let c = SampledCurve::uniform(1000, |s| hellinger_geodesic(&a, &b, s)).unwrap();
        for k in 1..c.len() - 1 {
            assert!((metric_speed(&c, k, &cfg()).unwrap() - he).abs() < 1e-6);
        }
        assert!((curve_length(&c, &cfg()) - he).abs() < 1e-10);
        assert!(speed_identity_residual(&c, &cfg()).unwrap() <= 1e-4 * he);
        let two = SampledCurve::new(vec![0.0, 1.0], vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(curve_length(&two, &cfg()), he);
    }

    #[test]
    fn radial_curve_speed() {
        let mu = dm(&[0.2, 0.5, 0.3]);
        let m = mu.total_mass();
        let c = SampledCurve::uniform(2000, |s| mu.scaled((1.0 + s).powi(2))).unwrap();
        let expected = cfg().sigma() * m.sqrt();
        for k in [1, 500, 1999] {
            assert!((metric_speed(&c, k, &cfg()).unwrap() - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn exponential_growth_rate() {
        let rate = 0.7;
        let c = SampledCurve::uniform(1000, |s| dm(&[1.0, 2.0]).scaled((rate * s).exp())).unwrap();
        let xi = growth_rate(&c).unwrap();
        for row in &xi.values[1..1000] {
            for v in row {
                assert!((v.unwrap() - rate).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn geodesic_rate_examples() {
        let (a, b) = (dm(&[0.2, 0.0, 0.3]), dm(&[0.8, 0.0, 0.3]));
        let xi = geodesic_growth_rate(&a, &a, 0.4).unwrap();
        assert_eq!(xi.values[0][0], Some(0.0));
        assert_eq!(xi.values[0][1], None);
        let xi = geodesic_growth_rate(&a, &b, 0.0).unwrap();
        assert!((xi.values[0][0].unwrap() - 2.0 * ((0.8f64 / 0.2).sqrt() - 1.0)).abs() < 1e-14);

        // Riccati equation d/ds xi + xi^2/2 = 0 via central differences.
        let ds = 1e-4;
        for s in [0.2, 0.5, 0.8] {
            let lo = geodesic_growth_rate(&a, &b, s - ds).unwrap().values[0][0].unwrap();
            let hi = geodesic_growth_rate(&a, &b, s + ds).unwrap().values[0][0].unwrap();
            let mid = geodesic_growth_rate(&a, &b, s).unwrap().values[0][0].unwrap();
            assert!(((hi - lo) / (2.0 * ds) + 0.5 * mid * mid).abs() < 1e-6);
        }
    }

    #[test]
    fn sampled_rate_matches_geodesic_rate() {
        let (a, b) = (dm(&[0.2, 0.5, 0.3]), dm(&[0.6, 0.1, 0.9]));
        let c = SampledCurve::uniform(1000, |s| hellinger_geodesic(&a, &b, s)).unwrap();
        let xi = growth_rate(&c).unwrap();
        for k in [100, 500, 900] {
            let exact = geodesic_growth_rate(&a, &b, c.times()[k]).unwrap();
            for (x, y) in xi.values[k].iter().zip(&exact.values[0]) {
                assert!((x.unwrap() - y.unwrap()).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn degenerate_curve_endpoints_and_errors() {
        let (c, _) = degenerate_example_curve(4.0, 5.0, 2.0, 11).unwrap();
        let first = c.state(0);
        let last = c.state(c.len() - 1);
        assert_eq!(first.as_discrete().unwrap().weights(), vec![1.0, 0.0]);
        assert_eq!(last.as_discrete().unwrap().weights(), vec![0.0, 2.0]);
        assert_eq!(degenerate_example_curve(3.0, 5.0, 1.0, 10).unwrap_err(), Error::ExponentTooSmall(3.0));
    }

    #[test]
    fn degenerate_curve_energy_converges() {
        // The exact rates give int_0^1 gamma^2 (1-s)^(gamma-2) ds = gamma^2/(gamma-1) per atom.
        let (_, e) = degenerate_example_curve(4.0, 4.5, 0.0, 100_000).unwrap();
        assert!((e - 16.0 / 3.0).abs() < 1e-6);
        let (_, e) = degenerate_example_curve(5.0, 5.0, 1.0, 100_000).unwrap();
        assert!((e - 2.0 * 25.0 / 4.0).abs() < 1e-6);
    }

    #[test]
    fn degenerate_curve_speed_identity() {
        let (c, _) = degenerate_example_curve(5.0, 5.0, 1.0, 2001).unwrap();
        let profile = speed_identity_profile(&c, &ScaleConfig::default()).unwrap();
        let worst = profile
            .iter()
            .filter(|(t, ..)| (0.05..=0.95).contains(t))
            .map(|p| p.3)
            .fold(0.0, f64::max);
        assert!(worst <= 1e-3, "{worst}");
    }

    #[test]
    fn curve_json_round_trip() {
        let c = SampledCurve::uniform(3, |s| Ok(dm(&[1.0 - s, s]))).unwrap();
        let back = SampledCurve::from_json(&c.to_json()).unwrap();
        assert_eq!(back.times(), c.times());
        for k in 0..c.len() {
            assert_eq!(back.weights(k), c.weights(k));
        }
    }
}
