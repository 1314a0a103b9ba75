//! Discrete geodesics by minimizing path energy.
//!
//! The path is a polygon with fixed endpoints and `N` movable interior points
//! on a uniform time grid. Its energy
//! `E = sum_k (1/ds) dp_k . G(mid_k) dp_k` is minimized with L-BFGS and a
//! backtracking line search; energy minimizers have constant speed, so the
//! distance is `sqrt(E)`.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use super::{check_domain, metric_at, ParametricFamily};
use crate::error::{Error, Result};
use crate::measure::ScaleConfig;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrOptions {
    /// Number of interior control points.
    pub path_points: usize,
    /// Relative energy decrease below which the iteration stops.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for FrOptions {
    fn default() -> Self {
        Self {
            path_points: 64,
            tol: 1e-10,
            max_iters: 10_000,
        }
    }
}

/// Result of [`fr_distance_numeric`].
#[derive(Clone, Debug)]
pub struct FrPath {
    pub distance: f64,
    pub energy: f64,
    /// Control points including both endpoints.
    pub path: Vec<Vec<f64>>,
    pub iterations: usize,
}

impl FrPath {
    /// Per-segment speeds `sqrt(dp . G dp) / ds`.
    pub fn segment_speeds<F: ParametricFamily + ?Sized>(&self, family: &F, cfg: &ScaleConfig) -> Result<Vec<f64>> {
        let ds = 1.0 / (self.path.len() - 1) as f64;
        self.path
            .windows(2)
            .map(|w| Ok(segment_quad(family, &w[0], &w[1], cfg)?.max(0.0).sqrt() / ds))
            .collect()
    }
}

/// `dp . G(mid) dp` for one segment.
fn segment_quad<F: ParametricFamily + ?Sized>(family: &F, a: &[f64], b: &[f64], cfg: &ScaleConfig) -> Result<f64> {
    let dp = DVector::from_iterator(a.len(), a.iter().zip(b).map(|(x, y)| y - x));
    let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
    let g = metric_at(family, &mid, cfg)?;
    Ok(dp.dot(&(g * dp.clone())))
}

struct Problem<'a, F: ?Sized> {
    family: &'a F,
    cfg: &'a ScaleConfig,
    start: Vec<f64>,
    end: Vec<f64>,
    dim: usize,
    interior: usize,
}

impl<F: ParametricFamily + ?Sized> Problem<'_, F> {
    fn point<'x>(&'x self, x: &'x [f64], k: usize) -> &'x [f64] {
        if k == 0 {
            &self.start
        } else if k == self.interior + 1 {
            &self.end
        } else {
            &x[(k - 1) * self.dim..k * self.dim]
        }
    }

    fn admissible(&self, x: &[f64]) -> bool {
        (1..=self.interior).all(|k| self.family.in_domain(self.point(x, k)))
            && (0..=self.interior).all(|k| {
                let mid: Vec<f64> = self
                    .point(x, k)
                    .iter()
                    .zip(self.point(x, k + 1))
                    .map(|(a, b)| 0.5 * (a + b))
                    .collect();
                self.family.in_domain(&mid)
            })
    }

    fn energy(&self, x: &[f64]) -> Result<f64> {
        let scale = (self.interior + 1) as f64;
        let mut e = 0.0;
        for k in 0..=self.interior {
            e += segment_quad(self.family, self.point(x, k), self.point(x, k + 1), self.cfg)?;
        }
        Ok(scale * e)
    }

    /// Energy and gradient. The metric derivative enters through central
    /// differences of `dp . G(mid) dp` in the midpoint.
    fn energy_and_gradient(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let scale = (self.interior + 1) as f64;
        let d = self.dim;
        let mut grad = vec![0.0; x.len()];
        let mut e = 0.0;
        for k in 0..=self.interior {
            let (a, b) = (self.point(x, k), self.point(x, k + 1));
            let dp = DVector::from_iterator(d, a.iter().zip(b).map(|(p, q)| q - p));
            let mid: Vec<f64> = a.iter().zip(b).map(|(p, q)| 0.5 * (p + q)).collect();
            let g: DMatrix<f64> = metric_at(self.family, &mid, self.cfg)?;
            let gdp = &g * &dp;
            e += dp.dot(&gdp);

            let mut dmid = vec![0.0; d];
            for (i, slot) in dmid.iter_mut().enumerate() {
                let h = 1e-6 * (1.0 + mid[i].abs());
                let mut lo = mid.clone();
                let mut hi = mid.clone();
                lo[i] -= h;
                hi[i] += h;
                let glo = metric_at(self.family, &lo, self.cfg)?;
                let ghi = metric_at(self.family, &hi, self.cfg)?;
                *slot = (dp.dot(&(ghi * &dp)) - dp.dot(&(glo * &dp))) / (2.0 * h);
            }
            for i in 0..d {
                let along = 2.0 * gdp[i];
                let across = 0.5 * dmid[i];
                if k >= 1 {
                    grad[(k - 1) * d + i] += scale * (-along + across);
                }
                if k < self.interior {
                    grad[k * d + i] += scale * (along + across);
                }
            }
        }
        Ok((scale * e, grad))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Two-loop recursion for the L-BFGS direction `-H g`.
fn lbfgs_direction(grad: &[f64], memory: &VecDeque<(Vec<f64>, Vec<f64>)>) -> Vec<f64> {
    let mut q = grad.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y) in memory.iter().rev() {
        let rho = 1.0 / dot(y, s);
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push((rho, a));
    }
    if let Some((s, y)) = memory.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|qi| *qi *= gamma);
    }
    for ((s, y), (rho, a)) in memory.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q.iter_mut().for_each(|qi| *qi = -*qi);
    q
}

const MEMORY: usize = 8;

/// Fisher-Rao distance between `p0` and `p1` inside `family` by path-energy
/// minimization, starting from the straight segment.
pub fn fr_distance_numeric<F: ParametricFamily + ?Sized>(
    family: &F,
    p0: &[f64],
    p1: &[f64],
    cfg: &ScaleConfig,
    opts: &FrOptions,
) -> Result<FrPath> {
    check_domain(family, p0)?;
    check_domain(family, p1)?;
    let d = family.param_dim();
    let n = opts.path_points;
    let straight = |k: usize| -> Vec<f64> {
        let t = k as f64 / (n + 1) as f64;
        p0.iter().zip(p1).map(|(a, b)| a + t * (b - a)).collect()
    };
    if p0 == p1 {
        return Ok(FrPath {
            distance: 0.0,
            energy: 0.0,
            path: (0..=n + 1).map(straight).collect(),
            iterations: 0,
        });
    }
    let problem = Problem {
        family,
        cfg,
        start: p0.to_vec(),
        end: p1.to_vec(),
        dim: d,
        interior: n,
    };
    let mut x: Vec<f64> = (1..=n).flat_map(|k| family.project(straight(k))).collect();
    if !problem.admissible(&x) {
        return Err(Error::StepOutOfDomain("initial path leaves the domain".into()));
    }

    let (mut e, mut g) = problem.energy_and_gradient(&x)?;
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>)> = VecDeque::with_capacity(MEMORY);
    let mut calm = 0;
    let mut iterations = 0;
    while iterations < opts.max_iters {
        iterations += 1;
        let mut dir = lbfgs_direction(&g, &memory);
        let mut slope = dot(&dir, &g);
        if slope >= 0.0 {
            memory.clear();
            dir = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }
        if slope == 0.0 {
            break;
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + step * b).collect();
            if problem.admissible(&trial) {
                let et = problem.energy(&trial)?;
                if et <= e + 1e-4 * step * slope {
                    accepted = Some((trial, et));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((trial, et)) = accepted else {
            // No descent is representable any more: the energy is at its
            // floating-point floor.
            break;
        };

        let (_, gt) = problem.energy_and_gradient(&trial)?;
        let s: Vec<f64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gt.iter().zip(&g).map(|(a, b)| a - b).collect();
        if dot(&s, &y) > 1e-16 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
            if memory.len() == MEMORY {
                memory.pop_front();
            }
            memory.push_back((s, y));
        }
        let decrease = (e - et) / e.max(f64::MIN_POSITIVE);
        x = trial;
        e = et;
        g = gt;
        calm = if decrease < opts.tol { calm + 1 } else { 0 };
        if calm >= 2 {
            break;
        }
    }
    if calm < 2 && iterations >= opts.max_iters {
        return Err(Error::NoConvergence {
            iterations,
            detail: format!("path energy {e} still decreasing"),
        });
    }

    let path = (0..=n + 1).map(|k| problem.point(&x, k).to_vec()).collect();
    Ok(FrPath {
        distance: e.sqrt(),
        energy: e,
        path,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{ExponentialFamily, PoissonFamily, SimplexFamily};
    use crate::fisher_rao::bhattacharyya_distance;
    use crate::hellinger::hellinger_distance;

    #[test]
    fn poisson_one_to_four() {
        let cfg = ScaleConfig::default();
        let fam = PoissonFamily::new(1);
        let r = fr_distance_numeric(&fam, &[1.0], &[4.0], &cfg, &FrOptions::default()).unwrap();
        assert!((r.distance - 1.0).abs() < 1e-3, "{}", r.distance);
        let speeds = r.segment_speeds(&fam, &cfg).unwrap();
        let (lo, hi) = speeds.iter().fold((f64::MAX, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        assert!(hi / lo <= 1.0 + 1e-3, "{lo} {hi}");
    }

    #[test]
    fn identical_endpoints() {
        let r = fr_distance_numeric(&PoissonFamily::new(2), &[1.0, 2.0], &[1.0, 2.0], &ScaleConfig::default(), &FrOptions::default()).unwrap();
        assert_eq!(r.distance, 0.0);
        assert_eq!(r.path.len(), 66);
    }

    #[test]
    fn exponential_two_dimensional() {
        let cfg = ScaleConfig::new(0.7).unwrap();
        let fam = ExponentialFamily::new(2);
        let (a, b) = ([0.5, 2.0], [3.0, 0.8]);
        let r = fr_distance_numeric(&fam, &a, &b, &cfg, &FrOptions::default()).unwrap();
        let exact = 0.35 * ((a[0] / b[0]).ln().powi(2) + (a[1] / b[1]).ln().powi(2)).sqrt();
        assert!((r.distance - exact).abs() < 1e-3 * exact, "{} vs {exact}", r.distance);
    }

    #[test]
    fn simplex_recovers_spherical_distance() {
        let cfg = ScaleConfig::default();
        let fam = SimplexFamily::new(3);
        let (a, b) = ([0.2, 0.5], [0.6, 0.1]);
        let r = fr_distance_numeric(&fam, &a, &b, &cfg, &FrOptions::default()).unwrap();
        let (m0, m1) = (fam.realize(&a).unwrap(), fam.realize(&b).unwrap());
        let bh = bhattacharyya_distance(&m0, &m1, &cfg).unwrap();
        assert!((r.distance - bh).abs() < 1e-3 * bh, "{} vs {bh}", r.distance);
        assert!(r.distance >= hellinger_distance(&m0, &m1, &cfg).unwrap());
    }

    #[test]
    fn iteration_budget() {
        let opts = FrOptions {
            max_iters: 1,
            ..FrOptions::default()
        };
        let err = fr_distance_numeric(&PoissonFamily::new(1), &[1.0], &[9.0], &ScaleConfig::default(), &opts);
        assert!(matches!(err, Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn rejects_out_of_domain_endpoint() {
        let err = fr_distance_numeric(&PoissonFamily::new(1), &[-1.0], &[9.0], &ScaleConfig::default(), &FrOptions::default());
        assert!(matches!(err, Err(Error::StepOutOfDomain(_))));
    }
}
