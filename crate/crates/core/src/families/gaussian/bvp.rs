//! Fisher-Rao distance between Gaussians by shooting on the geodesic system.
//!
//! The unknowns are the initial duals `(x, X)`; Newton's method with a
//! finite-difference Jacobian drives the endpoint of the RK4 flow onto the
//! target. Starts are tried from the log-map guess and the straight-line
//! guess, and then by continuation along a path of intermediate targets.

use nalgebra::{DMatrix, DVector};

use super::ode::{shoot, State};
use super::{gaussian_fisher_form, same_dim, GaussianCotangent, GaussianParams};
use crate::error::{Error, Result};
use crate::linalg::{spd_inverse, sym_inv_sqrt, sym_log, sym_pow, sym_sqrt, symmetrize};
use crate::measure::ScaleConfig;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BvpOptions {
    /// Number of RK4 steps on `[0, 1]`.
    pub steps: usize,
    /// Maximal endpoint mismatch, relative to `1 + |target|`.
    pub tol: f64,
    pub max_newton: usize,
}

impl Default for BvpOptions {
    fn default() -> Self {
        Self {
            steps: 1000,
            tol: 1e-9,
            max_newton: 40,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BvpSolution {
    pub distance: f64,
    /// Initial duals of the geodesic from `g0` to `g1`.
    pub initial_dual: GaussianCotangent,
    /// Final endpoint mismatch (max norm).
    pub residual: f64,
    pub newton_iterations: usize,
}

/// Packs `(x, upper triangle of X)`.
fn pack(x: &DVector<f64>, big: &DMatrix<f64>) -> DVector<f64> {
    let d = x.len();
    let mut out: Vec<f64> = x.iter().copied().collect();
    for i in 0..d {
        for j in i..d {
            out.push(big[(i, j)]);
        }
    }
    DVector::from_vec(out)
}

fn unpack(z: &DVector<f64>, d: usize) -> (DVector<f64>, DMatrix<f64>) {
    let x = DVector::from_iterator(d, z.iter().take(d).copied());
    let mut big = DMatrix::zeros(d, d);
    let mut k = d;
    for i in 0..d {
        for j in i..d {
            big[(i, j)] = z[k];
            big[(j, i)] = z[k];
            k += 1;
        }
    }
    (x, big)
}

struct Shooter<'a> {
    start: &'a GaussianParams,
    steps: usize,
}

impl Shooter<'_> {
    fn endpoint(&self, z: &DVector<f64>) -> Option<DVector<f64>> {
        let d = self.start.dim();
        let (x, big) = unpack(z, d);
        let s = shoot(
            &State {
                mean: self.start.mean().clone(),
                cov: self.start.cov().clone(),
                x,
                big,
            },
            self.steps,
        )?;
        Some(pack(&s.mean, &s.cov))
    }

    fn residual(&self, z: &DVector<f64>, target: &DVector<f64>) -> Option<DVector<f64>> {
        self.endpoint(z).map(|e| e - target)
    }

    fn jacobian(&self, z: &DVector<f64>) -> Option<DMatrix<f64>> {
        let n = z.len();
        let mut jac = DMatrix::zeros(n, n);
        for k in 0..n {
            let h = 1e-6 * (1.0 + z[k].abs());
            let mut hi = z.clone();
            let mut lo = z.clone();
            hi[k] += h;
            lo[k] -= h;
            let col = (self.endpoint(&hi)? - self.endpoint(&lo)?) / (2.0 * h);
            jac.set_column(k, &col);
        }
        Some(jac)
    }

    /// Damped Newton from `z`; returns the solution and iterations used.
    fn newton(&self, mut z: DVector<f64>, target: &DVector<f64>, opts: &BvpOptions) -> Option<(DVector<f64>, f64, usize)> {
        let tol = opts.tol * (1.0 + target.amax());
        let mut r = self.residual(&z, target)?;
        for it in 0..opts.max_newton {
            if r.amax() <= tol {
                return Some((z, r.amax(), it));
            }
            let step = self.jacobian(&z)?.lu().solve(&(-&r))?;
            let mut t = 1.0;
            let mut improved = None;
            for _ in 0..30 {
                let trial = &z + &step * t;
                if let Some(rt) = self.residual(&trial, target) {
                    if rt.norm() < r.norm() {
                        improved = Some((trial, rt));
                        break;
                    }
                }
                t *= 0.5;
            }
            let (zt, rt) = improved?;
            z = zt;
            r = rt;
        }
        (r.amax() <= tol).then(|| {
            let res = r.amax();
            (z, res, opts.max_newton)
        })
    }
}

/// Initial duals whose first-order flow points at `(mean, cov)` from `g0`.
fn guess(g0: &GaussianParams, dm: DVector<f64>, dcov: DMatrix<f64>) -> Result<DVector<f64>> {
    let inv = spd_inverse(g0.cov())?;
    let x = &inv * dm;
    let big = symmetrize(&(&inv * dcov * &inv * 0.5));
    Ok(pack(&x, &big))
}

/// Geodesic between two Gaussians by shooting; the distance is the length
/// of the initial velocity in the Fisher form.
pub fn gaussian_fr_bvp(g0: &GaussianParams, g1: &GaussianParams, cfg: &ScaleConfig, opts: &BvpOptions) -> Result<BvpSolution> {
    same_dim(g0.dim(), g1.dim())?;
    let d = g0.dim();
    if g0 == g1 {
        return Ok(BvpSolution {
            distance: 0.0,
            initial_dual: GaussianCotangent::zeros(d),
            residual: 0.0,
            newton_iterations: 0,
        });
    }
    let shooter = Shooter {
        start: g0,
        steps: opts.steps.max(1),
    };
    let target = pack(g1.mean(), g1.cov());
    let dm = g1.mean() - g0.mean();
    let root = sym_sqrt(g0.cov());
    let inv_root = sym_inv_sqrt(g0.cov());
    let whitened = symmetrize(&(&inv_root * g1.cov() * &inv_root));
    let log_dir = symmetrize(&(&root * sym_log(&whitened) * &root));

    let mut starts = vec![guess(g0, dm.clone(), log_dir.clone())?];
    starts.push(guess(g0, dm.clone(), g1.cov() - g0.cov())?);

    let mut found = starts
        .into_iter()
        .find_map(|z| shooter.newton(z, &target, opts));

    if found.is_none() {
        // Continuation through targets (m0 + t dm, S0^1/2 W^t S0^1/2).
        'outer: for pieces in [4usize, 16, 64] {
            let mut z = guess(g0, dm.clone() / pieces as f64, &log_dir / pieces as f64)?;
            let mut iters = 0;
            for k in 1..=pieces {
                let t = k as f64 / pieces as f64;
                let cov_t = symmetrize(&(&root * sym_pow(&whitened, t) * &root));
                let tgt = pack(&(g0.mean() + &dm * t), &cov_t);
                match shooter.newton(z.clone(), &tgt, opts) {
                    Some((zk, res, it)) => {
                        iters += it;
                        if k == pieces {
                            found = Some((zk, res, iters));
                            break 'outer;
                        }
                        // Extrapolate the dual to the next target.
                        z = &zk * ((k + 1) as f64 / k as f64);
                    }
                    None => continue 'outer,
                }
            }
        }
    }

    let (z, residual, newton_iterations) = found.ok_or_else(|| Error::NoConvergence {
        iterations: opts.max_newton,
        detail: "shooting did not reach the target covariance and mean".into(),
    })?;
    let (x, big) = unpack(&z, d);
    let velocity_mean = g0.cov() * &x;
    let velocity_cov = symmetrize(&(g0.cov() * &big * g0.cov() * 2.0));
    let distance = gaussian_fisher_form(g0, &velocity_mean, &velocity_cov, cfg)?.sqrt();
    Ok(BvpSolution {
        distance,
        initial_dual: GaussianCotangent::new(x, big)?,
        residual,
        newton_iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::gaussian::{gaussian_fr_1d, gaussian_fr_same_center};

    #[test]
    fn identical_endpoints() {
        let g = GaussianParams::scalar(1.0, 2.0).unwrap();
        let r = gaussian_fr_bvp(&g, &g, &ScaleConfig::default(), &BvpOptions::default()).unwrap();
        assert_eq!(r.distance, 0.0);
    }

    #[test]
    fn same_center_one_dimensional() {
        let g0 = GaussianParams::scalar(0.0, 1.0).unwrap();
        let g1 = GaussianParams::scalar(0.0, 2f64.exp()).unwrap();
        let r = gaussian_fr_bvp(&g0, &g1, &ScaleConfig::default(), &BvpOptions::default()).unwrap();
        assert!((r.distance - 2f64.sqrt()).abs() < 1e-8, "{}", r.distance);
    }

    #[test]
    fn shifted_means_match_closed_form() {
        let cfg = ScaleConfig::new(1.3).unwrap();
        for (m1, v0, v1) in [(1.0, 1.0, 1.0), (3.0, 0.5, 2.0), (-6.0, 0.2, 0.3)] {
            let g0 = GaussianParams::scalar(0.0, v0).unwrap();
            let g1 = GaussianParams::scalar(m1, v1).unwrap();
            let r = gaussian_fr_bvp(&g0, &g1, &cfg, &BvpOptions::default()).unwrap();
            let exact = gaussian_fr_1d(&g0, &g1, &cfg).unwrap();
            assert!((r.distance - exact).abs() < 1e-7 * exact, "{m1}: {} vs {exact}", r.distance);
        }
    }

    #[test]
    fn two_dimensional_same_center() {
        let cfg = ScaleConfig::default();
        let s0 = DMatrix::from_row_slice(2, 2, &[1.0, 0.4, 0.4, 2.0]);
        let s1 = DMatrix::from_row_slice(2, 2, &[3.0, -0.5, -0.5, 0.5]);
        let g0 = GaussianParams::new(DVector::zeros(2), s0.clone()).unwrap();
        let g1 = GaussianParams::new(DVector::zeros(2), s1.clone()).unwrap();
        let r = gaussian_fr_bvp(&g0, &g1, &cfg, &BvpOptions::default()).unwrap();
        let exact = gaussian_fr_same_center(&s0, &s1, &cfg).unwrap();
        assert!((r.distance - exact).abs() < 1e-7 * exact);
    }
}
