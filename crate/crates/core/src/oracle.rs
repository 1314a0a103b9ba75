//! Reference computations that reach the same quantities as the production
//! code by a different route. They are slow or restricted and exist to
//! check the closed forms.

use std::collections::BTreeSet;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::families::GaussianParams;
use crate::linalg::spd_inverse;
use crate::measure::{DiscreteMeasure, Label, ScaleConfig};

/// All set partitions of `0..n`, each as a list of blocks.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for item in 0..n {
        let mut next = Vec::new();
        for blocks in out {
            for b in 0..blocks.len() {
                let mut grown = blocks.clone();
                grown[b].push(item);
                next.push(grown);
            }
            let mut fresh = blocks;
            fresh.push(vec![item]);
            next.push(fresh);
        }
        out = next;
    }
    out
}

fn merged_support(mu0: &DiscreteMeasure, mu1: &DiscreteMeasure) -> Vec<Label> {
    mu0.support().chain(mu1.support()).cloned().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Affinity mass as the infimum over all partitions of the support of
/// `sum sqrt(mu0(A) mu1(A))`. Supports of at most three atoms only.
pub fn partition_affinity(mu0: &DiscreteMeasure, mu1: &DiscreteMeasure) -> Result<f64> {
    let labels = merged_support(mu0, mu1);
    if labels.len() > 3 {
        return Err(Error::ConditionViolated(format!(
            "partition oracle limited to 3 atoms, got {}",
            labels.len()
        )));
    }
    let w0: Vec<f64> = labels.iter().map(|l| mu0.weight_of(l)).collect();
    let w1: Vec<f64> = labels.iter().map(|l| mu1.weight_of(l)).collect();
    let value = set_partitions(labels.len())
        .iter()
        .map(|blocks| {
            blocks
                .iter()
                .map(|b| {
                    let a: f64 = b.iter().map(|&i| w0[i]).sum();
                    let c: f64 = b.iter().map(|&i| w1[i]).sum();
                    (a * c).sqrt()
                })
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min);
    Ok(if value.is_finite() { value } else { 0.0 })
}

/// `sigma sqrt(m0 + m1 - 2 * partition_affinity)`.
pub fn partition_hellinger(mu0: &DiscreteMeasure, mu1: &DiscreteMeasure, cfg: &ScaleConfig) -> Result<f64> {
    let aff = partition_affinity(mu0, mu1)?;
    let sq = mu0.total_mass() + mu1.total_mass() - 2.0 * aff;
    Ok(cfg.sigma() * sq.max(0.0).sqrt())
}

/// Direct slerp of the square-root vectors of two probability measures,
/// squared back into weights on the merged support.
pub fn slerp_probability(nu0: &DiscreteMeasure, nu1: &DiscreteMeasure, s: f64) -> Result<DiscreteMeasure> {
    let labels = merged_support(nu0, nu1);
    let u0: Vec<f64> = labels.iter().map(|l| nu0.weight_of(l).sqrt()).collect();
    let u1: Vec<f64> = labels.iter().map(|l| nu1.weight_of(l).sqrt()).collect();
    let cos: f64 = u0.iter().zip(&u1).map(|(a, b)| a * b).sum();
    let theta = cos.clamp(-1.0, 1.0).acos();
    let (a, b) = if theta == 0.0 {
        (1.0 - s, s)
    } else {
        (((1.0 - s) * theta).sin() / theta.sin(), (s * theta).sin() / theta.sin())
    };
    let atoms = labels
        .into_iter()
        .zip(u0.iter().zip(&u1))
        .map(|(l, (x, y))| (l, (a * x + b * y).powi(2)))
        .collect();
    DiscreteMeasure::from_pairs(atoms)
}

/// `ln k!` for `k = 0..=n` by cumulative sums.
fn log_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(acc);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Poisson distance by summing `(sqrt p_a(n) - sqrt p_b(n))^2` over every
/// count vector with `sum n_i <= max(60, ceil(10 max(a, b)))`.
pub fn poisson_hellinger_series(alpha: &[f64], beta: &[f64], cfg: &ScaleConfig) -> Result<f64> {
    if alpha.len() != beta.len() {
        return Err(Error::DimensionMismatch {
            expected: alpha.len(),
            found: beta.len(),
        });
    }
    if alpha.iter().chain(beta).any(|&x| !(x > 0.0)) {
        return Err(Error::NonPositiveParam);
    }
    let top = alpha.iter().chain(beta).fold(0.0f64, |m, &x| m.max(x));
    let cap = 60usize.max((10.0 * top).ceil() as usize);
    let lf = log_factorials(cap);
    let (sa, sb): (f64, f64) = (alpha.iter().sum(), beta.iter().sum());
    let mut counts = vec![0usize; alpha.len()];
    let mut total = 0.0;
    series_rec(0, cap, &mut counts, &mut |n| {
        let (mut la, mut lb) = (-sa, -sb);
        for (i, &k) in n.iter().enumerate() {
            la += k as f64 * alpha[i].ln() - lf[k];
            lb += k as f64 * beta[i].ln() - lf[k];
        }
        let d = (0.5 * la).exp() - (0.5 * lb).exp();
        total += d * d;
    });
    Ok(cfg.sigma() * total.sqrt())
}

fn series_rec(axis: usize, budget: usize, counts: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if axis == counts.len() {
        visit(counts);
        return;
    }
    for k in 0..=budget {
        counts[axis] = k;
        series_rec(axis + 1, budget - k, counts, visit);
    }
    counts[axis] = 0;
}

/// Midpoint-rule integral of `(sqrt f - sqrt g)^2` over a box, with the
/// box split into `n` cells per axis (dimension 1 or 2).
fn box_integral(
    lower: &[f64],
    upper: &[f64],
    n: usize,
    f: impl Fn(&[f64]) -> f64,
    g: impl Fn(&[f64]) -> f64,
) -> f64 {
    let h: Vec<f64> = lower.iter().zip(upper).map(|(a, b)| (b - a) / n as f64).collect();
    let vol: f64 = h.iter().product();
    let at = |axis: usize, i: usize| lower[axis] + (i as f64 + 0.5) * h[axis];
    let term = |x: &[f64]| {
        let d = f(x).sqrt() - g(x).sqrt();
        d * d
    };
    let total: f64 = match lower.len() {
        1 => (0..n).map(|i| term(&[at(0, i)])).sum(),
        _ => (0..n)
            .map(|i| (0..n).map(|j| term(&[at(0, i), at(1, j)])).sum::<f64>())
            .sum(),
    };
    total * vol
}

/// Exponential-family distance by midpoint quadrature of the product
/// densities on `[0, L]^d` (`d <= 2`), `L` chosen so the tail mass is below
/// `1e-14`, extrapolated from `n` and `2n` cells per axis.
pub fn exp_hellinger_quadrature(alpha: &[f64], beta: &[f64], cfg: &ScaleConfig) -> Result<f64> {
    if alpha.len() != beta.len() {
        return Err(Error::DimensionMismatch {
            expected: alpha.len(),
            found: beta.len(),
        });
    }
    let d = alpha.len();
    if !(1..=2).contains(&d) {
        return Err(Error::ConditionViolated(format!("quadrature oracle supports d <= 2, got {d}")));
    }
    if alpha.iter().chain(beta).any(|&x| !(x > 0.0)) {
        return Err(Error::NonPositiveParam);
    }
    let slowest = alpha.iter().chain(beta).fold(f64::INFINITY, |m, &x| m.min(x));
    let length = 34.0 / slowest;
    let density = |rates: &[f64]| {
        let rates = rates.to_vec();
        move |x: &[f64]| rates.iter().zip(x).map(|(a, t)| a * (-a * t).exp()).product::<f64>()
    };
    let n = if d == 1 { 1 << 16 } else { 1 << 11 };
    let lower = vec![0.0; d];
    let upper = vec![length; d];
    let coarse = box_integral(&lower, &upper, n, density(alpha), density(beta));
    let fine = box_integral(&lower, &upper, 2 * n, density(alpha), density(beta));
    let sq = (4.0 * fine - coarse) / 3.0;
    Ok(cfg.sigma() * sq.max(0.0).sqrt())
}

/// Gaussian distance by midpoint quadrature on a box of eight standard
/// deviations around both densities, `2^12` cells per axis (`d <= 2`).
pub fn gaussian_hellinger_quadrature(g0: &GaussianParams, g1: &GaussianParams, cfg: &ScaleConfig) -> Result<f64> {
    let d = g0.dim();
    if g1.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: g1.dim(),
        });
    }
    if !(1..=2).contains(&d) {
        return Err(Error::ConditionViolated(format!("quadrature oracle supports d <= 2, got {d}")));
    }
    let mut lower = vec![f64::INFINITY; d];
    let mut upper = vec![f64::NEG_INFINITY; d];
    for g in [g0, g1] {
        for i in 0..d {
            let sd = g.cov()[(i, i)].sqrt();
            lower[i] = lower[i].min(g.mean()[i] - 8.0 * sd);
            upper[i] = upper[i].max(g.mean()[i] + 8.0 * sd);
        }
    }
    let density = |g: &GaussianParams| -> Result<_> {
        let inv = spd_inverse(g.cov())?;
        let norm = 1.0 / ((2.0 * std::f64::consts::PI).powi(d as i32) * g.cov().determinant()).sqrt();
        let mean = g.mean().clone();
        Ok(move |x: &[f64]| {
            let y = DVector::from_iterator(d, x.iter().zip(mean.iter()).map(|(a, b)| a - b));
            norm * (-0.5 * y.dot(&(&inv * &y))).exp()
        })
    };
    let sq = box_integral(&lower, &upper, 1 << 12, density(g0)?, density(g1)?);
    Ok(cfg.sigma() * sq.max(0.0).sqrt())
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}
