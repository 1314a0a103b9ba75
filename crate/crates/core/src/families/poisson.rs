use nalgebra::DMatrix;

use super::check_positive;
use crate::error::{Error, Result};
use crate::fisher_rao::ParametricFamily;
use crate::measure::{DiscreteMeasure, Label, Measure, ScaleConfig};

/// `He(pi_a, pi_b)^2 = 2 sigma^2 (1 - exp(-|sqrt a - sqrt b|^2 / 2))` for
/// products of Poisson distributions with intensities `a` and `b`.
pub fn poisson_hellinger(alpha: &[f64], beta: &[f64], cfg: &ScaleConfig) -> Result<f64> {
    check_positive(alpha, beta)?;
    let b = -0.5 * root_gap_sq(alpha, beta);
    let two_sig2 = 2.0 * cfg.sigma() * cfg.sigma();
    Ok((two_sig2 * -b.exp_m1()).sqrt())
}

/// `sigma |sqrt a - sqrt b|`.
pub fn poisson_fr(alpha: &[f64], beta: &[f64], cfg: &ScaleConfig) -> Result<f64> {
    check_positive(alpha, beta)?;
    Ok(cfg.sigma() * root_gap_sq(alpha, beta).sqrt())
}

/// Diagonal metric `sigma^2 / (4 a_i)`.
pub fn poisson_metric(alpha: &[f64], cfg: &ScaleConfig) -> Result<DMatrix<f64>> {
    check_positive(alpha, alpha)?;
    let s2 = cfg.sigma() * cfg.sigma();
    Ok(DMatrix::from_fn(alpha.len(), alpha.len(), |i, j| {
        if i == j {
            0.25 * s2 / alpha[i]
        } else {
            0.0
        }
    }))
}

fn root_gap_sq(alpha: &[f64], beta: &[f64]) -> f64 {
    alpha
        .iter()
        .zip(beta)
        .map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2))
        .sum()
}

/// Truncation level `max(60, ceil(10 max a))` for the series over counts.
pub fn poisson_truncation(intensities: &[f64]) -> usize {
    let top = intensities.iter().copied().fold(0.0, f64::max);
    60usize.max((10.0 * top).ceil() as usize)
}

/// Product-Poisson distribution truncated to counts with `sum n_i <= n_max`.
///
/// One-dimensional atoms are labelled by the count, higher-dimensional ones
/// by the tuple of counts.
pub fn poisson_measure(alpha: &[f64], n_max: usize) -> Result<DiscreteMeasure> {
    check_positive(alpha, alpha)?;
    let d = alpha.len();
    let log_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n_max).scan(0.0, |acc, k| {
            *acc += (k as f64).ln();
            Some(*acc)
        }))
        .collect();
    let log_pmf = |i: usize, n: usize| n as f64 * alpha[i].ln() - alpha[i] - log_fact[n];

    let mut atoms = Vec::new();
    let mut counts = Vec::with_capacity(d);
    enumerate_counts(d, n_max, &mut counts, &mut |c| {
        let w: f64 = c.iter().enumerate().map(|(i, &n)| log_pmf(i, n)).sum::<f64>().exp();
        let label = if d == 1 {
            Label::Int(c[0] as i64)
        } else {
            Label::Tuple(c.iter().map(|&n| Label::Int(n as i64)).collect())
        };
        atoms.push((label, w));
    });
    DiscreteMeasure::from_pairs(atoms)
}

/// Calls `f` on every count vector of length `d` with total at most `budget`.
fn enumerate_counts(d: usize, budget: usize, prefix: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if prefix.len() == d {
        f(prefix);
        return;
    }
    for n in 0..=budget {
        prefix.push(n);
        enumerate_counts(d, budget - n, prefix, f);
        prefix.pop();
    }
}

/// Products of Poisson distributions parameterized by their intensities.
#[derive(Clone, Copy, Debug)]
pub struct PoissonFamily {
    dim: usize,
    n_max: Option<usize>,
}

impl PoissonFamily {
    pub fn new(dim: usize) -> Self {
        Self { dim, n_max: None }
    }

    /// Fixes the truncation level instead of choosing it per parameter.
    pub fn with_truncation(dim: usize, n_max: usize) -> Self {
        Self {
            dim,
            n_max: Some(n_max),
        }
    }
}

impl ParametricFamily for PoissonFamily {
    fn param_dim(&self) -> usize {
        self.dim
    }

    fn in_domain(&self, p: &[f64]) -> bool {
        p.len() == self.dim && p.iter().all(|x| *x > 0.0 && x.is_finite())
    }

    fn realize(&self, p: &[f64]) -> Result<Measure> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        let n_max = self.n_max.unwrap_or_else(|| poisson_truncation(p));
        Ok(poisson_measure(p, n_max)?.into())
    }

    fn closed_form_metric(&self, p: &[f64], cfg: &ScaleConfig) -> Option<DMatrix<f64>> {
        poisson_metric(p, cfg).ok()
    }
}
