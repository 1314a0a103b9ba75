use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::measure::{GridMeasure, Measure, ScaleConfig};

/// Metric `A = 4 sigma^2 int grad sqrt f (x) grad sqrt f` of the translates of
/// a profile `f`, by central differences on the grid.
///
/// The quadrature is repeated on the grid coarsened by two; disagreement
/// beyond 25% means the integral diverges (for example at a jump of `f`).
pub fn translation_metric(f: &GridMeasure, cfg: &ScaleConfig) -> Result<DMatrix<f64>> {
    if f.shape().iter().any(|&n| n < 5) {
        return Err(Error::InvalidMeasure("translation metric needs at least 5 cells per axis".into()));
    }
    let fine = gradient_energy(f, 1);
    let coarse = gradient_energy(f, 2);
    let (tf, tc) = (fine.trace(), coarse.trace());
    if !tf.is_finite() || (tf - tc).abs() > 0.25 * tf.max(tc) {
        return Err(Error::UnboundedMetric { coarse: tc, fine: tf });
    }
    Ok(fine * (4.0 * cfg.sigma() * cfg.sigma()))
}

/// `int grad sqrt f (x) grad sqrt f` using every `stride`-th cell along each axis.
fn gradient_energy(f: &GridMeasure, stride: usize) -> DMatrix<f64> {
    let shape = f.shape();
    let d = shape.len();
    let sub: Vec<usize> = shape.iter().map(|n| (n + stride - 1) / stride).collect();
    let h: Vec<f64> = f.spacing().iter().map(|h| h * stride as f64).collect();
    let root = |idx: &[usize]| -> f64 {
        let flat = idx
            .iter()
            .zip(shape)
            .fold(0, |acc, (&i, &n)| acc * n + i * stride);
        f.density()[flat].sqrt()
    };
    let cells: usize = sub.iter().product();
    let mut acc = DMatrix::zeros(d, d);
    let mut idx = vec![0usize; d];
    let mut grad = DVector::zeros(d);
    for flat in 0..cells {
        let mut rem = flat;
        for axis in (0..d).rev() {
            idx[axis] = rem % sub[axis];
            rem /= sub[axis];
        }
        for axis in 0..d {
            let i = idx[axis];
            let mut lo = idx.clone();
            let mut hi = idx.clone();
            let span = if i == 0 {
                hi[axis] += 1;
                1.0
            } else if i + 1 == sub[axis] {
                lo[axis] -= 1;
                1.0
            } else {
                lo[axis] -= 1;
                hi[axis] += 1;
                2.0
            };
            grad[axis] = (root(&hi) - root(&lo)) / (span * h[axis]);
        }
        acc += &grad * grad.transpose();
    }
    let vol: f64 = h.iter().product();
    (&acc + acc.transpose()) * (0.5 * vol)
}

/// `sqrt((z - y) . A (z - y))`.
pub fn translation_fr(a: &DMatrix<f64>, y: &[f64], z: &[f64]) -> Result<f64> {
    if y.len() != a.nrows() || z.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: y.len().max(z.len()),
        });
    }
    let v = DVector::from_iterator(y.len(), z.iter().zip(y).map(|(a, b)| a - b));
    Ok(v.dot(&(a * &v)).max(0.0).sqrt())
}

/// Squared distance between translates of the indicator of `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndicatorDemo {
    /// `2 sigma^2 min(|y - z|, 1)`.
    pub exact: f64,
    /// The same quantity from indicator densities on a grid of spacing `2^-20`.
    pub grid: f64,
}

pub fn translation_indicator_demo(y: f64, z: f64, cfg: &ScaleConfig) -> Result<IndicatorDemo> {
    let gap = (z - y).abs();
    let s2 = cfg.sigma() * cfg.sigma();
    let exact = 2.0 * s2 * gap.min(1.0);
    // Translation invariance lets the grid check start the first indicator at
    // the origin and cap the shift once the supports are disjoint.
    let shift = gap.min(1.5);
    let h = 2f64.powi(-20);
    let cells = ((shift + 1.0) / h).ceil() as usize + 1;
    let indicator = |lo: f64| move |x: &[f64]| if x[0] >= lo && x[0] < lo + 1.0 { 1.0 } else { 0.0 };
    let a = GridMeasure::from_fn(vec![0.0], vec![h], vec![cells], indicator(0.0))?;
    let b = GridMeasure::from_fn(vec![0.0], vec![h], vec![cells], indicator(shift))?;
    let he = crate::hellinger::hellinger_distance(&Measure::Grid(a), &Measure::Grid(b), cfg)?;
    Ok(IndicatorDemo { exact, grid: he * he })
}

/// Polygonal length of `s -> translate by s (z - y)` through `n` equal
/// steps: `n sigma sqrt(2 min(|z - y| / n, 1))`, unbounded as `n` grows.
pub fn indicator_chord_length(y: f64, z: f64, n: usize, cfg: &ScaleConfig) -> f64 {
    let step = (z - y).abs() / n as f64;
    n as f64 * cfg.sigma() * (2.0 * step.min(1.0)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_grid(var: f64, cells: usize) -> GridMeasure {
        let sd = var.sqrt();
        let h = 16.0 * sd / cells as f64;
        GridMeasure::from_fn(vec![-8.0 * sd], vec![h], vec![cells], |x| {
            (-(x[0] * x[0]) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
        })
        .unwrap()
    }

    #[test]
    fn gaussian_profile() {
        let cfg = ScaleConfig::new(1.5).unwrap();
        let a = translation_metric(&gaussian_grid(2.0, 4096), &cfg).unwrap();
        let exact = 2.25 / 2.0;
        assert!((a[(0, 0)] - exact).abs() < 1e-3 * exact);
        assert_eq!(translation_fr(&a, &[0.3], &[0.3]).unwrap(), 0.0);
    }

    #[test]
    fn symmetric_profile_has_diagonal_metric() {
        let g = GridMeasure::from_fn(vec![-4.0, -4.0], vec![0.05, 0.05], vec![160, 160], |x| {
            (-(x[0] * x[0]) - 2.0 * x[1].powi(4)).exp()
        })
        .unwrap();
        let a = translation_metric(&g, &ScaleConfig::default()).unwrap();
        assert!(a[(0, 1)].abs() < 1e-10 * a[(0, 0)]);
        assert_eq!(a[(0, 1)], a[(1, 0)]);
    }

    #[test]
    fn indicator_profile_is_unbounded() {
        let g = GridMeasure::from_fn(vec![-1.0], vec![1e-3], vec![3000], |x| {
            if (0.0..1.0).contains(&x[0]) { 1.0 } else { 0.0 }
        })
        .unwrap();
        assert!(matches!(translation_metric(&g, &ScaleConfig::default()), Err(Error::UnboundedMetric { .. })));
    }

    #[test]
    fn indicator_demo() {
        let cfg = ScaleConfig::default();
        assert_eq!(translation_indicator_demo(0.4, 0.4, &cfg).unwrap().exact, 0.0);
        let d = translation_indicator_demo(0.1, 0.35, &cfg).unwrap();
        assert!((d.exact - 0.5).abs() < 1e-15);
        assert!((d.grid - 0.5).abs() < 1e-6);
        let far = translation_indicator_demo(-3.0, 4.0, &ScaleConfig::new(2.0).unwrap()).unwrap();
        assert_eq!(far.exact, 8.0);
        assert!((far.grid - 8.0).abs() < 1e-6);
        let odd = translation_indicator_demo(0.0, 0.123456789, &cfg).unwrap();
        assert!((odd.grid - odd.exact).abs() < 1e-6);
        assert!(indicator_chord_length(0.0, 0.5, 1_000_000, &cfg) > 10.0 * indicator_chord_length(0.0, 0.5, 100, &cfg));
    }
}
