use nalgebra::{DMatrix, DVector};

use super::{same_dim, GaussianCotangent, GaussianParams};
use crate::error::Result;
use crate::linalg::symmetrize;
use crate::measure::ScaleConfig;

/// Right-hand side of the geodesic system at a state.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianFlow {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
    pub mean_dual: DVector<f64>,
    pub cov_dual: DMatrix<f64>,
}

/// Quantities preserved along geodesics: the Hamiltonian, the mean dual and
/// the (generally nonsymmetric) moment `S X + m x^T / 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Conserved {
    pub hamiltonian: f64,
    pub mean_dual: DVector<f64>,
    pub moment: DMatrix<f64>,
}

/// One sample of an integrated geodesic.
#[derive(Clone, Debug)]
pub struct GeodesicSample {
    pub s: f64,
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
    pub mean_dual: DVector<f64>,
    pub cov_dual: DMatrix<f64>,
}

impl GeodesicSample {
    pub fn params(&self) -> Result<GaussianParams> {
        GaussianParams::new(self.mean.clone(), symmetrize(&self.cov))
    }

    pub fn cotangent(&self) -> Result<GaussianCotangent> {
        GaussianCotangent::new(self.mean_dual.clone(), symmetrize(&self.cov_dual))
    }
}

fn hamiltonian_raw(cov: &DMatrix<f64>, x: &DVector<f64>, big: &DMatrix<f64>, cfg: &ScaleConfig) -> f64 {
    let sx = cov * big;
    (x.dot(&(cov * x)) + 2.0 * (&sx * &sx).trace()) / (cfg.sigma() * cfg.sigma())
}

/// `H = (x . S x + 2 tr(S X S X)) / sigma^2`, normalized so that
/// `sigma^2 / 2` times its gradients is the geodesic vector field.
pub fn gaussian_hamiltonian(g: &GaussianParams, c: &GaussianCotangent, cfg: &ScaleConfig) -> Result<f64> {
    same_dim(g.dim(), c.mean_dual.len())?;
    Ok(hamiltonian_raw(&g.cov, &c.mean_dual, &c.cov_dual, cfg))
}

fn flow_raw(cov: &DMatrix<f64>, x: &DVector<f64>, big: &DMatrix<f64>) -> GaussianFlow {
    let xsx = big * cov * big;
    GaussianFlow {
        mean: cov * x,
        cov: symmetrize(&(cov * big * cov * 2.0)),
        mean_dual: DVector::zeros(x.len()),
        cov_dual: symmetrize(&(xsx * -2.0 - x * x.transpose() * 0.5)),
    }
}

/// `m' = S x`, `S' = 2 S X S`, `x' = 0`, `X' = -2 X S X - x x^T / 2`.
pub fn gaussian_geodesic_ode(g: &GaussianParams, c: &GaussianCotangent) -> Result<GaussianFlow> {
    same_dim(g.dim(), c.mean_dual.len())?;
    Ok(flow_raw(&g.cov, &c.mean_dual, &c.cov_dual))
}

fn conserved_raw(
    mean: &DVector<f64>,
    cov: &DMatrix<f64>,
    x: &DVector<f64>,
    big: &DMatrix<f64>,
    cfg: &ScaleConfig,
) -> Conserved {
    Conserved {
        hamiltonian: hamiltonian_raw(cov, x, big, cfg),
        mean_dual: x.clone(),
        moment: cov * big + mean * x.transpose() * 0.5,
    }
}

pub fn gaussian_conserved(g: &GaussianParams, c: &GaussianCotangent, cfg: &ScaleConfig) -> Result<Conserved> {
    same_dim(g.dim(), c.mean_dual.len())?;
    Ok(conserved_raw(&g.mean, &g.cov, &c.mean_dual, &c.cov_dual, cfg))
}

impl GeodesicSample {
    pub fn conserved(&self, cfg: &ScaleConfig) -> Conserved {
        conserved_raw(&self.mean, &self.cov, &self.mean_dual, &self.cov_dual, cfg)
    }
}

/// Unvalidated integrator state.
#[derive(Clone, Debug)]
pub(super) struct State {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
    pub x: DVector<f64>,
    pub big: DMatrix<f64>,
}

impl State {
    fn advance(&self, k: &GaussianFlow, h: f64) -> State {
        State {
            mean: &self.mean + &k.mean * h,
            cov: &self.cov + &k.cov * h,
            x: &self.x + &k.mean_dual * h,
            big: &self.big + &k.cov_dual * h,
        }
    }

    fn finite(&self) -> bool {
        self.mean.iter().chain(self.cov.iter()).chain(self.big.iter()).all(|v| v.is_finite())
    }
}

/// One classical Runge-Kutta step; symmetry of the matrices is restored afterwards.
fn rk4_step(s: &State, h: f64) -> State {
    let f = |st: &State| flow_raw(&st.cov, &st.x, &st.big);
    let k1 = f(s);
    let k2 = f(&s.advance(&k1, 0.5 * h));
    let k3 = f(&s.advance(&k2, 0.5 * h));
    let k4 = f(&s.advance(&k3, h));
    let w = h / 6.0;
    State {
        mean: &s.mean + (&k1.mean + &k2.mean * 2.0 + &k3.mean * 2.0 + &k4.mean) * w,
        cov: symmetrize(&(&s.cov + (&k1.cov + &k2.cov * 2.0 + &k3.cov * 2.0 + &k4.cov) * w)),
        x: s.x.clone(),
        big: symmetrize(&(&s.big + (&k1.cov_dual + &k2.cov_dual * 2.0 + &k3.cov_dual * 2.0 + &k4.cov_dual) * w)),
    }
}

/// Integrates from `s = 0` to `s = 1` in `steps` equal steps and returns
/// the final state, or `None` once the trajectory blows up.
pub(super) fn shoot(start: &State, steps: usize) -> Option<State> {
    let h = 1.0 / steps as f64;
    let mut s = start.clone();
    for _ in 0..steps {
        s = rk4_step(&s, h);
        if !s.finite() {
            return None;
        }
    }
    Some(s)
}

/// Integrates the geodesic with initial data `(g, c)` over `s in [0, 1]`,
/// returning all `steps + 1` samples.
pub fn integrate_geodesic(g: &GaussianParams, c: &GaussianCotangent, steps: usize) -> Result<Vec<GeodesicSample>> {
    same_dim(g.dim(), c.mean_dual.len())?;
    let steps = steps.max(1);
    let h = 1.0 / steps as f64;
    let mut state = State {
        mean: g.mean.clone(),
        cov: g.cov.clone(),
        x: c.mean_dual.clone(),
        big: c.cov_dual.clone(),
    };
    let sample = |k: usize, st: &State| GeodesicSample {
        s: k as f64 * h,
        mean: st.mean.clone(),
        cov: st.cov.clone(),
        mean_dual: st.x.clone(),
        cov_dual: st.big.clone(),
    };
    let mut out = Vec::with_capacity(steps + 1);
    out.push(sample(0, &state));
    for k in 1..=steps {
        state = rk4_step(&state, h);
        out.push(sample(k, &state));
    }
    Ok(out)
}

/// Largest deviation of a one-dimensional geodesic from its circle
/// `(m - j/x)^2 + 2 S = h / x^2`, with `h = 4 S^2 X^2 + 2 S x^2` and
/// `j = 2 S X + m x` taken from the first sample. Requires `x != 0`.
pub fn semicircle_residual(samples: &[GeodesicSample]) -> Option<f64> {
    let first = samples.first()?;
    if first.mean.len() != 1 || first.mean_dual[0] == 0.0 {
        return None;
    }
    let (m, s, x, big) = (first.mean[0], first.cov[(0, 0)], first.mean_dual[0], first.cov_dual[(0, 0)]);
    let h = 4.0 * s * s * big * big + 2.0 * s * x * x;
    let j = 2.0 * s * big + m * x;
    let centre = j / x;
    let radius_sq = h / (x * x);
    Some(
        samples
            .iter()
            .map(|p| ((p.mean[0] - centre).powi(2) + 2.0 * p.cov[(0, 0)] - radius_sq).abs())
            .fold(0.0, f64::max),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_pow;

    fn sym(a: f64, b: f64, c: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[a, b, b, c])
    }

    #[test]
    fn hamiltonian_examples() {
        let cfg = ScaleConfig::default();
        let g = GaussianParams::scalar(0.0, 1.0).unwrap();
        assert_eq!(gaussian_hamiltonian(&g, &GaussianCotangent::zeros(1), &cfg).unwrap(), 0.0);
        let c = GaussianCotangent::new(DVector::zeros(1), DMatrix::from_element(1, 1, 1.0)).unwrap();
        assert_eq!(gaussian_hamiltonian(&g, &c, &cfg).unwrap(), 2.0);
    }

    #[test]
    fn stationary_and_same_center_flow() {
        let g = GaussianParams::from_slices(&[1.0, 2.0], &[2.0, 0.5, 0.5, 1.0]).unwrap();
        let f = gaussian_geodesic_ode(&g, &GaussianCotangent::zeros(2)).unwrap();
        assert_eq!(f.mean.amax(), 0.0);
        assert_eq!(f.cov.amax(), 0.0);
        assert_eq!(f.cov_dual.amax(), 0.0);
        let c = GaussianCotangent::new(DVector::zeros(2), sym(0.3, -0.1, 0.2)).unwrap();
        let f = gaussian_geodesic_ode(&g, &c).unwrap();
        assert_eq!(f.mean.amax(), 0.0);
        assert_eq!(f.mean_dual.amax(), 0.0);
        assert_eq!(f.cov, symmetrize(&(g.cov() * c.cov_dual() * g.cov() * 2.0)));
    }

    #[test]
    fn vector_field_is_scaled_hamiltonian_gradient() {
        let cfg = ScaleConfig::new(1.3).unwrap();
        let s2h = 0.5 * cfg.sigma() * cfg.sigma();
        let cov = sym(1.5, 0.3, 0.8);
        let x = DVector::from_vec(vec![0.7, -0.5]);
        let big = sym(0.2, 0.1, -0.3);
        let f = flow_raw(&cov, &x, &big);
        let h = 1e-6;
        let ham = |c: &DMatrix<f64>, x: &DVector<f64>, b: &DMatrix<f64>| hamiltonian_raw(c, x, b, &cfg);
        for i in 0..2 {
            let mut e = DVector::zeros(2);
            e[i] = h;
            let dx = (ham(&cov, &(&x + &e), &big) - ham(&cov, &(&x - &e), &big)) / (2.0 * h);
            assert!((s2h * dx - f.mean[i]).abs() < 1e-6);
        }
        // Symmetric perturbation E_ij + E_ji: the difference quotient is twice the gradient entry.
        for i in 0..2 {
            for j in 0..2 {
                let mut e = DMatrix::zeros(2, 2);
                e[(i, j)] += h;
                e[(j, i)] += h;
                let dbig = (ham(&cov, &x, &(&big + &e)) - ham(&cov, &x, &(&big - &e))) / (4.0 * h);
                let dcov = (ham(&(&cov + &e), &x, &big) - ham(&(&cov - &e), &x, &big)) / (4.0 * h);
                assert!((s2h * dbig - f.cov[(i, j)]).abs() < 1e-6);
                assert!((-s2h * dcov - f.cov_dual[(i, j)]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn conserved_quantities_along_rk4() {
        let cfg = ScaleConfig::new(0.8).unwrap();
        let g = GaussianParams::from_slices(&[0.0, 1.0], &[1.0, 0.2, 0.2, 0.6]).unwrap();
        let c = GaussianCotangent::new(DVector::from_vec(vec![0.5, -0.3]), sym(0.4, -0.2, 0.1)).unwrap();
        let path = integrate_geodesic(&g, &c, 1000).unwrap();
        let c0 = path[0].conserved(&cfg);
        for p in &path {
            let c = p.conserved(&cfg);
            assert!((c.hamiltonian - c0.hamiltonian).abs() <= 1e-8 * c0.hamiltonian.abs());
            assert_eq!(c.mean_dual, c0.mean_dual);
            assert!((&c.moment - &c0.moment).amax() <= 1e-8 * c0.moment.amax());
        }
        assert_eq!(gaussian_conserved(&g, &GaussianCotangent::zeros(2), &cfg).unwrap().hamiltonian, 0.0);
    }

    #[test]
    fn same_center_closed_form_solves_flow() {
        let s0 = sym(2.0, 0.3, 1.0);
        let s1 = sym(0.7, -0.2, 1.8);
        let r = crate::linalg::sym_sqrt(&s0);
        let ir = crate::linalg::sym_inv_sqrt(&s0);
        let inner = symmetrize(&(&ir * &s1 * &ir));
        let log = crate::linalg::sym_log(&inner);
        // S' = 2 S X S at s = 0 with S' = r log r.
        let ds = &r * &log * &r;
        let s0inv = s0.clone().try_inverse().unwrap();
        let big = symmetrize(&(&s0inv * &ds * &s0inv * 0.5));
        let g = GaussianParams::new(DVector::zeros(2), s0.clone()).unwrap();
        let c = GaussianCotangent::new(DVector::zeros(2), big).unwrap();
        let path = integrate_geodesic(&g, &c, 1000).unwrap();
        for p in path.iter().step_by(100) {
            let exact = &r * sym_pow(&inner, p.s) * &r;
            assert!((&p.cov - exact).amax() < 1e-8, "{}", p.s);
        }
    }
}
