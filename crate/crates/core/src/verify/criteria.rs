use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Check, Item};
use crate::curves::{degenerate_example_curve, speed_identity_profile, SampledCurve};
use crate::families::gaussian::{integrate_geodesic, semicircle_residual};
use crate::families::{
    exp_fr, exp_metric, gaussian_fisher_form, gaussian_fr_1d, gaussian_fr_bvp, gaussian_fr_eigvec_case,
    gaussian_fr_same_center, gaussian_hellinger, gaussian_m, poisson_fr, poisson_hellinger, poisson_metric,
    BvpOptions, ExponentialFamily, GaussianCotangent, GaussianGridFamily, GaussianParams, PoissonFamily,
};
use crate::fisher_rao::{
    bhattacharyya_distance, cone_distance, default_step, fisher_matrix_fd, fr_distance_numeric, product_fr,
    spherical_geodesic, ConePoint, FrOptions, ParametricFamily,
};
use crate::hellinger::{hellinger_distance, hellinger_geodesic, product_hellinger, product_hellinger_prob};
use crate::linalg::{sym_sqrt, symmetrize};
use crate::measure::{product, pushforward, tv_norm_diff, DiscreteMeasure, Label, Measure, ScaleConfig};
use crate::oracle::adaptive_simpson;
use crate::Result;

const S_GRID: usize = 11;

fn s_grid() -> impl Iterator<Item = f64> {
    (0..S_GRID).map(|k| k as f64 / (S_GRID - 1) as f64)
}

fn random_sigma(rng: &mut ChaCha8Rng) -> ScaleConfig {
    ScaleConfig::new(rng.random_range(0.5..2.0)).expect("positive sigma")
}

/// Weights in `[0, 2)` on labels `0..n`, each zero with probability `zeros`.
fn random_weights(rng: &mut ChaCha8Rng, n: usize, zeros: f64) -> Vec<f64> {
    (0..n)
        .map(|_| if rng.random::<f64>() < zeros { 0.0 } else { rng.random_range(0.0..2.0) })
        .collect()
}

fn random_discrete(rng: &mut ChaCha8Rng, max_support: usize, zeros: f64) -> DiscreteMeasure {
    let n = rng.random_range(1..=max_support);
    DiscreteMeasure::from_weights(&random_weights(rng, n, zeros)).expect("valid weights")
}

fn random_probability(rng: &mut ChaCha8Rng, n: usize, zeros: f64) -> DiscreteMeasure {
    let mut w = random_weights(rng, n, zeros);
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    let total: f64 = w.iter().sum();
    DiscreteMeasure::from_weights(&w.iter().map(|x| x / total).collect::<Vec<_>>()).expect("valid weights")
}

fn he(a: &Measure, b: &Measure, cfg: &ScaleConfig) -> Result<f64> {
    hellinger_distance(a, b, cfg)
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

pub(super) fn geodesic_constant_speed(rng: &mut ChaCha8Rng) -> Check {
    let mut item = Item::at_most("|He(g(s),g(t)) - |s-t| He| / (1 + He)", 1e-11);
    for _ in 0..200 {
        let cfg = random_sigma(rng);
        let a: Measure = random_discrete(rng, 8, 0.2).into();
        let b: Measure = random_discrete(rng, 8, 0.2).into();
        item.record_result((|| {
            let d = he(&a, &b, &cfg)?;
            let pts = s_grid().map(|s| hellinger_geodesic(&a, &b, s)).collect::<Result<Vec<_>>>()?;
            let mut worst = 0.0f64;
            for (i, si) in s_grid().enumerate() {
                for (j, sj) in s_grid().enumerate().skip(i + 1) {
                    let lhs = he(&pts[i], &pts[j], &cfg)?;
                    worst = worst.max((lhs - (sj - si) * d).abs() / (1.0 + d));
                }
            }
            Ok(worst)
        })());
    }
    Check {
        id: 1,
        title: "geodesics have constant speed",
        items: vec![item],
        notes: vec![],
    }
}

pub(super) fn tv_sandwich(rng: &mut ChaCha8Rng) -> Check {
    let mut lower = Item::at_least("TV - He^2/sigma^2", -1e-12);
    let mut upper = Item::at_least("sqrt(2(m0+m1)) He/sigma - TV", -1e-12);
    for _ in 0..1000 {
        let cfg = random_sigma(rng);
        let a: Measure = random_discrete(rng, 8, 0.2).into();
        let b: Measure = random_discrete(rng, 8, 0.2).into();
        match (he(&a, &b, &cfg), tv_norm_diff(&a, &b)) {
            (Ok(h), Ok(tv)) => {
                let s = cfg.sigma();
                lower.record(tv - h * h / (s * s));
                upper.record((2.0 * (a.total_mass() + b.total_mass())).sqrt() * h / s - tv);
            }
            (Err(e), _) | (_, Err(e)) => {
                lower.record_result(Err(e.clone()));
                upper.record_result(Err(e));
            }
        }
    }
    Check {
        id: 2,
        title: "total-variation sandwich",
        items: vec![lower, upper],
        notes: vec![],
    }
}

pub(super) fn hilbert_identities(rng: &mut ChaCha8Rng) -> Check {
    let mut para = Item::at_most("parallelogram residual", 1e-10);
    let mut convex = Item::at_most("2-convexity residual", 1e-10);
    for _ in 0..200 {
        let cfg = random_sigma(rng);
        let m0: Measure = random_discrete(rng, 8, 0.2).into();
        let m1: Measure = random_discrete(rng, 8, 0.2).into();
        let m2: Measure = random_discrete(rng, 8, 0.2).into();
        para.record_result((|| {
            let avg = crate::hellinger::hellinger_average(&m1, &m2)?;
            let lhs = 2.0 * he(&m0, &m1, &cfg)?.powi(2) + 2.0 * he(&m0, &m2, &cfg)?.powi(2);
            let rhs = he(&m1, &m2, &cfg)?.powi(2) + 4.0 * he(&m0, &avg, &cfg)?.powi(2);
            Ok((lhs - rhs).abs())
        })());
        convex.record_result((|| {
            let d01 = he(&m0, &m1, &cfg)?.powi(2);
            let (d0e, d1e) = (he(&m0, &m2, &cfg)?.powi(2), he(&m1, &m2, &cfg)?.powi(2));
            let mut worst = 0.0f64;
            for s in s_grid() {
                let lhs = he(&hellinger_geodesic(&m0, &m1, s)?, &m2, &cfg)?.powi(2);
                let rhs = (1.0 - s) * d0e + s * d1e - (s - s * s) * d01;
                worst = worst.max((lhs - rhs).abs());
            }
            Ok(worst)
        })());
    }
    Check {
        id: 3,
        title: "parallelogram and 2-convexity identities",
        items: vec![para, convex],
        notes: vec![],
    }
}

/// Largest interior `|speed - rhs|` relative to the largest speed.
fn relative_speed_residual(curve: &SampledCurve, cfg: &ScaleConfig) -> Result<f64> {
    let profile = speed_identity_profile(curve, cfg)?;
    let scale = profile.iter().map(|p| p.1.max(p.2)).fold(0.0, f64::max);
    let worst = profile.iter().map(|p| p.3).fold(0.0, f64::max);
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

pub(super) fn speed_identity(rng: &mut ChaCha8Rng) -> Check {
    const STEPS: usize = 1000;
    let mut geo = Item::at_most("geodesics: relative speed residual", 1e-4);
    let mut resc = Item::at_most("exponential rescalings: relative speed residual", 1e-4);
    for _ in 0..10 {
        let cfg = random_sigma(rng);
        let n = rng.random_range(2..=6);
        let a: Measure = DiscreteMeasure::from_weights(&(0..n).map(|_| rng.random_range(0.1..2.0)).collect::<Vec<_>>())
            .expect("valid weights")
            .into();
        let b: Measure = DiscreteMeasure::from_weights(&(0..n).map(|_| rng.random_range(0.1..2.0)).collect::<Vec<_>>())
            .expect("valid weights")
            .into();
        geo.record_result(
            SampledCurve::uniform(STEPS, |s| hellinger_geodesic(&a, &b, s))
                .and_then(|c| relative_speed_residual(&c, &cfg)),
        );
        let base: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
        let rates: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        resc.record_result(
            SampledCurve::uniform(STEPS, |t| {
                let w: Vec<f64> = base.iter().zip(&rates).map(|(w, c)| w * (c * t).exp()).collect();
                Ok(DiscreteMeasure::from_weights(&w)?.into())
            })
            .and_then(|c| relative_speed_residual(&c, &cfg)),
        );
    }

    let mut energy = Item::at_most("two-Dirac energy vs sum theta^j g_j^2/(g_j - 3)", 1e-3);
    let mut notes = Vec::new();
    for (g0, g1, theta) in [(4.0, 4.0, 0.0), (4.0, 5.0, 1.0), (5.0, 5.0, 1.0), (5.0, 4.0, 0.5)] {
        let formula = g0 * g0 / (g0 - 3.0) + theta * g1 * g1 / (g1 - 3.0);
        let reference = adaptive_simpson(
            &|s: f64| g0 * g0 * (1.0 - s).powf(g0 - 2.0) + theta * g1 * g1 * s.powf(g1 - 2.0),
            0.0,
            1.0,
            1e-13,
        );
        match degenerate_example_curve(g0, g1, theta, 100_000) {
            Ok((_, e)) => {
                energy.record(rel(e, formula));
                notes.push(format!(
                    "exponents ({g0}, {g1}), theta {theta}: quadrature {e:.6}, formula {formula:.6}, adaptive Simpson {reference:.6}"
                ));
            }
            Err(e) => energy.record_result(Err(e)),
        }
    }
    Check {
        id: 4,
        title: "speed identity and two-Dirac energy",
        items: vec![geo, resc, energy],
        notes,
    }
}

pub(super) fn product_formulas(rng: &mut ChaCha8Rng) -> Check {
    let mut general = Item::at_most("two factors, general masses", 1e-12);
    let mut prob2 = Item::at_most("two probability factors", 1e-12);
    let mut prob3 = Item::at_most("three probability factors", 1e-12);
    for _ in 0..100 {
        let cfg = random_sigma(rng);
        let (n1, e1) = (random_discrete(rng, 4, 0.2), random_discrete(rng, 4, 0.2));
        let (n2, e2) = (random_discrete(rng, 4, 0.2), random_discrete(rng, 4, 0.2));
        general.record_result((|| {
            let formula = product_hellinger(&n1.clone().into(), &e1.clone().into(), &n2.clone().into(), &e2.clone().into(), &cfg)?;
            let direct = he(&product(&n1, &n2).into(), &product(&e1, &e2).into(), &cfg)?;
            Ok((formula - direct).abs())
        })());

        let nu: Vec<DiscreteMeasure> = (0..3).map(|_| random_probability(rng, 4, 0.2)).collect();
        let eta: Vec<DiscreteMeasure> = (0..3).map(|_| random_probability(rng, 4, 0.2)).collect();
        let factor = |k: usize| he(&nu[k].clone().into(), &eta[k].clone().into(), &cfg);
        prob2.record_result((|| {
            let formula = product_hellinger_prob(&[factor(0)?, factor(1)?], &cfg)?;
            let direct = he(&product(&nu[0], &nu[1]).into(), &product(&eta[0], &eta[1]).into(), &cfg)?;
            Ok((formula - direct).abs())
        })());
        prob3.record_result((|| {
            let formula = product_hellinger_prob(&[factor(0)?, factor(1)?, factor(2)?], &cfg)?;
            let a = product(&product(&nu[0], &nu[1]), &nu[2]);
            let b = product(&product(&eta[0], &eta[1]), &eta[2]);
            Ok((formula - he(&a.into(), &b.into(), &cfg)?).abs())
        })());
    }
    Check {
        id: 5,
        title: "product formulas vs tensor products",
        items: vec![general, prob2, prob3],
        notes: vec![],
    }
}

fn index(label: &Label) -> usize {
    match label {
        Label::Int(i) => *i as usize,
        _ => unreachable!("random measures use integer labels"),
    }
}

pub(super) fn pushforward_contraction(rng: &mut ChaCha8Rng) -> Check {
    let mut mono = Item::at_most("He(push mu0, push mu1) - He(mu0, mu1)", 1e-12);
    let mut bij = Item::at_most("bijection |difference| / (1 + He)", 1e-14);
    for _ in 0..500 {
        let cfg = random_sigma(rng);
        let n = rng.random_range(2..=8);
        let a = DiscreteMeasure::from_weights(&random_weights(rng, n, 0.2)).expect("valid weights");
        let b = DiscreteMeasure::from_weights(&random_weights(rng, n, 0.2)).expect("valid weights");
        let image = rng.random_range(1..n);
        let mut map: Vec<i64> = (0..n).map(|_| rng.random_range(0..image) as i64).collect();
        // Guarantee a collision even if the draw was injective on the support.
        map[1] = map[0];
        let mut perm: Vec<i64> = (0..n as i64).map(|i| i + 100).collect();
        perm.shuffle(rng);
        let base = he(&a.clone().into(), &b.clone().into(), &cfg);
        mono.record_result(base.clone().and_then(|h| {
            let f = |l: &Label| Label::Int(map[index(l)]);
            Ok(he(&pushforward(&a, f).into(), &pushforward(&b, f).into(), &cfg)? - h)
        }));
        bij.record_result(base.and_then(|h| {
            let f = |l: &Label| Label::Int(perm[index(l)]);
            Ok((he(&pushforward(&a, f).into(), &pushforward(&b, f).into(), &cfg)? - h).abs() / (1.0 + h))
        }));
    }
    Check {
        id: 6,
        title: "pushforward contracts, bijections preserve",
        items: vec![mono, bij],
        notes: vec![],
    }
}

pub(super) fn spherical_and_cone(rng: &mut ChaCha8Rng) -> Check {
    let mut unit = Item::at_most("cone over (P, Bh) at r0 = r1 = 1 vs He", 1e-10);
    let mut radii = Item::at_most("cone over (P, Bh) vs He(r0^2 nu0, r1^2 nu1)", 1e-10);
    let mut mass = Item::at_most("spherical geodesic |mass - 1|", 1e-10);
    let mut speed = Item::at_most("spherical geodesic |Bh(g(s),g(t)) - |s-t| Bh|", 1e-8);
    for _ in 0..100 {
        let cfg = random_sigma(rng);
        let n = rng.random_range(1..=8);
        let a = random_probability(rng, n, 0.2);
        let b = random_probability(rng, n, 0.2);
        let (ma, mb): (Measure, Measure) = (a.into(), b.into());
        let (r0, r1) = (rng.random_range(0.0..3.0), rng.random_range(0.0..3.0));
        let bh = bhattacharyya_distance(&ma, &mb, &cfg);
        unit.record_result(bh.clone().and_then(|bh| {
            let d = cone_distance(&ConePoint::new(1.0, ma.clone())?, &ConePoint::new(1.0, mb.clone())?, bh, &cfg);
            Ok((d - he(&ma, &mb, &cfg)?).abs())
        }));
        radii.record_result(bh.clone().and_then(|bh| {
            let d = cone_distance(&ConePoint::new(r0, ma.clone())?, &ConePoint::new(r1, mb.clone())?, bh, &cfg);
            Ok((d - he(&ma.scaled(r0 * r0)?, &mb.scaled(r1 * r1)?, &cfg)?).abs())
        }));
        let path = s_grid().map(|s| spherical_geodesic(&ma, &mb, s, &cfg)).collect::<Result<Vec<_>>>();
        mass.record_result(
            path.clone()
                .map(|p| p.iter().map(|m| (m.total_mass() - 1.0).abs()).fold(0.0, f64::max)),
        );
        speed.record_result(bh.and_then(|bh| {
            let p = path?;
            let mut worst = 0.0f64;
            for (i, si) in s_grid().enumerate() {
                for (j, sj) in s_grid().enumerate().skip(i + 1) {
                    worst = worst.max((bhattacharyya_distance(&p[i], &p[j], &cfg)? - (sj - si) * bh).abs());
                }
            }
            Ok(worst)
        }));
    }
    Check {
        id: 7,
        title: "spherical geodesics and cone consistency",
        items: vec![unit, radii, mass, speed],
        notes: vec![],
    }
}

/// `max |fd - exact| / max |exact|`.
fn matrix_rel(fd: &DMatrix<f64>, exact: &DMatrix<f64>) -> f64 {
    (fd - exact).amax() / exact.amax()
}

fn random_spd(rng: &mut ChaCha8Rng, d: usize, floor: f64) -> DMatrix<f64> {
    let a = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
    symmetrize(&(&a * a.transpose() + DMatrix::identity(d, d) * floor))
}

fn random_gaussian(rng: &mut ChaCha8Rng, d: usize) -> GaussianParams {
    let mean = DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
    GaussianParams::new(mean, random_spd(rng, d, 0.3)).expect("random covariance is SPD")
}

pub(super) fn fisher_matrices(rng: &mut ChaCha8Rng) -> Check {
    let mut pois = Item::at_most("Poisson", 1e-3);
    let mut expo = Item::at_most("exponential", 1e-3);
    let mut gauss = Item::at_most("Gaussian (m, S) grid family vs Fisher form", 1e-3);
    let mut notes = Vec::new();
    for k in 0..20 {
        let cfg = random_sigma(rng);
        let d = 1 + k % 2;
        let alpha: Vec<f64> = (0..d).map(|_| rng.random_range(0.3..5.0)).collect();
        let fam = PoissonFamily::new(d);
        pois.record_result((|| {
            let fd = fisher_matrix_fd(&fam, &alpha, default_step(&alpha), &cfg)?;
            Ok(matrix_rel(&fd, &poisson_metric(&alpha, &cfg)?))
        })());

        let rate = [rng.random_range(0.5..3.0)];
        expo.record_result((|| {
            let fam = ExponentialFamily::new(1);
            let fd = fisher_matrix_fd(&fam, &rate, default_step(&rate), &cfg)?;
            Ok(matrix_rel(&fd, &exp_metric(&rate, &cfg)?))
        })());

        let g = random_gaussian(rng, d);
        let outcome = (|| {
            let fam = GaussianGridFamily::covering(&[&g])?;
            let p = fam.params_to_vec(&g);
            let fd = fisher_matrix_fd(&fam, &p, default_step(&p), &cfg)?;
            let exact = fam.closed_form_metric(&p, &cfg).expect("point is in the domain");
            Ok((matrix_rel(&fd, &exact), fd.trace() / exact.trace()))
        })();
        match outcome {
            Ok((r, ratio)) => {
                gauss.record(r);
                if k < 2 {
                    notes.push(format!("Gaussian d = {d}: trace(fd) / trace(Fisher form) = {ratio:.6}"));
                }
            }
            Err(e) => gauss.record_result(Err(e)),
        }
    }
    Check {
        id: 8,
        title: "finite-difference Fisher matrices vs closed forms",
        items: vec![pois, expo, gauss],
        notes,
    }
}

pub(super) fn closed_fr_vs_numeric(rng: &mut ChaCha8Rng) -> Check {
    let opts = FrOptions {
        path_points: 64,
        ..FrOptions::default()
    };
    let mut pois = Item::at_most("Poisson closed form vs path optimizer", 1e-3);
    let mut expo = Item::at_most("exponential closed form vs path optimizer", 1e-3);
    let mut log = Item::at_most("Poisson FR^2 = -2 sigma^2 ln(1 - He^2/(2 sigma^2))", 1e-12);
    for _ in 0..20 {
        let cfg = random_sigma(rng);
        let d = rng.random_range(1..=3);
        let a: Vec<f64> = (0..d).map(|_| rng.random_range(0.2..6.0)).collect();
        let b: Vec<f64> = (0..d).map(|_| rng.random_range(0.2..6.0)).collect();
        pois.record_result((|| {
            let exact = poisson_fr(&a, &b, &cfg)?;
            Ok(rel(fr_distance_numeric(&PoissonFamily::new(d), &a, &b, &cfg, &opts)?.distance, exact))
        })());
        log.record_result((|| {
            let fr = poisson_fr(&a, &b, &cfg)?;
            let h = poisson_hellinger(&a, &b, &cfg)?;
            let s2 = cfg.sigma() * cfg.sigma();
            let rhs = -2.0 * s2 * (-(h * h) / (2.0 * s2)).ln_1p();
            Ok((fr * fr - rhs).abs() / (1.0 + fr * fr))
        })());

        let a: Vec<f64> = (0..d).map(|_| rng.random_range(0.3..4.0)).collect();
        let b: Vec<f64> = (0..d).map(|_| rng.random_range(0.3..4.0)).collect();
        expo.record_result((|| {
            let exact = exp_fr(&a, &b, &cfg)?;
            Ok(rel(fr_distance_numeric(&ExponentialFamily::new(d), &a, &b, &cfg, &opts)?.distance, exact))
        })());
    }
    Check {
        id: 9,
        title: "closed-form Fisher-Rao distances vs path optimizer",
        items: vec![pois, expo, log],
        notes: vec![],
    }
}

fn random_cotangent(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> GaussianCotangent {
    let x = DVector::from_fn(d, |_, _| rng.random_range(-scale..scale));
    let a = DMatrix::from_fn(d, d, |_, _| rng.random_range(-scale..scale) * 0.5);
    GaussianCotangent::new(x, symmetrize(&a)).expect("symmetric dual")
}

fn drift(g: &GaussianParams, c: &GaussianCotangent, cfg: &ScaleConfig) -> Result<f64> {
    let samples = integrate_geodesic(g, c, 1000)?;
    let first = samples[0].conserved(cfg);
    let mut worst = 0.0f64;
    for s in &samples {
        let q = s.conserved(cfg);
        worst = worst
            .max((q.hamiltonian - first.hamiltonian).abs() / (1.0 + first.hamiltonian.abs()))
            .max((&q.mean_dual - &first.mean_dual).amax() / (1.0 + first.mean_dual.amax()))
            .max((&q.moment - &first.moment).amax() / (1.0 + first.moment.amax()));
    }
    Ok(worst)
}

pub(super) fn gaussian_suite(rng: &mut ChaCha8Rng) -> Check {
    let bvp = BvpOptions::default();
    let mut conserved = Item::at_most("drift of H, mean dual and moment", 1e-8);
    let mut one_d = Item::at_most("1D: sigma M vs shooting", 1e-5);
    let mut same = Item::at_most("same centre (d = 2) vs shooting", 1e-5);
    let mut eig = Item::at_most("eigenvector case (d = 2) vs shooting", 1e-4);
    let mut circle = Item::at_most("1D semicircle residual", 1e-7);

    for k in 0..10 {
        let d = 1 + k % 2;
        let cfg = random_sigma(rng);
        let g = random_gaussian(rng, d);
        let c = random_cotangent(rng, d, 0.6);
        conserved.record_result(drift(&g, &c, &cfg));
    }
    for _ in 0..20 {
        let cfg = random_sigma(rng);
        let g0 = GaussianParams::scalar(rng.random_range(-2.0..2.0), rng.random_range(0.3..3.0)).expect("positive");
        let g1 = GaussianParams::scalar(rng.random_range(-2.0..2.0), rng.random_range(0.3..3.0)).expect("positive");
        one_d.record_result((|| Ok(rel(gaussian_fr_1d(&g0, &g1, &cfg)?, gaussian_fr_bvp(&g0, &g1, &cfg, &bvp)?.distance)))());
    }
    for _ in 0..10 {
        let cfg = random_sigma(rng);
        let mean = DVector::from_fn(2, |_, _| rng.random_range(-1.0..1.0));
        let (s0, s1) = (random_spd(rng, 2, 0.3), random_spd(rng, 2, 0.3));
        same.record_result((|| {
            let g0 = GaussianParams::new(mean.clone(), s0.clone())?;
            let g1 = GaussianParams::new(mean.clone(), s1.clone())?;
            Ok(rel(gaussian_fr_same_center(&s0, &s1, &cfg)?, gaussian_fr_bvp(&g0, &g1, &cfg, &bvp)?.distance))
        })());
    }
    for _ in 0..10 {
        let cfg = random_sigma(rng);
        let g0 = random_gaussian(rng, 2);
        let angle: f64 = rng.random_range(0.0..std::f64::consts::PI);
        let u = DVector::from_vec(vec![angle.cos(), angle.sin()]);
        let w = DVector::from_vec(vec![-angle.sin(), angle.cos()]);
        let (l1, l2) = (rng.random_range(0.3..3.0), rng.random_range(0.3..3.0));
        let whitened = &u * u.transpose() * l1 + &w * w.transpose() * l2;
        let root = sym_sqrt(g0.cov());
        let cov1 = symmetrize(&(&root * whitened * &root));
        let mean1 = g0.mean() + &root * &u * rng.random_range(-2.0..2.0);
        eig.record_result((|| {
            let g1 = GaussianParams::new(mean1.clone(), cov1.clone())?;
            Ok(rel(gaussian_fr_eigvec_case(&g0, &g1, &cfg)?, gaussian_fr_bvp(&g0, &g1, &cfg, &bvp)?.distance))
        })());
    }
    for _ in 0..5 {
        let g = GaussianParams::scalar(rng.random_range(-1.0..1.0), rng.random_range(0.3..3.0)).expect("positive");
        let x = rng.random_range(0.2..1.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let big = rng.random_range(-0.5..0.5);
        circle.record_result((|| {
            let c = GaussianCotangent::new(DVector::from_element(1, x), DMatrix::from_element(1, 1, big))?;
            let samples = integrate_geodesic(&g, &c, 1000)?;
            Ok(semicircle_residual(&samples).expect("nonzero mean dual"))
        })());
    }

    let rows = adjudication_rows(rng);
    let mut full = Item::at_most("adjudication: sigma M vs shooting", 1e-5);
    let mut half = Item::at_least("adjudication: (sigma/2) M relative gap", 0.4);
    for r in &rows {
        match r {
            Ok(r) => {
                full.record(r.rel_full);
                half.record(r.rel_half);
            }
            Err(e) => {
                full.record_result(Err(e.clone()));
                half.record_result(Err(e.clone()));
            }
        }
    }
    Check {
        id: 10,
        title: "Gaussian geodesics, shooting and closed forms",
        items: vec![conserved, one_d, same, eig, circle, full, half],
        notes: vec![],
    }
}

pub(super) fn product_additivity(rng: &mut ChaCha8Rng) -> Check {
    let opts = FrOptions::default();
    let mut item = Item::at_most("product Poisson: optimizer vs sqrt(FR1^2 + FR2^2)", 1e-3);
    for _ in 0..10 {
        let cfg = random_sigma(rng);
        let a = [rng.random_range(0.2..6.0), rng.random_range(0.2..6.0)];
        let b = [rng.random_range(0.2..6.0), rng.random_range(0.2..6.0)];
        item.record_result((|| {
            let f1 = poisson_fr(&a[..1], &b[..1], &cfg)?;
            let f2 = poisson_fr(&a[1..], &b[1..], &cfg)?;
            let numeric = fr_distance_numeric(&PoissonFamily::new(2), &a, &b, &cfg, &opts)?.distance;
            Ok(rel(numeric, product_fr(f1, f2)))
        })());
    }
    Check {
        id: 11,
        title: "Fisher-Rao additivity on products",
        items: vec![item],
        notes: vec![],
    }
}

/// One row of the one-dimensional Gaussian prefactor comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjudicationRow {
    pub mean_shift: f64,
    pub var0: f64,
    pub var1: f64,
    pub sigma: f64,
    /// Length of the shooting geodesic in the Gaussian Fisher form.
    pub shooting: f64,
    pub full: f64,
    pub half: f64,
    pub rel_full: f64,
    pub rel_half: f64,
    /// Sum of Hellinger distances between consecutive points of the
    /// shooting geodesic.
    pub hellinger_length: f64,
}

impl fmt::Display for AdjudicationRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>14.10} {:>14.10} {:>14.10} {:>11.3e} {:>11.3e} {:>14.10}",
            self.mean_shift,
            self.var0,
            self.var1,
            self.sigma,
            self.shooting,
            self.full,
            self.half,
            self.rel_full,
            self.rel_half,
            self.hellinger_length
        )
    }
}

fn adjudication_row(g0: &GaussianParams, g1: &GaussianParams, cfg: &ScaleConfig) -> Result<AdjudicationRow> {
    let sol = gaussian_fr_bvp(g0, g1, cfg, &BvpOptions::default())?;
    let (v0, v1) = (g0.cov()[(0, 0)], g1.cov()[(0, 0)]);
    let dm = g1.mean()[0] - g0.mean()[0];
    let m = gaussian_m(dm * dm / (v0 * v1).sqrt(), v1 / v0)?;
    let full = cfg.sigma() * m;
    let half = 0.5 * full;
    let samples = integrate_geodesic(g0, &sol.initial_dual, 1000)?;
    let params = samples.iter().map(|s| s.params()).collect::<Result<Vec<_>>>()?;
    let hellinger_length = params
        .windows(2)
        .map(|w| gaussian_hellinger(&w[0], &w[1], cfg))
        .sum::<Result<f64>>()?;
    // The velocity of the shooting geodesic has constant Fisher-form length.
    let speed0 = gaussian_fisher_form(
        g0,
        &(g0.cov() * sol.initial_dual.mean_dual()),
        &symmetrize(&(g0.cov() * sol.initial_dual.cov_dual() * g0.cov() * 2.0)),
        cfg,
    )?
    .sqrt();
    debug_assert!((speed0 - sol.distance).abs() <= 1e-12 * (1.0 + speed0));
    Ok(AdjudicationRow {
        mean_shift: dm,
        var0: v0,
        var1: v1,
        sigma: cfg.sigma(),
        shooting: sol.distance,
        full,
        half,
        rel_full: rel(full, sol.distance),
        rel_half: rel(half, sol.distance),
        hellinger_length,
    })
}

fn adjudication_rows(rng: &mut ChaCha8Rng) -> Vec<Result<AdjudicationRow>> {
    (0..6)
        .map(|k| {
            let cfg = if k == 0 { ScaleConfig::default() } else { random_sigma(rng) };
            let g0 = GaussianParams::scalar(0.0, rng.random_range(0.3..3.0))?;
            let shift = if k == 1 { 0.0 } else { rng.random_range(-3.0..3.0) };
            let g1 = GaussianParams::scalar(shift, rng.random_range(0.3..3.0))?;
            adjudication_row(&g0, &g1, &cfg)
        })
        .collect()
}

/// The comparison table printed by the Gaussian suite: the shooting
/// distance against `sigma M` and `(sigma/2) M` on seeded 1D pairs.
pub fn adjudication_table(seed: u64) -> Vec<AdjudicationRow> {
    let mut rng = super::rng_for(100, seed);
    adjudication_rows(&mut rng).into_iter().filter_map(Result::ok).collect()
}
