use std::io::Write;
use std::process::ExitCode;

use clap::ValueEnum;
use hellinger_core::families::gaussian::integrate_geodesic;
use hellinger_core::families::{
    exp_fr, exp_hellinger, gaussian_fr, gaussian_fr_bvp, poisson_fr, poisson_hellinger, translation_metric,
    BvpOptions, ExponentialFamily, FrMethod, GaussianGridFamily, GaussianParams, PoissonFamily,
};
use hellinger_core::fisher_rao::{
    bhattacharyya_distance, cone_distance, cone_geodesic, default_step, fisher_matrix_fd, fr_distance_numeric,
    spherical_geodesic, ConePoint, FrOptions, ParametricFamily,
};
use hellinger_core::hellinger::{hellinger_distance, hellinger_geodesic};
use hellinger_core::measure::tv_norm_diff;
use hellinger_core::verify::run_suite;
use hellinger_core::{Error, Measure, ScaleConfig};
use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::inputs::{self, CliError, CliResult};
use crate::{DistanceArgs, Family, FisherArgs, GeodesicArgs, Kind, Space, VerifyArgs};

fn name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_owned()
}

fn matrix_json(m: &DMatrix<f64>) -> Value {
    json!((0..m.nrows()).map(|i| m.row(i).iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn scale(sigma: f64) -> CliResult<ScaleConfig> {
    ScaleConfig::new(sigma).map_err(CliError::from)
}

/// Translates of a fixed profile, known only through their constant metric.
struct Translates {
    metric: DMatrix<f64>,
}

impl ParametricFamily for Translates {
    fn param_dim(&self) -> usize {
        self.metric.nrows()
    }

    fn in_domain(&self, p: &[f64]) -> bool {
        p.len() == self.param_dim() && p.iter().all(|x| x.is_finite())
    }

    fn realize(&self, _p: &[f64]) -> hellinger_core::Result<Measure> {
        Err(Error::ConditionViolated("translates are represented by their metric only".into()))
    }

    fn closed_form_metric(&self, _p: &[f64], _cfg: &ScaleConfig) -> Option<DMatrix<f64>> {
        Some(self.metric.clone())
    }
}

fn gaussian_distance(g0: &GaussianParams, g1: &GaussianParams, cfg: &ScaleConfig) -> CliResult<(f64, Value)> {
    let (value, method) = gaussian_fr(g0, g1, cfg)?;
    let meta = match method {
        FrMethod::Shooting {
            residual,
            newton_iterations,
        } => json!({"method": method.describe(), "residual": residual, "newton_iterations": newton_iterations}),
        _ => json!({"method": method.describe()}),
    };
    Ok((value, meta))
}

fn numeric<F: ParametricFamily>(
    family: &F,
    p0: &[f64],
    p1: &[f64],
    cfg: &ScaleConfig,
    opts: &FrOptions,
    label: &str,
) -> CliResult<(f64, Value)> {
    let r = fr_distance_numeric(family, p0, p1, cfg, opts)?;
    Ok((
        r.distance,
        json!({
            "family": label,
            "path_points": opts.path_points,
            "iterations": r.iterations,
            "energy": r.energy,
        }),
    ))
}

pub fn distance(a: &DistanceArgs) -> CliResult<ExitCode> {
    let cfg = scale(a.sigma)?;
    let (pa, pb) = (a.inputs[0].as_path(), a.inputs[1].as_path());
    let (value, meta) = match a.kind {
        Kind::Hellinger | Kind::Tv | Kind::Bhattacharyya | Kind::Cone => {
            let (m0, m1) = (inputs::measure(pa)?, inputs::measure(pb)?);
            match a.kind {
                Kind::Hellinger => (
                    hellinger_distance(&m0, &m1, &cfg)?,
                    json!({"sigma": cfg.sigma(), "mass0": m0.total_mass(), "mass1": m1.total_mass()}),
                ),
                Kind::Tv => (tv_norm_diff(&m0, &m1)?, json!({})),
                Kind::Bhattacharyya => (bhattacharyya_distance(&m0, &m1, &cfg)?, json!({"sigma": cfg.sigma()})),
                _ => {
                    let (c0, c1) = (ConePoint::from_measure(&m0)?, ConePoint::from_measure(&m1)?);
                    let base = bhattacharyya_distance(c0.base(), c1.base(), &cfg)?;
                    (
                        cone_distance(&c0, &c1, base, &cfg),
                        json!({"sigma": cfg.sigma(), "radius0": c0.radius(), "radius1": c1.radius(), "base_distance": base}),
                    )
                }
            }
        }
        Kind::FrPoisson => {
            let (p0, p1) = (inputs::params(pa)?, inputs::params(pb)?);
            (
                poisson_fr(&p0, &p1, &cfg)?,
                json!({"sigma": cfg.sigma(), "hellinger": poisson_hellinger(&p0, &p1, &cfg)?}),
            )
        }
        Kind::FrExp => {
            let (p0, p1) = (inputs::params(pa)?, inputs::params(pb)?);
            (
                exp_fr(&p0, &p1, &cfg)?,
                json!({"sigma": cfg.sigma(), "hellinger": exp_hellinger(&p0, &p1, &cfg)?}),
            )
        }
        Kind::FrGauss => gaussian_distance(&inputs::gaussian(pa)?, &inputs::gaussian(pb)?, &cfg)?,
        Kind::FrNumeric => {
            let family = a
                .family
                .ok_or_else(|| CliError::Input("fr-numeric needs --family".into()))?;
            let opts = FrOptions {
                path_points: a.optimizer.path_points,
                tol: a.optimizer.tol,
                max_iters: a.optimizer.max_iters,
            };
            let label = name(family);
            match family {
                Family::Poisson | Family::Exp => {
                    let (p0, p1) = (inputs::params(pa)?, inputs::params(pb)?);
                    if family == Family::Poisson {
                        numeric(&PoissonFamily::new(p0.len()), &p0, &p1, &cfg, &opts, &label)?
                    } else {
                        numeric(&ExponentialFamily::new(p0.len()), &p0, &p1, &cfg, &opts, &label)?
                    }
                }
                Family::Gauss => {
                    let (g0, g1) = (inputs::gaussian(pa)?, inputs::gaussian(pb)?);
                    let fam = GaussianGridFamily::covering(&[&g0, &g1])?;
                    let (p0, p1) = (fam.params_to_vec(&g0), fam.params_to_vec(&g1));
                    numeric(&fam, &p0, &p1, &cfg, &opts, &label)?
                }
                Family::Trans => {
                    let profile = inputs::grid_profile(a.profile.as_deref())?;
                    let fam = Translates {
                        metric: translation_metric(&profile, &cfg)?,
                    };
                    let (p0, p1) = (inputs::params(pa)?, inputs::params(pb)?);
                    numeric(&fam, &p0, &p1, &cfg, &opts, &label)?
                }
            }
        }
    };
    let out = json!({"kind": name(a.kind), "value": value, "meta": meta});
    println!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn open_output(path: Option<&std::path::Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(
            std::fs::File::create(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        ),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn write_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("writing output: {e}"))
}

pub fn geodesic(a: &GeodesicArgs) -> CliResult<ExitCode> {
    let cfg = scale(a.sigma)?;
    if a.samples == 0 {
        return Err(CliError::Input("--samples must be at least 1".into()));
    }
    let n = a.samples;
    let (pa, pb) = (a.inputs[0].as_path(), a.inputs[1].as_path());
    let mut w = csv::Writer::from_writer(open_output(a.out.as_deref())?);
    let time = |k: usize| k as f64 / n as f64;

    match a.space {
        Space::Hellinger | Space::Spherical | Space::Cone => {
            let (m0, m1) = (inputs::measure(pa)?, inputs::measure(pb)?);
            let cones = match a.space {
                Space::Cone => Some((ConePoint::from_measure(&m0)?, ConePoint::from_measure(&m1)?)),
                _ => None,
            };
            let (speed, base) = match (&a.space, &cones) {
                (Space::Hellinger, _) => (hellinger_distance(&m0, &m1, &cfg)?, 0.0),
                (Space::Spherical, _) => (bhattacharyya_distance(&m0, &m1, &cfg)?, 0.0),
                (_, Some((c0, c1))) => {
                    let base = bhattacharyya_distance(c0.base(), c1.base(), &cfg)?;
                    (cone_distance(c0, c1, base, &cfg), base)
                }
                _ => unreachable!("cone points exist for the cone space"),
            };
            let state = |s: f64| -> hellinger_core::Result<Measure> {
                match (&a.space, &cones) {
                    (Space::Hellinger, _) => hellinger_geodesic(&m0, &m1, s),
                    (Space::Spherical, _) => spherical_geodesic(&m0, &m1, s, &cfg),
                    (_, Some((c0, c1))) => cone_geodesic(
                        c0,
                        c1,
                        |z| spherical_geodesic(c0.base(), c1.base(), z, &cfg),
                        base,
                        s,
                        &cfg,
                    ),
                    _ => unreachable!("cone points exist for the cone space"),
                }
            };
            w.write_record(["s", "state", "mass", "speed"]).map_err(write_err)?;
            for k in 0..=n {
                let mu = match k {
                    0 => m0.clone(),
                    k if k == n => m1.clone(),
                    k => state(time(k))?,
                };
                w.write_record([sci(time(k)), mu.to_json(), sci(mu.total_mass()), sci(speed)])
                    .map_err(write_err)?;
            }
        }
        Space::Gauss => {
            let (g0, g1) = (inputs::gaussian(pa)?, inputs::gaussian(pb)?);
            let sol = gaussian_fr_bvp(&g0, &g1, &cfg, &BvpOptions::default())?;
            let per = 1000usize.div_ceil(n);
            let samples = integrate_geodesic(&g0, &sol.initial_dual, n * per)?;
            w.write_record(["s", "state", "mass", "speed", "hamiltonian", "mean_dual", "moment"])
                .map_err(write_err)?;
            for k in 0..=n {
                let sample = &samples[k * per];
                let g = match k {
                    0 => g0.clone(),
                    k if k == n => g1.clone(),
                    _ => sample.params()?,
                };
                let q = sample.conserved(&cfg);
                w.write_record([
                    sci(time(k)),
                    g.to_json(),
                    sci(1.0),
                    sci(sol.distance),
                    sci(q.hamiltonian),
                    json!(q.mean_dual.iter().collect::<Vec<_>>()).to_string(),
                    matrix_json(&q.moment).to_string(),
                ])
                .map_err(write_err)?;
            }
        }
    }
    w.flush().map_err(write_err)?;
    Ok(ExitCode::SUCCESS)
}

pub fn fisher(a: &FisherArgs) -> CliResult<ExitCode> {
    let cfg = scale(a.sigma)?;
    let report = |family: &dyn ParametricFamily, p: &[f64]| -> CliResult<Value> {
        let eps = a.eps.unwrap_or_else(|| default_step(p));
        let closed = family.closed_form_metric(p, &cfg);
        let fd = fisher_matrix_fd(family, p, eps, &cfg)?;
        Ok(json!({
            "family": name(a.family),
            "at": p,
            "eps": eps,
            "closed_form": closed.as_ref().map(matrix_json),
            "finite_difference": matrix_json(&fd),
        }))
    };
    let out = match a.family {
        Family::Poisson => {
            let p = inputs::params(&a.at)?;
            report(&PoissonFamily::new(p.len()), &p)?
        }
        Family::Exp => {
            let p = inputs::params(&a.at)?;
            report(&ExponentialFamily::new(p.len()), &p)?
        }
        Family::Gauss => {
            let g = inputs::gaussian(&a.at)?;
            let fam = GaussianGridFamily::covering(&[&g])?;
            report(&fam, &fam.params_to_vec(&g))?
        }
        Family::Trans => {
            let profile = inputs::grid_profile(a.profile.as_deref())?;
            let metric = translation_metric(&profile, &cfg)?;
            json!({"family": name(a.family), "closed_form": matrix_json(&metric), "finite_difference": null})
        }
    };
    println!("{out}");
    Ok(ExitCode::SUCCESS)
}

pub fn verify(a: &VerifyArgs) -> CliResult<ExitCode> {
    let report = run_suite(a.suite, a.seed);
    print!("{report}");
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
