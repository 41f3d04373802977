use rand::Rng;

use super::channel::{check_monotonicity, sample_cptp};
use super::random::{sample_diagonal_state, sample_state, sample_tangent, sample_well_conditioned};
use crate::error::Result;
use crate::geodesics::{
    bures_distance_cone, bures_distance_density, curve_length, rld_geodesic_residual, rld_upper_bound_cone,
    rld_upper_bound_density, wy_distance_cone, wy_distance_density, Curve, CurveKind, CurveSpec, PerturbedCurve,
};
use crate::matkern::{frechet_derivative, mat_fn, HermitianMatrix, ScalarFunctionSpec, StateMatrix};
use crate::metrics::{check_f_bounds, metric_eval, symmetry_grid, wyd_metric_hessian, MetricKind};

/// Commutator norm above which a pair counts as non-commuting.
pub const COMMUTATOR_THRESHOLD: f64 = 1e-6;

/// One margin produced by a trial. Passing means `margin >= -tolerance`.
#[derive(Clone, Debug)]
pub struct Observation {
    pub name: &'static str,
    pub tolerance: f64,
    pub margin: std::result::Result<f64, String>,
}

fn obs(name: &'static str, tolerance: f64, margin: Result<f64>) -> Observation {
    Observation {
        name,
        tolerance,
        margin: margin.map_err(|e| e.to_string()),
    }
}

fn rel_err(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
}

pub(crate) fn run_trial<R: Rng>(suite: super::Suite, rng: &mut R, trial: usize) -> Vec<Observation> {
    use super::Suite::*;
    match suite {
        Chain => chain(rng, trial),
        Monotonicity => monotonicity(rng, trial),
        Lengths => lengths(rng, trial),
        Residuals => residuals(rng),
        HessianCrosscheck => hessian(rng, trial),
        FrechetFd => frechet(rng, trial),
        BoundsF => bounds(rng, trial),
    }
}

struct Triple {
    bures: f64,
    wy: f64,
    upper: f64,
}

fn cone_triple(a: &StateMatrix, b: &StateMatrix) -> Result<Triple> {
    Ok(Triple {
        bures: bures_distance_cone(a, b)?,
        wy: wy_distance_cone(a, b)?,
        upper: rld_upper_bound_cone(a, b)?,
    })
}

fn density_triple(a: &StateMatrix, b: &StateMatrix) -> Result<Triple> {
    Ok(Triple {
        bures: bures_distance_density(a, b)?,
        wy: wy_distance_density(a, b)?,
        upper: rld_upper_bound_density(a, b)?,
    })
}

fn chain<R: Rng>(rng: &mut R, trial: usize) -> Vec<Observation> {
    let n = 2 + trial % 4;
    let mut out = Vec::new();

    let cone = (|| -> Result<_> {
        let a = sample_state(rng, n, false)?;
        let b = sample_state(rng, n, false)?;
        Ok((cone_triple(&a, &b)?, a.commutator_norm(&b), a.trace() + b.trace()))
    })();
    match cone {
        Ok((d, comm, traces)) => {
            out.push(obs("cone_bures_le_wy", 1e-9, Ok(d.wy - d.bures)));
            out.push(obs("cone_wy_le_upper", 1e-9, Ok(d.upper - d.wy)));
            out.push(obs("cone_upper_lt_diameter", 0.0, Ok(2.0 * traces.sqrt() - d.upper)));
            if comm > COMMUTATOR_THRESHOLD {
                out.push(obs("cone_strict_gap", 0.0, Ok(d.upper - d.bures - 1e-8)));
            }
        }
        Err(e) => out.push(obs("cone_chain", 0.0, Err(e))),
    }

    let density = (|| -> Result<_> {
        let a = sample_state(rng, n, true)?;
        let b = sample_state(rng, n, true)?;
        Ok((density_triple(&a, &b)?, a.commutator_norm(&b)))
    })();
    match density {
        Ok((d, comm)) => {
            if comm > COMMUTATOR_THRESHOLD {
                out.push(obs("density_strict_gap", 0.0, Ok(d.upper - d.bures - 1e-8)));
            }
            out.push(obs("density_bures_le_wy", 1e-10, Ok(d.wy - d.bures)));
            out.push(obs("density_wy_le_upper", 1e-10, Ok(d.upper - d.wy)));
            out.push(obs("density_upper_lt_pi", 0.0, Ok(std::f64::consts::PI - d.upper)));
        }
        Err(e) => out.push(obs("density_chain", 0.0, Err(e))),
    }

    let collapse = (|| -> Result<f64> {
        let a = sample_diagonal_state(rng, n, true)?;
        let b = sample_diagonal_state(rng, n, true)?;
        let d = density_triple(&a, &b)?;
        Ok(-((d.wy - d.bures).abs().max((d.upper - d.bures).abs())))
    })();
    out.push(obs("commuting_collapse", 1e-10, collapse));
    out
}

fn monotonicity<R: Rng>(rng: &mut R, trial: usize) -> Vec<Observation> {
    let n = 2 + trial % 3;
    let kraus = 1 + trial % 4;
    MetricKind::builtins()
        .into_iter()
        .map(|m| {
            let margin = (|| -> Result<f64> {
                let rho = sample_state(rng, n, true)?;
                let h = sample_tangent(rng, n, true)?;
                let t = sample_cptp(rng, n, kraus)?;
                Ok(check_monotonicity(&m, &t, &rho, &h)?.relative())
            })();
            obs(monotonicity_name(&m), 1e-9, margin)
        })
        .collect()
}

fn monotonicity_name(m: &MetricKind) -> &'static str {
    match m {
        MetricKind::Bures => "contraction_bures",
        MetricKind::Rld => "contraction_rld",
        MetricKind::Wy => "contraction_wy",
        MetricKind::Bkm => "contraction_bkm",
        MetricKind::Wyd(_) => "contraction_wyd",
        MetricKind::Custom(_) => "contraction_custom",
    }
}

fn lengths<R: Rng>(rng: &mut R, trial: usize) -> Vec<Observation> {
    let n = 2 + trial % 3;
    let pair = (|| -> Result<_> { Ok((sample_state(rng, n, true)?, sample_state(rng, n, true)?)) })();
    let (a, b) = match pair {
        Ok(p) => p,
        Err(e) => return vec![obs("lengths", 0.0, Err(e))],
    };
    let length_err = |kind: CurveKind, m: MetricKind, panels: usize, reference: Result<f64>| -> Result<f64> {
        let curve = CurveSpec::new(kind, a.clone(), b.clone(), false)?;
        Ok(-rel_err(curve_length(&m, &curve, panels)?, reference?))
    };
    vec![
        obs("bures_line_length", 1e-6, length_err(CurveKind::BuresLine, MetricKind::Bures, 1024, bures_distance_cone(&a, &b))),
        obs("bures_arc_length", 1e-6, length_err(CurveKind::BuresArc, MetricKind::Bures, 1024, bures_distance_density(&a, &b))),
        obs("wy_line_length", 1e-6, length_err(CurveKind::WyLine, MetricKind::Wy, 1024, wy_distance_cone(&a, &b))),
        obs("wy_arc_length", 1e-6, length_err(CurveKind::WyArc, MetricKind::Wy, 1024, wy_distance_density(&a, &b))),
        obs("rld_dual_length", 2e-6, length_err(CurveKind::RldDual, MetricKind::Rld, 2048, rld_upper_bound_cone(&a, &b))),
        obs("bures_perturbation_excess", 1e-7, minimality(rng, n, CurveKind::BuresLine, MetricKind::Bures)),
        obs("wy_perturbation_excess", 1e-7, minimality(rng, n, CurveKind::WyLine, MetricKind::Wy)),
    ]
}

fn minimality<R: Rng>(rng: &mut R, n: usize, kind: CurveKind, m: MetricKind) -> Result<f64> {
    let a = sample_well_conditioned(rng, n)?;
    let b = sample_well_conditioned(rng, n)?;
    let h = sample_tangent(rng, n, false)?;
    let amplitude = 0.05 * (b.matrix() - a.matrix()).norm() * rng.gen_range(0.05..=1.0);
    let base = CurveSpec::new(kind, a, b, false)?;
    let mode = rng.gen_range(1..=3);
    perturbation_excess(&m, &base, h.scale(1.0 / h.norm()), amplitude, mode, 256)
}

/// Largest orthogonal defect of the RLD dual curve at interior parameters.
pub(crate) fn rld_dual_defect(a: &StateMatrix, b: &StateMatrix) -> Result<f64> {
    let curve = CurveSpec::new(CurveKind::RldDual, a.clone(), b.clone(), false)?;
    let mut worst = 0.0f64;
    for t in [0.25, 0.5, 0.75] {
        worst = worst.max(rld_geodesic_residual(&curve, t)?.orthogonal_defect);
    }
    Ok(worst)
}

/// Qubit density pair whose commutator norm is at least `min_comm`.
pub(crate) fn noncommuting_qubits<R: Rng>(rng: &mut R, min_comm: f64) -> Result<(StateMatrix, StateMatrix)> {
    loop {
        let a = sample_state(rng, 2, true)?;
        let b = sample_state(rng, 2, true)?;
        if a.commutator_norm(&b) >= min_comm {
            return Ok((a, b));
        }
    }
}

fn residuals<R: Rng>(rng: &mut R) -> Vec<Observation> {
    let n = rng.gen_range(2..=4);
    let commuting = (|| -> Result<f64> {
        let a = sample_diagonal_state(rng, n, true)?;
        let b = sample_diagonal_state(rng, n, true)?;
        Ok(-rld_dual_defect(&a, &b)?)
    })();
    let separated = (|| -> Result<f64> {
        let (a, b) = noncommuting_qubits(rng, 0.1)?;
        Ok(rld_dual_defect(&a, &b)? - 1e-4)
    })();
    vec![
        obs("commuting_residual", 1e-6, commuting),
        obs("noncommuting_residual", 0.0, separated),
    ]
}

pub(crate) const HESSIAN_ALPHAS: [f64; 6] = [-3.0, -1.5, 0.0, 1.0, 2.5, 3.0];

/// Relative gap between the WYD hessian and the Morozova–Chentsov form,
/// scaled by `√(λ(h,h) λ(k,k))`.
pub(crate) fn hessian_gap(alpha: f64, rho: &StateMatrix, h: &HermitianMatrix, k: &HermitianMatrix) -> Result<f64> {
    let m = MetricKind::wyd(alpha)?;
    let mc = metric_eval(&m, rho, h, k)?;
    let hess = wyd_metric_hessian(alpha, rho, h, k)?;
    let scale = (metric_eval(&m, rho, h, h)? * metric_eval(&m, rho, k, k)?).sqrt();
    Ok((mc - hess).abs() / scale.max(f64::MIN_POSITIVE))
}

fn hessian<R: Rng>(rng: &mut R, trial: usize) -> Vec<Observation> {
    let alpha = HESSIAN_ALPHAS[trial % HESSIAN_ALPHAS.len()];
    let n = 2 + (trial / HESSIAN_ALPHAS.len()) % 2;
    let gap = (|| -> Result<f64> {
        let rho = sample_state(rng, n, true)?;
        let h = sample_tangent(rng, n, true)?;
        let k = sample_tangent(rng, n, true)?;
        Ok(-hessian_gap(alpha, &rho, &h, &k)?)
    })();
    let endpoints = (|| -> Result<f64> {
        let rho = sample_state(rng, n, true)?;
        let h = sample_tangent(rng, n, true)?;
        let mut worst = 0.0f64;
        for (a, named) in [(0.0, MetricKind::Wy), (1.0, MetricKind::Bkm), (-1.0, MetricKind::Bkm), (3.0, MetricKind::Rld), (-3.0, MetricKind::Rld)] {
            let w = metric_eval(&MetricKind::wyd(a)?, &rho, &h, &h)?;
            worst = worst.max(rel_err(w, metric_eval(&named, &rho, &h, &h)?));
        }
        Ok(-worst)
    })();
    vec![obs("hessian_vs_mc", 1e-8, gap), obs("wyd_endpoints", 1e-10, endpoints)]
}

pub(crate) const FD_STEPS: (f64, f64) = (1e-3, 5e-4);

/// Errors of the central difference of `f` at `a` along `h` for both steps
/// of [`FD_STEPS`].
pub(crate) fn frechet_fd_errors(f: &ScalarFunctionSpec, a: &StateMatrix, h: &HermitianMatrix) -> Result<(f64, f64)> {
    let exact = frechet_derivative(f, a, h)?;
    let err = |t: f64| -> Result<f64> {
        let plus = mat_fn(&(a.matrix() + &h.scale(t)), f)?;
        let minus = mat_fn(&(a.matrix() - &h.scale(t)), f)?;
        let fd = (&plus - &minus).scale(0.5 / t);
        Ok((&fd - &exact).norm())
    };
    Ok((err(FD_STEPS.0)?, err(FD_STEPS.1)?))
}

pub(crate) fn fd_functions() -> Vec<ScalarFunctionSpec> {
    vec![
        ScalarFunctionSpec::Sqrt,
        ScalarFunctionSpec::Log,
        ScalarFunctionSpec::Power(-0.5),
        ScalarFunctionSpec::Power(2.5),
        ScalarFunctionSpec::FAlpha(0.5),
    ]
}

fn frechet<R: Rng>(rng: &mut R, trial: usize) -> Vec<Observation> {
    let n = 2 + trial % 3;
    let fs = fd_functions();
    let f = &fs[trial % fs.len()];
    let errs = (|| -> Result<_> {
        let a = sample_well_conditioned(rng, n)?;
        let h = sample_tangent(rng, n, false)?;
        let h = h.scale(1.0 / h.norm());
        let scale = frechet_derivative(f, &a, &h)?.norm();
        Ok((frechet_fd_errors(f, &a, &h)?, scale))
    })();
    match errs {
        Ok(((e1, e2), scale)) => {
            let ratio = e1 / e2;
            vec![
                obs("fd_ratio", 0.0, Ok((ratio - 3.0).min(5.0 - ratio))),
                obs("fd_accuracy", 1e-5, Ok(-e1 / scale.max(f64::MIN_POSITIVE))),
            ]
        }
        Err(e) => vec![obs("fd_ratio", 0.0, Err(e))],
    }
}

fn bounds<R: Rng>(rng: &mut R, trial: usize) -> Vec<Observation> {
    let alpha = rng.gen_range(-3.0..=3.0);
    let grid = symmetry_grid();
    let f_bounds = (|| -> Result<f64> {
        let mut worst = f64::INFINITY;
        let mut kinds = MetricKind::builtins();
        kinds.push(MetricKind::wyd(alpha)?);
        for m in &kinds {
            let r = check_f_bounds(m, &grid)?;
            worst = worst.min(r.lower_margin).min(r.upper_margin);
        }
        Ok(worst)
    })();
    let ordering = (|| -> Result<f64> {
        let n = 2 + trial % 3;
        let rho = sample_state(rng, n, true)?;
        let h = sample_tangent(rng, n, true)?;
        let lo = metric_eval(&MetricKind::Bures, &rho, &h, &h)?;
        let hi = metric_eval(&MetricKind::Rld, &rho, &h, &h)?;
        let mut worst = f64::INFINITY;
        for m in [MetricKind::Wy, MetricKind::Bkm, MetricKind::wyd(alpha)?] {
            let v = metric_eval(&m, &rho, &h, &h)?;
            worst = worst.min((v - lo) / hi).min((hi - v) / hi);
        }
        Ok(worst)
    })();
    vec![obs("f_within_bounds", 1e-12, f_bounds), obs("metric_ordering", 1e-10, ordering)]
}

/// Length excess of a fixed-endpoint perturbation over its base geodesic,
/// relative to the base length.
pub(crate) fn perturbation_excess<C: Curve>(m: &MetricKind, base: &C, direction: HermitianMatrix, amplitude: f64, mode: u32, panels: usize) -> Result<f64> {
    let l0 = curve_length(m, base, panels)?;
    let p = PerturbedCurve {
        base,
        direction,
        amplitude,
        mode,
    };
    Ok((curve_length(m, &p, panels)? - l0) / l0)
}
