//! One function per subcommand.

use num_complex::Complex64;
use pvi_core::asymptotic::{domain_contains, eval_leading, DomainSpecD, StripB};
use pvi_core::connection::{
    alias_list, connect_at_infinity_detailed, connect_at_one, connect_at_one_detailed, forward,
    forward_detailed, inverse, inverse_detailed, CriticalData, CriticalPoint,
};
use pvi_core::elliptic::{
    eval_theorem3_with, picard_closed_form, script_domain_contains, theorem3_residual,
    DomainSpecScriptD, EllipticData, SolveOptions,
};
use pvi_core::fuchsian::{
    build_from_trace, build_system, default_loops, numeric_monodromy, pair_traces, traces_to_triple,
};
use pvi_core::integrator::{
    fit_critical_data, integrate, residual_scan, trace_to_csv, FitOptions, OdeState, PathPlan,
    Trace,
};
use pvi_core::{CoveringPoint, Mu};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::output::{csv_header, emit, emit_json, provenance, CliError};
use crate::{
    ConnectArgs, DomainKind, DomainsArgs, EllipticArgs, MonodromyArgs, Pipeline, Point, TraceArgs,
    VerifyArgs,
};

/// Segments of the connection pipeline between `x = 1/2` and the target.
const APPROACH_SEGMENTS: usize = 200;
/// Ratio of the outer to the inner edge of the comparison window near `x = 1`.
const PROFILE_WINDOW: f64 = 10.0;
/// Relative step of the derivative stencil used to seed the Picard pipeline.
const SEED_STENCIL: f64 = 1e-3;

fn cpair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn cd_json(cd: &CriticalData) -> Value {
    json!({ "sigma": cpair(cd.sigma), "a": cpair(cd.a), "point": cd.point })
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn plan_tolerances(plan: &PathPlan) -> Value {
    json!({ "rel_tol": plan.rel_tol, "abs_tol": plan.abs_tol, "pole_guard": plan.pole_guard })
}

fn completed(trace: &Trace) -> Result<(), CliError> {
    match trace.events.first() {
        None => Ok(()),
        Some(ev) => Err(CliError::Numerical(format!(
            "continuation halted ({:?}) at |x| = {}, arg x = {}",
            ev.kind, ev.state.x.modulus, ev.state.x.argument
        ))),
    }
}

pub fn connect(args: &ConnectArgs) -> Result<(), CliError> {
    let mu = Mu::new(args.common.mu)?;
    let (direction, conn) = match (args.triple, args.sigma, args.a) {
        (Some(t), _, _) => {
            let conn = match args.point {
                Point::Zero => inverse_detailed(&t, &mu)?,
                Point::One => connect_at_one_detailed(&t, &mu)?,
                Point::Infinity => connect_at_infinity_detailed(&t, &mu)?,
            };
            ("inverse", conn)
        }
        (None, Some(s), Some(a)) => ("forward", forward_detailed(s, a, &mu)?),
        _ => return Err(validation("give either --triple or both --sigma and --a")),
    };
    let aliases: Vec<Value> = alias_list(&conn.data, &conn.triple, &mu, args.aliases.max(0))
        .iter()
        .map(cd_json)
        .collect();
    let out = json!({
        "provenance": provenance(
            "connect",
            Some(mu.value),
            json!({ "ill_conditioned_band": [1e-8, 1e-5] }),
            json!(conn.case),
        ),
        "direction": direction,
        "sigma": cpair(conn.data.sigma),
        "a": cpair(conn.data.a),
        "point": conn.data.point,
        "case": conn.case,
        "ill_conditioned": conn.ill_conditioned,
        "triple": conn.triple,
        "relation_residual": conn.relation_residual,
        "aliases": aliases,
    });
    emit_json(args.common.out.as_deref(), &out)
}

fn require_mu(given: Option<Complex64>, fixed: f64, pipeline: &str) -> Result<Mu, CliError> {
    match given {
        Some(m) if (m - fixed).norm() > 0.0 => Err(validation(format!(
            "the {pipeline} pipeline needs mu = {fixed}"
        ))),
        _ => Ok(Mu::real(fixed)?),
    }
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let (report, pass) = match args.pipeline {
        Pipeline::Connection => verify_connection(args)?,
        Pipeline::Picard => verify_picard(args)?,
        Pipeline::Rational => verify_rational(args)?,
    };
    emit_json(args.out.as_deref(), &report)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Numerical(
            "verification failed; see the report".into(),
        ))
    }
}

fn verify_connection(args: &VerifyArgs) -> Result<(Value, bool), CliError> {
    let mu = Mu::new(
        args.mu
            .ok_or_else(|| validation("the connection pipeline needs --mu"))?,
    )?;
    let t = args
        .triple
        .ok_or_else(|| validation("the connection pipeline needs --triple"))?;
    if !(args.target > 0.5 && args.target < 1.0) {
        return Err(validation("--target must lie in (1/2, 1)"));
    }
    let tol = args.tol.unwrap_or(1e-2);
    let at_zero = inverse(&t, &mu)?;
    let at_one = connect_at_one(&t, &mu)?;
    let x0 = CoveringPoint::try_new(args.seed_x, 0.0)?;
    let seeded = CriticalData {
        a: at_zero.a * args.corrupt_a,
        ..at_zero
    };
    let (y, dy) = eval_leading(x0, &seeded)?;
    let mid = CoveringPoint::real(0.5);
    let first = integrate(
        OdeState { x: x0, y, dy },
        &PathPlan::log_segments(x0, mid, 1),
        &mu,
    )?;
    completed(&first)?;
    // Waypoints log-spaced in 1 − x, so that the fitting window is well sampled.
    let t_min = 1.0 - args.target;
    let steps = (0.5f64 / t_min).ln() / APPROACH_SEGMENTS as f64;
    let approach = PathPlan::new(
        (1..=APPROACH_SEGMENTS)
            .map(|k| CoveringPoint::real(1.0 - 0.5 * (-steps * k as f64).exp()))
            .collect(),
    );
    let second = integrate(*first.last(), &approach, &mu)?;
    completed(&second)?;
    let window = (t_min, PROFILE_WINDOW * t_min);
    let opts = FitOptions {
        corrections: vec![Complex64::new(1.0, 0.0)],
        ..FitOptions::default()
    };
    let fit = fit_critical_data(&second.states, CriticalPoint::One, window, &opts)?;
    // Relative deviation of the trace from the predicted leading terms at 1.
    let mut profile: f64 = 0.0;
    for s in &second.states {
        let t = (1.0 - s.x.to_complex()).norm();
        if t >= window.0 * (1.0 - 1e-9) && t <= window.1 {
            let (y_pred, _) = eval_leading(s.x, &at_one)?;
            profile = profile.max((s.y - y_pred).norm() / (1.0 - y_pred).norm());
        }
    }
    let pass = profile <= tol;
    let report = json!({
        "provenance": provenance(
            "verify",
            Some(mu.value),
            json!({ "acceptance": tol, "integrator": plan_tolerances(&approach), "window": [window.0, window.1] }),
            json!("connection"),
        ),
        "triple": t,
        "predicted_zero": cd_json(&at_zero),
        "predicted_one": cd_json(&at_one),
        "seed": { "x": x0, "y": cpair(y), "dy": cpair(dy), "amplitude_factor": cpair(args.corrupt_a) },
        "profile_deviation": profile,
        "fit": fit,
        "sigma_deviation": (fit.sigma_hat - at_one.sigma).norm(),
        "a_deviation": (fit.a_hat - at_one.a).norm(),
        "pass": pass,
    });
    Ok((report, pass))
}

fn max_error(
    trace: &Trace,
    exact: impl Fn(CoveringPoint) -> Result<Complex64, CliError>,
) -> Result<f64, CliError> {
    let mut worst: f64 = 0.0;
    for s in &trace.states {
        worst = worst.max((s.y - exact(s.x)?).norm());
    }
    Ok(worst)
}

fn verify_picard(args: &VerifyArgs) -> Result<(Value, bool), CliError> {
    let mu = require_mu(args.mu, 0.5, "picard")?;
    let tol = args.tol.unwrap_or(1e-6);
    let (nu1, nu2) = (args.nu1, args.nu2);
    let exact = |x: CoveringPoint| Ok(picard_closed_form(x, nu1, nu2)?);
    let x0 = CoveringPoint::real(0.05);
    // Seed derivative from a five-point radial stencil of the closed form.
    let h = x0.to_complex() * SEED_STENCIL;
    let f = |k: f64| exact(x0.offset(h * k));
    let dy = (f(-2.0)? - 8.0 * f(-1.0)? + 8.0 * f(1.0)? - f(2.0)?) / (12.0 * h);
    let plan = PathPlan::log_segments(x0, CoveringPoint::real(0.5), 20);
    let trace = integrate(
        OdeState {
            x: x0,
            y: exact(x0)?,
            dy,
        },
        &plan,
        &mu,
    )?;
    completed(&trace)?;
    let err = max_error(&trace, exact)?;
    let pass = err <= tol;
    let report = json!({
        "provenance": provenance(
            "verify",
            Some(mu.value),
            json!({ "acceptance": tol, "integrator": plan_tolerances(&plan) }),
            json!("picard"),
        ),
        "nu1": cpair(nu1),
        "nu2": cpair(nu2),
        "path": [0.05, 0.5],
        "max_error": err,
        "pass": pass,
    });
    Ok((report, pass))
}

fn verify_rational(args: &VerifyArgs) -> Result<(Value, bool), CliError> {
    let mu = require_mu(args.mu, 1.0, "rational")?;
    let tol = args.tol.unwrap_or(1e-8);
    let a = args.a;
    let exact = |x: CoveringPoint| {
        let d = 1.0 - (1.0 - a) * x.to_complex();
        (a * x.to_complex() / d, a / (d * d))
    };
    let x0 = CoveringPoint::real(0.1);
    let (y, dy) = exact(x0);
    let plan = PathPlan::log_segments(x0, CoveringPoint::real(0.9), 40);
    let trace = integrate(OdeState { x: x0, y, dy }, &plan, &mu)?;
    completed(&trace)?;
    let err = max_error(&trace, |x| Ok(exact(x).0))?;
    let residual = residual_scan(
        |x| Ok(exact(x).0),
        &[x0, CoveringPoint::real(0.5)],
        &mu,
        1e-3,
    )?;
    let pass = err <= tol;
    let report = json!({
        "provenance": provenance(
            "verify",
            Some(mu.value),
            json!({ "acceptance": tol, "integrator": plan_tolerances(&plan) }),
            json!("rational"),
        ),
        "a": a,
        "path": [0.1, 0.9],
        "max_error": err,
        "oracle_residual": residual,
        "pass": pass,
    });
    Ok((report, pass))
}

pub fn trace(args: &TraceArgs) -> Result<(), CliError> {
    let mu = Mu::new(args.common.mu)?;
    let pts = crate::parse::path(&args.path).map_err(validation)?;
    let x0 = pts[0];
    let (y, dy, seed_kind) = match (args.sigma, args.a, args.y, args.dy) {
        (Some(s), Some(a), _, _) => {
            let (y, dy) = eval_leading(x0, &CriticalData::at_zero(s, a))?;
            (
                y,
                dy,
                json!({ "leading_terms": { "sigma": cpair(s), "a": cpair(a) } }),
            )
        }
        (_, _, Some(y), Some(dy)) => (y, dy, json!("explicit")),
        _ => return Err(validation("seed with --sigma/--a or with --y/--dy")),
    };
    let plan = PathPlan::new(pts[1..].to_vec()).with_tol(args.tol, args.tol * 1e-2);
    let trace = integrate(OdeState { x: x0, y, dy }, &plan, &mu)?;
    let prov = provenance("trace", Some(mu.value), plan_tolerances(&plan), seed_kind);
    let mut header = csv_header(&prov);
    header.push(format!("completed: {}", trace.completed));
    for ev in &trace.events {
        header.push(format!(
            "event: {:?} at |x| = {:e}, arg x = {:e}, segment {}",
            ev.kind, ev.state.x.modulus, ev.state.x.argument, ev.segment
        ));
    }
    emit(args.common.out.as_deref(), &trace_to_csv(&trace, &header))?;
    completed(&trace)
}

pub fn elliptic(args: &EllipticArgs) -> Result<(), CliError> {
    let mu = Mu::new(args.common.mu)?;
    let ed = EllipticData::new(args.nu1, args.nu2)?;
    let opts = SolveOptions {
        tol: args.tol,
        r: args.r,
        ..SolveOptions::default()
    };
    let val = eval_theorem3_with(args.x, &ed, &mu, &opts)?;
    let residual = if args.residual {
        Some(theorem3_residual(args.x, &ed, &mu, &opts)?)
    } else {
        None
    };
    let (sigma, a) = ed.critical_data();
    let out = json!({
        "provenance": provenance(
            "elliptic",
            Some(mu.value),
            json!({ "tol": opts.tol, "r": opts.r, "nu_star": opts.nu_star, "max_iter": opts.max_iter }),
            Value::Null,
        ),
        "x": args.x,
        "nu1": cpair(ed.nu1),
        "nu2": cpair(ed.nu2),
        "y": cpair(val.y),
        "v": cpair(val.v.v),
        "w": cpair(val.v.w),
        "iterations": val.v.iterations,
        "bound_ratio": val.v.bound_ratio,
        "contraction": val.v.contraction,
        "diagnostics": val.v.diagnostics,
        "residual": residual,
        "critical_data": { "sigma": cpair(sigma), "a": cpair(a) },
    });
    emit_json(args.common.out.as_deref(), &out)
}

pub fn monodromy(args: &MonodromyArgs) -> Result<(), CliError> {
    let mu = Mu::new(args.common.mu)?;
    let x = args.x;
    let (fs, y_at_x, expected) = match (args.sigma, args.a, args.y, args.dy) {
        (Some(s), Some(a), _, _) => {
            // Radial continuation from the seed along arg x.
            let x0 = CoveringPoint::try_new(args.seed_x, x.argument)?;
            let (y, dy) = eval_leading(x0, &CriticalData::at_zero(s, a))?;
            let trace = integrate(
                OdeState { x: x0, y, dy },
                &PathPlan::log_segments(x0, x, 1),
                &mu,
            )?;
            completed(&trace)?;
            let y_at_x = trace.last().y;
            (
                build_from_trace(&trace, &mu, args.k0)?,
                y_at_x,
                Some(forward(s, a, &mu)?),
            )
        }
        (_, _, Some(y), Some(dy)) => (build_system(x, y, dy, &mu, args.k0)?, y, None),
        _ => return Err(validation("give --sigma/--a or --y/--dy")),
    };
    let ms = numeric_monodromy(&fs, &default_loops(x.to_complex()))?;
    let traces = pair_traces(&ms);
    let triple = traces_to_triple(&ms).ok();
    let distance = match (triple, expected) {
        (Some(t), Some(e)) => Some(t.class_distance(&e)),
        _ => None,
    };
    let out = json!({
        "provenance": provenance(
            "monodromy",
            Some(mu.value),
            json!({ "loop_rtol": 1e-12, "loop_atol": 1e-14 }),
            Value::Null,
        ),
        "x": x,
        "k": cpair(fs.k),
        "y": cpair(y_at_x),
        "invariants": fs.invariants(y_at_x),
        "matrices": ms,
        "pair_traces": traces.iter().map(|t| cpair(*t)).collect::<Vec<_>>(),
        "triple": triple,
        "forward_triple": expected,
        "class_distance": distance,
    });
    emit_json(args.common.out.as_deref(), &out)
}

pub fn domains(args: &DomainsArgs) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let upper = match args.kind {
        DomainKind::Spiral => args.eps,
        DomainKind::Elliptic => args.r,
    };
    if !(args.min_modulus > 0.0 && args.min_modulus < upper)
        || args.arg_max.is_nan()
        || args.arg_max <= 0.0
    {
        return Err(validation(
            "need 0 < --min-modulus < radius and --arg-max > 0",
        ));
    }
    let (lo, hi) = (args.min_modulus.ln(), upper.ln());
    let mut sample = || {
        CoveringPoint::new(
            rng.gen_range(lo..hi).exp(),
            rng.gen_range(-args.arg_max..args.arg_max),
        )
    };
    let mut rows = Vec::with_capacity(args.samples);
    let (prov, columns) = match args.kind {
        DomainKind::Spiral => {
            let sigma = args
                .sigma
                .ok_or_else(|| validation("the spiral domain needs --sigma"))?;
            let d = DomainSpecD {
                epsilon: args.eps,
                theta1: args.theta1,
                theta2: args.theta2,
                sigma_tilde: args.sigma_tilde,
                sigma,
                point: CriticalPoint::Zero,
            };
            d.validate()?;
            let mut strip = StripB::new(
                sigma,
                Complex64::new(1.0, 0.0),
                args.theta2,
                args.sigma_tilde,
            );
            strip.ln_c = StripB::ln_c_from_epsilon(args.eps, args.theta1, sigma, args.sigma_tilde);
            for _ in 0..args.samples {
                let x = sample();
                rows.push(format!(
                    "{:.16e},{:.16e},{},{}",
                    x.modulus,
                    x.argument,
                    u8::from(domain_contains(x, &d)),
                    u8::from(strip.contains(x))
                ));
            }
            let tol = json!({ "epsilon": args.eps, "theta1": args.theta1, "theta2": args.theta2,
                "sigma_tilde": args.sigma_tilde, "ln_c": strip.ln_c, "seed": args.seed });
            (
                provenance("domains", None, tol, json!("spiral")),
                "abs_x,arg_x,in_domain,in_strip",
            )
        }
        DomainKind::Elliptic => {
            let (nu1, nu2) = match (args.nu1, args.nu2) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(validation("the elliptic domain needs --nu1 and --nu2")),
            };
            let d = DomainSpecScriptD {
                r: args.r,
                ed: EllipticData::new(nu1, nu2)?,
            };
            for _ in 0..args.samples {
                let x = sample();
                rows.push(format!(
                    "{:.16e},{:.16e},{}",
                    x.modulus,
                    x.argument,
                    u8::from(script_domain_contains(x, &d))
                ));
            }
            let tol = json!({ "r": args.r, "seed": args.seed });
            (
                provenance("domains", None, tol, json!("elliptic")),
                "abs_x,arg_x,in_domain",
            )
        }
    };
    let mut text = String::new();
    for h in csv_header(&prov) {
        text.push_str(&format!("# {h}\n"));
    }
    text.push_str(columns);
    text.push('\n');
    for r in rows {
        text.push_str(&r);
        text.push('\n');
    }
    emit(args.out.as_deref(), &text)
}
