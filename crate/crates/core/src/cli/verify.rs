//! Lemma and theorem checks on the closed-form instances.

use crate::analysis::{
    check_contraction, check_key_recurrence, check_tube, estimate_from_samples,
    estimate_weak_convexity, grid_1d, grid_2d, pairs_with_gap, verify_no_stationary,
    verify_trace_bounds, CheckLine, ConstantsSource, Report, BOUND_SLACK,
};
use crate::numerics::RngStream;
use crate::problems::AnalyticInstance;
use crate::solver::{constant_step_threshold, geometric_params, solve, SolveConfig, StepSchedule};

use super::CliError;

const STARTS: usize = 200;

fn fraction_line(name: &str, ok: usize, total: usize) -> CheckLine {
    let frac = if total == 0 {
        0.0
    } else {
        ok as f64 / total as f64
    };
    CheckLine::new(name, total > 0 && ok == total, frac, 1.0)
}

/// Starts at distance `r ∈ (0, max_dist]` from a random solution.
fn random_starts(inst: AnalyticInstance, max_dist: f64, seed: u64, stream: u64) -> Vec<Vec<f64>> {
    let sols = inst.solutions();
    (0..STARTS)
        .map(|i| {
            let mut rng = RngStream::new(seed, stream + i as u64);
            let center = &sols[((rng.uniform() * sols.len() as f64) as usize).min(sols.len() - 1)];
            let u = rng.unit_sphere(center.len());
            let r = max_dist * (1.0 - rng.uniform());
            center.iter().zip(&u).map(|(c, v)| c + r * v).collect()
        })
        .collect()
}

fn polyak_checks(seed: u64, report: &mut Report) -> Result<(), CliError> {
    let q = AnalyticInstance::Quad1d;
    let c = q.constants();
    let sched = StepSchedule::Polyak {
        min_value: Some(0.0),
    };
    let mut ok = 0;
    for x0 in random_starts(q, c.tube_radius(0.9), seed, 0) {
        let trace = solve(&q, &sched, &x0, &SolveConfig::with_max_iters(100))?;
        let gamma = trace.records[0].distance.expect("closed-form distance") / c.tube_radius(1.0);
        let rep = verify_trace_bounds(&trace, &sched, &c, gamma, ConstantsSource::Exact)?;
        ok += usize::from(rep.fraction() == 1.0);
    }
    report.push(fraction_line("polyak_quad1d_rate_200_starts", ok, STARTS));

    let trace = solve(&q, &sched, &[1.2], &SolveConfig::with_max_iters(100))?;
    let rep = verify_trace_bounds(&trace, &sched, &c, 0.4, ConstantsSource::Exact)?;
    report.push(rep.check_line("polyak_quad1d_from_1.2"));
    Ok(())
}

fn geometric_checks(seed: u64, report: &mut Report) -> Result<(), CliError> {
    let l1 = AnalyticInstance::L1;
    let c = l1.constants();
    let (lambda, q) = geometric_params(0.5, &c)?;
    report.push(CheckLine::at_most(
        "geometric_l1_lambda",
        (lambda - 0.5f64.sqrt() / 2.0).abs(),
        1e-12,
    ));
    report.push(CheckLine::at_most(
        "geometric_l1_q",
        (q - 0.75f64.sqrt()).abs(),
        1e-12,
    ));
    let sched = StepSchedule::Geometric { lambda, q };
    let mut ok = 0;
    for x0 in random_starts(l1, c.tube_radius(0.5), seed, 10_000) {
        let trace = solve(&l1, &sched, &x0, &SolveConfig::with_max_iters(100))?;
        let rep = verify_trace_bounds(&trace, &sched, &c, 0.5, ConstantsSource::Exact)?;
        ok += usize::from(rep.fraction() == 1.0);
    }
    report.push(fraction_line("geometric_l1_rate_200_starts", ok, STARTS));
    Ok(())
}

fn constant_checks(seed: u64, report: &mut Report) -> Result<(), CliError> {
    let abs = AnalyticInstance::Abs;
    let c = abs.constants();
    let alpha = 0.05;
    let e_star = constant_step_threshold(alpha, &c)?;
    let sched = StepSchedule::Constant { alpha };
    let mut ok = 0;
    let mut contraction_ok = 0;
    let mut limsup: f64 = 0.0;
    for x0 in random_starts(abs, c.tube_radius(0.9), seed, 20_000) {
        let trace = solve(&abs, &sched, &x0, &SolveConfig::with_max_iters(500))?;
        let rep = verify_trace_bounds(&trace, &sched, &c, 0.9, ConstantsSource::Exact)?;
        ok += usize::from(rep.fraction() == 1.0);
        let (checked, bad) = check_contraction(&trace, alpha, &c)?;
        contraction_ok += usize::from(checked > 0 && bad == 0);
        let d = trace.distances().expect("closed-form distance");
        let tail = d[d.len() - 100..].iter().map(|v| v * v).fold(0.0, f64::max);
        limsup = limsup.max(tail);
    }
    report.push(fraction_line("constant_abs_bound_200_starts", ok, STARTS));
    report.push(fraction_line(
        "constant_abs_contraction",
        contraction_ok,
        STARTS,
    ));
    report.push(CheckLine::at_most(
        "constant_abs_limsup",
        limsup,
        e_star + 2.0 * alpha * alpha + 1e-9,
    ));

    let q = AnalyticInstance::Quad1d;
    let cq = q.constants();
    let trace = solve(
        &q,
        &StepSchedule::Constant { alpha: 0.1 },
        &[1.4],
        &SolveConfig::with_max_iters(300),
    )?;
    let (checked, bad) = check_contraction(&trace, 0.1, &cq)?;
    report.push(fraction_line(
        "constant_quad1d_contraction",
        checked - bad,
        checked,
    ));
    Ok(())
}

fn recurrence_check(report: &mut Report) -> Result<(), CliError> {
    let q = AnalyticInstance::Quad1d;
    let c = q.constants();
    // 100 points inside T_1 around x* = 1, none on X*
    let xs = grid_1d(0.505, 1.495, 100);
    let alphas: Vec<f64> = (1..=20).map(|i| 0.05 * i as f64).collect();
    let (checked, bad, _) = check_key_recurrence(&q, &c, &xs, &alphas)?;
    report.push(fraction_line(
        "key_recurrence_quad1d_grid",
        checked - bad,
        100 * 20,
    ));
    Ok(())
}

fn stationarity_and_tube_checks(report: &mut Report) -> Result<(), CliError> {
    let n = 4001;
    for (inst, grid, spacing) in [
        (
            AnalyticInstance::Quad1d,
            grid_1d(-3.0, 3.0, n),
            6.0 / (n - 1) as f64,
        ),
        (
            AnalyticInstance::Abs,
            grid_1d(-3.0, 3.0, n),
            6.0 / (n - 1) as f64,
        ),
        (AnalyticInstance::L1, grid_2d(-2.0, 2.0, 201), 4.0 / 200.0),
    ] {
        let c = inst.constants();
        let rep = verify_no_stationary(&inst, c.mu, c.rho, &grid, spacing)?;
        report.push(CheckLine::new(
            format!("no_stationary_{}", inst.name()),
            rep.pass,
            rep.min_subgrad_norm,
            0.0,
        ));
    }

    let q = AnalyticInstance::Quad1d;
    let inside = check_tube(&[1.2], &q, 1.0, 1.0, 2.0)?;
    report.push(CheckLine::new(
        "tube_quad1d_1.2_inside",
        inside.inside && (inside.margin - 0.3).abs() < 1e-12,
        inside.margin,
        0.3,
    ));
    let boundary = check_tube(&[0.0], &q, 2.0, 1.0, 2.0)?;
    report.push(CheckLine::new(
        "tube_quad1d_0_boundary_outside",
        !boundary.inside,
        boundary.distance,
        1.0,
    ));
    Ok(())
}

fn estimate_checks(report: &mut Report) -> Result<(), CliError> {
    let q = AnalyticInstance::Quad1d;
    let grid = grid_1d(-2.0, 2.0, 2001);
    let pairs = pairs_with_gap(&grid, 1e-3);
    let est = estimate_from_samples(&q, &grid, &pairs, 0.0, true)
        .map_err(|e| CliError::Verification(e.to_string()))?;
    // interval endpoints carry the rounding slack of the bound checks
    let within = |name: &str, v: f64, lo: f64, hi: f64| {
        let ok = v >= lo * (1.0 - BOUND_SLACK) && v <= hi * (1.0 + BOUND_SLACK);
        CheckLine::new(name, ok, v, if v < lo { lo } else { hi })
    };
    report.push(within("estimate_quad1d_mu", est.mu, 0.999, 1.001));
    report.push(within("estimate_quad1d_rho", est.rho, 1.9, 2.0));
    report.push(within("estimate_quad1d_L", est.lip, 2.99, 3.0));
    report.push(within("estimate_quad1d_tau", est.tau, 0.33, 0.34));

    let abs = AnalyticInstance::Abs;
    let g1 = grid_1d(-1.0, 1.0, 2001);
    let rho_abs = estimate_weak_convexity(&abs, &pairs_with_gap(&g1, 1e-3));
    report.push(CheckLine::at_most("estimate_abs_rho", rho_abs, 1e-9));
    for (inst, grid) in [(abs, g1), (AnalyticInstance::L1, grid_2d(-0.5, 0.5, 101))] {
        let pairs = pairs_with_gap(&grid, 1e-2);
        let est = estimate_from_samples(&inst, &grid, &pairs, 0.0, true)
            .map_err(|e| CliError::Verification(e.to_string()))?;
        report.push(CheckLine::at_most(
            format!("estimate_{}_tau_at_most_1", inst.name()),
            est.tau,
            1.0 + 1e-9,
        ));
    }
    Ok(())
}

/// Runs the full battery. Starting points are drawn from `seed`.
pub fn run_battery(seed: u64) -> Result<Report, CliError> {
    let mut report = Report::default();
    polyak_checks(seed, &mut report)?;
    geometric_checks(seed, &mut report)?;
    constant_checks(seed, &mut report)?;
    recurrence_check(&mut report)?;
    stationarity_and_tube_checks(&mut report)?;
    estimate_checks(&mut report)?;
    Ok(report)
}
