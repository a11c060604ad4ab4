//! The six subcommands. Each returns a table and whether its tolerance
//! checks passed.

use entropic_core::dynamics::{
    field_components, integrate_propagator, step_count, transition_probability, DrivingConfig,
    IntegrationOptions, PropagatorState,
};
use entropic_core::geodesics::{
    geodesic_closed_form, log_axis, open_linear_axis, region_mask, solve_geodesic_numeric, speed_with,
    summarize, Termination,
};
use entropic_core::info_geometry::{default_fisher_step, fisher_numeric};
use entropic_core::{FisherFunction, PhysicalConstants, ProfileKind, Scenario};

use crate::config::RunConfig;
use crate::output::{Cell, Table};

pub const SIMULATE_TOLERANCE: f64 = 1e-8;
pub const GEODESIC_TOLERANCE: f64 = 1e-6;
pub const SPEED_TOLERANCE: f64 = 1e-6;

/// Share of a bounded validity domain the geodesic report may cover.
pub const DOMAIN_FRACTION: f64 = 0.9;

const DEFAULT_ROWS: usize = 101;
const DEFAULT_REGION_GRID: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub table: Table,
    pub passed: bool,
}

impl CommandOutput {
    fn ok(table: Table) -> Self {
        Self { table, passed: true }
    }
}

fn scenario(config: &RunConfig, kind: ProfileKind) -> entropic_core::Result<Scenario> {
    Scenario::dimensionless(kind, config.rate(), config.lambda)
}

fn time_grid(t_max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n)
        .map(|i| if i == n - 1 { t_max } else { t_max * i as f64 / (n - 1) as f64 })
        .collect()
}

fn scenario_meta(table: &mut Table, config: &RunConfig, kind: ProfileKind) {
    table.meta("scenario", kind.name());
    table.meta("gamma_over_hbar", config.rate());
    if kind != ProfileKind::Constant {
        table.meta("lambda", config.lambda);
    }
}

pub fn cmd_simulate(config: &RunConfig) -> entropic_core::Result<CommandOutput> {
    let consts = PhysicalConstants::dimensionless();
    let s = scenario(config, config.scenario)?;
    let driving = match config.longitudinal {
        Some(omega_over_hbar) => DrivingConfig::with_override(config.omega0, omega_over_hbar * consts.hbar),
        None => DrivingConfig::on_resonance(config.omega0, &consts)?,
    };
    let rows = config.grid.unwrap_or(DEFAULT_ROWS);
    let tolerance = config.tolerance.unwrap_or(SIMULATE_TOLERANCE);

    let states = if rows == 1 {
        vec![PropagatorState::identity()]
    } else {
        let interval = config.t_max / (rows - 1) as f64;
        let per_row = step_count(interval, config.dt);
        let options = IntegrationOptions {
            dt: interval / per_row as f64,
            record_every: per_row,
            allow_off_resonance: config.allow_off_resonance,
        };
        integrate_propagator(s.profile(), &driving, &consts, config.t_max, &options)?
    };

    let mut table = Table::new(&["t", "p_w_numeric", "p_w_closed", "p_wperp_closed", "abs_error"]);
    let mut worst = 0.0f64;
    let mut body = Vec::with_capacity(states.len());
    for state in &states {
        let numeric = transition_probability(state, 0.0)?;
        let closed = s.success_probability(state.t)?;
        let err = (numeric - closed.success).abs();
        worst = worst.max(err);
        body.push(vec![
            Cell::Num(state.t),
            Cell::Num(numeric),
            Cell::Num(closed.success),
            Cell::Num(closed.failure),
            Cell::Num(err),
        ]);
    }
    scenario_meta(&mut table, config, config.scenario);
    table.meta("omega0", config.omega0);
    table.meta("dt", config.dt);
    table.meta("tolerance", tolerance);
    table.meta("max_abs_error", worst);
    let passed = worst <= tolerance;
    table.meta("passed", passed);
    table.rows = body;
    Ok(CommandOutput { table, passed })
}

pub fn cmd_fisher(config: &RunConfig) -> entropic_core::Result<CommandOutput> {
    let s = scenario(config, config.scenario)?;
    let fisher = FisherFunction::new(s, config.normalization);
    let path = s.path();
    let rows = config.grid.unwrap_or(DEFAULT_ROWS);
    let mut table = Table::new(&["theta", "F_closed", "F_numeric", "g_normalized", "fallback"]);
    scenario_meta(&mut table, config, config.scenario);
    table.meta("normalization", config.normalization.name());
    for theta in time_grid(config.t_max, rows) {
        let closed = fisher.fisher(theta)?;
        let h = config.h_step.unwrap_or_else(|| default_fisher_step(theta));
        let (numeric, fallback) = if theta > h {
            let est = fisher_numeric(&path, theta, h, true)?;
            (est.value, est.fallback)
        } else {
            let w = s.omega_h(theta)? / s.hbar();
            (4.0 * w * w, true)
        };
        table.push(vec![
            Cell::Num(theta),
            Cell::Num(closed),
            Cell::Num(numeric),
            Cell::Num(fisher.metric(theta)?),
            Cell::Flag(fallback),
        ]);
    }
    Ok(CommandOutput::ok(table))
}

pub fn cmd_geodesic(config: &RunConfig) -> entropic_core::Result<CommandOutput> {
    let s = scenario(config, config.scenario)?;
    let fisher = FisherFunction::new(s, config.normalization);
    let (theta0, dot0, xi0) = (config.theta0, config.theta_dot0, config.xi0);
    let closed = geodesic_closed_form(&s, theta0, dot0, xi0, config.form)?;
    let domain = closed.domain();
    let limit = if domain.is_bounded_above() {
        xi0 + DOMAIN_FRACTION * (domain.end - xi0)
    } else {
        f64::INFINITY
    };
    let end = config.xi_max.min(limit);
    let truncated = end < config.xi_max;

    let rows = config.grid.unwrap_or(DEFAULT_ROWS).max(2);
    let interval = (end - xi0) / (rows - 1) as f64;
    let per_row = step_count(interval, config.dxi);
    let numeric = solve_geodesic_numeric(&s, theta0, dot0, xi0, end, interval / per_row as f64)?;

    let v0 = speed_with(&fisher, theta0, dot0)?;
    let mut worst_speed = 0.0f64;
    for sample in &numeric.samples {
        let v = speed_with(&fisher, sample.theta, sample.theta_dot)?;
        worst_speed = worst_speed.max(((v - v0) / v0).abs());
    }

    let mut table = Table::new(&["xi", "theta_closed", "theta_numeric", "speed", "abs_error"]);
    let mut worst = 0.0f64;
    let mut body = Vec::with_capacity(rows);
    for sample in numeric.samples.iter().step_by(per_row) {
        let exact = closed.theta(sample.xi)?;
        let err = (exact - sample.theta).abs();
        worst = worst.max(err);
        body.push(vec![
            Cell::Num(sample.xi),
            Cell::Num(exact),
            Cell::Num(sample.theta),
            Cell::Num(speed_with(&fisher, sample.theta, sample.theta_dot)?),
            Cell::Num(err),
        ]);
    }
    let functional = entropic_core::info_geometry::path_functional(&fisher, &numeric.to_sampled_path()?)?;

    let tolerance = config.tolerance.unwrap_or(GEODESIC_TOLERANCE);
    let completed = numeric.termination == Termination::Completed;
    let passed = completed && worst <= tolerance && worst_speed <= SPEED_TOLERANCE;

    scenario_meta(&mut table, config, config.scenario);
    table.meta("normalization", config.normalization.name());
    table.meta("form", if config.form == Default::default() { "exact" } else { "paper" });
    table.meta("theta0", theta0);
    table.meta("thetadot0", dot0);
    table.meta("xi0", xi0);
    table.meta("domain_start", domain.start);
    table.meta("domain_end", domain.end);
    table.meta("xi_end", end);
    table.meta("truncated_to_domain", truncated);
    match numeric.termination {
        Termination::Completed => table.meta("termination", "completed"),
        Termination::DomainExit { xi } => {
            table.meta("termination", "domain-exit");
            table.meta("exit_xi", xi);
        }
    }
    table.meta("v_E", v0);
    table.meta("r_E", v0 * v0);
    table.meta("L", functional.length);
    table.meta("I", functional.divergence);
    table.meta("max_abs_error", worst);
    table.meta("max_speed_variation", worst_speed);
    table.meta("tolerance", tolerance);
    table.meta("passed", passed);
    table.rows = body;
    Ok(CommandOutput { table, passed })
}

pub fn fisher_behavior(kind: ProfileKind) -> &'static str {
    match kind {
        ProfileKind::Constant => "constant",
        ProfileKind::Oscillatory => "oscillatory",
        ProfileKind::PowerLaw => "power law decay",
        ProfileKind::Exponential => "exponential decay",
    }
}

pub fn search_analogy(kind: ProfileKind) -> &'static str {
    match kind {
        ProfileKind::Constant | ProfileKind::Oscillatory => "Grover-like",
        ProfileKind::PowerLaw | ProfileKind::Exponential => "fixed-point-like",
    }
}

pub fn cmd_report(config: &RunConfig) -> entropic_core::Result<CommandOutput> {
    let scenarios = ProfileKind::ALL
        .iter()
        .map(|&k| scenario(config, k))
        .collect::<entropic_core::Result<Vec<_>>>()?;
    let mut summary = summarize(&scenarios, config.theta0, config.theta_dot0, config.normalization)?;
    summary.sort_by(|a, b| b.rate.total_cmp(&a.rate));

    let mut table = Table::new(&["scenario", "fisher_behavior", "v_E", "r_E", "eta_E", "search_analogy"]);
    table.meta("gamma_over_hbar", config.rate());
    table.meta("lambda", config.lambda);
    table.meta("theta0", config.theta0);
    table.meta("thetadot0", config.theta_dot0);
    table.meta("normalization", config.normalization.name());
    table.meta("normalizer_r", summary[0].normalizer);
    for row in &summary {
        table.push(vec![
            Cell::from(row.kind.name()),
            Cell::from(fisher_behavior(row.kind)),
            Cell::Num(row.speed),
            Cell::Num(row.rate),
            Cell::Num(row.efficiency),
            Cell::from(search_analogy(row.kind)),
        ]);
    }
    Ok(CommandOutput::ok(table))
}

pub fn cmd_region(config: &RunConfig) -> entropic_core::Result<CommandOutput> {
    let n = config.grid.unwrap_or(DEFAULT_REGION_GRID);
    let lambdas = log_axis(config.lambda_min, config.lambda_max, n);
    let theta0s = open_linear_axis(config.theta0_max, n);
    let grid = region_mask(&lambdas, &theta0s)?;
    let mut table = Table::new(&["lambda", "theta0", "f_P", "in_region"]);
    table.meta("z_star", grid.boundary_root);
    table.meta("lambda_min", config.lambda_min);
    table.meta("lambda_max", config.lambda_max);
    table.meta("theta0_max", config.theta0_max);
    table.meta("grid", n as u64);
    for (i, &l) in grid.lambdas.iter().enumerate() {
        for (j, &t) in grid.theta0s.iter().enumerate() {
            let k = grid.index(i, j);
            table.push(vec![Cell::Num(l), Cell::Num(t), Cell::Num(grid.ratio[k]), Cell::Flag(grid.mask[k])]);
        }
    }
    Ok(CommandOutput::ok(table))
}

pub fn cmd_fields(config: &RunConfig) -> entropic_core::Result<CommandOutput> {
    let consts = PhysicalConstants::dimensionless();
    let s = scenario(config, config.scenario)?;
    let driving = DrivingConfig::on_resonance(config.omega0, &consts)?;
    let rows = config.grid.unwrap_or(DEFAULT_ROWS);
    let mut table = Table::new(&["t", "bx", "by", "bz", "b_perp"]);
    scenario_meta(&mut table, config, config.scenario);
    table.meta("omega0", config.omega0);
    table.meta("units", "gamma/mu_bohr");
    for t in time_grid(config.t_max, rows) {
        let b = field_components(s.profile(), &driving, &consts, t)?;
        table.push(vec![Cell::Num(t), Cell::Num(b.bx), Cell::Num(b.by), Cell::Num(b.bz), Cell::Num(b.b_perp)]);
    }
    Ok(CommandOutput::ok(table))
}
