//! Builds the output tables for each command.

use uavcov::stream::derive_seed;
use uavcov::{
    coverage_monte_carlo, evaluate_scenario, max_coverage_radius, optimal_altitude, run_sweep,
    LinkGeometry, ScenarioSpec, ScenarioSummary, SweepAxis, SweepSpec, UavPlacement,
};

use crate::config::{Command, Settings, CONFIG_LINE_PREFIX, TOOL_VERSION};
use crate::error::CliError;
use crate::table::{Cell, OutputTable};

/// Everything a command produces.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub table: OutputTable,
    /// Scenario runs also produce an aggregate summary.
    pub summary: Option<ScenarioSummary>,
}

/// Comment lines heading every CSV. The `config:` line alone is enough to
/// replay the run.
pub fn metadata(settings: &Settings) -> Result<Vec<String>, CliError> {
    let mut lines = vec![
        format!("uavcov {TOOL_VERSION}"),
        format!("command: {}", settings.command),
    ];
    if settings.command.is_sweep() && settings.sweep.axis == SweepAxis::ElevationAngleDeg {
        lines.push(format!(
            "convention: elevation-angle sweeps hold h = {} m fixed and place the user at r0 = h / tan(angle)",
            settings.h_m
        ));
    }
    if settings.command == Command::SweepCoverage && settings.sweep.mc_samples > 0 {
        lines.push(
            "monte-carlo: cell (row i, environment j) is seeded with derive_seed(seed, [i, j])"
                .into(),
        );
    }
    let json = serde_json::to_string(&settings.to_config())
        .map_err(|e| CliError::Invalid(format!("cannot serialize config: {e}")))?;
    let prefix = CONFIG_LINE_PREFIX.trim_start_matches("# ");
    lines.push(format!("{prefix}{json}"));
    Ok(lines)
}

pub fn execute(settings: &Settings) -> Result<CommandOutput, CliError> {
    let meta = metadata(settings)?;
    let mut output = match settings.command {
        Command::SweepPlos
        | Command::SweepPnlos
        | Command::SweepPathloss
        | Command::SweepCoverage => sweep_table(settings)?,
        Command::OptimizeAltitude => optimize_table(settings)?,
        Command::CoverageRadius => radius_table(settings)?,
        Command::Scenario => scenario_table(settings)?,
        Command::ShowEnvs => plain(envs_table(settings)),
    };
    output.table.metadata = meta;
    Ok(output)
}

fn plain(table: OutputTable) -> CommandOutput {
    CommandOutput {
        table,
        summary: None,
    }
}

fn sweep_table(s: &Settings) -> Result<CommandOutput, CliError> {
    let baseline = match s.sweep.axis {
        SweepAxis::AltitudeM => LinkGeometry::new(s.r0_m, 1.0)?,
        _ => LinkGeometry::new(0.0, s.h_m)?,
    };
    let spec = SweepSpec {
        axis: s.sweep.axis,
        start: s.sweep.start,
        stop: s.sweep.stop,
        step: s.sweep.step,
        environments: s.environments.clone(),
        baseline,
        radio: s.radio,
        mode: s.mode,
    };
    let result = run_sweep(&spec)?;
    let metric = match s.command {
        Command::SweepPlos => "p_los",
        Command::SweepPnlos => "p_nlos",
        Command::SweepPathloss => "mean_pl_db",
        _ => "p_cov",
    };
    let with_mc = s.command == Command::SweepCoverage && s.sweep.mc_samples > 0;

    let mut header = vec![s.sweep.axis.label().to_string()];
    header.extend(
        result
            .environment_names
            .iter()
            .map(|n| format!("{metric}[{n}]")),
    );
    if with_mc {
        for n in &result.environment_names {
            header.push(format!("p_cov_mc[{n}]"));
            header.push(format!("mc_std_error[{n}]"));
        }
    }
    let mut table = OutputTable {
        metadata: vec![],
        header,
        rows: Vec::with_capacity(result.rows.len()),
    };
    for (i, row) in result.rows.iter().enumerate() {
        let mut cells = vec![Cell::Num(row.axis_value)];
        cells.extend(row.cells.iter().map(|c| {
            Cell::Num(match s.command {
                Command::SweepPlos => c.p_los,
                Command::SweepPnlos => c.p_nlos,
                Command::SweepPathloss => c.mean_pl_db,
                _ => c.p_cov,
            })
        }));
        if with_mc {
            for (j, env) in s.environments.iter().enumerate() {
                let seed = derive_seed(s.seed, &[i as u64, j as u64]);
                let mc =
                    coverage_monte_carlo(&row.geometry, env, &s.radio, s.sweep.mc_samples, seed)?;
                cells.push(Cell::Num(mc.estimate));
                cells.push(Cell::Num(mc.std_error));
            }
        }
        table.push_row(cells);
    }
    Ok(plain(table))
}

fn optimize_table(s: &Settings) -> Result<CommandOutput, CliError> {
    let o = &s.optimizer;
    let mut table = OutputTable {
        metadata: vec![],
        header: ["environment", "r_edge_m", "h_star_m", "p_cov_star"]
            .map(String::from)
            .to_vec(),
        rows: vec![],
    };
    for env in &s.environments {
        let best = optimal_altitude(
            o.r_edge_m, env, &s.radio, o.h_min_m, o.h_max_m, o.steps, s.mode,
        )?;
        table.push_row(vec![
            Cell::Text(env.name.clone()),
            Cell::Num(o.r_edge_m),
            Cell::Num(best.h_star),
            Cell::Num(best.p_cov_star),
        ]);
    }
    Ok(plain(table))
}

fn radius_table(s: &Settings) -> Result<CommandOutput, CliError> {
    let o = &s.optimizer;
    let mut table = OutputTable {
        metadata: vec![],
        header: ["environment", "h_m", "target", "radius_m"]
            .map(String::from)
            .to_vec(),
        rows: vec![],
    };
    for env in &s.environments {
        let r = max_coverage_radius(
            s.h_m,
            env,
            &s.radio,
            o.target,
            o.r_max_m,
            o.resolution_m,
            s.mode,
        )?;
        table.push_row(vec![
            Cell::Text(env.name.clone()),
            Cell::Num(s.h_m),
            Cell::Num(o.target),
            Cell::Num(r),
        ]);
    }
    Ok(plain(table))
}

fn scenario_table(s: &Settings) -> Result<CommandOutput, CliError> {
    let sc = &s.scenario;
    let spec = ScenarioSpec {
        area: sc.area,
        n_users: sc.n_users,
        uav: Some(UavPlacement {
            x: sc.uav_x_m,
            y: sc.uav_y_m,
            h: s.h_m,
        }),
        uav_altitude: s.h_m,
        env: s.environments[0].clone(),
        radio: s.radio,
        seed: s.seed,
        n_draws: sc.n_draws,
        mode: s.mode,
        total_power_w: Some(sc.total_power_w),
    };
    let outcome = evaluate_scenario(&spec)?;
    let mut table = OutputTable {
        metadata: vec![],
        header: [
            "user",
            "x_m",
            "y_m",
            "r0_m",
            "theta_deg",
            "p_los",
            "mean_pl_db",
            "p_cov",
            "snr_db",
            "rate_bps",
        ]
        .map(String::from)
        .to_vec(),
        rows: Vec::with_capacity(outcome.records.len()),
    };
    for (i, r) in outcome.records.iter().enumerate() {
        table.push_row(vec![
            Cell::Int(i as u64),
            Cell::Num(r.position.x),
            Cell::Num(r.position.y),
            Cell::Num(r.r0),
            Cell::Num(r.theta),
            Cell::Num(r.p_los),
            Cell::Num(r.mean_pl),
            Cell::Num(r.p_cov),
            Cell::Num(r.snr_db),
            Cell::Num(r.rate_bps),
        ]);
    }
    Ok(CommandOutput {
        table,
        summary: Some(outcome.summary),
    })
}

fn envs_table(s: &Settings) -> OutputTable {
    let mut table = OutputTable {
        metadata: vec![],
        header: [
            "environment",
            "a",
            "b",
            "mu_los_db",
            "mu_nlos_db",
            "sigma_los_db",
            "sigma_nlos_db",
        ]
        .map(String::from)
        .to_vec(),
        rows: vec![],
    };
    for env in &s.environments {
        table.push_row(vec![
            Cell::Text(env.name.clone()),
            Cell::Num(env.a),
            Cell::Num(env.b),
            Cell::Num(env.mu_los),
            Cell::Num(env.mu_nlos),
            Cell::Num(env.sigma_los),
            Cell::Num(env.sigma_nlos),
        ]);
    }
    table
}

/// Summary as a CSV of `metric,value` rows followed by the per-draw
/// covered fractions.
pub fn summary_table(summary: &ScenarioSummary, metadata: Vec<String>) -> OutputTable {
    let mut table = OutputTable {
        metadata,
        header: vec!["metric".into(), "value".into()],
        rows: vec![
            vec![
                Cell::Text("mean_p_cov".into()),
                Cell::Num(summary.mean_p_cov),
            ],
            vec![
                Cell::Text("sum_rate_bps".into()),
                Cell::Num(summary.sum_rate_bps),
            ],
            vec![
                Cell::Text("total_power_w".into()),
                Cell::Num(summary.total_power_w),
            ],
            vec![
                Cell::Text("energy_efficiency_bits_per_joule".into()),
                Cell::Num(summary.energy_efficiency),
            ],
        ],
    };
    for (d, f) in summary.covered_fraction_draws.iter().enumerate() {
        table.push_row(vec![
            Cell::Text(format!("covered_fraction[{d}]")),
            Cell::Num(*f),
        ]);
    }
    table
}
