//! Command-line parsing. Flags are turned into a [`ConfigFile`] patch and
//! layered over the optional `--config` file.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use uavcov::{FormulationMode, SweepAxis};

use crate::config::{
    parse_env_list, validate_patch, Command, ConfigFile, GeometryPatch, OptimizerPatch, RadioPatch,
    ScenarioPatch, Settings, ShadowingPatch, ShapeKind, Source, SweepPatch,
};
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "uavcov",
    version,
    about = "UAV air-to-ground coverage sweeps, optimizers and scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Subcommand, Debug)]
enum CommandArgs {
    /// LoS probability versus elevation angle, one column per environment
    SweepPlos(CommonArgs),
    /// NLoS probability versus elevation angle
    SweepPnlos(CommonArgs),
    /// Mean path loss versus user distance
    SweepPathloss(CommonArgs),
    /// Coverage probability versus user distance (optionally with Monte Carlo)
    SweepCoverage(CommonArgs),
    /// Coverage-maximizing UAV altitude for a user at --r-edge
    OptimizeAltitude(CommonArgs),
    /// Largest horizontal distance meeting --target coverage
    CoverageRadius(CommonArgs),
    /// Random user population under one UAV
    Scenario(CommonArgs),
    /// Print the environment profiles
    ShowEnvs(CommonArgs),
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// JSON config file, or a CSV previously written by this tool
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG chart next to the CSV
    #[arg(long)]
    plot: bool,
    /// Worker threads (results do not depend on this)
    #[arg(long)]
    workers: Option<usize>,
    /// standard | paper-literal
    #[arg(long)]
    mode: Option<FormulationMode>,
    /// `all` or a comma-separated list of environment names
    #[arg(long)]
    env: Option<String>,
    /// LoS shadowing standard deviation, dB
    #[arg(long, allow_negative_numbers = true)]
    sigma_los: Option<f64>,
    /// NLoS shadowing standard deviation, dB
    #[arg(long, allow_negative_numbers = true)]
    sigma_nlos: Option<f64>,
    /// Carrier frequency, Hz
    #[arg(long, allow_negative_numbers = true)]
    fc: Option<f64>,
    /// Transmit power, dBm
    #[arg(long, allow_negative_numbers = true)]
    p_tx: Option<f64>,
    /// Antenna gain, dB
    #[arg(long, allow_negative_numbers = true)]
    gain: Option<f64>,
    /// Receiver threshold, dBm
    #[arg(long, allow_negative_numbers = true)]
    p_min: Option<f64>,
    /// Noise density, dBm/Hz
    #[arg(long, allow_negative_numbers = true)]
    noise_density: Option<f64>,
    /// Bandwidth, Hz
    #[arg(long, allow_negative_numbers = true)]
    bandwidth: Option<f64>,
    /// UAV altitude, m
    #[arg(long, allow_negative_numbers = true)]
    h: Option<f64>,
    /// Horizontal distance for altitude sweeps, m
    #[arg(long, allow_negative_numbers = true)]
    r0: Option<f64>,
    /// angle | distance | altitude
    #[arg(long)]
    axis: Option<SweepAxis>,
    /// First sweep axis value
    #[arg(long, allow_negative_numbers = true)]
    start: Option<f64>,
    /// Last sweep axis value (inclusive when on the grid)
    #[arg(long, allow_negative_numbers = true)]
    stop: Option<f64>,
    /// Sweep axis spacing
    #[arg(long, allow_negative_numbers = true)]
    step: Option<f64>,
    /// Monte Carlo draws per sweep-coverage cell (0 disables)
    #[arg(long)]
    mc_samples: Option<u64>,
    /// Seed for stochastic commands
    #[arg(long)]
    seed: Option<u64>,
    /// Horizontal distance of the edge user, m
    #[arg(long, allow_negative_numbers = true)]
    r_edge: Option<f64>,
    /// Lowest candidate altitude, m
    #[arg(long, allow_negative_numbers = true)]
    h_min: Option<f64>,
    /// Highest candidate altitude, m
    #[arg(long, allow_negative_numbers = true)]
    h_max: Option<f64>,
    /// Number of altitude grid points
    #[arg(long)]
    steps: Option<usize>,
    /// Required coverage probability
    #[arg(long, allow_negative_numbers = true)]
    target: Option<f64>,
    /// Largest radius scanned, m
    #[arg(long, allow_negative_numbers = true)]
    r_max: Option<f64>,
    /// Radius grid spacing, m
    #[arg(long, allow_negative_numbers = true)]
    resolution: Option<f64>,
    /// Number of ground users
    #[arg(long)]
    n_users: Option<usize>,
    /// square | disk
    #[arg(long)]
    shape: Option<ShapeKind>,
    /// Square side length, m
    #[arg(long, allow_negative_numbers = true)]
    area_side: Option<f64>,
    /// Disk radius, m
    #[arg(long, allow_negative_numbers = true)]
    radius: Option<f64>,
    /// UAV x position, m (default: area centre)
    #[arg(long, allow_negative_numbers = true)]
    uav_x: Option<f64>,
    /// UAV y position, m (default: area centre)
    #[arg(long, allow_negative_numbers = true)]
    uav_y: Option<f64>,
    /// Shadowing draws per user
    #[arg(long)]
    n_draws: Option<usize>,
    /// Total power for energy efficiency, W
    #[arg(long, allow_negative_numbers = true)]
    total_power: Option<f64>,
}

fn some_if<T>(any: bool, value: T) -> Option<T> {
    any.then_some(value)
}

impl CommonArgs {
    fn to_patch(&self) -> ConfigFile {
        let radio = RadioPatch {
            f_c_hz: self.fc,
            p_tx_dbm: self.p_tx,
            g_db: self.gain,
            p_min_dbm: self.p_min,
            noise_density_dbm_hz: self.noise_density,
            bandwidth_hz: self.bandwidth,
        };
        let shadowing = ShadowingPatch {
            sigma_los_db: self.sigma_los,
            sigma_nlos_db: self.sigma_nlos,
        };
        let geometry = GeometryPatch {
            r0_m: self.r0,
            h_m: self.h,
        };
        let sweep = SweepPatch {
            axis: self.axis,
            start: self.start,
            stop: self.stop,
            step: self.step,
            mc_samples: self.mc_samples,
        };
        let optimizer = OptimizerPatch {
            r_edge_m: self.r_edge,
            h_min_m: self.h_min,
            h_max_m: self.h_max,
            steps: self.steps,
            target: self.target,
            r_max_m: self.r_max,
            resolution_m: self.resolution,
        };
        let scenario = ScenarioPatch {
            shape: self.shape,
            area_side_m: self.area_side,
            radius_m: self.radius,
            n_users: self.n_users,
            uav_x_m: self.uav_x,
            uav_y_m: self.uav_y,
            n_draws: self.n_draws,
            total_power_w: self.total_power,
        };
        ConfigFile {
            version: None,
            command: None,
            mode: self.mode,
            seed: self.seed,
            environment: None,
            environments: self.env.as_deref().map(parse_env_list),
            radio: some_if(radio != RadioPatch::default(), radio),
            shadowing: some_if(shadowing != ShadowingPatch::default(), shadowing),
            geometry: some_if(geometry != GeometryPatch::default(), geometry),
            sweep: some_if(sweep != SweepPatch::default(), sweep),
            optimizer: some_if(optimizer != OptimizerPatch::default(), optimizer),
            scenario: some_if(scenario != ScenarioPatch::default(), scenario),
        }
    }
}

/// A parsed, validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub settings: Settings,
    pub out: Option<PathBuf>,
    pub plot: bool,
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn command(&self) -> Command {
        self.settings.command
    }
}

/// Parses `argv` (including the program name). Precedence: flags over the
/// `--config` file over built-in defaults.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp
            | ErrorKind::DisplayVersion
            | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => CliError::Info(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    })?;
    let (command, args) = match cli.command {
        CommandArgs::SweepPlos(a) => (Command::SweepPlos, a),
        CommandArgs::SweepPnlos(a) => (Command::SweepPnlos, a),
        CommandArgs::SweepPathloss(a) => (Command::SweepPathloss, a),
        CommandArgs::SweepCoverage(a) => (Command::SweepCoverage, a),
        CommandArgs::OptimizeAltitude(a) => (Command::OptimizeAltitude, a),
        CommandArgs::CoverageRadius(a) => (Command::CoverageRadius, a),
        CommandArgs::Scenario(a) => (Command::Scenario, a),
        CommandArgs::ShowEnvs(a) => (Command::ShowEnvs, a),
    };

    if args.plot && !command.is_sweep() {
        return Err(CliError::Usage(format!(
            "--plot is only available for sweep commands, not `{command}`"
        )));
    }
    if args.plot && args.out.is_none() {
        return Err(CliError::Usage("--plot requires --out".into()));
    }
    if args.workers == Some(0) {
        return Err(CliError::Invalid("--workers: must be >= 1, got 0".into()));
    }

    let flags = args.to_patch();
    validate_patch(&flags, Source::Flags)?;
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let parsed = ConfigFile::parse(&text)?;
            validate_patch(&parsed, Source::File)?;
            parsed
        }
        None => ConfigFile::default(),
    };
    let settings = Settings::resolve(command, &file.overlay(flags))?;
    Ok(RunConfig {
        settings,
        out: args.out,
        plot: args.plot,
        workers: args.workers,
    })
}
