//! UAV air-to-ground link models for post-disaster coverage planning.
//!
//! The crate is layered bottom-up:
//!
//! - [`channel`]: geometry, elevation-dependent LoS/NLoS probability and
//!   mean path loss (free space plus environment excess loss).
//! - [`coverage`]: downlink coverage probability under dB-domain Gaussian
//!   shadowing, both in closed form and by seeded Monte Carlo.
//! - [`planner`]: parameter sweeps, optimal altitude and maximum coverage
//!   radius grid searches.
//! - [`scenario`]: a population of ground users served by one UAV, with
//!   aggregate coverage, sum-rate and energy efficiency.
//!
//! All analytic functions are pure. Stochastic functions draw from
//! counter-based streams keyed by a seed (see [`stream`]), so their output
//! does not depend on the number of worker threads.

pub mod channel;
pub mod coverage;
pub mod error;
pub mod planner;
pub mod scenario;
pub mod stream;

pub use channel::{
    elevation_angle_deg, fspl_db, mean_path_loss_db, p_los, p_nlos, slant_distance,
    EnvironmentProfile, LinkGeometry, SPEED_OF_LIGHT,
};
pub use coverage::{
    branch_argument, coverage_monte_carlo, coverage_probability, noise_power_dbm, q_function,
    received_power_dbm, CoverageBreakdown, FormulationMode, McEstimate, RadioConfig,
};
pub use error::{ModelError, Result};
pub use planner::{
    max_coverage_radius, optimal_altitude, run_sweep, AltitudeOptimum, SweepAxis, SweepResult,
    SweepSpec,
};
pub use scenario::{
    energy_efficiency, evaluate_population, evaluate_scenario, generate_users, AreaShape, Position,
    ScenarioOutcome, ScenarioSpec, ScenarioSummary, UavPlacement, UserRecord,
};
