//! Disaster-area scenario: ground users scattered over an area, served by a
//! single hovering UAV.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{EnvironmentProfile, LinkGeometry};
use crate::coverage::{
    coverage_probability, draw_covered, noise_power_dbm, received_power_dbm, FormulationMode,
    RadioConfig,
};
use crate::error::{ModelError, Result};
use crate::stream::{StreamFamily, DOMAIN_PLACEMENT, DOMAIN_SHADOWING};

/// Region the users are scattered over. Coordinates are non-negative; a
/// disk of radius R is centred at (R, R).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AreaShape {
    Square { side_m: f64 },
    Disk { radius_m: f64 },
}

impl Default for AreaShape {
    fn default() -> Self {
        AreaShape::Square { side_m: 1000.0 }
    }
}

impl AreaShape {
    pub fn center(&self) -> Position {
        match *self {
            AreaShape::Square { side_m } => Position {
                x: side_m / 2.0,
                y: side_m / 2.0,
            },
            AreaShape::Disk { radius_m } => Position {
                x: radius_m,
                y: radius_m,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        let size = match *self {
            AreaShape::Square { side_m } => side_m,
            AreaShape::Disk { radius_m } => radius_m,
        };
        if !(size.is_finite() && size > 0.0) {
            return Err(ModelError::InvalidSpec(format!(
                "area size must be positive, got {size}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UavPlacement {
    pub x: f64,
    pub y: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub area: AreaShape,
    pub n_users: usize,
    /// Hover point; `None` places the UAV at `uav_altitude` over the area centre.
    pub uav: Option<UavPlacement>,
    pub uav_altitude: f64,
    pub env: EnvironmentProfile,
    pub radio: RadioConfig,
    pub seed: u64,
    pub n_draws: usize,
    pub mode: FormulationMode,
    /// Power in the energy-efficiency denominator; defaults to the UAV
    /// transmit power.
    pub total_power_w: Option<f64>,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            area: AreaShape::default(),
            n_users: 100,
            uav: None,
            uav_altitude: 100.0,
            env: EnvironmentProfile::urban(),
            radio: RadioConfig::default(),
            seed: 0,
            n_draws: 100,
            mode: FormulationMode::Standard,
            total_power_w: None,
        }
    }
}

impl ScenarioSpec {
    pub fn resolved_uav(&self) -> UavPlacement {
        self.uav.unwrap_or_else(|| {
            let c = self.area.center();
            UavPlacement {
                x: c.x,
                y: c.y,
                h: self.uav_altitude,
            }
        })
    }

    pub fn resolved_total_power_w(&self) -> f64 {
        self.total_power_w
            .unwrap_or_else(|| self.radio.p_tx_watts())
    }

    fn validate(&self) -> Result<()> {
        self.area.validate()?;
        if self.n_users == 0 {
            return Err(ModelError::InvalidSpec("n_users must be >= 1".into()));
        }
        if self.n_draws == 0 {
            return Err(ModelError::InvalidSpec("n_draws must be >= 1".into()));
        }
        let uav = self.resolved_uav();
        if !(uav.x.is_finite() && uav.y.is_finite()) {
            return Err(ModelError::InvalidSpec(
                "UAV position must be finite".into(),
            ));
        }
        if !(uav.h.is_finite() && uav.h > 0.0) {
            return Err(ModelError::InvalidSpec(format!(
                "UAV altitude must be > 0, got {}",
                uav.h
            )));
        }
        self.env.validate()?;
        self.radio.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UserRecord {
    pub position: Position,
    pub r0: f64,
    pub theta: f64,
    pub p_los: f64,
    pub mean_pl: f64,
    pub p_cov: f64,
    pub snr_db: f64,
    pub rate_bps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSummary {
    pub mean_p_cov: f64,
    /// Fraction of users covered in each joint shadowing realisation.
    pub covered_fraction_draws: Vec<f64>,
    pub sum_rate_bps: f64,
    pub total_power_w: f64,
    /// Bits per joule.
    pub energy_efficiency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioOutcome {
    pub records: Vec<UserRecord>,
    pub summary: ScenarioSummary,
}

/// `n` positions drawn uniformly over the square `[0, area_side]²`.
pub fn generate_users(n: usize, area_side: f64, seed: u64) -> Result<Vec<Position>> {
    generate_users_in(&AreaShape::Square { side_m: area_side }, n, seed)
}

/// `n` positions drawn uniformly over `area`.
pub fn generate_users_in(area: &AreaShape, n: usize, seed: u64) -> Result<Vec<Position>> {
    area.validate()?;
    if n == 0 {
        return Err(ModelError::InvalidSpec("n_users must be >= 1".into()));
    }
    let mut rng = StreamFamily::new(seed, DOMAIN_PLACEMENT).stream(0);
    let users = (0..n)
        .map(|_| match *area {
            AreaShape::Square { side_m } => Position {
                x: side_m * rng.random::<f64>(),
                y: side_m * rng.random::<f64>(),
            },
            AreaShape::Disk { radius_m } => {
                let r = radius_m * rng.random::<f64>().sqrt();
                let phi = std::f64::consts::TAU * rng.random::<f64>();
                Position {
                    x: radius_m + r * phi.cos(),
                    y: radius_m + r * phi.sin(),
                }
            }
        })
        .collect();
    Ok(users)
}

/// Sum rate over total power, bits/joule.
pub fn energy_efficiency(sum_rate_bps: f64, total_power_w: f64) -> Result<f64> {
    if !(total_power_w.is_finite() && total_power_w > 0.0) {
        return Err(ModelError::Domain(format!(
            "total power must be positive, got {total_power_w}"
        )));
    }
    Ok(sum_rate_bps / total_power_w)
}

/// Places users per `spec` and evaluates them.
pub fn evaluate_scenario(spec: &ScenarioSpec) -> Result<ScenarioOutcome> {
    spec.validate()?;
    let users = generate_users_in(&spec.area, spec.n_users, spec.seed)?;
    evaluate_population(&users, spec)
}

/// Evaluates an explicit user population under the UAV, radio and
/// environment of `spec`. `spec.area` and `spec.n_users` are not used.
///
/// Shadowing draw `d` of user `i` comes from stream `i` of the seed's
/// shadowing key, so the per-draw coverage fractions are independent of
/// thread scheduling.
pub fn evaluate_population(users: &[Position], spec: &ScenarioSpec) -> Result<ScenarioOutcome> {
    if users.is_empty() {
        return Err(ModelError::InvalidSpec(
            "at least one user is required".into(),
        ));
    }
    let spec = ScenarioSpec {
        n_users: users.len(),
        ..spec.clone()
    };
    spec.validate()?;
    let uav = spec.resolved_uav();
    let noise = noise_power_dbm(&spec.radio)?;
    let bandwidth = spec.radio.bandwidth_hz;

    let evaluated = users
        .par_iter()
        .map(|&position| {
            let r0 = (position.x - uav.x).hypot(position.y - uav.y);
            let geom = LinkGeometry::new(r0, uav.h)?;
            let cov = coverage_probability(&geom, &spec.env, &spec.radio, spec.mode)?;
            let snr_db = received_power_dbm(&spec.radio, cov.mean_path_loss) - noise;
            let rate_bps = bandwidth * (1.0 + 10f64.powf(snr_db / 10.0)).log2();
            let record = UserRecord {
                position,
                r0,
                theta: cov.theta_deg,
                p_los: cov.p_los,
                mean_pl: cov.mean_path_loss,
                p_cov: cov.p_cov,
                snr_db,
                rate_bps,
            };
            Ok((record, cov.fspl))
        })
        .collect::<Result<Vec<_>>>()?;

    let family = StreamFamily::new(spec.seed, DOMAIN_SHADOWING);
    let n_draws = spec.n_draws;
    let counts = evaluated
        .par_iter()
        .enumerate()
        .fold(
            || vec![0u64; n_draws],
            |mut acc, (i, (record, fspl))| {
                let mut rng = family.stream(i as u64);
                for slot in acc.iter_mut() {
                    if draw_covered(&mut rng, record.p_los, *fspl, &spec.env, &spec.radio) {
                        *slot += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; n_draws],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let records: Vec<UserRecord> = evaluated.into_iter().map(|(r, _)| r).collect();
    let n = records.len() as f64;
    let mean_p_cov = records.iter().map(|r| r.p_cov).sum::<f64>() / n;
    let sum_rate_bps = records.iter().map(|r| r.rate_bps).sum::<f64>();
    let total_power_w = spec.resolved_total_power_w();
    let summary = ScenarioSummary {
        mean_p_cov,
        covered_fraction_draws: counts.iter().map(|&c| c as f64 / n).collect(),
        sum_rate_bps,
        total_power_w,
        energy_efficiency: energy_efficiency(sum_rate_bps, total_power_w)?,
    };
    Ok(ScenarioOutcome { records, summary })
}
