//! Downlink coverage probability under dB-domain Gaussian shadowing.
//!
//! A link is LoS with probability `P_LoS(θ)`, otherwise NLoS. On branch `k`
//! the excess loss is `X_k ~ N(mu_k, sigma_k²)` dB and the received power is
//! `p_tx + g − FSPL − X_k`. The user is covered when that power reaches the
//! receiver threshold `p_min`, which in closed form gives
//!
//! ```text
//! P_cov = P_LoS · Q(A) + P_NLoS · Q(B)
//! A = (p_min − p_tx − g + FSPL + mu_los) / sigma_los
//! ```
//!
//! and likewise for `B` with the NLoS statistics. [`FormulationMode::PaperLiteral`]
//! keeps the original printed form of the arguments instead (mean path loss in
//! place of FSPL, variance in the denominator) for side-by-side comparison.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{
    elevation_angle_deg, fspl_db, p_los, slant_distance, EnvironmentProfile, LinkGeometry,
};
use crate::error::{ModelError, Result};
use crate::stream::{StreamFamily, DOMAIN_COVERAGE_MC};

/// UAV downlink transmit power, dBm (10 W).
pub const UAV_TX_POWER_DBM: f64 = 40.0;
/// Ground user device transmit power, dBm (1 W).
pub const GUD_TX_POWER_DBM: f64 = 30.0;

/// Monte Carlo draws per counter-based stream.
const MC_CHUNK: u64 = 1 << 16;

/// Link-budget parameters shared by every coverage computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioConfig {
    /// Carrier frequency, Hz.
    pub f_c_hz: f64,
    /// Serving transmitter power, dBm.
    pub p_tx_dbm: f64,
    /// Antenna gain, dB.
    pub g_db: f64,
    /// Receiver sensitivity threshold, dBm.
    pub p_min_dbm: f64,
    /// AWGN power spectral density, dBm/Hz.
    pub noise_density_dbm_hz: f64,
    /// Channel bandwidth, Hz.
    pub bandwidth_hz: f64,
}

impl Default for RadioConfig {
    fn default() -> Self {
        Self {
            f_c_hz: 2e9,
            p_tx_dbm: UAV_TX_POWER_DBM,
            g_db: 3.0,
            p_min_dbm: -80.0,
            noise_density_dbm_hz: -174.0,
            bandwidth_hz: 5e6,
        }
    }
}

impl RadioConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("f_c_hz", self.f_c_hz),
            ("p_tx_dbm", self.p_tx_dbm),
            ("g_db", self.g_db),
            ("p_min_dbm", self.p_min_dbm),
            ("noise_density_dbm_hz", self.noise_density_dbm_hz),
            ("bandwidth_hz", self.bandwidth_hz),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(ModelError::InvalidRadio(format!(
                "{name} must be finite, got {v}"
            )));
        }
        if self.f_c_hz <= 0.0 {
            return Err(ModelError::InvalidRadio(format!(
                "f_c_hz must be positive, got {}",
                self.f_c_hz
            )));
        }
        if self.bandwidth_hz <= 0.0 {
            return Err(ModelError::InvalidRadio(format!(
                "bandwidth_hz must be positive, got {}",
                self.bandwidth_hz
            )));
        }
        Ok(())
    }

    /// Transmit power converted to watts.
    pub fn p_tx_watts(&self) -> f64 {
        dbm_to_watts(self.p_tx_dbm)
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// How the branch arguments of the coverage formula are assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulationMode {
    /// FSPL inside the argument, excess loss added once, divided by sigma.
    #[default]
    Standard,
    /// Mean path loss inside the argument, excess loss added again,
    /// divided by sigma squared.
    PaperLiteral,
}

impl FormulationMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            FormulationMode::Standard => "standard",
            FormulationMode::PaperLiteral => "paper-literal",
        }
    }
}

impl std::str::FromStr for FormulationMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "standard" => Ok(FormulationMode::Standard),
            "paper-literal" => Ok(FormulationMode::PaperLiteral),
            other => Err(format!(
                "unknown mode `{other}` (expected `standard` or `paper-literal`)"
            )),
        }
    }
}

/// Everything computed on the way to one coverage probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageBreakdown {
    pub theta_deg: f64,
    pub p_los: f64,
    pub p_nlos: f64,
    pub fspl: f64,
    pub mean_path_loss: f64,
    /// Branch argument A (LoS).
    pub deficit_los: f64,
    /// Branch argument B (NLoS).
    pub deficit_nlos: f64,
    pub q_los: f64,
    pub q_nlos: f64,
    pub p_cov: f64,
}

/// Standard Gaussian tail probability P(Z > x).
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Argument of the Q-function on one branch.
///
/// `path_loss_db` is the free-space loss in standard mode and the mean path
/// loss (FSPL plus average excess loss) in paper-literal mode.
pub fn branch_argument(
    radio: &RadioConfig,
    path_loss_db: f64,
    mu: f64,
    sigma: f64,
    mode: FormulationMode,
) -> Result<f64> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(ModelError::Domain(format!(
            "shadowing deviation must be positive, got {sigma}"
        )));
    }
    let numerator = radio.p_min_dbm + path_loss_db - radio.p_tx_dbm - radio.g_db + mu;
    Ok(match mode {
        FormulationMode::Standard => numerator / sigma,
        FormulationMode::PaperLiteral => numerator / (sigma * sigma),
    })
}

/// Received power for a given total path loss: p_tx + g − loss.
pub fn received_power_dbm(radio: &RadioConfig, total_path_loss: f64) -> f64 {
    radio.p_tx_dbm + radio.g_db - total_path_loss
}

/// Thermal noise integrated over the channel bandwidth.
pub fn noise_power_dbm(radio: &RadioConfig) -> Result<f64> {
    if !(radio.bandwidth_hz.is_finite() && radio.bandwidth_hz > 0.0) {
        return Err(ModelError::Domain(format!(
            "bandwidth must be positive, got {}",
            radio.bandwidth_hz
        )));
    }
    Ok(radio.noise_density_dbm_hz + 10.0 * radio.bandwidth_hz.log10())
}

/// Closed-form coverage probability with its intermediate quantities.
pub fn coverage_probability(
    geom: &LinkGeometry,
    env: &EnvironmentProfile,
    radio: &RadioConfig,
    mode: FormulationMode,
) -> Result<CoverageBreakdown> {
    env.validate()?;
    radio.validate()?;
    let theta = elevation_angle_deg(geom);
    let p_los = p_los(theta, env)?;
    let p_nlos = 1.0 - p_los;
    let fspl = fspl_db(radio.f_c_hz, slant_distance(geom))?;
    let mean_path_loss = fspl + env.mu_los * p_los + env.mu_nlos * p_nlos;
    let loss_term = match mode {
        FormulationMode::Standard => fspl,
        FormulationMode::PaperLiteral => mean_path_loss,
    };
    let deficit_los = branch_argument(radio, loss_term, env.mu_los, env.sigma_los, mode)?;
    let deficit_nlos = branch_argument(radio, loss_term, env.mu_nlos, env.sigma_nlos, mode)?;
    let q_los = q_function(deficit_los);
    let q_nlos = q_function(deficit_nlos);
    Ok(CoverageBreakdown {
        theta_deg: theta,
        p_los,
        p_nlos,
        fspl,
        mean_path_loss,
        deficit_los,
        deficit_nlos,
        q_los,
        q_nlos,
        p_cov: p_los * q_los + p_nlos * q_nlos,
    })
}

/// Monte Carlo coverage estimate and its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

impl McEstimate {
    fn from_hits(hits: u64, n: u64) -> Self {
        let p = hits as f64 / n as f64;
        Self {
            estimate: p,
            std_error: (p * (1.0 - p) / n as f64).sqrt(),
            n_samples: n,
        }
    }
}

/// One shadowed link realisation: draws the LoS state and the excess loss,
/// and reports whether the received power reaches the threshold.
pub(crate) fn draw_covered<R: Rng>(
    rng: &mut R,
    p_los: f64,
    fspl: f64,
    env: &EnvironmentProfile,
    radio: &RadioConfig,
) -> bool {
    let u: f64 = rng.random();
    let z: f64 = rng.sample(StandardNormal);
    let (mu, sigma) = if u < p_los {
        (env.mu_los, env.sigma_los)
    } else {
        (env.mu_nlos, env.sigma_nlos)
    };
    received_power_dbm(radio, fspl + mu + sigma * z) >= radio.p_min_dbm
}

/// Simulates the shadowed LoS/NLoS link `n_samples` times.
///
/// Draws are split into fixed-size chunks; chunk `i` always reads stream `i`
/// of the seed's key, so the result is identical for any rayon pool size.
pub fn coverage_monte_carlo(
    geom: &LinkGeometry,
    env: &EnvironmentProfile,
    radio: &RadioConfig,
    n_samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    if n_samples == 0 {
        return Err(ModelError::Domain("n_samples must be >= 1".into()));
    }
    env.validate()?;
    radio.validate()?;
    let los = p_los(elevation_angle_deg(geom), env)?;
    let fspl = fspl_db(radio.f_c_hz, slant_distance(geom))?;
    let family = StreamFamily::new(seed, DOMAIN_COVERAGE_MC);
    let n_chunks = n_samples.div_ceil(MC_CHUNK);
    let hits: u64 = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let len = MC_CHUNK.min(n_samples - chunk * MC_CHUNK);
            let mut rng = family.stream(chunk);
            (0..len)
                .filter(|_| draw_covered(&mut rng, los, fspl, env, radio))
                .count() as u64
        })
        .sum();
    Ok(McEstimate::from_hits(hits, n_samples))
}
