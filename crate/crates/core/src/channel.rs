//! Closed-form air-to-ground channel: link geometry, elevation-dependent
//! LoS probability and mean path loss.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

/// Speed of light in vacuum, m/s (exact SI value).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default LoS shadowing standard deviation, dB. Not part of the tabulated
/// environment constants; override per profile when better data exist.
pub const DEFAULT_SIGMA_LOS_DB: f64 = 3.0;
/// Default NLoS shadowing standard deviation, dB. See [`DEFAULT_SIGMA_LOS_DB`].
pub const DEFAULT_SIGMA_NLOS_DB: f64 = 8.0;

/// Propagation environment: S-curve parameters of the LoS probability and
/// the mean/standard deviation of the excess loss on each branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentProfile {
    pub name: String,
    /// Dimensionless S-curve offset.
    pub a: f64,
    /// S-curve slope, per degree.
    pub b: f64,
    /// Mean excess loss on LoS links, dB.
    pub mu_los: f64,
    /// Mean excess loss on NLoS links, dB.
    pub mu_nlos: f64,
    /// LoS shadowing standard deviation, dB.
    #[serde(default = "default_sigma_los")]
    pub sigma_los: f64,
    /// NLoS shadowing standard deviation, dB.
    #[serde(default = "default_sigma_nlos")]
    pub sigma_nlos: f64,
}

fn default_sigma_los() -> f64 {
    DEFAULT_SIGMA_LOS_DB
}

fn default_sigma_nlos() -> f64 {
    DEFAULT_SIGMA_NLOS_DB
}

impl EnvironmentProfile {
    /// Builds and validates a custom profile with explicit shadowing.
    pub fn new(
        name: impl Into<String>,
        a: f64,
        b: f64,
        mu_los: f64,
        mu_nlos: f64,
        sigma_los: f64,
        sigma_nlos: f64,
    ) -> Result<Self> {
        let env = Self {
            name: name.into(),
            a,
            b,
            mu_los,
            mu_nlos,
            sigma_los,
            sigma_nlos,
        };
        env.validate()?;
        Ok(env)
    }

    fn builtin(name: &str, a: f64, b: f64, mu_los: f64, mu_nlos: f64) -> Self {
        Self {
            name: name.to_string(),
            a,
            b,
            mu_los,
            mu_nlos,
            sigma_los: DEFAULT_SIGMA_LOS_DB,
            sigma_nlos: DEFAULT_SIGMA_NLOS_DB,
        }
    }

    pub fn suburban() -> Self {
        Self::builtin("suburban", 5.2, 0.35, 0.1, 21.0)
    }

    pub fn urban() -> Self {
        Self::builtin("urban", 10.6, 0.18, 1.0, 20.0)
    }

    pub fn dense_urban() -> Self {
        Self::builtin("dense-urban", 11.95, 0.14, 1.6, 23.0)
    }

    pub fn high_rise_urban() -> Self {
        Self::builtin("high-rise-urban", 26.5, 0.13, 2.3, 34.0)
    }

    /// The four built-in environments, from most open to most obstructed.
    pub fn builtins() -> Vec<Self> {
        vec![
            Self::suburban(),
            Self::urban(),
            Self::dense_urban(),
            Self::high_rise_urban(),
        ]
    }

    /// Looks up a built-in profile by name. Spaces and underscores are
    /// accepted in place of hyphens, case-insensitively.
    pub fn by_name(name: &str) -> Option<Self> {
        let key: String = name
            .trim()
            .to_ascii_lowercase()
            .chars()
            .map(|c| if c == ' ' || c == '_' { '-' } else { c })
            .collect();
        match key.as_str() {
            "suburban" => Some(Self::suburban()),
            "urban" => Some(Self::urban()),
            "dense-urban" | "denseurban" => Some(Self::dense_urban()),
            "high-rise-urban" | "highrise-urban" | "highrise" | "high-rise" => {
                Some(Self::high_rise_urban())
            }
            _ => None,
        }
    }

    /// Returns a copy with the shadowing deviations replaced.
    pub fn with_shadowing(mut self, sigma_los: f64, sigma_nlos: f64) -> Result<Self> {
        self.sigma_los = sigma_los;
        self.sigma_nlos = sigma_nlos;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |reason: &str| {
            Err(ModelError::InvalidEnvironment {
                name: self.name.clone(),
                reason: reason.to_string(),
            })
        };
        let fields = [
            self.a,
            self.b,
            self.mu_los,
            self.mu_nlos,
            self.sigma_los,
            self.sigma_nlos,
        ];
        if fields.iter().any(|v| !v.is_finite()) {
            return fail("all parameters must be finite");
        }
        if self.a <= 0.0 || self.b <= 0.0 {
            return fail("a and b must be positive");
        }
        if self.mu_los < 0.0 || self.mu_los > self.mu_nlos {
            return fail("excess losses must satisfy 0 <= mu_los <= mu_nlos");
        }
        if self.sigma_los <= 0.0 || self.sigma_nlos <= 0.0 {
            return fail("shadowing deviations must be positive");
        }
        Ok(())
    }
}

/// Horizontal ground distance from the UAV's nadir and UAV altitude, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkGeometry {
    r0: f64,
    h: f64,
}

impl LinkGeometry {
    pub fn new(r0: f64, h: f64) -> Result<Self> {
        if !r0.is_finite() || !h.is_finite() {
            return Err(ModelError::InvalidGeometry(format!(
                "non-finite input (r0 = {r0}, h = {h})"
            )));
        }
        if r0 < 0.0 {
            return Err(ModelError::InvalidGeometry(format!(
                "horizontal distance must be >= 0, got {r0}"
            )));
        }
        if h <= 0.0 {
            return Err(ModelError::InvalidGeometry(format!(
                "altitude must be > 0, got {h}"
            )));
        }
        Ok(Self { r0, h })
    }

    /// Geometry at which the user sees the UAV under `theta_deg`, holding
    /// the altitude fixed: r0 = h / tan(theta).
    pub fn from_elevation(h: f64, theta_deg: f64) -> Result<Self> {
        if !(theta_deg > 0.0 && theta_deg <= 90.0) {
            return Err(ModelError::InvalidGeometry(format!(
                "elevation angle must lie in (0, 90] degrees, got {theta_deg}"
            )));
        }
        let r0 = if theta_deg == 90.0 {
            0.0
        } else {
            h / theta_deg.to_radians().tan()
        };
        Self::new(r0, h)
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn h(&self) -> f64 {
        self.h
    }
}

/// 3-D UAV-to-user distance, sqrt(r0² + h²).
pub fn slant_distance(geom: &LinkGeometry) -> f64 {
    geom.r0.hypot(geom.h)
}

/// Elevation angle of the UAV seen from the user, degrees in (0, 90].
/// A user directly below the UAV (r0 = 0) sees it at 90°.
pub fn elevation_angle_deg(geom: &LinkGeometry) -> f64 {
    geom.h.atan2(geom.r0).to_degrees().min(90.0)
}

fn check_angle(theta_deg: f64) -> Result<()> {
    if !(0.0..=90.0).contains(&theta_deg) {
        return Err(ModelError::Domain(format!(
            "elevation angle must lie in [0, 90] degrees, got {theta_deg}"
        )));
    }
    Ok(())
}

/// LoS probability at elevation `theta_deg` (degrees):
/// 1 / (1 + a·exp(−b·(θ − a))).
pub fn p_los(theta_deg: f64, env: &EnvironmentProfile) -> Result<f64> {
    check_angle(theta_deg)?;
    Ok(1.0 / (1.0 + env.a * (-env.b * (theta_deg - env.a)).exp()))
}

/// NLoS probability, the complement of [`p_los`].
pub fn p_nlos(theta_deg: f64, env: &EnvironmentProfile) -> Result<f64> {
    Ok(1.0 - p_los(theta_deg, env)?)
}

/// Free-space path loss in dB at carrier `f_c` (Hz) over `d` meters.
pub fn fspl_db(f_c: f64, d: f64) -> Result<f64> {
    if !(f_c.is_finite() && f_c > 0.0) {
        return Err(ModelError::Domain(format!(
            "carrier frequency must be positive and finite, got {f_c}"
        )));
    }
    if !(d.is_finite() && d > 0.0) {
        return Err(ModelError::Domain(format!(
            "distance must be positive and finite, got {d}"
        )));
    }
    Ok(20.0 * (4.0 * std::f64::consts::PI * f_c * d / SPEED_OF_LIGHT).log10())
}

/// Mean path loss: free-space loss plus the LoS/NLoS-probability weighted
/// excess loss of the environment.
pub fn mean_path_loss_db(geom: &LinkGeometry, env: &EnvironmentProfile, f_c: f64) -> Result<f64> {
    let fspl = fspl_db(f_c, slant_distance(geom))?;
    let los = p_los(elevation_angle_deg(geom), env)?;
    Ok(fspl + env.mu_los * los + env.mu_nlos * (1.0 - los))
}
