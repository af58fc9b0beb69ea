//! Parameter sweeps and grid-search deployment optimizers.
//!
//! Every search here evaluates an explicit grid, with no unimodality
//! assumption, so results are bit-reproducible and checkable against a
//! brute-force scan.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{p_los, EnvironmentProfile, LinkGeometry};
use crate::coverage::{coverage_probability, FormulationMode, RadioConfig};
use crate::error::{ModelError, Result};

/// Slack used when counting grid points, so that `stop` survives float
/// rounding in `(stop - start) / step`.
const GRID_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    /// Elevation angle in degrees; altitude fixed, r0 = h / tan(θ).
    ElevationAngleDeg,
    /// Horizontal user distance in meters; altitude fixed.
    UserDistanceM,
    /// UAV altitude in meters; horizontal distance fixed.
    AltitudeM,
}

impl SweepAxis {
    /// CSV column label, including the unit.
    pub fn label(&self) -> &'static str {
        match self {
            SweepAxis::ElevationAngleDeg => "angle_deg",
            SweepAxis::UserDistanceM => "distance_m",
            SweepAxis::AltitudeM => "altitude_m",
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxis::ElevationAngleDeg => "elevation-angle-deg",
            SweepAxis::UserDistanceM => "user-distance-m",
            SweepAxis::AltitudeM => "altitude-m",
        }
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "elevation-angle-deg" | "angle" => Ok(SweepAxis::ElevationAngleDeg),
            "user-distance-m" | "distance" => Ok(SweepAxis::UserDistanceM),
            "altitude-m" | "altitude" => Ok(SweepAxis::AltitudeM),
            other => Err(format!(
                "unknown axis `{other}` (expected angle, distance or altitude)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub environments: Vec<EnvironmentProfile>,
    /// Supplies the coordinate the axis does not vary: the altitude for
    /// angle and distance sweeps, the horizontal distance for altitude sweeps.
    pub baseline: LinkGeometry,
    pub radio: RadioConfig,
    pub mode: FormulationMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepCell {
    pub p_los: f64,
    pub p_nlos: f64,
    pub mean_pl_db: f64,
    pub p_cov: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis_value: f64,
    pub geometry: LinkGeometry,
    /// One cell per environment, in the order of `SweepSpec::environments`.
    pub cells: Vec<SweepCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub environment_names: Vec<String>,
    pub rows: Vec<SweepRow>,
}

/// Points `start, start + step, ...` up to and including `stop`;
/// floor((stop − start) / step) + 1 of them.
pub fn axis_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(ModelError::InvalidSpec("grid bounds must be finite".into()));
    }
    if step <= 0.0 {
        return Err(ModelError::InvalidSpec(format!(
            "step must be > 0, got {step}"
        )));
    }
    if start > stop {
        return Err(ModelError::InvalidSpec(format!(
            "start ({start}) must not exceed stop ({stop})"
        )));
    }
    let n = ((stop - start) / step + GRID_EPS).floor() as usize + 1;
    Ok((0..n).map(|i| start + i as f64 * step).collect())
}

fn sweep_geometry(axis: SweepAxis, value: f64, baseline: &LinkGeometry) -> Result<LinkGeometry> {
    match axis {
        SweepAxis::ElevationAngleDeg => LinkGeometry::from_elevation(baseline.h(), value),
        SweepAxis::UserDistanceM => LinkGeometry::new(value, baseline.h()),
        SweepAxis::AltitudeM => LinkGeometry::new(baseline.r0(), value),
    }
    .map_err(|e| ModelError::InvalidSpec(format!("{} = {value}: {e}", axis.as_str())))
}

/// Evaluates LoS/NLoS probability, mean path loss and coverage at every
/// grid point for every environment. Rows come back in axis order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    if spec.environments.is_empty() {
        return Err(ModelError::InvalidSpec(
            "at least one environment is required".into(),
        ));
    }
    for env in &spec.environments {
        env.validate()?;
    }
    spec.radio.validate()?;
    let grid = axis_grid(spec.start, spec.stop, spec.step)?;
    let rows = grid
        .par_iter()
        .map(|&value| {
            let geometry = sweep_geometry(spec.axis, value, &spec.baseline)?;
            let cells = spec
                .environments
                .iter()
                .map(|env| {
                    let cov = coverage_probability(&geometry, env, &spec.radio, spec.mode)?;
                    // angle sweeps report the LoS probability at the exact
                    // axis angle rather than at the re-derived one
                    let (p_los, p_nlos) = match spec.axis {
                        SweepAxis::ElevationAngleDeg => {
                            let p = p_los(value, env)?;
                            (p, 1.0 - p)
                        }
                        _ => (cov.p_los, cov.p_nlos),
                    };
                    Ok(SweepCell {
                        p_los,
                        p_nlos,
                        mean_pl_db: cov.mean_path_loss,
                        p_cov: cov.p_cov,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepRow {
                axis_value: value,
                geometry,
                cells,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        axis: spec.axis,
        environment_names: spec.environments.iter().map(|e| e.name.clone()).collect(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AltitudeOptimum {
    pub h_star: f64,
    pub p_cov_star: f64,
}

/// `steps` altitudes evenly spaced from `h_min` to `h_max` inclusive.
pub fn altitude_grid(h_min: f64, h_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(h_min.is_finite() && h_max.is_finite()) || h_min <= 0.0 || h_min >= h_max {
        return Err(ModelError::InvalidRange(format!(
            "need 0 < h_min < h_max, got h_min = {h_min}, h_max = {h_max}"
        )));
    }
    if steps < 2 {
        return Err(ModelError::InvalidRange(format!(
            "steps must be >= 2, got {steps}"
        )));
    }
    let span = h_max - h_min;
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                h_max
            } else {
                h_min + span * i as f64 / last
            }
        })
        .collect())
}

/// Altitude on the grid that maximizes coverage for a user at horizontal
/// distance `r_edge`. Ties go to the lowest altitude.
pub fn optimal_altitude(
    r_edge: f64,
    env: &EnvironmentProfile,
    radio: &RadioConfig,
    h_min: f64,
    h_max: f64,
    steps: usize,
    mode: FormulationMode,
) -> Result<AltitudeOptimum> {
    if !(r_edge.is_finite() && r_edge >= 0.0) {
        return Err(ModelError::InvalidRange(format!(
            "r_edge must be >= 0, got {r_edge}"
        )));
    }
    let grid = altitude_grid(h_min, h_max, steps)?;
    let values = grid
        .par_iter()
        .map(|&h| {
            let geom = LinkGeometry::new(r_edge, h)?;
            Ok(coverage_probability(&geom, env, radio, mode)?.p_cov)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    Ok(AltitudeOptimum {
        h_star: grid[best],
        p_cov_star: values[best],
    })
}

/// Radii 0, resolution, 2·resolution, ... not exceeding `r_max_scan`.
pub fn radius_grid(r_max_scan: f64, resolution: f64) -> Result<Vec<f64>> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(ModelError::InvalidRange(format!(
            "resolution must be > 0, got {resolution}"
        )));
    }
    if !(r_max_scan.is_finite() && r_max_scan >= 0.0) {
        return Err(ModelError::InvalidRange(format!(
            "r_max_scan must be >= 0, got {r_max_scan}"
        )));
    }
    axis_grid(0.0, r_max_scan, resolution)
}

/// Largest horizontal distance on the scan grid whose coverage still meets
/// `target`, or 0 when no grid point does. The whole grid is scanned, so
/// non-monotone coverage curves are handled.
pub fn max_coverage_radius(
    h: f64,
    env: &EnvironmentProfile,
    radio: &RadioConfig,
    target: f64,
    r_max_scan: f64,
    resolution: f64,
    mode: FormulationMode,
) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(ModelError::InvalidRange(format!(
            "target must lie in (0, 1), got {target}"
        )));
    }
    let grid = radius_grid(r_max_scan, resolution)?;
    let covered = grid
        .par_iter()
        .map(|&r0| {
            let geom = LinkGeometry::new(r0, h)?;
            Ok(coverage_probability(&geom, env, radio, mode)?.p_cov >= target)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(covered.iter().rposition(|&ok| ok).map_or(0.0, |i| grid[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(axis: SweepAxis, start: f64, stop: f64, step: f64) -> SweepSpec {
        SweepSpec {
            axis,
            start,
            stop,
            step,
            environments: EnvironmentProfile::builtins(),
            baseline: LinkGeometry::new(0.0, 100.0).unwrap(),
            radio: RadioConfig::default(),
            mode: FormulationMode::Standard,
        }
    }

    #[test]
    fn grid_counts() {
        assert_eq!(axis_grid(0.5, 90.0, 0.5).unwrap().len(), 180);
        assert_eq!(axis_grid(15.0, 500.0, 5.0).unwrap().len(), 98);
        assert_eq!(axis_grid(10.0, 12.0, 5.0).unwrap(), vec![10.0]);
        assert_eq!(axis_grid(3.0, 3.0, 1.0).unwrap(), vec![3.0]);
        assert!(axis_grid(5.0, 1.0, 1.0).is_err());
        assert!(axis_grid(0.0, 1.0, 0.0).is_err());
        assert!(axis_grid(0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn angle_sweep_shape() {
        let res = run_sweep(&spec(SweepAxis::ElevationAngleDeg, 0.5, 90.0, 0.5)).unwrap();
        assert_eq!(res.rows.len(), 180);
        assert!(res.rows.iter().all(|r| r.cells.len() == 4));
        let crossing = res
            .rows
            .iter()
            .find(|r| r.cells[0].p_los >= 0.97)
            .map(|r| r.axis_value)
            .unwrap();
        assert!(crossing <= 20.0);
        assert_eq!(res.rows.last().unwrap().geometry.r0(), 0.0);
    }

    #[test]
    fn angle_sweep_rejects_zero_angle() {
        assert!(run_sweep(&spec(SweepAxis::ElevationAngleDeg, 0.0, 90.0, 0.5)).is_err());
    }

    #[test]
    fn degenerate_distance_sweep() {
        let res = run_sweep(&spec(SweepAxis::UserDistanceM, 15.0, 20.0, 50.0)).unwrap();
        assert_eq!(res.rows.len(), 1);
    }

    #[test]
    fn empty_environment_list_rejected() {
        let mut s = spec(SweepAxis::UserDistanceM, 15.0, 500.0, 5.0);
        s.environments.clear();
        assert!(run_sweep(&s).is_err());
    }

    #[test]
    fn altitude_sweep_holds_r0() {
        let mut s = spec(SweepAxis::AltitudeM, 50.0, 500.0, 50.0);
        s.baseline = LinkGeometry::new(300.0, 1.0).unwrap();
        let res = run_sweep(&s).unwrap();
        assert_eq!(res.rows.len(), 10);
        assert!(res.rows.iter().all(|r| r.geometry.r0() == 300.0));
        assert_eq!(res.rows[3].geometry.h(), 200.0);
    }

    #[test]
    fn altitude_grid_bounds() {
        let g = altitude_grid(50.0, 2000.0, 1951).unwrap();
        assert_eq!(g.len(), 1951);
        assert_eq!(g[0], 50.0);
        assert_eq!(g[1950], 2000.0);
        assert!((g[1] - 51.0).abs() < 1e-12);
        assert!(altitude_grid(0.0, 10.0, 5).is_err());
        assert!(altitude_grid(10.0, 10.0, 5).is_err());
        assert!(altitude_grid(10.0, 20.0, 1).is_err());
    }

    #[test]
    fn optimal_altitude_tie_prefers_lowest() {
        // overhead user: same elevation at every altitude, and a threshold
        // low enough that both Q terms are exactly 1
        let radio = RadioConfig {
            p_min_dbm: -400.0,
            ..RadioConfig::default()
        };
        let opt = optimal_altitude(
            0.0,
            &EnvironmentProfile::urban(),
            &radio,
            60.0,
            80.0,
            2,
            FormulationMode::Standard,
        )
        .unwrap();
        assert_eq!(opt.h_star, 60.0);
    }

    #[test]
    fn optimal_altitude_rejects_bad_ranges() {
        let env = EnvironmentProfile::urban();
        let r = RadioConfig::default();
        let m = FormulationMode::Standard;
        assert!(optimal_altitude(100.0, &env, &r, 100.0, 50.0, 10, m).is_err());
        assert!(optimal_altitude(100.0, &env, &r, 50.0, 100.0, 1, m).is_err());
        assert!(optimal_altitude(-1.0, &env, &r, 50.0, 100.0, 10, m).is_err());
    }

    #[test]
    fn coverage_radius_edges() {
        let env = EnvironmentProfile::urban();
        let r = RadioConfig::default();
        let m = FormulationMode::Standard;
        let at_zero = coverage_probability(&LinkGeometry::new(0.0, 100.0).unwrap(), &env, &r, m)
            .unwrap()
            .p_cov;
        let unreachable = (at_zero + 1.0) / 2.0;
        assert_eq!(
            max_coverage_radius(100.0, &env, &r, unreachable, 1000.0, 5.0, m).unwrap(),
            0.0
        );
        let easy = RadioConfig {
            p_min_dbm: -300.0,
            ..r
        };
        assert_eq!(
            max_coverage_radius(100.0, &env, &easy, 0.5, 1000.0, 5.0, m).unwrap(),
            1000.0
        );
        assert!(max_coverage_radius(100.0, &env, &r, 1.0, 1000.0, 5.0, m).is_err());
        assert!(max_coverage_radius(100.0, &env, &r, 0.5, 1000.0, 0.0, m).is_err());
    }
}
