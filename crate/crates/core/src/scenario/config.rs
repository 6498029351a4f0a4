//! Scenario configuration file (TOML).
//!
//! Every block is optional and falls back to the default parameter set.
//! Unknown keys anywhere are rejected.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::constellation::{
    equidistant_phases, validate_visibility_constraint, ConstellationSpec, HaloOrbitSpec, LOW_STATIONKEEPING_AXIS_RATIO,
};
use crate::coverage::{LunarGrid, Region, TimeWindow};
use crate::ephemeris::{default_ground_stations, Ephemeris, GeometricParameters, GroundStation, TemporalParameters};
use crate::error::{Error, Result};
use crate::link::LinkParameters;
use crate::pointing::{PointingErrorModel, STABLE_SIGMA_RAD};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_region")]
    pub region: Region,
    #[serde(default)]
    pub geometry: GeometricParameters,
    #[serde(default)]
    pub timing: TemporalParameters,
    #[serde(default = "default_ground_stations")]
    pub stations: Vec<GroundStation>,
    pub constellation: ConstellationConfig,
    #[serde(default)]
    pub window: WindowConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub link: LinkParameters,
    #[serde(default)]
    pub pointing: PointingConfig,
}

fn default_region() -> Region {
    Region::Lfs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstellationKind {
    StableEmlp2,
    Halo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstellationConfig {
    pub kind: ConstellationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_satellites: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_z_km: Option<f64>,
    /// Defaults to `0.343 · a_z_km`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_y_km: Option<f64>,
    /// Defaults to `timing.halo_period_h`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period_h: Option<f64>,
    /// Defaults to `360° k / N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_offsets_deg: Option<Vec<f64>>,
}

impl ConstellationConfig {
    pub fn stable() -> Self {
        Self {
            kind: ConstellationKind::StableEmlp2,
            num_satellites: None,
            a_z_km: None,
            a_y_km: None,
            period_h: None,
            phase_offsets_deg: None,
        }
    }

    pub fn halo(a_z_km: f64, n: usize) -> Self {
        Self {
            kind: ConstellationKind::Halo,
            num_satellites: Some(n),
            a_z_km: Some(a_z_km),
            ..Self::stable()
        }
    }

    pub fn to_spec(&self, timing: &TemporalParameters) -> Result<ConstellationSpec> {
        match self.kind {
            ConstellationKind::StableEmlp2 => {
                if self.num_satellites.is_some_and(|n| n != 1) {
                    return Err(Error::config(
                        "constellation.num_satellites",
                        "a stable EML2 constellation has exactly one satellite",
                    ));
                }
                Ok(ConstellationSpec::StableEmlp2)
            }
            ConstellationKind::Halo => {
                let a_z = self
                    .a_z_km
                    .ok_or_else(|| Error::config("constellation.a_z_km", "required for a halo constellation"))?;
                let n = self.num_satellites.unwrap_or(1);
                let phases = match &self.phase_offsets_deg {
                    Some(deg) => deg.iter().map(|d| d.to_radians()).collect(),
                    None => equidistant_phases(n),
                };
                let spec = ConstellationSpec::Halo {
                    orbit: HaloOrbitSpec {
                        a_z_km: a_z,
                        a_y_km: self.a_y_km.unwrap_or(LOW_STATIONKEEPING_AXIS_RATIO * a_z),
                        period_h: self.period_h.unwrap_or(timing.halo_period_h),
                        phase_offsets_rad: phases,
                    },
                    num_satellites: n,
                };
                spec.validate().map_err(|e| Error::config("constellation", strip(e)))?;
                Ok(spec)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowConfig {
    pub start_h: f64,
    pub end_h: f64,
    pub step_h: f64,
}

impl Default for WindowConfig {
    /// One halo period, hourly, endpoints included.
    fn default() -> Self {
        Self {
            start_h: 0.0,
            end_h: 192.0,
            step_h: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub d_theta_deg: f64,
    pub d_phi_deg: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            d_theta_deg: 1.0,
            d_phi_deg: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PointingConfig {
    pub sigma_rad: f64,
    pub n_samples: usize,
    pub seed: u64,
    /// Minimum LoS distance. Taken from a coverage run when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range_min_km: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range_max_km: Option<f64>,
    /// Powers at which CDF values are reported in the run summary, W.
    pub checkpoints_w: Vec<f64>,
}

impl Default for PointingConfig {
    fn default() -> Self {
        Self {
            sigma_rad: STABLE_SIGMA_RAD,
            n_samples: 100_000,
            seed: 1,
            range_min_km: None,
            range_max_km: None,
            checkpoints_w: vec![1.6, 41.6],
        }
    }
}

/// One problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<Finding>,
    pub warnings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty() && self.warnings.is_empty()
    }

    fn error(&mut self, e: Error) {
        let (path, message) = match e {
            Error::Config { path, message } => (path, message),
            other => (String::new(), other.to_string()),
        };
        self.errors.push(Finding { path, message });
    }

    fn warn(&mut self, path: &str, message: String) {
        self.warnings.push(Finding {
            path: path.to_owned(),
            message,
        });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for e in &self.errors {
            writeln!(f, "error: {}: {}", e.path, e.message)?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {}: {}", w.path, w.message)?;
        }
        if self.is_clean() {
            writeln!(f, "ok")?;
        }
        Ok(())
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::InvalidArgument(m) | Error::Domain(m) => m,
        Error::Config { path, message } => format!("{path}: {message}"),
        other => other.to_string(),
    }
}

fn prefixed(prefix: &str, e: Error) -> Error {
    match e {
        Error::Config { path, message } => Error::config(format!("{prefix}.{path}"), message),
        other => Error::config(prefix, strip(other)),
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serialize(e.to_string()))
    }

    /// Git-style blob hash (SHA-256) of the canonical TOML form.
    pub fn content_hash(&self) -> Result<String> {
        let body = self.to_toml()?;
        let mut h = Sha256::new();
        h.update(format!("blob {}\0", body.len()).as_bytes());
        h.update(body.as_bytes());
        Ok(hex::encode(h.finalize()))
    }

    pub fn ephemeris(&self) -> Result<Ephemeris> {
        self.geometry.validate().map_err(|e| prefixed("geometry", e))?;
        self.timing.validate().map_err(|e| prefixed("timing", e))?;
        for (i, s) in self.stations.iter().enumerate() {
            s.validate().map_err(|e| prefixed(&format!("stations[{i}]"), e))?;
        }
        Ephemeris::new(self.geometry, self.timing, self.stations.clone())
    }

    pub fn constellation_spec(&self) -> Result<ConstellationSpec> {
        self.constellation.to_spec(&self.timing)
    }

    pub fn time_window(&self) -> Result<TimeWindow> {
        TimeWindow::new(self.window.start_h, self.window.end_h, self.window.step_h).map_err(|e| prefixed("window", e))
    }

    pub fn lunar_grid(&self) -> Result<LunarGrid> {
        LunarGrid::new(self.grid.d_theta_deg, self.grid.d_phi_deg, self.geometry.moon_radius_km)
            .map_err(|e| prefixed("grid", e))
    }

    pub fn link_parameters(&self) -> Result<LinkParameters> {
        self.link.validate().map_err(|e| prefixed("link", e))?;
        Ok(self.link)
    }

    pub fn pointing_model(&self) -> Result<PointingErrorModel> {
        let p = &self.pointing;
        let model = PointingErrorModel::new(p.sigma_rad).map_err(|e| prefixed("pointing.sigma_rad", e))?;
        if p.n_samples == 0 {
            return Err(Error::config("pointing.n_samples", "must be >= 1"));
        }
        for (name, r) in [("range_min_km", p.range_min_km), ("range_max_km", p.range_max_km)] {
            if let Some(r) = r {
                if !(r.is_finite() && r > 0.0) {
                    return Err(Error::config(
                        format!("pointing.{name}"),
                        format!("must be > 0, got {r}"),
                    ));
                }
            }
        }
        if let (Some(lo), Some(hi)) = (p.range_min_km, p.range_max_km) {
            if lo > hi {
                return Err(Error::config("pointing.range_min_km", "exceeds range_max_km"));
            }
        }
        if p.checkpoints_w.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::config(
                "pointing.checkpoints_w",
                "checkpoints must be positive powers",
            ));
        }
        Ok(model)
    }

    /// Runs every block validator, then fails on the first error.
    pub fn check(&self) -> Result<()> {
        match validate(self).errors.into_iter().next() {
            None => Ok(()),
            Some(f) => Err(Error::Config {
                path: f.path,
                message: f.message,
            }),
        }
    }
}

/// Checks parameter ranges and the halo design constraints.
pub fn validate(cfg: &ScenarioConfig) -> ValidationReport {
    let mut report = ValidationReport::default();
    if cfg.name.trim().is_empty() {
        report.error(Error::config("name", "must not be empty"));
    }
    if let Err(e) = cfg.ephemeris() {
        report.error(e);
    }
    if let Err(e) = cfg.region.validate() {
        report.error(prefixed("region", e));
    }
    if let Err(e) = cfg.time_window() {
        report.error(e);
    }
    if let Err(e) = cfg.lunar_grid() {
        report.error(e);
    }
    if let Err(e) = cfg.link_parameters() {
        report.error(e);
    }
    if let Err(e) = cfg.pointing_model() {
        report.error(e);
    }
    match cfg.constellation_spec() {
        Err(e) => report.error(e),
        Ok(ConstellationSpec::Halo { orbit, .. }) => {
            let vis = validate_visibility_constraint(&orbit);
            if !vis.satisfied {
                report.warn(
                    "constellation.a_y_km",
                    format!(
                        "Earth-visibility constraint violated (A_y={} < 3671 km, margin {} km)",
                        fmt_km(orbit.a_y_km),
                        fmt_km(vis.margin_km)
                    ),
                );
            }
            let ratio_a_y = LOW_STATIONKEEPING_AXIS_RATIO * orbit.a_z_km;
            if (orbit.a_y_km - ratio_a_y).abs() > 1e-9 * orbit.a_z_km.max(1.0) {
                report.warn(
                    "constellation.a_y_km",
                    format!(
                        "A_y={} km overrides the 0.343·A_z={} km station-keeping ratio",
                        fmt_km(orbit.a_y_km),
                        fmt_km(ratio_a_y)
                    ),
                );
            }
            if (orbit.period_h - cfg.timing.halo_period_h).abs() > 0.0 {
                report.warn(
                    "constellation.period_h",
                    format!(
                        "halo period {} h differs from timing.halo_period_h {} h",
                        orbit.period_h, cfg.timing.halo_period_h
                    ),
                );
            }
            let n = orbit.phase_offsets_rad.len();
            let even = equidistant_phases(n);
            let uneven = orbit
                .phase_offsets_rad
                .iter()
                .zip(&even)
                .any(|(a, b)| ((a - b).rem_euclid(TAU)).min(TAU - (a - b).rem_euclid(TAU)) > 1e-9);
            if uneven {
                report.warn(
                    "constellation.phase_offsets_deg",
                    "satellites are not equally phased".into(),
                );
            }
        }
        Ok(ConstellationSpec::StableEmlp2) => {}
    }
    report
}

fn fmt_km(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    if r.fract() == 0.0 {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}
