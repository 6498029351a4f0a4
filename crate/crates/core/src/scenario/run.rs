//! Scenario runners. Each writes CSV tables and a `summary.json` into the
//! output directory and returns the summary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::coverage::{coverage_snapshot, coverage_timeline, satellites_at, CoverageTimeline};
use crate::error::{Error, Result};
use crate::link::{harvested_power, link_geometry};
use crate::pointing::{ks_critical_value, ks_statistic, monte_carlo_cdf, HarvestedPowerDistribution};

use super::config::ScenarioConfig;

/// Number of log-spaced power levels in a CDF table.
pub const CDF_TABLE_POINTS: usize = 241;
/// The CDF table spans `c2·10^-CDF_TABLE_DECADES ..= c2`.
pub const CDF_TABLE_DECADES: f64 = 12.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfCheckpoint {
    pub label: String,
    pub range_m: f64,
    pub h_w: f64,
    pub analytic: f64,
    pub empirical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub label: String,
    pub range_m: f64,
    pub n: usize,
    pub statistic: f64,
    /// Asymptotic critical value at α = 0.01.
    pub critical_value: f64,
}

/// Machine-readable outcome of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub scenario: String,
    pub command: String,
    pub config_hash: String,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_coverage_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_scp_percent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_scp_percent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_los_km: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_los_km: Option<f64>,
    /// Fraction of samples at which each satellite sees the Earth.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub visibility_fraction: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub all_visible: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cdf_checkpoints: Vec<CdfCheckpoint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ks: Vec<KsResult>,
    /// Files written, relative to the output directory.
    pub outputs: Vec<String>,
    pub wall_clock_s: f64,
}

impl RunSummary {
    fn new(cfg: &ScenarioConfig, command: &str) -> Result<Self> {
        Ok(Self {
            scenario: cfg.name.clone(),
            command: command.to_owned(),
            config_hash: cfg.content_hash()?,
            samples: 0,
            full_coverage_rate: None,
            full_samples: None,
            min_scp_percent: None,
            max_scp_percent: None,
            min_los_km: None,
            max_los_km: None,
            visibility_fraction: Vec::new(),
            all_visible: None,
            seed: None,
            cdf_checkpoints: Vec::new(),
            ks: Vec::new(),
            outputs: Vec::new(),
            wall_clock_s: 0.0,
        })
    }

    fn with_timeline(mut self, tl: &CoverageTimeline) -> Self {
        self.samples = tl.samples.len();
        self.full_coverage_rate = Some(tl.full_coverage_rate);
        self.full_samples = Some(tl.full_samples());
        self.min_scp_percent = Some(tl.min_scp());
        self.max_scp_percent = Some(tl.max_scp());
        self.min_los_km = tl.min_los_km();
        self.max_los_km = tl.max_los_km();
        let n = tl.samples.first().map_or(0, |s| s.earth_visible.len());
        self.visibility_fraction = (0..n).map(|k| tl.visibility_fraction(k)).collect();
        self.all_visible = Some(tl.all_visible());
        self
    }
}

/// Formats a float with 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// Output directory for `cfg`: the override, else `output_dir`, else
/// `out/<name>`.
pub fn output_dir(cfg: &ScenarioConfig, override_dir: Option<&Path>) -> PathBuf {
    override_dir
        .map(Path::to_path_buf)
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| Path::new("out").join(&cfg.name))
}

fn write_file(dir: &Path, name: &str, body: &str, outputs: &mut Vec<String>) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    outputs.push(name.to_owned());
    Ok(())
}

fn finish(dir: &Path, mut summary: RunSummary, started: Instant) -> Result<RunSummary> {
    summary.outputs.push("summary.json".into());
    summary.wall_clock_s = started.elapsed().as_secs_f64();
    let json = serde_json::to_string_pretty(&summary).map_err(|e| Error::Serialize(e.to_string()))?;
    let path = dir.join("summary.json");
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(summary)
}

/// Computes the coverage timeline of `cfg` without writing anything.
pub fn timeline(cfg: &ScenarioConfig) -> Result<CoverageTimeline> {
    cfg.check()?;
    coverage_timeline(
        &cfg.ephemeris()?,
        &cfg.lunar_grid()?,
        &cfg.constellation_spec()?,
        &cfg.region,
        &cfg.time_window()?,
    )
}

/// `coverage.csv`: one row per sample with SCP, Earth visibility per
/// satellite and the LoS extremes. `min_scp_cells.csv`: per-cell coverage at
/// the worst sample, with the index of the first satellite covering each
/// cell (−1 when none does) and one coverage flag per satellite.
pub fn run_coverage(cfg: &ScenarioConfig, dir: &Path) -> Result<RunSummary> {
    let started = Instant::now();
    let tl = timeline(cfg)?;
    let mut summary = RunSummary::new(cfg, "coverage")?.with_timeline(&tl);
    let n_sat = cfg.constellation_spec()?.num_satellites();

    let mut csv = String::from("t_h,scp_percent,full");
    for k in 0..n_sat {
        let _ = write!(csv, ",visible_{k}");
    }
    csv.push_str(",min_los_km,max_los_km\n");
    for s in &tl.samples {
        let _ = write!(csv, "{},{},{}", real(s.t_h), real(s.scp_percent), flag(s.full));
        for v in &s.earth_visible {
            let _ = write!(csv, ",{}", flag(*v));
        }
        let _ = writeln!(csv, ",{},{}", opt_real(s.min_los_km), opt_real(s.max_los_km));
    }
    write_file(dir, "coverage.csv", &csv, &mut summary.outputs)?;

    if let Some(worst) = tl.min_scp_sample() {
        let grid = cfg.lunar_grid()?;
        let (_, _, body) = satellites_at(&cfg.ephemeris()?, &cfg.constellation_spec()?, worst.t_h)?;
        let snap = coverage_snapshot(&grid, &cfg.region, &body)?;
        let mut cells = String::from("t_h,lat_deg,lon_deg,x_km,y_km,z_km,in_region,satellite");
        for k in 0..n_sat {
            let _ = write!(cells, ",covered_{k}");
        }
        cells.push('\n');
        for (i, c) in grid.cells.iter().enumerate() {
            let sat = snap.first_covering_satellite(i).map_or(-1, |k| k as i64);
            let p = c.surface_point;
            let _ = write!(
                cells,
                "{},{},{},{},{},{},{},{}",
                real(worst.t_h),
                real(c.lat_rad.to_degrees()),
                real(c.lon_rad.to_degrees()),
                real(p.x),
                real(p.y),
                real(p.z),
                flag(cfg.region.contains(c)),
                sat
            );
            for per_sat in &snap.per_satellite_covered {
                let _ = write!(cells, ",{}", flag(per_sat[i]));
            }
            cells.push('\n');
        }
        write_file(dir, "min_scp_cells.csv", &cells, &mut summary.outputs)?;
    }
    finish(dir, summary, started)
}

/// `visibility.csv`: per sample and satellite, whether the Earth centre and
/// any ground station are in line of sight.
pub fn run_visibility(cfg: &ScenarioConfig, dir: &Path) -> Result<RunSummary> {
    let started = Instant::now();
    let tl = timeline(cfg)?;
    let mut summary = RunSummary::new(cfg, "visibility")?.with_timeline(&tl);
    let n_sat = cfg.constellation_spec()?.num_satellites();

    let mut csv = String::from("t_h");
    for k in 0..n_sat {
        let _ = write!(csv, ",earth_{k},station_{k}");
    }
    csv.push_str(",all_visible\n");
    for s in &tl.samples {
        let _ = write!(csv, "{}", real(s.t_h));
        for (e, g) in s.earth_visible.iter().zip(&s.station_visible) {
            let _ = write!(csv, ",{},{}", flag(*e), flag(*g));
        }
        let _ = writeln!(csv, ",{}", flag(s.earth_visible.iter().all(|v| *v)));
    }
    write_file(dir, "visibility.csv", &csv, &mut summary.outputs)?;
    finish(dir, summary, started)
}

/// LoS range extremes in km, from the config or from a coverage run.
pub fn link_ranges_km(cfg: &ScenarioConfig) -> Result<(f64, f64)> {
    let p = &cfg.pointing;
    if let (Some(lo), Some(hi)) = (p.range_min_km, p.range_max_km) {
        return Ok((lo, hi));
    }
    let tl = timeline(cfg)?;
    let lo = p.range_min_km.or(tl.min_los_km());
    let hi = p.range_max_km.or(tl.max_los_km());
    match (lo, hi) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Error::config(
            "pointing",
            "no covered cell in the region, so no link range",
        )),
    }
}

/// Power levels of a CDF table: log-spaced from `c2·1e-12` to `c2`, merged
/// with the checkpoints.
pub fn cdf_table_levels(c2_w: f64, checkpoints_w: &[f64]) -> Vec<f64> {
    let step = CDF_TABLE_DECADES / (CDF_TABLE_POINTS - 1) as f64;
    let mut h: Vec<f64> = (0..CDF_TABLE_POINTS)
        .map(|i| c2_w * 10f64.powf(-CDF_TABLE_DECADES + step * i as f64))
        .chain(checkpoints_w.iter().copied())
        .collect();
    h.sort_by(f64::total_cmp);
    h.dedup();
    h
}

/// Misalignments tabulated in `link_budget.csv`, in units of σ.
pub const LINK_BUDGET_SIGMAS: usize = 16;

/// `power_cdf_min.csv` and `power_cdf_max.csv`: analytic and Monte Carlo
/// CDF of the harvested power at the shortest and longest link.
/// `link_budget.csv`: the link equation evaluated at both ranges for
/// γ = 0, σ/4, ..., 4σ.
pub fn run_power_cdf(cfg: &ScenarioConfig, dir: &Path) -> Result<RunSummary> {
    let started = Instant::now();
    cfg.check()?;
    let params = cfg.link_parameters()?;
    let model = cfg.pointing_model()?;
    let p = &cfg.pointing;
    let (lo_km, hi_km) = link_ranges_km(cfg)?;

    let mut summary = RunSummary::new(cfg, "power-cdf")?;
    summary.seed = Some(p.seed);
    summary.samples = p.n_samples;
    summary.min_los_km = Some(lo_km);
    summary.max_los_km = Some(hi_km);

    let mut budget = String::from("R_m,phi_rad,d_t_m,g_t,g_r,c2_w,gamma_rad,p_h_w\n");
    for (label, range_km) in [("min", lo_km), ("max", hi_km)] {
        let range_m = range_km * 1000.0;
        let geom = link_geometry(&params, range_m)?;
        for k in 0..=LINK_BUDGET_SIGMAS {
            let gamma = model.sigma_gamma_rad * k as f64 / 4.0;
            let b = harvested_power(&params, &geom, gamma);
            let _ = writeln!(
                budget,
                "{},{},{},{},{},{},{},{}",
                real(geom.range_m),
                real(geom.phi_rad),
                real(geom.d_t_m),
                real(geom.g_t),
                real(geom.g_r),
                real(b.c2_w),
                real(gamma),
                real(b.p_h_w)
            );
        }
        let dist = HarvestedPowerDistribution::from_geometry(&params, &geom, &model)?;
        let emp = monte_carlo_cdf(&params, &geom, &model, p.n_samples, p.seed)?;

        let mut csv = String::from("h_w,cdf_analytic,cdf_empirical,n,seed,sigma_rad,range_m\n");
        for h in cdf_table_levels(dist.c2_w, &p.checkpoints_w) {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{}",
                real(h),
                real(dist.cdf(h)),
                real(emp.eval(h)),
                p.n_samples,
                p.seed,
                real(model.sigma_gamma_rad),
                real(range_m)
            );
        }
        write_file(dir, &format!("power_cdf_{label}.csv"), &csv, &mut summary.outputs)?;

        for &h in &p.checkpoints_w {
            summary.cdf_checkpoints.push(CdfCheckpoint {
                label: label.into(),
                range_m,
                h_w: h,
                analytic: dist.cdf(h),
                empirical: emp.eval(h),
            });
        }
        summary.ks.push(KsResult {
            label: label.into(),
            range_m,
            n: p.n_samples,
            statistic: ks_statistic(&emp, &dist),
            critical_value: ks_critical_value(p.n_samples, 0.01),
        });
    }
    write_file(dir, "link_budget.csv", &budget, &mut summary.outputs)?;
    finish(dir, summary, started)
}
