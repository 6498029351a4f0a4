//! Grid-point coverage of the lunar surface, Earth visibility and the
//! time-rate statistics built on them.
//!
//! The surface is sampled on a regular latitude/longitude grid in the Moon
//! body frame (longitude 0° is the sub-Earth meridian). Cell centres sit at
//! half-step offsets, so a 1° grid has latitudes −89.5°, …, 89.5°. A cell is
//! covered by a satellite when the central angle between the cell and the
//! sub-satellite point is strictly below
//!
//! ```text
//! β = π/2 − asin(r_M / |MS|)
//! ```
//!
//! i.e. the satellite is above the cell's horizon. The surface coverage
//! percentage of a region is the `cos θ`-weighted fraction of its cells that
//! are covered by at least one satellite.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constellation::{satellite_positions, ConstellationSpec};
use crate::ephemeris::{Ephemeris, SimulationInstant, SystemState};
use crate::error::{Error, Result};
use crate::geom::{angle_between, segment_intersects_sphere, Vector3};

/// Surface region over which coverage is scored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Region {
    /// Lunar far side, |longitude| ≥ 90°.
    Lfs,
    /// Far side south of −80° latitude.
    LfsSouthPole,
    /// Latitude/longitude box in degrees. Longitudes wrap when
    /// `lon_min_deg > lon_max_deg`.
    Box {
        lat_min_deg: f64,
        lat_max_deg: f64,
        lon_min_deg: f64,
        lon_max_deg: f64,
    },
}

impl Region {
    pub fn contains(&self, cell: &GridCell) -> bool {
        match *self {
            Region::Lfs => cell.far_side,
            Region::LfsSouthPole => cell.far_side_south_pole,
            Region::Box {
                lat_min_deg,
                lat_max_deg,
                lon_min_deg,
                lon_max_deg,
            } => {
                let lat = cell.lat_rad.to_degrees();
                let lon = cell.lon_rad.to_degrees();
                let lon_ok = if lon_min_deg <= lon_max_deg {
                    (lon_min_deg..=lon_max_deg).contains(&lon)
                } else {
                    lon >= lon_min_deg || lon <= lon_max_deg
                };
                (lat_min_deg..=lat_max_deg).contains(&lat) && lon_ok
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Region::Box {
            lat_min_deg,
            lat_max_deg,
            lon_min_deg,
            lon_max_deg,
        } = *self
        {
            if !(-90.0..=90.0).contains(&lat_min_deg)
                || !(-90.0..=90.0).contains(&lat_max_deg)
                || lat_min_deg > lat_max_deg
            {
                return Err(Error::invalid(
                    "region box latitudes must satisfy -90 <= min <= max <= 90",
                ));
            }
            if !(-180.0..=180.0).contains(&lon_min_deg) || !(-180.0..=180.0).contains(&lon_max_deg) {
                return Err(Error::invalid("region box longitudes must lie in [-180, 180]"));
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self {
            Region::Lfs => "lfs".into(),
            Region::LfsSouthPole => "lfs_south_pole".into(),
            Region::Box {
                lat_min_deg,
                lat_max_deg,
                lon_min_deg,
                lon_max_deg,
            } => format!("box[{lat_min_deg},{lat_max_deg}]x[{lon_min_deg},{lon_max_deg}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub lat_rad: f64,
    pub lon_rad: f64,
    /// Body-frame position on the lunar sphere, km.
    pub surface_point: Vector3,
    /// `r_M² cos θ Δθ Δφ`, km².
    pub weight: f64,
    pub far_side: bool,
    pub far_side_south_pole: bool,
}

#[derive(Debug, Clone)]
pub struct LunarGrid {
    pub cells: Vec<GridCell>,
    pub d_theta_rad: f64,
    pub d_phi_rad: f64,
    pub moon_radius_km: f64,
}

impl LunarGrid {
    /// Grid with the given latitude and longitude spacing in degrees. Both
    /// spacings must divide their range (180° and 360°) evenly.
    pub fn new(d_theta_deg: f64, d_phi_deg: f64, moon_radius_km: f64) -> Result<Self> {
        let rows = whole_divisions(180.0, d_theta_deg)?;
        let cols = whole_divisions(360.0, d_phi_deg)?;
        if !(moon_radius_km.is_finite() && moon_radius_km > 0.0) {
            return Err(Error::invalid("moon radius must be > 0"));
        }
        let d_theta = d_theta_deg.to_radians();
        let d_phi = d_phi_deg.to_radians();
        let r2 = moon_radius_km * moon_radius_km;

        let mut cells = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            let lat_deg = -90.0 + d_theta_deg * (i as f64 + 0.5);
            let lat = lat_deg.to_radians();
            for j in 0..cols {
                let lon_deg = -180.0 + d_phi_deg * (j as f64 + 0.5);
                let lon = lon_deg.to_radians();
                let far_side = lon_deg.abs() >= 90.0;
                cells.push(GridCell {
                    lat_rad: lat,
                    lon_rad: lon,
                    surface_point: Vector3::new(lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin())
                        * moon_radius_km,
                    weight: r2 * lat.cos() * d_theta * d_phi,
                    far_side,
                    far_side_south_pole: far_side && lat_deg > -90.0 && lat_deg < -80.0,
                });
            }
        }
        Ok(Self {
            cells,
            d_theta_rad: d_theta,
            d_phi_rad: d_phi,
            moon_radius_km,
        })
    }

    pub fn one_degree(moon_radius_km: f64) -> Result<Self> {
        Self::new(1.0, 1.0, moon_radius_km)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn region_mask(&self, region: &Region) -> Vec<bool> {
        self.cells.iter().map(|c| region.contains(c)).collect()
    }
}

fn whole_divisions(range: f64, step: f64) -> Result<usize> {
    if !(step.is_finite() && step > 0.0 && step <= range) {
        return Err(Error::invalid(format!("grid step must be in (0, {range}], got {step}")));
    }
    let n = (range / step).round();
    if ((n * step) - range).abs() > 1e-9 * range {
        return Err(Error::invalid(format!("grid step {step}° does not divide {range}°")));
    }
    Ok(n as usize)
}

/// Largest central angle β (rad) a satellite at `sat_distance_km` from the
/// Moon centre can see down to a 0° elevation horizon.
pub fn central_angle_limit(sat_distance_km: f64, moon_radius_km: f64) -> Result<f64> {
    if moon_radius_km.is_nan() || moon_radius_km <= 0.0 {
        return Err(Error::invalid("moon radius must be > 0"));
    }
    if sat_distance_km.is_nan() || sat_distance_km <= moon_radius_km {
        return Err(Error::invalid(format!(
            "satellite at {sat_distance_km} km is not above the {moon_radius_km} km surface"
        )));
    }
    let nadir = (moon_radius_km / sat_distance_km).asin();
    Ok(FRAC_PI_2 - nadir)
}

/// Strict `angle(MP, MS) < β` test, both vectors in the Moon body frame.
pub fn cell_covered(cell: &GridCell, sat_pos_body: &Vector3, beta: f64) -> bool {
    angle_between(&cell.surface_point, sat_pos_body).is_ok_and(|a| a < beta)
}

/// Weighted coverage percentage of `region`. `covered` is indexed like the
/// grid cells.
pub fn scp(grid: &LunarGrid, region: &Region, covered: &[bool]) -> Result<f64> {
    if covered.len() != grid.len() {
        return Err(Error::invalid(format!(
            "coverage flags ({}) do not match grid size ({})",
            covered.len(),
            grid.len()
        )));
    }
    let (mut hit, mut total) = (0.0, 0.0);
    for (cell, &c) in grid.cells.iter().zip(covered) {
        if region.contains(cell) {
            total += cell.weight;
            if c {
                hit += cell.weight;
            }
        }
    }
    if total == 0.0 {
        return Err(Error::invalid(format!(
            "region {} contains no grid cells",
            region.label()
        )));
    }
    Ok(100.0 * hit / total)
}

/// True iff the line from the satellite to the Earth centre clears the Moon.
pub fn earth_visible(sat_pos: &Vector3, state: &SystemState, moon_radius_km: f64) -> bool {
    !segment_intersects_sphere(sat_pos, &state.earth_center, &state.moon_center, moon_radius_km)
}

/// True iff the satellite is above the station's horizon and the line
/// between them clears the Moon.
pub fn station_visible(sat_pos: &Vector3, station: &Vector3, state: &SystemState, moon_radius_km: f64) -> bool {
    let up = station - state.earth_center;
    let above_horizon = (sat_pos - station).dot(&up) > 0.0;
    above_horizon && !segment_intersects_sphere(sat_pos, station, &state.moon_center, moon_radius_km)
}

#[derive(Debug, Clone)]
pub struct CoverageResult {
    /// Union coverage ζ_i, indexed like the grid.
    pub covered: Vec<bool>,
    pub scp_percent: f64,
    /// Every region cell covered.
    pub full: bool,
    pub per_satellite_covered: Vec<Vec<bool>>,
    /// Satellite → covered region cell distance extremes, km.
    pub min_los_km: Option<f64>,
    pub max_los_km: Option<f64>,
}

impl CoverageResult {
    /// Lowest-index satellite covering each cell, if any.
    pub fn first_covering_satellite(&self, cell: usize) -> Option<usize> {
        self.per_satellite_covered.iter().position(|c| c[cell])
    }
}

/// Union flag, per-satellite flags and LoS extremes for one cell.
type CellOutcome = (bool, Vec<bool>, Option<(f64, f64)>);

/// Coverage of `region` by satellites given in Moon body coordinates.
pub fn coverage_snapshot(grid: &LunarGrid, region: &Region, sats_body: &[Vector3]) -> Result<CoverageResult> {
    let betas = sats_body
        .iter()
        .map(|s| central_angle_limit(s.norm(), grid.moon_radius_km))
        .collect::<Result<Vec<_>>>()?;

    let per_cell: Vec<CellOutcome> = grid
        .cells
        .par_iter()
        .map(|cell| {
            let flags: Vec<bool> = sats_body
                .iter()
                .zip(&betas)
                .map(|(s, &b)| cell_covered(cell, s, b))
                .collect();
            let any = flags.iter().any(|&f| f);
            let los = if any && region.contains(cell) {
                sats_body
                    .iter()
                    .zip(&flags)
                    .filter(|(_, &f)| f)
                    .map(|(s, _)| (s - cell.surface_point).norm())
                    .fold(None, |acc: Option<(f64, f64)>, d| match acc {
                        None => Some((d, d)),
                        Some((lo, hi)) => Some((lo.min(d), hi.max(d))),
                    })
            } else {
                None
            };
            (any, flags, los)
        })
        .collect();

    let mut covered = Vec::with_capacity(grid.len());
    let mut per_satellite_covered = vec![Vec::with_capacity(grid.len()); sats_body.len()];
    let mut min_los: Option<f64> = None;
    let mut max_los: Option<f64> = None;
    for (any, flags, los) in per_cell {
        covered.push(any);
        for (k, f) in flags.into_iter().enumerate() {
            per_satellite_covered[k].push(f);
        }
        if let Some((lo, hi)) = los {
            min_los = Some(min_los.map_or(lo, |m| m.min(lo)));
            max_los = Some(max_los.map_or(hi, |m| m.max(hi)));
        }
    }

    let scp_percent = scp(grid, region, &covered)?;
    let full = grid
        .cells
        .iter()
        .zip(&covered)
        .all(|(cell, &c)| c || !region.contains(cell));
    Ok(CoverageResult {
        covered,
        scp_percent,
        full,
        per_satellite_covered,
        min_los_km: min_los,
        max_los_km: max_los,
    })
}

/// Inclusive sampling window, hours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeWindow {
    pub start_h: f64,
    pub end_h: f64,
    pub step_h: f64,
}

impl TimeWindow {
    pub fn new(start_h: f64, end_h: f64, step_h: f64) -> Result<Self> {
        let w = Self { start_h, end_h, step_h };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start_h.is_finite() && self.start_h >= 0.0) {
            return Err(Error::invalid("window start must be >= 0 h"));
        }
        if !(self.end_h.is_finite() && self.end_h >= self.start_h) {
            return Err(Error::invalid("window end must be >= start"));
        }
        if !(self.step_h.is_finite() && self.step_h > 0.0) {
            return Err(Error::invalid("window step must be > 0 h"));
        }
        Ok(())
    }

    /// `start, start + step, …` up to and including `end`.
    pub fn sample_times(&self) -> Vec<f64> {
        let n = ((self.end_h - self.start_h) / self.step_h + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start_h + i as f64 * self.step_h).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageSample {
    pub t_h: f64,
    pub scp_percent: f64,
    pub full: bool,
    /// Per satellite: line to the Earth centre clears the Moon.
    pub earth_visible: Vec<bool>,
    /// Per satellite: at least one ground station sees it.
    pub station_visible: Vec<bool>,
    pub min_los_km: Option<f64>,
    pub max_los_km: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CoverageTimeline {
    pub region: Region,
    pub samples: Vec<CoverageSample>,
    /// Fraction of samples with the region fully covered.
    pub full_coverage_rate: f64,
}

impl CoverageTimeline {
    pub fn min_scp(&self) -> f64 {
        self.samples.iter().map(|s| s.scp_percent).fold(f64::INFINITY, f64::min)
    }

    pub fn max_scp(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.scp_percent)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// First sample attaining the minimum SCP.
    pub fn min_scp_sample(&self) -> Option<&CoverageSample> {
        let min = self.min_scp();
        self.samples.iter().find(|s| s.scp_percent == min)
    }

    pub fn min_los_km(&self) -> Option<f64> {
        self.samples.iter().filter_map(|s| s.min_los_km).reduce(f64::min)
    }

    pub fn max_los_km(&self) -> Option<f64> {
        self.samples.iter().filter_map(|s| s.max_los_km).reduce(f64::max)
    }

    /// Fraction of samples at which satellite `k` sees the Earth centre.
    pub fn visibility_fraction(&self, k: usize) -> f64 {
        let n = self.samples.iter().filter(|s| s.earth_visible[k]).count();
        n as f64 / self.samples.len() as f64
    }

    pub fn all_visible(&self) -> bool {
        self.samples.iter().all(|s| s.earth_visible.iter().all(|&v| v))
    }

    pub fn full_samples(&self) -> usize {
        self.samples.iter().filter(|s| s.full).count()
    }
}

/// Satellite positions in the Moon body frame at `t_h`, together with the
/// inertial positions and the system state they came from.
pub fn satellites_at(
    ephemeris: &Ephemeris,
    spec: &ConstellationSpec,
    t_h: f64,
) -> Result<(SystemState, Vec<Vector3>, Vec<Vector3>)> {
    let state = ephemeris.state_at(t_h)?;
    let inertial = satellite_positions(SimulationInstant::new(t_h)?, spec, &state)?;
    let body = inertial.iter().map(|p| state.to_moon_body(p)).collect();
    Ok((state, inertial, body))
}

/// Coverage, visibility and LoS extremes at every sample of `window`.
pub fn coverage_timeline(
    ephemeris: &Ephemeris,
    grid: &LunarGrid,
    spec: &ConstellationSpec,
    region: &Region,
    window: &TimeWindow,
) -> Result<CoverageTimeline> {
    spec.validate()?;
    region.validate()?;
    window.validate()?;
    let r_m = ephemeris.geometry.moon_radius_km;

    let samples = window
        .sample_times()
        .into_par_iter()
        .map(|t_h| {
            let (state, inertial, body) = satellites_at(ephemeris, spec, t_h)?;
            let cov = coverage_snapshot(grid, region, &body)?;
            let earth_visible = inertial.iter().map(|p| earth_visible(p, &state, r_m)).collect();
            let station_visible = inertial
                .iter()
                .map(|p| state.ground_stations.iter().any(|g| station_visible(p, g, &state, r_m)))
                .collect();
            Ok(CoverageSample {
                t_h,
                scp_percent: cov.scp_percent,
                full: cov.full,
                earth_visible,
                station_visible,
                min_los_km: cov.min_los_km,
                max_los_km: cov.max_los_km,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let full = samples.iter().filter(|s| s.full).count();
    Ok(CoverageTimeline {
        region: *region,
        full_coverage_rate: full as f64 / samples.len() as f64,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const R_M: f64 = 1737.4;

    #[test]
    fn central_angle_examples() {
        let b = central_angle_limit(64_500.0, R_M).unwrap();
        assert!((b - (FRAC_PI_2 - (R_M / 64_500.0).asin())).abs() < 1e-15);
        assert!((b.to_degrees() - 88.4564).abs() < 1e-4);
        assert!(((FRAC_PI_2 - b).to_degrees() - 1.5436).abs() < 1e-4);
        let b = central_angle_limit(2.0 * R_M, R_M).unwrap();
        assert!((b.to_degrees() - 60.0).abs() < 1e-12);
        let b = central_angle_limit(1e15, R_M).unwrap();
        assert!((b - FRAC_PI_2).abs() < 1e-11);
        assert!(central_angle_limit(R_M, R_M).is_err());
        assert!(central_angle_limit(10.0, R_M).is_err());
    }

    fn cell_at(lat_deg: f64, lon_deg: f64) -> GridCell {
        let (lat, lon) = (lat_deg.to_radians(), lon_deg.to_radians());
        GridCell {
            lat_rad: lat,
            lon_rad: lon,
            surface_point: Vector3::new(lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()) * R_M,
            weight: 1.0,
            far_side: lon_deg.abs() >= 90.0,
            far_side_south_pole: false,
        }
    }

    #[test]
    fn cell_coverage_examples() {
        let sat = Vector3::new(-64_500.0, 0.0, 0.0);
        let beta = central_angle_limit(64_500.0, R_M).unwrap();
        assert!(cell_covered(&cell_at(0.0, 180.0), &sat, beta));
        assert!(!cell_covered(&cell_at(0.0, 0.0), &sat, beta));
        // 89° and 88° away from the sub-satellite point at lon 180°
        assert!(!cell_covered(&cell_at(0.0, 91.0), &sat, beta));
        assert!(cell_covered(&cell_at(0.0, 92.0), &sat, beta));
    }

    #[test]
    fn boundary_cell_is_not_covered() {
        let sat = Vector3::new(-2.0 * R_M, 0.0, 0.0);
        let beta = central_angle_limit(2.0 * R_M, R_M).unwrap();
        let cell = cell_at(0.0, 180.0);
        let exact = angle_between(&cell.surface_point, &sat).unwrap();
        assert!(!cell_covered(&cell, &sat, exact));
        assert!(cell_covered(&cell, &sat, beta));
    }

    #[test]
    fn grid_layout() {
        let g = LunarGrid::one_degree(R_M).unwrap();
        assert_eq!(g.len(), 180 * 360);
        let first = g.cells[0];
        assert!((first.lat_rad.to_degrees() + 89.5).abs() < 1e-12);
        assert!((first.lon_rad.to_degrees() + 179.5).abs() < 1e-12);
        assert!(g.cells.iter().all(|c| c.weight > 0.0));
        assert!(g.cells.iter().all(|c| (c.surface_point.norm() - R_M).abs() < 1e-9));
        let sp = g.cells.iter().filter(|c| c.far_side_south_pole).count();
        assert_eq!(sp, 10 * 180);
        let fs = g.cells.iter().filter(|c| c.far_side).count();
        assert_eq!(fs, 180 * 180);
        assert!(LunarGrid::new(0.7, 1.0, R_M).is_err());
    }

    #[test]
    fn grid_weights_sum_to_sphere_area() {
        let g = LunarGrid::one_degree(R_M).unwrap();
        let total: f64 = g.cells.iter().map(|c| c.weight).sum();
        let area = 4.0 * std::f64::consts::PI * R_M * R_M;
        assert!(((total - area) / area).abs() < 1e-4);
    }

    #[test]
    fn scp_extremes_and_errors() {
        let g = LunarGrid::new(10.0, 10.0, R_M).unwrap();
        assert_eq!(scp(&g, &Region::Lfs, &vec![true; g.len()]).unwrap(), 100.0);
        assert_eq!(scp(&g, &Region::Lfs, &vec![false; g.len()]).unwrap(), 0.0);
        assert!(scp(&g, &Region::Lfs, &[true]).is_err());
        let empty = Region::Box {
            lat_min_deg: 1.0,
            lat_max_deg: 2.0,
            lon_min_deg: 1.0,
            lon_max_deg: 2.0,
        };
        assert!(scp(&g, &empty, &vec![true; g.len()]).is_err());
    }

    #[test]
    fn box_region_wraps_longitude() {
        let r = Region::Box {
            lat_min_deg: -10.0,
            lat_max_deg: 10.0,
            lon_min_deg: 170.0,
            lon_max_deg: -170.0,
        };
        assert!(r.contains(&cell_at(0.0, 179.5)));
        assert!(r.contains(&cell_at(0.0, -175.0)));
        assert!(!r.contains(&cell_at(0.0, 0.0)));
    }

    #[test]
    fn window_is_inclusive() {
        let w = TimeWindow::new(0.0, 192.0, 1.0).unwrap();
        let t = w.sample_times();
        assert_eq!(t.len(), 193);
        assert_eq!(*t.last().unwrap(), 192.0);
        assert_eq!(TimeWindow::new(5.0, 5.0, 1.0).unwrap().sample_times(), vec![5.0]);
        assert!(TimeWindow::new(5.0, 4.0, 1.0).is_err());
        assert!(TimeWindow::new(0.0, 4.0, 0.0).is_err());
    }

    #[test]
    fn visibility_of_halo_points() {
        let eph = Ephemeris::default();
        let state = eph.state_at(0.0).unwrap();
        // EML2 itself is behind the Moon
        assert!(!earth_visible(&state.emlp2, &state, R_M));
        let wide = state.emlp2 + Vector3::new(0.0, 5145.0, 0.0);
        assert!(earth_visible(&wide, &state, R_M));
        let narrow = state.emlp2 + Vector3::new(0.0, 1715.0, 0.0);
        let miss = crate::geom::segment_point_distance(&narrow, &state.earth_center, &state.moon_center);
        assert!((miss - 1715.0 * 385_000.0 / 449_500.0_f64.hypot(1715.0)).abs() < 1e-6);
        assert!((miss - 1469.0).abs() < 1.0);
        assert!(!earth_visible(&narrow, &state, R_M));
    }
}
