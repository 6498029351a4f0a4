//! Satellite placement: a single spacecraft parked at EML2, or N spacecraft
//! phased evenly around a geometric halo ellipse.
//!
//! The halo is an ellipse centred on EML2 in the plane perpendicular to the
//! Earth–Moon line. Its out-of-plane semi-axis `A_z` runs along the lunar
//! orbit normal ẑ, its lateral semi-axis `A_y` along ŷ = ẑ × x̂, where x̂
//! points from the Earth to the Moon. Satellite k sits at phase
//! `θ_k = 2π t / period + offset_k`:
//!
//! ```text
//! p_k = EML2 + A_y sin θ_k ŷ + A_z cos θ_k ẑ
//! ```

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::ephemeris::{SimulationInstant, SystemState};
use crate::error::{Error, Result};
use crate::geom::Vector3;

/// `A_y / A_z` ratio that minimises station-keeping for an EML2 halo.
pub const LOW_STATIONKEEPING_AXIS_RATIO: f64 = 0.343;

/// Smallest lateral semi-axis that keeps the halo clear of lunar occultation
/// as seen from Earth.
pub const MIN_VISIBLE_SEMI_MINOR_KM: f64 = 3671.0;

pub const DEFAULT_HALO_PERIOD_H: f64 = 192.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaloOrbitSpec {
    /// Out-of-plane semi-axis, km.
    pub a_z_km: f64,
    /// Lateral semi-axis, km.
    pub a_y_km: f64,
    pub period_h: f64,
    /// One phase per satellite, rad.
    pub phase_offsets_rad: Vec<f64>,
}

impl HaloOrbitSpec {
    /// Halo with `A_y = 0.343 A_z`, the default period and `n` satellites
    /// phased `2π/n` apart.
    pub fn with_ratio(a_z_km: f64, n: usize) -> Self {
        Self {
            a_z_km,
            a_y_km: LOW_STATIONKEEPING_AXIS_RATIO * a_z_km,
            period_h: DEFAULT_HALO_PERIOD_H,
            phase_offsets_rad: equidistant_phases(n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a_z_km", self.a_z_km),
            ("a_y_km", self.a_y_km),
            ("period_h", self.period_h),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("halo {name} must be > 0, got {v}")));
            }
        }
        if self.phase_offsets_rad.is_empty() {
            return Err(Error::invalid("halo orbit needs at least one satellite phase"));
        }
        let wrapped: Vec<f64> = self.phase_offsets_rad.iter().map(|p| p.rem_euclid(TAU)).collect();
        for (i, a) in wrapped.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::invalid("halo phase offsets must be finite"));
            }
            for b in &wrapped[i + 1..] {
                let d = (a - b).abs();
                if d.min(TAU - d) < 1e-12 {
                    return Err(Error::invalid(format!(
                        "halo phase offsets must be distinct modulo 2π ({a} vs {b})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Phase of each satellite at `t_h`.
    pub fn phases_at(&self, t_h: f64) -> impl Iterator<Item = f64> + '_ {
        let base = TAU * t_h / self.period_h;
        self.phase_offsets_rad.iter().map(move |o| base + o)
    }
}

pub fn equidistant_phases(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstellationSpec {
    /// One satellite held at EML2.
    StableEmlp2,
    Halo {
        orbit: HaloOrbitSpec,
        num_satellites: usize,
    },
}

impl ConstellationSpec {
    pub fn halo(a_z_km: f64, n: usize) -> Self {
        ConstellationSpec::Halo {
            orbit: HaloOrbitSpec::with_ratio(a_z_km, n),
            num_satellites: n,
        }
    }

    pub fn num_satellites(&self) -> usize {
        match self {
            ConstellationSpec::StableEmlp2 => 1,
            ConstellationSpec::Halo { num_satellites, .. } => *num_satellites,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ConstellationSpec::StableEmlp2 => Ok(()),
            ConstellationSpec::Halo { orbit, num_satellites } => {
                if *num_satellites == 0 {
                    return Err(Error::invalid("halo constellation needs at least one satellite"));
                }
                if orbit.phase_offsets_rad.len() != *num_satellites {
                    return Err(Error::invalid(format!(
                        "{} satellites but {} phase offsets",
                        num_satellites,
                        orbit.phase_offsets_rad.len()
                    )));
                }
                orbit.validate()
            }
        }
    }
}

/// Inertial positions (km) of every satellite at `t`. `state` must be the
/// ephemeris state for the same instant.
pub fn satellite_positions(
    t: SimulationInstant,
    spec: &ConstellationSpec,
    state: &SystemState,
) -> Result<Vec<Vector3>> {
    spec.validate()?;
    match spec {
        ConstellationSpec::StableEmlp2 => Ok(vec![state.emlp2]),
        ConstellationSpec::Halo { orbit, .. } => {
            let (y_hat, z_hat) = halo_axes(state);
            Ok(orbit
                .phases_at(t.hours())
                .map(|th| state.emlp2 + y_hat * (orbit.a_y_km * th.sin()) + z_hat * (orbit.a_z_km * th.cos()))
                .collect())
        }
    }
}

/// In-plane lateral (ŷ) and out-of-plane (ẑ) unit axes of the halo ellipse.
pub fn halo_axes(state: &SystemState) -> (Vector3, Vector3) {
    let x_hat = state.earth_moon_axis();
    let z_hat = state.orbit_normal;
    (z_hat.cross(&x_hat), z_hat)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityConstraint {
    pub satisfied: bool,
    /// `A_y − 3671 km`; negative when violated.
    pub margin_km: f64,
}

/// Checks the halo's lateral semi-axis against the occultation clearance.
pub fn validate_visibility_constraint(spec: &HaloOrbitSpec) -> VisibilityConstraint {
    let margin_km = spec.a_y_km - MIN_VISIBLE_SEMI_MINOR_KM;
    VisibilityConstraint {
        satisfied: margin_km >= 0.0,
        margin_km,
    }
}
