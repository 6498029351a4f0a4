//! Kinematic Earth–Moon–EML2 model sampled in time.
//!
//! The inertial frame is Earth-centred with the ecliptic as its x–y plane
//! and z toward ecliptic north. At `t = 0` the Moon sits at the ascending
//! node of its orbit, on the +x axis, and the Earth's prime meridian lies on
//! +x before the obliquity tilt is applied.
//!
//! Everything is built from a handful of rotations and translations:
//!
//! * the Moon moves on a circle of radius `lunar_orbit_radius_km` in a plane
//!   tilted `lunar_orbit_inclination_deg` about the node line;
//! * the Moon body frame is tidally locked, its +x axis always pointing at
//!   the Earth centre, and its +z axis is the lunar spin axis (ecliptic
//!   north tilted `lunar_obliquity_ecliptic_deg` toward the node) projected
//!   perpendicular to +x;
//! * EML2 is a fixed offset beyond the Moon along the Earth→Moon line;
//! * the Earth spins about an axis tilted by the obliquity, carrying the
//!   ground stations with it.

use std::f64::consts::TAU;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{affine, direction, rotation_about_axis, AffineTransform, Rotation3, Vector3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometricParameters {
    pub earth_radius_km: f64,
    pub moon_radius_km: f64,
    pub lunar_orbit_radius_km: f64,
    pub emlp2_moon_distance_km: f64,
    pub earth_obliquity_deg: f64,
    /// Obliquity of the lunar equator to its own orbit. Carried for
    /// completeness; the frame construction uses the ecliptic value.
    pub lunar_obliquity_deg: f64,
    pub lunar_obliquity_ecliptic_deg: f64,
    pub lunar_orbit_inclination_deg: f64,
}

impl Default for GeometricParameters {
    fn default() -> Self {
        Self {
            earth_radius_km: 6371.0,
            moon_radius_km: 1737.4,
            lunar_orbit_radius_km: 385_000.0,
            emlp2_moon_distance_km: 64_500.0,
            earth_obliquity_deg: 23.44,
            lunar_obliquity_deg: 6.68,
            lunar_obliquity_ecliptic_deg: 1.54,
            lunar_orbit_inclination_deg: 5.14,
        }
    }
}

impl GeometricParameters {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("earth_radius_km", self.earth_radius_km),
            ("moon_radius_km", self.moon_radius_km),
            ("lunar_orbit_radius_km", self.lunar_orbit_radius_km),
            ("emlp2_moon_distance_km", self.emlp2_moon_distance_km),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(name, format!("must be > 0, got {v}")));
            }
        }
        let tilts = [
            ("earth_obliquity_deg", self.earth_obliquity_deg),
            ("lunar_obliquity_deg", self.lunar_obliquity_deg),
            ("lunar_obliquity_ecliptic_deg", self.lunar_obliquity_ecliptic_deg),
            ("lunar_orbit_inclination_deg", self.lunar_orbit_inclination_deg),
        ];
        for (name, v) in tilts {
            if !(0.0..90.0).contains(&v) {
                return Err(Error::config(name, format!("must be in [0, 90), got {v}")));
            }
        }
        if self.emlp2_moon_distance_km <= self.moon_radius_km {
            return Err(Error::config(
                "emlp2_moon_distance_km",
                "EML2 must lie above the lunar surface",
            ));
        }
        Ok(())
    }

    /// Unit normal of the lunar orbital plane (node line on +x).
    pub fn lunar_orbit_normal(&self) -> Vector3 {
        let i = self.lunar_orbit_inclination_deg.to_radians();
        Vector3::new(0.0, -i.sin(), i.cos())
    }

    /// Lunar spin axis in the inertial frame.
    pub fn lunar_spin_axis(&self) -> Vector3 {
        let o = self.lunar_obliquity_ecliptic_deg.to_radians();
        Vector3::new(o.sin(), 0.0, o.cos())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TemporalParameters {
    pub earth_rotation_period_h: f64,
    pub moon_period_h: f64,
    pub halo_period_h: f64,
    pub sim_duration_h: f64,
    pub sample_step_h: f64,
}

impl Default for TemporalParameters {
    fn default() -> Self {
        Self {
            earth_rotation_period_h: 24.0,
            moon_period_h: 648.0,
            halo_period_h: 192.0,
            sim_duration_h: 648.0,
            sample_step_h: 1.0,
        }
    }
}

impl TemporalParameters {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("earth_rotation_period_h", self.earth_rotation_period_h),
            ("moon_period_h", self.moon_period_h),
            ("halo_period_h", self.halo_period_h),
            ("sim_duration_h", self.sim_duration_h),
            ("sample_step_h", self.sample_step_h),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(name, format!("must be > 0, got {v}")));
            }
        }
        if self.sample_step_h > self.sim_duration_h {
            return Err(Error::config(
                "sample_step_h",
                "sampling step exceeds the simulated duration",
            ));
        }
        Ok(())
    }

    /// Mean motion of the Moon, rad/h. 360°/648 h, not the rounded 0.56°/h.
    pub fn moon_rate_rad_per_h(&self) -> f64 {
        TAU / self.moon_period_h
    }

    pub fn earth_rate_rad_per_h(&self) -> f64 {
        TAU / self.earth_rotation_period_h
    }
}

/// Hours since the model epoch.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SimulationInstant(f64);

impl SimulationInstant {
    pub fn new(t_h: f64) -> Result<Self> {
        if !(t_h.is_finite() && t_h >= 0.0) {
            return Err(Error::invalid(format!("simulation time must be >= 0 h, got {t_h}")));
        }
        Ok(Self(t_h))
    }

    pub fn hours(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundStation {
    pub name: String,
    pub lat_deg: f64,
    pub lon_deg: f64,
}

impl GroundStation {
    pub fn new(name: &str, lat_deg: f64, lon_deg: f64) -> Self {
        Self {
            name: name.to_owned(),
            lat_deg,
            lon_deg,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(-90.0..=90.0).contains(&self.lat_deg) {
            return Err(Error::invalid(format!(
                "station `{}` latitude {} outside [-90, 90]",
                self.name, self.lat_deg
            )));
        }
        if !(-180.0..=180.0).contains(&self.lon_deg) {
            return Err(Error::invalid(format!(
                "station `{}` longitude {} outside [-180, 180]",
                self.name, self.lon_deg
            )));
        }
        Ok(())
    }
}

/// Approximate locations of the three deep-space network complexes.
pub fn default_ground_stations() -> Vec<GroundStation> {
    vec![
        GroundStation::new("goldstone", 35.4, -116.9),
        GroundStation::new("madrid", 40.4, -4.2),
        GroundStation::new("canberra", -35.4, 149.0),
    ]
}

/// Positions and frames of every body at one instant, inertial frame, km.
#[derive(Debug, Clone)]
pub struct SystemState {
    pub t_h: f64,
    pub earth_center: Vector3,
    pub moon_center: Vector3,
    /// Moon body frame → inertial.
    pub moon_body_frame: Rotation3,
    pub emlp2: Vector3,
    /// Earth-fixed frame → inertial.
    pub earth_spin_frame: Rotation3,
    pub ground_stations: Vec<Vector3>,
    /// Unit normal of the lunar orbital plane.
    pub orbit_normal: Vector3,
}

impl SystemState {
    /// Unit vector from the Earth centre toward the Moon centre.
    pub fn earth_moon_axis(&self) -> Vector3 {
        (self.moon_center - self.earth_center).normalize()
    }

    /// Moon body frame → inertial, as a rigid transform.
    pub fn moon_body_transform(&self) -> AffineTransform {
        affine(self.moon_body_frame, self.moon_center)
    }

    /// Express an inertial position in the Moon body frame.
    pub fn to_moon_body(&self, p: &Vector3) -> Vector3 {
        self.moon_body_frame.inverse() * (p - self.moon_center)
    }
}

/// State of the Earth–Moon–EML2 system at `t`, without ground stations.
pub fn system_state(t: SimulationInstant, geo: &GeometricParameters, tem: &TemporalParameters) -> Result<SystemState> {
    geo.validate()?;
    tem.validate()?;
    let t_h = t.hours();

    let incl = geo.lunar_orbit_inclination_deg.to_radians();
    let alpha = tem.moon_rate_rad_per_h() * t_h;
    // circle in the ecliptic rotated about the node line (+x) by the inclination
    let in_plane = Vector3::new(alpha.cos(), alpha.sin(), 0.0);
    let orbit_tilt = rotation_about_axis(&Vector3::x(), incl)?;
    let moon_dir = orbit_tilt * in_plane;
    let moon_center = moon_dir * geo.lunar_orbit_radius_km;

    let body_x = -moon_dir;
    let spin = geo.lunar_spin_axis();
    let body_z = direction(&(spin - body_x * spin.dot(&body_x)))?;
    let body_y = body_z.cross(&body_x);
    let moon_body_frame = Rotation3::from_matrix_unchecked(Matrix3::from_columns(&[body_x, body_y, body_z]));

    let emlp2 = moon_center + moon_dir * geo.emlp2_moon_distance_km;

    Ok(SystemState {
        t_h,
        earth_center: Vector3::zeros(),
        moon_center,
        moon_body_frame,
        emlp2,
        earth_spin_frame: earth_spin_frame(t_h, geo, tem)?,
        ground_stations: Vec::new(),
        orbit_normal: orbit_tilt * Vector3::z(),
    })
}

fn earth_spin_frame(t_h: f64, geo: &GeometricParameters, tem: &TemporalParameters) -> Result<Rotation3> {
    let tilt = rotation_about_axis(&Vector3::x(), geo.earth_obliquity_deg.to_radians())?;
    let spin = rotation_about_axis(&Vector3::z(), tem.earth_rate_rad_per_h() * t_h)?;
    Ok(tilt * spin)
}

/// Inertial positions of ground stations at `t`.
pub fn ground_station_positions(
    t: SimulationInstant,
    geo: &GeometricParameters,
    tem: &TemporalParameters,
    stations: &[GroundStation],
) -> Result<Vec<Vector3>> {
    let frame = earth_spin_frame(t.hours(), geo, tem)?;
    stations
        .iter()
        .map(|s| {
            s.validate()?;
            Ok(frame * earth_fixed_position(s, geo.earth_radius_km))
        })
        .collect()
}

fn earth_fixed_position(s: &GroundStation, radius_km: f64) -> Vector3 {
    let (lat, lon) = (s.lat_deg.to_radians(), s.lon_deg.to_radians());
    Vector3::new(lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()) * radius_km
}

/// Bundles the model parameters and ground stations so callers can ask for
/// full states by time alone.
#[derive(Debug, Clone)]
pub struct Ephemeris {
    pub geometry: GeometricParameters,
    pub timing: TemporalParameters,
    pub stations: Vec<GroundStation>,
}

impl Ephemeris {
    pub fn new(
        geometry: GeometricParameters,
        timing: TemporalParameters,
        stations: Vec<GroundStation>,
    ) -> Result<Self> {
        geometry.validate()?;
        timing.validate()?;
        for s in &stations {
            s.validate()?;
        }
        Ok(Self {
            geometry,
            timing,
            stations,
        })
    }

    pub fn state_at(&self, t_h: f64) -> Result<SystemState> {
        let t = SimulationInstant::new(t_h)?;
        let mut state = system_state(t, &self.geometry, &self.timing)?;
        state.ground_stations = ground_station_positions(t, &self.geometry, &self.timing, &self.stations)?;
        Ok(state)
    }
}

impl Default for Ephemeris {
    fn default() -> Self {
        Self {
            geometry: GeometricParameters::default(),
            timing: TemporalParameters::default(),
            stations: default_ground_stations(),
        }
    }
}
