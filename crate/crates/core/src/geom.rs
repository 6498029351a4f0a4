//! Vectors, rotations and rigid transforms, plus the two geometric
//! predicates the simulator is built on: the angle between two vectors and
//! segment/sphere intersection.
//!
//! Angles are radians. Lengths are whatever the caller uses consistently
//! (kilometres everywhere in the geometry modules).

use nalgebra::{Translation3, Unit};

use crate::error::{Error, Result};

pub type Vector3 = nalgebra::Vector3<f64>;
pub type Rotation3 = nalgebra::Rotation3<f64>;

/// Rotation followed by translation, `p ↦ R·p + t`.
pub type AffineTransform = nalgebra::IsometryMatrix3<f64>;

const UNIT_AXIS_TOL: f64 = 1e-9;

/// Proper rotation by `angle` about `axis` (right-hand rule).
///
/// `axis` must already be a unit vector; a zero or non-normalised axis is
/// rejected rather than silently normalised.
pub fn rotation_about_axis(axis: &Vector3, angle: f64) -> Result<Rotation3> {
    let norm = axis.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > UNIT_AXIS_TOL {
        return Err(Error::invalid(format!(
            "rotation axis must be a unit vector, got norm {norm}"
        )));
    }
    if !angle.is_finite() {
        return Err(Error::invalid("rotation angle must be finite"));
    }
    Ok(Rotation3::from_axis_angle(&Unit::new_unchecked(*axis / norm), angle))
}

/// Angle in `[0, π]` between two nonzero vectors.
pub fn angle_between(u: &Vector3, v: &Vector3) -> Result<f64> {
    let nu = u.norm();
    let nv = v.norm();
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::invalid("angle_between needs nonzero vectors"));
    }
    let c = (u.dot(v) / (nu * nv)).clamp(-1.0, 1.0);
    Ok(c.acos())
}

/// Unit vector along `v`.
pub fn direction(v: &Vector3) -> Result<Vector3> {
    let n = v.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::invalid("cannot normalise a zero or non-finite vector"));
    }
    Ok(v / n)
}

/// Distance from `point` to the closest point of the closed segment `[a, b]`.
pub fn segment_point_distance(a: &Vector3, b: &Vector3, point: &Vector3) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (point - a).norm();
    }
    let s = ((point - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (a + ab * s - point).norm()
}

/// True iff the closed segment `[a, b]` passes within `radius` of `center`.
pub fn segment_intersects_sphere(a: &Vector3, b: &Vector3, center: &Vector3, radius: f64) -> bool {
    debug_assert!(radius > 0.0);
    segment_point_distance(a, b, center) <= radius
}

pub fn affine(rotation: Rotation3, translation: Vector3) -> AffineTransform {
    AffineTransform::from_parts(Translation3::from(translation), rotation)
}
