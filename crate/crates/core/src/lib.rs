//! Laser power beaming from Earth–Moon L2 to the lunar far side.
//!
//! The crate models a solar-powered relay constellation at EML2, either one
//! spacecraft parked at the libration point or several phased around a halo
//! ellipse, and answers three questions about it:
//!
//! * how much of the far side (or of a sub-region such as the south pole) is
//!   in view at each hour, and for what fraction of the halo period the
//!   region is fully covered ([`coverage`]);
//! * whether every satellite keeps a line of sight to the Earth ([`coverage::earth_visible`]);
//! * what power a far-side receiver harvests once transmitter pointing
//!   jitter is accounted for ([`link`], [`pointing`]).
//!
//! [`scenario`] ties these together behind a TOML config and a registry of
//! builtin scenarios; the `farside` binary is a thin CLI over it.
//!
//! Geometry is in kilometres and radians; the optical link works in metres.

pub mod constellation;
pub mod coverage;
pub mod ephemeris;
pub mod error;
pub mod geom;
pub mod link;
pub mod pointing;
pub mod scenario;

pub use error::{Error, Result};
