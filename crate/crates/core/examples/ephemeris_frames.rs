//! Moon, EML2 and the Moon body frame over one lunar month.
//!
//! cargo run --example ephemeris_frames

use farside::ephemeris::Ephemeris;
use farside::geom::{angle_between, Vector3};

fn main() -> farside::Result<()> {
    let eph = Ephemeris::default();
    println!(
        "{:>6} {:>12} {:>12} {:>10} {:>12} {:>10}",
        "t_h", "moon_x", "moon_y", "moon_z", "|eml2|", "tilt_deg"
    );
    for t in (0..=648).step_by(81) {
        let s = eph.state_at(t as f64)?;
        let body_z = s.moon_body_frame * Vector3::z();
        let tilt = angle_between(&body_z, &Vector3::z())?.to_degrees();
        println!(
            "{:>6} {:>12.1} {:>12.1} {:>10.1} {:>12.1} {:>10.4}",
            t,
            s.moon_center.x,
            s.moon_center.y,
            s.moon_center.z,
            s.emlp2.norm(),
            tilt
        );
    }

    // the sub-Earth point stays at body longitude 0
    let s = eph.state_at(100.0)?;
    let earth_in_body = s.to_moon_body(&s.earth_center);
    println!(
        "\nEarth in Moon body frame at t=100 h: {:.3?}",
        earth_in_body.as_slice()
    );

    println!("\nground stations at t=6 h (km, inertial):");
    for (st, p) in eph.stations.iter().zip(&eph.state_at(6.0)?.ground_stations) {
        println!("  {:<10} {:>9.1} {:>9.1} {:>9.1}", st.name, p.x, p.y, p.z);
    }
    Ok(())
}
