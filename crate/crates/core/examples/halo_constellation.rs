//! Halo ellipse geometry and the Earth-visibility design rule.
//!
//! cargo run --example halo_constellation

use farside::constellation::{
    halo_axes, satellite_positions, validate_visibility_constraint, ConstellationSpec, HaloOrbitSpec,
};
use farside::ephemeris::{Ephemeris, SimulationInstant};

fn main() -> farside::Result<()> {
    println!("{:>8} {:>8} {:>10} {:>8}", "A_z_km", "A_y_km", "margin_km", "ok");
    for a_z in [5_000.0, 10_000.0, 10_703.0, 15_000.0, 20_000.0] {
        let orbit = HaloOrbitSpec::with_ratio(a_z, 1);
        let c = validate_visibility_constraint(&orbit);
        println!(
            "{:>8.0} {:>8.0} {:>10.1} {:>8}",
            a_z, orbit.a_y_km, c.margin_km, c.satisfied
        );
    }

    let eph = Ephemeris::default();
    let spec = ConstellationSpec::halo(15_000.0, 3);
    println!("\nthree satellites, A_z = 15000 km, offsets from EML2 in (y, z) halo axes:");
    for t in [0.0, 32.0, 64.0, 96.0] {
        let state = eph.state_at(t)?;
        let (y, z) = halo_axes(&state);
        let sats = satellite_positions(SimulationInstant::new(t)?, &spec, &state)?;
        let offsets: Vec<String> = sats
            .iter()
            .map(|p| {
                let d = p - state.emlp2;
                format!("({:>8.1},{:>8.1})", d.dot(&y), d.dot(&z))
            })
            .collect();
        println!("t={t:>5} h  {}", offsets.join(" "));
    }
    Ok(())
}
