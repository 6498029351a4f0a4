//! Earth line of sight from halo satellites of several sizes.
//!
//! cargo run --release --example earth_visibility

use farside::constellation::ConstellationSpec;
use farside::coverage::{earth_visible, satellites_at};
use farside::ephemeris::Ephemeris;

fn main() -> farside::Result<()> {
    let eph = Ephemeris::default();
    let r = eph.geometry.moon_radius_km;

    for (label, spec) in [
        ("stable", ConstellationSpec::StableEmlp2),
        ("A_z 5000", ConstellationSpec::halo(5_000.0, 3)),
        ("A_z 10000", ConstellationSpec::halo(10_000.0, 3)),
        ("A_z 15000", ConstellationSpec::halo(15_000.0, 3)),
    ] {
        let mut trace = String::new();
        let mut hidden = 0;
        for t in 0..=192 {
            let (state, sats, _) = satellites_at(&eph, &spec, t as f64)?;
            let all = sats.iter().all(|p| earth_visible(p, &state, r));
            if !all {
                hidden += 1;
            }
            if t % 4 == 0 {
                trace.push(if all { '#' } else { '.' });
            }
        }
        println!("{label:>10} {trace}  hidden at {hidden}/193");
    }
    Ok(())
}
