//! Fraction of one halo period during which the far-side south pole is
//! fully covered, for one to three satellites.
//!
//! cargo run --release --example south_pole_rates

use farside::constellation::ConstellationSpec;
use farside::coverage::{coverage_timeline, LunarGrid, Region, TimeWindow};
use farside::ephemeris::Ephemeris;

fn main() -> farside::Result<()> {
    let eph = Ephemeris::default();
    let grid = LunarGrid::one_degree(eph.geometry.moon_radius_km)?;
    let window = TimeWindow::new(0.0, 192.0, 1.0)?;
    for n in 1..=3 {
        let spec = ConstellationSpec::halo(15_000.0, n);
        let tl = coverage_timeline(&eph, &grid, &spec, &Region::LfsSouthPole, &window)?;
        println!(
            "{n} satellite(s): {}/{} samples fully covered ({:.2}%)",
            tl.full_samples(),
            tl.samples.len(),
            100.0 * tl.full_coverage_rate
        );
    }
    Ok(())
}
