//! Far-side surface coverage for the stable satellite and halo triples,
//! plus the grid-refinement check against the spherical-cap area.
//!
//! cargo run --release --example far_side_coverage

use farside::constellation::ConstellationSpec;
use farside::coverage::{
    central_angle_limit, coverage_snapshot, coverage_timeline, satellites_at, LunarGrid, Region, TimeWindow,
};
use farside::ephemeris::Ephemeris;

fn main() -> farside::Result<()> {
    let eph = Ephemeris::default();
    let r = eph.geometry.moon_radius_km;
    let stable = ConstellationSpec::StableEmlp2;

    let beta = central_angle_limit(eph.geometry.emlp2_moon_distance_km, r)?;
    let cap = 100.0 * (1.0 - beta.cos());
    println!(
        "stable satellite, beta = {:.4} deg, cap limit {:.4}%",
        beta.to_degrees(),
        cap
    );
    for step in [1.0, 0.5, 0.25] {
        let grid = LunarGrid::new(step, step, r)?;
        let (_, _, body) = satellites_at(&eph, &stable, 0.0)?;
        let snap = coverage_snapshot(&grid, &Region::Lfs, &body)?;
        println!("  {step:>4} deg grid: SCP {:.4}%", snap.scp_percent);
    }

    let grid = LunarGrid::one_degree(r)?;
    let window = TimeWindow::new(0.0, 192.0, 1.0)?;
    println!("\nthree halo satellites over one period:");
    for a_z in [5_000.0, 10_000.0, 15_000.0] {
        let tl = coverage_timeline(&eph, &grid, &ConstellationSpec::halo(a_z, 3), &Region::Lfs, &window)?;
        println!(
            "  A_z {a_z:>6.0} km: min SCP {:.3}%, full at {}/{} samples, LoS {:.0}..{:.0} km",
            tl.min_scp(),
            tl.full_samples(),
            tl.samples.len(),
            tl.min_los_km().unwrap_or(f64::NAN),
            tl.max_los_km().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
