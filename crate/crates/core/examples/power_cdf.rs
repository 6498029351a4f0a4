//! Closed-form harvested-power CDF against seeded Monte Carlo draws, for a
//! steady and a jittery transmitter.
//!
//! cargo run --release --example power_cdf

use farside::link::{link_geometry, LinkParameters};
use farside::pointing::{ks_statistic, monte_carlo_cdf, HarvestedPowerDistribution, PointingErrorModel};

fn main() -> farside::Result<()> {
    let params = LinkParameters::default();
    let geom = link_geometry(&params, 62_762_600.0)?;
    let n = 100_000;

    for (label, model) in [
        ("stable", PointingErrorModel::stable()),
        ("revolving", PointingErrorModel::revolving()),
    ] {
        let dist = HarvestedPowerDistribution::from_geometry(&params, &geom, &model)?;
        let emp = monte_carlo_cdf(&params, &geom, &model, n, 7)?;
        println!(
            "{label}: sigma {:.0e} rad, shape {:.6}, median {:.3e} W, KS {:.5}",
            model.sigma_gamma_rad,
            dist.shape(),
            emp.median_w(),
            ks_statistic(&emp, &dist)
        );
        for h in [1.6, 41.6, 100.0, 159.0] {
            println!("  F({h:>5}) analytic {:.4}  empirical {:.4}", dist.cdf(h), emp.eval(h));
        }
    }
    Ok(())
}
