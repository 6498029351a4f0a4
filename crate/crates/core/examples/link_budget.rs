//! Adaptive-divergence link budget: the aligned power does not depend on
//! range, the misalignment tolerance does.
//!
//! cargo run --example link_budget

use farside::link::{harvested_power, link_geometry, LinkParameters};

fn main() -> farside::Result<()> {
    let p = LinkParameters::default();
    println!("ceiling P_T eta_T eta_H (pi/4)^2 = {:.4} W\n", p.adaptive_ceiling_w());
    println!(
        "{:>12} {:>12} {:>9} {:>12} {:>10} {:>10}",
        "R_m", "phi_rad", "d_T_m", "G_T", "c2_W", "P_H(5nrad)"
    );
    for r in [1e3, 1e7, 62_762_600.0, 66_198_000.0, 1e8] {
        let g = link_geometry(&p, r)?;
        let b = harvested_power(&p, &g, 5e-9);
        println!(
            "{:>12.4e} {:>12.4e} {:>9.3} {:>12.4e} {:>10.4} {:>10.4}",
            r, g.phi_rad, g.d_t_m, g.g_t, b.c2_w, b.p_h_w
        );
    }
    Ok(())
}
