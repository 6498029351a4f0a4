//! Parse a TOML scenario, validate it, run it, and read back the summary.
//!
//! cargo run --release --example scenario_config

use farside::scenario::{run_coverage, validate, ScenarioConfig};

const CONFIG: &str = r#"
name = "example-2sat"
region = "lfs_south_pole"

[constellation]
kind = "halo"
a_z_km = 15000.0
num_satellites = 2

[window]
start_h = 0.0
end_h = 48.0
step_h = 2.0
"#;

fn main() -> farside::Result<()> {
    let cfg = ScenarioConfig::from_toml(CONFIG)?;
    print!("validate: {}", validate(&cfg));
    println!("content hash {}", cfg.content_hash()?);

    let dir = std::env::temp_dir().join("farside-example");
    let summary = run_coverage(&cfg, &dir)?;
    println!(
        "{} samples, full at {:?}, min SCP {:.3}%, files {:?} in {}",
        summary.samples,
        summary.full_samples,
        summary.min_scp_percent.unwrap_or(f64::NAN),
        summary.outputs,
        dir.display()
    );

    let typo = CONFIG.replace("num_satellites", "num_satelites");
    if let Err(e) = ScenarioConfig::from_toml(&typo) {
        println!("\nmisspelt key is rejected:\n{e}");
    }
    Ok(())
}
