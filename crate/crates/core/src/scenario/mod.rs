//! Scenario configuration, the builtin registry, and the runners behind the
//! `farside` command line.

mod builtin;
mod config;
mod run;

pub use builtin::{builtin, builtin_names, BuiltinScenario, BENCHMARK_A_Z_KM, BUILTINS};
pub use config::{
    validate, ConstellationConfig, ConstellationKind, Finding, GridConfig, PointingConfig, ScenarioConfig,
    ValidationReport, WindowConfig,
};
pub use run::{
    cdf_table_levels, link_ranges_km, output_dir, real, run_coverage, run_power_cdf, run_visibility, timeline,
    CdfCheckpoint, KsResult, RunSummary, CDF_TABLE_DECADES, CDF_TABLE_POINTS, LINK_BUDGET_SIGMAS,
};
