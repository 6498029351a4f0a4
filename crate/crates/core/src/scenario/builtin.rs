//! Builtin scenarios, one per standard study.

use crate::coverage::Region;
use crate::error::{Error, Result};
use crate::pointing::{REVOLVING_SIGMA_RAD, STABLE_SIGMA_RAD};

use super::config::{ConstellationConfig, PointingConfig, ScenarioConfig};

/// Registry entry: name, the subcommand it is meant for, and a one-liner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuiltinScenario {
    pub name: &'static str,
    pub command: &'static str,
    pub description: &'static str,
}

pub const BUILTINS: &[BuiltinScenario] = &[
    BuiltinScenario {
        name: "stable-1sat",
        command: "coverage",
        description: "one satellite parked at EML2, far-side coverage",
    },
    BuiltinScenario {
        name: "fig5-az5000-3sat",
        command: "coverage",
        description: "three halo satellites, A_z = 5000 km, far-side coverage",
    },
    BuiltinScenario {
        name: "fig5-az10000-3sat",
        command: "coverage",
        description: "three halo satellites, A_z = 10000 km, far-side coverage",
    },
    BuiltinScenario {
        name: "fig5-az15000-3sat",
        command: "coverage",
        description: "three halo satellites, A_z = 15000 km, far-side coverage",
    },
    BuiltinScenario {
        name: "fig6-az5000",
        command: "visibility",
        description: "Earth visibility of three halo satellites, A_z = 5000 km",
    },
    BuiltinScenario {
        name: "fig6-az10000",
        command: "visibility",
        description: "Earth visibility of three halo satellites, A_z = 10000 km",
    },
    BuiltinScenario {
        name: "fig6-az15000",
        command: "visibility",
        description: "Earth visibility of three halo satellites, A_z = 15000 km",
    },
    BuiltinScenario {
        name: "fig7-stable-1sat",
        command: "coverage",
        description: "per-cell coverage dump at the worst sample, satellite at EML2",
    },
    BuiltinScenario {
        name: "fig7-halo-1sat",
        command: "coverage",
        description: "per-cell coverage dump at the worst sample, one halo satellite",
    },
    BuiltinScenario {
        name: "fig7-halo-2sat",
        command: "coverage",
        description: "per-cell coverage dump at the worst sample, two halo satellites",
    },
    BuiltinScenario {
        name: "fig7-halo-3sat",
        command: "coverage",
        description: "per-cell coverage dump at the worst sample, three halo satellites",
    },
    BuiltinScenario {
        name: "table4-1sat-southpole",
        command: "coverage",
        description: "south-pole full-coverage rate, one halo satellite",
    },
    BuiltinScenario {
        name: "table4-2sat-southpole",
        command: "coverage",
        description: "south-pole full-coverage rate, two halo satellites",
    },
    BuiltinScenario {
        name: "table4-3sat-southpole",
        command: "coverage",
        description: "south-pole full-coverage rate, three halo satellites",
    },
    BuiltinScenario {
        name: "fig8-stable",
        command: "power-cdf",
        description: "harvested-power CDF, satellite at EML2, sigma = 5 nrad",
    },
    BuiltinScenario {
        name: "fig8-revolving",
        command: "power-cdf",
        description: "harvested-power CDF, one halo satellite, sigma = 50 nrad",
    },
];

pub const BENCHMARK_A_Z_KM: f64 = 15_000.0;

fn base(name: &str, constellation: ConstellationConfig, region: Region) -> ScenarioConfig {
    let info = BUILTINS.iter().find(|b| b.name == name);
    ScenarioConfig {
        name: name.to_owned(),
        description: info.map(|b| b.description.to_owned()),
        output_dir: None,
        region,
        geometry: Default::default(),
        timing: Default::default(),
        stations: crate::ephemeris::default_ground_stations(),
        constellation,
        window: Default::default(),
        grid: Default::default(),
        link: Default::default(),
        pointing: PointingConfig::default(),
    }
}

/// Builds the configuration of a named scenario.
pub fn builtin(name: &str) -> Result<ScenarioConfig> {
    let halo = |a_z: f64, n: usize| ConstellationConfig::halo(a_z, n);
    let cfg = match name {
        "stable-1sat" | "fig7-stable-1sat" => base(name, ConstellationConfig::stable(), Region::Lfs),
        "fig5-az5000-3sat" | "fig6-az5000" => base(name, halo(5_000.0, 3), Region::Lfs),
        "fig5-az10000-3sat" | "fig6-az10000" => base(name, halo(10_000.0, 3), Region::Lfs),
        "fig5-az15000-3sat" | "fig6-az15000" => base(name, halo(BENCHMARK_A_Z_KM, 3), Region::Lfs),
        "fig7-halo-1sat" => base(name, halo(BENCHMARK_A_Z_KM, 1), Region::Lfs),
        "fig7-halo-2sat" => base(name, halo(BENCHMARK_A_Z_KM, 2), Region::Lfs),
        "fig7-halo-3sat" => base(name, halo(BENCHMARK_A_Z_KM, 3), Region::Lfs),
        "table4-1sat-southpole" => base(name, halo(BENCHMARK_A_Z_KM, 1), Region::LfsSouthPole),
        "table4-2sat-southpole" => base(name, halo(BENCHMARK_A_Z_KM, 2), Region::LfsSouthPole),
        "table4-3sat-southpole" => base(name, halo(BENCHMARK_A_Z_KM, 3), Region::LfsSouthPole),
        "fig8-stable" => {
            let mut c = base(name, ConstellationConfig::stable(), Region::Lfs);
            c.pointing.sigma_rad = STABLE_SIGMA_RAD;
            c
        }
        "fig8-revolving" => {
            let mut c = base(name, halo(BENCHMARK_A_Z_KM, 1), Region::Lfs);
            c.pointing.sigma_rad = REVOLVING_SIGMA_RAD;
            c
        }
        _ => return Err(Error::UnknownScenario(name.to_owned())),
    };
    Ok(cfg)
}

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|b| b.name)
}
