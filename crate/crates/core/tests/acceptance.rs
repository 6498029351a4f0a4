//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use farside::constellation::{halo_axes, satellite_positions, ConstellationSpec, HaloOrbitSpec};
use farside::coverage::{
    cell_covered, central_angle_limit, coverage_snapshot, coverage_timeline, satellites_at, LunarGrid, Region,
    TimeWindow,
};
use farside::ephemeris::{Ephemeris, SimulationInstant};
use farside::geom::{rotation_about_axis, Vector3};
use farside::link::{link_geometry, LinkParameters};
use farside::pointing::{ks_statistic, monte_carlo_cdf, HarvestedPowerDistribution, PointingErrorModel};
use farside::scenario::{builtin, run_coverage, run_power_cdf, run_visibility, timeline, BUILTINS};
use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned targets and tolerances.
const STABLE_SCP: f64 = 96.864;
const STABLE_SCP_TOL: f64 = 0.5;
const CAP_TOL_PP: f64 = 0.05;
const TABLE4_TARGETS: [usize; 3] = [86, 171, 193];
const TABLE4_TOL_SAMPLES: usize = 2;
const CEILING_W: f64 = 159.81;
const CEILING_TOL_W: f64 = 0.005;
const RANGE_INVARIANCE_TOL: f64 = 1e-12;
const CHECKPOINT_RANGE_M: f64 = 62_762_600.0;
const KS_CRITICAL: f64 = 0.00516;
const KS_SAMPLES: usize = 100_000;
const NORMALIZATION_TOL: f64 = 1e-6;
const ORTHONORMAL_TOL: f64 = 1e-12;
const ELLIPSE_TOL: f64 = 1e-9;
const TIDAL_LOCK_TOL: f64 = 1e-12;
const ORACLE_PAIRS: usize = 10_000;

type Check = fn() -> (bool, String);

fn main() {
    let criteria: [(u8, &str, Check); 9] = [
        (1, "stable satellite far-side coverage", stable_coverage),
        (
            2,
            "three-satellite benchmark, full coverage and visibility",
            triple_benchmark,
        ),
        (3, "south-pole full-coverage rates", south_pole_rates),
        (4, "Earth-visibility constraint", visibility_constraint),
        (5, "adaptive-divergence power ceiling", power_ceiling),
        (6, "closed-form CDF checkpoints", cdf_checkpoints),
        (7, "Monte Carlo KS and density normalization", monte_carlo),
        (8, "property suites", properties),
        (9, "byte-identical reruns of every builtin", determinism),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let (pass, detail) = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        if !pass {
            failed += 1;
        }
        println!("{} {id} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

fn stable_coverage() -> (bool, String) {
    let cfg = builtin("stable-1sat").unwrap();
    let tl = timeline(&cfg).unwrap();
    let in_band = tl
        .samples
        .iter()
        .all(|s| (s.scp_percent - STABLE_SCP).abs() <= STABLE_SCP_TOL);

    let eph = cfg.ephemeris().unwrap();
    let r = eph.geometry.moon_radius_km;
    let beta = central_angle_limit(eph.geometry.emlp2_moon_distance_km, r).unwrap();
    let cap = 100.0 * (1.0 - beta.cos());
    let fine = LunarGrid::new(0.25, 0.25, r).unwrap();
    let (_, _, body) = satellites_at(&eph, &ConstellationSpec::StableEmlp2, 0.0).unwrap();
    let refined = coverage_snapshot(&fine, &Region::Lfs, &body).unwrap().scp_percent;
    let gap = (refined - cap).abs();
    (
        in_band && gap <= CAP_TOL_PP,
        format!(
            "1 deg SCP {:.4}..{:.4} (target {STABLE_SCP} +/- {STABLE_SCP_TOL}); 0.25 deg SCP {refined:.4} vs cap {cap:.4}, gap {gap:.4} (<= {CAP_TOL_PP})",
            tl.min_scp(),
            tl.max_scp()
        ),
    )
}

fn triple_benchmark() -> (bool, String) {
    let tl = timeline(&builtin("fig5-az15000-3sat").unwrap()).unwrap();
    let full = tl.samples.iter().filter(|s| s.scp_percent == 100.0).count();
    let visible = tl.samples.iter().filter(|s| s.earth_visible.iter().all(|v| *v)).count();
    let n = tl.samples.len();
    (
        n == 193 && full == n && visible == n,
        format!("SCP = 100 at {full}/{n} samples, all satellites visible at {visible}/{n}"),
    )
}

fn south_pole_rates() -> (bool, String) {
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, target) in TABLE4_TARGETS.iter().enumerate() {
        let tl = timeline(&builtin(&format!("table4-{}sat-southpole", k + 1)).unwrap()).unwrap();
        let full = tl.full_samples();
        pass &= tl.samples.len() == 193 && full.abs_diff(*target) <= TABLE4_TOL_SAMPLES;
        parts.push(format!(
            "{}-sat {full}/193 (target {target} +/- {TABLE4_TOL_SAMPLES})",
            k + 1
        ));
    }
    (pass, parts.join(", "))
}

fn hidden_samples(spec: &ConstellationSpec) -> usize {
    let eph = Ephemeris::default();
    let window = TimeWindow::new(0.0, 192.0, 1.0).unwrap();
    let grid = LunarGrid::new(10.0, 10.0, eph.geometry.moon_radius_km).unwrap();
    let tl = coverage_timeline(&eph, &grid, spec, &Region::Lfs, &window).unwrap();
    tl.samples
        .iter()
        .filter(|s| !s.earth_visible.iter().all(|v| *v))
        .count()
}

fn visibility_constraint() -> (bool, String) {
    let small = hidden_samples(&ConstellationSpec::halo(5_000.0, 3));
    let mut compliant = Vec::new();
    for (a_z, a_y, n) in [
        (15_000.0, None, 3),
        (15_000.0, None, 1),
        (3671.0 / 0.343, None, 1),
        (10_000.0, Some(3671.0), 1),
        (20_000.0, None, 2),
    ] {
        let mut orbit = HaloOrbitSpec::with_ratio(a_z, n);
        if let Some(a_y) = a_y {
            orbit.a_y_km = a_y;
        }
        assert!(orbit.a_y_km >= 3671.0);
        let spec = ConstellationSpec::Halo {
            orbit,
            num_satellites: n,
        };
        compliant.push(hidden_samples(&spec));
    }
    (
        small > 0 && compliant.iter().all(|h| *h == 0),
        format!("A_z 5000: {small}/193 samples with a hidden satellite; A_y >= 3671 km configurations: {compliant:?} hidden"),
    )
}

fn power_ceiling() -> (bool, String) {
    let p = LinkParameters::default();
    let reduced = p.p_t_w * p.eta_t * p.eta_h * (PI / 4.0).powi(2);
    let mut worst: f64 = 0.0;
    for r in [1e3, 1e7, 1e8] {
        // factor by factor from the raw link equation
        let phi = p.d_r_m / r;
        let d_t = p.lambda_m / phi;
        let g_t = (PI * d_t / p.lambda_m).powi(2);
        let g_r = (PI * p.d_r_m / p.lambda_m).powi(2);
        let c2 = p.p_t_w * (p.lambda_m / (4.0 * PI * r)).powi(2) * p.eta_t * p.eta_h * g_t * g_r;
        let lib = farside::link::aligned_power_w(&p, &link_geometry(&p, r).unwrap());
        worst = worst
            .max(((c2 - reduced) / reduced).abs())
            .max(((lib - reduced) / reduced).abs());
    }
    (
        (reduced - CEILING_W).abs() < CEILING_TOL_W && worst <= RANGE_INVARIANCE_TOL,
        format!("c2 = {reduced:.4} W (target {CEILING_W}), worst relative spread over R in {{1e3, 1e7, 1e8}} m = {worst:.1e}"),
    )
}

fn cdf_checkpoints() -> (bool, String) {
    let p = LinkParameters::default();
    let stable = HarvestedPowerDistribution::from_link(&p, CHECKPOINT_RANGE_M, &PointingErrorModel::stable()).unwrap();
    let revolving =
        HarvestedPowerDistribution::from_link(&p, CHECKPOINT_RANGE_M, &PointingErrorModel::revolving()).unwrap();
    let rows = [
        ("stable F(41.6)", stable.cdf(41.6), 0.500, 0.005),
        ("stable F(1.6)", stable.cdf(1.6), 0.094, 0.005),
        ("revolving F(41.6)", revolving.cdf(41.6), 0.993, 0.003),
        ("revolving F(1.6)", revolving.cdf(1.6), 0.977, 0.003),
    ];
    let pass = rows.iter().all(|(_, v, t, tol)| (v - t).abs() <= *tol);
    let detail = rows
        .iter()
        .map(|(n, v, t, tol)| format!("{n} = {v:.4} ({t} +/- {tol})"))
        .collect::<Vec<_>>()
        .join(", ");
    (pass, detail)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn monte_carlo() -> (bool, String) {
    let p = LinkParameters::default();
    let geom = link_geometry(&p, CHECKPOINT_RANGE_M).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, model) in [
        ("stable", PointingErrorModel::stable()),
        ("revolving", PointingErrorModel::revolving()),
    ] {
        let d = HarvestedPowerDistribution::from_geometry(&p, &geom, &model).unwrap();
        let emp = monte_carlo_cdf(&p, &geom, &model, KS_SAMPLES, 1).unwrap();
        let ks = ks_statistic(&emp, &d);
        pass &= ks < KS_CRITICAL;
        parts.push(format!("{label} KS {ks:.5}"));
    }
    // ∫ f_H dh with h = c2 e^-u, out to where the remaining mass is < 1e-20
    let d = HarvestedPowerDistribution::from_geometry(&p, &geom, &PointingErrorModel::stable()).unwrap();
    let integral = simpson(
        |u| {
            let h = d.c2_w * (-u).exp();
            d.pdf(h).unwrap() * h
        },
        0.0,
        46.0 / d.shape(),
        200_000,
    );
    pass &= (integral - 1.0).abs() < NORMALIZATION_TOL;
    parts.push(format!("stable density integral {integral:.9}"));
    (
        pass,
        format!(
            "{} (KS < {KS_CRITICAL} at n = {KS_SAMPLES}, |integral - 1| < {NORMALIZATION_TOL})",
            parts.join(", ")
        ),
    )
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vector3 {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..TAU);
    let s = (1.0 - z * z).sqrt();
    Vector3::new(s * phi.cos(), s * phi.sin(), z)
}

fn properties() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures: BTreeMap<&str, usize> = BTreeMap::new();
    let mut fail = |name: &'static str, ok: bool| {
        let e = failures.entry(name).or_insert(0);
        if !ok {
            *e += 1;
        }
    };

    for _ in 0..10_000 {
        let axis = random_unit(&mut rng);
        let m = *rotation_about_axis(&axis, rng.random_range(-10.0..10.0))
            .unwrap()
            .matrix();
        fail(
            "rotation orthonormality",
            (m.transpose() * m - Matrix3::identity()).abs().max() < ORTHONORMAL_TOL,
        );
    }

    let eph = Ephemeris::default();
    for _ in 0..2_000 {
        let t: f64 = rng.random_range(0.0..2_000.0);
        let s = eph.state_at(t).unwrap();
        let to_earth = (s.earth_center - s.moon_center).normalize();
        fail(
            "tidal lock",
            (s.moon_body_frame * Vector3::x() - to_earth).norm() < TIDAL_LOCK_TOL,
        );

        let a_z: f64 = rng.random_range(1_000.0..40_000.0);
        let n = rng.random_range(1..6);
        let spec = ConstellationSpec::halo(a_z, n);
        let (y, z) = halo_axes(&s);
        for p in satellite_positions(SimulationInstant::new(t).unwrap(), &spec, &s).unwrap() {
            let d = p - s.emlp2;
            let r = (d.dot(&y) / (0.343 * a_z)).powi(2) + (d.dot(&z) / a_z).powi(2);
            fail("on-ellipse residual", (r - 1.0).abs() < ELLIPSE_TOL);
        }
    }

    let grid = LunarGrid::new(2.0, 2.0, 1737.4).unwrap();
    for _ in 0..50 {
        let mut sats: Vec<Vector3> = Vec::new();
        let mut prev = 0.0;
        for _ in 0..4 {
            sats.push(random_unit(&mut rng) * rng.random_range(2_000.0..200_000.0));
            let scp = coverage_snapshot(&grid, &Region::Lfs, &sats).unwrap().scp_percent;
            fail("coverage monotone in satellite count", scp >= prev);
            prev = scp;
        }
    }

    let one = LunarGrid::one_degree(1737.4).unwrap();
    for _ in 0..ORACLE_PAIRS {
        let cell = &one.cells[rng.random_range(0..one.len())];
        let d: f64 = rng.random_range(1_800.0..500_000.0);
        let sat = random_unit(&mut rng) * d;
        let up = cell.surface_point.normalize();
        let los = sat - cell.surface_point;
        let elevated = (los.dot(&up) / los.norm()).asin() > 0.0;
        let beta = central_angle_limit(d, 1737.4).unwrap();
        fail(
            "cell_covered vs elevation oracle",
            cell_covered(cell, &sat, beta) == elevated,
        );
    }

    let p = LinkParameters::default();
    let geom = link_geometry(&p, CHECKPOINT_RANGE_M).unwrap();
    for seed in 0..20 {
        let sigma = rng.random_range(1e-9..3e-8);
        let model = PointingErrorModel::new(sigma).unwrap();
        let emp = monte_carlo_cdf(&p, &geom, &model, 5_000, seed).unwrap();
        fail(
            "sample support (0, c2]",
            emp.log_ratios().iter().all(|l| *l <= 0.0 && l.is_finite()),
        );

        let tight = HarvestedPowerDistribution::from_geometry(&p, &geom, &model).unwrap();
        let loose = HarvestedPowerDistribution::from_geometry(
            &p,
            &geom,
            &PointingErrorModel::new(sigma * rng.random_range(1.01..10.0)).unwrap(),
        )
        .unwrap();
        for _ in 0..50 {
            let h = tight.c2_w * rng.random_range(1e-6..1.0);
            fail("stochastic ordering in sigma", loose.cdf(h) >= tight.cdf(h));
        }
    }

    let bad: Vec<String> = failures
        .iter()
        .filter(|(_, v)| **v > 0)
        .map(|(k, v)| format!("{k} ({v})"))
        .collect();
    let names: Vec<&str> = failures.keys().copied().collect();
    if bad.is_empty() {
        (true, format!("all hold: {}", names.join(", ")))
    } else {
        (false, format!("violations: {}", bad.join(", ")))
    }
}

fn csv_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect()
}

fn determinism() -> (bool, String) {
    let root = tempfile::tempdir().unwrap();
    let mut mismatched = Vec::new();
    let mut files = 0;
    for b in BUILTINS {
        let cfg = builtin(b.name).unwrap();
        let runner = match b.command {
            "coverage" => run_coverage,
            "visibility" => run_visibility,
            _ => run_power_cdf,
        };
        let run = |threads: usize, tag: &str| {
            let dir = root.path().join(format!("{}-{tag}", b.name));
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| runner(&cfg, &dir))
                .unwrap();
            csv_bytes(&dir)
        };
        let first = run(1, "a");
        let second = run(4, "b");
        files += first.len();
        if first.is_empty() || first != second {
            mismatched.push(b.name);
        }
    }
    (
        mismatched.is_empty(),
        format!(
            "{} builtins, {files} CSV files compared across 1- and 4-thread runs; mismatched: {mismatched:?}",
            BUILTINS.len()
        ),
    )
}
