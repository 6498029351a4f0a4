//! Harvested power under random transmitter pointing jitter.
//!
//! Azimuth and elevation errors are independent zero-mean Gaussians with a
//! common deviation σ, so the radial error γ is Rayleigh(σ) and γ² is
//! exponential with rate ψ = 1/(2σ²). Harvested power is
//! `H = c2 exp(c1 γ²)` with `c1 = −G_T`, which gives
//!
//! ```text
//! f_H(h) = c2 / (|c1 c2| h) · ψ · exp(−ψ ln(h/c2) / c1),   0 < h ≤ c2
//! F_H(h) = (h / c2)^(ψ/|c1|)
//! ```
//!
//! For wide jitter `G_T γ²` routinely exceeds the ~745 at which `exp`
//! underflows, so Monte Carlo draws are kept as log-ratios `ln(H/c2)` and
//! compared against `F` in that (monotone) coordinate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::link::{link_geometry, LinkGeometry, LinkParameters};

/// Pointing accuracy of the satellite parked at EML2, rad.
pub const STABLE_SIGMA_RAD: f64 = 5e-9;
/// Pointing accuracy of a satellite revolving on the halo, rad.
pub const REVOLVING_SIGMA_RAD: f64 = 50e-9;

/// Draws per independent RNG stream.
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointingErrorModel {
    /// Per-axis deviation σ_γ = σ_a = σ_e, rad.
    pub sigma_gamma_rad: f64,
}

impl PointingErrorModel {
    pub fn new(sigma_gamma_rad: f64) -> Result<Self> {
        if !(sigma_gamma_rad.is_finite() && sigma_gamma_rad > 0.0) {
            return Err(Error::invalid(format!(
                "pointing sigma must be > 0, got {sigma_gamma_rad}"
            )));
        }
        Ok(Self { sigma_gamma_rad })
    }

    pub fn stable() -> Self {
        Self {
            sigma_gamma_rad: STABLE_SIGMA_RAD,
        }
    }

    pub fn revolving() -> Self {
        Self {
            sigma_gamma_rad: REVOLVING_SIGMA_RAD,
        }
    }
}

/// `n` Rayleigh radial errors, each the norm of two independent Gaussian
/// axis errors.
///
/// Draws are produced in fixed-size chunks, chunk `i` coming from ChaCha8
/// stream `i` of `seed`, so the output does not depend on the thread count.
pub fn sample_radial_error(model: &PointingErrorModel, seed: u64, n: usize) -> Vec<f64> {
    let axis = Normal::new(0.0, model.sigma_gamma_rad).expect("sigma validated positive");
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let len = CHUNK.min(n - i * CHUNK);
            (0..len)
                .map(|_| {
                    let a: f64 = axis.sample(&mut rng);
                    let e: f64 = axis.sample(&mut rng);
                    a.hypot(e)
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .concat()
}

/// Closed-form law of the harvested power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarvestedPowerDistribution {
    /// `−G_T`
    pub c1: f64,
    /// Aligned (maximum) harvested power, W.
    pub c2_w: f64,
    /// `1 / (2σ²)`, rad⁻².
    pub psi: f64,
}

impl HarvestedPowerDistribution {
    pub fn new(c1: f64, c2_w: f64, psi: f64) -> Result<Self> {
        if !(c1 < 0.0 && c1.is_finite()) {
            return Err(Error::invalid(format!("c1 must be negative, got {c1}")));
        }
        if !(c2_w > 0.0 && c2_w.is_finite()) {
            return Err(Error::invalid(format!("c2 must be positive, got {c2_w}")));
        }
        if !(psi > 0.0 && psi.is_finite()) {
            return Err(Error::invalid(format!("psi must be positive, got {psi}")));
        }
        Ok(Self { c1, c2_w, psi })
    }

    pub fn from_geometry(params: &LinkParameters, geom: &LinkGeometry, model: &PointingErrorModel) -> Result<Self> {
        let c2 = crate::link::aligned_power_w(params, geom);
        let s = model.sigma_gamma_rad;
        Self::new(-geom.g_t, c2, 1.0 / (2.0 * s * s))
    }

    pub fn from_link(params: &LinkParameters, range_m: f64, model: &PointingErrorModel) -> Result<Self> {
        Self::from_geometry(params, &link_geometry(params, range_m)?, model)
    }

    /// CDF exponent `ψ / |c1|`.
    pub fn shape(&self) -> f64 {
        self.psi / self.c1.abs()
    }

    /// Density in W⁻¹, evaluated in the printed form.
    pub fn pdf(&self, h_w: f64) -> Result<f64> {
        if !(h_w > 0.0 && h_w <= self.c2_w) {
            return Err(Error::Domain(format!("h = {h_w} W outside (0, {}]", self.c2_w)));
        }
        let (c1, c2, psi) = (self.c1, self.c2_w, self.psi);
        Ok(c2 / ((c1 * c2).abs() * h_w) * psi * (-psi * ((h_w / c2).ln() / c1)).exp())
    }

    pub fn cdf(&self, h_w: f64) -> f64 {
        if h_w <= 0.0 {
            0.0
        } else if h_w >= self.c2_w {
            1.0
        } else {
            (h_w / self.c2_w).powf(self.shape()).min(1.0)
        }
    }

    /// CDF as a function of `ln(h / c2)`.
    pub fn cdf_log_ratio(&self, log_ratio: f64) -> f64 {
        if log_ratio >= 0.0 {
            1.0
        } else {
            (self.shape() * log_ratio).exp()
        }
    }

    /// Inverse CDF, `c2 · p^(|c1|/ψ)`.
    pub fn quantile(&self, p: f64) -> f64 {
        self.c2_w * p.clamp(0.0, 1.0).powf(1.0 / self.shape())
    }
}

/// Plain empirical CDF over sorted samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("empirical CDF needs at least one sample"));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::invalid("empirical CDF samples must not be NaN"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Kolmogorov–Smirnov distance to a continuous `cdf`.
    pub fn ks_distance(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        ks_distance(&self.sorted, cdf)
    }
}

/// Sup-norm distance between the ECDF of `sorted` and `cdf`, checked on
/// both sides of every jump.
pub fn ks_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// `√(−ln(α/2) / 2) / √n`, the asymptotic one-sample KS critical value.
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

/// Empirical CDF of harvested power, stored as sorted `ln(P_H / c2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    pub c2_w: f64,
    log_ratio: Ecdf,
}

impl EmpiricalCdf {
    pub fn from_log_ratios(c2_w: f64, log_ratios: Vec<f64>) -> Result<Self> {
        Ok(Self {
            c2_w,
            log_ratio: Ecdf::new(log_ratios)?,
        })
    }

    /// Fraction of draws with `P_H ≤ h_w`.
    pub fn eval(&self, h_w: f64) -> f64 {
        if h_w <= 0.0 {
            return 0.0;
        }
        self.log_ratio.eval((h_w / self.c2_w).ln())
    }

    pub fn log_ratios(&self) -> &[f64] {
        self.log_ratio.samples()
    }

    /// Samples in watts, ascending. Very deep fades may underflow to 0.
    pub fn samples_w(&self) -> impl Iterator<Item = f64> + '_ {
        self.log_ratio.samples().iter().map(move |l| self.c2_w * l.exp())
    }

    pub fn median_w(&self) -> f64 {
        let s = self.log_ratio.samples();
        let n = s.len();
        let mid = if n % 2 == 1 {
            s[n / 2]
        } else {
            0.5 * (s[n / 2 - 1] + s[n / 2])
        };
        self.c2_w * mid.exp()
    }

    pub fn len(&self) -> usize {
        self.log_ratio.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_ratio.is_empty()
    }
}

/// `n` seeded draws of `P_H = c2 exp(−G_T γ²)`.
pub fn monte_carlo_cdf(
    params: &LinkParameters,
    geom: &LinkGeometry,
    model: &PointingErrorModel,
    n: usize,
    seed: u64,
) -> Result<EmpiricalCdf> {
    if n == 0 {
        return Err(Error::invalid("Monte Carlo needs n >= 1"));
    }
    let c2 = crate::link::aligned_power_w(params, geom);
    let g_t = geom.g_t;
    let log_ratios = sample_radial_error(model, seed, n)
        .into_iter()
        .map(|g| -g_t * g * g)
        .collect();
    EmpiricalCdf::from_log_ratios(c2, log_ratios)
}

/// KS distance between simulated and analytic harvested-power CDFs.
pub fn ks_statistic(emp: &EmpiricalCdf, dist: &HarvestedPowerDistribution) -> f64 {
    ks_distance(emp.log_ratios(), |l| dist.cdf_log_ratio(l))
}
