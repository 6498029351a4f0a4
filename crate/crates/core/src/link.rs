//! Free-space optical power link budget.
//!
//! Harvested electrical power for a transmitter misalignment `γ`:
//!
//! ```text
//! P_H = P_T (λ / 4πR)² η_T η_H G_T L_T(γ) G_R L_E L_S L_C
//! G_T = (π d_T / λ)²      G_R = (π d_R / λ)²
//! φ   = d_R / R           d_T = λ / φ
//! L_T = exp(−G_T γ²)
//! ```
//!
//! With the divergence chosen adaptively so the spot exactly fills the
//! receiver, the aligned power `c2` collapses to `P_T η_T η_H (π/4)² L_E L_S L_C`,
//! independent of range. All lengths in this module are metres.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkParameters {
    /// Electrical transmit power, W.
    pub p_t_w: f64,
    /// Laser wavelength, m.
    pub lambda_m: f64,
    /// Laser power conversion efficiency.
    pub eta_t: f64,
    /// Solar-cell energy-harvesting conversion efficiency.
    pub eta_h: f64,
    /// Receiver aperture diameter, m.
    pub d_r_m: f64,
    pub l_e: f64,
    pub l_s: f64,
    pub l_c: f64,
}

impl Default for LinkParameters {
    fn default() -> Self {
        Self {
            p_t_w: 1000.0,
            lambda_m: 1064e-9,
            eta_t: 0.51,
            eta_h: 0.508,
            d_r_m: 1.0,
            l_e: 1.0,
            l_s: 1.0,
            l_c: 1.0,
        }
    }
}

impl LinkParameters {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p_t_w", self.p_t_w),
            ("lambda_m", self.lambda_m),
            ("d_r_m", self.d_r_m),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(name, format!("must be > 0, got {v}")));
            }
        }
        for (name, v) in [
            ("eta_t", self.eta_t),
            ("eta_h", self.eta_h),
            ("l_e", self.l_e),
            ("l_s", self.l_s),
            ("l_c", self.l_c),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::config(name, format!("must be in (0, 1], got {v}")));
            }
        }
        Ok(())
    }

    fn loss_product(&self) -> f64 {
        self.l_e * self.l_s * self.l_c
    }

    /// Aligned harvested power under adaptive divergence, W.
    pub fn adaptive_ceiling_w(&self) -> f64 {
        self.p_t_w * self.eta_t * self.eta_h * (PI / 4.0).powi(2) * self.loss_product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkGeometry {
    pub range_m: f64,
    /// Full beam divergence, rad.
    pub phi_rad: f64,
    /// Transmitter aperture diameter, m.
    pub d_t_m: f64,
    pub g_t: f64,
    pub g_r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkBudgetResult {
    pub gamma_rad: f64,
    /// Misalignment loss factor in (0, 1].
    pub l_t: f64,
    pub p_h_w: f64,
    /// Harvested power with perfect alignment.
    pub c2_w: f64,
}

/// Adaptive-divergence geometry for a link of `range_m` metres.
pub fn link_geometry(params: &LinkParameters, range_m: f64) -> Result<LinkGeometry> {
    if !(range_m.is_finite() && range_m > 0.0) {
        return Err(Error::invalid(format!("link range must be > 0 m, got {range_m}")));
    }
    let phi = params.d_r_m / range_m;
    let d_t = params.lambda_m / phi;
    Ok(LinkGeometry {
        range_m,
        phi_rad: phi,
        d_t_m: d_t,
        g_t: aperture_gain(d_t, params.lambda_m),
        g_r: aperture_gain(params.d_r_m, params.lambda_m),
    })
}

/// `(π d / λ)²`
pub fn aperture_gain(diameter_m: f64, lambda_m: f64) -> f64 {
    (PI * diameter_m / lambda_m).powi(2)
}

/// `exp(−G_T γ²)`
pub fn misalignment_loss(g_t: f64, gamma_rad: f64) -> f64 {
    (-g_t * gamma_rad * gamma_rad).exp()
}

/// Aligned power `c2` evaluated term by term from the full link equation.
pub fn aligned_power_w(params: &LinkParameters, geom: &LinkGeometry) -> f64 {
    let free_space = (params.lambda_m / (4.0 * PI * geom.range_m)).powi(2);
    params.p_t_w * free_space * params.eta_t * params.eta_h * geom.g_t * geom.g_r * params.loss_product()
}

pub fn harvested_power(params: &LinkParameters, geom: &LinkGeometry, gamma_rad: f64) -> LinkBudgetResult {
    let c2 = aligned_power_w(params, geom);
    let l_t = misalignment_loss(geom.g_t, gamma_rad);
    LinkBudgetResult {
        gamma_rad,
        l_t,
        p_h_w: c2 * l_t,
        c2_w: c2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const STABLE_MIN_RANGE_M: f64 = 62_762_600.0;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn stable_geometry_values() {
        let g = link_geometry(&LinkParameters::default(), STABLE_MIN_RANGE_M).unwrap();
        assert!(rel(g.phi_rad, 1.5933e-8) < 1e-4);
        assert!((g.d_t_m - 66.78).abs() < 0.01);
        assert!(rel(g.g_t, 3.8878e16) < 1e-4);
        assert!(rel(g.g_r, 8.7180e12) < 1e-4);
    }

    #[test]
    fn unit_reduced_receiver_gain() {
        let p = LinkParameters {
            d_r_m: 1064e-9,
            ..LinkParameters::default()
        };
        let g = link_geometry(&p, 1e6).unwrap();
        assert!(rel(g.g_r, PI * PI) < 1e-12);
    }

    #[test]
    fn doubling_range_scales_aperture_and_gain() {
        let p = LinkParameters::default();
        let a = link_geometry(&p, 1e7).unwrap();
        let b = link_geometry(&p, 2e7).unwrap();
        assert!(rel(b.d_t_m, 2.0 * a.d_t_m) < 1e-14);
        assert!(rel(b.g_t, 4.0 * a.g_t) < 1e-14);
        assert!(link_geometry(&p, 0.0).is_err());
        assert!(link_geometry(&p, -5.0).is_err());
    }

    #[test]
    fn misalignment_examples() {
        assert_eq!(misalignment_loss(3.8878e16, 0.0), 1.0);
        let l = misalignment_loss(3.8878e16, 5e-9);
        assert!((l - (-0.97195_f64).exp()).abs() < 1e-5);
        assert!((l - 0.37834).abs() < 5e-5);
        let mut prev = 1.0;
        for k in 1..50 {
            let v = misalignment_loss(3.8878e16, k as f64 * 1e-9);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn harvested_power_examples() {
        let p = LinkParameters::default();
        let g = link_geometry(&p, STABLE_MIN_RANGE_M).unwrap();
        let aligned = harvested_power(&p, &g, 0.0);
        assert!((aligned.c2_w - 159.81).abs() < 5e-3);
        assert_eq!(aligned.p_h_w, aligned.c2_w);
        let off = harvested_power(&p, &g, 5e-9);
        assert!((off.p_h_w - 60.46).abs() < 0.01);
        assert!(off.p_h_w < off.c2_w);

        // η_T = 0 is outside the validated range but the formula still holds
        let dead = LinkParameters { eta_t: 0.0, ..p };
        assert!(dead.validate().is_err());
        assert_eq!(harvested_power(&dead, &g, 0.0).p_h_w, 0.0);
    }

    #[test]
    fn invalid_parameters() {
        let p = LinkParameters::default();
        assert!(p.validate().is_ok());
        assert!(LinkParameters { p_t_w: -1.0, ..p }.validate().is_err());
        assert!(LinkParameters { eta_h: 1.2, ..p }.validate().is_err());
        assert!(LinkParameters { l_s: 0.0, ..p }.validate().is_err());
    }
}
