//! Applied field to pair geometry, and the two current-field laws.
//!
//! Note that with `L = 2 Delta_s / (e* E)` the onset condition
//! `e* E L > eps_G` reduces to `2 Delta_s > eps_G`: it does not depend on
//! the field at all. [`tunneling_onset`] still evaluates the literal
//! inequality at the requested field.

use serde::{Deserialize, Serialize};

use crate::tunneling::ln_cosh;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TransportParams {
    /// Threshold field.
    pub e_t: f64,
    /// Proportionality factor between `L / x_bar` and `E_T / E`.
    pub c_v: f64,
    /// Soliton-pair current amplitude, `C1 C2 / m*`.
    pub c_tilde1: f64,
    /// Zener prefactor.
    pub g_p: f64,
    /// Soliton gap energy.
    pub delta_s: f64,
    /// Effective charge of a condensed electron.
    pub e_star: f64,
    /// Pinning gap energy.
    pub eps_g: f64,
    pub m_e: f64,
    pub omega: f64,
    pub e_charge: f64,
}

impl Default for TransportParams {
    fn default() -> Self {
        Self {
            e_t: 1.0,
            c_v: 1.0,
            c_tilde1: 1.0,
            g_p: 1.0,
            delta_s: 1.0,
            e_star: 1.0,
            eps_g: 1.0,
            m_e: 1.0,
            omega: 1.0,
            e_charge: 1.0,
        }
    }
}

impl TransportParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("e_t", self.e_t),
            ("c_v", self.c_v),
            ("c_tilde1", self.c_tilde1),
            ("g_p", self.g_p),
            ("delta_s", self.delta_s),
            ("e_star", self.e_star),
            ("m_e", self.m_e),
            ("omega", self.omega),
            ("e_charge", self.e_charge),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.eps_g >= 0.0 && self.eps_g.is_finite()) {
            return Err(Error::domain(format!(
                "eps_g must be non-negative, got {}",
                self.eps_g
            )));
        }
        Ok(())
    }
}

fn check_field(e: f64) -> Result<()> {
    if e > 0.0 && e.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "field must be positive and finite, got {e}"
        )))
    }
}

/// Pair separation `(2 Delta_s / e*) / E`.
pub fn pair_separation(e: f64, tp: &TransportParams) -> Result<f64> {
    check_field(e)?;
    Ok(2.0 * tp.delta_s / tp.e_star / e)
}

/// `e* E L(E) > eps_G`.
pub fn tunneling_onset(e: f64, tp: &TransportParams) -> Result<bool> {
    Ok(tp.e_star * e * pair_separation(e, tp)? > tp.eps_g)
}

/// Harmonic reference displacement `e E / (m omega^2)`.
pub fn reference_displacement(e: f64, tp: &TransportParams) -> Result<f64> {
    check_field(e)?;
    Ok(tp.e_charge * e / (tp.m_e * tp.omega * tp.omega))
}

/// `L / x_bar = c_v E_T / E`.
pub fn l_over_x(e: f64, tp: &TransportParams) -> Result<f64> {
    check_field(e)?;
    Ok(tp.c_v * tp.e_t / e)
}

/// How the soliton-pair law is written in terms of `chi = c_v E_T / E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SgeConvention {
    /// `C cosh(sqrt(2/chi) - sqrt(chi)) exp(-chi)`, the canonical law.
    #[default]
    AsPrinted,
    /// `C cosh(sqrt(2/chi) - sqrt(chi/2)) exp(-chi/2)`: the matrix element
    /// with `L / x_bar = chi` and `alpha L = 1` substituted directly.
    BackSubstituted,
}

/// Natural log of the soliton-pair current; finite wherever the current
/// itself would under- or overflow.
pub fn ln_current_sge_with(e: f64, tp: &TransportParams, convention: SgeConvention) -> Result<f64> {
    check_field(e)?;
    let chi = tp.e_t * tp.c_v / e;
    let lead = (2.0 * e / (tp.e_t * tp.c_v)).sqrt();
    let (arg, decay) = match convention {
        SgeConvention::AsPrinted => (lead - chi.sqrt(), chi),
        SgeConvention::BackSubstituted => (lead - (0.5 * chi).sqrt(), 0.5 * chi),
    };
    Ok(tp.c_tilde1.ln() + ln_cosh(arg) - decay)
}

pub fn ln_current_sge(e: f64, tp: &TransportParams) -> Result<f64> {
    ln_current_sge_with(e, tp, SgeConvention::AsPrinted)
}

pub fn current_sge_with(e: f64, tp: &TransportParams, convention: SgeConvention) -> Result<f64> {
    ln_current_sge_with(e, tp, convention).map(f64::exp)
}

/// Soliton-pair current `C cosh(sqrt(2E/(E_T c_v)) - sqrt(chi)) exp(-chi)`, `chi = E_T c_v / E`.
pub fn current_sge(e: f64, tp: &TransportParams) -> Result<f64> {
    current_sge_with(e, tp, SgeConvention::AsPrinted)
}

/// Zener law `G_p (E - E_T) exp(-E_T / E)` above threshold, zero at or below it.
pub fn current_zener(e: f64, tp: &TransportParams) -> Result<f64> {
    check_field(e)?;
    Ok(if e > tp.e_t {
        tp.g_p * (e - tp.e_t) * (-tp.e_t / e).exp()
    } else {
        0.0
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurrentModel {
    Sge,
    Zener,
}

impl CurrentModel {
    pub fn name(self) -> &'static str {
        match self {
            CurrentModel::Sge => "sge",
            CurrentModel::Zener => "zener",
        }
    }

    pub fn eval(self, e: f64, tp: &TransportParams) -> Result<f64> {
        match self {
            CurrentModel::Sge => current_sge(e, tp),
            CurrentModel::Zener => current_zener(e, tp),
        }
    }
}

/// Sampled current-field curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl CurveSeries {
    pub fn fields(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn currents(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }
}

/// Checks that `grid` is non-empty, positive, finite and strictly increasing.
pub fn validate_field_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::domain("field grid is empty"));
    }
    if grid.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::domain(
            "field grid values must be positive and finite",
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("field grid must be strictly increasing"));
    }
    Ok(())
}

pub fn curve_series(
    model: CurrentModel,
    tp: &TransportParams,
    e_grid: &[f64],
) -> Result<CurveSeries> {
    tp.validate()?;
    validate_field_grid(e_grid)?;
    let points = e_grid
        .iter()
        .map(|&e| Ok((e, model.eval(e, tp)?)))
        .collect::<Result<_>>()?;
    Ok(CurveSeries {
        label: model.name().to_owned(),
        points,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn tp() -> TransportParams {
        TransportParams::default()
    }

    #[test]
    fn separation() {
        assert_eq!(pair_separation(2.0, &tp()).unwrap(), 1.0);
        let doubled = TransportParams {
            delta_s: 2.0,
            ..tp()
        };
        assert_eq!(pair_separation(2.0, &doubled).unwrap(), 2.0);
        for e in [0.1, 0.5, 3.0, 17.0, 1e3] {
            assert!((pair_separation(e, &tp()).unwrap() * e - 2.0).abs() < 1e-15);
        }
        assert!(pair_separation(0.0, &tp()).is_err());
        assert!(pair_separation(-1.0, &tp()).is_err());
    }

    #[test]
    fn onset_is_field_independent() {
        for e in [0.01, 1.0, 100.0] {
            assert!(tunneling_onset(e, &tp()).unwrap());
            assert!(!tunneling_onset(
                e,
                &TransportParams {
                    eps_g: 2.0 + 1e-9,
                    ..tp()
                }
            )
            .unwrap());
            assert!(tunneling_onset(e, &TransportParams { eps_g: 0.0, ..tp() }).unwrap());
        }
    }

    #[test]
    fn displacement() {
        assert_eq!(reference_displacement(3.0, &tp()).unwrap(), 3.0);
        let fast = TransportParams { omega: 4.0, ..tp() };
        assert_eq!(reference_displacement(3.0, &fast).unwrap(), 3.0 / 16.0);
        assert_eq!(
            reference_displacement(6.0, &tp()).unwrap(),
            2.0 * reference_displacement(3.0, &tp()).unwrap()
        );
    }

    #[test]
    fn ratio_l_over_x() {
        let p = TransportParams { c_v: 2.5, ..tp() };
        assert_eq!(l_over_x(2.5, &p).unwrap(), 1.0);
        assert_eq!(l_over_x(1.0, &tp()).unwrap(), 1.0);
        for e in [0.3, 2.0, 9.0] {
            assert!((l_over_x(e, &p).unwrap() * e - 2.5).abs() < 1e-15);
        }
    }

    #[test]
    fn sge_at_unit_chi() {
        // mpmath: cosh(sqrt(2) - 1) / e
        let p = TransportParams {
            c_v: 1.7,
            c_tilde1: 2.0,
            ..tp()
        };
        let v = current_sge(1.7, &p).unwrap();
        assert!((v / 2.0 - 0.399_892_319_734_953_073_233_9).abs() < 1e-14);
    }

    #[test]
    fn sge_limits() {
        assert_eq!(current_sge(1e-6, &tp()).unwrap(), 0.0);
        assert!(ln_current_sge(1e-6, &tp()).unwrap() < -9e5);
        // Large fields: ratio to the leading exponential is exp(-sqrt(chi) - chi).
        let e = 1e6_f64;
        let chi = 1e-6f64;
        let ln_leading = 0.5f64.ln() + (2.0 * e).sqrt();
        let ratio = (ln_current_sge(e, &tp()).unwrap() - ln_leading).exp();
        assert!((ratio - (-chi.sqrt() - chi).exp()).abs() < 1e-9);
    }

    #[test]
    fn zener_values() {
        assert_eq!(current_zener(1.0, &tp()).unwrap(), 0.0);
        assert_eq!(current_zener(0.5, &tp()).unwrap(), 0.0);
        assert!((current_zener(2.0, &tp()).unwrap() - 0.606_530_659_712_633_423_6).abs() < 1e-15);
        let g = TransportParams { g_p: 3.0, ..tp() };
        assert!(
            (current_zener(2.0, &g).unwrap() - 3.0 * current_zener(2.0, &tp()).unwrap()).abs()
                < 1e-15
        );
        assert!(current_zener(1.0 + 1e-12, &tp()).unwrap() < 1e-11);
    }

    #[test]
    fn conventions_differ() {
        let a = current_sge_with(2.0, &tp(), SgeConvention::AsPrinted).unwrap();
        let b = current_sge_with(2.0, &tp(), SgeConvention::BackSubstituted).unwrap();
        assert!((a - b).abs() > 1e-3);
    }

    #[test]
    fn series() {
        let below = curve_series(CurrentModel::Zener, &tp(), &[0.2, 0.5, 1.0]).unwrap();
        assert!(below.currents().all(|i| i == 0.0));
        assert_eq!(below.label, "zener");
        let grid: Vec<f64> = (1..200).map(|i| 0.05 * i as f64).collect();
        let sge = curve_series(CurrentModel::Sge, &tp(), &grid).unwrap();
        assert!(sge.currents().all(|i| i > 0.0));
        let dense: Vec<f64> = (0..5000).map(|i| 1.0 + i as f64 * 0.02).collect();
        let s = curve_series(CurrentModel::Sge, &tp(), &dense).unwrap();
        assert!(s.points.windows(2).all(|w| w[1].1 > w[0].1));
        assert!(curve_series(CurrentModel::Sge, &tp(), &[1.0, 1.0]).is_err());
        assert!(curve_series(CurrentModel::Sge, &tp(), &[0.0, 1.0]).is_err());
        assert!(curve_series(CurrentModel::Sge, &tp(), &[]).is_err());
    }

    #[test]
    fn validation() {
        assert!(TransportParams { e_t: 0.0, ..tp() }.validate().is_err());
        assert!(TransportParams {
            eps_g: -1.0,
            ..tp()
        }
        .validate()
        .is_err());
        assert!(TransportParams { eps_g: 0.0, ..tp() }.validate().is_ok());
    }
}
