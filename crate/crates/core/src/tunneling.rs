//! Tunneling matrix elements between the false- and true-vacuum
//! wavefunctionals, and the current they carry in each transport channel.
//!
//! Units have `hbar = 1`. The closed forms are evaluated in log space so
//! that `cosh` growth and exponential suppression never overflow separately.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::numerics::integrate_adaptive;
use crate::wavefunctional::{eval_wavefunctional, norm_constant, WavefunctionalSpec};
use crate::{Error, Result};

/// `t_if_analytic(n1 = 1) / t_if_simplified`. The simplified form drops the
/// `(n1^2 - n1^4/2) = 1/2` prefactor instead of absorbing it.
pub const ANALYTIC_TO_SIMPLIFIED_RATIO: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixElementInputs {
    /// Observer reference point.
    pub x_bar: f64,
    /// Pair separation.
    pub l: f64,
    /// Gaussian width coefficient.
    pub alpha: f64,
    /// Occupation-like factor, `1 - eps`.
    pub n1: f64,
    /// Normalization constant of the initial wavefunctional.
    pub c1_norm: f64,
    /// Normalization constant of the final wavefunctional.
    pub c2_norm: f64,
    pub m_star: f64,
}

impl MatrixElementInputs {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.x_bar,
            self.l,
            self.alpha,
            self.n1,
            self.c1_norm,
            self.c2_norm,
            self.m_star,
        ];
        if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::domain(
                "matrix element inputs must all be positive and finite",
            ));
        }
        if self.n1 > 1.0 {
            return Err(Error::domain(format!(
                "n1 must not exceed 1, got {}",
                self.n1
            )));
        }
        Ok(())
    }

    /// Inputs for pair separation `l` whose exponent `alpha L^2 / 2 x_bar`
    /// equals the overlap exponent `alpha Delta^2 / 2` of two Gaussians
    /// `separation` apart: `alpha = 1/L`, `x_bar = (L / separation)^2`,
    /// both normalization constants from [`norm_constant`], `n1 = m* = 1`.
    pub fn matched(l: f64, separation: f64) -> Result<Self> {
        if !(separation > 0.0) {
            return Err(Error::domain("separation must be positive"));
        }
        let alpha = 1.0 / l;
        let c = norm_constant(alpha, l)?;
        let inputs = Self {
            x_bar: (l / separation).powi(2),
            l,
            alpha,
            n1: 1.0,
            c1_norm: c,
            c2_norm: c,
            m_star: 1.0,
        };
        inputs.validate()?;
        Ok(inputs)
    }

    fn cosh_argument(&self) -> f64 {
        2.0 * (self.x_bar / (2.0 * self.l)).sqrt() - (self.l / (2.0 * self.x_bar)).sqrt()
    }

    fn decay_exponent(&self) -> f64 {
        self.alpha * self.l * (self.l / (2.0 * self.x_bar))
    }
}

/// `ln cosh(a)` without overflow.
pub(crate) fn ln_cosh(a: f64) -> f64 {
    let a = a.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Natural log of [`t_if_simplified`].
pub fn ln_t_if_simplified(inputs: &MatrixElementInputs) -> Result<f64> {
    inputs.validate()?;
    Ok(
        (inputs.c1_norm * inputs.c2_norm / inputs.m_star).ln() + ln_cosh(inputs.cosh_argument())
            - inputs.decay_exponent(),
    )
}

/// Natural log of [`t_if_analytic`].
pub fn ln_t_if_analytic(inputs: &MatrixElementInputs) -> Result<f64> {
    let n2 = inputs.n1 * inputs.n1;
    let occupation = n2 - 0.5 * n2 * n2;
    Ok(ln_t_if_simplified(inputs)? + occupation.ln())
}

/// `(2 / 2m*) (n1^2 - n1^4/2) C1 C2 cosh(2 sqrt(x/2L) - sqrt(L/2x)) exp(-alpha L (L/2x))`.
pub fn t_if_analytic(inputs: &MatrixElementInputs) -> Result<f64> {
    ln_t_if_analytic(inputs).map(f64::exp)
}

/// `(C1 C2 / m*) cosh(2 sqrt(x/2L) - sqrt(L/2x)) exp(-alpha L (L/2x))`.
pub fn t_if_simplified(inputs: &MatrixElementInputs) -> Result<f64> {
    ln_t_if_simplified(inputs).map(f64::exp)
}

/// Matrix element by direct quadrature over the collective coordinate:
///
/// `| (1/2m*) int [Psi_i Psi_f'' - Psi_f Psi_i''] theta(u - u0) du |`
///
/// with second derivatives taken from the Gaussian forms. `u0` defaults to
/// the midpoint of the two centres.
pub fn t_if_single_mode_oracle(
    spec_i: &WavefunctionalSpec,
    spec_f: &WavefunctionalSpec,
    u0: Option<f64>,
    m_star: f64,
) -> Result<f64> {
    spec_i.validate()?;
    spec_f.validate()?;
    if !(m_star > 0.0) {
        return Err(Error::domain(format!(
            "effective mass must be positive, got {m_star}"
        )));
    }
    let u0 = u0.unwrap_or(0.5 * (spec_i.center + spec_f.center));
    let reach = 12.0 / spec_i.alpha.min(spec_f.alpha).sqrt();
    let upper = spec_i.center.max(spec_f.center).max(u0) + reach;

    let curvature = |s: &WavefunctionalSpec, u: f64| {
        let d = u - s.center;
        4.0 * s.alpha * s.alpha * d * d - 2.0 * s.alpha
    };
    let integrand = |u: f64| {
        let overlap = eval_wavefunctional(u, spec_i) * eval_wavefunctional(u, spec_f);
        overlap * (curvature(spec_f, u) - curvature(spec_i, u)) / (2.0 * m_star)
    };

    let probes = 256;
    let peak = (0..=probes)
        .map(|i| integrand(u0 + (upper - u0) * i as f64 / probes as f64).abs())
        .fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let tol = 1e-12 * peak * (upper - u0);
    Ok(integrate_adaptive(integrand, u0, upper, tol)?.abs())
}

/// Transport channel through which a matrix element carries current.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    /// Coherent first-order transfer of bosons: `J = |T|`.
    BosonCoherent,
    /// Golden-rule quasiparticle tunneling: `J = 2 pi |T|^2 rho`.
    Quasiparticle,
}

pub fn current_from_matrix_element(t: f64, channel: Channel, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::domain(format!(
            "density of states must be non-negative, got {rho}"
        )));
    }
    Ok(match channel {
        Channel::BosonCoherent => t.abs(),
        Channel::Quasiparticle => 2.0 * PI * t * t * rho,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn inputs() -> MatrixElementInputs {
        MatrixElementInputs {
            x_bar: 1.0,
            l: 8.0,
            alpha: 0.125,
            n1: 1.0,
            c1_norm: 1.0,
            c2_norm: 1.0,
            m_star: 1.0,
        }
    }

    #[test]
    fn analytic_reference_value() {
        // mpmath: (1/2) cosh(1.5) exp(-4)
        let v = t_if_analytic(&inputs()).unwrap();
        assert!((v - 0.021_542_942_515_590_715_540_748).abs() < 1e-15);
        let v19 = t_if_simplified(&inputs()).unwrap();
        assert!((v19 - 0.043_085_885_031_181_431_081_497).abs() < 1e-15);
    }

    #[test]
    fn occupation_prefactor_at_unity() {
        let r = t_if_analytic(&inputs()).unwrap() / t_if_simplified(&inputs()).unwrap();
        assert!((r - ANALYTIC_TO_SIMPLIFIED_RATIO).abs() < 1e-15);
    }

    #[test]
    fn doubling_alpha() {
        let base = inputs();
        let doubled = MatrixElementInputs {
            alpha: 2.0 * base.alpha,
            ..base
        };
        let expected = (-base.alpha * base.l * base.l / (2.0 * base.x_bar)).exp();
        let r = t_if_analytic(&doubled).unwrap() / t_if_analytic(&base).unwrap();
        assert!((r / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_in_normalization_product() {
        let base = inputs();
        let scaled = MatrixElementInputs {
            c1_norm: 3.0,
            c2_norm: 0.5,
            ..base
        };
        let r = t_if_simplified(&scaled).unwrap() / t_if_simplified(&base).unwrap();
        assert!((r - 1.5).abs() < 1e-14);
    }

    #[test]
    fn suppressed_for_long_pairs() {
        let mut prev = f64::INFINITY;
        for ratio in [10.0, 100.0, 1e3, 1e4, 1e5] {
            let inp = MatrixElementInputs {
                x_bar: 1.0,
                l: ratio,
                alpha: 1.0 / ratio,
                ..inputs()
            };
            let v = ln_t_if_simplified(&inp).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < -4e4);
    }

    #[test]
    fn validation() {
        assert!(t_if_analytic(&MatrixElementInputs {
            n1: 1.1,
            ..inputs()
        })
        .is_err());
        assert!(t_if_analytic(&MatrixElementInputs {
            x_bar: 0.0,
            ..inputs()
        })
        .is_err());
        assert!(t_if_simplified(&MatrixElementInputs {
            m_star: -1.0,
            ..inputs()
        })
        .is_err());
    }

    #[test]
    fn oracle_vanishes_for_identical_states() {
        let s = WavefunctionalSpec::normalized(0.5, 1.0, 4.0).unwrap();
        assert_eq!(t_if_single_mode_oracle(&s, &s, None, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn oracle_is_symmetric_under_exchange() {
        let a = WavefunctionalSpec::normalized(0.4, 0.0, 5.0).unwrap();
        let b = WavefunctionalSpec::normalized(0.4, TAU, 5.0).unwrap();
        let ab = t_if_single_mode_oracle(&a, &b, None, 1.0).unwrap();
        let ba = t_if_single_mode_oracle(&b, &a, None, 1.0).unwrap();
        assert!(((ab - ba) / ab).abs() < 1e-10);
    }

    #[test]
    fn oracle_matches_equal_width_closed_form() {
        // For equal widths and u0 at the midpoint the integral reduces to
        // (alpha Delta / m*) C_i C_f exp(-alpha Delta^2 / 2).
        for (alpha, delta, m) in [(0.3, 2.0, 1.0), (1.0, TAU, 2.0), (0.1, 9.0, 0.5)] {
            let a = WavefunctionalSpec::normalized(alpha, 0.0, 3.0).unwrap();
            let b = WavefunctionalSpec::normalized(alpha, delta, 3.0).unwrap();
            let got = t_if_single_mode_oracle(&a, &b, None, m).unwrap();
            let want =
                alpha * delta / m * a.norm_c * b.norm_c * (-alpha * delta * delta / 2.0).exp();
            assert!(((got - want) / want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn matched_inputs_share_the_overlap_exponent() {
        let inp = MatrixElementInputs::matched(4.0, TAU).unwrap();
        let overlap = inp.alpha * TAU * TAU / 2.0;
        assert!((inp.decay_exponent() - overlap).abs() < 1e-12);
    }

    #[test]
    fn channels() {
        for ch in [Channel::BosonCoherent, Channel::Quasiparticle] {
            assert_eq!(current_from_matrix_element(0.0, ch, 1.0).unwrap(), 0.0);
        }
        let b = |t| current_from_matrix_element(t, Channel::BosonCoherent, 0.7).unwrap();
        let q = |t| current_from_matrix_element(t, Channel::Quasiparticle, 0.7).unwrap();
        assert_eq!(b(0.6), 2.0 * b(0.3));
        assert!((q(0.6) - 4.0 * q(0.3)).abs() < 1e-15);
        assert_eq!(b(-0.5), 0.5);
        assert!(current_from_matrix_element(1.0, Channel::Quasiparticle, -1.0).is_err());
    }

    #[test]
    fn ln_cosh_is_stable() {
        assert!((ln_cosh(0.3) - 0.3f64.cosh().ln()).abs() < 1e-15);
        assert!((ln_cosh(-2000.0) - (2000.0 - std::f64::consts::LN_2)).abs() < 1e-12);
    }
}
