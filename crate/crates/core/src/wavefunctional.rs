//! Kink–antikink profiles, their thin-wall reduction, and normalized Gaussian
//! wavefunctionals over a single retained mode amplitude.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::numerics::{erf, integrate_adaptive};
use crate::potential::FieldProfile;
use crate::{Error, Result};

/// Default offset of the final-state centre above `2 pi`.
pub const DEFAULT_EPS_PLUS: f64 = 1e-3;

/// Soliton at `x_a`, antisoliton at `x_b`, wall steepness `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinkPairProfile {
    pub x_a: f64,
    pub x_b: f64,
    pub b: f64,
}

impl KinkPairProfile {
    pub fn new(x_a: f64, x_b: f64, b: f64) -> Result<Self> {
        let kp = Self { x_a, x_b, b };
        kp.validate()?;
        Ok(kp)
    }

    /// Pair of separation `l` centred on the origin.
    pub fn centered(l: f64, b: f64) -> Result<Self> {
        Self::new(-0.5 * l, 0.5 * l, b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_a.is_finite() && self.x_b.is_finite() && self.b.is_finite()) {
            return Err(Error::domain("kink pair parameters must be finite"));
        }
        if !(self.x_b > self.x_a) {
            return Err(Error::domain(format!(
                "need x_b > x_a, got x_a={} x_b={}",
                self.x_a, self.x_b
            )));
        }
        if !(self.b > 0.0) {
            return Err(Error::domain(format!(
                "wall steepness must be positive, got {}",
                self.b
            )));
        }
        Ok(())
    }

    /// Separation `L = x_b - x_a`.
    pub fn l(&self) -> f64 {
        self.x_b - self.x_a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.x_a + self.x_b)
    }
}

/// `tanh(b (x - x_a)) + tanh(b (x_b - x))`.
pub fn kink_pair_profile(x: f64, kp: &KinkPairProfile) -> f64 {
    (kp.b * (x - kp.x_a)).tanh() + (kp.b * (kp.x_b - x)).tanh()
}

/// Sine-Gordon kink `4 atan(exp(b (x - x0)))`, winding from 0 to `2 pi`.
pub fn sine_gordon_kink(x: f64, x0: f64, b: f64) -> f64 {
    4.0 * (b * (x - x0)).exp().atan()
}

/// `n` points of `[lo, hi]`, with both endpoints hit exactly.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect()
}

/// Samples the pair on a uniform grid over `[x_a - half_width, x_b + half_width]`.
pub fn sample_profile(kp: &KinkPairProfile, half_width: f64, n: usize) -> Result<FieldProfile> {
    kp.validate()?;
    if n < 2 {
        return Err(Error::domain(format!("need at least 2 samples, got {n}")));
    }
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(Error::domain(format!(
            "half width must be positive, got {half_width}"
        )));
    }
    let xs = linspace(kp.x_a - half_width, kp.x_b + half_width, n);
    let phis = xs.iter().map(|&x| kink_pair_profile(x, kp)).collect();
    FieldProfile::new(xs, phis)
}

/// Samples a single sine-Gordon kink centred at `x0` on `[x0 - half_width, x0 + half_width]`.
pub fn sample_single_kink(x0: f64, b: f64, half_width: f64, n: usize) -> Result<FieldProfile> {
    if n < 2 || !(half_width > 0.0) || !(b > 0.0) {
        return Err(Error::domain(
            "single kink needs n >= 2, half_width > 0 and b > 0",
        ));
    }
    let xs = linspace(x0 - half_width, x0 + half_width, n);
    let phis = xs.iter().map(|&x| sine_gordon_kink(x, x0, b)).collect();
    FieldProfile::new(xs, phis)
}

/// Centred box: `height` on the closed interval `|x| <= l/2`, zero outside.
pub fn thin_wall_box(x: f64, l: f64, height: f64) -> f64 {
    if x.abs() <= 0.5 * l {
        height
    } else {
        0.0
    }
}

/// Fourier amplitude of the unit-height thin-wall box, `sqrt(2/pi) sin(k L/2) / k`.
///
/// `|k| < 1e-12` returns the limit `sqrt(2/pi) L/2`. Arguments within a
/// relative `1e-12` of a node `k L/2 = n pi` return exactly zero.
pub fn thin_wall_ft(k: f64, l: f64) -> f64 {
    let amp = (2.0 / PI).sqrt();
    if k.abs() < 1e-12 {
        return amp * 0.5 * l;
    }
    let half_phase = 0.5 * k * l;
    let turns = half_phase / PI;
    let node = turns.round();
    if node != 0.0 && (turns - node).abs() <= 1e-12 * node.abs() {
        return 0.0;
    }
    amp * half_phase.sin() / k
}

/// Upper limit of the normalization integral, `L / sqrt(2 pi)`.
pub fn normalization_cutoff(l: f64) -> f64 {
    l / TAU.sqrt()
}

/// Constant `C` with `int_0^{u_max} C^2 exp(-2 alpha u^2) du = 1`, `u_max = L / sqrt(2 pi)`.
///
/// Closed form through `int_0^b exp(-a x^2) dx = sqrt(pi/a) erf(b sqrt(a)) / 2` with `a = 2 alpha`.
pub fn norm_constant(alpha: f64, l: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::domain(format!("L must be positive, got {l}")));
    }
    let a = 2.0 * alpha;
    let u_max = normalization_cutoff(l);
    let integral = 0.5 * (PI / a).sqrt() * erf(u_max * a.sqrt());
    Ok(integral.powf(-0.5))
}

/// Gaussian wavefunctional reduced to one collective coordinate `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionalSpec {
    pub alpha: f64,
    pub center: f64,
    pub norm_c: f64,
    pub u_max: f64,
}

impl WavefunctionalSpec {
    /// Width `alpha`, centre `center`, normalized on `[0, L / sqrt(2 pi)]`.
    pub fn normalized(alpha: f64, center: f64, l: f64) -> Result<Self> {
        let norm_c = norm_constant(alpha, l)?;
        let spec = Self {
            alpha,
            center,
            norm_c,
            u_max: normalization_cutoff(l),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// False-vacuum state centred at 0.
    pub fn initial(alpha: f64, l: f64) -> Result<Self> {
        Self::normalized(alpha, 0.0, l)
    }

    /// True-vacuum state centred at `2 pi + eps_plus`.
    pub fn final_state(alpha: f64, l: f64, eps_plus: f64) -> Result<Self> {
        Self::normalized(alpha, TAU + eps_plus, l)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.norm_c > 0.0 && self.u_max > 0.0) || !self.center.is_finite()
        {
            return Err(Error::domain(
                "wavefunctional needs alpha, norm_c, u_max > 0 and a finite centre",
            ));
        }
        Ok(())
    }

    /// `d^2 Psi / du^2 = Psi (4 alpha^2 (u - c)^2 - 2 alpha)`.
    pub fn second_derivative(&self, u: f64) -> f64 {
        let d = u - self.center;
        eval_wavefunctional(u, self) * (4.0 * self.alpha * self.alpha * d * d - 2.0 * self.alpha)
    }

    /// `int_0^{u_max} C^2 exp(-2 alpha u^2) du - 1` by adaptive quadrature.
    pub fn normalization_residual(&self, tol: f64) -> Result<f64> {
        let (c2, a) = (self.norm_c * self.norm_c, self.alpha);
        let integral = integrate_adaptive(|u| c2 * (-2.0 * a * u * u).exp(), 0.0, self.u_max, tol)?;
        Ok(integral - 1.0)
    }
}

/// `C exp(-alpha (u - center)^2)`.
pub fn eval_wavefunctional(u: f64, spec: &WavefunctionalSpec) -> f64 {
    let d = u - spec.center;
    spec.norm_c * (-spec.alpha * d * d).exp()
}
