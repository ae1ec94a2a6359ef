//! Potential-energy functions, gap energy, winding number and the
//! Bogomol'nyi bound diagnostic for sampled field profiles.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Coefficients of the extended sine-Gordon potential, the driven
/// sine-Gordon potential and the quadratic Hamiltonian density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PotentialParams {
    /// Quadratic coefficient of the extended potential.
    pub c1: f64,
    /// Quartic coefficient of the extended potential.
    pub c2: f64,
    /// Vacuum phase the extended potential is built around (radians).
    pub phi0: f64,
    /// Classical `(1 - cos phi)` coefficient.
    pub d1: f64,
    /// Quantum `phi^2` coefficient.
    pub d2: f64,
    /// Mass parameter of the Hamiltonian density.
    pub mu: f64,
    /// Shift of the quadratic mass term.
    pub varphi: f64,
    /// Subtraction constant `I0(mu)`.
    pub i0: f64,
}

impl Default for PotentialParams {
    /// `d1 / d2 = 100`; `phi0 = 2` places the minimum of the extended
    /// potential at the saturated plateau of a kink-antikink pair.
    fn default() -> Self {
        Self {
            c1: 1.0,
            c2: 0.25,
            phi0: 2.0,
            d1: 100.0,
            d2: 1.0,
            mu: 1.0,
            varphi: 0.0,
            i0: 0.0,
        }
    }
}

impl PotentialParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.c1,
            self.c2,
            self.phi0,
            self.d1,
            self.d2,
            self.mu,
            self.varphi,
            self.i0,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("potential parameters must be finite"));
        }
        if self.d1 < 0.0 || self.d2 < 0.0 || self.mu < 0.0 {
            return Err(Error::domain("d1, d2 and mu must be non-negative"));
        }
        Ok(())
    }
}

/// `C1 (phi - phi0)^2 - 4 C2 phi phi0 (phi - phi0)^2 + C2 (phi^2 - phi0^2)^2`.
///
/// Algebraically this is `(phi - phi0)^2 [C1 + C2 (phi - phi0)^2]`, so for
/// non-negative coefficients it is a single well centred on `phi0`. The term
/// by term form is kept for evaluation.
pub fn eval_extended_potential(phi: f64, p: &PotentialParams) -> f64 {
    let d = phi - p.phi0;
    let s = phi * phi - p.phi0 * p.phi0;
    p.c1 * d * d - 4.0 * p.c2 * phi * p.phi0 * d * d + p.c2 * s * s
}

/// `D1 (1 - cos phi) + D2 phi^2`.
pub fn eval_driven_sg(phi: f64, p: &PotentialParams) -> f64 {
    p.d1 * (1.0 - phi.cos()) + p.d2 * phi * phi
}

/// `pi^2/2 + (d_x phi)^2/2 + mu^2 (phi - varphi)^2/2 - I0/2`.
pub fn hamiltonian_density(phi: f64, momentum: f64, dphi_dx: f64, p: &PotentialParams) -> f64 {
    let shift = phi - p.varphi;
    0.5 * momentum * momentum + 0.5 * dphi_dx * dphi_dx + 0.5 * p.mu * p.mu * shift * shift
        - 0.5 * p.i0
}

/// Gap energy `V_E(phi_f) - V_E(phi_t)` between the false and true vacuum phases.
pub fn delta_e_gap(p: &PotentialParams, phi_f: f64, phi_t: f64) -> f64 {
    eval_extended_potential(phi_f, p) - eval_extended_potential(phi_t, p)
}

/// The bracket quantity of the bound, twice the gap energy.
pub fn braces(p: &PotentialParams, phi_f: f64, phi_t: f64) -> f64 {
    2.0 * delta_e_gap(p, phi_f, phi_t)
}

/// Gaussian width coefficient from the pair separation, `alpha = 1 / L`.
pub fn alpha_from_separation(l: f64) -> Result<f64> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::domain(format!(
            "pair separation must be positive and finite, got {l}"
        )));
    }
    Ok(1.0 / l)
}

/// A field sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile")]
pub struct FieldProfile {
    xs: Vec<f64>,
    phis: Vec<f64>,
}

#[derive(Deserialize)]
struct RawProfile {
    xs: Vec<f64>,
    phis: Vec<f64>,
}

impl TryFrom<RawProfile> for FieldProfile {
    type Error = Error;
    fn try_from(raw: RawProfile) -> Result<Self> {
        FieldProfile::new(raw.xs, raw.phis)
    }
}

impl FieldProfile {
    pub fn new(xs: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::domain(format!(
                "profile needs at least 2 points, got {}",
                xs.len()
            )));
        }
        if xs.len() != phis.len() {
            return Err(Error::domain(format!(
                "grid has {} points but field has {}",
                xs.len(),
                phis.len()
            )));
        }
        if xs.iter().any(|x| !x.is_finite()) || phis.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("profile values must be finite"));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("profile grid must be strictly increasing"));
        }
        Ok(Self { xs, phis })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `d phi / dx` at the grid nodes: three-point differences inside,
    /// one-sided at the ends.
    pub fn gradient(&self) -> Vec<f64> {
        let (x, y) = (&self.xs, &self.phis);
        let n = x.len();
        let mut g = vec![0.0; n];
        g[0] = (y[1] - y[0]) / (x[1] - x[0]);
        g[n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            g[i] = (h0 * h0 * y[i + 1] + (h1 * h1 - h0 * h0) * y[i] - h1 * h1 * y[i - 1])
                / (h0 * h1 * (h0 + h1));
        }
        g
    }

    /// Trapezoid rule of `f(x_i, phi_i, phi'_i)` over the grid.
    pub fn integrate<F: Fn(f64, f64, f64) -> f64>(&self, f: F) -> f64 {
        let g = self.gradient();
        let vals: Vec<f64> = (0..self.len())
            .map(|i| f(self.xs[i], self.phis[i], g[i]))
            .collect();
        self.xs
            .windows(2)
            .zip(vals.windows(2))
            .map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0] + v[1]))
            .sum()
    }

    /// Grid-averaged field, `int phi dx / (x_last - x_first)`.
    pub fn mean(&self) -> f64 {
        let span = self.xs[self.len() - 1] - self.xs[0];
        self.integrate(|_, phi, _| phi) / span
    }
}

/// Winding number `(phi(x_last) - phi(x_first)) / 2 pi`.
pub fn topological_charge(profile: &FieldProfile) -> f64 {
    let phis = profile.phis();
    (phis[phis.len() - 1] - phis[0]) / (2.0 * PI)
}

/// Static Euclidean energy `int [ (d_x phi)^2 / 2 + V_E(phi) ] dx` of the profile.
pub fn static_energy(profile: &FieldProfile, p: &PotentialParams) -> f64 {
    profile.integrate(|_, phi, dphi| 0.5 * dphi * dphi + eval_extended_potential(phi, p))
}

/// Both sides of the Bogomol'nyi-type bound `L_E >= |Q| + (phi0 - phi_c)^2 {} / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lhs: f64,
    pub q_abs: f64,
    pub rhs: f64,
    pub braces: f64,
    pub satisfied: bool,
}

pub fn bogomolnyi_check(
    profile: &FieldProfile,
    p: &PotentialParams,
    phi_c: f64,
    phi_f: f64,
    phi_t: f64,
) -> BoundReport {
    let lhs = static_energy(profile, p);
    let q_abs = topological_charge(profile).abs();
    let braces = braces(p, phi_f, phi_t);
    let shift = p.phi0 - phi_c;
    let rhs = q_abs + 0.5 * shift * shift * braces;
    let satisfied = lhs >= rhs - 1e-9 * rhs.abs().max(1.0);
    BoundReport {
        lhs,
        q_abs,
        rhs,
        braces,
        satisfied,
    }
}
