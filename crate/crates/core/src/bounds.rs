//! Error and success-probability bounds for the expectation-value
//! algorithm, evaluated from window overlaps.
//!
//! Notation: `p = |<rho_0^+|0>|^2` and `max_contam` is the largest
//! contaminating overlap `|<0|rho_j^+-|>` over `j > 0` together with
//! `|<0|rho_0^-|>`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs shared by the error and success bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub p: f64,
    pub max_contam: f64,
    pub n_o: u32,
    pub c: f64,
}

impl BoundInputs {
    pub fn new(p: f64, max_contam: f64, n_o: u32, c: f64) -> Result<Self> {
        let inputs = BoundInputs { p, max_contam, n_o, c };
        inputs.validate()?;
        Ok(inputs)
    }

    /// Uses the default constant `c = sqrt(p) * max_contam`.
    pub fn with_default_c(p: f64, max_contam: f64, n_o: u32) -> Result<Self> {
        Self::new(p, max_contam, n_o, default_c(p, max_contam))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p <= 1.0 + 1e-12) {
            return Err(Error::Domain(format!("p must lie in (0, 1], got {}", self.p)));
        }
        if !(0.0..=1.0 + 1e-12).contains(&self.max_contam) {
            return Err(Error::Domain(format!("max_contam must lie in [0, 1], got {}", self.max_contam)));
        }
        if !(self.c >= 0.0) || !self.c.is_finite() {
            return Err(Error::Domain(format!("c must be a finite non-negative number, got {}", self.c)));
        }
        Ok(())
    }
}

/// `c = sqrt(p) * max_contam`.
pub fn default_c(p: f64, max_contam: f64) -> f64 {
    p.sqrt() * max_contam
}

/// `2^(-n_o)`, exact for every `u32`.
fn outer_resolution(n_o: u32) -> f64 {
    (-(n_o as f64)).exp2()
}

/// `(3 pi 2^-n_o + 8 sqrt(p) max_contam + c) / p`.
pub fn error_bound(inputs: &BoundInputs) -> Result<f64> {
    inputs.validate()?;
    let BoundInputs { p, max_contam, n_o, c } = *inputs;
    Ok((3.0 * PI * outer_resolution(n_o) + 8.0 * p.sqrt() * max_contam + c) / p)
}

/// `p (1 - 32 max_contam^2 / c)`, floored at 0. Degenerate at `c = 0`.
pub fn success_bound(inputs: &BoundInputs) -> Result<f64> {
    inputs.validate()?;
    if inputs.c == 0.0 {
        return Err(Error::Domain(
            "success bound is degenerate at c = 0: the Davis-Kahan eigenvector bound gives no information".into(),
        ));
    }
    Ok((inputs.p * (1.0 - 32.0 * inputs.max_contam * inputs.max_contam / inputs.c)).max(0.0))
}

/// Perturbation radius `nu = 2 sqrt(p) max_contam` around `F_00 p`.
pub fn nu(p: f64, max_contam: f64) -> f64 {
    2.0 * p.sqrt() * max_contam
}

/// Error bound with `c = sqrt(p) max_contam` substituted:
/// `(3 pi 2^-n_o + 9 sqrt(p) max_contam) / p`.
pub fn error_bound_default_c(p: f64, max_contam: f64, n_o: u32) -> Result<f64> {
    BoundInputs::new(p, max_contam, n_o, 0.0)?;
    Ok((3.0 * PI * outer_resolution(n_o) + 9.0 * p.sqrt() * max_contam) / p)
}

/// Success bound with `c = sqrt(p) max_contam` substituted:
/// `p (1 - 32 max_contam / sqrt(p))`, floored at 0.
pub fn success_bound_default_c(p: f64, max_contam: f64) -> Result<f64> {
    BoundInputs::new(p, max_contam, 0, 0.0)?;
    if max_contam == 0.0 {
        return Ok(p);
    }
    Ok((p * (1.0 - 32.0 * max_contam / p.sqrt())).max(0.0))
}

/// The three error contributions before they are collapsed into the bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorDecomposition {
    /// `4 eps_1 / p` with `eps_1 = 2 sqrt(p) max_contam`.
    pub reflection: f64,
    /// Pre-learning error in `p` propagated to the estimate: `pi 2^-n_o / p`.
    pub prelearning: f64,
    /// Outer-QPE rounding `2^-(n_o+1)` carried through
    /// `d(omega^2) = 2 pi sqrt(omega^2 (1 - omega^2)) d(theta)`.
    pub oqpe: f64,
    pub total: f64,
}

pub fn error_decomposition(p: f64, max_contam: f64, n_o: u32, omega_sq: f64) -> Result<ErrorDecomposition> {
    BoundInputs::new(p, max_contam, n_o, 0.0)?;
    if !(0.0..=1.0).contains(&omega_sq) {
        return Err(Error::Domain(format!("omega^2 must lie in [0, 1], got {omega_sq}")));
    }
    let eps1 = nu(p, max_contam);
    let half_bin = outer_resolution(n_o) / 2.0;
    let reflection = 4.0 * eps1 / p;
    let prelearning = PI * outer_resolution(n_o) / p;
    let oqpe = 4.0 / p * 2.0 * PI * (omega_sq * (1.0 - omega_sq)).sqrt() * half_bin;
    Ok(ErrorDecomposition { reflection, prelearning, oqpe, total: reflection + prelearning + oqpe })
}
