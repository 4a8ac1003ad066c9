//! Phase-register window states.
//!
//! A window is the first column of the register preparation unitary: a
//! normalized, nonnegative amplitude vector over the `2^n` basis states.
//! Kaiser tapers are evaluated on the centered grid
//! `xbar = (2x - (N-1)) / (N-1)`, so every window is symmetric about the
//! register center.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::bessel_i0_scaled;

/// Largest register materialized as a dense amplitude vector.
pub const MAX_WINDOW_QUBITS: u32 = 26;

/// Default cap on the Kaiser bandwidth in resource estimates.
pub const DEFAULT_BETA_MAX: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Rectangular,
    Kaiser,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub kind: WindowKind,
    /// Kaiser bandwidth; ignored for rectangular windows.
    pub beta: f64,
}

impl WindowSpec {
    pub fn rectangular() -> Self {
        Self { kind: WindowKind::Rectangular, beta: 0.0 }
    }

    pub fn kaiser(beta: f64) -> Self {
        Self { kind: WindowKind::Kaiser, beta }
    }

    /// True when the taper is flat, i.e. rectangular or Kaiser with `beta = 0`.
    pub fn is_flat(&self) -> bool {
        self.kind == WindowKind::Rectangular || self.beta == 0.0
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WindowKind::Rectangular => write!(f, "rectangular"),
            WindowKind::Kaiser => write!(f, "kaiser(beta={})", self.beta),
        }
    }
}

/// Normalized amplitudes `W_0(x)` for `x = 0..2^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowVector {
    n: u32,
    amplitudes: Vec<f64>,
    spec: Option<WindowSpec>,
}

impl WindowVector {
    /// Wraps caller-supplied amplitudes; they must already be unit-norm.
    pub fn from_amplitudes(amplitudes: Vec<f64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "window length must be a power of two >= 2, got {len}"
            )));
        }
        let w = Self { n: len.trailing_zeros(), amplitudes, spec: None };
        w.check_normalized()?;
        Ok(w)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// The generating spec, if the window came from [`make_window`].
    pub fn spec(&self) -> Option<WindowSpec> {
        self.spec
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    /// Errors unless the squared amplitudes sum to one within 1e-12.
    pub fn check_normalized(&self) -> Result<()> {
        let s = self.norm_sqr();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::Contract(format!("window is not normalized: sum of squares = {s}")));
        }
        Ok(())
    }
}

/// Builds the normalized window on `n` qubits.
pub fn make_window(spec: WindowSpec, n: u32) -> Result<WindowVector> {
    if n == 0 {
        return Err(Error::Parameter("window needs at least one qubit".into()));
    }
    if n > MAX_WINDOW_QUBITS {
        return Err(Error::Parameter(format!(
            "window on {n} qubits exceeds the dense limit of {MAX_WINDOW_QUBITS}"
        )));
    }
    if !(spec.beta >= 0.0 && spec.beta.is_finite()) {
        return Err(Error::Parameter(format!("Kaiser beta must be finite and >= 0, got {}", spec.beta)));
    }
    let len = 1usize << n;
    let raw: Vec<f64> = if spec.is_flat() {
        vec![1.0; len]
    } else {
        let beta = spec.beta;
        let denom = bessel_i0_scaled(beta)?;
        let span = (len - 1) as f64;
        (0..len)
            .map(|x| {
                let xbar = (2.0 * x as f64 - span) / span;
                let arg = beta * (1.0 - xbar * xbar).max(0.0).sqrt();
                // I0(arg)/I0(beta) from exponentially scaled values.
                bessel_i0_scaled(arg).map(|v| v / denom * (arg - beta).exp())
            })
            .collect::<Result<_>>()?
    };
    let norm = raw.iter().map(|a| a * a).sum::<f64>().sqrt();
    let amplitudes = raw.into_iter().map(|a| a / norm).collect();
    Ok(WindowVector { n, amplitudes, spec: Some(spec) })
}

/// Bandwidth whose first spectral null sits `2^m` bins from the peak:
/// `pi * sqrt(4^m - 1)`.
pub fn optimal_beta(m: u32) -> f64 {
    PI * (4f64.powi(m as i32) - 1.0).sqrt()
}

pub fn capped_beta(m: u32, beta_max: f64) -> f64 {
    optimal_beta(m).min(beta_max)
}

/// Window selection as written on the command line:
/// `rect`, `kaiser:<beta>` or `kaiser:auto`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum WindowChoice {
    Rectangular,
    Kaiser(f64),
    /// `capped_beta(m, beta_max)` for the `m` in use.
    KaiserAuto,
}

impl WindowChoice {
    pub fn spec_for(&self, m: u32, beta_max: f64) -> WindowSpec {
        match *self {
            WindowChoice::Rectangular => WindowSpec::rectangular(),
            WindowChoice::Kaiser(beta) => WindowSpec::kaiser(beta),
            WindowChoice::KaiserAuto => WindowSpec::kaiser(capped_beta(m, beta_max)),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            WindowChoice::Rectangular => "rectangular",
            _ => "kaiser",
        }
    }
}

impl fmt::Display for WindowChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowChoice::Rectangular => write!(f, "rect"),
            WindowChoice::Kaiser(b) => write!(f, "kaiser:{b}"),
            WindowChoice::KaiserAuto => write!(f, "kaiser:auto"),
        }
    }
}

impl FromStr for WindowChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "rect" | "rectangular" => Ok(WindowChoice::Rectangular),
            "kaiser:auto" | "kaiser" => Ok(WindowChoice::KaiserAuto),
            other => {
                let beta = other
                    .strip_prefix("kaiser:")
                    .and_then(|b| b.parse::<f64>().ok())
                    .filter(|b| *b >= 0.0 && b.is_finite())
                    .ok_or_else(|| {
                        Error::Config(format!("unknown window `{other}` (rect | kaiser:<beta> | kaiser:auto)"))
                    })?;
                Ok(WindowChoice::Kaiser(beta))
            }
        }
    }
}

impl From<WindowChoice> for String {
    fn from(w: WindowChoice) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for WindowChoice {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct evaluation of the Kaiser taper with its own Bessel series.
    fn kaiser_oracle(beta: f64, n: u32) -> Vec<f64> {
        fn i0(x: f64) -> f64 {
            let mut sum = 0.0;
            let mut fact = 1.0_f64;
            for k in 0..120 {
                if k > 0 {
                    fact *= k as f64;
                }
                let t = (x / 2.0).powi(k) / fact;
                sum += t * t;
            }
            sum
        }
        let len = 1usize << n;
        let span = (len - 1) as f64;
        let raw: Vec<f64> = (0..len)
            .map(|x| {
                let xb = (2.0 * x as f64 - span) / span;
                i0(beta * (1.0 - xb * xb).max(0.0).sqrt()) / i0(beta)
            })
            .collect();
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        raw.iter().map(|v| v / norm).collect()
    }

    #[test]
    fn rectangular_is_uniform() {
        let w = make_window(WindowSpec::rectangular(), 3).unwrap();
        assert_eq!(w.len(), 8);
        for &a in w.amplitudes() {
            assert!((a - 1.0 / 8f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn kaiser_zero_beta_is_rectangular() {
        let k = make_window(WindowSpec::kaiser(0.0), 4).unwrap();
        let r = make_window(WindowSpec::rectangular(), 4).unwrap();
        assert_eq!(k.amplitudes(), r.amplitudes());
    }

    #[test]
    fn kaiser_matches_direct_evaluation() {
        let w = make_window(WindowSpec::kaiser(5.4414), 5).unwrap();
        let want = kaiser_oracle(5.4414, 5);
        for (a, b) in w.amplitudes().iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn large_beta_stays_finite() {
        let w = make_window(WindowSpec::kaiser(optimal_beta(10)), 12).unwrap();
        assert!(w.amplitudes().iter().all(|a| a.is_finite() && *a >= 0.0));
        assert!((w.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn optimal_beta_values() {
        assert_eq!(optimal_beta(0), 0.0);
        assert!((optimal_beta(1) - 5.441_398).abs() < 1e-6);
        assert!((optimal_beta(2) - 12.167_336).abs() < 1e-6);
        for m in 0..20 {
            assert!(optimal_beta(m + 1) > optimal_beta(m));
        }
        let ratio = optimal_beta(10) / 1024.0;
        assert!((ratio - PI).abs() / PI < 0.01);
    }

    #[test]
    fn capped_beta_cases() {
        assert!((capped_beta(1, 100.0) - optimal_beta(1)).abs() < 1e-15);
        assert_eq!(capped_beta(5, 10.0), 10.0);
        assert_eq!(capped_beta(0, 10.0), 0.0);
    }

    #[test]
    fn concentration_increases_with_beta() {
        let n = 6;
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..40 {
            let w = make_window(WindowSpec::kaiser(0.5 * i as f64), n).unwrap();
            let a = w.amplitudes();
            let center = a[a.len() / 2];
            let edge = a[0];
            if let Some((c, e)) = prev {
                assert!(center > c && edge < e, "beta step {i}");
            }
            prev = Some((center, edge));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(make_window(WindowSpec::rectangular(), 0).is_err());
        assert!(make_window(WindowSpec::kaiser(-1.0), 3).is_err());
        assert!(WindowVector::from_amplitudes(vec![1.0, 1.0]).is_err());
        assert!(WindowVector::from_amplitudes(vec![1.0, 0.0, 0.0]).is_err());
        assert!(WindowVector::from_amplitudes(vec![1.0, 0.0]).is_ok());
    }

    #[test]
    fn window_choice_parses() {
        assert_eq!("rect".parse::<WindowChoice>().unwrap(), WindowChoice::Rectangular);
        assert_eq!("kaiser:auto".parse::<WindowChoice>().unwrap(), WindowChoice::KaiserAuto);
        assert_eq!("kaiser:6.5".parse::<WindowChoice>().unwrap(), WindowChoice::Kaiser(6.5));
        assert!("hann".parse::<WindowChoice>().is_err());
        assert!("kaiser:-2".parse::<WindowChoice>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn unit_norm_nonnegative_symmetric(beta in 0.0f64..60.0, n in 1u32..11) {
                let w = make_window(WindowSpec::kaiser(beta), n).unwrap();
                prop_assert!((w.norm_sqr() - 1.0).abs() < 1e-12);
                let a = w.amplitudes();
                let len = a.len();
                for x in 0..len {
                    prop_assert!(a[x] >= 0.0);
                    prop_assert!((a[x] - a[len - 1 - x]).abs() < 1e-12);
                }
            }
        }
    }
}
