//! Exact phase-register statistics for window-assisted phase estimation.
//!
//! Phase offsets are in cycles. For a window `W` on `N = 2^n` points the
//! register amplitude left at bin 0 by an offset `y` is
//! `(1/sqrt(N)) * sum_x W(x) exp(-2 pi i y x)`, and the probability of
//! reading bin `k` for a true phase `phi` is the squared modulus of that
//! amplitude at `y = phi - k/N`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::windows::WindowVector;

/// Grid points per bin used by contamination and failure scans.
pub const SCAN_OVERSAMPLING: usize = 64;

/// Largest register for which a tapered window is scanned by FFT.
pub const MAX_SCAN_QUBITS: u32 = 22;

const FFT_DISTRIBUTION_QUBITS: u32 = 10;
const REFINE_CANDIDATES: usize = 8;

/// Probability mass over the `2^n` readout bins for a fixed true phase.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseDistribution {
    pub n: u32,
    pub phi: f64,
    pub mass: Vec<f64>,
}

impl PhaseDistribution {
    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }
}

/// Overlap magnitudes sampled over phase offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapProfile {
    pub window: WindowVector,
    /// `(y, |<0|rho(y)>|)` pairs.
    pub samples: Vec<(f64, f64)>,
}

/// Location and value of the largest contaminating overlap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContaminationPeak {
    pub y: f64,
    pub value: f64,
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

impl CompensatedSum {
    fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, &mut self.re_c, z.re);
        neumaier(&mut self.im, &mut self.im_c, z.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

fn neumaier(sum: &mut f64, comp: &mut f64, v: f64) {
    let t = *sum + v;
    if sum.abs() >= v.abs() {
        *comp += (*sum - t) + v;
    } else {
        *comp += (v - t) + *sum;
    }
    *sum = t;
}

/// Fractional part of `y * x` without losing the low-order product bits.
fn frac_product(y: f64, x: f64) -> f64 {
    let p = y * x;
    let e = y.mul_add(x, -p);
    let f = (p - p.floor()) + e;
    f - f.floor()
}

/// `exp(-2 pi i y x)` with the argument reduced modulo one cycle.
pub fn twiddle(y: f64, x: usize) -> Complex64 {
    let yr = y - y.floor();
    let t = frac_product(yr, x as f64);
    let (s, c) = (2.0 * PI * t).sin_cos();
    Complex64::new(c, -s)
}

/// The signed amplitude `<0|rho(y)>`.
pub fn overlap_amplitude(window: &WindowVector, y: f64) -> Complex64 {
    let mut acc = CompensatedSum::default();
    for (x, &w) in window.amplitudes().iter().enumerate() {
        if w != 0.0 {
            acc.add(twiddle(y, x) * w);
        }
    }
    acc.value() / (window.len() as f64).sqrt()
}

/// `|<0|rho(y)>|`, clamped to `[0, 1]` against rounding.
pub fn overlap(window: &WindowVector, y: f64) -> f64 {
    overlap_amplitude(window, y).norm().min(1.0)
}

/// Readout distribution for true phase `phi`.
pub fn phase_distribution(window: &WindowVector, phi: f64) -> Result<PhaseDistribution> {
    window.check_normalized()?;
    if !phi.is_finite() {
        return Err(Error::Domain(format!("phase must be finite, got {phi}")));
    }
    let mass = if window.n() > FFT_DISTRIBUTION_QUBITS {
        phase_distribution_fft(window, phi)
    } else {
        phase_distribution_direct(window, phi)
    };
    Ok(PhaseDistribution { n: window.n(), phi, mass })
}

/// Direct O(4^n) evaluation, one compensated sum per bin.
pub fn phase_distribution_direct(window: &WindowVector, phi: f64) -> Vec<f64> {
    let len = window.len();
    (0..len)
        .map(|k| overlap(window, phi - k as f64 / len as f64).powi(2))
        .collect()
}

/// FFT evaluation of the same masses.
pub fn phase_distribution_fft(window: &WindowVector, phi: f64) -> Vec<f64> {
    let len = window.len();
    // sum_x W(x) e^{2 pi i phi x} e^{-2 pi i k x / N}
    let mut buf: Vec<Complex64> = window
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(x, &w)| twiddle(-phi, x) * w)
        .collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    buf.iter().map(|z| z.norm_sqr() / len as f64).collect()
}

/// Largest probability of landing outside the `2 * band` bins around the
/// true phase, maximized over phase offsets within one bin.
///
/// `band = 1` counts the two bins bracketing the phase as success.
pub fn worst_case_failure(window: &WindowVector, band: usize) -> Result<f64> {
    window.check_normalized()?;
    if band == 0 {
        return Err(Error::Parameter("band must be at least 1".into()));
    }
    let len = window.len();
    if 2 * band >= len {
        return Ok(0.0);
    }
    let nf = len as f64;
    // Readout statistics are covariant under whole-bin shifts, so offsets in
    // [0, 1) bins cover every phase.
    let mut offsets: Vec<f64> = (0..SCAN_OVERSAMPLING)
        .map(|j| j as f64 / SCAN_OVERSAMPLING as f64)
        .collect();
    offsets.push(0.5);
    let worst = offsets
        .par_iter()
        .map(|&t| {
            let phi = t / nf;
            let success: f64 = (0..2 * band)
                .map(|i| {
                    let k = i as f64 - band as f64 + 1.0;
                    overlap(window, phi - k / nf).powi(2)
                })
                .sum();
            (1.0 - success).max(0.0)
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// Uniform samples of the overlap on `y = j / grid`, `j = 0..grid`.
pub fn overlap_scan(window: &WindowVector, grid: usize) -> Result<OverlapProfile> {
    if grid < 2 {
        return Err(Error::Parameter(format!("grid must be >= 2, got {grid}")));
    }
    let samples = (0..grid)
        .into_par_iter()
        .map(|j| {
            let y = j as f64 / grid as f64;
            (y, overlap(window, y))
        })
        .collect();
    Ok(OverlapProfile { window: window.clone(), samples })
}

/// Maximum overlap over the contamination region `[2^-l, 1 - 2^-l]`.
pub fn max_contamination_overlap(window: &WindowVector, l: u32) -> Result<f64> {
    locate_max_contamination(window, l).map(|p| p.value)
}

/// As [`max_contamination_overlap`], also reporting where the peak sits.
///
/// Flat windows use the closed-form Dirichlet kernel; tapered windows are
/// scanned with shifted FFTs and refined by golden-section search.
pub fn locate_max_contamination(window: &WindowVector, l: u32) -> Result<ContaminationPeak> {
    window.check_normalized()?;
    let n = window.n();
    if l == 0 || l > n {
        return Err(Error::Parameter(format!("need 1 <= l <= n, got l = {l}, n = {n}")));
    }
    let flat = window.spec().is_some_and(|s| s.is_flat());
    if flat {
        return rectangular_max_contamination(n, l);
    }
    if n > MAX_SCAN_QUBITS {
        return Err(Error::Parameter(format!(
            "tapered contamination scan limited to {MAX_SCAN_QUBITS} qubits, got {n}"
        )));
    }
    let len = window.len();
    let values = shifted_fft_scan(window, SCAN_OVERSAMPLING);
    let fine = (SCAN_OVERSAMPLING * len) as f64;
    let lo = 1.0 / (1u64 << l) as f64;
    let lo_idx = (lo * fine).ceil() as usize;
    let hi_idx = (SCAN_OVERSAMPLING * len) / 2;
    let mut candidates: Vec<(usize, f64)> = (lo_idx..=hi_idx)
        .filter(|&i| {
            let v = values[i];
            let left = if i > lo_idx { values[i - 1] } else { f64::NEG_INFINITY };
            let right = if i < hi_idx { values[i + 1] } else { f64::NEG_INFINITY };
            v >= left && v >= right
        })
        .map(|i| (i, values[i]))
        .collect();
    candidates.sort_by(|a, b| b.1.total_cmp(&a.1));
    candidates.truncate(REFINE_CANDIDATES);
    let f = |y: f64| overlap(window, y);
    let mut best = ContaminationPeak { y: lo, value: f(lo) };
    let step = 1.0 / fine;
    for (i, _) in candidates {
        let c = i as f64 / fine;
        let a = (c - step).max(lo);
        let b = (c + step).min(0.5);
        let p = golden_max(&f, a, b);
        if p.value > best.value {
            best = p;
        }
    }
    Ok(best)
}

/// Overlap magnitudes at `y = (k + s/S) / N` for all `k` and `s < S`,
/// returned in increasing `y`.
pub fn shifted_fft_scan(window: &WindowVector, oversampling: usize) -> Vec<f64> {
    let len = window.len();
    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(len);
    let norm = (len as f64).sqrt();
    let modulus = (oversampling * len) as u64;
    let columns: Vec<Vec<f64>> = (0..oversampling)
        .into_par_iter()
        .map(|s| {
            let mut buf: Vec<Complex64> = window
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(x, &w)| {
                    let r = (x as u64 * s as u64) % modulus;
                    let (sn, cs) = (2.0 * PI * r as f64 / modulus as f64).sin_cos();
                    Complex64::new(cs, -sn) * w
                })
                .collect();
            fft.process(&mut buf);
            buf.iter().map(|z| (z.norm() / norm).min(1.0)).collect()
        })
        .collect();
    let mut out = vec![0.0; oversampling * len];
    for (s, col) in columns.iter().enumerate() {
        for (k, &v) in col.iter().enumerate() {
            out[k * oversampling + s] = v;
        }
    }
    // Close the circle so index `oversampling * len` maps to y = 1.
    out.push(out[0]);
    out
}

/// Golden-section maximization of a unimodal function on `[a, b]`,
/// keeping the better endpoint if it beats the interior optimum.
pub fn golden_max(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> ContaminationPeak {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut best = {
        let (fa, fb) = (f(a), f(b));
        if fa >= fb { ContaminationPeak { y: a, value: fa } } else { ContaminationPeak { y: b, value: fb } }
    };
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    for (y, v) in [(c, fc), (d, fd)] {
        if v > best.value {
            best = ContaminationPeak { y, value: v };
        }
    }
    best
}

/// Flat-window overlap `|sin(pi u) / (N sin(pi u / N))|` in bin units `u`.
pub fn dirichlet_overlap(n: u32, u: f64) -> f64 {
    let nf = (n as f64).exp2();
    let den = nf * (PI * u / nf).sin();
    if den.abs() < 1e-300 {
        return 1.0;
    }
    ((PI * u).sin() / den).abs().min(1.0)
}

/// Closed-form contamination maximum for the flat window on `n` qubits.
///
/// The kernel is bounded by the decreasing envelope `1/(N sin(pi y))`
/// on `(0, 1/2]`, and the peak of each lobe is at least the envelope at
/// its center, so only the lobe holding the cutoff and the two after it
/// can carry the maximum.
pub fn rectangular_max_contamination(n: u32, l: u32) -> Result<ContaminationPeak> {
    if l == 0 || l > n || n > 62 {
        return Err(Error::Parameter(format!("need 1 <= l <= n <= 62, got l = {l}, n = {n}")));
    }
    let nf = (n as f64).exp2();
    let u0 = ((n - l) as f64).exp2();
    let u_end = (u0.floor() + 3.0).min(nf / 2.0);
    let f = |u: f64| dirichlet_overlap(n, u);
    let mut best = ContaminationPeak { y: u0, value: f(u0) };
    let steps = 1024 * (u_end - u0).ceil().max(1.0) as usize;
    let h = (u_end - u0) / steps as f64;
    if h > 0.0 {
        let mut best_i = 0;
        let mut best_v = best.value;
        for i in 0..=steps {
            let v = f(u0 + i as f64 * h);
            if v > best_v {
                best_v = v;
                best_i = i;
            }
        }
        let c = u0 + best_i as f64 * h;
        let p = golden_max(&f, (c - h).max(u0), (c + h).min(u_end));
        if p.value > best.value {
            best = p;
        }
    }
    Ok(ContaminationPeak { y: best.y / nf, value: best.value })
}
