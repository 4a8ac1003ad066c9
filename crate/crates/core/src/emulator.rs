//! Classical emulation of the expectation-value algorithm: reflection
//! assembly, pre-learning of `p`, outer-QPE rounding and the final
//! back-solve for `<sigma_0|F|sigma_0>`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundInputs};
use crate::error::{Error, Result};
use crate::qpe::{self, overlap};
use crate::walk::{self, build_walk, nearest_register_phase, qubitised_phase, Branch, HermitianSystem, WalkModel};
use crate::windows::{make_window, WindowChoice, WindowVector, DEFAULT_BETA_MAX};

/// Smallest admissible weight of the prepared state on the targeted
/// walk eigenpair.
pub const MIN_TARGET_WEIGHT: f64 = 1e-8;

/// Default factor relating the pre-learning walk eigenvalue to `p`.
///
/// The pre-learning walk spreads the prepared amplitude over both
/// qubitised branches of the ground state, so its squared singular value is
/// `(p + q) / 2` with `q = |<0|rho_0^->|^2`. Dividing by `1/2` recovers
/// `p + q`.
pub const DEFAULT_BRANCH_FACTOR: f64 = 0.5;

/// Outcome of one emulated run. Field names are part of the JSON format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmulationReport {
    pub estimate: f64,
    pub truth: f64,
    pub realized_error: f64,
    pub p_learned: f64,
    pub p_true: f64,
    pub theta_measured: f64,
    pub bound: f64,
    pub success_flag: bool,
}

/// Knobs for [`run_algorithm`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmulationParams {
    /// Extra phase qubits beyond the gap-resolving `l`; `n = l + m`.
    pub m: u32,
    pub n_o: u32,
    /// Free constant of the error bound; `None` uses `sqrt(p) max_contam`.
    pub c: Option<f64>,
    pub branch_factor: f64,
}

impl EmulationParams {
    pub fn new(m: u32, n_o: u32) -> Self {
        EmulationParams { m, n_o, c: None, branch_factor: DEFAULT_BRANCH_FACTOR }
    }
}

/// Circular distance from the ground phase `phi_{0,+}` to every other
/// qubitised eigenphase, including `phi_{0,-}`.
pub fn phase_gap(h: &HermitianSystem) -> f64 {
    let values = h.eigenvalues();
    let phi0 = qubitised_phase(values[0], Branch::Plus);
    let mut others = vec![qubitised_phase(values[0], Branch::Minus)];
    for &lambda in &values[1..] {
        others.push(qubitised_phase(lambda, Branch::Plus));
        others.push(qubitised_phase(lambda, Branch::Minus));
    }
    others.into_iter().map(|p| crate::linalg::circular_distance(phi0, p)).fold(f64::INFINITY, f64::min)
}

/// Required separation `(1 + 2^m) / 2^(l+m)`.
pub fn gap_threshold(l: u32, m: u32) -> f64 {
    (1.0 + (m as f64).exp2()) / ((l + m) as f64).exp2()
}

/// Checks `delta_phi > (1 + 2^m) / 2^(l+m)`.
pub fn check_gap_promise(h: &HermitianSystem, l: u32, m: u32) -> Result<()> {
    let delta = phase_gap(h);
    let need = gap_threshold(l, m);
    if delta > need {
        Ok(())
    } else {
        Err(Error::GapPromise(format!(
            "phase gap {delta:.6e} <= (1 + 2^{m}) / 2^({l}+{m}) = {need:.6e}"
        )))
    }
}

/// Smallest `l >= 1` whose promise holds for the given `m`, if any `l <= max_l` works.
pub fn min_gap_qubits(h: &HermitianSystem, m: u32, max_l: u32) -> Option<u32> {
    let delta = phase_gap(h);
    (1..=max_l).find(|&l| delta > gap_threshold(l, m))
}

/// Nearest `n_o`-bit phase, ties upward.
pub fn round_phase(theta: f64, n_o: u32) -> f64 {
    let scale = (n_o as f64).exp2();
    (theta * scale).round() / scale
}

/// Register value for the ground eigenphase on `n` qubits.
pub fn ground_register_phase(h: &HermitianSystem, n: u32) -> f64 {
    nearest_register_phase(qubitised_phase(h.eigenvalues()[0], Branch::Plus), n)
}

fn require_target(model: &WalkModel) -> Result<()> {
    let w = model.target_weight();
    if w < MIN_TARGET_WEIGHT {
        return Err(Error::Emulation(format!("prepared state has weight {w:e} on the targeted eigenpair")));
    }
    Ok(())
}

/// Learns `p` from the walk with `F = -1`: rounds its eigenphase to `n_o`
/// bits and inverts `omega'^2 = cos^2(pi theta')`, divided by
/// `branch_factor`.
pub fn prelearn_overlap(window: &WindowVector, h: &HermitianSystem, phi_tilde: f64, n_o: u32, branch_factor: f64) -> Result<f64> {
    if !(branch_factor > 0.0 && branch_factor <= 1.0) {
        return Err(Error::Parameter(format!("branch factor must lie in (0, 1], got {branch_factor}")));
    }
    let minus_one = HermitianSystem::scaled_identity(h.dim(), -1.0)?;
    let model = build_walk(window, h, &minus_one, phi_tilde)?;
    require_target(&model)?;
    let theta = round_phase(model.target_phase(), n_o);
    Ok((PI * theta).cos().powi(2) / branch_factor)
}

/// Runs the full algorithm on `window` (with `n = l + m` qubits) and reports
/// the estimate against the dense truth.
pub fn run_algorithm(window: &WindowVector, h: &HermitianSystem, f: &HermitianSystem, params: &EmulationParams) -> Result<EmulationReport> {
    let n = window.n();
    if params.m > n {
        return Err(Error::Parameter(format!("m = {} exceeds the register size n = {n}", params.m)));
    }
    let l = n - params.m;
    if l == 0 {
        return Err(Error::Parameter("need l >= 1 gap-resolving qubits".into()));
    }
    check_gap_promise(h, l, params.m)?;
    let phi_tilde = ground_register_phase(h, n);
    let p_learned = prelearn_overlap(window, h, phi_tilde, params.n_o, params.branch_factor)?;
    let model = build_walk(window, h, f, phi_tilde)?;
    require_target(&model)?;
    let theta_measured = round_phase(model.target_phase(), params.n_o);
    let estimate = 1.0 - 4.0 * (PI * theta_measured).cos().powi(2) / p_learned;
    let truth = model.true_expectation();
    let p_true = model.p();
    let max_contam = model.max_contamination();
    let c = params.c.unwrap_or_else(|| bounds::default_c(p_true, max_contam));
    let bound = bounds::error_bound(&BoundInputs::new(p_true, max_contam.min(1.0), params.n_o, c)?)?;
    let realized_error = (estimate - truth).abs();
    Ok(EmulationReport {
        estimate,
        truth,
        realized_error,
        p_learned,
        p_true,
        theta_measured,
        bound,
        success_flag: realized_error <= bound,
    })
}

/// Exponential-decay comparison model for a QSP-based reflection:
/// `error = prefactor * exp(-decay_rate * queries / 2^(l-1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QspModel {
    pub prefactor: f64,
    pub decay_rate: f64,
}

impl Default for QspModel {
    fn default() -> Self {
        QspModel { prefactor: 1.0, decay_rate: 1.0 }
    }
}

impl QspModel {
    pub fn error(&self, queries: f64, l: u32) -> f64 {
        self.prefactor * (-self.decay_rate * queries / ((l as f64) - 1.0).exp2()).exp()
    }
}

/// One point of a reflection-error curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub m: u32,
    pub beta: f64,
    /// Calls to `Q[H]` per reflection, `2^(l+m-1)`.
    pub queries: f64,
    /// Worst-case `4 eps_1 / p = 8 max_contam / sqrt(p_floor)`.
    pub relative_error: f64,
    pub qsp_error: f64,
}

/// Lower bound on `p` over ground phases within half a bin of the register:
/// `4/pi^2` for the flat window, the half-bin overlap squared otherwise.
pub fn p_floor(window: &WindowVector) -> f64 {
    if window.spec().is_some_and(|s| s.is_flat()) {
        4.0 / (PI * PI)
    } else {
        overlap(window, 0.5 / window.len() as f64).powi(2)
    }
}

/// Worst-case relative reflection error `8 max_contam / sqrt(p_floor)` for
/// a register of `l + m` qubits resolving gaps of `2^-l`.
pub fn reflection_relative_error(window: &WindowVector, l: u32) -> Result<f64> {
    let max_contam = qpe::max_contamination_overlap(window, l)?;
    Ok(8.0 * max_contam / p_floor(window).sqrt())
}

/// Relative reflection error for each `m`, with the QSP comparison trace.
pub fn reflection_error_curve(
    l: u32,
    m_range: &[u32],
    family: WindowChoice,
    beta_max: Option<f64>,
    qsp: QspModel,
) -> Result<Vec<CurvePoint>> {
    if m_range.is_empty() {
        return Err(Error::Parameter("m range must be nonempty".into()));
    }
    if l == 0 {
        return Err(Error::Parameter("need l >= 1".into()));
    }
    let beta_max = beta_max.unwrap_or(DEFAULT_BETA_MAX);
    m_range
        .iter()
        .map(|&m| {
            let spec = family.spec_for(m, beta_max);
            let window = make_window(spec, l + m)?;
            let queries = ((l + m - 1) as f64).exp2();
            Ok(CurvePoint {
                m,
                beta: spec.beta,
                queries,
                relative_error: reflection_relative_error(&window, l)?,
                qsp_error: qsp.error(queries, l),
            })
        })
        .collect()
}

/// Instance-specific relative reflection error `8 max_contam / sqrt(p)`.
pub fn instance_reflection_error(window: &WindowVector, h: &HermitianSystem) -> Result<f64> {
    let phi_tilde = ground_register_phase(h, window.n());
    let q = walk::qubitise(h)?;
    let amps: Vec<f64> = walk::register_offsets(&q, phi_tilde).iter().map(|&y| overlap(window, y)).collect();
    let max_contam = amps[1..].iter().cloned().fold(0.0, f64::max);
    Ok(8.0 * max_contam / amps[0])
}
