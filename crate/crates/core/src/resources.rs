//! Fault-tolerant resource estimates: phase-register sizing, error
//! budgets, Toffoli totals and a parameterized logical-qubit model, with
//! molecular reference data embedded as JSON.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qpe::{self, overlap};
use crate::windows::{make_window, WindowChoice, WindowKind, WindowSpec, DEFAULT_BETA_MAX};

/// Embedded reference tables.
pub const EMBEDDED_TABLES: &str = include_str!("../data/paper_tables.json");
/// Environment variable overriding the embedded table path.
pub const TABLES_ENV: &str = "WQPE_TABLES";

/// Default cap on the extra inner qubits `m`.
pub const DEFAULT_M_CAP: u32 = 24;
/// Default Toffoli equivalent of one controlled rotation in a QFT.
pub const DEFAULT_ROTATION_TOFFOLI: u64 = 30;
/// Largest register on which tapered windows are scanned directly. Larger
/// registers reuse the scan at this size with the same `m`: the overlap
/// depends on `y` essentially through `2^n y`, and the contamination
/// converges from below to about 1e-4 relative by this size.
pub const SCALE_INVARIANT_QUBITS: u32 = 16;
/// Safety factor applied to contamination reused from a smaller register.
pub const SCALE_SAFETY: f64 = 1.001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Observable {
    Kinetic,
    Dipole,
    Eri,
}

impl Observable {
    pub const ALL: [Observable; 3] = [Observable::Kinetic, Observable::Dipole, Observable::Eri];

    pub fn name(self) -> &'static str {
        match self {
            Observable::Kinetic => "kinetic",
            Observable::Dipole => "dipole",
            Observable::Eri => "eri",
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kinetic" | "ke" => Ok(Observable::Kinetic),
            "dipole" | "x-dipole" => Ok(Observable::Dipole),
            "eri" => Ok(Observable::Eri),
            _ => Err(Error::Config(format!("unknown observable '{s}'; expected kinetic, dipole or eri"))),
        }
    }
}

/// Block-encoding data for one system and observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableData {
    #[serde(rename = "lambda_H")]
    pub lambda_h: f64,
    #[serde(rename = "thc_rank_H")]
    pub thc_rank_h: u32,
    #[serde(rename = "bits_keep_H")]
    pub bits_keep_h: u32,
    #[serde(rename = "bits_rot_H")]
    pub bits_rot_h: u32,
    #[serde(rename = "lambda_F")]
    pub lambda_f: f64,
    #[serde(rename = "thc_rank_F")]
    pub thc_rank_f: u32,
    #[serde(rename = "bits_keep_F")]
    pub bits_keep_f: u32,
    #[serde(rename = "bits_rot_F")]
    pub bits_rot_f: u32,
    #[serde(default)]
    pub ccsd_corr_error: f64,
}

/// Logical-qubit highwater per inner-QPE method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Highwater {
    pub rectangular: u32,
    pub qsp: u32,
    pub kaiser: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemEntry {
    pub name: String,
    pub label: String,
    pub n_orbitals: u32,
    pub gap: f64,
    pub observables: BTreeMap<Observable, ObservableData>,
    #[serde(default)]
    pub highwater: BTreeMap<Observable, Highwater>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableInfo {
    pub label: String,
    pub units: String,
    pub epsilon_target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tables {
    pub version: u32,
    pub observables: BTreeMap<Observable, ObservableInfo>,
    pub systems: Vec<SystemEntry>,
}

impl Tables {
    pub fn embedded() -> Self {
        serde_json::from_str(EMBEDDED_TABLES).expect("embedded tables parse")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        let tables: Tables = serde_json::from_str(&text)?;
        for s in &tables.systems {
            for o in s.observables.keys() {
                s.case(*o)?;
            }
        }
        Ok(tables)
    }

    /// Embedded tables unless `WQPE_TABLES` names a file.
    pub fn load() -> Result<Self> {
        match std::env::var_os(TABLES_ENV) {
            Some(p) => Self::from_path(Path::new(&p)),
            None => Ok(Self::embedded()),
        }
    }

    pub fn names(&self) -> Vec<&str> {
        self.systems.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn system(&self, name: &str) -> Result<&SystemEntry> {
        let key = name.to_ascii_lowercase().replace([' ', '_'], "-");
        let key = match key.as_str() {
            "p450-heme" | "heme" => "p450".to_string(),
            "benzyne" | "pbenzyne" => "p-benzyne".to_string(),
            _ => key,
        };
        self.systems.iter().find(|s| s.name == key).ok_or_else(|| {
            Error::Config(format!("unknown system '{name}'; embedded systems: {}", self.names().join(", ")))
        })
    }

    pub fn epsilon_target(&self, observable: Observable) -> Result<f64> {
        self.observables
            .get(&observable)
            .map(|o| o.epsilon_target)
            .ok_or_else(|| Error::Config(format!("tables have no target for {observable}")))
    }
}

/// Inputs describing one system and observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemCase {
    pub name: String,
    pub observable: Observable,
    #[serde(rename = "lambda_H")]
    pub lambda_h: f64,
    pub gap: f64,
    #[serde(rename = "lambda_F")]
    pub lambda_f: f64,
    #[serde(rename = "thc_rank_H")]
    pub thc_rank_h: u32,
    #[serde(rename = "thc_rank_F")]
    pub thc_rank_f: u32,
    #[serde(rename = "bits_keep_H")]
    pub bits_keep_h: u32,
    #[serde(rename = "bits_keep_F")]
    pub bits_keep_f: u32,
    #[serde(rename = "bits_rot_H")]
    pub bits_rot_h: u32,
    #[serde(rename = "bits_rot_F")]
    pub bits_rot_f: u32,
    #[serde(rename = "N_orbitals")]
    pub n_orbitals: u32,
}

impl SystemCase {
    pub fn validate(&self) -> Result<()> {
        if !(self.gap > 0.0) || !(self.lambda_h >= self.gap) || !(self.lambda_f > 0.0) {
            return Err(Error::Domain(format!(
                "{}: need gap > 0, lambda_H >= gap and lambda_F > 0 (gap {}, lambda_H {}, lambda_F {})",
                self.name, self.gap, self.lambda_h, self.lambda_f
            )));
        }
        Ok(())
    }

    /// Relative phase gap `Delta / (2 pi lambda_H)`.
    pub fn phase_gap(&self) -> f64 {
        self.gap / (2.0 * PI * self.lambda_h)
    }
}

impl SystemEntry {
    pub fn case(&self, observable: Observable) -> Result<SystemCase> {
        let d = self
            .observables
            .get(&observable)
            .ok_or_else(|| Error::Config(format!("{} has no {observable} data", self.name)))?;
        let case = SystemCase {
            name: self.name.clone(),
            observable,
            lambda_h: d.lambda_h,
            gap: self.gap,
            lambda_f: d.lambda_f,
            thc_rank_h: d.thc_rank_h,
            thc_rank_f: d.thc_rank_f,
            bits_keep_h: d.bits_keep_h,
            bits_keep_f: d.bits_keep_f,
            bits_rot_h: d.bits_rot_h,
            bits_rot_f: d.bits_rot_f,
            n_orbitals: self.n_orbitals,
        };
        case.validate()?;
        Ok(case)
    }
}

/// Toffoli cost of a `k`-qubit QFT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QftCost {
    /// The same cost for every register size.
    Fixed(u64),
    /// `k (k - 1) / 2` controlled rotations at this Toffoli cost each.
    PerRotation(u64),
}

impl QftCost {
    pub fn cost(&self, k: u32) -> u128 {
        match *self {
            QftCost::Fixed(c) => c as u128,
            QftCost::PerRotation(r) => {
                let k = k as u128;
                k * k.saturating_sub(1) / 2 * r as u128
            }
        }
    }
}

/// Per-call Toffoli costs. `t_qh` and `t_bf` default to 1, so totals count
/// block-encoding queries unless real costs are supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostModel {
    #[serde(default)]
    pub t_asp: u64,
    #[serde(default)]
    pub t_window: u64,
    #[serde(default = "one")]
    pub t_qh: u64,
    #[serde(default = "one")]
    pub t_bf: u64,
    #[serde(default = "default_qft")]
    pub qft: QftCost,
}

fn one() -> u64 {
    1
}

fn default_qft() -> QftCost {
    QftCost::PerRotation(DEFAULT_ROTATION_TOFFOLI)
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel { t_asp: 0, t_window: 0, t_qh: 1, t_bf: 1, qft: default_qft() }
    }
}

impl CostModel {
    /// Every operation, including each QFT, costs one Toffoli.
    pub fn unit() -> Self {
        CostModel { t_asp: 1, t_window: 1, t_qh: 1, t_bf: 1, qft: QftCost::Fixed(1) }
    }
}

/// `ceil(2^e)` for possibly negative `e`, as a wide integer.
fn pow2_ceil(e: i64) -> Result<u128> {
    match e {
        e if e < 0 => Ok(1),
        e if e < 128 => Ok(1u128 << e),
        _ => Err(Error::Parameter(format!("2^{e} overflows the Toffoli counter"))),
    }
}

fn overflow() -> Error {
    Error::Parameter("Toffoli total overflows 128 bits".into())
}

/// `T(ASP) + 2^n_o T(W) + 2^(n_o+n-1) T(Q[H]) + 2^(n_o+1) T(QFT_n)
///  + 2^(n_o-1) T(B[F]) + T(QFT_n_o)`, with fractional powers rounded up.
pub fn total_toffoli(n: u32, n_o: u32, costs: &CostModel) -> Result<u128> {
    let (n, n_o) = (n as i64, n_o as i64);
    let terms = [
        (1u128, costs.t_asp as u128),
        (pow2_ceil(n_o)?, costs.t_window as u128),
        (pow2_ceil(n_o + n - 1)?, costs.t_qh as u128),
        (pow2_ceil(n_o + 1)?, costs.qft.cost(n as u32)),
        (pow2_ceil(n_o - 1)?, costs.t_bf as u128),
        (1, costs.qft.cost(n_o as u32)),
    ];
    terms.iter().try_fold(0u128, |acc, &(calls, cost)| {
        calls.checked_mul(cost).and_then(|t| acc.checked_add(t)).ok_or_else(overflow)
    })
}

/// `l = ceil(log2(2 pi lambda_H / Delta))`, floored at 0.
pub fn baseline_qubits(lambda_h: f64, gap: f64) -> Result<u32> {
    if !(lambda_h > 0.0 && gap > 0.0) {
        return Err(Error::Domain(format!("need lambda_H > 0 and gap > 0, got {lambda_h}, {gap}")));
    }
    Ok((2.0 * PI * lambda_h / gap).log2().ceil().max(0.0) as u32)
}

/// `n_o = ceil(log2(3 pi lambda_F / (p epsilon_outer)))`, floored at 0.
pub fn outer_qubits(lambda_f: f64, p_floor: f64, epsilon_outer: f64) -> Result<u32> {
    if !(lambda_f > 0.0 && p_floor > 0.0 && epsilon_outer > 0.0) {
        return Err(Error::Domain(format!(
            "need positive lambda_F, p and epsilon_outer, got {lambda_f}, {p_floor}, {epsilon_outer}"
        )));
    }
    Ok((3.0 * PI * lambda_f / (p_floor * epsilon_outer)).log2().ceil().max(0.0) as u32)
}

/// Worst-case reflection error of a window at `(l, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionError {
    pub max_contam: f64,
    pub p_floor: f64,
    /// `4 eps_1 / p` in units of `lambda_F`: `8 max_contam / sqrt(p_floor)`.
    pub relative_error: f64,
    /// Register size actually scanned.
    pub scanned_qubits: u32,
}

/// Worst-case contamination beyond `2^-l` and the half-bin `p` floor for
/// `spec` on `l + m` qubits. Flat windows use closed forms at any size;
/// tapered windows above [`SCALE_INVARIANT_QUBITS`] reuse the scan at that
/// size with the same `m`.
pub fn reflection_error(spec: WindowSpec, l: u32, m: u32) -> Result<ReflectionError> {
    if l == 0 {
        return Err(Error::Parameter("need l >= 1".into()));
    }
    let n = l + m;
    if spec.is_flat() {
        let max_contam = qpe::rectangular_max_contamination(n, l)?.value;
        let p_floor = 4.0 / (PI * PI);
        return Ok(ReflectionError { max_contam, p_floor, relative_error: 8.0 * max_contam / p_floor.sqrt(), scanned_qubits: n });
    }
    let (scan_n, factor) = if n > SCALE_INVARIANT_QUBITS && m < SCALE_INVARIANT_QUBITS {
        (SCALE_INVARIANT_QUBITS, SCALE_SAFETY)
    } else {
        (n, 1.0)
    };
    let window = make_window(spec, scan_n)?;
    let max_contam = (qpe::max_contamination_overlap(&window, scan_n - m)? * factor).min(1.0);
    let p_floor = overlap(&window, 0.5 / window.len() as f64).powi(2);
    Ok(ReflectionError { max_contam, p_floor, relative_error: 8.0 * max_contam / p_floor.sqrt(), scanned_qubits: scan_n })
}

/// Result of the inner-register search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InnerRegister {
    pub m: u32,
    pub beta: f64,
    pub n: u32,
    pub reflection: ReflectionError,
}

fn min_m(policy: WindowChoice) -> u32 {
    match policy {
        WindowChoice::Rectangular => 0,
        _ => 1,
    }
}

/// Smallest `m` (at least 1 for Kaiser policies) whose worst-case relative
/// reflection error is within `epsilon_inner / lambda_F`.
pub fn choose_inner_register(
    lambda_f: f64,
    epsilon_inner: f64,
    l: u32,
    policy: WindowChoice,
    beta_max: f64,
    m_cap: u32,
) -> Result<InnerRegister> {
    if !(epsilon_inner > 0.0 && lambda_f > 0.0) {
        return Err(Error::Domain(format!("need epsilon_inner > 0 and lambda_F > 0, got {epsilon_inner}, {lambda_f}")));
    }
    let target = epsilon_inner / lambda_f;
    let mut best = f64::INFINITY;
    for m in min_m(policy)..=m_cap {
        let spec = policy.spec_for(m, beta_max);
        let reflection = reflection_error(spec, l, m)?;
        if reflection.relative_error <= target {
            return Ok(InnerRegister { m, beta: spec.beta, n: l + m, reflection });
        }
        best = best.min(reflection.relative_error);
    }
    Err(Error::Infeasible(format!(
        "relative reflection error {target:.3e} unreachable with m <= {m_cap} ({policy}); best achieved {best:.3e}"
    )))
}

/// Smallest `m' >= m` with `delta_phi > (1 + 2^m') / 2^(l+m')`.
pub fn gap_compatible_m(delta_phi: f64, l: u32, m: u32, m_cap: u32) -> Result<u32> {
    (m..=m_cap)
        .find(|&mm| delta_phi > crate::emulator::gap_threshold(l, mm))
        .ok_or_else(|| {
            Error::Infeasible(format!("phase gap {delta_phi:.6e} cannot satisfy the promise at l = {l} with m <= {m_cap}"))
        })
}

/// `epsilon_target = epsilon_inner + epsilon_outer + epsilon_data`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub epsilon_target: f64,
    pub epsilon_inner: f64,
    pub epsilon_outer: f64,
    pub epsilon_data: f64,
}

impl ErrorBudget {
    /// Splits `target` in proportion to `weights` (inner, outer, data).
    pub fn split(target: f64, weights: [f64; 3]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(target > 0.0) || weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Config(format!("budget needs target > 0 and positive weights, got {target}, {weights:?}")));
        }
        // Parts on the grid of ulp(target) make every partial sum exact, so
        // the three parts add back to the target in floating point.
        let ulp = target.next_up() - target;
        let part = |w: f64| (target * w / total / ulp).round() * ulp;
        let epsilon_inner = part(weights[0]);
        let epsilon_outer = part(weights[1]);
        let epsilon_data = target - (epsilon_inner + epsilon_outer);
        if [epsilon_inner, epsilon_outer, epsilon_data].iter().any(|e| !(*e > 0.0)) {
            return Err(Error::Config(format!("budget weights {weights:?} leave an empty share of {target}")));
        }
        Ok(ErrorBudget { epsilon_target: target, epsilon_inner, epsilon_outer, epsilon_data })
    }

    pub fn thirds(target: f64) -> Result<Self> {
        Self::split(target, [1.0, 1.0, 1.0])
    }
}

/// Options shared by every case of a batch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    pub beta_max: f64,
    pub m_cap: u32,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions { beta_max: DEFAULT_BETA_MAX, m_cap: DEFAULT_M_CAP }
    }
}

/// Inputs and derived register sizes for one estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceCase {
    pub case: SystemCase,
    pub costs: CostModel,
    pub budget: ErrorBudget,
    pub window: WindowChoice,
    pub l: u32,
    pub m: u32,
    pub n: u32,
    pub beta: f64,
    pub n_o: u32,
    pub p_floor: f64,
    pub relative_reflection_error: f64,
    pub total_toffoli: u128,
    pub qubit_estimate: Option<i64>,
}

/// Composes the register choices and the Toffoli total for one case.
pub fn estimate_case(
    case: &SystemCase,
    budget: &ErrorBudget,
    window: WindowChoice,
    costs: &CostModel,
    options: &EstimateOptions,
    coefficients: Option<&HighwaterCoefficients>,
) -> Result<ResourceCase> {
    case.validate()?;
    let l = baseline_qubits(case.lambda_h, case.gap)?;
    let inner = choose_inner_register(case.lambda_f, budget.epsilon_inner, l, window, options.beta_max, options.m_cap)?;
    let m = gap_compatible_m(case.phase_gap(), l, inner.m, options.m_cap)?;
    let (beta, reflection) = if m == inner.m {
        (inner.beta, inner.reflection)
    } else {
        let spec = window.spec_for(m, options.beta_max);
        (spec.beta, reflection_error(spec, l, m)?)
    };
    let n = l + m;
    let n_o = outer_qubits(case.lambda_f, reflection.p_floor, budget.epsilon_outer)?;
    let total = total_toffoli(n, n_o, costs)?;
    let qubit_estimate = coefficients.map(|c| qubit_highwater(case, c, n, n_o));
    Ok(ResourceCase {
        case: case.clone(),
        costs: *costs,
        budget: *budget,
        window,
        l,
        m,
        n,
        beta,
        n_o,
        p_floor: reflection.p_floor,
        relative_reflection_error: reflection.relative_error,
        total_toffoli: total,
        qubit_estimate,
    })
}

/// Affine highwater model `a N + b log2(rank) + c bits + d + n + n_o`, with
/// `rank` the larger THC rank and `bits` the larger keep precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HighwaterCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

fn highwater_features(case: &SystemCase) -> [f64; 4] {
    let rank = case.thc_rank_h.max(case.thc_rank_f).max(1) as f64;
    let bits = case.bits_keep_h.max(case.bits_keep_f) as f64;
    [case.n_orbitals as f64, rank.log2(), bits, 1.0]
}

pub fn qubit_highwater(case: &SystemCase, k: &HighwaterCoefficients, n: u32, n_o: u32) -> i64 {
    let f = highwater_features(case);
    (k.a * f[0] + k.b * f[1] + k.c * f[2] + k.d * f[3] + n as f64 + n_o as f64).round() as i64
}

/// Least-squares fit and its residuals, per `(system, observable)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HighwaterFit {
    pub coefficients: HighwaterCoefficients,
    pub residuals: Vec<(String, Observable, f64)>,
}

/// Fits the highwater model to the rectangular column of the tables, with
/// `n` and `n_o` taken from rectangular estimates at `budget_for(obs)`.
pub fn fit_highwater(tables: &Tables, costs: &CostModel, options: &EstimateOptions) -> Result<HighwaterFit> {
    let mut rows = Vec::new();
    for sys in &tables.systems {
        for (obs, hw) in &sys.highwater {
            let case = sys.case(*obs)?;
            let budget = ErrorBudget::thirds(tables.epsilon_target(*obs)?)?;
            let est = estimate_case(&case, &budget, WindowChoice::Rectangular, costs, options, None)?;
            rows.push((case, est.n, est.n_o, hw.rectangular as f64));
        }
    }
    if rows.len() < 4 {
        return Err(Error::Config("highwater fit needs at least four table rows".into()));
    }
    let x = DMatrix::from_fn(rows.len(), 4, |i, j| highwater_features(&rows[i].0)[j]);
    let y = DVector::from_iterator(rows.len(), rows.iter().map(|(_, n, n_o, hw)| hw - *n as f64 - *n_o as f64));
    let sol = x.clone().svd(true, true).solve(&y, 1e-12).map_err(|e| Error::Config(e.to_string()))?;
    let coefficients = HighwaterCoefficients { a: sol[0], b: sol[1], c: sol[2], d: sol[3] };
    let fitted = &x * &sol;
    let residuals = rows
        .iter()
        .enumerate()
        .map(|(i, (case, _, _, _))| (case.name.clone(), case.observable, y[i] - fitted[i]))
        .collect();
    Ok(HighwaterFit { coefficients, residuals })
}

/// One CSV row per estimate; the header is fixed.
pub const CSV_HEADER: [&str; 9] = ["system", "observable", "window", "l", "m", "beta", "n_o", "total_toffoli", "qubit_estimate"];

impl ResourceCase {
    pub fn csv_record(&self) -> [String; 9] {
        [
            self.case.name.clone(),
            self.case.observable.to_string(),
            self.window.to_string(),
            self.l.to_string(),
            self.m.to_string(),
            format!("{:.16e}", self.beta),
            self.n_o.to_string(),
            self.total_toffoli.to_string(),
            self.qubit_estimate.map(|q| q.to_string()).unwrap_or_default(),
        ]
    }

    pub fn window_kind(&self) -> WindowKind {
        match self.window {
            WindowChoice::Rectangular => WindowKind::Rectangular,
            _ => WindowKind::Kaiser,
        }
    }
}
