//! Block encodings, the qubitised walk, the phase-estimation reflection and
//! the observable walk, as dense matrices plus their spectral analysis.
//!
//! Tensor ordering puts ancillas in the more significant positions:
//! a block encoding lives on `B (x) sys` with index `b * d + s`, the
//! reflection on `iph (x) B_H (x) sys`, and the full walk on
//! `B_F (x) iph (x) B_H (x) sys`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, c, hermitian_eigen, identity, max_abs_diff, phase_of, CMat, CVec, I, ONE, ZERO,
};
use crate::qpe::{overlap_amplitude, twiddle};
use crate::windows::WindowVector;

/// Tolerance on `||M - M^dagger||_max` when accepting a Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Slack allowed on `||M||_op <= 1`.
pub const NORM_TOL: f64 = 1e-10;
/// Largest total dimension for which dense walk unitaries are assembled.
pub const MAX_DENSE_DIM: usize = 1024;
/// Ground-state eigenvalues closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Dense Hermitian operator with its eigen-decomposition.
#[derive(Debug, Clone)]
pub struct HermitianSystem {
    matrix: CMat,
    eigenvalues: Vec<f64>,
    eigenvectors: CMat,
    op_norm: f64,
    relative_gap: f64,
}

impl HermitianSystem {
    /// Accepts a Hermitian matrix with operator norm at most one. The gap
    /// metadata defaults to the distance between the two lowest eigenvalues.
    pub fn new(matrix: CMat) -> Result<Self> {
        let dim = linalg::require_square(&matrix)?;
        if dim == 0 {
            return Err(Error::Parameter("empty matrix".into()));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("matrix has non-finite entries".into()));
        }
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::Validation(format!("matrix is not Hermitian (defect {defect:e})")));
        }
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        let (eigenvalues, eigenvectors) = hermitian_eigen(&matrix);
        let op_norm = eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if op_norm > 1.0 + NORM_TOL {
            return Err(Error::Normalization { norm: op_norm, tol: NORM_TOL });
        }
        let relative_gap = if dim > 1 { eigenvalues[1] - eigenvalues[0] } else { 1.0 };
        Ok(Self { matrix, eigenvalues, eigenvectors, op_norm, relative_gap })
    }

    /// As [`HermitianSystem::new`] with a caller-supplied lower bound on the
    /// gap above the ground state.
    pub fn with_relative_gap(matrix: CMat, relative_gap: f64) -> Result<Self> {
        let mut s = Self::new(matrix)?;
        if !(relative_gap > 0.0 && relative_gap <= 2.0) {
            return Err(Error::Validation(format!("relative gap must lie in (0, 2], got {relative_gap}")));
        }
        if relative_gap > s.relative_gap + 1e-12 {
            return Err(Error::Validation(format!(
                "claimed gap {relative_gap} exceeds the spectral gap {}",
                s.relative_gap
            )));
        }
        s.relative_gap = relative_gap;
        Ok(s)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let m = CMat::from_diagonal(&CVec::from_iterator(values.len(), values.iter().map(|&v| c(v))));
        Self::new(m)
    }

    pub fn scaled_identity(dim: usize, value: f64) -> Result<Self> {
        Self::new(identity(dim).scale(value))
    }

    /// `V diag(values) V^dagger` for a unitary `V`.
    pub fn from_spectrum(values: &[f64], basis: &CMat) -> Result<Self> {
        let diag = CMat::from_diagonal(&CVec::from_iterator(values.len(), values.iter().map(|&v| c(v))));
        Self::new(basis * diag * basis.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors as columns, matching [`HermitianSystem::eigenvalues`].
    pub fn eigenvectors(&self) -> &CMat {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, i: usize) -> CVec {
        self.eigenvectors.column(i).into_owned()
    }

    pub fn op_norm(&self) -> f64 {
        self.op_norm
    }

    pub fn relative_gap(&self) -> f64 {
        self.relative_gap
    }

    pub fn expectation(&self, v: &CVec) -> f64 {
        v.dotc(&(&self.matrix * v)).re
    }

    /// Errors unless the ground state is nondegenerate.
    pub fn check_nondegenerate_ground(&self) -> Result<()> {
        if self.dim() > 1 && self.eigenvalues[1] - self.eigenvalues[0] < DEGENERACY_TOL {
            return Err(Error::DegenerateGround(self.eigenvalues[0], self.eigenvalues[1]));
        }
        Ok(())
    }

    pub fn to_matrix_file(&self) -> MatrixFile {
        let d = self.dim();
        MatrixFile {
            dim: d,
            matrix_re: (0..d).map(|i| (0..d).map(|j| self.matrix[(i, j)].re).collect()).collect(),
            matrix_im: (0..d).map(|i| (0..d).map(|j| self.matrix[(i, j)].im).collect()).collect(),
            one_norm: 1.0,
            gap: self.relative_gap,
        }
    }
}

/// On-disk Hermitian matrix: entries in physical units with the
/// sub-normalization `one_norm` and the absolute `gap` above the ground
/// state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub matrix_re: Vec<Vec<f64>>,
    pub matrix_im: Vec<Vec<f64>>,
    pub one_norm: f64,
    pub gap: f64,
}

impl MatrixFile {
    /// Divides by `one_norm` and converts the gap to relative units.
    pub fn to_system(&self) -> Result<HermitianSystem> {
        let d = self.dim;
        let rows_ok = |m: &Vec<Vec<f64>>| m.len() == d && m.iter().all(|r| r.len() == d);
        if !rows_ok(&self.matrix_re) || !rows_ok(&self.matrix_im) {
            return Err(Error::Dimension { expected: d, found: self.matrix_re.len() });
        }
        if !(self.one_norm > 0.0 && self.one_norm.is_finite()) {
            return Err(Error::Config(format!("one_norm must be positive, got {}", self.one_norm)));
        }
        let m = CMat::from_fn(d, d, |i, j| {
            Complex64::new(self.matrix_re[i][j], self.matrix_im[i][j]) / self.one_norm
        });
        HermitianSystem::with_relative_gap(m, self.gap / self.one_norm)
    }
}

/// Hermitian unitary on `B (x) sys` whose `|0>` block is the encoded operator.
#[derive(Debug, Clone)]
pub struct SelfInverseEncoding {
    pub system_dim: usize,
    pub unitary: CMat,
}

impl SelfInverseEncoding {
    /// The `(<0| (x) 1) U (|0> (x) 1)` block.
    pub fn top_left(&self) -> CMat {
        let d = self.system_dim;
        self.unitary.view((0, 0), (d, d)).into_owned()
    }
}

/// The dilation `[[F, S], [S, -F]]` with `S` the principal root of `1 - F^2`.
pub fn self_inverse_encode(f: &HermitianSystem) -> Result<SelfInverseEncoding> {
    let d = f.dim();
    let mut root_diag = Vec::with_capacity(d);
    for &v in f.eigenvalues() {
        let r = 1.0 - v * v;
        if r < -1e-12 {
            return Err(Error::Normalization { norm: v.abs(), tol: NORM_TOL });
        }
        root_diag.push(c(r.max(0.0).sqrt()));
    }
    let vecs = f.eigenvectors();
    let s = vecs * CMat::from_diagonal(&CVec::from_vec(root_diag)) * vecs.adjoint();
    let mut u = CMat::zeros(2 * d, 2 * d);
    u.view_mut((0, 0), (d, d)).copy_from(f.matrix());
    u.view_mut((0, d), (d, d)).copy_from(&s);
    u.view_mut((d, 0), (d, d)).copy_from(&s);
    u.view_mut((d, d), (d, d)).copy_from(&(-f.matrix()));
    Ok(SelfInverseEncoding { system_dim: d, unitary: u })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Eigenpair of the qubitised encoding tied to Hamiltonian eigenvalue
/// `lambda` of eigenvector `index`.
#[derive(Debug, Clone)]
pub struct QubitisedEigenpair {
    pub index: usize,
    pub branch: Branch,
    pub lambda: f64,
    /// `+-arccos(lambda) / 2pi` on the branch `(-1/2, 1/2]`.
    pub phase: f64,
    pub vector: CVec,
}

#[derive(Debug, Clone)]
pub struct QubitisedEncoding {
    pub system_dim: usize,
    pub unitary: CMat,
    /// Ordered `(0,+), (0,-), (1,+), ...` following ascending eigenvalues.
    pub eigenpairs: Vec<QubitisedEigenpair>,
}

impl QubitisedEncoding {
    pub fn pair(&self, index: usize, branch: Branch) -> &QubitisedEigenpair {
        &self.eigenpairs[2 * index + usize::from(branch == Branch::Minus)]
    }
}

/// Phase `s * arccos(lambda) / 2pi` mapped onto `(-1/2, 1/2]`.
pub fn qubitised_phase(lambda: f64, branch: Branch) -> f64 {
    let p = branch.sign() * lambda.clamp(-1.0, 1.0).acos() / (2.0 * PI);
    if p <= -0.5 {
        p + 1.0
    } else {
        p
    }
}

/// `Q[H] = (2|0><0| - 1)_B . B[H]` with eigenpairs
/// `psi_{i,+-} = (sigma_i|0> +- i sigma_i|1>) / sqrt(2)`.
pub fn qubitise(h: &HermitianSystem) -> Result<QubitisedEncoding> {
    let d = h.dim();
    if h.relative_gap() > h.eigenvalues().get(1).map_or(2.0, |l1| l1 - h.eigenvalues()[0]) + 1e-12 {
        return Err(Error::Validation("gap metadata exceeds the spectral gap".into()));
    }
    let b = self_inverse_encode(h)?;
    let mut unitary = b.unitary;
    for row in d..2 * d {
        for col in 0..2 * d {
            unitary[(row, col)] = -unitary[(row, col)];
        }
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut eigenpairs = Vec::with_capacity(2 * d);
    for (i, &lambda) in h.eigenvalues().iter().enumerate() {
        let sigma = h.eigenvector(i);
        for branch in [Branch::Plus, Branch::Minus] {
            let mut v = CVec::zeros(2 * d);
            for s in 0..d {
                v[s] = sigma[s] * scale;
                v[d + s] = sigma[s] * I * branch.sign() * scale;
            }
            eigenpairs.push(QubitisedEigenpair {
                index: i,
                branch,
                lambda,
                phase: qubitised_phase(lambda, branch),
                vector: v,
            });
        }
    }
    Ok(QubitisedEncoding { system_dim: d, unitary, eigenpairs })
}

/// Literal construction `(1 +- i (lambda - Q) / sqrt(1 - lambda^2)) sigma|0> / sqrt(2)`;
/// requires `|lambda| < 1`.
pub fn qubitised_eigenvector_from_walk(q: &CMat, lambda: f64, sigma: &CVec, branch: Branch) -> Result<CVec> {
    let d = sigma.len();
    let s = (1.0 - lambda * lambda).sqrt();
    if s < 1e-12 {
        return Err(Error::Domain(format!("eigenvalue {lambda} has no orthogonal partner")));
    }
    let mut a = CVec::zeros(2 * d);
    a.rows_mut(0, d).copy_from(sigma);
    let shifted = a.scale(lambda) - q * &a;
    let v = &a + shifted * (I * branch.sign() / s);
    Ok(v.scale(std::f64::consts::FRAC_1_SQRT_2))
}

/// Householder completion of a window column: the real symmetric
/// orthogonal matrix `1 - 2 v v^T / |v|^2` with `v = W_0 - e_0`, whose
/// first column is `W_0`.
#[derive(Debug, Clone)]
pub struct WindowCompletion {
    v: Vec<f64>,
    v_norm_sq: f64,
}

impl WindowCompletion {
    pub fn new(window: &WindowVector) -> Self {
        let mut v = window.amplitudes().to_vec();
        v[0] -= 1.0;
        let v_norm_sq = v.iter().map(|x| x * x).sum();
        Self { v, v_norm_sq }
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    fn is_identity(&self) -> bool {
        self.v_norm_sq < 1e-30
    }

    /// `W z` in O(2^n); `W` is its own transpose and inverse.
    pub fn apply(&self, z: &[Complex64]) -> Vec<Complex64> {
        if self.is_identity() {
            return z.to_vec();
        }
        let dot: Complex64 = self.v.iter().zip(z).map(|(&a, &b)| b * a).sum();
        let k = dot * (2.0 / self.v_norm_sq);
        z.iter().zip(&self.v).map(|(&b, &a)| b - k * a).collect()
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.v.len();
        if self.is_identity() {
            return DMatrix::identity(n, n);
        }
        DMatrix::from_fn(n, n, |i, j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            delta - 2.0 * self.v[i] * self.v[j] / self.v_norm_sq
        })
    }
}

pub fn complete_window_unitary(window: &WindowVector) -> DMatrix<f64> {
    WindowCompletion::new(window).matrix()
}

/// Register state `rho(y)` with amplitudes
/// `f(y, a) = (1/sqrt(N)) sum_x W_a(x) exp(-2 pi i y x)`.
pub fn rho_state(completion: &WindowCompletion, y: f64) -> CVec {
    let len = completion.len();
    let e: Vec<Complex64> = (0..len).map(|x| twiddle(y, x)).collect();
    let scale = 1.0 / (len as f64).sqrt();
    CVec::from_iterator(len, completion.apply(&e).into_iter().map(|z| z * scale))
}

/// Nearest `n`-bit phase to `phi`, ties resolved downward, in `[0, 1)`.
pub fn nearest_register_phase(phi: f64, n: u32) -> f64 {
    let len = (n as f64).exp2();
    let k = (len * phi - 0.5).ceil();
    (k.rem_euclid(len)) / len
}

/// Integer label of an `n`-bit phase; errors if `phi_tilde` is not one.
pub fn register_index(phi_tilde: f64, n: u32) -> Result<usize> {
    let len = (n as f64).exp2();
    let k = phi_tilde * len;
    if !k.is_finite() || (k - k.round()).abs() > 1e-9 {
        return Err(Error::Parameter(format!("phase {phi_tilde} is not an {n}-bit value")));
    }
    Ok((k.round() as i64).rem_euclid(len as i64) as usize)
}

fn check_dense(dim: usize) -> Result<()> {
    if dim > MAX_DENSE_DIM {
        return Err(Error::Parameter(format!(
            "dense assembly needs dimension <= {MAX_DENSE_DIM}, got {dim}"
        )));
    }
    Ok(())
}

/// `QPE = (QFT^-1 (x) 1) (sum_x |x><x| (x) Q^x) (W (x) 1)` on
/// `iph (x) B_H (x) sys`.
pub fn qpe_unitary(window: &WindowVector, q: &QubitisedEncoding) -> Result<CMat> {
    let len = window.len();
    let inner = 2 * q.system_dim;
    let dim = len * inner;
    check_dense(dim)?;
    let w = linalg::from_real(&complete_window_unitary(window));
    let prep = linalg::kron(&w, &identity(inner));
    let mut controlled = CMat::zeros(dim, dim);
    let mut power = identity(inner);
    for x in 0..len {
        controlled.view_mut((x * inner, x * inner), (inner, inner)).copy_from(&power);
        power = &power * &q.unitary;
    }
    let scale = 1.0 / (len as f64).sqrt();
    let iqft = CMat::from_fn(len, len, |k, x| twiddle(k as f64 / len as f64, x) * scale);
    let qft_inv = linalg::kron(&iqft, &identity(inner));
    Ok(qft_inv * controlled * prep)
}

/// Reflection `QPE^dagger (1 - 2|phi~><phi~|) QPE` assembled from the circuit.
pub fn build_reflection(window: &WindowVector, q: &QubitisedEncoding, phi_tilde: f64) -> Result<CMat> {
    let k = register_index(phi_tilde, window.n())?;
    let qpe = qpe_unitary(window, q)?;
    let inner = 2 * q.system_dim;
    let mut mid = identity(qpe.nrows());
    for j in 0..inner {
        mid[(k * inner + j, k * inner + j)] = c(-1.0);
    }
    Ok(qpe.adjoint() * mid * qpe)
}

/// Register offsets `phi_{j,s} - phi~` for every qubitised eigenpair.
pub fn register_offsets(q: &QubitisedEncoding, phi_tilde: f64) -> Vec<f64> {
    q.eigenpairs.iter().map(|e| e.phase - phi_tilde).collect()
}

/// Projector `sum_{i,s} |psi_{i,s}><psi_{i,s}| (x) |rho_i^s><rho_i^s|` built
/// directly from eigenpairs and window states.
pub fn reflection_projector(window: &WindowVector, q: &QubitisedEncoding, phi_tilde: f64) -> Result<CMat> {
    register_index(phi_tilde, window.n())?;
    let dim = window.len() * 2 * q.system_dim;
    check_dense(dim)?;
    let completion = WindowCompletion::new(window);
    let mut p = CMat::zeros(dim, dim);
    for (e, y) in q.eigenpairs.iter().zip(register_offsets(q, phi_tilde)) {
        let rho = rho_state(&completion, y);
        let v = linalg::kron(&CMat::from_column_slice(rho.len(), 1, rho.as_slice()), &CMat::from_column_slice(e.vector.len(), 1, e.vector.as_slice()));
        p += &v * v.adjoint();
    }
    Ok(p)
}

/// Singular value of a projector product and the eigenphase pair it
/// produces in the product of the two reflections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoReflectionPhase {
    pub omega: f64,
    pub theta_plus: f64,
    pub theta_minus: f64,
}

/// `theta = arccos(2 w^2 - 1) / 2pi`, in `[0, 1/2]`.
pub fn omega_to_phase(omega_sq: f64) -> f64 {
    (2.0 * omega_sq - 1.0).clamp(-1.0, 1.0).acos() / (2.0 * PI)
}

fn require_projector(p: &CMat, name: &str) -> Result<()> {
    linalg::require_square(p)?;
    let defect = linalg::projector_defect(p);
    if defect > 1e-10 {
        return Err(Error::Contract(format!("{name} is not an orthogonal projector (defect {defect:e})")));
    }
    Ok(())
}

/// Singular values of `Pi_A Pi_B` with their eigenphase pairs
/// `theta_{k,+-} = -+ arccos(2 w_k^2 - 1) / 2pi`.
pub fn two_reflection_spectrum(pa: &CMat, pb: &CMat) -> Result<Vec<TwoReflectionPhase>> {
    require_projector(pa, "Pi_A")?;
    require_projector(pb, "Pi_B")?;
    if pa.shape() != pb.shape() {
        return Err(Error::Dimension { expected: pa.nrows(), found: pb.nrows() });
    }
    Ok(linalg::singular_values(&(pa * pb))
        .into_iter()
        .map(|omega| {
            let t = omega_to_phase(omega * omega);
            TwoReflectionPhase { omega, theta_plus: -t, theta_minus: t }
        })
        .collect())
}

/// Largest gap between the eigenphases of `(1 - 2 Pi_B)(1 - 2 Pi_A)` and
/// those predicted from the singular values. Singular values strictly
/// inside `(0, 1)` contribute a `+-theta` pair; every remaining dense phase
/// must sit at 0 or 1/2.
pub fn lemma1_deviation(pa: &CMat, pb: &CMat) -> Result<f64> {
    let spectrum = two_reflection_spectrum(pa, pb)?;
    let dim = pa.nrows();
    let walk = (identity(dim) - pb.scale(2.0)) * (identity(dim) - pa.scale(2.0));
    let dense = linalg::eigenphases(&walk);
    let predicted: Vec<f64> = spectrum
        .iter()
        .filter(|t| t.omega > 1e-7 && t.omega < 1.0 - 1e-12)
        .flat_map(|t| [t.theta_plus, t.theta_minus])
        .collect();
    if predicted.len() > dense.len() {
        return Ok(f64::INFINITY);
    }
    let mut used = vec![false; dense.len()];
    let mut worst: f64 = 0.0;
    for &p in &predicted {
        let best = dense
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, &d)| (j, linalg::circular_distance(p, d)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("enough dense phases");
        used[best.0] = true;
        worst = worst.max(best.1);
    }
    for (j, &d) in dense.iter().enumerate() {
        if !used[j] {
            let trivial = linalg::circular_distance(d, 0.0).min(linalg::circular_distance(d, 0.5));
            worst = worst.max(trivial);
        }
    }
    Ok(worst)
}

/// `B[F] . (1 - 2 |0 sigma><0 sigma|)` on `B_F (x) sys`.
pub fn bare_walk(f: &HermitianSystem, sigma: &CVec) -> Result<CMat> {
    let d = f.dim();
    if sigma.len() != d {
        return Err(Error::Dimension { expected: d, found: sigma.len() });
    }
    let b = self_inverse_encode(f)?;
    let mut a = CVec::zeros(2 * d);
    a.rows_mut(0, d).copy_from(sigma);
    let refl = identity(2 * d) - linalg::outer(&a).scale(2.0);
    Ok(b.unitary * refl)
}

/// Recovers `<sigma|F|sigma>` from the eigenphase of the bare walk on the
/// eigenvector with largest weight on `|0>|sigma>`. In this ordering the
/// walk satisfies `cos(2 pi theta) = -<F>`.
pub fn bare_walk_expectation(f: &HermitianSystem, sigma: &CVec) -> Result<f64> {
    let walk = bare_walk(f, sigma)?;
    let d = f.dim();
    let (vals, vecs) = linalg::unitary_eigen(&walk);
    let mut best = (0usize, -1.0);
    for k in 0..vals.len() {
        let col = vecs.column(k);
        let w = (0..d).map(|s| col[s].conj() * sigma[s]).sum::<Complex64>().norm_sqr();
        if w > best.1 {
            best = (k, w);
        }
    }
    let theta = phase_of(vals[best.0]);
    Ok(-(2.0 * PI * theta).cos())
}

/// The two nonzero eigenvalues `+-sqrt(sum x_i^2)` of the zero-diagonal
/// arrowhead with arms `x`.
pub fn x_matrix_eigenvalues(x: &[f64]) -> Result<(f64, f64)> {
    if x.is_empty() {
        return Err(Error::Parameter("arrowhead needs at least one arm entry".into()));
    }
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok((r, -r))
}

/// Explicit arrowhead matrix with first row and column `(0, x...)`.
pub fn assemble_x_matrix(x: &[f64]) -> DMatrix<f64> {
    let t = x.len() + 1;
    let mut m = DMatrix::zeros(t, t);
    for (i, &v) in x.iter().enumerate() {
        m[(0, i + 1)] = v;
        m[(i + 1, 0)] = v;
    }
    m
}

/// The observable walk `(c-B[F]) (c-R)` in the basis of the reflection's
/// range, together with the decoupled/perturbation split.
///
/// The range of `P'` is spanned by orthonormal vectors
/// `|0>_BF |rho_j^s> |psi_{j,s}>`, one per qubitised eigenpair, so the
/// nonzero spectrum of `P'Q'P'` equals the spectrum of the `2d x 2d`
/// matrix `alpha = V^dagger Q' V`.
#[derive(Debug, Clone)]
pub struct WalkModel {
    pub window: WindowVector,
    pub n: u32,
    pub phi_tilde: f64,
    pub h: HermitianSystem,
    pub f: HermitianSystem,
    pub qubitised: QubitisedEncoding,
    /// `phi_{j,s} - phi~` per eigenpair.
    pub offsets: Vec<f64>,
    /// `<0|rho_j^s>` per eigenpair.
    pub amplitudes: Vec<Complex64>,
    /// `alpha = V^dagger Q' V`.
    pub alpha: CMat,
    /// Eigenvalues of `alpha` (the squared singular values), ascending.
    pub omega_sq: Vec<f64>,
    pub omega_vectors: CMat,
    /// `alpha` with the `(0,+)` row and column decoupled.
    pub decoupled: CMat,
    /// `alpha - decoupled`: the `(0,+)` arrowhead.
    pub perturbation: CMat,
    /// Index into `omega_sq` of the eigenpair targeted by the prepared state.
    pub target: usize,
}

/// Assembles the walk for ground state `sigma_0` of `h` and observable `f`.
pub fn build_walk(window: &WindowVector, h: &HermitianSystem, f: &HermitianSystem, phi_tilde: f64) -> Result<WalkModel> {
    window.check_normalized()?;
    if h.dim() != f.dim() {
        return Err(Error::Dimension { expected: h.dim(), found: f.dim() });
    }
    register_index(phi_tilde, window.n())?;
    h.check_nondegenerate_ground()?;
    let d = h.dim();
    let qubitised = qubitise(h)?;
    let offsets = register_offsets(&qubitised, phi_tilde);
    let amplitudes: Vec<Complex64> = offsets.iter().map(|&y| overlap_amplitude(window, y)).collect();
    // Column (j,s): <0|rho_j^s> times the B_H = 0 slice of psi_{j,s}.
    let u = CMat::from_fn(d, 2 * d, |s, col| qubitised.eigenpairs[col].vector[s] * amplitudes[col]);
    let half_one_minus_f = (identity(d) - f.matrix()).scale(0.5);
    let alpha = u.adjoint() * half_one_minus_f * &u;
    let alpha = (&alpha + alpha.adjoint()).scale(0.5);
    let (omega_sq, omega_vectors) = hermitian_eigen(&alpha);
    let mut decoupled = alpha.clone();
    for k in 1..2 * d {
        decoupled[(0, k)] = ZERO;
        decoupled[(k, 0)] = ZERO;
    }
    let perturbation = &alpha - &decoupled;
    let target = select_target(&omega_sq, &omega_vectors);
    Ok(WalkModel {
        window: window.clone(),
        n: window.n(),
        phi_tilde,
        h: h.clone(),
        f: f.clone(),
        qubitised,
        offsets,
        amplitudes,
        alpha,
        omega_sq,
        omega_vectors,
        decoupled,
        perturbation,
        target,
    })
}

/// Eigenvector with the largest `(0,+)` component; near-ties go to the
/// smaller walk phase.
fn select_target(omega_sq: &[f64], vectors: &CMat) -> usize {
    let mut best = 0;
    for k in 1..omega_sq.len() {
        let wk = vectors[(0, k)].norm();
        let wb = vectors[(0, best)].norm();
        if wk > wb + 1e-12 || ((wk - wb).abs() <= 1e-12 && omega_to_phase(omega_sq[k]) < omega_to_phase(omega_sq[best])) {
            best = k;
        }
    }
    best
}

/// Dense operators of a walk small enough to assemble explicitly.
#[derive(Debug, Clone)]
pub struct DenseWalk {
    pub unitary: CMat,
    /// `(1 - c-R) / 2`.
    pub p_prime: CMat,
    /// `(1 - c-B[F]) / 2`.
    pub q_prime: CMat,
}

/// Result of the eigenvector perturbation check on the targeted eigenpair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DavisKahanCheck {
    /// `min_s ||v(M~) - s v(P'Q'P')||^2`.
    pub distance_sq: f64,
    /// Eigengap of the decoupled matrix at the `(0,+)` eigenvalue.
    pub gap: f64,
    pub perturbation_norm: f64,
    /// `8 ||Delta||^2 / gap`.
    pub bound_linear: f64,
    /// `8 ||Delta||^2 / gap^2`, the textbook sin-theta form.
    pub bound_squared: f64,
}

/// Weyl check on the `(0,+)` eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylCheck {
    /// `min_j |lambda_j(P'Q'P') - F00 p|`.
    pub deviation: f64,
    pub perturbation_norm: f64,
}

/// Exact arrowhead norm alongside the closed bound `nu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationNorm {
    pub exact: f64,
    pub closed_bound: f64,
}

impl WalkModel {
    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn ground_state(&self) -> CVec {
        self.h.eigenvector(0)
    }

    /// `<sigma_0|F|sigma_0>`.
    pub fn true_expectation(&self) -> f64 {
        self.f.expectation(&self.ground_state())
    }

    /// `p = |<rho_0^+|0>|^2`.
    pub fn p(&self) -> f64 {
        self.amplitudes[0].norm_sqr()
    }

    /// `F00 = <sigma_0|1 - F|sigma_0> / 4`.
    pub fn f00(&self) -> f64 {
        0.25 * (1.0 - self.true_expectation())
    }

    /// Largest `|<0|rho>|` over every eigenpair except `(0,+)`.
    pub fn max_contamination(&self) -> f64 {
        self.amplitudes[1..].iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `nu = 2 sqrt(p) max_contamination`.
    pub fn nu(&self) -> f64 {
        2.0 * self.p().sqrt() * self.max_contamination()
    }

    /// Interval `[F00 p - nu, F00 p + nu]`.
    pub fn lemma2_interval(&self) -> (f64, f64) {
        let centre = self.f00() * self.p();
        (centre - self.nu(), centre + self.nu())
    }

    pub fn target_omega_sq(&self) -> f64 {
        self.omega_sq[self.target]
    }

    /// Positive-branch walk phase of the targeted eigenpair, in `[0, 1/2]`.
    pub fn target_phase(&self) -> f64 {
        omega_to_phase(self.target_omega_sq())
    }

    /// Squared overlap of the targeted eigenvector with `(0,+)`.
    pub fn target_weight(&self) -> f64 {
        self.omega_vectors[(0, self.target)].norm_sqr()
    }

    /// Walk eigenphase pairs `+-theta_k` for every eigenvalue of `alpha`.
    pub fn walk_phases(&self) -> Vec<(f64, f64)> {
        self.omega_sq
            .iter()
            .map(|&w| {
                let t = omega_to_phase(w);
                (t, -t)
            })
            .collect()
    }

    /// Arm moduli of the perturbation arrowhead.
    pub fn arms(&self) -> Vec<f64> {
        (1..self.perturbation.nrows()).map(|k| self.perturbation[(0, k)].norm()).collect()
    }

    pub fn perturbation_norm(&self) -> f64 {
        x_matrix_eigenvalues(&self.arms()).map_or(0.0, |v| v.0)
    }

    pub fn weyl(&self) -> WeylCheck {
        let centre = self.f00() * self.p();
        let deviation = self.omega_sq.iter().map(|w| (w - centre).abs()).fold(f64::INFINITY, f64::min);
        WeylCheck { deviation, perturbation_norm: self.perturbation_norm() }
    }

    /// Compares the `(0,+)` eigenvector of the decoupled matrix with the
    /// eigenvector of `alpha` at the same position in sorted order.
    pub fn davis_kahan(&self) -> DavisKahanCheck {
        let (m_vals, m_vecs) = hermitian_eigen(&self.decoupled);
        // The decoupled (0,+) eigenvector is e_0; find its sorted position.
        let pos = (0..m_vals.len())
            .max_by(|&a, &b| m_vecs[(0, a)].norm().total_cmp(&m_vecs[(0, b)].norm()))
            .unwrap_or(0);
        let lambda = m_vals[pos];
        let gap = m_vals
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != pos)
            .map(|(_, v)| (v - lambda).abs())
            .fold(f64::INFINITY, f64::min);
        let w = self.omega_vectors.column(pos).into_owned();
        let mut e0 = CVec::zeros(w.len());
        e0[0] = ONE;
        let distance_sq = linalg::phase_aligned_distance_sq(&e0, &w);
        let norm = self.perturbation_norm();
        DavisKahanCheck {
            distance_sq,
            gap,
            perturbation_norm: norm,
            bound_linear: 8.0 * norm * norm / gap,
            bound_squared: 8.0 * norm * norm / (gap * gap),
        }
    }

    /// Assembles `U = (c-B[F])(c-R)` on `B_F (x) iph (x) B_H (x) sys` from the
    /// circuit form of the reflection.
    pub fn dense_walk(&self) -> Result<DenseWalk> {
        let d = self.dim();
        let len = self.window.len();
        let half = len * 2 * d;
        check_dense(2 * half)?;
        let refl = build_reflection(&self.window, &self.qubitised, self.phi_tilde)?;
        let mut c_r = identity(2 * half);
        c_r.view_mut((0, 0), (half, half)).copy_from(&refl);
        let b = self_inverse_encode(&self.f)?.unitary;
        let mut c_b = identity(2 * half);
        // B[F] acts on (B_F, sys) when iph = 0 and B_H = 0.
        for fo in 0..2 {
            for so in 0..d {
                for fi in 0..2 {
                    for si in 0..d {
                        c_b[(fo * half + so, fi * half + si)] = b[(fo * d + so, fi * d + si)];
                    }
                }
            }
        }
        let one = identity(2 * half);
        let p_prime = (&one - &c_r).scale(0.5);
        let q_prime = (&one - &c_b).scale(0.5);
        Ok(DenseWalk { unitary: c_b * c_r, p_prime, q_prime })
    }
}

/// Exact arrowhead norm and the closed bound; errors if the ordering fails.
pub fn perturbation_norm(model: &WalkModel) -> Result<PerturbationNorm> {
    let exact = model.perturbation_norm();
    let closed_bound = model.nu();
    if exact > closed_bound + 1e-12 {
        return Err(Error::Contract(format!("arrowhead norm {exact} exceeds closed bound {closed_bound}")));
    }
    Ok(PerturbationNorm { exact, closed_bound })
}

/// Dense check that `psi` is an eigenvector of `u` with eigenvalue
/// `exp(2 pi i phase)`; returns the residual norm.
pub fn eigen_residual(u: &CMat, psi: &CVec, phase: f64) -> f64 {
    let lam = Complex64::from_polar(1.0, 2.0 * PI * phase);
    (u * psi - psi * lam).norm()
}

/// Maximum deviation of the Gram matrix of `{rho(phi - m/2^n)}` from the
/// identity.
pub fn rho_gram_defect(window: &WindowVector, phi: f64) -> f64 {
    let completion = WindowCompletion::new(window);
    let len = window.len();
    let states: Vec<CVec> = (0..len).map(|m| rho_state(&completion, phi - m as f64 / len as f64)).collect();
    let mut worst: f64 = 0.0;
    for (a, sa) in states.iter().enumerate() {
        for (b, sb) in states.iter().enumerate() {
            let want = if a == b { ONE } else { ZERO };
            worst = worst.max((sa.dotc(sb) - want).norm());
        }
    }
    worst
}

/// Checks two matrices agree entrywise to `tol`.
pub fn matrices_close(a: &CMat, b: &CMat, tol: f64) -> bool {
    a.shape() == b.shape() && max_abs_diff(a, b) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{self, exact_phase_hamiltonian, gapped_hamiltonian, random_observable, random_projector};
    use crate::linalg::{eigenphases, hermitian_eigenvalues, unitarity_defect};
    use crate::windows::{make_window, optimal_beta, WindowSpec};

    fn rect(n: u32) -> WindowVector {
        make_window(WindowSpec::rectangular(), n).unwrap()
    }

    fn kaiser(beta: f64, n: u32) -> WindowVector {
        make_window(WindowSpec::kaiser(beta), n).unwrap()
    }

    fn ground_phase(h: &HermitianSystem) -> f64 {
        qubitised_phase(h.eigenvalues()[0], Branch::Plus)
    }

    #[test]
    fn encoding_of_identity_and_zero() {
        let id = self_inverse_encode(&HermitianSystem::scaled_identity(2, 1.0).unwrap()).unwrap();
        let want = CMat::from_diagonal(&CVec::from_vec(vec![ONE, ONE, -ONE, -ONE]));
        assert!(max_abs_diff(&id.unitary, &want) < 1e-15);
        let zero = self_inverse_encode(&HermitianSystem::scaled_identity(2, 0.0).unwrap()).unwrap();
        let mut swap = CMat::zeros(4, 4);
        for s in 0..2 {
            swap[(s, 2 + s)] = ONE;
            swap[(2 + s, s)] = ONE;
        }
        assert!(max_abs_diff(&zero.unitary, &swap) < 1e-15);
    }

    #[test]
    fn random_encoding_is_self_inverse() {
        let mut r = instances::rng(1);
        let f = random_observable(&mut r, 4).unwrap();
        let b = self_inverse_encode(&f).unwrap();
        assert!(unitarity_defect(&b.unitary) < 1e-10);
        assert!(max_abs_diff(&(&b.unitary * &b.unitary), &identity(8)) < 1e-10);
        assert!(max_abs_diff(&b.top_left(), f.matrix()) < 1e-10);
    }

    #[test]
    fn out_of_norm_operator_is_rejected() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![c(1.2), c(0.1)]));
        assert!(matches!(HermitianSystem::new(m), Err(Error::Normalization { .. })));
    }

    #[test]
    fn qubitised_phases_of_diagonal_hamiltonian() {
        let h = HermitianSystem::diagonal(&[0.9, -0.5]).unwrap();
        let q = qubitise(&h).unwrap();
        let mut want: Vec<f64> = [0.9f64, -0.5]
            .iter()
            .flat_map(|&l| [l.acos() / (2.0 * PI), -l.acos() / (2.0 * PI)])
            .collect();
        want.sort_by(f64::total_cmp);
        let dense = eigenphases(&q.unitary);
        assert!(linalg::phase_multiset_distance(&want, &dense) < 1e-10);
        let top = q.unitary.view((0, 0), (2, 2)).into_owned();
        assert!(max_abs_diff(&top, h.matrix()) < 1e-10);
    }

    #[test]
    fn unit_eigenvalue_gives_double_zero_phase() {
        let h = HermitianSystem::diagonal(&[1.0, 0.2]).unwrap();
        let q = qubitise(&h).unwrap();
        let zeros = eigenphases(&q.unitary).iter().filter(|p| p.abs() < 1e-10).count();
        assert_eq!(zeros, 2);
        for e in &q.eigenpairs {
            assert!(eigen_residual(&q.unitary, &e.vector, e.phase) < 1e-10);
        }
    }

    #[test]
    fn eigenvectors_match_the_closed_form() {
        let mut r = instances::rng(2);
        let h = gapped_hamiltonian(&mut r, 4, 0.05).unwrap();
        let q = qubitise(&h).unwrap();
        let (vals, vecs) = linalg::unitary_eigen(&q.unitary);
        for e in &q.eigenpairs {
            assert!(eigen_residual(&q.unitary, &e.vector, e.phase) < 1e-10);
            let literal = qubitised_eigenvector_from_walk(&q.unitary, e.lambda, &h.eigenvector(e.index), e.branch).unwrap();
            assert!(linalg::phase_aligned_distance_sq(&literal, &e.vector) < 1e-16);
            // Dense eigenvector at the matching eigenvalue, up to phase.
            let k = (0..vals.len())
                .min_by(|&a, &b| {
                    linalg::circular_distance(phase_of(vals[a]), e.phase)
                        .total_cmp(&linalg::circular_distance(phase_of(vals[b]), e.phase))
                })
                .unwrap();
            let dense = vecs.column(k).into_owned();
            assert!(linalg::phase_aligned_distance_sq(&dense, &e.vector) < 1e-14);
        }
    }

    #[test]
    fn window_completion_examples() {
        let e0 = WindowVector::from_amplitudes(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(complete_window_unitary(&e0), DMatrix::identity(4, 4));
        let h = complete_window_unitary(&rect(1));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((h[(0, 0)] - s).abs() < 1e-15 && (h[(1, 0)] - s).abs() < 1e-15);
        assert!((h[(1, 1)] + s).abs() < 1e-15);
        let w = kaiser(7.0, 5);
        let m = complete_window_unitary(&w);
        assert!((m.transpose() * &m - DMatrix::identity(32, 32)).amax() < 1e-12);
        for x in 0..32 {
            assert!((m[(x, 0)] - w.amplitudes()[x]).abs() < 1e-15);
        }
        let z: Vec<Complex64> = (0..32).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let fast = WindowCompletion::new(&w).apply(&z);
        let slow = linalg::from_real(&m) * CVec::from_vec(z);
        for i in 0..32 {
            assert!((fast[i] - slow[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn rho_amplitude_at_zero_is_the_overlap() {
        let w = kaiser(5.0, 4);
        let comp = WindowCompletion::new(&w);
        for y in [0.0, 0.03, 0.4] {
            assert!((rho_state(&comp, y)[0] - overlap_amplitude(&w, y)).norm() < 1e-14);
        }
    }

    #[test]
    fn rho_states_are_orthonormal() {
        for (beta, n, phi) in [(0.0, 3, 0.1), (6.0, 4, 0.37), (20.0, 5, 0.912)] {
            assert!(rho_gram_defect(&kaiser(beta, n), phi) < 1e-10);
        }
    }

    #[test]
    fn register_phase_rounding() {
        assert_eq!(nearest_register_phase(1.5 / 4.0, 2), 0.25);
        assert_eq!(nearest_register_phase(0.3, 3), 0.25);
        assert_eq!(nearest_register_phase(0.99, 3), 0.0);
        assert!(register_index(0.3, 3).is_err());
        assert_eq!(register_index(0.375, 3).unwrap(), 3);
    }

    #[test]
    fn exact_phase_reflection_targets_ground_state() {
        let mut r = instances::rng(4);
        let n = 3;
        let h = exact_phase_hamiltonian(&mut r, 2, n).unwrap();
        let q = qubitise(&h).unwrap();
        let refl = build_reflection(&rect(n), &q, ground_phase(&h)).unwrap();
        let inner = 4;
        let psi = &q.pair(0, Branch::Plus).vector;
        let local = identity(inner) - linalg::outer(psi).scale(2.0);
        let block = refl.view((0, 0), (inner, inner)).into_owned();
        assert!(max_abs_diff(&block, &local) < 1e-9);
        let leak = refl.view((inner, 0), (refl.nrows() - inner, inner)).into_owned();
        assert!(linalg::max_abs(&leak) < 1e-9);
    }

    #[test]
    fn circuit_reflection_matches_projector_form() {
        let mut r = instances::rng(5);
        let h = gapped_hamiltonian(&mut r, 2, 0.1).unwrap();
        let q = qubitise(&h).unwrap();
        for w in [rect(2), kaiser(3.0, 2), kaiser(optimal_beta(1), 3)] {
            let phi = nearest_register_phase(ground_phase(&h), w.n());
            let refl = build_reflection(&w, &q, phi).unwrap();
            let proj = reflection_projector(&w, &q, phi).unwrap();
            assert!(linalg::projector_defect(&proj) < 1e-9);
            let closed = identity(proj.nrows()) - proj.scale(2.0);
            assert!(max_abs_diff(&refl, &closed) < 1e-9);
            assert!(max_abs_diff(&(&refl * &refl), &identity(refl.nrows())) < 1e-9);
        }
    }

    #[test]
    fn two_reflection_examples() {
        let mut a = CMat::zeros(2, 2);
        a[(0, 0)] = ONE;
        let mut b = CMat::zeros(2, 2);
        b[(1, 1)] = ONE;
        let s = two_reflection_spectrum(&a, &b).unwrap();
        assert!(s[0].omega.abs() < 1e-15 && (s[0].theta_minus - 0.5).abs() < 1e-12);
        let s = two_reflection_spectrum(&a, &a).unwrap();
        assert!((s[0].omega - 1.0).abs() < 1e-15 && s[0].theta_plus.abs() < 1e-7);
        let mut r = instances::rng(6);
        let pa = random_projector(&mut r, 6, 1);
        let pb = random_projector(&mut r, 6, 1);
        assert!(lemma1_deviation(&pa, &pb).unwrap() < 1e-10);
        let bad = CMat::from_element(2, 2, c(0.7));
        assert!(matches!(two_reflection_spectrum(&bad, &a), Err(Error::Contract(_))));
    }

    #[test]
    fn x_matrix_examples() {
        assert_eq!(x_matrix_eigenvalues(&[3.0, 4.0]).unwrap(), (5.0, -5.0));
        assert_eq!(x_matrix_eigenvalues(&[0.0, 0.0]).unwrap(), (0.0, -0.0));
        let x = [0.3, -1.2, 0.05, 2.0, -0.7, 0.9];
        let dense = assemble_x_matrix(&x).symmetric_eigenvalues();
        let (hi, lo) = x_matrix_eigenvalues(&x).unwrap();
        let max = dense.iter().cloned().fold(f64::MIN, f64::max);
        let min = dense.iter().cloned().fold(f64::MAX, f64::min);
        assert!((max - hi).abs() < 1e-12 && (min - lo).abs() < 1e-12);
        assert_eq!(dense.iter().filter(|v| v.abs() > 1e-12).count(), 2);
    }

    #[test]
    fn exact_phase_walk_with_identity_observable() {
        let mut r = instances::rng(7);
        let n = 3;
        let h = exact_phase_hamiltonian(&mut r, 2, n).unwrap();
        let f = HermitianSystem::scaled_identity(2, 1.0).unwrap();
        let model = build_walk(&rect(n), &h, &f, ground_phase(&h)).unwrap();
        // <F> = 1 leaves omega = 0: the walk phase sits at 1/2.
        assert!(model.target_omega_sq().abs() < 1e-12);
        assert!((model.target_phase() - 0.5).abs() < 1e-6);
        let est = 1.0 - 4.0 * model.target_omega_sq() / model.p();
        assert!((est - 1.0).abs() < 1e-10);
    }

    #[test]
    fn exact_phase_walk_recovers_diagonal_observable() {
        let n = 3;
        let h = HermitianSystem::diagonal(&[(2.0 * PI * 3.0 / 8.0).cos(), (2.0 * PI / 8.0).cos()]).unwrap();
        let f = HermitianSystem::diagonal(&[0.5, -0.3]).unwrap();
        let model = build_walk(&rect(n), &h, &f, 3.0 / 8.0).unwrap();
        assert!((model.p() - 1.0).abs() < 1e-12);
        let theta = model.target_phase();
        assert!(((2.0 * PI * theta).cos() - (-0.75)).abs() < 1e-10);
        let est = 1.0 - 4.0 * model.target_omega_sq() / model.p();
        assert!((est - 0.5).abs() < 1e-10);
        let bare = bare_walk_expectation(&f, &h.eigenvector(0)).unwrap();
        assert!((bare - 0.5).abs() < 1e-10);
    }

    #[test]
    fn compressed_spectrum_matches_dense_walk() {
        let mut r = instances::rng(8);
        for (d, n, beta) in [(2, 2, 0.0), (2, 3, 5.0), (3, 2, 2.0)] {
            let h = gapped_hamiltonian(&mut r, d, 0.1).unwrap();
            let f = random_observable(&mut r, d).unwrap();
            let w = kaiser(beta, n);
            let phi = nearest_register_phase(ground_phase(&h), n);
            let model = build_walk(&w, &h, &f, phi).unwrap();
            let dense = model.dense_walk().unwrap();
            assert!(unitarity_defect(&dense.unitary) < 1e-9);
            assert!(linalg::projector_defect(&dense.p_prime) < 1e-9);
            assert!(linalg::projector_defect(&dense.q_prime) < 1e-9);
            let pqp = &dense.p_prime * &dense.q_prime * &dense.p_prime;
            let mut big = hermitian_eigenvalues(&pqp);
            big.reverse();
            let mut small = model.omega_sq.clone();
            small.reverse();
            for (a, b) in small.iter().zip(&big) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
            assert!(big[small.len()..].iter().all(|v| v.abs() < 1e-9));
            assert!(lemma1_deviation(&dense.p_prime, &dense.q_prime).unwrap() < 1e-8);
        }
    }

    #[test]
    fn alpha_matches_entrywise_formula() {
        let mut r = instances::rng(9);
        let h = gapped_hamiltonian(&mut r, 3, 0.1).unwrap();
        let f = random_observable(&mut r, 3).unwrap();
        let w = kaiser(4.0, 4);
        let model = build_walk(&w, &h, &f, nearest_register_phase(ground_phase(&h), 4)).unwrap();
        for (a, ea) in model.qubitised.eigenpairs.iter().enumerate() {
            for (b, eb) in model.qubitised.eigenpairs.iter().enumerate() {
                let si = h.eigenvector(ea.index);
                let sj = h.eigenvector(eb.index);
                let fij = 0.25 * (si.dotc(&sj) - si.dotc(&(f.matrix() * &sj)));
                let want = fij * model.amplitudes[a].conj() * model.amplitudes[b];
                assert!((model.alpha[(a, b)] - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn lemma2_interval_contains_target() {
        let mut r = instances::rng(10);
        for l in [3u32, 4] {
            let n = l + 1;
            let gap = (1.0 + 2.0) / (1u32 << n) as f64 * 1.05;
            let h = gapped_hamiltonian(&mut r, 3, gap).unwrap();
            let f = random_observable(&mut r, 3).unwrap();
            let model = build_walk(&kaiser(2.5, n), &h, &f, nearest_register_phase(ground_phase(&h), n)).unwrap();
            let (lo, hi) = model.lemma2_interval();
            let w = model.target_omega_sq();
            assert!(lo <= w && w <= hi, "{lo} <= {w} <= {hi}");
        }
    }

    #[test]
    fn perturbation_norm_cases() {
        let mut r = instances::rng(12);
        let h = exact_phase_hamiltonian(&mut r, 3, 3).unwrap();
        let f = random_observable(&mut r, 3).unwrap();
        let exact = build_walk(&rect(3), &h, &f, ground_phase(&h)).unwrap();
        assert!(perturbation_norm(&exact).unwrap().exact < 1e-10);
        let h = gapped_hamiltonian(&mut r, 2, 0.2).unwrap();
        let f = random_observable(&mut r, 2).unwrap();
        let model = build_walk(&kaiser(3.0, 3), &h, &f, nearest_register_phase(ground_phase(&h), 3)).unwrap();
        let pn = perturbation_norm(&model).unwrap();
        assert!(pn.exact <= pn.closed_bound);
        let dense = model.perturbation.clone();
        let op = linalg::singular_values(&dense)[0];
        assert!((op - pn.exact).abs() < 1e-12);
        let weyl = model.weyl();
        assert!(weyl.deviation <= weyl.perturbation_norm + 1e-15);
    }

    #[test]
    fn degenerate_ground_is_rejected() {
        let h = HermitianSystem::diagonal(&[-0.5, -0.5, 0.3]).unwrap();
        let f = HermitianSystem::scaled_identity(3, 0.0).unwrap();
        assert!(matches!(build_walk(&rect(3), &h, &f, 0.25), Err(Error::DegenerateGround(..))));
    }

    #[test]
    fn inconsistent_gap_metadata_is_rejected() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![c(-0.5), c(-0.4)]));
        assert!(HermitianSystem::with_relative_gap(m.clone(), 0.5).is_err());
        assert!(HermitianSystem::with_relative_gap(m, 0.05).is_ok());
    }

    #[test]
    fn matrix_file_round_trip() {
        let mut r = instances::rng(13);
        let h = random_observable(&mut r, 3).unwrap();
        let file = h.to_matrix_file();
        let json = serde_json::to_string(&file).unwrap();
        let back: MatrixFile = serde_json::from_str(&json).unwrap();
        let sys = back.to_system().unwrap();
        assert!(max_abs_diff(sys.matrix(), h.matrix()) < 1e-15);
        let scaled = MatrixFile { one_norm: 2.0, gap: 0.01, ..back };
        let s2 = scaled.to_system().unwrap();
        assert!((s2.relative_gap() - 0.005).abs() < 1e-15);
    }
}
