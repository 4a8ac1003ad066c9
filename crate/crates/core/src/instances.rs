//! Seeded random instances for tests, verification suites and examples.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec};
use crate::walk::HermitianSystem;

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `index` of a seed, for independent per-instance generators.
pub fn substream(seed: u64, index: u64) -> InstanceRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_vector(rng: &mut impl Rng, dim: usize) -> CVec {
    let v = CVec::from_fn(dim, |_, _| gaussian(rng));
    let n = v.norm();
    v / c(n)
}

/// Unitary from the QR factorization of a complex Gaussian matrix with the
/// diagonal phases of `R` divided out.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0) };
        let mut col = q.column_mut(j);
        col *= ph;
    }
    q
}

/// Orthogonal projector onto a random `rank`-dimensional subspace.
pub fn random_projector(rng: &mut impl Rng, dim: usize, rank: usize) -> CMat {
    let u = random_unitary(rng, dim);
    let basis = u.columns(0, rank);
    basis * basis.adjoint()
}

/// Observable with eigenvalues uniform in `[-1, 1]` in a random basis.
pub fn random_observable(rng: &mut impl Rng, dim: usize) -> Result<HermitianSystem> {
    let values: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
    HermitianSystem::from_spectrum(&values, &random_unitary(rng, dim))
}

/// Diagonal observable with eigenvalues uniform in `[-1, 1]`.
pub fn random_diagonal_observable(rng: &mut impl Rng, dim: usize) -> Result<HermitianSystem> {
    let values: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
    HermitianSystem::diagonal(&values)
}

/// Hamiltonian whose qubitised phases keep every other eigenphase at least
/// `min_gap` (in cycles, circular distance) from the ground phase
/// `arccos(lambda_0) / 2pi`, including the ground state's own minus branch.
pub fn gapped_hamiltonian(rng: &mut impl Rng, dim: usize, min_gap: f64) -> Result<HermitianSystem> {
    if dim < 1 || !(min_gap > 0.0 && min_gap < 1.0 / 3.0) {
        return Err(Error::Parameter(format!("cannot place a phase gap of {min_gap} with dimension {dim}")));
    }
    // Ground phase in [min_gap, 1/2 - min_gap/2]; excited phases below it by
    // at least min_gap. The minus branches then sit at least min_gap away.
    let lo = min_gap;
    let hi = 0.5 - min_gap / 2.0;
    let phi0 = lo + (hi - lo) * rng.random_range(0.02..0.98);
    let mut phases = vec![phi0];
    for _ in 1..dim {
        phases.push(rng.random_range(0.0..=(phi0 - min_gap)));
    }
    let values: Vec<f64> = phases.iter().map(|p| (2.0 * PI * p).cos()).collect();
    HermitianSystem::from_spectrum(&values, &random_unitary(rng, dim))
}

/// Hamiltonian with every qubitised phase an exact `n`-bit value: the
/// ground phase `k_0 / 2^n` with `0 < k_0 < 2^(n-1)` and excited phases at
/// smaller integers.
pub fn exact_phase_hamiltonian(rng: &mut impl Rng, dim: usize, n: u32) -> Result<HermitianSystem> {
    let half = 1usize << (n - 1);
    if n < 2 {
        return Err(Error::Parameter("exact-phase instances need n >= 2".into()));
    }
    let len = (1usize << n) as f64;
    let k0 = rng.random_range(1..half);
    let mut ks = vec![k0];
    for _ in 1..dim {
        ks.push(rng.random_range(0..k0));
    }
    let values: Vec<f64> = ks.iter().map(|&k| (2.0 * PI * k as f64 / len).cos()).collect();
    HermitianSystem::from_spectrum(&values, &random_unitary(rng, dim))
}
