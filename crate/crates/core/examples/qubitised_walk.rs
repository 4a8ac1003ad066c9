//! Qubitised phases of a small Hamiltonian and the walk's target eigenphase.

use wqpe::emulator::ground_register_phase;
use wqpe::walk::{build_walk, qubitise, HermitianSystem};
use wqpe::windows::{make_window, WindowSpec};

fn main() -> wqpe::error::Result<()> {
    let h = HermitianSystem::diagonal(&[(2.0 * std::f64::consts::PI * 0.3).cos(), 0.9, 0.95])?;
    let f = HermitianSystem::diagonal(&[0.5, -0.3, 0.1])?;
    for pair in &qubitise(&h)?.eigenpairs {
        println!("lambda {:+.4} {:?}: phase {:+.6}", pair.lambda, pair.branch, pair.phase);
    }
    let n = 6;
    let window = make_window(WindowSpec::rectangular(), n)?;
    let model = build_walk(&window, &h, &f, ground_register_phase(&h, n))?;
    let (lo, hi) = model.lemma2_interval();
    println!("p = {:.6}, F00 = {:.6}", model.p(), model.f00());
    println!("target |omega|^2 = {:.6} within [{lo:.6}, {hi:.6}]", model.target_omega_sq());
    println!("target phase = {:.6}", model.target_phase());
    Ok(())
}
