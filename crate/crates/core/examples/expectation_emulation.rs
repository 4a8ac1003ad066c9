//! End-to-end emulation on a random gapped system with both windows.

use wqpe::emulator::{gap_threshold, run_algorithm, EmulationParams};
use wqpe::instances::{gapped_hamiltonian, random_observable, rng};
use wqpe::windows::{make_window, optimal_beta, WindowSpec};

fn main() -> wqpe::error::Result<()> {
    let (l, m, n_o) = (4, 2, 20);
    let mut r = rng(2024);
    let h = gapped_hamiltonian(&mut r, 4, 1.2 * gap_threshold(l, m))?;
    let f = random_observable(&mut r, 4)?;
    let params = EmulationParams::new(m, n_o);
    for spec in [WindowSpec::rectangular(), WindowSpec::kaiser(optimal_beta(m))] {
        let report = run_algorithm(&make_window(spec, l + m)?, &h, &f, &params)?;
        println!(
            "{spec}: estimate {:+.8}, truth {:+.8}, error {:.2e}, bound {:.2e}",
            report.estimate, report.truth, report.realized_error, report.bound
        );
    }
    Ok(())
}
