//! Readout distribution for a phase half a bin off the grid, and the
//! worst-case failure probability of each window.

use wqpe::qpe::{phase_distribution, worst_case_failure};
use wqpe::windows::{make_window, optimal_beta, WindowSpec};

fn main() -> wqpe::error::Result<()> {
    let n = 6;
    let phi = 10.5 / 64.0;
    for spec in [WindowSpec::rectangular(), WindowSpec::kaiser(optimal_beta(2))] {
        let window = make_window(spec, n)?;
        let dist = phase_distribution(&window, phi)?;
        let near: f64 = dist.mass[9..=12].iter().sum();
        println!("{spec}: mass on bins 9..=12 = {near:.6}");
        for band in [1, 2, 4] {
            println!("  worst-case failure, band {band}: {:.3e}", worst_case_failure(&window, band)?);
        }
    }
    Ok(())
}
