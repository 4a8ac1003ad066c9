//! Overlap profiles and worst-case contamination against Kaiser beta.

use wqpe::qpe::{max_contamination_overlap, overlap};
use wqpe::windows::{make_window, optimal_beta, WindowSpec};

fn main() -> wqpe::error::Result<()> {
    let l = 4;
    for m in 1..=3 {
        let n = l + m;
        let best = optimal_beta(m);
        println!("m = {m} (beta_opt = {best:.3})");
        for beta in [0.0, 0.5 * best, best, 1.5 * best] {
            let window = make_window(WindowSpec::kaiser(beta), n)?;
            let contam = max_contamination_overlap(&window, l)?;
            let centre = overlap(&window, 0.5 / window.len() as f64);
            println!("  beta {beta:7.3}: max contamination {contam:.3e}, half-bin overlap {centre:.4}");
        }
    }
    Ok(())
}
