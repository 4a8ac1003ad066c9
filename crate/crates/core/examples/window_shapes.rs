//! Prints rectangular and Kaiser window amplitudes side by side.

use wqpe::windows::{make_window, optimal_beta, WindowSpec};

fn main() -> wqpe::error::Result<()> {
    let n = 5;
    let beta = optimal_beta(2);
    let rect = make_window(WindowSpec::rectangular(), n)?;
    let kaiser = make_window(WindowSpec::kaiser(beta), n)?;
    println!("n = {n}, kaiser beta = {beta:.4}");
    println!("{:>3}  {:>10}  {:>10}", "x", "rect", "kaiser");
    for (x, (r, k)) in rect.amplitudes().iter().zip(kaiser.amplitudes()).enumerate() {
        println!("{x:>3}  {r:>10.6}  {k:>10.6}");
    }
    Ok(())
}
