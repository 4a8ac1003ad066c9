//! Error and success bounds across register sizes, with the error split
//! into its reflection, pre-learning and outer-QPE parts.

use wqpe::bounds::{error_bound, error_decomposition, success_bound, BoundInputs};

fn main() -> wqpe::error::Result<()> {
    let (p, max_contam) = (0.81, 2e-5);
    for n_o in [8, 12, 16, 20] {
        let inputs = BoundInputs::with_default_c(p, max_contam, n_o)?;
        let d = error_decomposition(p, max_contam, n_o, 0.4)?;
        println!(
            "n_o {n_o:>2}: bound {:.3e} (reflection {:.2e}, prelearning {:.2e}, oqpe {:.2e}), success >= {:.4}",
            error_bound(&inputs)?,
            d.reflection,
            d.prelearning,
            d.oqpe,
            success_bound(&inputs)?
        );
    }
    Ok(())
}
