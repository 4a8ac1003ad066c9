//! Register sizes and Toffoli totals for one embedded system, rectangular
//! against auto-Kaiser.

use wqpe::resources::{estimate_case, CostModel, ErrorBudget, EstimateOptions, Observable, Tables};
use wqpe::windows::WindowChoice;

fn main() -> wqpe::error::Result<()> {
    let tables = Tables::embedded();
    let name = std::env::args().nth(1).unwrap_or_else(|| "p450".into());
    let system = tables.system(&name)?;
    for observable in Observable::ALL {
        let case = system.case(observable)?;
        let budget = ErrorBudget::thirds(tables.epsilon_target(observable)?)?;
        for window in [WindowChoice::Rectangular, WindowChoice::KaiserAuto] {
            let r = estimate_case(&case, &budget, window, &CostModel::default(), &EstimateOptions::default(), None)?;
            println!(
                "{:<10} {:<8} {:<12} l={:>2} m={:>2} n_o={:>2} toffoli={:.3e}",
                system.name, observable, window.to_string(), r.l, r.m, r.n_o, r.total_toffoli as f64
            );
        }
    }
    Ok(())
}
