//! Relative reflection error against block-encoding queries for both
//! windows, with the exponential QSP comparison trace.

use wqpe::emulator::{reflection_error_curve, QspModel};
use wqpe::windows::WindowChoice;

fn main() -> wqpe::error::Result<()> {
    let l = 6;
    let ms: Vec<u32> = (1..=6).collect();
    for family in [WindowChoice::Rectangular, WindowChoice::KaiserAuto] {
        println!("{family}");
        for p in reflection_error_curve(l, &ms, family, None, QspModel::default())? {
            println!("  m {}: queries {:>6}, error {:.3e}, qsp {:.3e}", p.m, p.queries, p.relative_error, p.qsp_error);
        }
    }
    Ok(())
}
