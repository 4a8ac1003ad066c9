//! Modified Bessel function of the first kind, order zero.

use crate::error::{Error, Result};

/// Arguments above this use the large-argument expansion.
///
/// At 30 the smallest term of the asymptotic series is below 1e-25, so the
/// seam is accurate to machine precision on both sides.
pub const ASYMPTOTIC_SWITCH: f64 = 30.0;

/// `I_0(x)`.
///
/// Returns `+inf` once the result overflows `f64` (around `x = 713`); use
/// [`bessel_i0_scaled`] for ratios at large arguments.
pub fn bessel_i0(x: f64) -> Result<f64> {
    let ax = checked_abs(x)?;
    if ax <= ASYMPTOTIC_SWITCH {
        Ok(power_series(ax))
    } else {
        Ok(asymptotic_scaled(ax) * ax.exp())
    }
}

/// `exp(-|x|) I_0(x)`, finite for every finite `x`.
pub fn bessel_i0_scaled(x: f64) -> Result<f64> {
    let ax = checked_abs(x)?;
    if ax <= ASYMPTOTIC_SWITCH {
        Ok(power_series(ax) * (-ax).exp())
    } else {
        Ok(asymptotic_scaled(ax))
    }
}

fn checked_abs(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x.abs())
    } else {
        Err(Error::Domain(format!("I0 requires a finite argument, got {x}")))
    }
}

/// Ascending series `sum_k ((x/2)^k / k!)^2`; all terms positive.
fn power_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term <= 1e-16 * sum {
            return sum;
        }
        k += 1.0;
    }
}

/// `exp(-x) I_0(x) ~ (2 pi x)^{-1/2} sum_k c_k x^{-k}` with
/// `c_k = c_{k-1} (2k-1)^2 / (8k)`, truncated at the smallest term.
fn asymptotic_scaled(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k: f64 = 1.0;
    loop {
        let next = term * (2.0 * k - 1.0).powi(2) / (8.0 * k * x);
        if next >= term || next <= 1e-17 * sum {
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen from a 40-digit arbitrary-precision evaluation.
    const REFERENCE: &[(f64, f64)] = &[
        (1.0, 1.266_065_877_752_008_3),
        (3.7, 8.738_617_524_169_397),
        (10.0, 2_815.716_628_466_254_5),
        (15.0, 339_649.373_297_913_9),
        (29.9, 708_478_330_489.014_5),
        (30.0, 781_672_297_823.977_5),
        (30.1, 862_432_920_031.779_2),
        (50.0, 2.932_553_783_849_336e20),
        (100.0, 1.073_751_707_131_073_8e42),
    ];

    fn oracle_series(x: f64) -> f64 {
        // Independent route: explicit factorials, fixed term count.
        let mut sum = 0.0;
        let mut fact = 1.0_f64;
        for k in 0..200 {
            if k > 0 {
                fact *= k as f64;
            }
            let t = (x / 2.0).powi(k) / fact;
            sum += t * t;
            if !t.is_finite() {
                break;
            }
        }
        sum
    }

    #[test]
    fn zero_gives_one() {
        assert_eq!(bessel_i0(0.0).unwrap(), 1.0);
    }

    #[test]
    fn even_in_argument() {
        assert_eq!(bessel_i0(-3.7).unwrap(), bessel_i0(3.7).unwrap());
        assert_eq!(bessel_i0(-45.0).unwrap(), bessel_i0(45.0).unwrap());
    }

    #[test]
    fn matches_reference_values() {
        for &(x, want) in REFERENCE {
            let got = bessel_i0(x).unwrap();
            assert!(((got - want) / want).abs() <= 1e-14, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn series_oracle_agrees() {
        assert!((bessel_i0(1.0).unwrap() - 1.266_065_877_75).abs() < 1e-11);
        for i in 0..=60 {
            let x = i as f64 * 0.5;
            let want = oracle_series(x);
            let got = bessel_i0(x).unwrap();
            assert!(((got - want) / want).abs() <= 1e-14, "x={x}");
        }
    }

    #[test]
    fn seam_is_continuous() {
        let below = power_series(ASYMPTOTIC_SWITCH) * (-ASYMPTOTIC_SWITCH).exp();
        let above = asymptotic_scaled(ASYMPTOTIC_SWITCH);
        assert!(((below - above) / below).abs() < 1e-15);
    }

    #[test]
    fn scaled_is_finite_at_large_arguments() {
        let v = bessel_i0_scaled(700.0).unwrap();
        assert!((v - 0.015_081_295_651_531_357).abs() / v < 1e-14);
        assert!(bessel_i0_scaled(1e6).unwrap().is_finite());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(bessel_i0(f64::NAN), Err(Error::Domain(_))));
        assert!(bessel_i0_scaled(f64::INFINITY).is_err());
    }
}
