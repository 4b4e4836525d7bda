//! Real log-gamma on the positive axis.
//!
//! Three regimes: a Taylor expansion of `ln Γ(1 + t)` around the two roots
//! `x = 1` and `x = 2` (so the result keeps full relative accuracy where it
//! vanishes), upward recurrence into the Stirling regime for moderate `x`,
//! and the Stirling series itself for `x ≥ 15`.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// ζ(k) for k = 2..=24; beyond that ζ(k) ≈ 1 + 2^{-k} to double precision.
#[allow(clippy::excessive_precision)]
const ZETA: [f64; 23] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_369_9,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_4,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308_1,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307_0,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_264_9,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
    1.000_000_476_932_986_8,
    1.000_000_238_450_502_7,
    1.000_000_119_219_925_9,
    1.000_000_059_608_189_1,
];

fn zeta(k: usize) -> f64 {
    if k - 2 < ZETA.len() {
        ZETA[k - 2]
    } else {
        1.0 + 2f64.powi(-(k as i32))
    }
}

/// `ln Γ(1 + t)` for `|t| ≤ 0.5` from its Maclaurin series.
fn ln_gamma_1p(t: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = t * t;
    let mut k = 2;
    while k < 80 {
        let term = zeta(k) * pow / k as f64;
        let signed = if k % 2 == 0 { term } else { -term };
        sum += signed;
        if term.abs() <= 1e-18 * sum.abs().max(t.abs()) {
            break;
        }
        pow *= t;
        k += 1;
    }
    -EULER_GAMMA * t + sum
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Bernoulli terms B_2k / (2k (2k-1) x^(2k-1))
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2
                        * (1.0 / 1260.0
                            + inv2
                                * (-1.0 / 1680.0
                                    + inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360_360.0))))));
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series
}

/// Natural logarithm of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("log_gamma requires finite x > 0, got {x}")));
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        ln_gamma_1p(x) - x.ln()
    } else if x <= 1.5 {
        ln_gamma_1p(x - 1.0)
    } else if x <= 2.5 {
        let t = x - 2.0;
        t.ln_1p() + ln_gamma_1p(t)
    } else if x < 15.0 {
        let mut shifted = x;
        let mut prod = 1.0;
        while shifted < 15.0 {
            prod *= shifted;
            shifted += 1.0;
        }
        stirling(shifted) - prod.ln()
    } else {
        stirling(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mpfr_ln_gamma(x: f64) -> f64 {
        rug::Float::with_val(256, x).ln_gamma().to_f64()
    }

    #[test]
    fn exact_roots() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
    }

    #[test]
    fn half_is_ln_sqrt_pi() {
        // Frozen from MPFR at 256 bits.
        let v = log_gamma(0.5).unwrap();
        assert!((v - 0.572_364_942_924_700_1).abs() <= 1e-15);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
        assert!(log_gamma(f64::INFINITY).is_err());
    }

    #[test]
    fn matches_mpfr_across_range() {
        let mut x: f64 = 1e-6;
        let mut worst: f64 = 0.0;
        while x < 1e6 {
            for y in [x, x * 1.37, x * 2.91, 1.0 + x.min(0.4), 2.0 - x.min(0.4)] {
                let want = mpfr_ln_gamma(y);
                let got = log_gamma(y).unwrap();
                let rel = ((got - want) / want).abs();
                if want != 0.0 {
                    worst = worst.max(rel);
                }
            }
            x *= 1.7;
        }
        assert!(worst <= 1e-13, "worst relative error {worst:e}");
    }
}
