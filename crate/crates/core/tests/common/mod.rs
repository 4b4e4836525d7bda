#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wright_radii::{locate_zeros, WrightParams, ZeroTable};

pub const REFINE_TOL: f64 = 1e-13;

pub fn params(mu: f64, a: f64, nu: f64, b: f64) -> WrightParams {
    WrightParams::new(mu, a, nu, b).unwrap()
}

pub fn bessel() -> WrightParams {
    params(1.0, 1.0, 1.0, 1.0)
}

/// `J₀(x)` from its own power series, independent of the crate.
pub fn j0(x: f64) -> f64 {
    let q = -(x * x) / 4.0;
    let (mut term, mut sum) = (1.0f64, 1.0f64);
    for k in 1..200 {
        term *= q / (k * k) as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Complex `J₀(2z)`, which equals `W(−z²)` at `μ = a = ν = b = 1`.
pub fn j0_double(z: Complex64) -> Complex64 {
    let q = -z * z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..400 {
        term *= q / (k * k) as f64;
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    sum
}

/// First `count` positive zeros of `s ↦ J₀(2s)` by scanning and bisection.
pub fn j0_half_zeros(count: usize) -> Vec<f64> {
    let f = |s: f64| j0(2.0 * s);
    let mut out = Vec::new();
    let step = 0.05;
    let mut lo = step;
    while out.len() < count {
        let hi = lo + step;
        if f(lo) * f(hi) < 0.0 {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if f(a) * f(m) <= 0.0 {
                    b = m;
                } else {
                    a = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        lo = hi;
    }
    out
}

/// Random parameter sets with μ, a, ν, b ∈ [0.25, 3] whose zeros are all real,
/// kept by rejection: draws for which the zero search fails are discarded.
pub fn admissible_draws(seed: u64, wanted: usize, count: usize) -> Vec<ZeroTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < wanted {
        attempts += 1;
        assert!(attempts < 50 * wanted, "too few admissible draws");
        let p = params(
            rng.gen_range(0.25..3.0),
            rng.gen_range(0.25..3.0),
            rng.gen_range(0.25..3.0),
            rng.gen_range(0.25..3.0),
        );
        if let Ok(t) = locate_zeros(&p, count, REFINE_TOL) {
            out.push(t);
        }
    }
    out
}
