//! The normalized functions
//!
//! ```text
//! f(z) = (z^{ab} Γ(a)Γ(b) 𝔚(z))^{1/ab},  g(z) = Γ(a)Γ(b) z 𝔚(z),  h(z) = Γ(a)Γ(b) z W(−z)
//! ```
//!
//! and their starlike and convex functionals `z u′/u` and `1 + z u″/u′`.
//! Each functional has a zero-sum path and a direct-series path. `f` itself
//! is never evaluated; every `f` functional goes through `𝔚`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{frak_jet, wright_jet, SeriesOptions, WrightParams};
use crate::zeros::{zero_sum_over, Weighting, ZeroSet, ZeroTable};

/// Relative size of `u′` below which the convex functional is refused.
pub const DERIVATIVE_GUARD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    F,
    G,
    H,
}

impl Normalization {
    pub const ALL: [Normalization; 3] = [Normalization::F, Normalization::G, Normalization::H];
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::F => "f",
            Normalization::G => "g",
            Normalization::H => "h",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f" => Ok(Normalization::F),
            "g" => Ok(Normalization::G),
            "h" => Ok(Normalization::H),
            other => Err(Error::Domain(format!("unknown normalization {other:?}; expected f, g or h"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioKind {
    /// `z u′(z) / u(z)`
    Star,
    /// `1 + z u″(z) / u′(z)`
    Convex,
}

/// A functional value with a bound on its numerical error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounded {
    pub value: Complex64,
    pub error_bound: f64,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn is_origin(z: Complex64) -> bool {
    z == Complex64::new(0.0, 0.0)
}

/// `k`-th Taylor coefficient of `g(z) / z` in powers of `z²`.
pub fn g_coefficient(p: &WrightParams, k: usize) -> f64 {
    signed(k) * p.normalized_coefficient(k)
}

/// `k`-th Taylor coefficient of `h(z) / z` in powers of `z`.
pub fn h_coefficient(p: &WrightParams, k: usize) -> f64 {
    signed(k) * p.normalized_coefficient(k)
}

fn signed(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `z u′/u` from the zero sums, with error bound.
pub fn star_ratio_bounded(norm: Normalization, t: &ZeroTable, z: Complex64) -> Result<Bounded> {
    if is_origin(z) {
        return Ok(Bounded { value: one(), error_bound: 0.0 });
    }
    let n = t.len();
    let ab = t.params().ab();
    Ok(match norm {
        Normalization::F | Normalization::G => {
            let s = zero_sum_over(t, ZeroSet::Psi, z, Weighting::Quadratic, n)?;
            let scale = if norm == Normalization::F { 1.0 / ab } else { 1.0 };
            Bounded {
                value: one() - scale * s.total(),
                error_bound: scale * s.tail_estimate,
            }
        }
        Normalization::H => {
            let s = zero_sum_over(t, ZeroSet::Psi, z, Weighting::Linear, n)?;
            Bounded {
                value: one() - s.total(),
                error_bound: s.tail_estimate,
            }
        }
    })
}

/// `z u′/u` from the zero sums.
pub fn star_ratio(norm: Normalization, t: &ZeroTable, z: Complex64) -> Result<Complex64> {
    star_ratio_bounded(norm, t, z).map(|b| b.value)
}

/// `z u′/u` from the power series of `W`.
pub fn star_ratio_direct(norm: Normalization, p: &WrightParams, z: Complex64, opts: &SeriesOptions) -> Result<Bounded> {
    if is_origin(z) {
        return Ok(Bounded { value: one(), error_bound: 0.0 });
    }
    match norm {
        Normalization::F | Normalization::G => {
            let j = frak_jet(p, z, opts)?;
            let scale = if norm == Normalization::F { 1.0 / p.ab() } else { 1.0 };
            let q = z * j.w1 / j.w;
            let err = scale * quotient_error(z * j.w1, j.w, z.norm() * j.err[1], j.err[0]);
            Ok(Bounded { value: one() + scale * q, error_bound: err })
        }
        Normalization::H => {
            let j = wright_jet(p, -z, opts)?;
            let q = z * j.w1 / j.w;
            let err = quotient_error(z * j.w1, j.w, z.norm() * j.err[1], j.err[0]);
            Ok(Bounded { value: one() - q, error_bound: err })
        }
    }
}

/// `1 + z u″/u′`; zero sums for `f`, direct series for `g` and `h`.
pub fn convex_ratio_bounded(norm: Normalization, t: &ZeroTable, z: Complex64, opts: &SeriesOptions) -> Result<Bounded> {
    if is_origin(z) {
        return Ok(Bounded { value: one(), error_bound: 0.0 });
    }
    match norm {
        Normalization::F => {
            let ab = t.params().ab();
            let n = t.len();
            let d = zero_sum_over(t, ZeroSet::PsiDeriv, z, Weighting::Quadratic, n)?;
            let s = zero_sum_over(t, ZeroSet::Psi, z, Weighting::Quadratic, n)?;
            let c = 1.0 / ab - 1.0;
            Ok(Bounded {
                value: one() - d.total() - c * s.total(),
                error_bound: d.tail_estimate + c.abs() * s.tail_estimate,
            })
        }
        _ => convex_ratio_direct(norm, t.params(), z, opts),
    }
}

/// `1 + z u″/u′`; zero sums for `f`, direct series for `g` and `h`.
pub fn convex_ratio(norm: Normalization, t: &ZeroTable, z: Complex64, opts: &SeriesOptions) -> Result<Complex64> {
    convex_ratio_bounded(norm, t, z, opts).map(|b| b.value)
}

/// `1 + z u″/u′` from the power series of `W` for every normalization.
pub fn convex_ratio_direct(norm: Normalization, p: &WrightParams, z: Complex64, opts: &SeriesOptions) -> Result<Bounded> {
    if is_origin(z) {
        return Ok(Bounded { value: one(), error_bound: 0.0 });
    }
    let (d1, d2, e1, e2) = match norm {
        Normalization::F => {
            // f′ ∝ z^{ab−1} D with D = ab 𝔚 + z 𝔚′, so
            // 1 + z f″/f′ = 1 + (1/ab − 1) z 𝔚′/𝔚 + z D′/D.
            let ab = p.ab();
            let j = frak_jet(p, z, opts)?;
            let d = ab * j.w + z * j.w1;
            let dp = (ab + 1.0) * j.w1 + z * j.w2;
            guard_derivative(z, d, z * dp)?;
            let e_d = ab * j.err[0] + z.norm() * j.err[1];
            let e_dp = (ab + 1.0) * j.err[1] + z.norm() * j.err[2];
            let c = 1.0 / ab - 1.0;
            let value = one() + c * z * j.w1 / j.w + z * dp / d;
            let err = c.abs() * quotient_error(z * j.w1, j.w, z.norm() * j.err[1], j.err[0])
                + quotient_error(z * dp, d, z.norm() * e_dp, e_d);
            return Ok(Bounded { value, error_bound: err });
        }
        Normalization::G => {
            let j = frak_jet(p, z, opts)?;
            (
                j.w + z * j.w1,
                2.0 * j.w1 + z * j.w2,
                j.err[0] + z.norm() * j.err[1],
                2.0 * j.err[1] + z.norm() * j.err[2],
            )
        }
        Normalization::H => {
            let j = wright_jet(p, -z, opts)?;
            (
                j.w - z * j.w1,
                -2.0 * j.w1 + z * j.w2,
                j.err[0] + z.norm() * j.err[1],
                2.0 * j.err[1] + z.norm() * j.err[2],
            )
        }
    };
    guard_derivative(z, d1, z * d2)?;
    Ok(Bounded {
        value: one() + z * d2 / d1,
        error_bound: quotient_error(z * d2, d1, z.norm() * e2, e1),
    })
}

fn guard_derivative(z: Complex64, u1: Complex64, z_u2: Complex64) -> Result<()> {
    if u1.norm() < DERIVATIVE_GUARD * z_u2.norm().max(1.0) {
        return Err(Error::DerivativeZeroProximity { z: format!("{z}") });
    }
    Ok(())
}

/// First-order error of `num / den` from errors in numerator and denominator.
fn quotient_error(num: Complex64, den: Complex64, e_num: f64, e_den: f64) -> f64 {
    let d = den.norm();
    (e_num + num.norm() / d * e_den) / d + 4.0 * f64::EPSILON * (num / den).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::locate_zeros;

    #[test]
    fn coefficients() {
        let p = WrightParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(g_coefficient(&p, 0), 1.0);
        assert!((g_coefficient(&p, 1) + 1.0).abs() < 1e-15);
        let q = WrightParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(h_coefficient(&q, 0), 1.0);
        assert!((h_coefficient(&q, 1) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn parse_normalization() {
        assert_eq!("G".parse::<Normalization>().unwrap(), Normalization::G);
        assert!("x".parse::<Normalization>().is_err());
        assert_eq!(Normalization::H.to_string(), "h");
    }

    #[test]
    fn ratios_at_origin() {
        let p = WrightParams::new(1.5, 0.5, 0.3, 2.0).unwrap();
        let t = locate_zeros(&p, 5, 1e-13).unwrap();
        let o = SeriesOptions::default();
        let z = Complex64::new(0.0, 0.0);
        for n in Normalization::ALL {
            assert_eq!(star_ratio(n, &t, z).unwrap(), one());
            assert_eq!(convex_ratio(n, &t, z, &o).unwrap(), one());
        }
    }

    #[test]
    fn f_equals_g_when_ab_is_one() {
        let p = WrightParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let t = locate_zeros(&p, 10, 1e-13).unwrap();
        let z = Complex64::new(0.0, 0.3);
        assert_eq!(
            star_ratio(Normalization::F, &t, z).unwrap(),
            star_ratio(Normalization::G, &t, z).unwrap()
        );
    }

    #[test]
    fn convex_f_real_and_below_one() {
        let p = WrightParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let t = locate_zeros(&p, 10, 1e-13).unwrap();
        let v = convex_ratio(Normalization::F, &t, Complex64::new(0.4, 0.0), &SeriesOptions::default()).unwrap();
        assert_eq!(v.im, 0.0);
        assert!(v.re < 1.0);
    }

    #[test]
    fn convex_g_matches_finite_difference() {
        let p = WrightParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let o = SeriesOptions::default();
        let g = |x: f64| x * crate::series::eval_frak_w(&p, Complex64::new(x, 0.0), &o).unwrap().value.re;
        let (x, h) = (0.4, 1e-4);
        let g1 = (g(x + h) - g(x - h)) / (2.0 * h);
        let g2 = (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
        let fd = 1.0 + x * g2 / g1;
        let v = convex_ratio_direct(Normalization::G, &p, Complex64::new(x, 0.0), &o).unwrap().value.re;
        assert!(((v - fd) / v).abs() < 1e-6, "{v} vs {fd}");
    }

    #[test]
    fn derivative_guard() {
        let p = WrightParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let phi = crate::zeros::first_shifted_zero(&p, 1.0, 1e-15).unwrap();
        let r = convex_ratio_direct(Normalization::G, &p, Complex64::new(phi, 0.0), &SeriesOptions::default());
        assert!(matches!(r, Err(Error::DerivativeZeroProximity { .. })));
    }
}
