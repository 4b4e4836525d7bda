//! Error-controlled summation of the four-parameter Wright series
//!
//! ```text
//! W(z) = Σ_k z^k / (Γ(a + kμ) Γ(b + kν))
//! ```
//!
//! and of the composed function `𝔚(z) = W(−z²)` together with their first two
//! derivatives.
//!
//! Terms are formed in the log domain (`k ln|z| − ln Γ(a + kμ) − ln Γ(b + kν)`)
//! with the phase tracked separately, so neither the powers nor the gamma
//! denominators overflow. Because `ln Γ(x + μ) − ln Γ(x)` is increasing in `x`,
//! the ratio `|t_{k+1} / t_k|` is decreasing in `k` for every `z`; once it drops
//! below one the geometric tail `|t_K| ρ / (1 − ρ)` is a rigorous bound on the
//! omitted terms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::log_gamma_unchecked;

/// The four positive parameters `(μ, a, ν, b)` of the Wright function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct WrightParams {
    mu: f64,
    a: f64,
    nu: f64,
    b: f64,
    ln_gamma_ab: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    mu: f64,
    a: f64,
    nu: f64,
    b: f64,
}

impl TryFrom<RawParams> for WrightParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        WrightParams::new(raw.mu, raw.a, raw.nu, raw.b)
    }
}

impl From<WrightParams> for RawParams {
    fn from(p: WrightParams) -> Self {
        RawParams {
            mu: p.mu,
            a: p.a,
            nu: p.nu,
            b: p.b,
        }
    }
}

impl WrightParams {
    pub fn new(mu: f64, a: f64, nu: f64, b: f64) -> Result<Self> {
        for (name, v) in [("mu", mu), ("a", a), ("nu", nu), ("b", b)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(Self {
            mu,
            a,
            nu,
            b,
            ln_gamma_ab: log_gamma_unchecked(a) + log_gamma_unchecked(b),
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// The product `ab` that appears in the `f` normalization.
    pub fn ab(&self) -> f64 {
        self.a * self.b
    }

    /// `ln(Γ(a) Γ(b))`, computed once at construction.
    pub fn ln_gamma_prefactor(&self) -> f64 {
        self.ln_gamma_ab
    }

    /// `Γ(a) Γ(b)`.
    pub fn gamma_prefactor(&self) -> f64 {
        self.ln_gamma_ab.exp()
    }

    /// `ln(1 / (Γ(a + kμ) Γ(b + kν)))`.
    pub fn ln_coefficient(&self, k: usize) -> f64 {
        let kf = k as f64;
        -log_gamma_unchecked(self.a + kf * self.mu) - log_gamma_unchecked(self.b + kf * self.nu)
    }

    /// `Γ(a) Γ(b) / (Γ(a + kμ) Γ(b + kν))`: the k-th coefficient of the
    /// normalized series, equal to one at `k = 0`.
    pub fn normalized_coefficient(&self, k: usize) -> f64 {
        if k == 0 {
            return 1.0;
        }
        (self.ln_gamma_ab + self.ln_coefficient(k)).exp()
    }
}

/// Truncation controls for series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    pub max_terms: usize,
    pub tol: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            max_terms: 10_000,
            tol: 1e-14,
        }
    }
}

impl SeriesOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Domain(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_terms == 0 {
            return Err(Error::Domain("max_terms must be positive".into()));
        }
        Ok(())
    }
}

/// Value of a truncated series together with a bound on its error.
///
/// `error_bound` is the geometric tail bound (at most `tol`) plus a
/// first-order estimate of the rounding error of the summed terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub error_bound: f64,
    pub terms_used: usize,
}

/// Neumaier-compensated accumulator.
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn falling_factorial(k: usize, order: usize) -> f64 {
    (0..order).map(|j| (k - j) as f64).product()
}

/// Sum `Σ_{k ≥ order} k(k−1)…(k−order+1) z^{k−order} / (Γ(a+kμ) Γ(b+kν))`.
fn sum_series(p: &WrightParams, z: Complex64, order: usize, opts: &SeriesOptions) -> Result<EvalResult> {
    opts.validate()?;
    let eps = f64::EPSILON;
    let abs_z = z.norm();
    if abs_z == 0.0 {
        let v = falling_factorial(order, order) * p.ln_coefficient(order).exp();
        return Ok(EvalResult {
            value: Complex64::new(v, 0.0),
            error_bound: 4.0 * eps * v.abs(),
            terms_used: 1,
        });
    }
    if !abs_z.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }

    let real = z.im == 0.0;
    let ln_abs = abs_z.ln();
    let theta = z.arg();
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    let mut abs_sum = 0.0;
    let mut rounding = 0.0;
    let mut prev_abs = f64::NAN;
    let mut small_run = 0usize;

    for (used, k) in (order..order + opts.max_terms).enumerate() {
        let j = (k - order) as f64;
        let lg = -p.ln_coefficient(k);
        let ln_ff = if order == 0 { 0.0 } else { falling_factorial(k, order).ln() };
        let ln_mag = ln_ff + j * ln_abs - lg;
        let mag = ln_mag.exp();
        // Absolute error of the exponent, amplified by exp into a relative error.
        let arg_err = eps * (2.0 + ln_ff + (j * ln_abs).abs() + 2.0 * lg.abs());
        rounding += mag * arg_err;
        abs_sum += mag;

        if real {
            let neg = z.re < 0.0 && (k - order) % 2 == 1;
            re.add(if neg { -mag } else { mag });
        } else {
            let (s, c) = (j * theta).sin_cos();
            re.add(mag * c);
            im.add(mag * s);
        }

        let s_abs = Complex64::new(re.value(), im.value()).norm();
        if mag <= opts.tol * s_abs.max(1.0) {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 && prev_abs.is_finite() && prev_abs > 0.0 {
            let rho = mag / prev_abs;
            if rho < 1.0 {
                let tail = mag * rho / (1.0 - rho);
                if tail <= opts.tol {
                    let value = Complex64::new(re.value(), im.value());
                    return Ok(EvalResult {
                        value,
                        error_bound: tail + rounding + 2.0 * eps * (s_abs + eps * abs_sum),
                        terms_used: used + 1,
                    });
                }
            }
        }
        prev_abs = mag;
    }
    Err(Error::NonConvergence {
        max_terms: opts.max_terms,
        abs_z,
    })
}

/// `W(z)` for the four-parameter Wright function.
pub fn eval_wright(p: &WrightParams, z: Complex64, opts: &SeriesOptions) -> Result<EvalResult> {
    sum_series(p, z, 0, opts)
}

/// `W′(z)` (`order = 1`) or `W″(z)` (`order = 2`) by term-wise differentiation.
pub fn eval_wright_derivative(
    p: &WrightParams,
    z: Complex64,
    order: usize,
    opts: &SeriesOptions,
) -> Result<EvalResult> {
    if !(1..=2).contains(&order) {
        return Err(Error::Domain(format!("derivative order must be 1 or 2, got {order}")));
    }
    sum_series(p, z, order, opts)
}

/// `𝔚(z) = W(−z²)`.
pub fn eval_frak_w(p: &WrightParams, z: Complex64, opts: &SeriesOptions) -> Result<EvalResult> {
    sum_series(p, -z * z, 0, opts)
}

/// Derivatives of `𝔚` through the chain rule:
/// `𝔚′(z) = −2z W′(−z²)`, `𝔚″(z) = −2 W′(−z²) + 4z² W″(−z²)`.
pub fn eval_frak_w_derivative(
    p: &WrightParams,
    z: Complex64,
    order: usize,
    opts: &SeriesOptions,
) -> Result<EvalResult> {
    let w = -z * z;
    match order {
        1 => {
            let d1 = sum_series(p, w, 1, opts)?;
            Ok(EvalResult {
                value: -2.0 * z * d1.value,
                error_bound: 2.0 * z.norm() * d1.error_bound,
                terms_used: d1.terms_used,
            })
        }
        2 => {
            let d1 = sum_series(p, w, 1, opts)?;
            let d2 = sum_series(p, w, 2, opts)?;
            Ok(EvalResult {
                value: -2.0 * d1.value + 4.0 * z * z * d2.value,
                error_bound: 2.0 * d1.error_bound + 4.0 * z.norm_sqr() * d2.error_bound,
                terms_used: d1.terms_used.max(d2.terms_used),
            })
        }
        _ => Err(Error::Domain(format!("derivative order must be 1 or 2, got {order}"))),
    }
}

/// `𝔚`, `𝔚′` and `𝔚″` at one point.
#[derive(Debug, Clone, Copy)]
pub struct FrakJet {
    pub w: Complex64,
    pub w1: Complex64,
    pub w2: Complex64,
    pub err: [f64; 3],
}

pub fn frak_jet(p: &WrightParams, z: Complex64, opts: &SeriesOptions) -> Result<FrakJet> {
    let x = -z * z;
    let d0 = sum_series(p, x, 0, opts)?;
    let d1 = sum_series(p, x, 1, opts)?;
    let d2 = sum_series(p, x, 2, opts)?;
    Ok(FrakJet {
        w: d0.value,
        w1: -2.0 * z * d1.value,
        w2: -2.0 * d1.value + 4.0 * z * z * d2.value,
        err: [
            d0.error_bound,
            2.0 * z.norm() * d1.error_bound,
            2.0 * d1.error_bound + 4.0 * z.norm_sqr() * d2.error_bound,
        ],
    })
}

/// `W`, `W′` and `W″` at one point.
#[derive(Debug, Clone, Copy)]
pub struct WrightJet {
    pub w: Complex64,
    pub w1: Complex64,
    pub w2: Complex64,
    pub err: [f64; 3],
}

pub fn wright_jet(p: &WrightParams, z: Complex64, opts: &SeriesOptions) -> Result<WrightJet> {
    let d0 = sum_series(p, z, 0, opts)?;
    let d1 = sum_series(p, z, 1, opts)?;
    let d2 = sum_series(p, z, 2, opts)?;
    Ok(WrightJet {
        w: d0.value,
        w1: d1.value,
        w2: d2.value,
        err: [d0.error_bound, d1.error_bound, d2.error_bound],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> WrightParams {
        WrightParams::new(1.0, 1.0, 1.0, 1.0).unwrap()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn rejects_non_positive_parameters() {
        assert!(WrightParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(WrightParams::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(WrightParams::new(1.0, 1.0, f64::NAN, 1.0).is_err());
        assert!(WrightParams::new(1.0, 1.0, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn params_json_shape() {
        let p = WrightParams::new(1.5, 0.5, 2.0, 3.0).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"mu":1.5,"a":0.5,"nu":2.0,"b":3.0}"#);
        let back: WrightParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<WrightParams>(r#"{"mu":0,"a":1,"nu":1,"b":1}"#).is_err());
    }

    #[test]
    fn value_at_origin() {
        let r = eval_wright(&unit(), c(0.0), &SeriesOptions::default()).unwrap();
        assert_eq!(r.value, c(1.0));
        let d = eval_wright_derivative(&unit(), c(0.0), 1, &SeriesOptions::default()).unwrap();
        assert_eq!(d.value, c(1.0));
    }

    #[test]
    fn real_input_gives_exactly_real_output() {
        let p = WrightParams::new(0.7, 1.3, 1.9, 0.4).unwrap();
        for x in [-4.0, -0.3, 0.2, 3.7] {
            let r = eval_wright(&p, c(x), &SeriesOptions::default()).unwrap();
            assert_eq!(r.value.im, 0.0);
        }
    }

    #[test]
    fn bad_order_and_tol() {
        assert!(eval_wright_derivative(&unit(), c(1.0), 3, &SeriesOptions::default()).is_err());
        let bad = SeriesOptions { max_terms: 10, tol: 0.0 };
        assert!(eval_wright(&unit(), c(1.0), &bad).is_err());
    }

    #[test]
    fn max_terms_exhaustion_is_reported() {
        let opts = SeriesOptions { max_terms: 5, tol: 1e-14 };
        match eval_wright(&unit(), c(50.0), &opts) {
            Err(Error::NonConvergence { max_terms, .. }) => assert_eq!(max_terms, 5),
            other => panic!("expected NonConvergence, got {other:?}"),
        }
    }
}
