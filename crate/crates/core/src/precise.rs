//! Multiprecision evaluation of the even series used to locate real zeros.
//!
//! On the real line `𝔚(s) = Σ_k c_k (−s²)^k` suffers cancellation of order
//! `Σ_k c_k s^{2k} = W(s²)`, which exceeds the whole f64 range of significance
//! after a handful of zeros. The working precision is therefore chosen per
//! evaluation point as `log2 W(s²)` plus a fixed margin, and the coefficient
//! table is rebuilt whenever a higher precision is needed.

use rug::ops::Pow;
use rug::Float;

use crate::series::WrightParams;

const MARGIN_BITS: u32 = 96;
pub(crate) const MAX_PRECISION: u32 = 1 << 16;

/// Which even function of `s` is summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum EvenKind {
    /// `𝔚(s) = Σ c_k (−s²)^k`
    Frak,
    /// `c 𝔚(s) + s 𝔚′(s) = Σ (c + 2k) c_k (−s²)^k`; for `c = ab` this is the
    /// entire part of `Ψ′(s) s^{1−ab}`.
    Shifted(f64),
}

impl EvenKind {
    fn ln_weight(&self, k: usize) -> f64 {
        match *self {
            EvenKind::Frak => 0.0,
            EvenKind::Shifted(c) => (c + 2.0 * k as f64).ln(),
        }
    }
}

/// A sign-reliable evaluation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PreciseValue {
    pub value: f64,
    /// Absolute error bound relative to the cancellation scale.
    pub err: f64,
    pub bits: u32,
}

impl PreciseValue {
    pub fn sign_reliable(&self) -> bool {
        self.value.abs() > self.err
    }
}

pub(crate) struct PreciseEvenSeries {
    params: WrightParams,
    kind: EvenKind,
    prec: u32,
    coeffs: Vec<Float>,
}

impl PreciseEvenSeries {
    pub fn new(params: WrightParams, kind: EvenKind) -> Self {
        Self {
            params,
            kind,
            prec: 128,
            coeffs: Vec::new(),
        }
    }

    fn weighted_coefficient(&self, k: usize, prec: u32) -> Float {
        let p = &self.params;
        let mut x = Float::with_val(prec, p.mu());
        x *= k as u64;
        x += p.a();
        let mut y = Float::with_val(prec, p.nu());
        y *= k as u64;
        y += p.b();
        let mut c = x.gamma();
        c *= y.gamma();
        let mut out = c.recip();
        if let EvenKind::Shifted(shift) = self.kind {
            let mut w = Float::with_val(prec, shift);
            w += 2 * k as u64;
            out *= w;
        }
        out
    }

    fn ensure(&mut self, prec: u32, terms: usize) {
        if prec > self.prec {
            self.prec = prec.max(self.prec + self.prec / 2);
            self.coeffs.clear();
        }
        while self.coeffs.len() < terms {
            let k = self.coeffs.len();
            let c = self.weighted_coefficient(k, self.prec);
            self.coeffs.push(c);
        }
    }

    /// Natural log of `Σ |t_k|` at `x = s²` and the number of terms needed
    /// to push the tail below `2^{−bits}` of that scale.
    fn scale(&self, x: f64, bits: impl Fn(f64) -> f64) -> (f64, f64, usize) {
        let ln_x = if x > 0.0 { x.ln() } else { f64::NEG_INFINITY };
        let mut max_ln = f64::NEG_INFINITY;
        let mut terms = Vec::new();
        let mut k = 0usize;
        loop {
            let ln_t = self.params.ln_coefficient(k)
                + self.kind.ln_weight(k)
                + if k == 0 { 0.0 } else { k as f64 * ln_x };
            terms.push(ln_t);
            if ln_t > max_ln {
                max_ln = ln_t;
            }
            let cutoff = max_ln - bits(max_ln) * std::f64::consts::LN_2 - 8.0;
            if k > 2 && ln_t < cutoff && ln_t < terms[k - 1] {
                break;
            }
            k += 1;
            if k > 1_000_000 {
                break;
            }
        }
        let sum: f64 = terms.iter().map(|t| (t - max_ln).exp()).sum();
        let ln_scale = max_ln + sum.ln();
        (ln_scale, max_ln, k + 1)
    }

    /// Evaluate at real `s` with precision chosen from the cancellation scale.
    pub fn eval(&mut self, s: f64) -> PreciseValue {
        self.eval_with_margin(s, MARGIN_BITS)
    }

    pub fn eval_with_margin(&mut self, s: f64, margin: u32) -> PreciseValue {
        let x = s * s;
        let need = |ln_scale: f64| (ln_scale.max(0.0) / std::f64::consts::LN_2).ceil() + margin as f64;
        let (ln_scale, _, terms) = self.scale(x, need);
        let bits = (need(ln_scale) as u32 + 16).min(MAX_PRECISION);
        self.ensure(bits, terms);
        let prec = self.prec;
        let mut xf = Float::with_val(prec, s);
        xf.square_mut();
        let mut pow = Float::with_val(prec, 1u32);
        let mut sum = Float::with_val(prec, 0u32);
        let mut term = Float::with_val(prec, 0u32);
        for (k, c) in self.coeffs.iter().take(terms).enumerate() {
            if k > 0 {
                pow *= &xf;
            }
            term.assign_mul(c, &pow);
            if k % 2 == 0 {
                sum += &term;
            } else {
                sum -= &term;
            }
        }
        let value = sum.to_f64();
        let ln_err = ln_scale - (prec as f64 - 8.0) * std::f64::consts::LN_2;
        PreciseValue {
            value,
            err: ln_err.exp(),
            bits: prec,
        }
    }
}

trait AssignMul {
    fn assign_mul(&mut self, a: &Float, b: &Float);
}

impl AssignMul for Float {
    fn assign_mul(&mut self, a: &Float, b: &Float) {
        use rug::Assign;
        self.assign(a * b);
    }
}

/// Power sums `Σ_n (s_1 / s_n)^{2k}`, `k = 1..=count`, of the positive zeros
/// `s_n` of an even entire function `Σ e_k (−s²)^k` with `e_0 > 0`, given a
/// scale `s_1`. Computed from Newton's identities at high precision.
pub(crate) fn normalized_power_sums(
    params: &WrightParams,
    kind: EvenKind,
    scale: f64,
    count: usize,
) -> Vec<f64> {
    let prec = 384;
    let series = PreciseEvenSeries::new(*params, kind);
    let e0 = series.weighted_coefficient(0, prec);
    let s2 = Float::with_val(prec, scale).pow(2u32);
    // e_k normalized so that e_0 = 1 and scaled by s_1^{2k}.
    let mut e = Vec::with_capacity(count + 1);
    let mut s2k = Float::with_val(prec, 1u32);
    for k in 0..=count {
        let mut c = series.weighted_coefficient(k, prec);
        c /= &e0;
        c *= &s2k;
        e.push(c);
        s2k *= &s2;
    }
    let mut p: Vec<Float> = vec![Float::with_val(prec, 0u32); count + 1];
    for k in 1..=count {
        let mut acc = Float::with_val(prec, &e[k] * k as u64);
        if k % 2 == 0 {
            acc = -acc;
        }
        for i in 1..k {
            let t = Float::with_val(prec, &e[i] * &p[k - i]);
            if i % 2 == 1 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        p[k] = acc;
    }
    p.iter().skip(1).map(|v| v.to_f64()).collect()
}
