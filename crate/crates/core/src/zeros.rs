//! Positive real zeros of `𝔚(s) = W(−s²)` and of the derivative `Ψ′` of
//! `Ψ(s) = s^{ab} 𝔚(s)`, the Hadamard product over them, and the
//! Mittag-Leffler sums that express logarithmic derivatives.
//!
//! Sums over the stored zeros are completed with their exact remainder
//! `Σ_{n>N} w / (ψ_n² − w) = Σ_k (w/ψ_1²)^k τ_k`, where the tails
//! `τ_k = Σ_{n>N} (ψ_1/ψ_n)^{2k}` come from the Rayleigh power sums of the
//! zeros (Newton's identities on the Taylor coefficients) minus the stored
//! part.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precise::{normalized_power_sums, EvenKind, PreciseEvenSeries, MAX_PRECISION};
use crate::roots::{bracketed_root, RootOptions};
use crate::series::WrightParams;

/// Number of Rayleigh power sums kept per zero sequence.
const POWER_SUMS: usize = 120;
const MAX_SCAN_STEPS: usize = 400_000;
const GAP_REACH: f64 = 6.0;
/// Relative distance to a pole below which sums refuse to evaluate.
pub const POLE_GUARD: f64 = 1e-8;

/// Which zero sequence a sum runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroSet {
    /// Zeros `ψ_n` of `𝔚`.
    Psi,
    /// Zeros of `Ψ′`.
    PsiDeriv,
}

/// Weighting of the Mittag-Leffler sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    /// `Σ 2z² / (ψ_n² − z²)`
    Quadratic,
    /// `Σ z / (ψ_n² − z)`
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroSum {
    /// Sum over the first `n_terms` stored zeros.
    pub partial: Complex64,
    /// Remainder over all further zeros, from the power sums.
    pub tail: Complex64,
    /// Bound on the error of `partial + tail`.
    pub tail_estimate: f64,
}

impl ZeroSum {
    pub fn total(&self) -> Complex64 {
        self.partial + self.tail
    }
}

/// Ordered positive zeros of `𝔚` and `Ψ′` for one parameter set.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ZeroTableFile", into = "ZeroTableFile")]
pub struct ZeroTable {
    params: WrightParams,
    psi: Vec<f64>,
    psi_deriv: Vec<f64>,
    refine_tol: f64,
    psi_sums: Vec<f64>,
    deriv_sums: Vec<f64>,
    psi_tails: Vec<Tail>,
    deriv_tails: Vec<Tail>,
}

/// `τ_k = p_k − Σ_{n≤N} (z_1/z_n)^{2k}` and the level below which it is noise.
#[derive(Debug, Clone, Copy)]
struct Tail {
    tau: f64,
    noise: f64,
}

/// An error `δ` in the stored `z_1` shifts `p_k` against the head by about
/// `2kδ/z_1`, on top of the rounding of the subtraction.
fn tails(zeros: &[f64], sums: &[f64], n_terms: usize, zero_tol: f64) -> Vec<Tail> {
    let z0 = zeros[0];
    let rel = zero_tol / z0 + f64::EPSILON;
    let ratios: Vec<f64> = zeros[..n_terms].iter().map(|&s| (z0 / s).powi(2)).collect();
    let mut powers = ratios.clone();
    sums.iter()
        .enumerate()
        .map(|(k, &p)| {
            let head: f64 = powers.iter().sum();
            for (x, r) in powers.iter_mut().zip(&ratios) {
                *x *= r;
            }
            Tail {
                tau: (p - head).max(0.0),
                noise: 8.0 * f64::EPSILON * (p.abs() + head) + 2.0 * (k + 1) as f64 * rel,
            }
        })
        .collect()
}

/// On-disk form of a [`ZeroTable`].
#[derive(Serialize, Deserialize)]
struct ZeroTableFile {
    params: WrightParams,
    psi: Vec<f64>,
    psi_deriv: Vec<f64>,
    refine_tol: f64,
}

impl TryFrom<ZeroTableFile> for ZeroTable {
    type Error = Error;

    fn try_from(f: ZeroTableFile) -> Result<Self> {
        ZeroTable::from_parts(f.params, f.psi, f.psi_deriv, f.refine_tol)
    }
}

impl From<ZeroTable> for ZeroTableFile {
    fn from(t: ZeroTable) -> Self {
        ZeroTableFile {
            params: t.params,
            psi: t.psi,
            psi_deriv: t.psi_deriv,
            refine_tol: t.refine_tol,
        }
    }
}

impl ZeroTable {
    /// Assemble a table from already located zeros, checking ordering,
    /// interlacing and consistency with the power sums.
    pub fn from_parts(params: WrightParams, psi: Vec<f64>, psi_deriv: Vec<f64>, refine_tol: f64) -> Result<Self> {
        let fail = |reason: String| Error::ZeroSearchFailure {
            scanned_from: 0.0,
            scanned_to: psi.last().copied().unwrap_or(0.0).max(psi_deriv.last().copied().unwrap_or(0.0)),
            reason,
        };
        if psi.is_empty() || psi_deriv.len() < psi.len() {
            return Err(fail(format!(
                "need at least one zero of 𝔚 and as many zeros of Ψ′, got {} and {}",
                psi.len(),
                psi_deriv.len()
            )));
        }
        for seq in [&psi, &psi_deriv] {
            if seq[0] <= 0.0 || seq.windows(2).any(|w| w[0] >= w[1]) || seq.iter().any(|x| !x.is_finite()) {
                return Err(fail("zeros must be positive, finite and strictly increasing".into()));
            }
        }
        if let Some(n) = interlacing_violation(&psi, &psi_deriv) {
            return Err(fail(format!("interlacing fails at n = {}", n + 1)));
        }
        let psi_sums = normalized_power_sums(&params, EvenKind::Frak, psi[0], POWER_SUMS);
        let deriv_sums = normalized_power_sums(&params, EvenKind::Shifted(params.ab()), psi_deriv[0], POWER_SUMS);
        check_power_sums(&psi, &psi_sums).map_err(|k| {
            fail(format!("zeros of 𝔚 inconsistent with power sum of order {k}; non-real or missed zeros"))
        })?;
        check_power_sums(&psi_deriv, &deriv_sums).map_err(|k| {
            fail(format!("zeros of Ψ′ inconsistent with power sum of order {k}; non-real or missed zeros"))
        })?;
        let psi_tails = tails(&psi, &psi_sums, psi.len(), refine_tol);
        let deriv_tails = tails(&psi_deriv, &deriv_sums, psi_deriv.len(), refine_tol);
        Ok(Self {
            params,
            psi,
            psi_deriv,
            refine_tol,
            psi_sums,
            deriv_sums,
            psi_tails,
            deriv_tails,
        })
    }

    pub fn params(&self) -> &WrightParams {
        &self.params
    }

    /// Zeros `ψ_1 < ψ_2 < …` of `𝔚`.
    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    /// Zeros of `Ψ′`, one more than [`psi`](Self::psi).
    pub fn psi_deriv(&self) -> &[f64] {
        &self.psi_deriv
    }

    /// The first `count` zeros of `𝔚` and `count + 1` of `Ψ′`.
    pub fn truncated(&self, count: usize) -> Result<ZeroTable> {
        if count == 0 || count > self.len() {
            return Err(Error::Domain(format!("count must be in 1..={}, got {count}", self.len())));
        }
        ZeroTable::from_parts(
            self.params,
            self.psi[..count].to_vec(),
            self.psi_deriv[..count + 1].to_vec(),
            self.refine_tol,
        )
    }

    pub fn refine_tol(&self) -> f64 {
        self.refine_tol
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    fn set(&self, set: ZeroSet) -> (&[f64], &[f64], &[Tail]) {
        match set {
            ZeroSet::Psi => (&self.psi, &self.psi_sums, &self.psi_tails),
            ZeroSet::PsiDeriv => (&self.psi_deriv, &self.deriv_sums, &self.deriv_tails),
        }
    }

    /// `(𝔚(ψ_n), 𝔚′(ψ_n))` for every stored zero, evaluated at high precision.
    pub fn refinement_residuals(&self) -> Vec<(f64, f64)> {
        let mut value = PreciseEvenSeries::new(self.params, EvenKind::Frak);
        let mut slope = PreciseEvenSeries::new(self.params, EvenKind::Shifted(0.0));
        self.psi
            .iter()
            .map(|&s| (value.eval(s).value, slope.eval(s).value / s))
            .collect()
    }

    /// `(Ψ′-part(φ_n), its s-derivative)` for the stored derivative zeros,
    /// where the Ψ′-part is `ab 𝔚(s) + s 𝔚′(s)`.
    pub fn derivative_residuals(&self) -> Vec<(f64, f64)> {
        let ab = self.params.ab();
        let mut value = PreciseEvenSeries::new(self.params, EvenKind::Shifted(ab));
        let h = |s: f64| 1e-7 * s.max(1.0);
        self.psi_deriv
            .iter()
            .map(|&s| {
                let v = value.eval(s).value;
                let slope = (value.eval(s + h(s)).value - value.eval(s - h(s)).value) / (2.0 * h(s));
                (v, slope)
            })
            .collect()
    }
}

fn interlacing_violation(psi: &[f64], psi_deriv: &[f64]) -> Option<usize> {
    (0..psi.len()).find(|&n| {
        let below = psi_deriv[n] < psi[n];
        let above = psi_deriv.get(n + 1).is_none_or(|&d| psi[n] < d);
        !(below && above)
    })
}

/// Real simple zeros force `τ_k ≥ 0` and `τ_{k+1} ≤ τ_k (z_1/z_N)²`; a
/// violation means zeros were missed or some are not real.
fn check_power_sums(zeros: &[f64], sums: &[f64]) -> std::result::Result<(), usize> {
    let z0 = zeros[0];
    let last = (z0 / zeros[zeros.len() - 1]).powi(2);
    let mut prev_tail = f64::INFINITY;
    for (i, &p) in sums.iter().enumerate().take(8) {
        let k = (i + 1) as i32;
        let partial: f64 = zeros.iter().map(|&z| (z0 / z).powi(2 * k)).sum();
        let tail = p - partial;
        let slack = 1e-11 * p.abs().max(1.0);
        if tail < -slack || tail > prev_tail * last + slack {
            return Err(k as usize);
        }
        prev_tail = tail.max(0.0);
    }
    Ok(())
}

/// Raw Rayleigh sums `p_k = Σ s_n^{−2k}`, `k = 1..=32`, if they are all
/// positive as real zeros require.
fn raw_power_sums(params: &WrightParams, kind: EvenKind) -> Option<Vec<f64>> {
    let sums = normalized_power_sums(params, kind, 1.0, 32);
    sums.iter().all(|p| p.is_finite() && *p > 0.0).then_some(sums)
}

/// Bounds on the first zero: `p_k^{−1/2k} ≤ s_1 ≤ (p_1/p_k)^{1/(2k−2)}`.
fn first_zero_bounds(sums: &[f64]) -> (f64, f64) {
    let k = sums.len();
    let lb = sums[k - 1].powf(-1.0 / (2 * k) as f64);
    let ub = (sums[0] / sums[k - 1]).powf(1.0 / (2 * k - 2) as f64);
    (lb, ub.max(lb))
}

/// Upper bound on the second zero once the first is known, from
/// `τ_k ≤ τ_1 (s_1/s_2)^{2k−2}` with `τ_k = p_k − s_1^{−2k}`.
fn second_zero_upper_bound(sums: &[f64], s1: f64) -> f64 {
    const K: usize = 4;
    let t1 = sums[0] - s1.powi(-2);
    let tk = sums[K - 1] - s1.powi(-2 * K as i32);
    if !(t1 > 0.0 && tk > 0.0) {
        return f64::INFINITY;
    }
    (t1 / tk).powf(1.0 / (2 * K - 2) as f64)
}

/// Scan outward from the origin and refine the first `count` sign changes.
fn scan_zeros(params: &WrightParams, kind: EvenKind, count: usize, refine_tol: f64) -> Result<Vec<f64>> {
    let mut series = PreciseEvenSeries::new(*params, kind);
    let sums = raw_power_sums(params, kind).ok_or_else(|| Error::ZeroSearchFailure {
        scanned_from: 0.0,
        scanned_to: 0.0,
        reason: "Rayleigh power sums are not positive; the zeros are not all real".into(),
    })?;
    let (lb, ub) = first_zero_bounds(&sums);
    let (mut s, mut step) = (0.9 * lb, (0.02 * lb).max(1e-6));
    let start = s;
    let mut prev = if s == 0.0 { 1.0 } else { series.eval(s).value };
    if prev <= 0.0 {
        s = 0.0;
        prev = 1.0;
    }
    let mut zeros: Vec<f64> = Vec::with_capacity(count);
    let opts = RootOptions {
        switch_width: 1e-3,
        ..Default::default()
    };
    let failure = |from: f64, to: f64, reason: &str| Error::ZeroSearchFailure {
        scanned_from: from,
        scanned_to: to,
        reason: reason.to_string(),
    };

    for _ in 0..MAX_SCAN_STEPS {
        if zeros.len() == count {
            return Ok(zeros);
        }
        // Real zeros keep a slowly varying spacing; a long silent stretch
        // means the remaining zeros have left the real axis.
        let limit = match zeros.len() {
            0 => 2.0 * ub,
            1 => 2.0 * second_zero_upper_bound(&sums, zeros[0]),
            n => zeros[n - 1] + GAP_REACH * (zeros[n - 1] - zeros[n - 2]),
        };
        if s > limit {
            return Err(failure(
                start,
                s,
                &format!("no sign change after zero {}; the remaining zeros are not real", zeros.len()),
            ));
        }
        let next = s + step;
        let mut v = series.eval(next);
        let mut margin = 96;
        while !v.sign_reliable() && margin < 1024 {
            margin *= 2;
            v = series.eval_with_margin(next, margin);
        }
        if v.bits >= MAX_PRECISION {
            return Err(failure(start, next, "required working precision exceeds the supported maximum"));
        }
        if (v.value < 0.0) != (prev < 0.0) || v.value == 0.0 {
            let xtol = refine_tol * next.max(1.0);
            let out = bracketed_root(
                |x| series.eval(x).value,
                s,
                next,
                prev,
                v.value,
                &RootOptions { xtol, ..opts },
            );
            zeros.push(out.root);
            let n = zeros.len();
            if n >= 2 {
                step = 0.5 * (zeros[n - 1] - zeros[n - 2]);
            }
            // Restart just past the root so the next bracket starts on a known sign.
            s = out.root + xtol.max(out.root * 4.0 * f64::EPSILON);
            prev = series.eval(s).value;
            if prev == 0.0 {
                prev = v.value;
            }
            continue;
        }
        if zeros.len() < 2 {
            step = (step * 1.05).min(0.1 * next.max(0.5));
        }
        s = next;
        prev = v.value;
    }
    Err(failure(start, s, "no further sign change within the scan budget"))
}

/// Locate the first `count` positive zeros of `𝔚` and the first `count + 1`
/// positive zeros of `Ψ′`, each refined to a bracket of width
/// `refine_tol · max(1, s)`.
pub fn locate_zeros(params: &WrightParams, count: usize, refine_tol: f64) -> Result<ZeroTable> {
    if count == 0 {
        return Err(Error::Domain("zero count must be at least 1".into()));
    }
    if !(refine_tol.is_finite() && refine_tol > 0.0) {
        return Err(Error::Domain(format!("refine_tol must be > 0, got {refine_tol}")));
    }
    let psi = scan_zeros(params, EvenKind::Frak, count, refine_tol)?;
    let psi_deriv = scan_zeros(params, EvenKind::Shifted(params.ab()), count + 1, refine_tol)?;
    ZeroTable::from_parts(*params, psi, psi_deriv, refine_tol)
}

/// First positive zero of `c 𝔚(s) + s 𝔚′(s)`. With `c = 1` this is the first
/// zero of `g′`; with `c = 2` its square is the first zero of `h′`.
pub fn first_shifted_zero(params: &WrightParams, shift: f64, refine_tol: f64) -> Result<f64> {
    if shift.is_nan() || shift <= 0.0 {
        return Err(Error::Domain(format!("shift must be > 0, got {shift}")));
    }
    Ok(scan_zeros(params, EvenKind::Shifted(shift), 1, refine_tol)?[0])
}

/// Partial Hadamard product `∏_{n ≤ N} (1 − z²/ψ_n²)`.
pub fn product_eval(t: &ZeroTable, z: Complex64, n_terms: usize) -> Result<Complex64> {
    if n_terms > t.len() {
        return Err(Error::Domain(format!("n_terms {n_terms} exceeds the {} stored zeros", t.len())));
    }
    let z2 = z * z;
    Ok(t.psi[..n_terms]
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, &s| acc * (1.0 - z2 / (s * s))))
}

/// Mittag-Leffler sum over the zeros of `𝔚`.
pub fn zero_sum(t: &ZeroTable, z: Complex64, weighting: Weighting, n_terms: usize) -> Result<ZeroSum> {
    zero_sum_over(t, ZeroSet::Psi, z, weighting, n_terms)
}

/// Mittag-Leffler sum over either stored zero sequence, with its remainder.
pub fn zero_sum_over(
    t: &ZeroTable,
    set: ZeroSet,
    z: Complex64,
    weighting: Weighting,
    n_terms: usize,
) -> Result<ZeroSum> {
    let (zeros, sums, full_tails) = t.set(set);
    if n_terms == 0 || n_terms > zeros.len() {
        return Err(Error::Domain(format!(
            "n_terms must be in 1..={}, got {n_terms}",
            zeros.len()
        )));
    }
    let (w, factor) = match weighting {
        Weighting::Quadratic => (z * z, 2.0),
        Weighting::Linear => (z, 1.0),
    };
    if w == Complex64::new(0.0, 0.0) {
        return Ok(ZeroSum {
            partial: w,
            tail: w,
            tail_estimate: 0.0,
        });
    }
    let mut partial = Complex64::new(0.0, 0.0);
    let mut located = 0.0;
    for &s in &zeros[..n_terms] {
        let s2 = s * s;
        let gap = s2 - w;
        if gap.norm() < POLE_GUARD * s2 {
            return Err(Error::PoleProximity {
                z: format!("{z}"),
                pole: s,
            });
        }
        partial += w / gap;
        // Sensitivity to the location error of the stored zero.
        located += 2.0 * s * w.norm() / gap.norm_sqr();
    }

    let z0 = zeros[0];
    let q = w / (z0 * z0);
    let decay = (z0 / zeros[n_terms - 1]).powi(2);
    if q.norm() * decay >= 1.0 {
        return Err(Error::Domain(format!(
            "|z| is beyond the last summed zero {}; remainder series diverges",
            zeros[n_terms - 1]
        )));
    }
    let fresh;
    let taus = if n_terms == zeros.len() {
        full_tails
    } else {
        fresh = tails(zeros, sums, n_terms, t.refine_tol);
        &fresh
    };
    let r = q.norm() * decay;
    let mut tail = Complex64::new(0.0, 0.0);
    let mut qk = Complex64::new(1.0, 0.0);
    let mut rounding = 0.0;
    let mut remainder = f64::INFINITY;
    for t in taus {
        qk *= q;
        // Past this point τ_k is noise; further terms would only amplify it
        // when |q| > 1.
        if t.tau <= t.noise {
            remainder = qk.norm() * t.noise / (1.0 - r);
            break;
        }
        tail += qk * t.tau;
        rounding += qk.norm() * t.noise;
        remainder = qk.norm() * t.tau * r / (1.0 - r);
        if remainder <= 1e-17 * tail.norm().max(1e-300) || (t.tau == 0.0 && qk.norm() < 1e-3) {
            break;
        }
    }
    Ok(ZeroSum {
        partial: factor * partial,
        tail: factor * tail,
        tail_estimate: factor * (remainder + rounding + 4.0 * f64::EPSILON * partial.norm() + located * t.refine_tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> WrightParams {
        WrightParams::new(1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn zero_count_must_be_positive() {
        assert!(locate_zeros(&unit(), 0, 1e-13).is_err());
    }

    #[test]
    fn product_at_origin_and_zero() {
        let t = locate_zeros(&unit(), 3, 1e-13).unwrap();
        assert_eq!(product_eval(&t, Complex64::new(0.0, 0.0), 3).unwrap(), Complex64::new(1.0, 0.0));
        let at_zero = product_eval(&t, Complex64::new(t.psi()[0], 0.0), 3).unwrap();
        assert!(at_zero.norm() < 1e-15);
        assert!(product_eval(&t, Complex64::new(0.1, 0.0), 4).is_err());
    }

    #[test]
    fn sums_vanish_at_origin() {
        let t = locate_zeros(&unit(), 3, 1e-13).unwrap();
        for w in [Weighting::Quadratic, Weighting::Linear] {
            let s = zero_sum(&t, Complex64::new(0.0, 0.0), w, 3).unwrap();
            assert_eq!(s.total(), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn pole_guard_fires() {
        let t = locate_zeros(&unit(), 3, 1e-13).unwrap();
        let z = Complex64::new(t.psi()[1] * (1.0 + 1e-12), 0.0);
        assert!(matches!(
            zero_sum(&t, z, Weighting::Quadratic, 3),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn interlacing_detection() {
        assert_eq!(interlacing_violation(&[1.0, 2.0], &[0.5, 1.5, 2.5]), None);
        assert_eq!(interlacing_violation(&[1.0, 2.0], &[0.5, 2.1, 2.5]), Some(1));
        assert_eq!(interlacing_violation(&[1.0], &[1.2, 1.5]), Some(0));
    }

    #[test]
    fn json_round_trip() {
        let t = locate_zeros(&unit(), 2, 1e-13).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.starts_with(r#"{"params":{"mu":1.0,"a":1.0,"nu":1.0,"b":1.0},"psi":["#));
        let back: ZeroTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back.psi(), t.psi());
        assert_eq!(back.psi_deriv(), t.psi_deriv());
    }

    #[test]
    fn corrupted_table_is_rejected() {
        let bad = r#"{"params":{"mu":1,"a":1,"nu":1,"b":1},"psi":[1.2,1.1],"psi_deriv":[0.5,1.15,3.0],"refine_tol":1e-13}"#;
        assert!(serde_json::from_str::<ZeroTable>(bad).is_err());
    }
}
