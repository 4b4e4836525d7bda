//! Independent checks of computed radii: the defining condition sampled on
//! circles just inside and outside the radius, equality at the extremal
//! point, randomized trials of the elementary inequalities behind the
//! radius theorems, and agreement between the zero-sum and series paths.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normalized::{
    convex_ratio, convex_ratio_direct, star_ratio, star_ratio_bounded, star_ratio_direct, Normalization, RatioKind,
};
use crate::radii::{Family, RadiusProblem, RadiusResult};
use crate::series::{eval_frak_w, SeriesOptions};
use crate::zeros::{product_eval, ZeroTable};

pub const DEFAULT_SAMPLES: usize = 720;
pub const DEFAULT_EPS: f64 = 1e-3;
/// Largest accepted `|margin|` at the extremal point on the radius itself.
pub const SHARPNESS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub problem: RadiusProblem,
    pub radius: f64,
    /// The condition held at every sample on `|z| = (1 − eps) radius`.
    pub inner_margin_ok: bool,
    /// The condition failed at the extremal point on `|z| = (1 + eps) radius`.
    pub outer_violation_found: bool,
    /// Margin of the condition at the extremal point on `|z| = radius`.
    pub sharpness_residual: f64,
    /// Smallest margin over the inner samples.
    pub min_functional_inner: f64,
    /// Inner sample where that minimum occurred.
    pub inner_argmin: Complex64,
    pub extremal_point: Complex64,
    pub samples: usize,
    pub eps: f64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.inner_margin_ok && self.outer_violation_found && self.sharpness_residual.abs() <= SHARPNESS_TOL
    }
}

/// Signed margin of the family's defining condition at `w`, positive
/// exactly when the condition holds.
pub fn condition_margin(family: &Family, w: Complex64) -> f64 {
    match *family {
        Family::StarPhi { beta } | Family::ConvexPhi { beta } => beta - (w - 1.0).norm(),
        Family::ExpStar | Family::ExpConvex => {
            if w.re <= 0.0 {
                -1.0
            } else {
                1.0 - w.ln().norm()
            }
        }
        Family::Spiral { gamma, alpha } => (Complex64::from_polar(1.0, -gamma) * w).re - alpha * gamma.cos(),
    }
}

/// The functional of `prob` at `z`, from the zero sums where available.
pub fn functional(prob: &RadiusProblem, t: &ZeroTable, z: Complex64) -> Result<Complex64> {
    match prob.family().ratio_kind() {
        RatioKind::Star => star_ratio(prob.norm(), t, z),
        RatioKind::Convex => convex_ratio(prob.norm(), t, z, &SeriesOptions::default()),
    }
}

/// Direction in which the condition first fails as the radius grows.
///
/// For `f` and `g` every functional depends on `z²` and the extremal point
/// is real; for `h` the sums run over `z/(ψ² − z)` and the positive axis is
/// where they are largest.
pub fn extremal_direction(prob: &RadiusProblem) -> Complex64 {
    match prob.norm() {
        Normalization::F | Normalization::G => Complex64::new(-1.0, 0.0),
        Normalization::H => Complex64::new(1.0, 0.0),
    }
}

/// Sample the defining condition around a computed radius.
pub fn check_radius(
    prob: &RadiusProblem,
    res: &RadiusResult,
    t: &ZeroTable,
    n_samples: usize,
    eps: f64,
) -> Result<VerificationReport> {
    if !(eps > 0.0 && eps < 0.1) {
        return Err(Error::Domain(format!("eps must lie in (0, 0.1), got {eps}")));
    }
    if n_samples == 0 {
        return Err(Error::Domain("n_samples must be at least 1".into()));
    }
    let rho = res.radius;
    let outer = (1.0 + eps) * rho;
    if outer >= res.interval_bound {
        return Err(Error::InconclusiveVerification(format!(
            "outer circle |z| = {outer} reaches the end of the domain {}",
            res.interval_bound
        )));
    }
    let family = prob.family();
    let margin_at = |z: Complex64| -> Result<f64> { Ok(condition_margin(&family, functional(prob, t, z)?)) };

    let inner = (1.0 - eps) * rho;
    let mut min_margin = f64::INFINITY;
    let mut argmin = Complex64::new(inner, 0.0);
    let mut inner_ok = true;
    for k in 0..n_samples {
        let z = Complex64::from_polar(inner, 2.0 * PI * k as f64 / n_samples as f64);
        let m = margin_at(z)?;
        if m.is_nan() || m <= 0.0 {
            inner_ok = false;
        }
        if m < min_margin {
            min_margin = m;
            argmin = z;
        }
    }

    let dir = extremal_direction(prob);
    let outer_margin = margin_at(dir * outer)?;
    let sharpness = margin_at(dir * rho)?;

    let mut notes = Vec::new();
    let expected = dir * inner;
    let resolution = 2.0 * PI / n_samples as f64 * inner;
    let mirrored = matches!(prob.norm(), Normalization::F | Normalization::G) && (argmin + expected).norm() <= resolution;
    if (argmin - expected).norm() > resolution * 1.01 && !mirrored {
        notes.push(format!(
            "inner minimum at arg z = {:.6} rad, away from the extremal point",
            argmin.arg()
        ));
    }
    if let Family::Spiral { gamma, .. } = family {
        if gamma != 0.0 {
            notes.push(
                "for gamma != 0 the real-axis margin at the radius is cos(gamma)(1-alpha)(1-cos(gamma)) > 0".into(),
            );
        }
    }
    if family.ratio_kind() == RatioKind::Convex && prob.norm() == Normalization::F {
        notes.push(format!("|1 - 1/ab| = {:.6}", (1.0 - 1.0 / prob.params().ab()).abs()));
    }

    Ok(VerificationReport {
        problem: *prob,
        radius: rho,
        inner_margin_ok: inner_ok,
        outer_violation_found: outer_margin < 0.0,
        sharpness_residual: sharpness,
        min_functional_inner: min_margin,
        inner_argmin: argmin,
        extremal_point: dir * rho,
        samples: n_samples,
        eps,
        notes,
    })
}

/// Outcome of one randomized inequality suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCount {
    pub trials: usize,
    pub violations: usize,
    /// Largest `lhs − rhs` seen, relative to `max(1, rhs)`.
    pub worst_excess: f64,
}

impl InequalityCount {
    fn new() -> Self {
        Self {
            trials: 0,
            violations: 0,
            worst_excess: f64::NEG_INFINITY,
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64, tol: f64) {
        let excess = (lhs - rhs) / rhs.abs().max(1.0);
        self.trials += 1;
        if excess > tol {
            self.violations += 1;
        }
        self.worst_excess = self.worst_excess.max(excess);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaSummary {
    /// `|z/(b−z) − λz/(a−z)| ≤ r/(b−r) − λr/(a−r)` for `a > b > r ≥ |z|`, `λ ∈ [0,1]`.
    pub two_pole: InequalityCount,
    /// `|1/((a+z)(b−z))| ≤ 1/((a−r)(b+r))` for `b > a > r ≥ |z|`.
    pub product: InequalityCount,
    /// `|z/(z−z_k) + r²/(R²−r²)| ≤ Rr/(R²−r²)` for `|z| ≤ r < 1`, `|z_k| = R > r`.
    pub mobius: InequalityCount,
    /// The same with a second real pole `β > α = |z_k|` added on both sides.
    pub mobius_pair: InequalityCount,
}

impl LemmaSummary {
    pub fn violations(&self) -> usize {
        self.two_pole.violations + self.product.violations + self.mobius.violations + self.mobius_pair.violations
    }
}

const LEMMA_TOL: f64 = 1e-12;

fn point_in_disk(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    // Half the draws on the boundary circle, where the bounds are tight.
    let rad = if rng.gen_bool(0.5) { r } else { r * rng.gen::<f64>().sqrt() };
    Complex64::from_polar(rad, rng.gen_range(0.0..2.0 * PI))
}

/// Randomized trials of the inequalities used to bound the functionals.
pub fn lemma_inequality_suite(seed: u64, trials: usize) -> LemmaSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut two_pole = InequalityCount::new();
    let mut product = InequalityCount::new();
    let mut mobius = InequalityCount::new();
    let mut mobius_pair = InequalityCount::new();
    for _ in 0..trials {
        // a > b > r ≥ |z|
        let r = rng.gen_range(0.0..5.0);
        let b = r + rng.gen_range(1e-3..5.0);
        let a = b + rng.gen_range(1e-3..5.0);
        let lambda: f64 = rng.gen();
        let z = point_in_disk(&mut rng, r);
        let lhs = (z / (b - z) - lambda * z / (a - z)).norm();
        two_pole.record(lhs, r / (b - r) - lambda * r / (a - r), LEMMA_TOL);

        // b > a > r ≥ |z|
        let (lo, hi) = (b, a);
        let lhs = (1.0 / ((lo + z) * (hi - z))).norm();
        product.record(lhs, 1.0 / ((lo - r) * (hi + r)), LEMMA_TOL);

        // |z| ≤ r < 1, |z_k| = R > r, second real pole β > R
        let r = rng.gen_range(0.0..1.0);
        let big_r = r + rng.gen_range(1e-3..3.0);
        let beta = big_r + rng.gen_range(1e-3..3.0);
        let z = point_in_disk(&mut rng, r);
        let zk = Complex64::from_polar(big_r, rng.gen_range(0.0..2.0 * PI));
        let d = big_r * big_r - r * r;
        let lhs = (z / (z - zk) + r * r / d).norm();
        mobius.record(lhs, big_r * r / d, LEMMA_TOL);
        let e = beta * beta - r * r;
        let lhs = (z / (z - zk) + r * r / d + r * r / e).norm();
        mobius_pair.record(lhs, big_r * r / d + beta * r / e, LEMMA_TOL);
    }
    LemmaSummary {
        two_pole,
        product,
        mobius,
        mobius_pair,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossOracleSummary {
    /// Worst `|zero-sum − series|` of `zu′/u` for f, g, h.
    pub star: [f64; 3],
    /// Worst `|zero-sum − series|` of `1 + zf″/f′`.
    pub convex_f: f64,
    /// Worst reported error bound of the zero-sum path.
    pub worst_bound: f64,
    /// `|Γ(a)Γ(b)𝔚 − partial product|` decreased with the number of factors.
    pub product_monotone: bool,
    pub product_errors: Vec<(usize, f64)>,
    pub samples: usize,
}

impl CrossOracleSummary {
    pub fn worst(&self) -> f64 {
        self.star.iter().copied().fold(self.convex_f, f64::max)
    }
}

/// Compare the zero-sum and series paths at `samples` random points of the
/// disks `|z| ≤ 0.9ψ₁` (`0.9ψ₁²` for h), and the partial Hadamard products
/// against the series on the real segment `[0, 0.8ψ₁]`.
pub fn cross_oracle_suite(t: &ZeroTable, seed: u64, samples: usize) -> Result<CrossOracleSummary> {
    if t.len() < 50 {
        return Err(Error::Domain(format!("cross-oracle suite needs at least 50 zeros, got {}", t.len())));
    }
    let p = *t.params();
    let opts = SeriesOptions::default();
    let psi1 = t.psi()[0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut star = [0.0f64; 3];
    let mut convex_f = 0.0f64;
    let mut worst_bound = 0.0f64;
    for _ in 0..samples {
        let u = point_in_disk(&mut rng, 1.0);
        for (i, norm) in Normalization::ALL.into_iter().enumerate() {
            let z = match norm {
                Normalization::H => u * 0.9 * psi1 * psi1,
                _ => u * 0.9 * psi1,
            };
            let zs = star_ratio_bounded(norm, t, z)?;
            let direct = star_ratio_direct(norm, &p, z, &opts)?;
            star[i] = star[i].max((zs.value - direct.value).norm());
            worst_bound = worst_bound.max(zs.error_bound);
        }
        // The convex functional of f needs |z| below the first zero of Ψ′.
        let z = u * 0.9 * t.psi_deriv()[0];
        let zs = convex_ratio(Normalization::F, t, z, &opts)?;
        let direct = convex_ratio_direct(Normalization::F, &p, z, &opts)?;
        convex_f = convex_f.max((zs - direct.value).norm());
    }

    let mut product_errors = Vec::new();
    let xs: Vec<f64> = (1..=8).map(|i| 0.8 * psi1 * i as f64 / 8.0).collect();
    let gab = p.gamma_prefactor();
    for n in [10usize, 20, 40, 80] {
        if n > t.len() {
            break;
        }
        let mut err = 0.0f64;
        for &x in &xs {
            let z = Complex64::new(x, 0.0);
            let series = gab * eval_frak_w(&p, z, &opts)?.value;
            err = err.max((series - product_eval(t, z, n)?).norm());
        }
        product_errors.push((n, err));
    }
    let product_monotone = product_errors.windows(2).all(|w| w[1].1 < w[0].1);

    Ok(CrossOracleSummary {
        star,
        convex_f,
        worst_bound,
        product_monotone,
        product_errors,
        samples,
    })
}
