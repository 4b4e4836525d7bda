//! Radii of starlikeness, convexity, exponential starlikeness and convexity,
//! and spirallikeness for the normalized functions.
//!
//! Every family reduces to `1 − Re Φ(r) = β` on the positive axis, where `Φ`
//! is the starlike or convex functional and `β` is the disk radius of the
//! class. The left side increases from 0 to +∞ across the admissible
//! interval, so the radius is its unique root there.

use std::f64::consts::{E, FRAC_PI_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normalized::{convex_ratio_direct, star_ratio_direct, Normalization, RatioKind};
use crate::roots::{bracketed_root, RootOptions};
use crate::series::{frak_jet, SeriesOptions, WrightParams};
use crate::zeros::{first_shifted_zero, ZeroTable};

/// Disk radius of the exponential classes: `|w − 1| < 1 − 1/e` lies in `|log w| < 1`.
pub const EXP_BETA: f64 = 1.0 - 1.0 / E;
pub const DEFAULT_TOL: f64 = 1e-12;
/// Relative distance of the initial right end of the bracket from the interval bound.
const EDGE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    /// `zu′/u` in a Ma–Minda class whose image contains `|w − 1| < β`.
    #[serde(rename = "star")]
    StarPhi { beta: f64 },
    /// `1 + zu″/u′` in such a class.
    #[serde(rename = "convex")]
    ConvexPhi { beta: f64 },
    ExpStar,
    ExpConvex,
    /// `Re(e^{−iγ} zu′/u) > α cos γ`.
    Spiral { gamma: f64, alpha: f64 },
}

impl Family {
    pub fn ratio_kind(&self) -> RatioKind {
        match self {
            Family::StarPhi { .. } | Family::ExpStar | Family::Spiral { .. } => RatioKind::Star,
            Family::ConvexPhi { .. } | Family::ExpConvex => RatioKind::Convex,
        }
    }

    /// The disk radius `β` of the equivalent disk problem.
    pub fn canonical_beta(&self) -> f64 {
        match *self {
            Family::StarPhi { beta } | Family::ConvexPhi { beta } => beta,
            Family::ExpStar | Family::ExpConvex => EXP_BETA,
            Family::Spiral { gamma, alpha } => (1.0 - alpha) * gamma.cos(),
        }
    }

    /// The disk family this one reduces to.
    pub fn canonical(&self) -> Family {
        let beta = self.canonical_beta();
        match self.ratio_kind() {
            RatioKind::Star => Family::StarPhi { beta },
            RatioKind::Convex => Family::ConvexPhi { beta },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::StarPhi { .. } => "star",
            Family::ConvexPhi { .. } => "convex",
            Family::ExpStar => "exp-star",
            Family::ExpConvex => "exp-convex",
            Family::Spiral { .. } => "spiral",
        }
    }

    /// `(β, γ, α)` as reported in tables; unused entries are `None`.
    pub fn inputs(&self) -> (Option<f64>, Option<f64>, Option<f64>) {
        match *self {
            Family::StarPhi { beta } | Family::ConvexPhi { beta } => (Some(beta), None, None),
            Family::ExpStar | Family::ExpConvex => (None, None, None),
            Family::Spiral { gamma, alpha } => (None, Some(gamma), Some(alpha)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusProblem {
    family: Family,
    norm: Normalization,
    params: WrightParams,
}

impl RadiusProblem {
    pub fn new(family: Family, norm: Normalization, params: WrightParams) -> Result<Self> {
        match family {
            Family::StarPhi { beta } | Family::ConvexPhi { beta } => {
                if !(beta > 0.0 && beta <= 1.0) {
                    return Err(Error::InvalidProblem(format!("beta must lie in (0, 1], got {beta}")));
                }
            }
            Family::Spiral { gamma, alpha } => {
                if !(-FRAC_PI_2..FRAC_PI_2).contains(&gamma) || gamma == -FRAC_PI_2 {
                    return Err(Error::InvalidProblem(format!("gamma must lie in (-pi/2, pi/2), got {gamma}")));
                }
                if !(0.0..1.0).contains(&alpha) {
                    return Err(Error::InvalidProblem(format!("alpha must lie in [0, 1), got {alpha}")));
                }
            }
            Family::ExpConvex if norm == Normalization::F => {
                if params.a() > 1.0 || params.b() > 1.0 {
                    return Err(Error::InvalidProblem(format!(
                        "exponential convexity of f needs 0 < a, b <= 1, got a = {}, b = {}",
                        params.a(),
                        params.b()
                    )));
                }
            }
            Family::ExpStar | Family::ExpConvex => {}
        }
        Ok(Self { family, norm, params })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn norm(&self) -> Normalization {
        self.norm
    }

    pub fn params(&self) -> &WrightParams {
        &self.params
    }

    pub fn beta(&self) -> f64 {
        self.family.canonical_beta()
    }

    /// The same radius posed as a disk problem.
    pub fn canonical(&self) -> RadiusProblem {
        RadiusProblem {
            family: self.family.canonical(),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub radius: f64,
    pub bracket: (f64, f64),
    /// Canonical residual `1 − Re Φ(radius) − β`.
    pub residual: f64,
    pub iterations: usize,
    /// Right end of the interval on which the radius is the unique root.
    pub interval_bound: f64,
    /// Root of the family's own equation, solved independently.
    pub literal_radius: f64,
    /// For convexity of `f`: root of `r f″(r) + β ab f′(r) = 0`, which differs
    /// from the disk condition `1 + r f″/f′ = 1 − β` unless `ab = 1`.
    pub statement_radius: Option<f64>,
}

/// Right end of the interval on which the residual of `prob` increases to +∞.
pub fn interval_bound(prob: &RadiusProblem, t: &ZeroTable) -> Result<f64> {
    check_table(prob, t)?;
    let p = prob.params();
    Ok(match (prob.family.ratio_kind(), prob.norm) {
        (RatioKind::Star, Normalization::F | Normalization::G) => t.psi()[0],
        (RatioKind::Star, Normalization::H) => t.psi()[0].powi(2),
        (RatioKind::Convex, Normalization::F) => t.psi_deriv()[0],
        (RatioKind::Convex, Normalization::G) => first_shifted_zero(p, 1.0, t.refine_tol())?,
        (RatioKind::Convex, Normalization::H) => first_shifted_zero(p, 2.0, t.refine_tol())?.powi(2),
    })
}

fn check_table(prob: &RadiusProblem, t: &ZeroTable) -> Result<()> {
    if t.params() != prob.params() {
        return Err(Error::InvalidProblem("zero table belongs to different parameters".into()));
    }
    Ok(())
}

/// `1 − Re Φ(r) − β` from the direct series at real `r`.
pub fn residual(prob: &RadiusProblem, r: f64) -> Result<f64> {
    let opts = SeriesOptions::default();
    let z = Complex64::new(r, 0.0);
    let value = match prob.family.ratio_kind() {
        RatioKind::Star => star_ratio_direct(prob.norm, prob.params(), z, &opts)?,
        RatioKind::Convex => convex_ratio_direct(prob.norm, prob.params(), z, &opts)?,
    };
    Ok(1.0 - value.value.re - prob.beta())
}

/// The family's equation written as in the characterization of the radius:
/// `r𝔚′(r) + c β 𝔚(r)` for the starlike families and, for the convex ones,
/// `1 + rΨ″/Ψ′ + (1/ab − 1) rΨ′/Ψ − (1 − β)` with `Ψ = r^{ab}𝔚` for `f`
/// and `r u″(r) + β u′(r)` for `g`, `h`.
fn literal_equation(prob: &RadiusProblem, r: f64, beta: f64) -> Result<f64> {
    let p = prob.params();
    let opts = SeriesOptions::default();
    let jet = |s: f64| frak_jet(p, Complex64::new(s, 0.0), &opts);
    match (prob.family.ratio_kind(), prob.norm) {
        (RatioKind::Star, Normalization::F) => {
            let j = jet(r)?;
            Ok(r * j.w1.re + p.ab() * beta * j.w.re)
        }
        (RatioKind::Star, Normalization::G) => {
            let j = jet(r)?;
            Ok(r * j.w1.re + beta * j.w.re)
        }
        (RatioKind::Star, Normalization::H) => {
            let s = r.sqrt();
            let j = jet(s)?;
            Ok(s * j.w1.re + 2.0 * beta * j.w.re)
        }
        (RatioKind::Convex, Normalization::F) => {
            let ab = p.ab();
            let j = jet(r)?;
            let (w, w1, w2) = (j.w.re, j.w1.re, j.w2.re);
            let pw = r.powf(ab);
            let psi = pw * w;
            let psi1 = ab * pw / r * w + pw * w1;
            let psi2 = ab * (ab - 1.0) * pw / (r * r) * w + 2.0 * ab * pw / r * w1 + pw * w2;
            Ok(1.0 + r * psi2 / psi1 + (1.0 / ab - 1.0) * r * psi1 / psi - (1.0 - beta))
        }
        (RatioKind::Convex, Normalization::G) => {
            // g = ΓΓ s𝔚(s): g′ ∝ 𝔚 + r𝔚′, g″ ∝ 2𝔚′ + r𝔚″.
            let j = jet(r)?;
            Ok(r * (2.0 * j.w1.re + r * j.w2.re) + beta * (j.w.re + r * j.w1.re))
        }
        (RatioKind::Convex, Normalization::H) => {
            // h = ΓΓ rW(−r) = ΓΓ r𝔚(√r): in s = √r,
            // h′ ∝ 𝔚 + s𝔚′/2 and r h″ ∝ (3s𝔚′ + s²𝔚″)/4.
            let s = r.sqrt();
            let j = jet(s)?;
            let (w, w1, w2) = (j.w.re, j.w1.re, j.w2.re);
            Ok((3.0 * s * w1 + s * s * w2) / 4.0 + beta * (w + 0.5 * s * w1))
        }
    }
}

/// Solve `g(r) = 0` on `(0, bound)` where `g < 0` near 0 and `g > 0` near
/// `bound`, returning the root outcome and the right end actually used.
fn solve_increasing<F>(mut g: F, bound: f64, tol: f64) -> Result<(f64, usize, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let lo = EDGE * bound;
    let f_lo = g(lo)?;
    let mut gap = EDGE * bound;
    let mut hi = bound - gap;
    let mut f_hi = f64::NAN;
    for _ in 0..40 {
        match g(hi) {
            Ok(v) if v.is_finite() => {
                f_hi = v;
                break;
            }
            _ => {
                gap *= 4.0;
                hi = bound - gap;
                if hi <= lo {
                    break;
                }
            }
        }
    }
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::BracketFailure { lo, hi, f_lo, f_hi });
    }
    let mut failure = None;
    let out = bracketed_root(
        |r| match g(r) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        f_lo,
        f_hi,
        &RootOptions {
            switch_width: 1e-6 * bound.max(1.0),
            xtol: tol / 16.0,
            ftol: 0.0,
            max_iter: 500,
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((out.root, out.iterations, hi))
}

/// Radius of `prob`, the least positive root of its characterizing equation.
pub fn solve_radius(prob: &RadiusProblem, t: &ZeroTable, tol: f64) -> Result<RadiusResult> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Domain(format!("tol must be > 0, got {tol}")));
    }
    let bound = interval_bound(prob, t)?;
    let (radius, iterations, _) = solve_increasing(|r| residual(prob, r), bound, tol)?;
    let res = residual(prob, radius)?;

    // Certify a bracket strictly around the root.
    let mut w = (tol / 4.0).max(4.0 * f64::EPSILON * radius);
    let mut bracket = (radius - w, radius + w);
    for _ in 0..8 {
        bracket = (radius - w, radius + w);
        let (a, b) = (residual(prob, bracket.0)?, residual(prob, bracket.1)?);
        if a <= 0.0 && b >= 0.0 {
            break;
        }
        w *= 4.0;
    }

    let beta = prob.beta();
    let (literal_radius, _, _) = solve_increasing(|r| literal_sign(prob, r, beta), bound, tol)?;
    let statement_radius = match (prob.family, prob.norm) {
        (Family::ConvexPhi { beta }, Normalization::F) => {
            let b = beta * prob.params().ab();
            Some(solve_increasing(|r| literal_sign(prob, r, b), bound, tol)?.0)
        }
        _ => None,
    };

    Ok(RadiusResult {
        radius,
        bracket,
        residual: res,
        iterations,
        interval_bound: bound,
        literal_radius,
        statement_radius,
    })
}

/// Literal equation oriented to be negative near the origin.
fn literal_sign(prob: &RadiusProblem, r: f64, beta: f64) -> Result<f64> {
    Ok(-literal_equation(prob, r, beta)?)
}

/// Radius of the largest disk centred at `a_center` on the real axis that
/// stays inside `{w : |log w| < 1}`.
pub fn omega_e_inner_radius(a_center: f64) -> Result<f64> {
    let lo = (1.0 + 1.0 / E) / 2.0;
    let mid = (E + 1.0 / E) / 2.0;
    let hi = (1.0 + E) / 2.0;
    if !(lo..=hi).contains(&a_center) {
        return Err(Error::Domain(format!(
            "centre must lie in [{lo}, {hi}], got {a_center}"
        )));
    }
    Ok(if a_center <= mid { a_center - 1.0 / E } else { E - a_center })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::locate_zeros;

    fn unit() -> WrightParams {
        WrightParams::new(1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn omega_e_branches() {
        assert!((omega_e_inner_radius(1.0).unwrap() - (1.0 - 1.0 / E)).abs() < 1e-15);
        let mid = (E + 1.0 / E) / 2.0;
        assert!((omega_e_inner_radius(mid).unwrap() - (E - 1.0 / E) / 2.0).abs() < 1e-15);
        assert!((omega_e_inner_radius((1.0 + E) / 2.0).unwrap() - (E - 1.0) / 2.0).abs() < 1e-15);
        assert!(omega_e_inner_radius(0.5).is_err());
        assert!(omega_e_inner_radius(2.0).is_err());
    }

    #[test]
    fn problem_validation() {
        let p = unit();
        let n = Normalization::G;
        assert!(RadiusProblem::new(Family::StarPhi { beta: 1.5 }, n, p).is_err());
        assert!(RadiusProblem::new(Family::StarPhi { beta: 0.0 }, n, p).is_err());
        assert!(RadiusProblem::new(Family::StarPhi { beta: 1.0 }, n, p).is_ok());
        assert!(RadiusProblem::new(Family::Spiral { gamma: 1.6, alpha: 0.0 }, n, p).is_err());
        assert!(RadiusProblem::new(Family::Spiral { gamma: 0.3, alpha: 1.0 }, n, p).is_err());
        let big = WrightParams::new(1.0, 2.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            RadiusProblem::new(Family::ExpConvex, Normalization::F, big),
            Err(Error::InvalidProblem(_))
        ));
        assert!(RadiusProblem::new(Family::ExpConvex, Normalization::G, big).is_ok());
    }

    #[test]
    fn tiny_beta_gives_tiny_radius() {
        let t = locate_zeros(&unit(), 20, 1e-13).unwrap();
        for n in Normalization::ALL {
            let prob = RadiusProblem::new(Family::StarPhi { beta: 1e-8 }, n, unit()).unwrap();
            let r = solve_radius(&prob, &t, DEFAULT_TOL).unwrap();
            assert!(r.radius < 1e-4, "{n}: {}", r.radius);
        }
    }

    #[test]
    fn result_invariants() {
        let t = locate_zeros(&unit(), 20, 1e-13).unwrap();
        for n in Normalization::ALL {
            for fam in [Family::StarPhi { beta: 0.5 }, Family::ConvexPhi { beta: 0.5 }, Family::ExpConvex] {
                let prob = RadiusProblem::new(fam, n, unit()).unwrap();
                let r = solve_radius(&prob, &t, DEFAULT_TOL).unwrap();
                assert!(r.bracket.0 < r.radius && r.radius < r.bracket.1);
                assert!(r.bracket.1 - r.bracket.0 <= DEFAULT_TOL);
                assert!(r.radius < r.interval_bound);
                assert!(r.residual.abs() <= 1e-12, "{n} {fam:?}: {}", r.residual);
                assert!((r.literal_radius - r.radius).abs() <= 10.0 * DEFAULT_TOL, "{n} {fam:?}");
            }
        }
    }
}
