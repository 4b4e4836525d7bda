//! Radii of starlikeness, convexity, exponential starlikeness and convexity,
//! and spirallikeness for normalizations of the four-parameter Wright
//! function `W(z) = Σ z^k / (Γ(a + kμ) Γ(b + kν))`.

pub mod error;
pub mod gamma;
pub mod normalized;
pub(crate) mod precise;
pub mod radii;
pub mod roots;
pub mod series;
pub mod verify;
pub mod zeros;

pub use error::{Error, Result};
pub use gamma::log_gamma;
pub use normalized::{convex_ratio, star_ratio, Normalization, RatioKind};
pub use radii::{omega_e_inner_radius, solve_radius, Family, RadiusProblem, RadiusResult};
pub use series::{
    eval_frak_w, eval_frak_w_derivative, eval_wright, eval_wright_derivative, EvalResult, SeriesOptions,
    WrightParams,
};
pub use verify::{check_radius, cross_oracle_suite, lemma_inequality_suite, VerificationReport};
pub use zeros::{locate_zeros, product_eval, zero_sum, zero_sum_over, Weighting, ZeroSet, ZeroSum, ZeroTable};
