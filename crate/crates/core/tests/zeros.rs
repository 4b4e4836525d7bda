mod common;

use common::{admissible_draws, bessel, j0_half_zeros, params, REFINE_TOL};
use num_complex::Complex64;
use wright_radii::{
    eval_frak_w, locate_zeros, product_eval, zero_sum, zero_sum_over, Error, SeriesOptions, Weighting, ZeroSet,
    ZeroTable,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn bessel_zeros_match_bisection_oracle() {
    let t = locate_zeros(&bessel(), 3, REFINE_TOL).unwrap();
    let oracle = j0_half_zeros(3);
    for (got, want) in t.psi().iter().zip(&oracle) {
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }
}

#[test]
fn bessel_zeros_golden() {
    // j_{0,n}/2 and j_{1,n}/2
    const J0_HALF: [f64; 10] = [
        1.2024127788478864, 2.7600390551431553, 4.326863956455506, 5.895767219507141, 7.465458854243893,
        9.035531983955462, 10.60581831493963, 12.176235765374651, 13.746739566020127, 15.317303234215988,
    ];
    let t = locate_zeros(&bessel(), 10, REFINE_TOL).unwrap();
    for (got, want) in t.psi().iter().zip(&J0_HALF) {
        assert!((got - want).abs() < 1e-12 * want, "{got} vs {want}");
    }
}

#[test]
fn refinement_residuals_are_small() {
    let t = locate_zeros(&params(1.3, 0.9, 1.8, 0.4), 20, REFINE_TOL).unwrap();
    for ((w, dw), s) in t.refinement_residuals().into_iter().zip(t.psi()) {
        // |𝔚(ψ)| / |𝔚′(ψ)| bounds the distance to the zero.
        assert!(w.abs() / dw.abs() < 1e-10 * s.max(1.0), "step {}", w.abs() / dw.abs());
    }
}

#[test]
fn interlacing_on_random_draws() {
    for t in admissible_draws(3, 5, 12) {
        let (z, d) = (t.psi(), t.psi_deriv());
        for n in 0..11 {
            assert!(d[n] < z[n] && z[n] < d[n + 1], "{:?} n={n}", t.params());
        }
    }
}

#[test]
fn partial_products_converge_monotonically() {
    let p = bessel();
    let t = locate_zeros(&p, 100, REFINE_TOL).unwrap();
    let z = c(0.5, 0.0);
    let series = eval_frak_w(&p, z, &SeriesOptions::default()).unwrap().value * p.gamma_prefactor();
    let errs: Vec<f64> = [10, 25, 50, 100].iter().map(|&n| (product_eval(&t, z, n).unwrap() - series).norm()).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    // The product tail behaves like z²/N, so 50 factors land just above 1e-3.
    assert!(errs[2] < 2e-3, "{errs:?}");
    assert!(errs[3] < 1e-3, "{errs:?}");
}

#[test]
fn zero_sum_matches_log_derivative() {
    let p = params(2.5, 0.8, 0.7, 0.6);
    let t = locate_zeros(&p, 40, REFINE_TOL).unwrap();
    let opts = SeriesOptions::default();
    for z in [c(0.3, 0.2), c(-0.5, 0.4), c(0.0, 0.9 * t.psi()[0])] {
        let jet = wright_radii::series::frak_jet(&p, z, &opts).unwrap();
        // z𝔚′/𝔚 = −Σ 2z²/(ψ² − z²)
        let direct = z * jet.w1 / jet.w;
        let zs = zero_sum(&t, z, Weighting::Quadratic, t.len()).unwrap();
        assert!((zs.total() + direct).norm() < 1e-11, "{z} {zs:?} {direct}");
        assert!(zs.tail_estimate < 1e-11);
    }
}

#[test]
fn fewer_terms_give_the_same_total() {
    let t = locate_zeros(&bessel(), 40, REFINE_TOL).unwrap();
    let z = c(0.7, -0.3);
    let full = zero_sum_over(&t, ZeroSet::PsiDeriv, z, Weighting::Quadratic, 40).unwrap();
    let short = zero_sum_over(&t, ZeroSet::PsiDeriv, z, Weighting::Quadratic, 12).unwrap();
    assert!((full.total() - short.total()).norm() < 1e-12, "{full:?} {short:?}");
}

#[test]
fn origin_sum_vanishes() {
    let t = locate_zeros(&bessel(), 10, REFINE_TOL).unwrap();
    let zs = zero_sum(&t, c(0.0, 0.0), Weighting::Linear, 10).unwrap();
    assert_eq!(zs.total(), c(0.0, 0.0));
}

#[test]
fn pole_guard_and_bad_counts() {
    let t = locate_zeros(&bessel(), 10, REFINE_TOL).unwrap();
    let z = c(t.psi()[0], 0.0);
    assert!(matches!(zero_sum(&t, z, Weighting::Quadratic, 10), Err(Error::PoleProximity { .. })));
    assert!(zero_sum(&t, c(0.1, 0.0), Weighting::Quadratic, 11).is_err());
    assert!(locate_zeros(&bessel(), 0, REFINE_TOL).is_err());
}

#[test]
fn complex_zeros_are_reported() {
    // Zeros of this 𝔚 leave the real axis after about two dozen.
    let err = locate_zeros(&params(1.5, 0.5, 0.3, 2.0), 40, REFINE_TOL).unwrap_err();
    assert!(matches!(err, Error::ZeroSearchFailure { .. }), "{err}");
}

#[test]
fn table_round_trips_and_truncates() {
    let t = locate_zeros(&params(1.0, 0.5, 1.0, 0.5), 15, REFINE_TOL).unwrap();
    let json = serde_json::to_string(&t).unwrap();
    let back: ZeroTable = serde_json::from_str(&json).unwrap();
    assert_eq!(back.psi(), t.psi());
    assert_eq!(back.psi_deriv(), t.psi_deriv());
    let short = t.truncated(5).unwrap();
    assert_eq!(short.psi(), &t.psi()[..5]);
    assert!(t.truncated(16).is_err());
}
