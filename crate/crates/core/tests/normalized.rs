mod common;

use common::{admissible_draws, bessel, params, REFINE_TOL};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wright_radii::normalized::{convex_ratio_direct, star_ratio_bounded, star_ratio_direct};
use wright_radii::{convex_ratio, locate_zeros, star_ratio, Normalization, SeriesOptions};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn disk_point(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    Complex64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

#[test]
fn dual_paths_agree_within_bounds() {
    let opts = SeriesOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in admissible_draws(5, 5, 50) {
        let p = *t.params();
        let psi1 = t.psi()[0];
        for _ in 0..200 {
            let u = disk_point(&mut rng, 0.9);
            for norm in [Normalization::G, Normalization::H] {
                let z = if norm == Normalization::H { u * psi1 * psi1 } else { u * psi1 };
                let zs = star_ratio_bounded(norm, &t, z).unwrap();
                let direct = star_ratio_direct(norm, &p, z, &opts).unwrap();
                let gap = (zs.value - direct.value).norm();
                assert!(gap <= zs.error_bound + direct.error_bound + 1e-12, "{p:?} {norm} {z}: {gap} {} {:?} {:?}", zs.value, zs.error_bound, direct);
            }
        }
    }
}

#[test]
fn f_and_g_are_coupled_through_ab() {
    let t = locate_zeros(&params(2.5, 0.8, 0.7, 0.6), 40, REFINE_TOL).unwrap();
    let ab = t.params().ab();
    for z in [c(0.2, 0.1), c(-0.6, 0.3), c(0.0, -0.8)] {
        let f = star_ratio(Normalization::F, &t, z).unwrap();
        let g = star_ratio(Normalization::G, &t, z).unwrap();
        assert!((f - 1.0 - (g - 1.0) / ab).norm() <= 4.0 * f64::EPSILON * (g - 1.0).norm() / ab);
    }
}

#[test]
fn f_equals_g_when_ab_is_one() {
    let t = locate_zeros(&bessel(), 30, REFINE_TOL).unwrap();
    let z = c(0.0, 0.3);
    assert_eq!(star_ratio(Normalization::F, &t, z).unwrap(), star_ratio(Normalization::G, &t, z).unwrap());
}

#[test]
fn ratios_are_one_at_the_origin() {
    let t = locate_zeros(&params(1.0, 0.5, 1.0, 0.5), 20, REFINE_TOL).unwrap();
    let opts = SeriesOptions::default();
    for norm in Normalization::ALL {
        assert_eq!(star_ratio(norm, &t, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!((convex_ratio(norm, &t, c(0.0, 0.0), &opts).unwrap() - 1.0).norm() < 1e-15);
    }
}

#[test]
fn convex_f_dual_paths() {
    let opts = SeriesOptions::default();
    let t = locate_zeros(&params(1.3, 0.9, 1.8, 0.4), 50, REFINE_TOL).unwrap();
    let d0 = t.psi_deriv()[0];
    for z in [c(0.5 * d0, 0.0), c(0.0, 0.8 * d0), c(-0.3 * d0, 0.6 * d0)] {
        let zs = convex_ratio(Normalization::F, &t, z, &opts).unwrap();
        let direct = convex_ratio_direct(Normalization::F, t.params(), z, &opts).unwrap();
        assert!((zs - direct.value).norm() < 1e-10, "{z}");
    }
}

#[test]
fn bessel_g_value() {
    // zg′/g = 1 − 2z J₁(2z)/J₀(2z) at z = 0.5
    let t = locate_zeros(&bessel(), 60, REFINE_TOL).unwrap();
    let v = star_ratio(Normalization::G, &t, c(0.5, 0.0)).unwrap();
    let want = 1.0 - 0.440_050_585_744_933_5 / 0.765_197_686_557_966_6;
    assert!((v.re - want).abs() < 1e-12, "{} vs {want}", v.re);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn real_points_give_real_values(x in -0.9f64..0.9, mu in 0.5f64..2.0, b in 0.3f64..1.5) {
        let p = params(mu, 0.8, 1.0, b);
        let opts = SeriesOptions::default();
        if let Ok(t) = locate_zeros(&p, 10, REFINE_TOL) {
            for norm in Normalization::ALL {
                let scale = if norm == Normalization::H { t.psi()[0] * t.psi()[0] } else { t.psi()[0] };
                let z = c(x * scale, 0.0);
                prop_assert_eq!(star_ratio(norm, &t, z).unwrap().im, 0.0);
                let w = convex_ratio_direct(norm, &p, c(x * 0.9 * t.psi_deriv()[0].min(scale), 0.0), &opts);
                if let Ok(w) = w {
                    prop_assert_eq!(w.value.im, 0.0);
                }
            }
        }
    }
}
