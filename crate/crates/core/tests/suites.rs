mod common;

use common::{bessel, params, REFINE_TOL};
use wright_radii::{cross_oracle_suite, lemma_inequality_suite, locate_zeros};

#[test]
fn lemma_suite_seed_42() {
    let s = lemma_inequality_suite(42, 10_000);
    assert_eq!(s.two_pole.trials, 10_000);
    assert_eq!(s.violations(), 0, "{s:?}");
}

#[test]
fn lemma_suite_is_deterministic() {
    assert_eq!(lemma_inequality_suite(9, 300), lemma_inequality_suite(9, 300));
}

#[test]
fn cross_oracle_bessel_and_half() {
    for p in [bessel(), params(1.0, 0.5, 1.0, 0.5)] {
        let t = locate_zeros(&p, 60, REFINE_TOL).unwrap();
        let s = cross_oracle_suite(&t, 1, 200).unwrap();
        assert!(s.worst() <= 1e-9, "{p:?}: {s:?}");
        assert!(s.product_monotone, "{:?}", s.product_errors);
    }
}

#[test]
fn cross_oracle_needs_fifty_zeros() {
    let t = locate_zeros(&bessel(), 49, REFINE_TOL).unwrap();
    assert!(cross_oracle_suite(&t, 1, 10).is_err());
}
