//! Where the stated coefficient criteria and bounds stop being exact.

use std::f64::consts::TAU;

use num_complex::Complex64;
use qjanowski::bounds::distortion_fprime;
use qjanowski::classcheck::{coefficient_bound, extremal_fk, membership_iff_t};
use qjanowski::janowski::QClassSpec;
use qjanowski::qcore::q_factorial;
use qjanowski::series::{DiskFunction, NegativeCoeffSeries};
use qjanowski::verify::{default_spec_grid, necessity_witness_search, DEFAULT_WITNESS_RMAX};

fn witness(spec: &QClassSpec, k: usize, ratio: f64) -> bool {
    let f = NegativeCoeffSeries::single_term(k, ratio * coefficient_bound(k, spec)).unwrap();
    assert!(!membership_iff_t(&f, spec).member);
    necessity_witness_search(&f, spec, DEFAULT_WITNESS_RMAX).unwrap().is_some()
}

#[test]
fn second_coefficient_violations_have_witnesses_unless_b_and_alpha_positive() {
    for spec in default_spec_grid() {
        let expected = !(spec.b > 0.0 && spec.alpha > 0.0);
        assert_eq!(witness(&spec, 2, 1.05), expected, "{spec}");
        assert!(witness(&spec, 2, 1.5), "{spec}");
    }
}

#[test]
fn higher_coefficients_leave_a_factorial_gap() {
    // The weight of b_k carries [k-1, q]! more than the operator does, so the
    // true class boundary sits at that multiple of the coefficient bound.
    let spec = QClassSpec::new(0.5, 2, 1, 1.0, 0.5, -0.5).unwrap();
    for k in [3usize, 4] {
        let gap = q_factorial((k - 1) as u32, spec.q_param());
        assert!(!witness(&spec, k, 0.97 * gap), "k={k}");
        assert!(witness(&spec, k, 1.03 * gap), "k={k}");
    }
}

#[test]
fn derivative_upper_bound_fails_near_the_boundary() {
    let spec = QClassSpec::new(0.3, 1, 0, 0.0, 1.0, -1.0).unwrap();
    let f3 = extremal_fk(3, &spec).unwrap();
    let peak = |r: f64| {
        (0..4096)
            .map(|j| f3.derivative(Complex64::from_polar(r, TAU * j as f64 / 4096.0)).norm())
            .fold(0.0, f64::max)
    };
    assert!(peak(0.9) <= distortion_fprime(0.9, &spec).unwrap().upper);
    let r = 0.95;
    let upper = distortion_fprime(r, &spec).unwrap().upper;
    assert!(peak(r) > upper + 0.03, "{} vs {upper}", peak(r));
}
