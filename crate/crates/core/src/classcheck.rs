//! Coefficient criterion for the class and its consequences.
//!
//! The weight attached to the `k`-th coefficient is
//!
//! ```text
//! μ(k) = (1 + α(1 + |B|)) ([m+1,q]_{k-1} - [l+1,q]_{k-1}) + |B [m+1,q]_{k-1} - A [l+1,q]_{k-1}|
//! ```
//!
//! and `Σ μ(k) |a_k| ≤ A - B` is sufficient for membership in `M_{m,l}(q, α, A, B)`.
//! For negative-coefficient functions the same sum gives the sharp bound
//! `b_k ≤ (A - B)/μ(k)`, the extremal functions `f_k`, and the convex
//! decomposition `f = Σ η_k f_k`.

use serde::{Deserialize, Serialize};

use crate::janowski::QClassSpec;
use crate::qcore::q_pochhammer_int;
use crate::series::{NegativeCoeffSeries, TruncatedSeries};
use crate::{Error, Result};

/// Relative slack (in units of `A - B`) below zero still counted as membership.
/// Absorbs the rounding in `μ(k) · (A - B)/μ(k)` for the extremal functions.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-12;

/// Tolerance on `Σ η_k = 1` accepted by [`recompose`].
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-10;

/// `μ(k)` for `k ≥ 2`. Strictly positive for a valid spec since `m > l`.
pub fn mu(k: usize, spec: &QClassSpec) -> f64 {
    debug_assert!(k >= 2, "μ is defined for k ≥ 2");
    let q = spec.q_param();
    let steps = (k - 1) as u32;
    let upper = q_pochhammer_int(spec.m + 1, steps, q);
    let lower = q_pochhammer_int(spec.l + 1, steps, q);
    (1.0 + spec.alpha * (1.0 + spec.b.abs())) * (upper - lower) + (spec.b * upper - spec.a * lower).abs()
}

/// `μ(2), …, μ(N)` for one spec, computed once and shared read-only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuProfile {
    pub spec: QClassSpec,
    /// `values[i]` is `μ(i + 2)`.
    pub values: Vec<f64>,
}

impl MuProfile {
    pub fn new(spec: &QClassSpec, degree: usize) -> Self {
        Self {
            spec: *spec,
            values: (2..=degree.max(1)).map(|k| mu(k, spec)).collect(),
        }
    }

    /// `μ(k)`, computed on demand past the stored range.
    pub fn get(&self, k: usize) -> f64 {
        self.values
            .get(k.wrapping_sub(2))
            .copied()
            .unwrap_or_else(|| mu(k, &self.spec))
    }

    /// First `k` with `μ(k + 1) < μ(k)`, if any.
    pub fn first_decrease(&self) -> Option<usize> {
        self.values
            .windows(2)
            .position(|w| w[1] < w[0])
            .map(|i| i + 2)
    }
}

/// Outcome of the coefficient test, with the slack `(A - B) - Σ μ(k)|a_k|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub member: bool,
    pub slack: f64,
}

impl MembershipVerdict {
    fn from_sum(sum: f64, spec: &QClassSpec) -> Self {
        let slack = spec.width() - sum;
        Self {
            member: slack >= -MEMBERSHIP_TOLERANCE * spec.width(),
            slack,
        }
    }
}

/// `Σ_{k≥2} μ(k) |a_k| ≤ A - B`. A pass proves `f ∈ M_{m,l}(q, α, A, B)`; a
/// failure proves nothing for general complex coefficients.
pub fn membership_sufficient(f: &TruncatedSeries, spec: &QClassSpec) -> MembershipVerdict {
    let sum: f64 = (2..=f.degree()).map(|k| mu(k, spec) * f.coeff(k).norm()).sum();
    MembershipVerdict::from_sum(sum, spec)
}

/// The coefficient test for `f(z) = z - Σ b_k z^k`, `b_k ≥ 0`.
pub fn membership_iff_t(f: &NegativeCoeffSeries, spec: &QClassSpec) -> MembershipVerdict {
    let sum: f64 = f.terms().map(|(k, b)| mu(k, spec) * b).sum();
    MembershipVerdict::from_sum(sum, spec)
}

/// Sharp bound `b_k ≤ (A - B)/μ(k)`.
pub fn coefficient_bound(k: usize, spec: &QClassSpec) -> f64 {
    spec.width() / mu(k, spec)
}

/// `f_1(z) = z` and `f_k(z) = z - (A - B)/μ(k) · z^k` for `k ≥ 2`.
pub fn extremal_fk(k: usize, spec: &QClassSpec) -> Result<NegativeCoeffSeries> {
    match k {
        0 => Err(Error::InvalidArgument("extremal index must be at least 1".into())),
        1 => Ok(NegativeCoeffSeries::identity()),
        _ => NegativeCoeffSeries::single_term(k, coefficient_bound(k, spec)),
    }
}

/// Weights `(η_1, η_2, …, η_N)` with `f = Σ η_k f_k`:
/// `η_k = μ(k) b_k / (A - B)` and `η_1 = 1 - Σ_{k≥2} η_k`.
pub fn decompose(f: &NegativeCoeffSeries, spec: &QClassSpec) -> Result<Vec<f64>> {
    let verdict = membership_iff_t(f, spec);
    if !verdict.member {
        return Err(Error::NotMember { slack: verdict.slack });
    }
    let width = spec.width();
    let tail: Vec<f64> = f.terms().map(|(k, b)| mu(k, spec) * b / width).collect();
    // η_1 can come out a few ulps negative on the boundary of the class.
    let head = (1.0 - tail.iter().sum::<f64>()).max(0.0);
    let mut weights = Vec::with_capacity(tail.len() + 1);
    weights.push(head);
    weights.extend(tail);
    Ok(weights)
}

/// `Σ η_k f_k` for nonnegative weights `(η_1, η_2, …)` summing to one.
pub fn recompose(weights: &[f64], spec: &QClassSpec) -> Result<NegativeCoeffSeries> {
    if weights.is_empty() {
        return Err(Error::InvalidWeights("no weights given".into()));
    }
    if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidWeights(format!(
            "weight η_{} = {} is negative or not finite",
            i + 1,
            weights[i]
        )));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
    }
    let magnitudes = weights
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &eta)| eta * coefficient_bound(i + 1, spec))
        .collect();
    NegativeCoeffSeries::new(magnitudes)
}

/// Machine-readable summary of the coefficient test for one series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub member: bool,
    pub slack: f64,
    pub mu: Vec<f64>,
    pub bound_per_k: Vec<f64>,
}

/// Runs the exact test when `f` has the negative-coefficient form, the
/// sufficient test otherwise.
pub fn class_report(f: &TruncatedSeries, spec: &QClassSpec) -> ClassReport {
    let verdict = match f.as_negative_coeff() {
        Some(t) => membership_iff_t(&t, spec),
        None => membership_sufficient(f, spec),
    };
    let profile = MuProfile::new(spec, f.degree());
    let bound_per_k = profile.values.iter().map(|m| spec.width() / m).collect();
    ClassReport {
        member: verdict.member,
        slack: verdict.slack,
        mu: profile.values,
        bound_per_k,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn reference() -> QClassSpec {
        QClassSpec::new(0.5, 2, 1, 1.0, 0.5, -0.5).unwrap()
    }

    fn grid() -> Vec<QClassSpec> {
        let mut out = Vec::new();
        for q in [0.3, 0.5, 0.7, 0.9] {
            for (m, l) in [(1, 0), (2, 1), (3, 1)] {
                for alpha in [0.0, 1.0, 2.0] {
                    for (a, b) in [(1.0, -1.0), (0.5, -0.5), (0.75, 0.25)] {
                        out.push(QClassSpec::new(q, m, l, alpha, a, b).unwrap());
                    }
                }
            }
        }
        out
    }

    #[test]
    fn mu_examples() {
        let spec = reference();
        assert!((mu(2, &spec) - 2.25).abs() < 1e-14);
        assert!((mu(3, &spec) - 4.59375).abs() < 1e-13);

        // α = 0, A = 1, B = -1, l = 0, m = 1: B[·] - A[·] < 0, so
        // μ(k) = ([2]_{k-1} - [1]_{k-1}) + ([2]_{k-1} + [1]_{k-1}).
        let q = 0.4;
        let spec = QClassSpec::new(q, 1, 0, 0.0, 1.0, -1.0).unwrap();
        let qq = spec.q_param();
        for k in 2..10 {
            let p2 = q_pochhammer_int(2, (k - 1) as u32, qq);
            let p1 = q_pochhammer_int(1, (k - 1) as u32, qq);
            let expected = (p2 - p1) + (p2 + p1);
            assert!((mu(k, &spec) - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn membership_examples() {
        let spec = reference();
        let id = TruncatedSeries::identity(5);
        assert_eq!(membership_sufficient(&id, &spec), MembershipVerdict { member: true, slack: 1.0 });

        let tight = TruncatedSeries::from_real_tail(&[-4.0 / 9.0]).unwrap();
        let v = membership_sufficient(&tight, &spec);
        assert!(v.member && v.slack.abs() < 1e-15);

        let over = TruncatedSeries::from_real_tail(&[-0.6]).unwrap();
        let v = membership_sufficient(&over, &spec);
        assert!(!v.member && (v.slack + 0.35).abs() < 1e-14);

        // Complex coefficients enter through their modulus.
        let rotated = TruncatedSeries::from_tail(&[Complex64::from_polar(4.0 / 9.0, 2.0)]).unwrap();
        assert!(membership_sufficient(&rotated, &spec).slack.abs() < 1e-14);
    }

    #[test]
    fn membership_iff_t_examples() {
        let spec = reference();
        assert!(membership_iff_t(&NegativeCoeffSeries::new(vec![0.0; 6]).unwrap(), &spec).member);

        let f2 = extremal_fk(2, &spec).unwrap();
        let v = membership_iff_t(&f2, &spec);
        assert!(v.member && v.slack.abs() < 1e-12);

        let over = NegativeCoeffSeries::single_term(2, coefficient_bound(2, &spec) * 1.01).unwrap();
        assert!(!membership_iff_t(&over, &spec).member);
    }

    #[test]
    fn coefficient_bound_examples() {
        let spec = reference();
        assert!((coefficient_bound(2, &spec) - 4.0 / 9.0).abs() < 1e-15);
        assert!((coefficient_bound(3, &spec) - 1.0 / 4.59375).abs() < 1e-15);
        assert!((coefficient_bound(3, &spec) - 0.21769).abs() < 1e-5);
    }

    #[test]
    fn extremal_examples() {
        let spec = reference();
        assert_eq!(extremal_fk(1, &spec).unwrap(), NegativeCoeffSeries::identity());
        assert!(extremal_fk(0, &spec).is_err());
        let f2 = extremal_fk(2, &spec).unwrap();
        assert_eq!(f2.degree(), 2);
        assert!((f2.magnitude(2) - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn extremal_slack_is_zero_on_grid() {
        for spec in grid() {
            for k in 2..=8 {
                let v = membership_iff_t(&extremal_fk(k, &spec).unwrap(), &spec);
                assert!(v.member && v.slack.abs() <= 1e-12, "{spec} k={k} {v:?}");
            }
        }
    }

    #[test]
    fn mu_nondecreasing_on_grid() {
        for spec in grid() {
            assert_eq!(MuProfile::new(&spec, 64).first_decrease(), None, "{spec}");
        }
    }

    #[test]
    fn mu_profile_lookup() {
        let spec = reference();
        let profile = MuProfile::new(&spec, 4);
        assert_eq!(profile.values.len(), 3);
        assert_eq!(profile.get(3), mu(3, &spec));
        assert_eq!(profile.get(9), mu(9, &spec));
    }

    #[test]
    fn decompose_examples() {
        let spec = reference();
        assert_eq!(decompose(&NegativeCoeffSeries::identity(), &spec).unwrap(), vec![1.0]);

        let f = NegativeCoeffSeries::single_term(2, 0.2).unwrap();
        let w = decompose(&f, &spec).unwrap();
        assert!((w[0] - 0.55).abs() < 1e-15 && (w[1] - 0.45).abs() < 1e-15);

        let f3 = extremal_fk(3, &spec).unwrap();
        let w = decompose(&f3, &spec).unwrap();
        assert_eq!(w.len(), 3);
        assert!(w[0].abs() < 1e-15 && w[1] == 0.0 && (w[2] - 1.0).abs() < 1e-15);

        let outside = NegativeCoeffSeries::single_term(2, 0.6).unwrap();
        assert!(matches!(decompose(&outside, &spec), Err(Error::NotMember { .. })));
    }

    #[test]
    fn recompose_examples() {
        let spec = reference();
        assert_eq!(recompose(&[1.0], &spec).unwrap(), NegativeCoeffSeries::identity());
        assert_eq!(recompose(&[0.0, 1.0], &spec).unwrap(), extremal_fk(2, &spec).unwrap());

        let third = 1.0 / 3.0;
        let f = recompose(&[third, third, third], &spec).unwrap();
        let v = membership_iff_t(&f, &spec);
        assert!((v.slack - spec.width() / 3.0).abs() < 1e-15);

        assert!(recompose(&[0.5, 0.6], &spec).is_err());
        assert!(recompose(&[1.2, -0.2], &spec).is_err());
        assert!(recompose(&[], &spec).is_err());
    }

    #[test]
    fn class_report_picks_test() {
        let spec = reference();
        let report = class_report(&extremal_fk(2, &spec).unwrap().to_series(), &spec);
        assert!(report.member);
        assert_eq!(report.mu.len(), 1);
        assert!((report.bound_per_k[0] - 4.0 / 9.0).abs() < 1e-15);
    }

    fn simplex(raw: Vec<f64>) -> Vec<f64> {
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / total).collect()
    }

    proptest! {
        #[test]
        fn decompose_inverts_recompose(raw in proptest::collection::vec(0.01f64..1.0, 1..16), idx in 0usize..108) {
            let spec = grid()[idx];
            let weights = simplex(raw);
            let f = recompose(&weights, &spec).unwrap();
            let back = decompose(&f, &spec).unwrap();
            prop_assert_eq!(back.len(), weights.len());
            for (a, b) in back.iter().zip(&weights) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            let again = recompose(&back, &spec).unwrap();
            for (a, b) in again.magnitudes().iter().zip(f.magnitudes()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn convex_combination_stays_member(
            wf in proptest::collection::vec(0.01f64..1.0, 6),
            wg in proptest::collection::vec(0.01f64..1.0, 6),
            t in 0.0f64..=1.0,
            idx in 0usize..108,
        ) {
            let spec = grid()[idx];
            let f = recompose(&simplex(wf), &spec).unwrap();
            let g = recompose(&simplex(wg), &spec).unwrap();
            let mix: Vec<f64> = f.magnitudes().iter().zip(g.magnitudes()).map(|(a, b)| t * a + (1.0 - t) * b).collect();
            let v = membership_iff_t(&NegativeCoeffSeries::new(mix).unwrap(), &spec);
            prop_assert!(v.slack >= -1e-12);
        }

        #[test]
        fn bound_nonincreasing_in_k(idx in 0usize..108, k in 2usize..40) {
            let spec = grid()[idx];
            prop_assert!(coefficient_bound(k + 1, &spec) <= coefficient_bound(k, &spec));
        }
    }
}
