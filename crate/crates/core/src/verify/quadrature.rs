//! Integral means `∫₀^{2π} |f(re^{iθ})|^s dθ` by the trapezoid rule.
//!
//! The integrand is smooth and `2π`-periodic, so the equispaced rule converges
//! geometrically; for `s = 2` and a polynomial of degree `d` it is exact (up to
//! rounding) once the node count exceeds `2d`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AuditReport, Witness, INEQUALITY_SLACK};
use crate::classcheck::{extremal_fk, membership_iff_t};
use crate::janowski::QClassSpec;
use crate::series::{DiskFunction, NegativeCoeffSeries, Polynomial, TruncatedSeries};
use crate::{Error, Result};

pub const MIN_NODES: usize = 64;
pub const MAX_NODES: usize = 1 << 16;

/// Absolute change under node doubling accepted as converged.
const CONVERGENCE_TOL: f64 = 1e-10;

/// Boundary samples used to bound `max |ω|` for a Schwarz function.
const SCHWARZ_SAMPLES: usize = 4096;

/// Largest degree of `g ∘ ω` kept before truncation.
const MAX_COMPOSITION_DEGREE: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralMean {
    pub value: f64,
    /// Node count of the returned value.
    pub nodes: usize,
    pub converged: bool,
}

/// Fixed-node trapezoid rule for `∫₀^{2π} |f(re^{iθ})|^s dθ`.
pub fn trapezoid_circle_mean<F: DiskFunction + ?Sized>(f: &F, r: f64, s: f64, nodes: usize) -> f64 {
    let h = TAU / nodes as f64;
    let sum: f64 = (0..nodes)
        .map(|j| f.value(Complex64::from_polar(r, h * j as f64)).norm().powf(s))
        .sum();
    h * sum
}

/// Trapezoid rule starting at `nodes` and doubling until two successive values
/// agree to `10⁻¹⁰`, or [`MAX_NODES`] is reached (reported as unconverged).
pub fn integral_mean<F: DiskFunction + ?Sized>(f: &F, r: f64, s: f64, nodes: usize) -> Result<IntegralMean> {
    if nodes < MIN_NODES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_NODES} nodes, got {nodes}")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("radius must lie in (0, 1), got {r}")));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidArgument(format!("exponent s must be positive, got {s}")));
    }
    let mut n = nodes;
    let mut value = trapezoid_circle_mean(f, r, s, n);
    while n < MAX_NODES {
        let finer = trapezoid_circle_mean(f, r, s, 2 * n);
        n *= 2;
        let change = (finer - value).abs();
        value = finer;
        if change < CONVERGENCE_TOL {
            return Ok(IntegralMean { value, nodes: n, converged: true });
        }
    }
    Ok(IntegralMean { value, nodes: n, converged: false })
}

fn validate_schwarz(omega: &Polynomial) -> Result<()> {
    if omega.coeff(0) != Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidSchwarz(format!("ω(0) = {} ≠ 0", omega.coeff(0))));
    }
    let peak = (0..SCHWARZ_SAMPLES)
        .map(|j| omega.value(Complex64::from_polar(1.0, TAU * j as f64 / SCHWARZ_SAMPLES as f64)).norm())
        .fold(0.0, f64::max);
    if peak > 1.0 + 1e-12 {
        return Err(Error::InvalidSchwarz(format!("max |ω| on the unit circle is {peak} > 1")));
    }
    Ok(())
}

/// Numeric instance of Littlewood's subordination inequality: for `f = g ∘ ω`
/// with a Schwarz polynomial `ω`, `∫|f|^s ≤ ∫|g|^s` on `|z| = r`.
///
/// `worst_margin` is `∫|f|^s - ∫|g|^s` (nonpositive when the inequality holds).
pub fn littlewood_check(
    g: &TruncatedSeries,
    omega: &Polynomial,
    r: f64,
    s: f64,
    nodes: usize,
) -> Result<AuditReport> {
    validate_schwarz(omega)?;
    let g = g.to_polynomial();
    let full = g.compose(omega);
    let f = if full.degree() > MAX_COMPOSITION_DEGREE {
        let tail = full.coefficients()[MAX_COMPOSITION_DEGREE + 1..]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if tail >= 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "g ∘ ω has degree {} with tail {tail:e}; raise the truncation degree",
                full.degree()
            )));
        }
        full.truncate(MAX_COMPOSITION_DEGREE)
    } else {
        full
    };

    let lhs = integral_mean(&f, r, s, nodes)?;
    let rhs = integral_mean(&g, r, s, nodes)?;
    Ok(compare_means("littlewood", None, lhs, rhs))
}

fn compare_means(claim: &str, spec: Option<QClassSpec>, lhs: IntegralMean, rhs: IntegralMean) -> AuditReport {
    let diff = lhs.value - rhs.value;
    let detail = format!("lhs={} rhs={} nodes={}", lhs.value, rhs.value, lhs.nodes.max(rhs.nodes));
    if !(lhs.converged && rhs.converged) {
        return AuditReport::pass(claim, spec, diff)
            .with_verdict(super::Verdict::Unconverged)
            .with_detail(detail);
    }
    if diff > INEQUALITY_SLACK {
        let w = Witness::note(format!("integral mean exceeds its bound by {diff:e}"));
        AuditReport::fail(claim, spec, diff, w).with_detail(detail)
    } else {
        AuditReport::pass(claim, spec, diff).with_detail(detail)
    }
}

/// `∫|f|^s ≤ ∫|f_2|^s` on `|z| = r` for a member `f` of `TM`.
///
/// `worst_margin` is `∫|f|^s - ∫|f_2|^s`.
pub fn integral_mean_dominance(
    f: &NegativeCoeffSeries,
    spec: &QClassSpec,
    r: f64,
    s: f64,
    nodes: usize,
) -> Result<AuditReport> {
    let verdict = membership_iff_t(f, spec);
    if !verdict.member {
        return Err(Error::NotMember { slack: verdict.slack });
    }
    let f2 = extremal_fk(2, spec)?;
    let lhs = integral_mean(f, r, s, nodes)?;
    let rhs = integral_mean(&f2, r, s, nodes)?;
    Ok(compare_means("integral-mean-dominance", Some(*spec), lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{random_member, Verdict};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn reference() -> QClassSpec {
        QClassSpec::new(0.5, 2, 1, 1.0, 0.5, -0.5).unwrap()
    }

    #[test]
    fn identity_mean() {
        let f = TruncatedSeries::identity(1);
        for r in [0.2, 0.7] {
            let m = integral_mean(&f, r, 2.0, 64).unwrap();
            assert!(m.converged);
            assert!((m.value - TAU * r * r).abs() < 1e-14);
        }
    }

    #[test]
    fn two_term_parseval() {
        let c = 4.0 / 9.0;
        let f = TruncatedSeries::from_real_tail(&[-c]).unwrap();
        let r: f64 = 0.5;
        let m = integral_mean(&f, r, 2.0, 512).unwrap();
        let expected = TAU * (r * r + c * c * r.powi(4));
        assert!((m.value - expected).abs() < 1e-12);
        assert!((m.value - 1.648367).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_arguments() {
        let f = TruncatedSeries::identity(1);
        assert!(integral_mean(&f, 0.5, 2.0, 32).is_err());
        assert!(integral_mean(&f, 1.0, 2.0, 64).is_err());
        assert!(integral_mean(&f, 0.5, 0.0, 64).is_err());
    }

    #[test]
    fn littlewood_examples() {
        let g = TruncatedSeries::from_real_tail(&[0.0, 0.3]).unwrap();
        let same = littlewood_check(&g, &Polynomial::from_real(&[0.0, 1.0]), 0.7, 2.0, 512).unwrap();
        assert_eq!(same.verdict, Verdict::Pass);
        assert!(same.worst_margin.abs() < 1e-14);

        let sq = littlewood_check(&g, &Polynomial::from_real(&[0.0, 0.0, 1.0]), 0.7, 2.0, 512).unwrap();
        assert_eq!(sq.verdict, Verdict::Pass);
        assert!(sq.worst_margin < 0.0);

        // ω = z/2 shrinks every coefficient: strict inequality for non-constant g.
        let half = littlewood_check(&g, &Polynomial::from_real(&[0.0, 0.5]), 0.7, 2.0, 512).unwrap();
        assert!(half.worst_margin < -1e-3);

        assert!(littlewood_check(&g, &Polynomial::from_real(&[0.1, 0.5]), 0.7, 2.0, 512).is_err());
        assert!(littlewood_check(&g, &Polynomial::from_real(&[0.0, 1.2]), 0.7, 2.0, 512).is_err());
    }

    #[test]
    fn dominance_examples() {
        let spec = reference();
        let f2 = extremal_fk(2, &spec).unwrap();
        let eq = integral_mean_dominance(&f2, &spec, 0.6, 1.0, 512).unwrap();
        assert_eq!(eq.verdict, Verdict::Pass);
        assert_eq!(eq.worst_margin, 0.0);

        let id = integral_mean_dominance(&NegativeCoeffSeries::identity(), &spec, 0.5, 2.0, 512).unwrap();
        let c: f64 = 4.0 / 9.0;
        assert!((id.worst_margin + TAU * c * c * 0.5f64.powi(4)).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let f = random_member(&spec, 32, &mut rng);
        assert!(integral_mean_dominance(&f, &spec, 0.8, 1.0, 512).unwrap().passed());

        let outside = NegativeCoeffSeries::single_term(2, 0.6).unwrap();
        assert!(integral_mean_dominance(&outside, &spec, 0.8, 1.0, 512).is_err());
    }
}
