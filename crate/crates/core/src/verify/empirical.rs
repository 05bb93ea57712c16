use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{AuditReport, Verdict, Witness, INEQUALITY_SLACK, OPEN_CONDITION_BAND};
use crate::bounds::{distortion_coefficient, distortion_f, distortion_fprime, radius, RadiusKind};
use crate::classcheck::{coefficient_bound, extremal_fk, recompose};
use crate::janowski::QClassSpec;
use crate::series::{DiskFunction, NegativeCoeffSeries, TruncatedSeries};
use crate::Result;

/// Angular samples per circle in [`radius_empirical_check`].
pub const RADIUS_SAMPLES: usize = 512;

/// Uniform point of the simplex `{η ≥ 0, Σ η = 1}` of dimension `n`.
fn random_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Random member of `TM` of the given degree, as a convex combination of the
/// extremal functions `f_1, …, f_degree` with uniformly distributed weights.
pub fn random_member<R: Rng + ?Sized>(spec: &QClassSpec, degree: usize, rng: &mut R) -> NegativeCoeffSeries {
    recompose(&random_simplex(rng, degree.max(1)), spec).expect("simplex weights are valid")
}

/// Random complex-coefficient series satisfying the sufficient coefficient
/// condition: `a_k = η_k (A - B)/μ(k) · e^{iφ_k}` with simplex weights `η`.
pub fn random_sufficient_member<R: Rng + ?Sized>(spec: &QClassSpec, degree: usize, rng: &mut R) -> TruncatedSeries {
    let weights = random_simplex(rng, degree.max(1));
    let tail: Vec<Complex64> = weights
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &eta)| Complex64::from_polar(eta * coefficient_bound(i + 1, spec), rng.gen_range(0.0..TAU)))
        .collect();
    TruncatedSeries::from_tail(&tail).expect("finite coefficients")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionCheckConfig {
    pub samples: usize,
    pub degree: usize,
    pub radii: Vec<f64>,
    pub angular: usize,
}

impl Default for DistortionCheckConfig {
    fn default() -> Self {
        Self {
            samples: 100,
            degree: crate::series::DEFAULT_DEGREE,
            radii: (1..=9).map(|i| i as f64 / 10.0).collect(),
            angular: 256,
        }
    }
}

/// Envelope containment for `|f|` and `|f′|` over random members, plus
/// attainment of both envelopes by `f_2` on the real axis.
///
/// `worst_margin` is the smallest envelope slack seen (negative = outside).
pub fn distortion_empirical_check<R: Rng + ?Sized>(
    spec: &QClassSpec,
    config: &DistortionCheckConfig,
    rng: &mut R,
) -> Result<AuditReport> {
    let claim = "distortion";
    let envelopes = config
        .radii
        .iter()
        .map(|&r| Ok((r, distortion_f(r, spec)?, distortion_fprime(r, spec)?)))
        .collect::<Result<Vec<_>>>()?;

    let mut worst = f64::INFINITY;
    let mut witness = None;
    for sample in 0..config.samples {
        let f = random_member(spec, config.degree, rng);
        for (r, env_f, env_fp) in &envelopes {
            for j in 0..config.angular {
                let z = Complex64::from_polar(*r, TAU * j as f64 / config.angular as f64);
                let slack_f = env_f.slack(f.value(z).norm());
                let slack_fp = env_fp.slack(f.derivative(z).norm());
                let slack = slack_f.min(slack_fp);
                if slack < worst {
                    worst = slack;
                    if slack < -INEQUALITY_SLACK {
                        let which = if slack_f <= slack_fp { "|f|" } else { "|f'|" };
                        witness = Some(Witness::at(z, format!("{which} outside envelope for sample {sample}")));
                    }
                }
            }
        }
    }

    // Sharpness: |f₂(-r)| = r + c r², |f₂(r)| = |r - c r²|, f₂′(r) = 1 - 2cr, |f₂′(-r)| = 1 + 2cr.
    let c = distortion_coefficient(spec);
    let f2 = extremal_fk(2, spec)?;
    let mut sharp_err: f64 = 0.0;
    for &r in &config.radii {
        let (plus, minus) = (Complex64::new(r, 0.0), Complex64::new(-r, 0.0));
        sharp_err = sharp_err
            .max((f2.value(minus).norm() - (r + c * r * r)).abs())
            .max((f2.value(plus).norm() - (r - c * r * r).abs()).abs())
            .max((f2.derivative(plus).re - (1.0 - 2.0 * c * r)).abs())
            .max((f2.derivative(minus).norm() - (1.0 + 2.0 * c * r)).abs());
    }

    let detail = format!("samples={} sharpness_error={sharp_err:e}", config.samples);
    if let Some(w) = witness {
        return Ok(AuditReport::fail(claim, Some(*spec), worst, w).with_detail(detail));
    }
    if sharp_err > INEQUALITY_SLACK {
        let w = Witness::note(format!("extremal f2 misses its envelope by {sharp_err:e}"));
        return Ok(AuditReport::fail(claim, Some(*spec), worst, w).with_detail(detail));
    }
    Ok(AuditReport::pass(claim, Some(*spec), worst).with_detail(detail))
}

/// The quantity each radius controls: `|zf′/f - 1|`, `|zf″/f′|` or `|f′ - 1|`.
pub(crate) fn radius_quantity<F: DiskFunction>(kind: RadiusKind, f: &F, z: Complex64) -> f64 {
    match kind {
        RadiusKind::Starlike => (z * f.derivative(z) / f.value(z) - 1.0).norm(),
        RadiusKind::Convex => (z * f.second_derivative(z) / f.derivative(z)).norm(),
        RadiusKind::CloseToConvex => (f.derivative(z) - 1.0).norm(),
    }
}

/// Largest value of [`radius_quantity`] on `|z| = r` over `samples` angles, with its location.
pub(crate) fn circle_max<F: DiskFunction>(kind: RadiusKind, f: &F, r: f64, samples: usize) -> (f64, Complex64) {
    (0..samples)
        .map(|j| {
            let z = Complex64::from_polar(r, TAU * j as f64 / samples as f64);
            let v = radius_quantity(kind, f, z);
            (if v.is_nan() { f64::INFINITY } else { v }, z)
        })
        .fold((f64::NEG_INFINITY, Complex64::new(0.0, 0.0)), |best, cur| if cur.0 > best.0 { cur } else { best })
}

/// Checks the computed radius against the extremal function `f_{k*}`: the
/// defining inequality must hold at `0.99 · radius` and, when the radius is
/// below 1, fail just outside it. A radius within [`OPEN_CONDITION_BAND`] of 1
/// leaves no room for an outer probe inside the disk and is treated as 1.
///
/// The outer probe sits at `min(1.01 · radius, 0.999)`, or midway between the
/// radius and 1 when the radius already exceeds 0.999. `worst_margin` is the
/// controlled quantity divided by `1 - ψ` at the inner probe.
pub fn radius_empirical_check(kind: RadiusKind, psi: f64, spec: &QClassSpec, k_max: usize) -> Result<AuditReport> {
    let claim = format!("radius-{kind}");
    let res = radius(kind, psi, spec, k_max)?;
    let mut detail = format!(
        "radius={} unclamped_inf={} minimizing_k={}",
        res.radius, res.unclamped_inf, res.minimizing_k
    );
    if kind != RadiusKind::Starlike {
        detail.push_str(" formula=derived-from-proof-obligation");
    }
    if !res.converged {
        return Ok(AuditReport::pass(claim, Some(*spec), f64::NAN)
            .with_verdict(Verdict::Unconverged)
            .with_detail(detail));
    }

    let f = extremal_fk(res.minimizing_k, spec)?;
    let limit = 1.0 - psi;
    let inner = 0.99 * res.radius;
    let (inside_max, inside_at) = circle_max(kind, &f, inner, RADIUS_SAMPLES);
    let worst = inside_max / limit;
    if inside_max > limit {
        let w = Witness::at(inside_at, format!("inequality fails inside the radius (r = {inner})"));
        return Ok(AuditReport::fail(claim, Some(*spec), worst, w).with_detail(detail));
    }

    if res.radius < 1.0 - OPEN_CONDITION_BAND {
        let mut outer = (1.01 * res.radius).min(0.999);
        if outer <= res.radius {
            outer = 0.5 * (1.0 + res.radius);
        }
        let (outside_max, _) = circle_max(kind, &f, outer, RADIUS_SAMPLES);
        if outside_max <= limit {
            let w = Witness::at(
                Complex64::new(outer, 0.0),
                format!("radius not sharp: inequality still holds at r = {outer}"),
            );
            return Ok(AuditReport::fail(claim, Some(*spec), worst, w).with_detail(detail));
        }
    }
    Ok(AuditReport::pass(claim, Some(*spec), worst).with_detail(detail))
}
