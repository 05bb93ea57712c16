//! Distortion envelopes and radii for `TM_{m,l}(q, α, A, B)`.
//!
//! With `c = (A - B)/μ(2)` every member satisfies, on `|z| = r`,
//!
//! ```text
//! r - c r² ≤ |f(z)| ≤ r + c r²,      1 - 2c r ≤ |f′(z)| ≤ 1 + 2c r,
//! ```
//!
//! with equality for `f_2(z) = z - c z²` on the real axis.
//!
//! Each radius is `min(1, inf_{k≥2} candidate(k))`, where `candidate(k)` is the
//! largest `r` at which `r^{k-1}` times the kind's coefficient weight stays within
//! `μ(k)/(A - B)`:
//!
//! | kind | inequality on `|z| = r` | `candidate(k)^{k-1}` |
//! |------|-------------------------|----------------------|
//! | starlike | `|zf′/f - 1| ≤ 1 - ψ` | `μ(k)/(A-B) · (1-ψ)/(k-ψ)` |
//! | convex | `|zf″/f′| ≤ 1 - ψ` | `μ(k)/(A-B) · (1-ψ)/(k(k-ψ))` |
//! | close-to-convex | `|f′ - 1| ≤ 1 - ψ` | `μ(k)/(A-B) · (1-ψ)/k` |
//!
//! `μ(k)^{1/(k-1)}` tends to `1/(1 - q) > 1`, so every candidate sequence
//! eventually exceeds 1 and the clamped radius is reached at a finite `k`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classcheck::{coefficient_bound, mu};
use crate::janowski::QClassSpec;
use crate::{Error, Result};

pub const DEFAULT_K_MAX: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeOrder {
    /// Bounds on `|f|`.
    Function,
    /// Bounds on `|f′|`.
    Derivative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionEnvelope {
    pub r: f64,
    pub lower: f64,
    pub upper: f64,
    pub order: EnvelopeOrder,
    /// The closed-form lower bound was negative and has been replaced by 0.
    pub lower_clamped: bool,
}

impl DistortionEnvelope {
    fn new(r: f64, raw_lower: f64, upper: f64, order: EnvelopeOrder) -> Self {
        Self {
            r,
            lower: raw_lower.max(0.0),
            upper,
            order,
            lower_clamped: raw_lower < 0.0,
        }
    }

    /// Distance of `value` from the envelope; negative when outside.
    pub fn slack(&self, value: f64) -> f64 {
        (value - self.lower).min(self.upper - value)
    }
}

fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("radius must satisfy 0 ≤ r < 1, got {r}")))
    }
}

/// `c = (A - B)/μ(2)`, the second coefficient of the extremal `f_2`.
pub fn distortion_coefficient(spec: &QClassSpec) -> f64 {
    coefficient_bound(2, spec)
}

/// `r ∓ c r²`.
pub fn distortion_f(r: f64, spec: &QClassSpec) -> Result<DistortionEnvelope> {
    check_radius(r)?;
    let c = distortion_coefficient(spec);
    Ok(DistortionEnvelope::new(r, r - c * r * r, r + c * r * r, EnvelopeOrder::Function))
}

/// `1 ∓ 2c r`.
pub fn distortion_fprime(r: f64, spec: &QClassSpec) -> Result<DistortionEnvelope> {
    check_radius(r)?;
    let c = distortion_coefficient(spec);
    Ok(DistortionEnvelope::new(r, 1.0 - 2.0 * c * r, 1.0 + 2.0 * c * r, EnvelopeOrder::Derivative))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusKind {
    Starlike,
    Convex,
    CloseToConvex,
}

impl RadiusKind {
    pub const ALL: [RadiusKind; 3] = [RadiusKind::Starlike, RadiusKind::Convex, RadiusKind::CloseToConvex];

    /// Weight `D(k)` in `candidate(k)^{k-1} = μ(k)/(A-B) · (1-ψ)/D(k)`.
    fn weight(self, k: usize, psi: f64) -> f64 {
        let k = k as f64;
        match self {
            RadiusKind::Starlike => k - psi,
            RadiusKind::Convex => k * (k - psi),
            RadiusKind::CloseToConvex => k,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RadiusKind::Starlike => "starlike",
            RadiusKind::Convex => "convex",
            RadiusKind::CloseToConvex => "close-to-convex",
        }
    }
}

impl fmt::Display for RadiusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RadiusKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RadiusKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown radius kind `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub kind: RadiusKind,
    pub psi: f64,
    /// `min(1, unclamped_inf)`.
    pub radius: f64,
    pub unclamped_inf: f64,
    pub minimizing_k: usize,
    /// `candidates[i]` is `candidate(i + 2)`.
    pub candidates: Vec<f64>,
    /// False when the candidates are still decreasing below 1 at `k_max`.
    pub converged: bool,
}

/// `candidate(k)` for one kind; computed in log space so large `μ(k)` never overflows.
pub fn radius_candidate(kind: RadiusKind, k: usize, psi: f64, spec: &QClassSpec) -> f64 {
    let log_base = mu(k, spec).ln() - spec.width().ln() + (1.0 - psi).ln() - kind.weight(k, psi).ln();
    (log_base / (k - 1) as f64).exp()
}

pub fn radius(kind: RadiusKind, psi: f64, spec: &QClassSpec, k_max: usize) -> Result<RadiusResult> {
    if !(0.0..1.0).contains(&psi) {
        return Err(Error::InvalidArgument(format!("order psi must satisfy 0 ≤ psi < 1, got {psi}")));
    }
    if k_max < 2 {
        return Err(Error::InvalidArgument(format!("k_max must be at least 2, got {k_max}")));
    }
    let candidates: Vec<f64> = (2..=k_max).map(|k| radius_candidate(kind, k, psi, spec)).collect();
    let (argmin, &unclamped_inf) = candidates
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("k_max ≥ 2 gives at least one candidate");

    let n = candidates.len();
    let still_falling = n >= 2 && candidates[n - 1] < candidates[n - 2];
    let converged = !(still_falling && candidates[n - 1] < 1.0);

    Ok(RadiusResult {
        kind,
        psi,
        radius: unclamped_inf.min(1.0),
        unclamped_inf,
        minimizing_k: argmin + 2,
        candidates,
        converged,
    })
}

/// Radius of starlikeness of order `psi`.
pub fn radius_starlike(psi: f64, spec: &QClassSpec, k_max: usize) -> Result<RadiusResult> {
    radius(RadiusKind::Starlike, psi, spec, k_max)
}

/// Radius of convexity of order `psi`.
pub fn radius_convex(psi: f64, spec: &QClassSpec, k_max: usize) -> Result<RadiusResult> {
    radius(RadiusKind::Convex, psi, spec, k_max)
}

/// Radius of close-to-convexity of order `psi`.
pub fn radius_close_to_convex(psi: f64, spec: &QClassSpec, k_max: usize) -> Result<RadiusResult> {
    radius(RadiusKind::CloseToConvex, psi, spec, k_max)
}
