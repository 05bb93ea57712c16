//! Class parameters, the Janowski target domain `Ω[A, B]`, and the
//! subordination functional
//!
//! ```text
//! p(z) = w(z) - α |w(z) - 1|,   w(z) = D_q^m f(z) / D_q^l f(z).
//! ```
//!
//! Membership of `f` in `M_{m,l}(q, α, A, B)` asks `p ≺ (1 + Az)/(1 + Bz)`. All
//! checks here are pointwise: `p(z) ∈ Ω[A, B]`, equivalently
//! `|p(z) - 1| < |A - B p(z)|`. The modulus term makes `p` non-analytic in
//! general, so nothing relies on analyticity of `p`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qcore::QParam;
use crate::series::{DiskFunction, Polynomial, TruncatedSeries};
use crate::{Error, Result};

/// The parameter tuple `(q, m, l, α, A, B)`.
///
/// This is plain data so that grids read from disk can carry invalid entries
/// and report them; call [`validate`](Self::validate) (or build through
/// [`new`](Self::new)) before using a spec. Numeric routines taking a spec
/// assume it is valid and panic on an out-of-range `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QClassSpec {
    pub q: f64,
    pub m: u32,
    pub l: u32,
    pub alpha: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

impl QClassSpec {
    pub fn new(q: f64, m: u32, l: u32, alpha: f64, a: f64, b: f64) -> Result<Self> {
        let spec = Self { q, m, l, alpha, a, b };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks `0 < q < 1`, `m ≥ 1`, `m > l`, `α ≥ 0` and `-1 ≤ B < A ≤ 1`,
    /// listing every violated constraint.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.q > 0.0 && self.q < 1.0) {
            problems.push(format!("q = {} must satisfy 0 < q < 1", self.q));
        }
        if self.m < 1 {
            problems.push(format!("m = {} must be at least 1", self.m));
        }
        if self.m <= self.l {
            problems.push(format!("m = {} must exceed l = {}", self.m, self.l));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            problems.push(format!("alpha = {} must be finite and nonnegative", self.alpha));
        }
        if self.b.is_nan() || self.b < -1.0 {
            problems.push(format!("B = {} must be at least -1", self.b));
        }
        if self.a.is_nan() || self.a > 1.0 {
            problems.push(format!("A = {} must be at most 1", self.a));
        }
        if self.a.is_nan() || self.b.is_nan() || self.b >= self.a {
            problems.push(format!("B = {} must be less than A = {}", self.b, self.a));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSpec(problems))
        }
    }

    /// # Panics
    /// If `q` is outside `(0, 1)`.
    pub fn q_param(&self) -> QParam {
        QParam::new(self.q).expect("class spec must be validated before use")
    }

    /// `A - B`.
    pub fn width(&self) -> f64 {
        self.a - self.b
    }
}

impl std::fmt::Display for QClassSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "q={} m={} l={} alpha={} A={} B={}",
            self.q, self.m, self.l, self.alpha, self.a, self.b
        )
    }
}

/// Image of the unit disk under `(1 + Az)/(1 + Bz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OmegaDomain {
    /// `|ω - center| < radius`, for `B > -1`.
    Disk { center: f64, radius: f64 },
    /// `Re ω > boundary_real_part`, for `B = -1`.
    HalfPlane { boundary_real_part: f64 },
}

impl OmegaDomain {
    pub fn contains(&self, w: Complex64) -> bool {
        self.depth(w) > 0.0
    }

    /// Signed distance from `w` to the boundary; positive inside.
    pub fn depth(&self, w: Complex64) -> f64 {
        match *self {
            OmegaDomain::Disk { center, radius } => radius - (w - center).norm(),
            OmegaDomain::HalfPlane { boundary_real_part } => w.re - boundary_real_part,
        }
    }

    /// Where the domain meets the real axis; the right end is `+∞` for a half-plane.
    pub fn real_endpoints(&self) -> (f64, f64) {
        match *self {
            OmegaDomain::Disk { center, radius } => (center - radius, center + radius),
            OmegaDomain::HalfPlane { boundary_real_part } => (boundary_real_part, f64::INFINITY),
        }
    }
}

/// `Ω[A, B]`: the disk with center `(1 - AB)/(1 - B²)` and radius `(A - B)/(1 - B²)`,
/// or the half-plane `Re ω > (1 - A)/2` when `B = -1`.
pub fn omega_domain(spec: &QClassSpec) -> OmegaDomain {
    let (a, b) = (spec.a, spec.b);
    if b == -1.0 {
        OmegaDomain::HalfPlane { boundary_real_part: (1.0 - a) / 2.0 }
    } else {
        let denom = 1.0 - b * b;
        OmegaDomain::Disk {
            center: (1.0 - a * b) / denom,
            radius: (a - b) / denom,
        }
    }
}

/// `(1 + Az)/(1 + Bz)`.
pub fn janowski_map(z: Complex64, a: f64, b: f64) -> Result<Complex64> {
    let den = 1.0 + z * b;
    if den == Complex64::new(0.0, 0.0) {
        return Err(Error::JanowskiPole(z));
    }
    Ok((1.0 + z * a) / den)
}

/// `p(z)` and the subordination margin for one `(f, spec)` pair, with both
/// operator images precomputed as `D_q^m f(z)/z` and `D_q^l f(z)/z`.
///
/// Dividing out `z` gives the `z = 0` limit for free: both quotients equal 1 there.
#[derive(Debug, Clone)]
pub struct SubordinationProbe {
    upper: Polynomial,
    lower: Polynomial,
    alpha: f64,
    a: f64,
    b: f64,
}

impl SubordinationProbe {
    pub fn new(f: &TruncatedSeries, spec: &QClassSpec) -> Self {
        let q = spec.q_param();
        Self {
            upper: f.apply_ruscheweyh(spec.m, q).quotient_by_z(),
            lower: f.apply_ruscheweyh(spec.l, q).quotient_by_z(),
            alpha: spec.alpha,
            a: spec.a,
            b: spec.b,
        }
    }

    /// `w(z) = D_q^m f(z) / D_q^l f(z)`.
    pub fn ratio(&self, z: Complex64) -> Result<Complex64> {
        let den = self.lower.value(z);
        if den == Complex64::new(0.0, 0.0) {
            return Err(Error::DenominatorZero(z));
        }
        Ok(self.upper.value(z) / den)
    }

    /// `p(z) = w - α |w - 1|`.
    pub fn p(&self, z: Complex64) -> Result<Complex64> {
        let w = self.ratio(z)?;
        Ok(w - self.alpha * (w - 1.0).norm())
    }

    /// `|p(z) - 1| / |A - B p(z)|`; membership needs this below 1 everywhere.
    pub fn margin(&self, z: Complex64) -> Result<f64> {
        let p = self.p(z)?;
        let den = (self.a - self.b * p).norm();
        if den == 0.0 {
            return Err(Error::MarginDenominatorZero(z));
        }
        Ok((p - 1.0).norm() / den)
    }
}

/// One-shot [`SubordinationProbe::p`].
pub fn p_functional(f: &TruncatedSeries, z: Complex64, spec: &QClassSpec) -> Result<Complex64> {
    SubordinationProbe::new(f, spec).p(z)
}

/// One-shot [`SubordinationProbe::margin`].
pub fn subordination_margin(f: &TruncatedSeries, z: Complex64, spec: &QClassSpec) -> Result<f64> {
    SubordinationProbe::new(f, spec).margin(z)
}
