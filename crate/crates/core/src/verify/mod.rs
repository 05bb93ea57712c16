//! Numerical adjudication of the class theorems.
//!
//! Every check returns an [`AuditReport`]. Open conditions (`margin < 1`) use a
//! band of width `10⁻⁹` on either side of the threshold: below it is a pass,
//! above it a fail, and inside it a distinct [`Verdict::Boundary`].

mod audit;
mod empirical;
mod grid;
mod quadrature;

use std::time::Duration;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::janowski::QClassSpec;

pub use audit::{default_spec_grid, run_audit, AuditConfig, ClaimId};
pub use empirical::{
    distortion_empirical_check, radius_empirical_check, random_member, random_sufficient_member,
    DistortionCheckConfig, RADIUS_SAMPLES,
};
pub use grid::{
    necessity_witness_search, subordination_grid_check, DiskGrid, NecessityWitness,
    DEFAULT_WITNESS_RMAX,
};
pub use quadrature::{
    integral_mean, integral_mean_dominance, littlewood_check, trapezoid_circle_mean, IntegralMean,
    MAX_NODES, MIN_NODES,
};

/// Width of the undecided band around an open threshold.
pub const OPEN_CONDITION_BAND: f64 = 1e-9;

/// Slack allowed on closed inequalities between computed quantities.
pub const INEQUALITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Within [`OPEN_CONDITION_BAND`] of the threshold.
    Boundary,
    Unconverged,
    /// The spec failed validation; nothing was checked.
    Invalid,
}

/// Where (and why) a check failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Offending point of the disk, `[re, im]`, when the failure is pointwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<[f64; 2]>,
    pub note: String,
}

impl Witness {
    pub fn at(z: Complex64, note: impl Into<String>) -> Self {
        Self { z: Some([z.re, z.im]), note: note.into() }
    }

    pub fn note(note: impl Into<String>) -> Self {
        Self { z: None, note: note.into() }
    }
}

/// Outcome of one claim checked for one spec.
///
/// `worst_margin` is the claim's closest approach to violation; its meaning is
/// claim specific (see [`ClaimId`]). Runtime is kept out of the serialized form
/// so that reports are reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub claim_id: String,
    /// Position of the spec in the audited grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<QClassSpec>,
    pub verdict: Verdict,
    /// `null` in JSON when not finite.
    #[serde(with = "finite_or_null")]
    pub worst_margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl AuditReport {
    pub fn pass(claim_id: impl Into<String>, spec: Option<QClassSpec>, worst_margin: f64) -> Self {
        Self {
            claim_id: claim_id.into(),
            spec_index: None,
            spec,
            verdict: Verdict::Pass,
            worst_margin,
            witness: None,
            detail: None,
            runtime: Duration::ZERO,
        }
    }

    /// A failing report always carries a witness.
    pub fn fail(
        claim_id: impl Into<String>,
        spec: Option<QClassSpec>,
        worst_margin: f64,
        witness: Witness,
    ) -> Self {
        Self {
            verdict: Verdict::Fail,
            witness: Some(witness),
            ..Self::pass(claim_id, spec, worst_margin)
        }
    }

    pub fn with_verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_runtime(mut self, runtime: Duration) -> Self {
        self.runtime = runtime;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

mod finite_or_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// Classifies a value against the open condition `value < threshold`.
pub(crate) fn open_verdict(value: f64, threshold: f64) -> Verdict {
    if value < threshold - OPEN_CONDITION_BAND {
        Verdict::Pass
    } else if value > threshold + OPEN_CONDITION_BAND {
        Verdict::Fail
    } else {
        Verdict::Boundary
    }
}
