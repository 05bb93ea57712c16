use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{open_verdict, AuditReport, Verdict, Witness};
use crate::classcheck::membership_iff_t;
use crate::janowski::{QClassSpec, SubordinationProbe};
use crate::series::{NegativeCoeffSeries, TruncatedSeries};
use crate::{Error, Result};

/// Largest radius probed by [`necessity_witness_search`].
pub const DEFAULT_WITNESS_RMAX: f64 = 1.0 - 1e-4;

/// Polar sampling of the disk `|z| ≤ r_max`.
///
/// Radii are `r_max · i / radial_count` for `i = 1..=radial_count` and angles
/// `2π j / angular_count`, so doubling either count yields a superset of points.
/// After the sweep, `refinement` rounds of 5×5 local sampling (each halving the
/// spacing) are centred on the running worst point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    pub radial_count: usize,
    pub angular_count: usize,
    pub r_max: f64,
    pub refinement: usize,
}

impl Default for DiskGrid {
    fn default() -> Self {
        Self { radial_count: 24, angular_count: 96, r_max: 0.995, refinement: 3 }
    }
}

impl DiskGrid {
    pub fn validate(&self) -> Result<()> {
        if self.radial_count == 0 || self.angular_count == 0 {
            return Err(Error::InvalidArgument("grid counts must be positive".into()));
        }
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "grid r_max must lie in (0, 1), got {}",
                self.r_max
            )));
        }
        Ok(())
    }

    pub fn total_points(&self) -> usize {
        self.radial_count * self.angular_count
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.r_max * (i + 1) as f64 / self.radial_count as f64
    }

    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.angular_count as f64
    }

    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.radial_count).map(|i| self.radius(i))
    }

    /// Base sweep points, radius-major.
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.radial_count).flat_map(move |i| {
            (0..self.angular_count).map(move |j| Complex64::from_polar(self.radius(i), self.angle(j)))
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct Worst {
    margin: f64,
    r: f64,
    theta: f64,
}

/// Maximum of `|p(z) - 1| / |A - B p(z)|` over the grid; passes when it stays
/// below `1 - 10⁻⁹`. A vanishing denominator at a grid point is a failure.
pub fn subordination_grid_check(f: &TruncatedSeries, spec: &QClassSpec, grid: &DiskGrid) -> Result<AuditReport> {
    grid.validate()?;
    let probe = SubordinationProbe::new(f, spec);
    let claim = "subordination-grid";
    let fail_at = |z: Complex64, err: Error| {
        AuditReport::fail(claim, Some(*spec), f64::INFINITY, Witness::at(z, err.to_string()))
    };

    let mut worst = Worst { margin: 0.0, r: 0.0, theta: 0.0 };
    for i in 0..grid.radial_count {
        let r = grid.radius(i);
        for j in 0..grid.angular_count {
            let theta = grid.angle(j);
            let z = Complex64::from_polar(r, theta);
            match probe.margin(z) {
                Ok(m) if m > worst.margin => worst = Worst { margin: m, r, theta },
                Ok(_) => {}
                Err(e) => return Ok(fail_at(z, e)),
            }
        }
    }

    let mut dr = grid.r_max / grid.radial_count as f64;
    let mut dtheta = TAU / grid.angular_count as f64;
    for _ in 0..grid.refinement {
        dr /= 2.0;
        dtheta /= 2.0;
        let centre = worst;
        for a in -2i32..=2 {
            let r = (centre.r + a as f64 * dr).clamp(0.0, grid.r_max);
            for b in -2i32..=2 {
                let theta = centre.theta + b as f64 * dtheta;
                let z = Complex64::from_polar(r, theta);
                match probe.margin(z) {
                    Ok(m) if m > worst.margin => worst = Worst { margin: m, r, theta },
                    Ok(_) => {}
                    Err(e) => return Ok(fail_at(z, e)),
                }
            }
        }
    }

    let at = Complex64::from_polar(worst.r, worst.theta);
    let report = match open_verdict(worst.margin, 1.0) {
        Verdict::Pass => AuditReport::pass(claim, Some(*spec), worst.margin),
        Verdict::Fail => AuditReport::fail(
            claim,
            Some(*spec),
            worst.margin,
            Witness::at(at, "p(z) leaves the Janowski domain"),
        ),
        other => AuditReport {
            witness: Some(Witness::at(at, "margin within 1e-9 of 1")),
            ..AuditReport::pass(claim, Some(*spec), worst.margin).with_verdict(other)
        },
    };
    Ok(report)
}

/// A real point where the subordination margin reaches 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NecessityWitness {
    pub z: f64,
    /// `+∞` when `D_q^l f` or `A - B p` vanishes at `z`.
    pub margin: f64,
}

/// Radii visited by the march toward 1: a uniform sweep with step 0.005 up to
/// 0.99, then `1 - 10^{-2 - j/20}`.
fn marching_radii(r_max: f64) -> impl Iterator<Item = f64> {
    let uniform = (1..=198).map(|i| i as f64 * 0.005);
    let approach = (1..).map(|j| 1.0 - 10f64.powf(-2.0 - j as f64 / 20.0));
    uniform
        .chain(approach)
        .take_while(move |&r| r <= r_max)
}

/// Marches `z = r` along `(0, r_max]` looking for `margin(z) ≥ 1`.
///
/// Only meaningful for a non-member: the violated coefficient condition forces
/// the margin past 1 in the limit `z → 1⁻`, but a near-equality violation may
/// only cross beyond `r_max`, so `Ok(None)` means "not found below `r_max`".
pub fn necessity_witness_search(
    f: &NegativeCoeffSeries,
    spec: &QClassSpec,
    r_max: f64,
) -> Result<Option<NecessityWitness>> {
    if membership_iff_t(f, spec).member {
        return Err(Error::IsMember);
    }
    if !(r_max > 0.0 && r_max < 1.0) {
        return Err(Error::InvalidArgument(format!("r_max must lie in (0, 1), got {r_max}")));
    }
    let probe = SubordinationProbe::new(&f.to_series(), spec);
    for r in marching_radii(r_max) {
        let z = Complex64::new(r, 0.0);
        let margin = match probe.margin(z) {
            Ok(m) => m,
            Err(Error::DenominatorZero(_) | Error::MarginDenominatorZero(_)) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        if margin >= 1.0 {
            return Ok(Some(NecessityWitness { z: r, margin }));
        }
    }
    Ok(None)
}
