use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::empirical::{distortion_empirical_check, radius_empirical_check, random_member, random_sufficient_member, DistortionCheckConfig};
use super::grid::{necessity_witness_search, subordination_grid_check, DiskGrid, DEFAULT_WITNESS_RMAX};
use super::quadrature::{integral_mean_dominance, littlewood_check};
use super::{AuditReport, Verdict, Witness};
use crate::bounds::{RadiusKind, DEFAULT_K_MAX};
use crate::classcheck::{coefficient_bound, decompose, extremal_fk, membership_iff_t, recompose};
use crate::janowski::QClassSpec;
use crate::series::{NegativeCoeffSeries, Polynomial, DEFAULT_DEGREE};
use crate::Result;

/// Knobs of a full sweep. Two runs with equal configs produce identical reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub seed: u64,
    pub degree: usize,
    pub grid: DiskGrid,
    /// Random members per spec for the sufficiency and extreme-point claims.
    pub samples: usize,
    pub k_max: usize,
    pub nodes: usize,
    pub psi_values: Vec<f64>,
    pub distortion: DistortionCheckConfig,
    pub mean_samples: usize,
    pub mean_radii: Vec<f64>,
    pub mean_exponents: Vec<f64>,
    /// Factor by which `b₂` exceeds its bound in the necessity claim.
    pub necessity_ratio: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed_2024,
            degree: DEFAULT_DEGREE,
            grid: DiskGrid::default(),
            samples: 100,
            k_max: DEFAULT_K_MAX,
            nodes: 512,
            psi_values: vec![0.0, 0.5],
            distortion: DistortionCheckConfig::default(),
            mean_samples: 50,
            mean_radii: vec![0.3, 0.6, 0.9],
            mean_exponents: vec![0.5, 1.0, 2.0],
            necessity_ratio: 1.5,
        }
    }
}

/// The claims checked per spec, in report order.
///
/// | claim | `worst_margin` |
/// |-------|----------------|
/// | `coefficient-sharpness` | largest `|slack|` of `f_k`, `k = 2..8` |
/// | `distortion` | smallest envelope slack over members and circles |
/// | `extreme-points` | largest decompose/recompose round-trip error |
/// | `integral-mean-dominance` | largest `∫|f|^s - ∫|f_2|^s` |
/// | `littlewood` | largest `∫|f_2∘ω|^s - ∫|f_2|^s` |
/// | `necessity` | margin at the real witness |
/// | `radius-<kind>/psi=<ψ>` | controlled quantity over `1 - ψ` at `0.99 · radius` |
/// | `spec-validation` | not applicable (`null`) |
/// | `sufficiency` | largest subordination margin over members and grid |
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClaimId {
    CoefficientSharpness,
    Distortion,
    ExtremePoints,
    IntegralMeans,
    Littlewood,
    Necessity,
    Radius(RadiusKind),
    SpecValidation,
    Sufficiency,
}

impl ClaimId {
    pub fn name(self) -> String {
        match self {
            ClaimId::CoefficientSharpness => "coefficient-sharpness".into(),
            ClaimId::Distortion => "distortion".into(),
            ClaimId::ExtremePoints => "extreme-points".into(),
            ClaimId::IntegralMeans => "integral-mean-dominance".into(),
            ClaimId::Littlewood => "littlewood".into(),
            ClaimId::Necessity => "necessity".into(),
            ClaimId::Radius(kind) => format!("radius-{kind}"),
            ClaimId::SpecValidation => "spec-validation".into(),
            ClaimId::Sufficiency => "sufficiency".into(),
        }
    }

    fn stream(self) -> u64 {
        match self {
            ClaimId::CoefficientSharpness => 1,
            ClaimId::Distortion => 2,
            ClaimId::ExtremePoints => 3,
            ClaimId::IntegralMeans => 4,
            ClaimId::Littlewood => 5,
            ClaimId::Necessity => 6,
            ClaimId::Radius(_) => 7,
            ClaimId::SpecValidation => 8,
            ClaimId::Sufficiency => 9,
        }
    }
}

/// 108 specs: `q ∈ {0.3, 0.5, 0.7, 0.9}`, `(m, l) ∈ {(1,0), (2,1), (3,1)}`,
/// `α ∈ {0, 1, 2}`, `(A, B) ∈ {(1,-1), (0.5,-0.5), (0.75,0.25)}`.
pub fn default_spec_grid() -> Vec<QClassSpec> {
    let mut out = Vec::with_capacity(108);
    for q in [0.3, 0.5, 0.7, 0.9] {
        for (m, l) in [(1, 0), (2, 1), (3, 1)] {
            for alpha in [0.0, 1.0, 2.0] {
                for (a, b) in [(1.0, -1.0), (0.5, -0.5), (0.75, 0.25)] {
                    out.push(QClassSpec { q, m, l, alpha, a, b });
                }
            }
        }
    }
    out
}

fn rng_for(config: &AuditConfig, spec_index: usize, claim: ClaimId) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(((spec_index as u64) << 8) | claim.stream());
    rng
}

fn timed(f: impl FnOnce() -> Result<AuditReport>, claim: &str, spec: &QClassSpec) -> AuditReport {
    let start = Instant::now();
    let report = f().unwrap_or_else(|e| {
        AuditReport::fail(claim, Some(*spec), f64::NAN, Witness::note(format!("check aborted: {e}")))
    });
    report.with_runtime(start.elapsed())
}

/// Runs every claim for every spec. Specs are independent work units and run in
/// parallel; each uses its own RNG stream, so the output depends only on the
/// inputs. Within a spec, reports are sorted by claim id. An invalid spec yields
/// a single `spec-validation` entry and the sweep continues.
pub fn run_audit(specs: &[QClassSpec], config: &AuditConfig) -> Vec<AuditReport> {
    specs
        .par_iter()
        .enumerate()
        .map(|(i, spec)| audit_spec(i, spec, config))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn audit_spec(index: usize, spec: &QClassSpec, config: &AuditConfig) -> Vec<AuditReport> {
    if let Err(e) = spec.validate() {
        let mut report = AuditReport::pass(ClaimId::SpecValidation.name(), Some(*spec), f64::NAN)
            .with_verdict(Verdict::Invalid)
            .with_detail(e.to_string());
        report.spec_index = Some(index);
        return vec![report];
    }

    let mut reports = vec![
        timed(|| Ok(coefficient_sharpness(spec)), &ClaimId::CoefficientSharpness.name(), spec),
        timed(|| sufficiency(index, spec, config), &ClaimId::Sufficiency.name(), spec),
        timed(|| necessity(spec, config), &ClaimId::Necessity.name(), spec),
        timed(
            || {
                let mut rng = rng_for(config, index, ClaimId::Distortion);
                distortion_empirical_check(spec, &config.distortion, &mut rng)
            },
            &ClaimId::Distortion.name(),
            spec,
        ),
        timed(|| extreme_points(index, spec, config), &ClaimId::ExtremePoints.name(), spec),
        timed(|| integral_means(index, spec, config), &ClaimId::IntegralMeans.name(), spec),
        timed(|| littlewood(spec, config), &ClaimId::Littlewood.name(), spec),
    ];
    for &psi in &config.psi_values {
        for kind in RadiusKind::ALL {
            let name = format!("{}/psi={psi}", ClaimId::Radius(kind).name());
            let mut report = timed(|| radius_empirical_check(kind, psi, spec, config.k_max), &name, spec);
            report.claim_id = name;
            reports.push(report);
        }
    }
    reports.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
    for r in &mut reports {
        r.spec_index = Some(index);
    }
    reports
}

fn coefficient_sharpness(spec: &QClassSpec) -> AuditReport {
    let claim = ClaimId::CoefficientSharpness.name();
    let mut worst: f64 = 0.0;
    for k in 2..=8 {
        let fk = extremal_fk(k, spec).expect("k ≥ 2");
        let v = membership_iff_t(&fk, spec);
        worst = worst.max(v.slack.abs());
        if !v.member || v.slack.abs() > 1e-12 {
            return AuditReport::fail(claim, Some(*spec), v.slack.abs(), Witness::note(format!("f_{k} has slack {}", v.slack)));
        }
        let scaled = NegativeCoeffSeries::single_term(k, 1.01 * coefficient_bound(k, spec)).expect("positive");
        if membership_iff_t(&scaled, spec).member {
            return AuditReport::fail(claim, Some(*spec), worst, Witness::note(format!("1.01 · f_{k} coefficient still passes")));
        }
    }
    AuditReport::pass(claim, Some(*spec), worst)
}

fn sufficiency(index: usize, spec: &QClassSpec, config: &AuditConfig) -> Result<AuditReport> {
    let claim = ClaimId::Sufficiency.name();
    let mut rng = rng_for(config, index, ClaimId::Sufficiency);
    let mut worst: f64 = 0.0;
    for sample in 0..config.samples {
        let f = random_sufficient_member(spec, config.degree, &mut rng);
        let report = subordination_grid_check(&f, spec, &config.grid)?;
        worst = worst.max(report.worst_margin);
        if report.verdict != Verdict::Pass {
            return Ok(AuditReport { claim_id: claim, worst_margin: worst, ..report }
                .with_detail(format!("sample {sample} of {}", config.samples)));
        }
    }
    let g = &config.grid;
    Ok(AuditReport::pass(claim, Some(*spec), worst).with_detail(format!(
        "samples={} grid={}x{} r_max={}",
        config.samples, g.radial_count, g.angular_count, g.r_max
    )))
}

fn necessity(spec: &QClassSpec, config: &AuditConfig) -> Result<AuditReport> {
    let claim = ClaimId::Necessity.name();
    let b2 = config.necessity_ratio * coefficient_bound(2, spec);
    let f = NegativeCoeffSeries::single_term(2, b2)?;
    let detail = format!("b2={b2} ratio={}", config.necessity_ratio);
    match necessity_witness_search(&f, spec, DEFAULT_WITNESS_RMAX)? {
        Some(w) => Ok(AuditReport::pass(claim, Some(*spec), w.margin)
            .with_detail(format!("{detail} witness_z={}", w.z))),
        None => Ok(AuditReport::fail(
            claim,
            Some(*spec),
            f64::NAN,
            Witness::at(Complex64::new(DEFAULT_WITNESS_RMAX, 0.0), "margin stays below 1 up to r_max"),
        )
        .with_detail(detail)),
    }
}

fn extreme_points(index: usize, spec: &QClassSpec, config: &AuditConfig) -> Result<AuditReport> {
    let claim = ClaimId::ExtremePoints.name();
    let mut rng = rng_for(config, index, ClaimId::ExtremePoints);
    let mut worst: f64 = 0.0;
    for sample in 0..config.samples {
        let f = random_member(spec, config.degree, &mut rng);
        let weights = decompose(&f, spec)?;
        let sum: f64 = weights.iter().sum();
        let back = recompose(&weights, spec)?;
        let err = f
            .magnitudes()
            .iter()
            .zip(back.magnitudes())
            .map(|(a, b)| (a - b).abs())
            .fold((sum - 1.0).abs(), f64::max);
        worst = worst.max(err);
        let in_range = weights.iter().all(|w| (0.0..=1.0).contains(w));
        if err > 1e-12 || !in_range {
            return Ok(AuditReport::fail(claim, Some(*spec), worst, Witness::note(format!("sample {sample}: error {err:e}, weights in [0,1]: {in_range}"))));
        }
    }
    Ok(AuditReport::pass(claim, Some(*spec), worst))
}

fn integral_means(index: usize, spec: &QClassSpec, config: &AuditConfig) -> Result<AuditReport> {
    let claim = ClaimId::IntegralMeans.name();
    let mut rng = rng_for(config, index, ClaimId::IntegralMeans);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..config.mean_samples {
        let f = random_member(spec, config.degree, &mut rng);
        for &r in &config.mean_radii {
            for &s in &config.mean_exponents {
                let report = integral_mean_dominance(&f, spec, r, s, config.nodes)?;
                worst = worst.max(report.worst_margin);
                if report.verdict != Verdict::Pass {
                    return Ok(AuditReport { claim_id: claim, worst_margin: worst, ..report });
                }
            }
        }
    }
    Ok(AuditReport::pass(claim, Some(*spec), worst))
}

fn littlewood(spec: &QClassSpec, config: &AuditConfig) -> Result<AuditReport> {
    let claim = ClaimId::Littlewood.name();
    let g = extremal_fk(2, spec)?.to_series();
    let schwarz = [
        Polynomial::from_real(&[0.0, 1.0]),
        Polynomial::from_real(&[0.0, 0.0, 1.0]),
        Polynomial::from_real(&[0.0, 0.5]),
        Polynomial::from_real(&[0.0, 0.5, 0.5]),
    ];
    let mut worst = f64::NEG_INFINITY;
    for omega in &schwarz {
        for &r in &config.mean_radii {
            for &s in &config.mean_exponents {
                let report = littlewood_check(&g, omega, r, s, config.nodes)?;
                worst = worst.max(report.worst_margin);
                if report.verdict != Verdict::Pass {
                    return Ok(AuditReport { claim_id: claim, spec: Some(*spec), worst_margin: worst, ..report });
                }
            }
        }
    }
    Ok(AuditReport::pass(claim, Some(*spec), worst))
}
