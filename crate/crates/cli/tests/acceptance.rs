//! Acceptance gate: one line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so the lines are always printed.

use std::f64::consts::TAU;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qjanowski::bounds::{distortion_coefficient, distortion_f, distortion_fprime, radius, RadiusKind};
use qjanowski::classcheck::{coefficient_bound, decompose, extremal_fk, membership_iff_t, mu, recompose};
use qjanowski::janowski::QClassSpec;
use qjanowski::qcore::{classical_limit_coeff, ruscheweyh_coeff, QParam};
use qjanowski::series::{DiskFunction, NegativeCoeffSeries, TruncatedSeries};
use qjanowski::verify::{
    default_spec_grid, distortion_empirical_check, integral_mean_dominance, necessity_witness_search,
    radius_empirical_check, random_member, random_sufficient_member, subordination_grid_check,
    trapezoid_circle_mean, DiskGrid, DistortionCheckConfig, Verdict, DEFAULT_WITNESS_RMAX,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion<'a> = (&'static str, Option<Duration>, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    passed: bool,
    summary: String,
}

impl Outcome {
    fn check(passed: bool, summary: impl Into<String>) -> Self {
        Self { passed, summary: summary.into() }
    }
}

fn reference() -> QClassSpec {
    QClassSpec::new(0.5, 2, 1, 1.0, 0.5, -0.5).unwrap()
}

fn within_time(limit: Duration, elapsed: Duration, outcome: Outcome) -> Outcome {
    if elapsed > limit {
        Outcome::check(false, format!("{}; took {elapsed:.2?}, limit {limit:?}", outcome.summary))
    } else {
        outcome
    }
}

fn q_limit() -> Outcome {
    let q = QParam::new(1.0 - 1e-7).unwrap();
    let mut worst: f64 = 0.0;
    for m in 0..=5 {
        for k in 1..=10 {
            let exact = classical_limit_coeff(m, k);
            worst = worst.max((ruscheweyh_coeff(m, k, q) - exact).abs() / exact);
        }
    }
    Outcome::check(worst < 1e-5, format!("max relative error {worst:.3e} (< 1e-5)"))
}

fn operator_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let tail: Vec<Complex64> =
            (0..31).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let f = TruncatedSeries::from_tail(&tail).unwrap();
        for v in [0.3, 0.7] {
            let q = QParam::new(v).unwrap();
            for m in 0..=6 {
                let a = f.apply_ruscheweyh(m, q);
                let b = f.apply_ruscheweyh_differential(m, q);
                for (x, y) in a.coefficients().iter().zip(b.coefficients()) {
                    worst = worst.max((x - y).norm());
                }
            }
        }
    }
    Outcome::check(worst <= 1e-12, format!("max coefficient difference {worst:.3e} (≤ 1e-12)"))
}

fn sharpness(grid: &[QClassSpec]) -> Outcome {
    let mut worst: f64 = 0.0;
    for spec in grid {
        for k in 2..=8 {
            let v = membership_iff_t(&extremal_fk(k, spec).unwrap(), spec);
            worst = worst.max(v.slack.abs());
            let scaled = NegativeCoeffSeries::single_term(k, 1.01 * coefficient_bound(k, spec)).unwrap();
            if !v.member || membership_iff_t(&scaled, spec).member {
                return Outcome::check(false, format!("k={k} spec {spec}"));
            }
        }
    }
    Outcome::check(worst <= 1e-12, format!("{} specs × k=2..8, max |slack| {worst:.3e}", grid.len()))
}

fn sufficiency(grid: &[QClassSpec]) -> Outcome {
    let disk = DiskGrid::default();
    let mut worst: f64 = 0.0;
    for (i, spec) in grid.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + i as u64);
        for _ in 0..100 {
            let f = random_sufficient_member(spec, 32, &mut rng);
            let report = subordination_grid_check(&f, spec, &disk).unwrap();
            worst = worst.max(report.worst_margin);
            if report.verdict != Verdict::Pass {
                return Outcome::check(false, format!("{:?} at spec {spec}, margin {}", report.verdict, report.worst_margin));
            }
        }
    }
    Outcome::check(true, format!("10800 members on 24×96 grid, worst margin {worst:.9}"))
}

fn necessity(grid: &[QClassSpec]) -> Outcome {
    let mut smallest_z: f64 = 1.0;
    let mut largest_z: f64 = 0.0;
    for spec in grid {
        let f = NegativeCoeffSeries::single_term(2, 1.5 * coefficient_bound(2, spec)).unwrap();
        match necessity_witness_search(&f, spec, DEFAULT_WITNESS_RMAX).unwrap() {
            Some(w) if w.margin >= 1.0 => {
                smallest_z = smallest_z.min(w.z);
                largest_z = largest_z.max(w.z);
            }
            _ => return Outcome::check(false, format!("no witness for spec {spec}")),
        }
    }
    Outcome::check(true, format!("witnesses for all specs, z in [{smallest_z}, {largest_z}]"))
}

fn distortion(grid: &[QClassSpec]) -> Outcome {
    let spec = reference();
    let c = distortion_coefficient(&spec);
    let f_env = distortion_f(0.5, &spec).unwrap();
    let constants = (mu(2, &spec) - 2.25).abs() < 1e-15
        && (c - 4.0 / 9.0).abs() < 1e-15
        && (f_env.lower - 0.38889).abs() < 5e-6
        && (f_env.upper - 0.61111).abs() < 5e-6;
    if !constants {
        return Outcome::check(false, format!("reference constants off: c={c} envelope={f_env:?}"));
    }

    let config = DistortionCheckConfig::default();
    let mut worst_slack = f64::INFINITY;
    let mut worst_attain: f64 = 0.0;
    for (i, spec) in grid.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(6000 + i as u64);
        let report = distortion_empirical_check(spec, &config, &mut rng).unwrap();
        if report.verdict != Verdict::Pass || report.worst_margin < -1e-9 {
            return Outcome::check(false, format!("spec {spec}: {report:?}"));
        }
        worst_slack = worst_slack.min(report.worst_margin);

        let f2 = extremal_fk(2, spec).unwrap();
        let c = distortion_coefficient(spec);
        for r in (1..=9).map(|i| i as f64 / 10.0) {
            let errors = [
                f2.value(Complex64::new(-r, 0.0)).norm() - (r + c * r * r),
                f2.value(Complex64::new(r, 0.0)).norm() - (r - c * r * r).abs(),
                f2.derivative(Complex64::new(r, 0.0)).norm() - (1.0 - 2.0 * c * r).abs(),
                f2.derivative(Complex64::new(-r, 0.0)).norm() - (1.0 + 2.0 * c * r),
            ];
            worst_attain = errors.iter().fold(worst_attain, |w, e| w.max(e.abs()));
            let env = distortion_fprime(r, spec).unwrap();
            if !env.lower_clamped {
                worst_attain = worst_attain.max((f2.derivative(Complex64::new(r, 0.0)).norm() - env.lower).abs());
            }
        }
    }
    Outcome::check(
        worst_attain <= 1e-12,
        format!("min envelope slack {worst_slack:.3e}; f_2 attainment error {worst_attain:.3e}"),
    )
}

fn radii(grid: &[QClassSpec]) -> Outcome {
    let spec = reference();
    let star = radius(RadiusKind::Starlike, 0.0, &spec, 64).unwrap();
    let convex = radius(RadiusKind::Convex, 0.0, &spec, 64).unwrap();
    let reference_ok = star.radius == 1.0
        && (star.unclamped_inf - 1.125).abs() < 1e-12
        && star.minimizing_k == 2
        && (convex.radius - 0.5625).abs() < 1e-12
        && convex.minimizing_k == 2;
    if !reference_ok {
        return Outcome::check(false, format!("reference radii: starlike {star:?}, convex {convex:?}"));
    }

    let mut sharp_probes = 0;
    let mut worst_shift: f64 = 0.0;
    for spec in grid {
        for psi in [0.0, 0.5] {
            for kind in RadiusKind::ALL {
                let report = radius_empirical_check(kind, psi, spec, 64).unwrap();
                if report.verdict != Verdict::Pass {
                    return Outcome::check(false, format!("{kind} psi={psi} spec {spec}: {report:?}"));
                }
                let a = radius(kind, psi, spec, 64).unwrap();
                let b = radius(kind, psi, spec, 128).unwrap();
                worst_shift = worst_shift.max((a.radius - b.radius).abs());
                if a.radius < 1.0 {
                    sharp_probes += 1;
                }
            }
        }
    }
    Outcome::check(
        worst_shift <= 1e-12,
        format!(
            "starlike 1 (inf 1.125), convex 0.5625; {sharp_probes} sub-unit radii confirmed; k_max 64→128 shift {worst_shift:.1e}"
        ),
    )
}

fn extreme_points(grid: &[QClassSpec]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let spec = &grid[i % grid.len()];
        let f = random_member(spec, 32, &mut rng);
        let w = decompose(&f, spec).unwrap();
        if w.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Outcome::check(false, format!("weight outside [0,1] for spec {spec}"));
        }
        let back = recompose(&w, spec).unwrap();
        let err = f
            .magnitudes()
            .iter()
            .zip(back.magnitudes())
            .map(|(a, b)| (a - b).abs())
            .fold((w.iter().sum::<f64>() - 1.0).abs(), f64::max);
        worst = worst.max(err);
    }
    Outcome::check(worst <= 1e-12, format!("1000 members, max round-trip / weight-sum error {worst:.3e}"))
}

fn integral_means(grid: &[QClassSpec]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut parseval: f64 = 0.0;
    for _ in 0..50 {
        let tail: Vec<Complex64> =
            (0..31).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let f = TruncatedSeries::from_tail(&tail).unwrap();
        for r in [0.3, 0.6, 0.9] {
            let closed: f64 = TAU
                * f.coefficients()
                    .iter()
                    .enumerate()
                    .map(|(i, a)| a.norm_sqr() * f64::powi(r, 2 * (i as i32 + 1)))
                    .sum::<f64>();
            parseval = parseval.max((trapezoid_circle_mean(&f, r, 2.0, 512) - closed).abs());
        }
    }
    if parseval >= 1e-10 {
        return Outcome::check(false, format!("Parseval error {parseval:.3e}"));
    }

    let mut worst = f64::NEG_INFINITY;
    for (i, spec) in grid.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + i as u64);
        for _ in 0..50 {
            let f = random_member(spec, 32, &mut rng);
            for r in [0.3, 0.6, 0.9] {
                for s in [0.5, 1.0, 2.0] {
                    let report = integral_mean_dominance(&f, spec, r, s, 512).unwrap();
                    worst = worst.max(report.worst_margin);
                    if report.verdict != Verdict::Pass {
                        return Outcome::check(false, format!("spec {spec} r={r} s={s}: {report:?}"));
                    }
                }
            }
        }
    }
    Outcome::check(true, format!("Parseval error {parseval:.3e}; max ∫|f|^s − ∫|f_2|^s = {worst:.3e}"))
}

fn audit_determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qjanowski"))
            .args(["audit", "--seed", "2024"])
            .output()
            .expect("binary runs")
    };
    let a = run();
    let b = run();
    let lines = a.stdout.iter().filter(|&&c| c == b'\n').count();
    let ok = a.status.code() == Some(0) && a.stdout == b.stdout && lines > 0;
    Outcome::check(
        ok,
        format!("{lines} JSON lines, exit {:?}, identical: {}", a.status.code(), a.stdout == b.stdout),
    )
}

fn main() -> ExitCode {
    let grid = default_spec_grid();
    let criteria: Vec<Criterion> = vec![
        ("q-limit oracle", Some(Duration::from_secs(1)), Box::new(q_limit)),
        ("operator-form equivalence", Some(Duration::from_secs(1)), Box::new(operator_forms)),
        ("coefficient sharpness", Some(Duration::from_secs(1)), Box::new(|| sharpness(&grid))),
        ("sufficiency on the disk grid", Some(Duration::from_secs(60)), Box::new(|| sufficiency(&grid))),
        ("necessity witnesses", Some(Duration::from_secs(10)), Box::new(|| necessity(&grid))),
        ("distortion envelopes", None, Box::new(|| distortion(&grid))),
        ("radii", None, Box::new(|| radii(&grid))),
        ("extreme points", None, Box::new(|| extreme_points(&grid))),
        ("integral means", Some(Duration::from_secs(30)), Box::new(|| integral_means(&grid))),
        ("audit determinism", None, Box::new(audit_determinism)),
    ];

    let mut failed = 0;
    for (n, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match limit {
            Some(limit) => within_time(*limit, elapsed, outcome),
            None => outcome,
        };
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {:>2}: {name}: {} ({elapsed:.2?})", n + 1, outcome.summary);
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
