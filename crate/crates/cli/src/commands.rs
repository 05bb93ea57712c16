use std::fs;
use std::path::{Path, PathBuf};

use qjanowski::bounds::{distortion_f, distortion_fprime, radius, RadiusKind};
use qjanowski::classcheck::{class_report, decompose, extremal_fk, membership_iff_t, recompose, ClassReport};
use qjanowski::janowski::QClassSpec;
use qjanowski::series::{NegativeCoeffSeries, TruncatedSeries};
use qjanowski::verify::{
    default_spec_grid, integral_mean, integral_mean_dominance, necessity_witness_search, run_audit,
    subordination_grid_check, AuditConfig, AuditReport, DiskGrid, DistortionCheckConfig, NecessityWitness,
    Verdict, DEFAULT_WITNESS_RMAX, MIN_NODES,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::output::{sig, Table};
use crate::{Cli, Command, Format, Knobs, SpecArgs, SPEC_ENV};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Io { .. } => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl From<qjanowski::Error> for CliError {
    fn from(e: qjanowski::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INVALID: u8 = 3;

/// Runs one subcommand; output is written only after all computation is done.
pub fn run(cli: &Cli) -> CliResult<u8> {
    let (text, code) = match &cli.command {
        Command::Check { series } => check(cli, series)?,
        Command::Extremal { k } => extremal(cli, *k)?,
        Command::Bounds { r, psi } => bounds(cli, r, psi)?,
        Command::Audit { grid, summary } => audit(cli, grid.as_deref(), summary.as_deref())?,
        Command::IntegralMeans { series, r, s } => integral_means(cli, series.as_deref(), r, s)?,
        Command::Decompose { series } => decompose_cmd(cli, series)?,
    };
    match &cli.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse { path: path.to_owned(), message: e.to_string() })
}

fn load_spec(args: &SpecArgs) -> CliResult<QClassSpec> {
    let inline = [
        ("--q", args.q.is_some()),
        ("--m", args.m.is_some()),
        ("--l", args.l.is_some()),
        ("--alpha", args.alpha.is_some()),
        ("--A", args.a.is_some()),
        ("--B", args.b.is_some()),
    ];
    let given: Vec<&str> = inline.iter().filter(|(_, set)| *set).map(|(n, _)| *n).collect();
    let spec = if !given.is_empty() {
        if args.spec.is_some() {
            return Err(CliError::Usage("give either --spec or inline parameters, not both".into()));
        }
        let missing: Vec<&str> = inline.iter().filter(|(_, set)| !set).map(|(n, _)| *n).collect();
        if !missing.is_empty() {
            return Err(CliError::Usage(format!("inline spec is missing {}", missing.join(", "))));
        }
        QClassSpec {
            q: args.q.unwrap(),
            m: args.m.unwrap(),
            l: args.l.unwrap(),
            alpha: args.alpha.unwrap(),
            a: args.a.unwrap(),
            b: args.b.unwrap(),
        }
    } else {
        let path = match &args.spec {
            Some(p) => p.clone(),
            None => std::env::var_os(SPEC_ENV).map(PathBuf::from).ok_or_else(|| {
                CliError::Usage(format!("no spec given: use --spec, the inline flags, or {SPEC_ENV}"))
            })?,
        };
        read_json(&path)?
    };
    spec.validate()?;
    Ok(spec)
}

fn disk_grid(knobs: &Knobs) -> CliResult<DiskGrid> {
    let grid = DiskGrid {
        radial_count: knobs.grid_radial,
        angular_count: knobs.grid_angular,
        r_max: knobs.rmax,
        ..DiskGrid::default()
    };
    grid.validate()?;
    Ok(grid)
}

fn check_knobs(knobs: &Knobs) -> CliResult<()> {
    if knobs.degree < 2 {
        return Err(CliError::Validation(format!("--degree must be at least 2, got {}", knobs.degree)));
    }
    if knobs.kmax < 2 {
        return Err(CliError::Validation(format!("--kmax must be at least 2, got {}", knobs.kmax)));
    }
    if knobs.nodes < MIN_NODES {
        return Err(CliError::Validation(format!("--nodes must be at least {MIN_NODES}, got {}", knobs.nodes)));
    }
    disk_grid(knobs).map(|_| ())
}

fn json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn negative_form(f: &TruncatedSeries, path: &Path) -> CliResult<NegativeCoeffSeries> {
    f.as_negative_coeff().ok_or_else(|| {
        CliError::Validation(format!(
            "{}: not of the form z - Σ b_k z^k with b_k ≥ 0",
            path.display()
        ))
    })
}

#[derive(Serialize)]
struct CheckOutput {
    negative_form: bool,
    coefficient: ClassReport,
    grid: AuditReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    necessity_witness: Option<NecessityWitness>,
}

fn check(cli: &Cli, path: &Path) -> CliResult<(String, u8)> {
    let spec = load_spec(&cli.spec)?;
    check_knobs(&cli.knobs)?;
    let f: TruncatedSeries = read_json(path)?;
    let coefficient = class_report(&f, &spec);
    let grid = subordination_grid_check(&f, &spec, &disk_grid(&cli.knobs)?)?;
    let t_form = f.as_negative_coeff();
    let necessity_witness = match &t_form {
        Some(t) if !coefficient.member => necessity_witness_search(t, &spec, DEFAULT_WITNESS_RMAX)?,
        _ => None,
    };
    let out = CheckOutput { negative_form: t_form.is_some(), coefficient, grid, necessity_witness };
    let code = if out.coefficient.member { EXIT_PASS } else { EXIT_FAIL };

    let text = match cli.format.unwrap_or(Format::Pretty) {
        Format::Json => json_pretty(&out),
        Format::Csv => csv_text(
            &["test", "member", "slack_or_margin", "verdict", "witness_re", "witness_im"],
            &[
                vec![
                    "coefficient".into(),
                    out.coefficient.member.to_string(),
                    out.coefficient.slack.to_string(),
                    String::new(),
                    out.necessity_witness.map(|w| w.z.to_string()).unwrap_or_default(),
                    out.necessity_witness.map(|_| "0".to_string()).unwrap_or_default(),
                ],
                {
                    let z = out.grid.witness.as_ref().and_then(|w| w.z);
                    vec![
                        "grid".into(),
                        out.grid.passed().to_string(),
                        out.grid.worst_margin.to_string(),
                        verdict_name(out.grid.verdict).into(),
                        z.map(|z| z[0].to_string()).unwrap_or_default(),
                        z.map(|z| z[1].to_string()).unwrap_or_default(),
                    ]
                },
            ],
        ),
        Format::Pretty => {
            let mut s = format!(
                "coefficient test ({}): {}  slack {}\n",
                if out.negative_form { "exact, negative coefficients" } else { "sufficient" },
                if out.coefficient.member { "member" } else { "not a member" },
                sig(out.coefficient.slack),
            );
            s += &format!(
                "grid test: {}  worst margin {}\n",
                verdict_name(out.grid.verdict),
                sig(out.grid.worst_margin)
            );
            if let Some(w) = out.grid.witness.as_ref().and_then(|w| w.z) {
                let sign = if w[1] < 0.0 { '-' } else { '+' };
                s += &format!("  grid witness z = {} {sign} {}i\n", sig(w[0]), sig(w[1].abs()));
            }
            if let Some(w) = out.necessity_witness {
                s += &format!("necessity witness z = {}  margin {}\n", sig(w.z), sig(w.margin));
            } else if out.negative_form && !out.coefficient.member {
                s += &format!("necessity witness: none found below r = {DEFAULT_WITNESS_RMAX}\n");
            }
            s
        }
    };
    Ok((text, code))
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Boundary => "boundary",
        Verdict::Unconverged => "unconverged",
        Verdict::Invalid => "invalid",
    }
}

fn extremal(cli: &Cli, k: usize) -> CliResult<(String, u8)> {
    if k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let spec = load_spec(&cli.spec)?;
    let f = extremal_fk(k, &spec)?.to_series();
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string(&f).expect("serializable") + "\n",
        Format::Csv => {
            let rows: Vec<Vec<String>> = f
                .coefficients()
                .iter()
                .enumerate()
                .map(|(i, c)| vec![(i + 1).to_string(), c.re.to_string(), c.im.to_string()])
                .collect();
            csv_text(&["k", "re", "im"], &rows)
        }
        Format::Pretty => {
            let mut t = Table::new(["k", "a_k"]);
            for (i, c) in f.coefficients().iter().enumerate() {
                if c.re != 0.0 || c.im != 0.0 {
                    t.row(vec![(i + 1).to_string(), sig(c.re)]);
                }
            }
            t.render()
        }
    };
    Ok((text, EXIT_PASS))
}

#[derive(Serialize)]
struct DistortionRow {
    r: f64,
    f_lower: f64,
    f_upper: f64,
    fprime_lower: f64,
    fprime_upper: f64,
    fprime_lower_clamped: bool,
}

#[derive(Serialize)]
struct RadiusRow {
    kind: RadiusKind,
    psi: f64,
    radius: f64,
    minimizing_k: usize,
    unclamped_inf: f64,
    converged: bool,
}

#[derive(Serialize)]
struct BoundsOutput {
    distortion: Vec<DistortionRow>,
    radii: Vec<RadiusRow>,
}

fn bounds(cli: &Cli, rs: &[f64], psis: &[f64]) -> CliResult<(String, u8)> {
    let spec = load_spec(&cli.spec)?;
    check_knobs(&cli.knobs)?;
    if let Some(psi) = psis.iter().find(|p| !(0.0..1.0).contains(*p)) {
        return Err(CliError::Validation(format!("psi must satisfy 0 ≤ psi < 1, got {psi}")));
    }
    let mut distortion = Vec::with_capacity(rs.len());
    for &r in rs {
        let f = distortion_f(r, &spec)?;
        let d = distortion_fprime(r, &spec)?;
        distortion.push(DistortionRow {
            r,
            f_lower: f.lower,
            f_upper: f.upper,
            fprime_lower: d.lower,
            fprime_upper: d.upper,
            fprime_lower_clamped: d.lower_clamped,
        });
    }
    let mut radii = Vec::new();
    for &psi in psis {
        for kind in RadiusKind::ALL {
            let res = radius(kind, psi, &spec, cli.knobs.kmax)?;
            radii.push(RadiusRow {
                kind,
                psi,
                radius: res.radius,
                minimizing_k: res.minimizing_k,
                unclamped_inf: res.unclamped_inf,
                converged: res.converged,
            });
        }
    }
    let out = BoundsOutput { distortion, radii };

    let text = match cli.format.unwrap_or(Format::Pretty) {
        Format::Json => json_pretty(&out),
        Format::Csv => {
            let d: Vec<Vec<String>> = out
                .distortion
                .iter()
                .map(|d| {
                    vec![
                        d.r.to_string(),
                        d.f_lower.to_string(),
                        d.f_upper.to_string(),
                        d.fprime_lower.to_string(),
                        d.fprime_upper.to_string(),
                        d.fprime_lower_clamped.to_string(),
                    ]
                })
                .collect();
            let r: Vec<Vec<String>> = out
                .radii
                .iter()
                .map(|r| {
                    vec![
                        r.kind.to_string(),
                        r.psi.to_string(),
                        r.radius.to_string(),
                        r.minimizing_k.to_string(),
                        r.unclamped_inf.to_string(),
                    ]
                })
                .collect();
            csv_text(&["r", "f_lower", "f_upper", "fprime_lower", "fprime_upper", "fprime_lower_clamped"], &d)
                + "\n"
                + &csv_text(&["kind", "psi", "radius", "minimizing_k", "unclamped_inf"], &r)
        }
        Format::Pretty => {
            let mut t = Table::new(["r", "|f| lower", "|f| upper", "|f'| lower", "|f'| upper"]);
            for d in &out.distortion {
                let clamp = if d.fprime_lower_clamped { " (clamped)" } else { "" };
                t.row(vec![
                    sig(d.r),
                    sig(d.f_lower),
                    sig(d.f_upper),
                    format!("{}{clamp}", sig(d.fprime_lower)),
                    sig(d.fprime_upper),
                ]);
            }
            let mut u = Table::new(["kind", "psi", "radius", "minimizing_k", "unclamped_inf"]);
            for r in &out.radii {
                let note = if r.converged { "" } else { " (unconverged)" };
                u.row(vec![
                    r.kind.to_string(),
                    sig(r.psi),
                    format!("{}{note}", sig(r.radius)),
                    r.minimizing_k.to_string(),
                    sig(r.unclamped_inf),
                ]);
            }
            t.render() + "\n" + &u.render()
        }
    };
    Ok((text, EXIT_PASS))
}

fn audit_config(knobs: &Knobs) -> CliResult<AuditConfig> {
    check_knobs(knobs)?;
    let base = AuditConfig::default();
    let samples = knobs.samples.unwrap_or(base.samples);
    Ok(AuditConfig {
        seed: knobs.seed,
        degree: knobs.degree,
        grid: disk_grid(knobs)?,
        samples,
        k_max: knobs.kmax,
        nodes: knobs.nodes,
        distortion: DistortionCheckConfig { samples, degree: knobs.degree, ..base.distortion.clone() },
        mean_samples: knobs.samples.map_or(base.mean_samples, |s| s.min(base.mean_samples)),
        ..base
    })
}

const SUMMARY_HEADER: [&str; 10] =
    ["spec_index", "claim_id", "q", "m", "l", "alpha", "A", "B", "verdict", "worst_margin"];

fn summary_csv(reports: &[AuditReport]) -> String {
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let mut row = vec![r.spec_index.map(|i| i.to_string()).unwrap_or_default(), r.claim_id.clone()];
            match &r.spec {
                Some(s) => row.extend([
                    s.q.to_string(),
                    s.m.to_string(),
                    s.l.to_string(),
                    s.alpha.to_string(),
                    s.a.to_string(),
                    s.b.to_string(),
                ]),
                None => row.extend(std::iter::repeat_n(String::new(), 6)),
            }
            row.push(verdict_name(r.verdict).into());
            row.push(r.worst_margin.to_string());
            row
        })
        .collect();
    csv_text(&SUMMARY_HEADER, &rows)
}

fn audit(cli: &Cli, grid: Option<&Path>, summary: Option<&Path>) -> CliResult<(String, u8)> {
    let config = audit_config(&cli.knobs)?;
    let specs: Vec<QClassSpec> = match grid {
        Some(path) => read_json(path)?,
        None => default_spec_grid(),
    };
    let reports = run_audit(&specs, &config);

    let code = if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        EXIT_FAIL
    } else if reports.iter().any(|r| r.verdict == Verdict::Invalid) {
        EXIT_INVALID
    } else {
        EXIT_PASS
    };

    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => reports
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
            .collect(),
        Format::Csv => summary_csv(&reports),
        Format::Pretty => {
            let mut t = Table::new(["claim", "q", "m", "l", "alpha", "A", "B", "verdict", "worst_margin"]);
            for r in &reports {
                let s = r.spec.unwrap_or(QClassSpec { q: f64::NAN, m: 0, l: 0, alpha: f64::NAN, a: f64::NAN, b: f64::NAN });
                t.row(vec![
                    r.claim_id.clone(),
                    sig(s.q),
                    s.m.to_string(),
                    s.l.to_string(),
                    sig(s.alpha),
                    sig(s.a),
                    sig(s.b),
                    verdict_name(r.verdict).into(),
                    sig(r.worst_margin),
                ]);
            }
            let failed = reports.iter().filter(|r| r.verdict == Verdict::Fail).count();
            t.render() + &format!("\n{} reports, {failed} failed\n", reports.len())
        }
    };
    if let Some(path) = summary {
        write_file(path, &summary_csv(&reports))?;
    }
    Ok((text, code))
}

#[derive(Serialize)]
struct MeanRow {
    r: f64,
    s: f64,
    value: f64,
    extremal: f64,
    difference: f64,
    nodes: usize,
    converged: bool,
    verdict: Verdict,
}

fn integral_means(cli: &Cli, series: Option<&Path>, rs: &[f64], ss: &[f64]) -> CliResult<(String, u8)> {
    let spec = load_spec(&cli.spec)?;
    check_knobs(&cli.knobs)?;
    let f2 = extremal_fk(2, &spec)?;
    let f = match series {
        Some(path) => {
            let t = negative_form(&read_json(path)?, path)?;
            let v = membership_iff_t(&t, &spec);
            if !v.member {
                return Err(CliError::Validation(format!(
                    "{}: not a member of the class (slack {})",
                    path.display(),
                    v.slack
                )));
            }
            t
        }
        None => f2.clone(),
    };

    let mut rows = Vec::new();
    for &r in rs {
        for &s in ss {
            let report = integral_mean_dominance(&f, &spec, r, s, cli.knobs.nodes)?;
            let lhs = integral_mean(&f, r, s, cli.knobs.nodes)?;
            let rhs = integral_mean(&f2, r, s, cli.knobs.nodes)?;
            rows.push(MeanRow {
                r,
                s,
                value: lhs.value,
                extremal: rhs.value,
                difference: report.worst_margin,
                nodes: lhs.nodes.max(rhs.nodes),
                converged: lhs.converged && rhs.converged,
                verdict: report.verdict,
            });
        }
    }
    let code = if rows.iter().any(|r| r.verdict == Verdict::Fail) { EXIT_FAIL } else { EXIT_PASS };

    let text = match cli.format.unwrap_or(Format::Pretty) {
        Format::Json => json_pretty(&rows),
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|m| {
                    vec![
                        m.r.to_string(),
                        m.s.to_string(),
                        m.value.to_string(),
                        m.extremal.to_string(),
                        m.difference.to_string(),
                        m.nodes.to_string(),
                        m.converged.to_string(),
                        verdict_name(m.verdict).into(),
                    ]
                })
                .collect();
            csv_text(&["r", "s", "value", "extremal", "difference", "nodes", "converged", "verdict"], &body)
        }
        Format::Pretty => {
            let mut t = Table::new(["r", "s", "∫|f|^s", "∫|f_2|^s", "difference", "verdict"]);
            for m in &rows {
                t.row(vec![
                    sig(m.r),
                    sig(m.s),
                    sig(m.value),
                    sig(m.extremal),
                    sig(m.difference),
                    verdict_name(m.verdict).into(),
                ]);
            }
            t.render()
        }
    };
    Ok((text, code))
}

#[derive(Serialize)]
struct DecomposeOutput {
    /// `weights[0]` belongs to `z`, `weights[k-1]` to `f_k`.
    weights: Vec<f64>,
    sum: f64,
    roundtrip_error: f64,
}

fn decompose_cmd(cli: &Cli, path: &Path) -> CliResult<(String, u8)> {
    let spec = load_spec(&cli.spec)?;
    let t = negative_form(&read_json(path)?, path)?;
    let weights = decompose(&t, &spec)?;
    let back = recompose(&weights, &spec)?;
    let roundtrip_error = t
        .magnitudes()
        .iter()
        .zip(back.magnitudes())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let out = DecomposeOutput { sum: weights.iter().sum(), weights, roundtrip_error };

    let text = match cli.format.unwrap_or(Format::Pretty) {
        Format::Json => json_pretty(&out),
        Format::Csv => {
            let rows: Vec<Vec<String>> = out
                .weights
                .iter()
                .enumerate()
                .map(|(i, w)| vec![(i + 1).to_string(), w.to_string()])
                .collect();
            csv_text(&["k", "weight"], &rows)
        }
        Format::Pretty => {
            let mut t = Table::new(["k", "weight"]);
            for (i, w) in out.weights.iter().enumerate() {
                if *w != 0.0 {
                    t.row(vec![(i + 1).to_string(), sig(*w)]);
                }
            }
            t.render() + &format!("sum {}  round-trip error {}\n", sig(out.sum), sig(out.roundtrip_error))
        }
    };
    Ok((text, EXIT_PASS))
}
