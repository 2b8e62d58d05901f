use std::fmt::Write as _;
use std::path::Path;

use quasidense::convexcalc::slope_lattice;
use quasidense::gallery::{self, SkewDomainElement};
use quasidense::operators::PointSpec;
use quasidense::quasidensity::{Certificate, Verdict};
use quasidense::sampling::rng;
use quasidense::{
    biconjugate_envelope_on, conjugate as grid_conjugate, probe_batch, Axis, FinTailSeq,
    GridFunction, Lattice, OperatorGraph, OperatorSpec, PairedPoint, ProbeBudget,
};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::report::{csv_field, Report};
use crate::suites::{self, Suite};
use crate::{CliError, GalleryName};

/// Output name, rendered body, and whether every check passed.
pub type Output = (String, String, bool);

const GALLERY_SLACK: f64 = -1e-9;

fn to_json<S: Serialize>(v: &S) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Compute(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => Ok(report.to_csv()),
    }
}

pub fn suite(name: Suite, cfg: &RunConfig) -> Result<Output, CliError> {
    let rows = suites::run(name, cfg)?;
    let report = Report::new(format!("suite {}", name.name()), cfg, rows);
    Ok((
        format!("suite-{}", name.name()),
        render(&report, cfg.format)?,
        report.pass,
    ))
}

pub fn sum_theorem(cfg: &RunConfig) -> Result<Output, CliError> {
    let lattice = match &cfg.grid {
        Some(g) => g.lattice()?,
        None => Lattice::cube(Axis::new(-4.0, 4.0, 0.125)?, 2)?,
    };
    let rows = suites::sum_theorem(&lattice, cfg.tol_exact)?;
    let report = Report::new("sum-theorem", cfg, rows);
    Ok((
        "sum-theorem".into(),
        render(&report, cfg.format)?,
        report.pass,
    ))
}

fn load_operator(arg: &str) -> Result<OperatorGraph<f64>, CliError> {
    if let Some(op) = OperatorGraph::builtin(arg) {
        return Ok(op);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(CliError::Config(format!(
            "operator {arg:?} is neither a file nor a built-in (tail, skewq, bstele)"
        )));
    }
    let spec: OperatorSpec =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::parse(arg, &e))?;
    Ok(spec.build()?)
}

/// Places a parsed point in the operator's space, padding Euclidean coordinates with zeros.
fn place(op: &OperatorGraph<f64>, spec: &PointSpec) -> Result<PairedPoint<f64>, CliError> {
    let (x, xs) = match spec {
        PointSpec::Pair(x, xs) | PointSpec::Named { x, xstar: xs } => (x, xs),
    };
    let space = op.space();
    let fit = |v: &FinTailSeq<f64>| match space.dim() {
        Some(n) if v.is_finitely_supported() && v.prefix_len() <= n => v.extended(n),
        _ => v.clone(),
    };
    Ok(PairedPoint::new(space, fit(x), fit(xs))?)
}

#[derive(Serialize)]
struct Summary {
    quasidense_evidence: usize,
    not_quasidense: usize,
    indeterminate: usize,
}

#[derive(Serialize)]
struct ProbeReport<'a> {
    command: &'static str,
    config: &'a RunConfig,
    certificates: Vec<Certificate<f64>>,
    summary: Summary,
}

pub fn probe(
    operator: &str,
    points: Option<&Path>,
    point: Option<&str>,
    cfg: &RunConfig,
) -> Result<Output, CliError> {
    let op = load_operator(operator)?;
    let specs: Vec<PointSpec> = match (points, point) {
        (Some(p), _) => {
            let label = p.display().to_string();
            serde_json::from_str(&read(p)?).map_err(|e| CliError::parse(&label, &e))?
        }
        (None, Some(text)) => {
            vec![serde_json::from_str(text).map_err(|e| CliError::parse("--point", &e))?]
        }
        (None, None) => return Err(CliError::Config("give --points or --point".into())),
    };
    let cs = specs
        .iter()
        .map(|s| place(&op, s))
        .collect::<Result<Vec<_>, _>>()?;
    let budget = ProbeBudget {
        truncation: cfg.truncation,
        seed: cfg.seed,
        tol: cfg.tol_opt,
        ..ProbeBudget::default()
    };
    let certificates = probe_batch(&op, &cs, &budget)
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let mut summary = Summary {
        quasidense_evidence: 0,
        not_quasidense: 0,
        indeterminate: 0,
    };
    for c in &certificates {
        match c.verdict {
            Verdict::QuasidenseEvidence => summary.quasidense_evidence += 1,
            Verdict::NotQuasidense(_) => summary.not_quasidense += 1,
            Verdict::Indeterminate => summary.indeterminate += 1,
        }
    }
    let body = match cfg.format {
        Format::Json => to_json(&ProbeReport {
            command: "probe",
            config: cfg,
            certificates,
            summary,
        })?,
        Format::Csv => {
            let mut s = String::from("index,inf_estimate,lower_bound,verdict\n");
            for (i, c) in certificates.iter().enumerate() {
                let lb = c
                    .lower_bound
                    .as_ref()
                    .map_or(String::new(), |b| format!("{:e}", b.value));
                let verdict = match c.verdict {
                    Verdict::QuasidenseEvidence => "quasidense_evidence".to_string(),
                    Verdict::NotQuasidense(v) => format!("not_quasidense({v:e})"),
                    Verdict::Indeterminate => "indeterminate".to_string(),
                };
                let _ = writeln!(s, "{i},{:e},{lb},{}", c.inf_estimate, csv_field(&verdict));
            }
            s
        }
    };
    Ok(("probe".into(), body, true))
}

pub fn conjugate(file: &Path, envelope: bool, cfg: &RunConfig) -> Result<Output, CliError> {
    let label = file.display().to_string();
    let f: GridFunction<f64> =
        serde_json::from_str(&read(file)?).map_err(|e| CliError::parse(&label, &e))?;
    let dual = match &cfg.grid {
        Some(g) => g.lattice()?,
        None => slope_lattice(&f)?,
    };
    let (name, out) = if envelope {
        ("envelope", biconjugate_envelope_on(&f, &dual)?)
    } else {
        ("conjugate", grid_conjugate(&f, &dual)?)
    };
    let body = match cfg.format {
        Format::Json => to_json(&out)?,
        Format::Csv => out.to_csv(),
    };
    Ok((name.into(), body, true))
}

#[derive(Serialize)]
struct GallerySample {
    sample: usize,
    r_l: f64,
    lower: f64,
    slack: f64,
}

/// Samples `r_L` against its closed-form lower bound; for `tail` the value is
/// `q_L = <x*, Tx*>` with lower bound 0.
pub fn gallery(name: GalleryName, samples: usize, cfg: &RunConfig) -> Result<Output, CliError> {
    let mut g = rng(cfg.seed);
    let n = cfg.truncation;
    let rows = (0..samples)
        .map(|i| {
            let (r_l, lower) = match name {
                GalleryName::Tail => {
                    let xs = gallery::random_finite::<f64>(&mut g, n, 1.0);
                    (xs.pair(&gallery::tail_op(&xs)?)?, 0.0)
                }
                GalleryName::Skewq => {
                    let b = gallery::skew_bound(&SkewDomainElement::<f64>::random(&mut g, n, 1.0))?;
                    (b.r_l, b.lower)
                }
                GalleryName::Bstele => {
                    let b = gallery::bs_bound(&gallery::random_finite::<f64>(&mut g, n, 1.0))?;
                    (b.r_l, b.lower)
                }
            };
            Ok(GallerySample {
                sample: i,
                r_l,
                lower,
                slack: r_l - lower,
            })
        })
        .collect::<Result<Vec<_>, quasidense::Error>>()?;
    let pass = rows.iter().all(|r| r.slack >= GALLERY_SLACK);
    let body = match cfg.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut s = String::from("sample,r_l,lower,slack\n");
            for r in &rows {
                let _ = writeln!(s, "{},{:e},{:e},{:e}", r.sample, r.r_l, r.lower, r.slack);
            }
            s
        }
    };
    let label = match name {
        GalleryName::Tail => "tail",
        GalleryName::Skewq => "skewq",
        GalleryName::Bstele => "bstele",
    };
    Ok((format!("gallery-{label}"), body, pass))
}
