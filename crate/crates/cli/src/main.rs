//! `schwarz-lab`: run the inequality suites, sharpness searches, Loewner
//! audits and radial probes from the command line.
//!
//! Exit codes: 0 success, 1 violation or missed target, 2 usage error.

mod manifest;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use manifest::{csv_document, json_document, RunManifest};
use schwarz_lab::harness::{self, GeneratorConfig, SuiteOptions};
use schwarz_lab::numerics::{self, ArcSpec, LOEWNER_TOLERANCE};
use schwarz_lab::sharpness::{self, FamilySpec};
use schwarz_lab::{bounds, BoundaryPoint, DiskSelfMap, EquationTag, Error};

#[derive(Parser)]
#[command(
    name = "schwarz-lab",
    version,
    about = "Boundary Schwarz lemma laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the selected inequalities over a seeded corpus of maps.
    Verify(VerifyArgs),
    /// Drive an inequality's slack toward zero over a Blaschke family.
    Sharpness(SharpnessArgs),
    /// Compare image arc length against the sharpened Loewner bound.
    Loewner(LoewnerArgs),
    /// Radial quotient ladder toward a boundary point.
    Probe(ProbeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 8)]
    degree_max: u32,
    /// Largest zero modulus.
    #[arg(long, default_value_t = 0.95)]
    cap: f64,
    /// Comma-separated equation tags, or `all`.
    #[arg(long, default_value = "all", value_parser = parse_equations)]
    eq: EquationList,
    /// Order of the zero forced at the origin.
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Post-compose every sample with a random disk automorphism.
    #[arg(long)]
    post_shift: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when absent. Not part of the manifest.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SharpnessArgs {
    #[arg(long, value_parser = parse_equation)]
    eq: EquationTag,
    /// Total degree; defaults to `k + 1`.
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Optimizer evaluations, split over the starts.
    #[arg(long, default_value_t = 5000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.95)]
    cap: f64,
    /// Exit 1 unless the minimum slack reaches this value.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when absent. Not part of the manifest.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct LoewnerArgs {
    /// Map as inline JSON (starting with `{`) or a path to a JSON file.
    #[arg(long)]
    map: String,
    /// Arc `start,end` in radians; defaults to the full circle.
    #[arg(long, value_parser = parse_arc, allow_hyphen_values = true)]
    arc: Option<ArcSpec>,
    #[arg(long, default_value_t = LOEWNER_TOLERANCE)]
    tolerance: f64,
    /// Rows of the CSV arc profile.
    #[arg(long, default_value_t = 512)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when absent. Not part of the manifest.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ProbeArgs {
    #[arg(long)]
    map: String,
    /// Boundary angle in radians.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    angle: f64,
    /// Number of rungs `t = 1 - 2^-j`.
    #[arg(long, default_value_t = 20)]
    depth: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; stdout when absent. Not part of the manifest.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
struct EquationList(Vec<EquationTag>);

fn parse_equation(s: &str) -> Result<EquationTag, String> {
    s.trim().parse().map_err(|e: Error| e.to_string())
}

fn parse_equations(s: &str) -> Result<EquationList, String> {
    if s.trim() == "all" {
        return Ok(EquationList(EquationTag::ALL.to_vec()));
    }
    s.split(',')
        .map(parse_equation)
        .collect::<Result<Vec<_>, _>>()
        .map(EquationList)
}

fn parse_arc(s: &str) -> Result<ArcSpec, String> {
    let (start, end) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `start,end`, got `{s}`"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    ArcSpec::new(parse(start)?, parse(end)?).map_err(|e| e.to_string())
}

/// A failure and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Falsified { .. } | Error::QuadratureDiverged { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

/// Whether the run met its mathematical contract.
type Outcome = Result<bool, Failure>;

fn load_map(spec: &str) -> Result<DiskSelfMap, Failure> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_owned()
    } else {
        fs::read_to_string(spec)
            .map_err(|e| Failure::usage(format!("reading map `{spec}`: {e}")))?
    };
    Ok(DiskSelfMap::from_json(&text)?)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: 2,
            message: format!("writing {}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:e}"))
}

fn verify(args: &VerifyArgs) -> Outcome {
    let config = GeneratorConfig {
        seed: args.seed,
        samples: args.samples,
        max_degree: args.degree_max,
        zero_modulus_cap: args.cap,
        origin_multiplicity: args.k,
        with_post_shift: args.post_shift,
        ..GeneratorConfig::default()
    };
    config.validate()?;
    let summary = harness::run_suite_with(&config, &args.eq.0, SuiteOptions::default())?;
    let manifest = RunManifest::new("verify", serde_json::to_value(args)?);
    let text = match args.format {
        Format::Json => json_document(&manifest, &summary)?,
        Format::Csv => {
            let rows: Vec<String> = summary
                .equations
                .iter()
                .map(|e| {
                    format!(
                        "{},{},{},{},{}",
                        e.equation,
                        e.checks,
                        e.skipped,
                        opt(e.worst_slack),
                        e.violations
                    )
                })
                .collect();
            csv_document(
                &manifest,
                "equation,checks,skipped,worst_slack,violations",
                &rows,
            )?
        }
    };
    emit(args.out.as_ref(), &text)?;
    for e in &summary.equations {
        eprintln!(
            "{:<6} checks {:>8}  skipped {:>6}  worst slack {:>12}  violations {}",
            e.equation.as_str(),
            e.checks,
            e.skipped,
            opt(e.worst_slack),
            e.violations
        );
    }
    Ok(summary.passed())
}

fn sharpness_run(args: &SharpnessArgs) -> Outcome {
    let degree = args.degree.unwrap_or(args.k + 1);
    let mut family = FamilySpec::new(degree, args.k)?;
    family.zero_modulus_cap = args.cap;
    family.validate()?;
    let result = sharpness::minimize_slack(&family, args.eq, args.budget, args.seed)?;
    let manifest = RunManifest::new("sharpness", serde_json::to_value(args)?);
    let text = match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Payload<'a> {
                result: &'a sharpness::SharpnessResult,
                extremal_distance: Option<f64>,
                target: f64,
                target_met: bool,
            }
            json_document(
                &manifest,
                &Payload {
                    result: &result,
                    extremal_distance: sharpness::extremal_distance(&result),
                    target: args.tolerance,
                    target_met: result.min_slack <= args.tolerance,
                },
            )?
        }
        Format::Csv => {
            let rows: Vec<String> = result
                .trace
                .iter()
                .map(|t| format!("{},{:e}", t.iteration, t.best_slack))
                .collect();
            csv_document(&manifest, "iteration,best_slack", &rows)?
        }
    };
    emit(args.out.as_ref(), &text)?;
    eprintln!(
        "{} min slack {:e} at angle {:.6} after {} evaluations",
        result.equation, result.min_slack, result.argmin_boundary_angle, result.evaluations
    );
    Ok(result.min_slack <= args.tolerance)
}

fn loewner(args: &LoewnerArgs) -> Outcome {
    let f = load_map(&args.map)?;
    let arc = args.arc.unwrap_or_else(ArcSpec::full_circle);
    if args.tolerance.is_nan() || args.tolerance <= 0.0 {
        return Err(Failure::usage("--tolerance must be positive"));
    }
    let mut check = numerics::loewner_check(&f, arc)?;
    check.report = check.report.with_tolerance(args.tolerance);
    check.classical = check.classical.with_tolerance(args.tolerance);
    let manifest = RunManifest::new("loewner", serde_json::to_value(args)?);
    let text = match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Payload<'a> {
                check: &'a numerics::LoewnerCheck,
                ratio: f64,
            }
            json_document(
                &manifest,
                &Payload {
                    check: &check,
                    ratio: check.ratio(),
                },
            )?
        }
        Format::Csv => {
            let profile = numerics::arc_profile(&f, arc, args.points)?;
            let mut buf = Vec::new();
            numerics::write_arc_csv(&profile, &mut buf).expect("writing to memory");
            let body = String::from_utf8(buf).expect("csv is utf-8");
            let mut lines = body.lines();
            let header = lines.next().unwrap_or_default().to_owned();
            let rows: Vec<String> = lines.map(str::to_owned).collect();
            csv_document(&manifest, &header, &rows)?
        }
    };
    emit(args.out.as_ref(), &text)?;
    eprintln!(
        "sigma {:.12} over s {:.12} (ratio {:.12}), bound slack {:e}",
        check.quadrature.value,
        arc.length(),
        check.ratio(),
        check.report.slack
    );
    Ok(check.report.holds() && check.classical.holds())
}

fn probe(args: &ProbeArgs) -> Outcome {
    let f = load_map(&args.map)?;
    let b = BoundaryPoint::new(args.angle)?;
    let p = bounds::sequence_probe(&f, b, args.depth)?;
    let reports = p.rung_reports();
    let manifest = RunManifest::new("probe", serde_json::to_value(args)?);
    let text = match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Payload<'a> {
                probe: &'a bounds::SequenceProbe,
                rungs: &'a [bounds::SlackReport],
                limit_gap: f64,
            }
            json_document(
                &manifest,
                &Payload {
                    probe: &p,
                    rungs: &reports,
                    limit_gap: p.limit_gap(),
                },
            )?
        }
        Format::Csv => {
            let rows: Vec<String> = reports
                .iter()
                .enumerate()
                .map(|(j, r)| {
                    format!(
                        "{},{:e},{:e},{:e},{:e},{:e}",
                        j + 1,
                        p.radii[j],
                        p.quotients[j],
                        p.rung_bounds[j],
                        r.slack,
                        r.tolerance
                    )
                })
                .collect();
            csv_document(
                &manifest,
                "rung,t,quotient,rung_bound,slack,tolerance",
                &rows,
            )?
        }
    };
    emit(args.out.as_ref(), &text)?;
    eprintln!(
        "last quotient {:.12}, |f'(b)| {:.12}, limit bound {:.12}",
        p.quotients.last().copied().unwrap_or(f64::NAN),
        p.boundary_derivative,
        p.limit_bound
    );
    Ok(reports.iter().all(bounds::SlackReport::holds))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Sharpness(a) => sharpness_run(a),
        Command::Loewner(a) => loewner(a),
        Command::Probe(a) => probe(a),
    };
    match harness::with_threads(harness::threads_from_env(), run) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
