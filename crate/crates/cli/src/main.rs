mod input;
mod text;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use polarcut::cuts::{
    check_cut_validity, generate_cut, is_s_free, maximality_certificate, CutValidity, SFreeBody, SFreeVerdict,
};
use polarcut::sampling::{random_corpus, sample_points};
use polarcut::sublinear::{
    gauge_eval, lemma_notrec_suite, random_valid_c, reconstruct_check, rho_eval, sandwich_check, CheckReport,
    SandwichReport,
};
use polarcut::{Error, HPolyhedron, Rational, Vector};
use serde::Serialize;
use serde_json::Value;

use input::{load, load_polyhedra, BodyInput, CutInput, InputError, PointsInput};

/// Exact polar duality, gauges and intersection cuts over the rationals.
#[derive(Debug, Parser)]
#[command(name = "polarcut", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Half-width of the lattice search box around round(f).
    #[arg(long, global = true, default_value_t = polarcut::cuts::DEFAULT_RADIUS)]
    radius: u32,

    /// Sample points per instance for `verify`.
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,

    /// Seed for random instances, generators and samples.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generators of the polar of an H-polyhedron.
    Polar { input: PathBuf },
    /// Gauge of an H-polyhedron at the listed points.
    Gauge { input: PathBuf },
    /// Minimal representation ρ_K at the listed points.
    Rho { input: PathBuf },
    /// Run the property suite on the given or on random polyhedra.
    Verify {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        input: Option<PathBuf>,
        /// Generate this many random polyhedra instead of reading a file.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Intersection cut from an S-free body.
    Cut { input: PathBuf },
    /// Check a cut against every lattice point in the search box.
    CheckCut { input: PathBuf },
    /// Search the box for a lattice point inside the body.
    Sfree { input: PathBuf },
    /// Facet-witness maximality certificate for the body.
    Maximal { input: PathBuf },
}

/// How a command ended, apart from its report.
enum Status {
    Pass,
    /// Property violation or refused precondition.
    Fail(String),
}

enum Failure {
    Input(InputError),
    Refused { message: String, report: Value },
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

/// Library errors on parsed input: refusals of an operation's precondition
/// exit 1 with a report, anything else is an input problem.
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotSFree { witness } => Failure::Refused {
                message: format!("body is not S-free: lattice point {witness} is in its interior"),
                report: to_value(&Refusal { refused: true, reason: "not S-free", z: Some(witness) }),
            },
            Error::NotUnitBall | Error::InRecessionCone(_) => Failure::Refused {
                message: e.to_string(),
                report: to_value(&Refusal { refused: true, reason: "precondition", z: None }),
            },
            other => Failure::Input(InputError(format!("invalid input: {other}"))),
        }
    }
}

#[derive(Serialize)]
struct Refusal {
    refused: bool,
    reason: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    z: Option<Vector>,
}

#[derive(Serialize)]
struct PolarReport<'a> {
    dim: usize,
    points: &'a [Vector],
    khat_points: &'a [Vector],
}

#[derive(Serialize)]
struct PointValue {
    x: Vector,
    value: Rational,
}

#[derive(Serialize)]
struct EvalReport {
    function: &'static str,
    values: Vec<PointValue>,
}

#[derive(Serialize)]
struct ExposedReport {
    rows: usize,
    failures: Vec<usize>,
}

#[derive(Serialize)]
struct InstanceReport {
    instance: usize,
    dim: usize,
    rows: usize,
    violations: usize,
    sandwich: SandwichReport,
    reconstruct: CheckReport,
    not_recession: CheckReport,
    exposed: ExposedReport,
}

#[derive(Serialize)]
struct VerifyReport {
    passed: bool,
    violations: usize,
    instances: usize,
    samples: usize,
    seed: u64,
    results: Vec<InstanceReport>,
}

fn to_value<T: Serialize>(report: &T) -> Value {
    serde_json::to_value(report).expect("reports serialize")
}

fn evaluate(path: &Path, function: &'static str) -> Result<(Value, Status), Failure> {
    let (h, points) = load::<PointsInput>(path)?.split()?;
    let eval = if function == "gauge" { gauge_eval } else { rho_eval };
    let values = points
        .into_iter()
        .map(|x| Ok(PointValue { value: eval(&h, &x)?, x }))
        .collect::<Result<_, Error>>()?;
    Ok((to_value(&EvalReport { function, values }), Status::Pass))
}

fn verify_instance(h: &HPolyhedron, index: usize, seed: u64, samples: usize) -> Result<InstanceReport, Error> {
    let seed = seed.wrapping_add(index as u64);
    let c = random_valid_c(h, seed, 3);
    let points = sample_points(h, seed, samples);
    let sandwich = sandwich_check(h, &c, &points)?;
    let reconstruct = reconstruct_check(h, &points)?;
    let not_recession = lemma_notrec_suite(h, &points)?;
    let failures = (0..h.num_rows())
        .filter(|&i| h.exposed_witness(i).map_or(true, |w| !w.margin.is_positive()))
        .collect::<Vec<_>>();
    let exposed = ExposedReport { rows: h.num_rows(), failures };
    let violations = sandwich.violations.len()
        + reconstruct.failures.len()
        + not_recession.failures.len()
        + exposed.failures.len();
    Ok(InstanceReport {
        instance: index,
        dim: h.dim(),
        rows: h.num_rows(),
        violations,
        sandwich,
        reconstruct,
        not_recession,
        exposed,
    })
}

fn run(cli: &Cli) -> Result<(Value, Status), Failure> {
    match &cli.command {
        Command::Polar { input } => {
            let h: HPolyhedron = load(input)?;
            let polar = h.polar();
            let report = PolarReport { dim: h.dim(), points: polar.points(), khat_points: h.khat_points() };
            Ok((to_value(&report), Status::Pass))
        }
        Command::Gauge { input } => evaluate(input, "gauge"),
        Command::Rho { input } => evaluate(input, "rho"),
        Command::Verify { input, random } => {
            let instances = match (input, random) {
                (_, Some(n)) => random_corpus(cli.seed, *n),
                (Some(path), None) => load_polyhedra(path)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            let results = instances
                .iter()
                .enumerate()
                .map(|(i, h)| verify_instance(h, i, cli.seed, cli.samples))
                .collect::<Result<Vec<_>, _>>()?;
            let violations: usize = results.iter().map(|r| r.violations).sum();
            let report = VerifyReport {
                passed: violations == 0,
                violations,
                instances: results.len(),
                samples: cli.samples,
                seed: cli.seed,
                results,
            };
            let status = if violations == 0 { Status::Pass } else { Status::Fail(format!("{violations} violations")) };
            Ok((to_value(&report), status))
        }
        Command::Cut { input } => {
            let BodyInput { instance, body } = load(input)?;
            let body = SFreeBody::new(body, instance.f())?;
            let cut = generate_cut(&instance, &body, cli.radius)?;
            Ok((to_value(&cut), Status::Pass))
        }
        Command::CheckCut { input } => {
            let CutInput { instance, cut } = load(input)?;
            let verdict = check_cut_validity(&instance, &cut, cli.radius)?;
            let status = match &verdict {
                CutValidity::ValidOnRegion { .. } => Status::Pass,
                CutValidity::Violated { x, .. } => Status::Fail(format!("cut violated at lattice point {x}")),
            };
            Ok((to_value(&verdict), status))
        }
        Command::Sfree { input } => {
            let BodyInput { instance, body } = load(input)?;
            let body = SFreeBody::new(body, instance.f())?;
            let verdict = is_s_free(&body, &instance, cli.radius)?;
            let status = match &verdict {
                SFreeVerdict::FreeOnRegion { .. } => Status::Pass,
                SFreeVerdict::Witness { z } => Status::Fail(format!("lattice point {z} is in the interior")),
            };
            Ok((to_value(&verdict), status))
        }
        Command::Maximal { input } => {
            let BodyInput { instance, body } = load(input)?;
            let body = SFreeBody::new(body, instance.f())?;
            let report = maximality_certificate(&body, &instance, cli.radius)?;
            Ok((to_value(&report), Status::Pass))
        }
    }
}

fn emit(report: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).expect("reports serialize")),
        Format::Text => print!("{}", text::render(report)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, status)) => {
            emit(&report, cli.format);
            match status {
                Status::Pass => ExitCode::SUCCESS,
                Status::Fail(message) => {
                    eprintln!("polarcut: {message}");
                    ExitCode::from(1)
                }
            }
        }
        Err(Failure::Refused { message, report }) => {
            emit(&report, cli.format);
            eprintln!("polarcut: refused: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Input(InputError(message))) => {
            eprintln!("polarcut: {message}");
            ExitCode::from(2)
        }
    }
}
