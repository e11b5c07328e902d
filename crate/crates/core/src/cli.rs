//! Command-line front end. [`run`] is pure apart from file I/O, so the
//! binary is a thin wrapper and tests can drive it in-process.
//!
//! Exit codes: 0 success, 1 certificate failed verification, 2 usage or
//! input-shape error, 3 parse error, 4 mathematical failure (torsion,
//! invalid fan or witness, overflow).

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::bott::{build_bott, parse_bott_spec, BottSpec};
use crate::cohomology::{Cohomology, CohomologyClass};
use crate::corpus::Corpus;
use crate::error::Error;
use crate::fan::{json_error, parse_fan, validate_fan, Fan};
use crate::skt::{
    certify_skt, check_isolation_implies_square_zero, find_skt_bundle_with, isolation_decompose,
    parse_certificate, square_zero_search, verify_certificate, BundleSearch, DEFAULT_BOUND,
};
use crate::wedge::{wedge_j, wedge_sequence, JVector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNVERIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_MATH: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "toric-skt",
    version,
    about = "Bott tower fans, J-construction wedges, toric cohomology and SKT bundle certificates",
    after_help = "Exit codes: 0 ok, 1 certificate not verified, 2 usage, 3 parse error, 4 mathematical failure.\n\
                  All indices on the command line and in JSON files are 1-based."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the JSON result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the fan of a Bott manifold.
    ///
    /// Either read a spec file ({"k": 2, "c": [{"i": 1, "j": 2, "value": 3}]}),
    /// give the height with --k and constants with --c "1,2=3,1,3=-1", or
    /// draw random constants with --random --seed.
    Bott {
        #[arg(long, conflicts_with_all = ["k", "c", "random"])]
        spec: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        /// Comma-separated "i,j=v" constants; may be repeated.
        #[arg(long, allow_hyphen_values = true)]
        c: Vec<String>,
        /// Draw every constant uniformly from [-max-c, max-c].
        #[arg(long, requires = "k", conflicts_with = "c")]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_c: i64,
        #[command(flatten)]
        output: Output,
    },
    /// Apply the J-construction to a fan.
    Wedge {
        #[arg(long)]
        fan: PathBuf,
        /// Multiplicities, e.g. "3,2,1,1".
        #[arg(long = "J", conflicts_with = "along")]
        j: Option<String>,
        /// Explicit sequence of rays to wedge along, e.g. "2,1,1".
        #[arg(long)]
        along: Option<String>,
        /// Write the step trace (JSON array) here.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Check unimodularity, facet balance and ray primitivity.
    Validate {
        #[arg(long)]
        fan: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Print H^2 and H^4 ranks and bases, and optionally a class's square.
    Cohomology {
        #[arg(long)]
        fan: PathBuf,
        /// Coefficients over w_1..w_m, e.g. "1,0,-1,0".
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Decide the isolation property of generator p.
    Isolate {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        p: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Enumerate primitive square-zero classes in a coefficient box.
    SquareZero {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
        /// Restrict to the span of these generators, e.g. "1,2,3".
        #[arg(long)]
        restrict: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Certify a list of classes (JSON array of coefficient arrays).
    Certify {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        classes: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Search for torus bundles of the given even rank with Σ w_j² = 0.
    FindBundle {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
        #[arg(long, default_value_t = BundleSearch::default().max_certificates)]
        max: usize,
        /// Skip the search for cancelling pairs.
        #[arg(long)]
        no_cancellation: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Re-check a certificate against a fan from scratch.
    VerifyCertificate {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

/// Exit code plus the two output streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::MalformedFan(_) => EXIT_PARSE,
        Error::Torsion { .. }
        | Error::InvalidFan(_)
        | Error::InvalidWitness(_)
        | Error::TraceMismatch { .. }
        | Error::Overflow(_) => EXIT_MATH,
        Error::IndexOutOfRange { .. }
        | Error::Spec(_)
        | Error::JShape(_)
        | Error::DimensionMismatch { .. }
        | Error::Bound(_)
        | Error::SearchTooLarge { .. }
        | Error::OddRank(_) => EXIT_USAGE,
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::MalformedFan(_) => "malformed_fan",
        Error::IndexOutOfRange { .. } => "index_out_of_range",
        Error::Parse { .. } => "parse",
        Error::Spec(_) => "spec",
        Error::InvalidFan(_) => "invalid_fan",
        Error::JShape(_) => "j_shape",
        Error::Torsion { .. } => "torsion",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::InvalidWitness(_) => "invalid_witness",
        Error::TraceMismatch { .. } => "trace_mismatch",
        Error::Bound(_) => "bound",
        Error::SearchTooLarge { .. } => "search_too_large",
        Error::OddRank(_) => "odd_rank",
        Error::Overflow(_) => "overflow",
    }
}

fn diagnostic(kind: &str, message: &str) -> String {
    json!({ "error": kind, "message": message }).to_string() + "\n"
}

/// Runs one command. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult {
                    exit_code: EXIT_OK,
                    stdout: e.render().to_string(),
                    stderr: String::new(),
                },
                _ => CommandResult {
                    exit_code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: diagnostic("usage", &e.render().to_string()),
                },
            };
        }
    };
    match execute(cli.command) {
        Ok((code, payload, out)) => {
            let text = payload + "\n";
            match out {
                Some(path) => match std::fs::write(&path, &text) {
                    Ok(()) => CommandResult { exit_code: code, stdout: String::new(), stderr: String::new() },
                    Err(e) => CommandResult {
                        exit_code: EXIT_USAGE,
                        stdout: String::new(),
                        stderr: diagnostic("io", &format!("{}: {e}", path.display())),
                    },
                },
                None => CommandResult { exit_code: code, stdout: text, stderr: String::new() },
            }
        }
        Err(Failure::Usage(msg)) => CommandResult {
            exit_code: EXIT_USAGE,
            stdout: String::new(),
            stderr: diagnostic("usage", &msg),
        },
        Err(Failure::Lib(err)) => CommandResult {
            exit_code: exit_code_for(&err),
            stdout: String::new(),
            stderr: diagnostic(error_kind(&err), &err.to_string()),
        },
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_fan(path: &Path) -> Result<Fan, Failure> {
    Ok(parse_fan(&read_input(path)?)?)
}

/// Parses "1,2,3" into 0-based indices.
fn parse_indices(text: &str, what: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(Failure::Usage(format!("{what}: cannot read 1-based index {t:?}"))),
        })
        .collect()
}

/// Parses constants written as comma-separated `i,j=v` tuples, e.g.
/// `"1,2=3,1,3=-1"`.
pub fn parse_constants(text: &str) -> Result<Vec<(usize, usize, i64)>, Error> {
    let bad = |t: &str| Error::Spec(format!("cannot read constant list {t:?}; expected i,j=v tuples"));
    let tokens: Vec<&str> = text.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
    if !tokens.len().is_multiple_of(2) {
        return Err(bad(text));
    }
    tokens
        .chunks(2)
        .map(|pair| {
            let i = pair[0].parse::<usize>().map_err(|_| bad(text))?;
            let (j, v) = pair[1].split_once('=').ok_or_else(|| bad(text))?;
            let j = j.trim().parse::<usize>().map_err(|_| bad(text))?;
            let v = v.trim().parse::<i64>().map_err(|_| bad(text))?;
            Ok((i, j, v))
        })
        .collect()
}

fn class_json(class: &CohomologyClass) -> Value {
    json!(class.coeffs())
}

type Outcome = Result<(i32, String, Option<PathBuf>), Failure>;

fn ok(value: Value, out: Output) -> Outcome {
    Ok((EXIT_OK, value.to_string(), out.out))
}

fn execute(command: Command) -> Outcome {
    match command {
        Command::Bott { spec, k, c, random, seed, max_c, output } => {
            let spec = match (spec, k) {
                (Some(path), _) => parse_bott_spec(&read_input(&path)?)?,
                (None, Some(k)) if random => Corpus::new(seed).bott_spec_of_height(k, max_c),
                (None, Some(k)) => {
                    let mut s = BottSpec::new(k)?;
                    for text in &c {
                        for (i, j, v) in parse_constants(text)? {
                            s.set(i, j, v)?;
                        }
                    }
                    s
                }
                (None, None) => return Err(Failure::Usage("bott needs --spec or --k".into())),
            };
            let fan = build_bott(&spec)?;
            Ok((EXIT_OK, fan.to_json(), output.out))
        }
        Command::Wedge { fan, j, along, trace, output } => {
            let base = load_fan(&fan)?;
            let (result, steps) = match (j, along) {
                (Some(j), None) => wedge_j(&base, &JVector::parse(&j)?)?,
                (None, Some(along)) => wedge_sequence(&base, &parse_indices(&along, "--along")?)?,
                _ => return Err(Failure::Usage("wedge needs exactly one of --J or --along".into())),
            };
            if let Some(path) = trace {
                std::fs::write(&path, steps.to_json() + "\n")
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
            Ok((EXIT_OK, result.to_json(), output.out))
        }
        Command::Validate { fan, output } => {
            let fan = load_fan(&fan)?;
            let report = validate_fan(&fan);
            ok(
                json!({
                    "valid": report.is_valid(),
                    "smooth": report.smooth,
                    "facet_balanced": report.facet_balanced,
                    "ray_primitivity": report.ray_primitivity,
                    "failures": report.failures,
                }),
                output,
            )
        }
        Command::Cohomology { fan, class, output } => {
            let coh = Cohomology::new(&load_fan(&fan)?)?;
            let mut value = serde_json::to_value(coh.summary()).expect("summary serializes");
            value["fan_hash"] = json!(coh.fan_hash());
            if let Some(text) = class {
                let class = CohomologyClass::parse(&text)?;
                let square = coh.square(&class)?;
                value["class"] = json!({
                    "coefficients": class_json(&class),
                    "square": square.to_i64()?,
                    "square_is_zero": square.is_zero(),
                });
            }
            ok(value, output)
        }
        Command::Isolate { fan, p, output } => {
            let coh = Cohomology::new(&load_fan(&fan)?)?;
            let p = p.checked_sub(1).ok_or(Error::IndexOutOfRange { index: 0, len: coh.num_rays() })?;
            let witness = isolation_decompose(&coh, p)?;
            let value = match witness {
                Some(w) => json!({
                    "fan_hash": coh.fan_hash(),
                    "p": p + 1,
                    "isolated": true,
                    "terms": w.terms.iter().map(|&(k, a)| json!({"index": k + 1, "coefficient": a})).collect::<Vec<_>>(),
                    "square_is_zero": check_isolation_implies_square_zero(&coh, &w)?,
                }),
                None => json!({
                    "fan_hash": coh.fan_hash(),
                    "p": p + 1,
                    "isolated": false,
                    "terms": [],
                }),
            };
            ok(value, output)
        }
        Command::SquareZero { fan, bound, restrict, output } => {
            let coh = Cohomology::new(&load_fan(&fan)?)?;
            let restrict = restrict.map(|r| parse_indices(&r, "--restrict")).transpose()?;
            let found = square_zero_search(&coh, bound, restrict.as_deref())?;
            ok(
                json!({
                    "fan_hash": coh.fan_hash(),
                    "bound": bound,
                    "classes": found.iter().map(|c| class_json(c.class())).collect::<Vec<_>>(),
                }),
                output,
            )
        }
        Command::Certify { fan, classes, output } => {
            let coh = Cohomology::new(&load_fan(&fan)?)?;
            let raw: Vec<Vec<i64>> = serde_json::from_str(&read_input(&classes)?).map_err(json_error)?;
            let classes: Vec<CohomologyClass> = raw.into_iter().map(CohomologyClass::new).collect();
            let cert = certify_skt(&coh, &classes)?;
            Ok((EXIT_OK, cert.to_json()?, output.out))
        }
        Command::FindBundle { fan, rank, bound, max, no_cancellation, output } => {
            let coh = Cohomology::new(&load_fan(&fan)?)?;
            let limits = BundleSearch { max_certificates: max, cancellation: !no_cancellation };
            let certs = find_skt_bundle_with(&coh, rank, bound, limits)?;
            let docs = certs.iter().map(|c| c.to_document()).collect::<Result<Vec<_>, _>>()?;
            ok(
                json!({
                    "fan_hash": coh.fan_hash(),
                    "rank": rank,
                    "bound": bound,
                    "certificates": docs,
                }),
                output,
            )
        }
        Command::VerifyCertificate { fan, certificate, output } => {
            let fan = load_fan(&fan)?;
            let doc = parse_certificate(&read_input(&certificate)?)?;
            let check = verify_certificate(&fan, &doc)?;
            let code = if check.verified { EXIT_OK } else { EXIT_UNVERIFIED };
            let value = serde_json::to_value(&check).expect("check serializes");
            Ok((code, value.to_string(), output.out))
        }
    }
}
