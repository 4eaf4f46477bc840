//! Command-line front end. [`run`] takes the arguments and output streams
//! explicitly and returns the process exit code, so it is testable in-process.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 internal invariant violation.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::builder::{build_fundamental, rho_plus_partial_fraction, PartialFractionSolution};
use crate::error::Error;
use crate::io::{consistency_json, gate_json, report_json, SolutionDocument};
use crate::model::{KZSystem, Rho};
use crate::rational::Rational;
use crate::verify::{
    consistency_relations, rationality_gate, verify_partial_fraction, VerificationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "kz-rational",
    version,
    about = "Exact rational solutions of the S_n Knizhnik-Zamolodchikov system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the result here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build and verify a fundamental solution.
    #[command(allow_negative_numbers = true)]
    Build {
        #[arg(long, required_unless_present = "input", conflicts_with = "input")]
        n: Option<usize>,
        /// Comma-separated poles, e.g. `0,1/2,-3`.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required_unless_present = "input",
            conflicts_with = "input"
        )]
        points: Option<Vec<String>>,
        /// Sign of the coupling: -1 or 1.
        #[arg(long, default_value_t = -1, conflicts_with = "input")]
        rho: i64,
        /// JSON file `{"n": .., "points": [..], "rho": ..}`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify a solution document.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Integrality test for the two-pole S_3 system with couplings m1, m2.
    #[command(allow_negative_numbers = true)]
    Gate {
        #[arg(long)]
        m1: i64,
        #[arg(long)]
        m2: i64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exhaustive commutation check of the transpositions of S_n.
    Consistency {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionTooSmall(_)
            | Error::PointCount { .. }
            | Error::RepeatedPoints(..)
            | Error::InvalidRho(_)
            | Error::Parse(_)
            | Error::DivisionByZero
            | Error::IndexOutOfRange(_) => EXIT_INVALID_INPUT,
            _ => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: String) -> Failure {
    Failure {
        code: EXIT_INVALID_INPUT,
        message,
    }
}

/// Output of one command: the rendered text and its exit code.
struct Outcome {
    text: String,
    code: i32,
}

type CmdResult = Result<Outcome, Failure>;

pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
                return EXIT_INVALID_INPUT;
            }
            let _ = stdout.write_all(rendered.as_bytes());
            return EXIT_OK;
        }
    };
    let (result, output) = match cli.command {
        Command::Build {
            n,
            points,
            rho,
            input,
            out,
        } => (cmd_build(n, points, rho, input, out.format), out.output),
        Command::Verify { input, out } => (cmd_verify(&input, out.format), out.output),
        Command::Gate { m1, m2, out } => (Ok(cmd_gate(m1, m2, out.format)), out.output),
        Command::Consistency { n, out } => (cmd_consistency(n, out.format), out.output),
    };
    match result {
        Ok(Outcome { text, code }) => {
            match output {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                        return EXIT_INVALID_INPUT;
                    }
                }
                None => {
                    let _ = stdout.write_all(text.as_bytes());
                }
            }
            if code == EXIT_VERIFY_FAILED {
                let _ = writeln!(stderr, "verification failed");
            }
            code
        }
        Err(Failure { code, message }) => {
            let _ = writeln!(stderr, "error: {message}");
            code
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn system_from_flags(
    n: Option<usize>,
    points: Option<Vec<String>>,
    rho: i64,
    input: Option<PathBuf>,
) -> Result<KZSystem, Failure> {
    if let Some(path) = input {
        return Ok(KZSystem::from_json(&read_file(&path)?)?);
    }
    let (Some(n), Some(points)) = (n, points) else {
        return Err(invalid("build needs --n and --points, or --input".into()));
    };
    let points = points
        .iter()
        .map(|p| {
            p.trim()
                .parse::<Rational>()
                .map_err(|e| invalid(format!("point {p:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KZSystem::new(n, points, Rho::try_from(rho)?)?)
}

fn cmd_build(
    n: Option<usize>,
    points: Option<Vec<String>>,
    rho: i64,
    input: Option<PathBuf>,
    format: Format,
) -> CmdResult {
    let sys = system_from_flags(n, points, rho, input)?;
    let sol = match sys.rho() {
        Rho::Minus => build_fundamental(&sys)?.as_partial_fraction(),
        Rho::Plus => rho_plus_partial_fraction(&sys)?,
    };
    let report = verify_partial_fraction(&sys, &sol)?;
    if !report.all_ok() {
        return Err(Failure {
            code: EXIT_INTERNAL,
            message: format!(
                "constructed solution failed verification: {}",
                summary(&report)
            ),
        });
    }
    let text = match format {
        Format::Json => SolutionDocument::from_solution(&sys, &sol).render(),
        Format::Text => solution_text(&sys, &sol),
    };
    Ok(Outcome {
        text,
        code: EXIT_OK,
    })
}

fn cmd_verify(input: &PathBuf, format: Format) -> CmdResult {
    let doc = SolutionDocument::parse(&read_file(input)?)?;
    let (sys, sol) = doc.to_solution()?;
    let report = verify_partial_fraction(&sys, &sol)?;
    let text = match format {
        Format::Json => report_json(&report),
        Format::Text => report_text(&report),
    };
    let code = if report.all_ok() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    };
    Ok(Outcome { text, code })
}

fn cmd_gate(m1: i64, m2: i64, format: Format) -> Outcome {
    let v = rationality_gate(m1, m2);
    let text = match format {
        Format::Json => gate_json(&v),
        Format::Text => format!(
            "m1 = {}, m2 = {}, lambda^2 = {}: {}\n",
            v.m1, v.m2, v.lambda_squared, v.verdict
        ),
    };
    Outcome {
        text,
        code: EXIT_OK,
    }
}

fn cmd_consistency(n: usize, format: Format) -> CmdResult {
    let r = consistency_relations(n)?;
    let text = match format {
        Format::Json => consistency_json(&r),
        Format::Text => {
            let mut t = format!(
                "n = {}: {} (pairs {}, triples {}, quadruples {})\n",
                r.n,
                if r.holds { "holds" } else { "FAILS" },
                r.pairs_checked,
                r.triples_checked,
                r.quadruples_checked
            );
            for f in &r.failures {
                t.push_str(&format!("  {f}\n"));
            }
            t
        }
    };
    Ok(Outcome {
        text,
        code: if r.holds { EXIT_OK } else { EXIT_VERIFY_FAILED },
    })
}

fn flag(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

fn summary(r: &VerificationReport) -> String {
    r.details
        .iter()
        .map(|f| f.message.as_str())
        .collect::<Vec<_>>()
        .join("; ")
}

fn report_text(r: &VerificationReport) -> String {
    let mut t = String::new();
    t.push_str(&format!("ode residual   {}\n", flag(r.ode_residual_zero)));
    let det = match r.det_nonzero {
        Some(b) => flag(b),
        None => "n/a",
    };
    t.push_str(&format!("determinant    {det}\n"));
    t.push_str(&format!("pole orders    {}\n", flag(r.pole_orders_ok)));
    t.push_str(&format!("moments        {}\n", flag(r.moments_ok)));
    for f in &r.details {
        t.push_str(&format!("- [{}] {}", f.check, f.message));
        if let (Some(z), Some(v)) = (&f.point, &f.value) {
            t.push_str(&format!(" (at z = {z}: {v})"));
        }
        t.push('\n');
    }
    t.push_str(if r.all_ok() {
        "verified\n"
    } else {
        "NOT verified\n"
    });
    t
}

fn solution_text(sys: &KZSystem, sol: &PartialFractionSolution) -> String {
    let points: Vec<String> = sys.points().iter().map(Rational::to_string).collect();
    let mut t = format!(
        "n = {}, rho = {}, points = [{}]\n",
        sys.n(),
        sys.rho().sign(),
        points.join(", ")
    );
    let w = sol.value();
    for i in 0..w.rows() {
        for j in 0..w.cols() {
            t.push_str(&format!(
                "W[{}][{}] = {}\n",
                i + 1,
                j + 1,
                w.get(i, j).render()
            ));
        }
    }
    t
}
