//! The `laurentcc` command line: argument parsing, dispatch and output.

mod commands;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};

use laurentcc_core::aut::DecompositionVariant;
use laurentcc_core::cocycles::Cocycle;
use laurentcc_core::precision::Precision;
use laurentcc_core::report::VerificationReport;
use laurentcc_core::symbol::SymbolStrategy;
use laurentcc_core::Error;

/// Exit status when every check passes.
pub const EXIT_PASS: i32 = 0;
/// Exit status when a check fails.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for usage, parse and validation errors.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for internal-consistency failures.
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "laurentcc",
    version,
    about = "Contou-Carrere symbols and the cocycles of Aut A((t)), computed exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Coefficient ring, e.g. `Q`, `Z/4`, `Q[e;2]`, `Q[e1;2,e2;3]`.
    #[arg(long, global = true)]
    pub ring: Option<String>,
    /// Series are carried below t^N.
    #[arg(short = 'N', long = "precision", global = true, default_value_t = 32)]
    pub precision: i64,
    /// Rows added to the determinant window.
    #[arg(short = 'G', long, global = true, default_value_t = 0)]
    pub guard: usize,
    /// Skip the recomputation at 2N (and 2M for determinants).
    #[arg(long, global = true)]
    pub no_stability: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Contou-Carrere strategy: product, exp-log or cross-check.
    #[arg(long, global = true)]
    pub strategy: Option<SymbolStrategy>,
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

impl Options {
    pub fn precision(&self) -> Precision {
        Precision { terms: self.precision, stability: !self.no_stability, guard: self.guard }
    }

    pub fn strategy(&self) -> SymbolStrategy {
        self.strategy.unwrap_or_default()
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Contou-Carrere symbol CC(f, g) of two units.
    Cc {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Formal Bott-Thurston cocycle B(f, g) of two automorphisms.
    Bott {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Determinantal cocycle D(f, g) of two automorphisms.
    Det {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Lie cocycle of B on the derivations g1 d/dt, g2 d/dt.
    LieBott {
        #[arg(allow_hyphen_values = true)]
        g1: String,
        #[arg(allow_hyphen_values = true)]
        g2: String,
    },
    /// Lie cocycle of D on the derivations g1 d/dt, g2 d/dt.
    LieDet {
        #[arg(allow_hyphen_values = true)]
        g1: String,
        #[arg(allow_hyphen_values = true)]
        g2: String,
    },
    /// Both Lie cocycles on the Witt basis against their closed forms.
    Virasoro {
        /// Largest |m| in the table.
        #[arg(long, default_value_t = 8)]
        max: i64,
        /// `bott` or `det`; both when omitted.
        #[arg(long)]
        which: Option<Cocycle>,
    },
    /// Factor an automorphism into a product of two subgroups.
    Decompose {
        #[arg(allow_hyphen_values = true)]
        phi: String,
        /// plus1-minus0, plus-minus, minus0-plus1 or minus-plus; all when omitted.
        #[arg(long)]
        variant: Option<DecompositionVariant>,
    },
    /// Inverse of an automorphism.
    Invert {
        #[arg(allow_hyphen_values = true)]
        phi: String,
    },
    /// Cocycle defect at a triple of automorphisms.
    Defect {
        #[arg(allow_hyphen_values = true)]
        g1: String,
        #[arg(allow_hyphen_values = true)]
        g2: String,
        #[arg(allow_hyphen_values = true)]
        g3: String,
        /// `bott` or `det`; both when omitted.
        #[arg(long)]
        cocycle: Option<Cocycle>,
    },
    /// Sample D^12 / B ratios. Always exits 0.
    Probe {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Cech 2-cocycles on the cover with transitions phi_(i,i+1) = LINKS[i].
    Cech {
        #[arg(required = true, allow_hyphen_values = true)]
        links: Vec<String>,
        /// `bott` or `det`; both when omitted.
        #[arg(long)]
        cocycle: Option<Cocycle>,
    },
    /// Run the verification suites.
    Selftest {
        /// Run only these criteria (1 to 11); repeatable.
        #[arg(long = "criterion")]
        criteria: Vec<usize>,
    },
}

/// A library error, with the literal it came from when parsing failed.
#[derive(Debug)]
pub struct Failure {
    pub error: Error,
    pub literal: Option<String>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, literal: None }
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        if self.error.is_internal() {
            EXIT_INTERNAL
        } else {
            EXIT_USAGE
        }
    }

    fn render(&self) -> String {
        let mut out = format!("error: {}", self.error);
        if let (Some(lit), Some(pos)) = (&self.literal, self.error.position()) {
            out.push_str(&format!("\n  {lit}\n  {}^", " ".repeat(pos)));
        } else if let Some(lit) = &self.literal {
            out.push_str(&format!("\n  in `{lit}`"));
        }
        out
    }
}

/// Runs the command line and returns the exit status.
pub fn main(args: Vec<OsString>) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let echo = echo(&args);
    let always_pass = matches!(cli.command, Command::Probe { .. });
    match commands::run(&cli.command, &cli.opts, echo.clone()) {
        Ok(report) => {
            emit(&report, cli.opts.json);
            if report.passed() || always_pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(f) => {
            eprintln!("{}", f.render());
            if cli.opts.json {
                let body = serde_json::json!({ "command": echo, "error": f.error.to_string(), "status": "error" });
                println!("{}", serde_json::to_string_pretty(&body).expect("json value serializes"));
            }
            f.exit_code()
        }
    }
}

fn emit(report: &VerificationReport, json: bool) {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
}

/// The command line without the program name, quoted where needed.
fn echo(args: &[OsString]) -> String {
    args.iter()
        .skip(1)
        .map(|a| {
            let s = a.to_string_lossy();
            if s.is_empty() || s.contains(char::is_whitespace) {
                format!("\"{s}\"")
            } else {
                s.into_owned()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
