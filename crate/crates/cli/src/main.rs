use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use glh_core::dsl::parse_dsl;
use glh_core::harness::{emit_report, run_suite, Format, RunOptions};
use glh_core::presentations::{build, HMode};
use glh_core::AlgebraError;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "glh", version, about = "Exact checks for the odd h-deformation of GL(1|1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite of checks.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Treat incomplete checks as failures.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        #[arg(long, default_value_t = 4)]
        degree_bound: usize,
    },
    /// Print the normal form of an expression in a named algebra.
    Nf {
        #[arg(long)]
        algebra: String,
        /// Set h = 0.
        #[arg(long)]
        classical: bool,
        expr: String,
    },
    /// Presentation files.
    Dsl {
        #[command(subcommand)]
        command: DslCommand,
    },
}

#[derive(Subcommand)]
enum DslCommand {
    /// Parse a presentation and report parity, orientation and confluence.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        degree_bound: usize,
    },
}

fn usage_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_USAGE)
}

fn check(suite: &str, strict: bool, format: OutputFormat, degree_bound: usize) -> ExitCode {
    let opts = RunOptions { strict, degree_bound };
    let report = match run_suite(suite, &opts) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let format = match format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    print!("{}", emit_report(&report, format));
    ExitCode::from(report.exit_code() as u8)
}

fn nf(algebra: &str, classical: bool, expr: &str) -> ExitCode {
    let mode = if classical { HMode::Zero } else { HMode::Odd };
    let result = build(algebra, mode).and_then(|p| {
        let e = p.parse(expr)?;
        Ok(p.alphabet().render(&p.nf(&e)?))
    });
    match result {
        Ok(s) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Err(e @ AlgebraError::Divergence(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAIL)
        }
        Err(e) => usage_error(e),
    }
}

fn dsl_verify(file: &PathBuf, degree_bound: usize) -> ExitCode {
    let src = match fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => return usage_error(format!("{}: {e}", file.display())),
    };
    let doc = match parse_dsl(&src) {
        Ok(d) => d,
        Err(e) => return usage_error(format!("{}: {e}", file.display())),
    };
    println!("parity: {} generators, {} relations, all homogeneous", doc.alphabet.len(), doc.relations.len());
    let sys = match doc.to_system() {
        Ok(s) => s,
        Err(e) => {
            println!("orientation: FAIL {e}");
            return ExitCode::from(EXIT_FAIL);
        }
    };
    println!("orientation: {} rules", sys.rules().len());
    for r in sys.rules() {
        println!("    {}", sys.render_rule(r));
    }
    let overlaps = match sys.overlaps(degree_bound) {
        Ok(o) => o,
        Err(e) => {
            println!("confluence: FAIL {e}");
            return ExitCode::from(EXIT_FAIL);
        }
    };
    let open: Vec<_> = overlaps.iter().filter(|o| !o.resolved()).collect();
    let status = if open.is_empty() { "PASS" } else { "FAIL" };
    println!("confluence: {status} {} overlaps up to degree {degree_bound}, {} unresolved", overlaps.len(), open.len());
    for o in &open {
        println!("    {}: {}", sys.render(&glh_core::Element::word(&o.word)), sys.render(&o.discrepancy()));
    }
    if open.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Check { suite, strict, format, degree_bound } => check(&suite, strict, format, degree_bound),
        Command::Nf { algebra, classical, expr } => nf(&algebra, classical, &expr),
        Command::Dsl { command: DslCommand::Verify { file, degree_bound } } => dsl_verify(&file, degree_bound),
    }
}
