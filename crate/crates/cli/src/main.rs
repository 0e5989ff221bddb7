use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use mixhodge::homotopy::WeightConvention;
use mixhodge::io::{Document, IoError};
use mixhodge::splitting::Endpoints;
use mixhodge_cli::{failure_report, run, Command, Failure, Format, Job, Options, Report};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Validate,
    Split,
    Convert,
    Ext,
    Rees,
    Dec,
    Ss,
    Pi,
    Th,
    Defcone,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

/// Exact computations with mixed Hodge and twistor structures.
///
/// Exit status: 0 success, 2 parse or usage error, 3 invariant violation,
/// 4 mathematical rejection, 5 truncation instability.
#[derive(Parser, Debug)]
#[command(name = "mixhodge", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// Input file; `ext` takes two.
    #[arg(long = "in", required = true)]
    inputs: Vec<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Bracket-length cap (`pi`), level cap (`th`) or last page (`ss`).
    #[arg(long)]
    truncate: Option<usize>,
    /// Weight convention for Gysin inputs: `a+b` or `a2b`.
    #[arg(long)]
    weight_convention: Option<WeightConvention>,
    /// Path for the integral pairing: `0i` or `mii`.
    #[arg(long, default_value = "0i")]
    endpoints: Endpoints,
    /// Source kind for `convert`; checked against the file.
    #[arg(long)]
    from: Option<String>,
    /// Target kind for `convert`.
    #[arg(long)]
    to: Option<String>,
    /// Highest degree computed by `th`.
    #[arg(long)]
    degree_cap: Option<usize>,
    /// Polynomial degree of forms used by `th`.
    #[arg(long)]
    form_cap: Option<usize>,
}

fn command(c: Cmd) -> Command {
    match c {
        Cmd::Validate => Command::Validate,
        Cmd::Split => Command::Split,
        Cmd::Convert => Command::Convert,
        Cmd::Ext => Command::Ext,
        Cmd::Rees => Command::Rees,
        Cmd::Dec => Command::Dec,
        Cmd::Ss => Command::Ss,
        Cmd::Pi => Command::Pi,
        Cmd::Th => Command::Th,
        Cmd::Defcone => Command::Defcone,
    }
}

fn load(cli: &Cli) -> Result<Vec<Document>, Failure> {
    let mut docs = Vec::new();
    for p in &cli.inputs {
        let text = std::fs::read_to_string(p).map_err(|e| IoError::Parse(format!("{}: {e}", p.display())))?;
        let doc = Document::parse(&text).map_err(|e| match e {
            IoError::Parse(m) => IoError::Parse(format!("{}: {m}", p.display())),
            other => other,
        })?;
        if let Some(from) = &cli.from {
            if doc.kind() != from {
                return Err(doc.wrong_kind(from).into());
            }
        }
        docs.push(doc);
    }
    Ok(docs)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let options = Options {
        truncate: cli.truncate,
        weight_convention: cli.weight_convention,
        endpoints: cli.endpoints,
        to: cli.to.clone(),
        degree_cap: cli.degree_cap,
        form_cap: cli.form_cap,
    };
    let command = command(cli.command);
    let report = match load(&cli) {
        Ok(inputs) => run(&Job { command, inputs, options }),
        Err(f) => {
            let (status, error) = failure_report(f);
            Report { command, options, status, result: None, error: Some(error) }
        }
    };
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    let text = report.render(format);
    if let Some(e) = &report.error {
        eprintln!("mixhodge: {}", e.message);
    }
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("mixhodge: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
