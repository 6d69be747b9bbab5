//! Command-line front end: parse, transform, render.
//!
//! Exit codes: 0 on success, 1 when diagnostics contain an error, 2 on
//! usage problems (missing file, unknown flag, unknown format). Output goes
//! to stdout; diagnostics go to stderr as
//! `file:line:col: severity[code]: message`.

use std::ffi::OsString;
use std::fs;
use std::io::Read as _;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::diag::{Diagnostic, Location};
use crate::fixtures;
use crate::parser::parse;
use crate::render::{render_sql, render_structured, render_text, PkMarker, TextOptions};
use crate::transform::transform;

const USAGE: &str = "usage: er2rel transform <file|-> [--format text|structured|sql] \
                     [--pk-marker none|underscore] [--fixtures [fig1..fig8]]";

#[derive(Parser)]
#[command(
    name = "er2rel",
    version,
    about = "Compile an ER model DSL into an annotated relational schema"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a model, apply the transformation steps, and print the schema.
    Transform(TransformArgs),
}

#[derive(Args)]
struct TransformArgs {
    /// Input file, or '-' for standard input.
    file: Option<String>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// How to mark primary-key attributes in text output.
    #[arg(long, value_enum, default_value_t = PkMarkerOption::None)]
    pk_marker: PkMarkerOption,

    /// List the built-in fixture models, or print one as DSL text.
    #[arg(long, value_name = "FIG", num_args = 0..=1)]
    fixtures: Option<Option<String>>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
    Sql,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PkMarkerOption {
    None,
    Underscore,
}

impl From<PkMarkerOption> for PkMarker {
    fn from(option: PkMarkerOption) -> Self {
        match option {
            PkMarkerOption::None => PkMarker::None,
            PkMarkerOption::Underscore => PkMarker::Underscore,
        }
    }
}

/// Run the CLI on the given arguments (the first is the program name) and
/// return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Transform(args) => run_transform(args),
    }
}

fn run_transform(args: TransformArgs) -> i32 {
    if let Some(selector) = args.fixtures {
        return match selector {
            None => {
                for f in fixtures::FIXTURES {
                    println!("{}  {}", f.id, f.title);
                }
                0
            }
            Some(id) => match fixtures::fixture(&id) {
                Some(f) => {
                    print!("{}", f.dsl);
                    0
                }
                None => {
                    eprintln!("error: unknown fixture '{id}' (expected fig1..fig8)");
                    eprintln!("{USAGE}");
                    2
                }
            },
        };
    }

    let Some(path) = args.file else {
        eprintln!("error: missing input file");
        eprintln!("{USAGE}");
        return 2;
    };
    let source = match read_input(&path) {
        Ok(source) => source,
        Err(e) => {
            eprintln!("error: cannot read '{path}': {e}");
            eprintln!("{USAGE}");
            return 2;
        }
    };

    let parsed = parse(&source);
    report(&path, &parsed.diagnostics);
    let Some(model) = parsed.model else {
        return 1;
    };

    let result = transform(&model);
    report(&path, &result.diagnostics);
    let Some(schema) = result.schema else {
        return 1;
    };

    let output = match args.format {
        OutputFormat::Text => render_text(
            &schema,
            &TextOptions {
                pk_marker: args.pk_marker.into(),
            },
        ),
        OutputFormat::Structured => render_structured(&schema),
        OutputFormat::Sql => render_sql(&schema),
    };
    print!("{output}");
    0
}

fn read_input(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut source = String::new();
        std::io::stdin().read_to_string(&mut source)?;
        Ok(source)
    } else {
        fs::read_to_string(path)
    }
}

fn report(path: &str, diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        match &d.location {
            Location::Span(span) => eprintln!("{path}:{}:{}: {d}", span.line, span.column),
            _ => eprintln!("{path}: {d}"),
        }
    }
}
