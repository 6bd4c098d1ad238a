use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use sullivan_cli::{dsl, run};

/// Exact-arithmetic analysis of minimal Sullivan algebras: cohomology,
/// coformal limits, Toomer invariants, homotopy Lie algebras and
/// fibration diagnostics.
#[derive(Parser)]
#[command(name = "sullivan", version)]
struct Cli {
    /// Input DSL file
    file: PathBuf,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate every declaration (degrees, d^2 = 0, minimality, ...)
    Validate {
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
    },
    /// Cohomology table of an algebra
    Cohomology {
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
    },
    /// Coformal limit (quadratic part) of an algebra, printed as DSL
    Limit {
        #[arg(long)]
        name: Option<String>,
    },
    /// Eliminate non-quadratic differential terms
    Coformalize {
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
    },
    /// Bundled coformality analysis (limit, Toomer, elimination, search)
    Report {
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
    },
    /// Toomer invariant e_0 of an algebra
    Toomer {
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
    },
    /// Homotopy Lie algebra (quadratic dual of the coformal limit)
    LieDual {
        #[arg(long)]
        name: Option<String>,
    },
    /// Free graded Lie algebra on the generators of a lie declaration
    FreeLie {
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
    },
    /// Search for a DGA isomorphism between two algebras
    IsoSearch {
        /// Source algebra (default: first algebra in the file)
        #[arg(long)]
        source: Option<String>,
        /// Target algebra (default: the coformal limit of the source)
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
        #[arg(long, default_value_t = 4)]
        split_depth: usize,
    },
    /// TNHZ/TNCZ, degree gap, limit fibration and Koszul diagnostics
    FibrationAnalyze {
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.file.display());
            return ExitCode::from(2);
        }
    };
    let doc = match dsl::parse(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.file.display());
            return ExitCode::from(1);
        }
    };
    for w in &doc.warnings {
        eprintln!("warning: {w}");
    }
    let result = match &cli.command {
        Command::Validate { max_degree } => run::validate(&doc, *max_degree),
        Command::Cohomology { name, max_degree } => {
            run::cohomology(&doc, name.as_deref(), *max_degree)
        }
        Command::Limit { name } => run::limit(&doc, name.as_deref()),
        Command::Coformalize { name, max_degree } => {
            run::run_coformalize(&doc, name.as_deref(), *max_degree)
        }
        Command::Report { name, max_degree } => run::report(&doc, name.as_deref(), *max_degree),
        Command::Toomer { name, max_degree } => run::toomer(&doc, name.as_deref(), *max_degree),
        Command::LieDual { name } => run::lie_dual(&doc, name.as_deref()),
        Command::FreeLie { name, max_degree } => {
            run::run_free_lie(&doc, name.as_deref(), *max_degree)
        }
        Command::IsoSearch { source, target, max_degree, split_depth } => run::iso_search(
            &doc,
            source.as_deref(),
            target.as_deref(),
            *max_degree,
            *split_depth,
        ),
        Command::FibrationAnalyze { name, max_degree } => {
            run::fibration_analyze(&doc, name.as_deref(), *max_degree)
        }
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            let usage = matches!(
                e,
                run::RunError::NoSuchItem(_)
                    | run::RunError::WrongKind(..)
                    | run::RunError::Empty(_)
            );
            eprintln!("error: {e}");
            return ExitCode::from(if usage { 2 } else { 1 });
        }
    };
    match cli.format {
        Format::Text => print!("{}", report.render_text()),
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&report.to_json()).unwrap())
        }
    }
    if report.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
