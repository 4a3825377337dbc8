use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use gkzfrac::commands::{parse_weight, run_command, Command, Flags};
use gkzfrac::io::parse_input;
use gkzfrac::par::Execution;
use gkzfrac::report::Format;
use gkzfrac::Error;

/// Exact fractional GKZ systems and period series for double-cover
/// Calabi-Yau families over smooth toric manifolds.
#[derive(Parser, Debug)]
#[command(name = "gkzfrac", version)]
struct Cli {
    /// validate, system, cohomology, series, bseries, fans, groebner, degeneracy or check-all
    #[arg(value_parser = clap::value_parser!(Command))]
    command: Command,
    /// Input fan description (JSON).
    input: PathBuf,
    /// Truncation order (weighted degree bound); overrides the input file.
    #[arg(long)]
    order: Option<i64>,
    /// Ample weight over the input rays, comma separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, default_value = "json", value_parser = clap::value_parser!(Format))]
    format: Format,
    /// Disable the thread pool.
    #[arg(long)]
    sequential: bool,
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse { .. }
            | Error::Schema { .. }
            | Error::Semantic { .. }
            | Error::Io(_)
            | Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
    )
}

fn hint(e: &Error) -> Option<&'static str> {
    match e {
        Error::TooManyTerms(_) | Error::TruncationTooLarge { .. } => {
            Some("lower --order or raise GKZFRAC_MAX_TERMS")
        }
        Error::WeightNotAmple(_) => Some("pass an ample --weight over the input rays"),
        Error::NotSmooth { .. } | Error::NotComplete(_) | Error::RayNotPrimitive { .. } => {
            Some("the fan must be smooth, complete and have primitive rays")
        }
        Error::NotNef { .. } => Some("choose a nef-partition whose blocks are nef"),
        Error::DimensionTooLarge(_) => Some("polytope routines support lattice rank at most 4"),
        _ => None,
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let start = Instant::now();
    let spec = parse_input(&cli.input)?;
    let flags = Flags {
        order: cli.order,
        weight: cli.weight.as_deref().map(parse_weight).transpose()?,
        exec: if cli.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let report = run_command(cli.command, &spec, &flags)?;
    let text = report.render(cli.format);
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    log::info!(
        "{} on {} finished in {:.3} s",
        cli.command.name(),
        spec.name,
        start.elapsed().as_secs_f64()
    );
    if !report.passed {
        log::error!("{} reported a failed check", cli.command.name());
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            log::error!("{e}");
            if let Some(h) = hint(&e) {
                log::error!("hint: {h}");
            }
            ExitCode::from(if usage_error(&e) { 2 } else { 1 })
        }
    }
}
