use clap::{Parser, Subcommand, ValueEnum};
use kahlerflow::config::{parse_complex, Grid, RunConfig};
use kahlerflow::report::Format;
use kahlerflow::{suites, Error};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "kahlerflow", version, about = "Verification runner for flows, polarizations, half-forms and coherent-state transforms on T*G")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write its report.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Text,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// flows, polarization, kahler, halfform, mixed, cst-unitarity, cst-norm-experiment or all
    suite: String,
    /// JSON run configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Kähler time as RE,IM (replaces the tau grid)
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    /// Time as RE,IM (replaces both the sigma and the mixed sigma grids)
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    /// Largest spin in the unitarity suite
    #[arg(long)]
    lambda_max: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: print to stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
    /// Record wall-clock time per test (reports are then no longer reproducible byte for byte)
    #[arg(long)]
    timings: bool,
}

fn load(args: &VerifyArgs) -> Result<RunConfig, Error> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::from_path(p)?,
        None => RunConfig::default(),
    };
    if let Some(t) = &args.tau {
        cfg.tau = Grid::One(parse_complex(t)?);
    }
    if let Some(s) = &args.sigma {
        let v = parse_complex(s)?;
        cfg.sigma = Grid::One(v);
        cfg.mixed_sigma = Grid::One(v);
    }
    if let Some(l) = args.lambda_max {
        cfg.lambda_max = l;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn verify(args: VerifyArgs) -> Result<bool, Error> {
    suites::init_threads()?;
    let cfg = load(&args)?;
    let report = suites::run(&args.suite, &cfg, args.timings)?;
    let format = match args.format {
        OutFormat::Json => Format::Json,
        OutFormat::Csv => Format::Csv,
        OutFormat::Text => Format::Text,
    };
    match &cfg.out {
        Some(dir) => {
            let path = report.write(dir, format)?;
            if !matches!(format, Format::Json) {
                report.write(dir, Format::Json)?;
            }
            eprintln!("{} passed {}/{}; report written to {}", report.suite, report.summary.passed, report.summary.total, path.display());
        }
        None => print!("{}", report.render(format)?),
    }
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => match verify(args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e @ Error::Config(_)) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
    }
}
