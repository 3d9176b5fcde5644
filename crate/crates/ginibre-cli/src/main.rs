//! `ginibre`: tabulate, validate and sample eigenvalue correlation functions of Ginibre matrices.

mod commands;
mod error;
mod output;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;
use crate::settings::{flag_table, Config, Settings};

#[derive(Debug, Parser)]
#[command(name = "ginibre", version, about, allow_negative_numbers = true)]
struct Cli {
    /// TOML file with default flag values and `[preset.NAME]` sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate a correlation function or kernel entry on a grid.
    Eval(EvalArgs),
    /// Run acceptance checks and write a JSON report.
    Validate(ValidateArgs),
    /// Distance between finite-size and limiting correlations as M grows.
    Converge(ConvergeArgs),
    /// Histogram eigenvalues of sampled Gaussian matrices.
    Sample(SampleArgs),
    /// Write the data, sidecars and gnuplot scripts of the builtin figure presets.
    Figures(FiguresArgs),
}

#[derive(Debug, Args)]
struct RegimeArgs {
    /// finite, origin, real-edge, complex-bulk, complex-edge, ginue, ginue-bulk or ginue-edge.
    #[arg(long)]
    regime: Option<String>,
    /// Half the matrix size of the real ensemble.
    #[arg(long = "M", allow_hyphen_values = true)]
    m: Option<String>,
    /// Matrix size of the complex ensemble.
    #[arg(long)]
    n: Option<String>,
    /// Real part of the edge or bulk point u.
    #[arg(long)]
    u_re: Option<String>,
    /// Imaginary part of u.
    #[arg(long)]
    u_im: Option<String>,
    /// `lo:hi:steps`, or `lo:hi:steps,lo:hi:steps` for a plane.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    anchor_re: Option<String>,
    #[arg(long)]
    anchor_im: Option<String>,
}

impl RegimeArgs {
    fn pairs(&self) -> [(&'static str, Option<String>); 8] {
        [
            ("regime", self.regime.clone()),
            ("M", self.m.clone()),
            ("n", self.n.clone()),
            ("u-re", self.u_re.clone()),
            ("u-im", self.u_im.clone()),
            ("grid", self.grid.clone()),
            ("anchor-re", self.anchor_re.clone()),
            ("anchor-im", self.anchor_im.clone()),
        ]
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    regime: RegimeArgs,
    /// R_10, R_01, R_20, R_11, R_02 or a kernel entry such as K:ds:re.
    #[arg(long)]
    observable: Option<String>,
    /// Builtin figure preset (fig:1 to fig:8) or a config section.
    #[arg(long)]
    preset: Option<String>,
    /// CSV path; a JSON sidecar is written next to it. Standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    gnuplot: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// pfaffian, oracle, montecarlo, limits, figures or all.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Cap on Monte Carlo samples per criterion.
    #[arg(long)]
    samples: Option<String>,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[command(flatten)]
    regime: RegimeArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// ginoe (real) or ginue (complex).
    #[arg(long)]
    ensemble: Option<String>,
    /// Matrix size.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// R_10, R_01 or radial.
    #[arg(long)]
    observable: Option<String>,
    /// Histogram window: `lo:hi:bins`, or two axes for R_01.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FiguresArgs {
    /// A preset identifier or `all`.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn path_text(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Eval(a) => {
            let mut flags = flag_table(a.regime.pairs());
            flags.extend(flag_table([("observable", a.observable.clone()), ("out", path_text(&a.out))]));
            if let Some(p) = a.preset.as_deref() {
                if !config.presets.contains_key(p) && ginibre::figures::preset(p).is_err() {
                    return Err(CliError::Input(format!("unknown preset {p:?}")));
                }
            }
            let settings = Settings::new(flags, &config, a.preset.as_deref());
            commands::eval(&settings, a.preset.as_deref(), a.gnuplot)
        }
        Command::Validate(a) => {
            let flags = flag_table([
                ("suite", a.suite),
                ("seed", a.seed),
                ("samples", a.samples),
                ("out", path_text(&a.out)),
            ]);
            commands::validate(&Settings::new(flags, &config, None))
        }
        Command::Converge(a) => {
            let mut flags = flag_table(a.regime.pairs());
            flags.extend(flag_table([("out", path_text(&a.out))]));
            commands::converge(&Settings::new(flags, &config, None))
        }
        Command::Sample(a) => {
            let flags = flag_table([
                ("ensemble", a.ensemble),
                ("n", a.n),
                ("samples", a.samples),
                ("seed", a.seed),
                ("observable", a.observable),
                ("grid", a.grid),
                ("out", path_text(&a.out)),
            ]);
            commands::sample(&Settings::new(flags, &config, None))
        }
        Command::Figures(a) => {
            let flags = flag_table([("preset", a.preset), ("out", path_text(&a.out))]);
            commands::figures(&Settings::new(flags, &config, None))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let msg = e.to_string();
            let first = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("{}", first.trim());
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
