use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use xyquench_cli::{execute, presets, CliError, ScanConfig, Scenario, Settings};

#[derive(Parser)]
#[command(name = "xyquench", version, about = "Quench dynamics and pair correlations of the XY chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ground-state correlations versus field
    Equilibrium(RunArgs),
    /// Steady state versus final field
    SingleScan(RunArgs),
    /// Steady state versus initial field
    InitialScan(RunArgs),
    /// Double quench versus the time spent at the middle field
    DoubleTimeScan(RunArgs),
    /// Double quench versus the middle field
    MiddleScan(RunArgs),
    /// Overlap amplitudes with the final eigenstates
    Spectral(RunArgs),
    /// Long-time Loschmidt echo and critical times versus final field
    Loschmidt(RunArgs),
    /// Compare against exact diagonalization on small rings
    Validate(RunArgs),
    /// Run whatever scenario the config file names
    Run(RunArgs),
    /// Run a bundled figure preset (fig2 .. fig8)
    Preset(PresetArgs),
}

#[derive(Args)]
struct PresetArgs {
    name: String,
    #[command(flatten)]
    overrides: RunArgs,
}

#[derive(Args)]
struct RunArgs {
    /// Flat key = value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    n_sites: Option<String>,
    /// Initial field(s), comma separated
    #[arg(long)]
    hi: Option<String>,
    /// Middle field(s), comma separated
    #[arg(long)]
    hm: Option<String>,
    /// Final field(s), comma separated
    #[arg(long)]
    hf: Option<String>,
    #[arg(long)]
    spend_time: Option<String>,
    /// START:STOP:STEP, segments joined by commas
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// dephased | argmax-T
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<String>,
}

enum Source {
    Fixed(Scenario),
    Named,
    Preset(String),
}

impl Command {
    fn split(self) -> (Source, RunArgs) {
        use Source::Fixed;
        match self {
            Command::Run(a) => (Source::Named, a),
            Command::Preset(p) => (Source::Preset(p.name), p.overrides),
            Command::Equilibrium(a) => (Fixed(Scenario::Equilibrium), a),
            Command::SingleScan(a) => (Fixed(Scenario::SingleScan), a),
            Command::InitialScan(a) => (Fixed(Scenario::InitialScan), a),
            Command::DoubleTimeScan(a) => (Fixed(Scenario::DoubleTimeScan), a),
            Command::MiddleScan(a) => (Fixed(Scenario::MiddleScan), a),
            Command::Spectral(a) => (Fixed(Scenario::Spectral), a),
            Command::Loschmidt(a) => (Fixed(Scenario::Loschmidt), a),
            Command::Validate(a) => (Fixed(Scenario::Validate), a),
        }
    }
}

fn build_config(source: Source, args: RunArgs) -> Result<ScanConfig, CliError> {
    let mut settings = match (&source, &args.config) {
        (Source::Preset(_), Some(_)) => {
            return Err(CliError::Config("a preset cannot be combined with --config".into()))
        }
        (Source::Preset(name), None) => presets::settings(name)?,
        (_, Some(path)) => Settings::load(path)?,
        (_, None) => Settings::default(),
    };
    let out = args.out.map(|p| p.display().to_string());
    let overrides = [
        ("delta", args.delta),
        ("n_sites", args.n_sites),
        ("hi", args.hi),
        ("hm", args.hm),
        ("hf", args.hf),
        ("spend_time", args.spend_time),
        ("grid", args.grid),
        ("mode", args.mode),
        ("out", out),
        ("jobs", args.jobs),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            settings.set(key, &v)?;
        }
    }
    match source {
        Source::Fixed(scenario) => ScanConfig::from_settings(scenario, settings),
        Source::Named | Source::Preset(_) => presets::self_describing(settings),
    }
}

fn main() -> ExitCode {
    let (source, args) = Cli::parse().command.split();
    let result = build_config(source, args).and_then(|cfg| execute(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("xyquench: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
