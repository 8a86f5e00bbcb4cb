use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use spintangle_cli::config::{resolve, Partitions, Scalar};
use spintangle_cli::{run_scenario, CliError, CliResult, RawConfig, Scenario};

/// Quantum kicked-top entanglement experiments.
#[derive(Debug, Parser)]
#[command(name = "spintangle", version, about)]
struct Cli {
    /// Experiment preset to run.
    #[arg(value_enum)]
    scenario: Scenario,
    /// Flat `key = value` config file; flags below override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Spin quantum number, e.g. `4`, `2.5` or `5/2`.
    #[arg(long)]
    j: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// Rotation angle per kick; accepts `pi/2`-style tokens.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Named start point: P1, P2, P3, FP1 or P4.
    #[arg(long)]
    point: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    kicks: Option<i64>,
    /// Comma-separated block sizes, e.g. `1,2`.
    #[arg(long)]
    partitions: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    scan_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    scan_max: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    scan_step: Option<String>,
    /// Phase-portrait grid as `<n_theta>x<n_phi>`.
    #[arg(long)]
    grid: Option<String>,
    /// Overlap level counted as orthogonal in `overlap-criterion`.
    #[arg(long, allow_hyphen_values = true)]
    threshold: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    max_period: Option<i64>,
    /// Permit scans above j = 200.
    #[arg(long)]
    allow_large_j: bool,
    /// Also write `<out>.svg`.
    #[arg(long)]
    plot: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; falls back to SPINTANGLE_WORKERS, then the available parallelism.
    #[arg(long, allow_hyphen_values = true)]
    workers: Option<i64>,
}

impl Cli {
    fn overrides(&self) -> RawConfig {
        let text = |v: &Option<String>| v.clone().map(Scalar::Text);
        RawConfig {
            scenario: Some(self.scenario),
            j: text(&self.j),
            kappa: text(&self.kappa),
            p: text(&self.p),
            theta: text(&self.theta),
            phi: text(&self.phi),
            point: self.point.clone(),
            kicks: self.kicks,
            partitions: self.partitions.clone().map(Partitions::Text),
            scan_min: text(&self.scan_min),
            scan_max: text(&self.scan_max),
            scan_step: text(&self.scan_step),
            grid: self.grid.clone(),
            threshold: self.threshold,
            max_period: self.max_period,
            allow_large_j: self.allow_large_j.then_some(true),
            plot: self.plot.then_some(true),
            out: self.out.clone(),
            workers: self.workers,
        }
    }
}

fn load(cli: &Cli) -> CliResult<RawConfig> {
    let base = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            RawConfig::from_text(&text)?
        }
        None => RawConfig::default(),
    };
    if let Some(s) = base.scenario {
        if s != cli.scenario {
            return Err(CliError::config(format!(
                "scenario: config file says `{s}` but `{}` was requested",
                cli.scenario
            )));
        }
    }
    let mut raw = base.overlay(cli.overrides());
    if raw.workers.is_none() {
        if let Ok(value) = std::env::var("SPINTANGLE_WORKERS") {
            let w = value.trim().parse::<i64>().map_err(|_| {
                CliError::config(format!("SPINTANGLE_WORKERS: `{value}` is not an integer"))
            })?;
            raw.workers = Some(w);
        }
    }
    Ok(raw)
}

fn run(cli: &Cli) -> CliResult<()> {
    let config = resolve(load(cli)?)?;
    for w in &config.warnings {
        eprintln!("warning: {w}");
    }
    let summary = run_scenario(&config)?;
    for note in &summary.notes {
        println!("{note}");
    }
    for out in &summary.outputs {
        println!("wrote {} ({} rows)", out.path.display(), out.rows);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spintangle: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
