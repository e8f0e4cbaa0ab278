use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use brickcomp::config::{ExperimentConfig, MorphName, ReservoirTask, WallTask, WaveName};
use brickcomp::{run_command, RunDir, Subcommand};
use clap::{Args, Parser, Subcommand as ClapSubcommand, ValueEnum};

/// Reproducible experiments on simulated computing bricks.
#[derive(Parser, Debug)]
#[command(name = "brickcomp", version)]
struct Cli {
    /// TOML experiment config; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Parent directory for the run directory `<subcommand>-<seed>`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replace an existing run directory.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapSubcommand, Debug)]
enum Command {
    /// Dual-frequency drive, delay-embedded portrait and its coverage.
    Attractor(AttractorArgs),
    /// Harvest network states and train linear readouts.
    Reservoir(ReservoirArgs),
    /// Excitation waves, Voronoi wavefronts or morphology on a brick wall.
    Wall(WallArgs),
    /// Flooding and gossip under failed bricks.
    Route(RouteArgs),
}

#[derive(Args, Debug)]
struct AttractorArgs {
    #[arg(long, value_enum)]
    secondary: Option<WaveName>,
    #[arg(long)]
    duration: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
}

#[derive(Args, Debug)]
struct ReservoirArgs {
    #[arg(long, value_enum)]
    task: Option<ReservoirTask>,
    /// Ridge penalty (classification) or memory-readout penalty.
    #[arg(long)]
    lambda: Option<f64>,
    /// Fit every λ in the config's `sweep_lambdas` and write lambda_sweep.csv.
    #[arg(long)]
    lambda_sweep: bool,
    #[arg(long)]
    p_capacitive: Option<f64>,
    #[arg(long)]
    p_memristive: Option<f64>,
    /// Shorthand for --p-capacitive 0 --p-memristive 0.
    #[arg(long)]
    resistive_only: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preset {
    /// 20 rows × 30 columns, 600 bricks.
    PaperWall,
}

#[derive(Args, Debug)]
struct WallArgs {
    #[arg(long, value_enum)]
    task: Option<WallTask>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    op: Option<MorphName>,
    /// Initial state as a text grid (wave task).
    #[arg(long)]
    initial: Option<PathBuf>,
    /// Input image as a text grid (morph task).
    #[arg(long)]
    image: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RouteArgs {
    /// Scenario file; a random fault sweep runs otherwise.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    max_faults: Option<usize>,
    #[arg(long)]
    ttl: Option<u32>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
}

fn resolve(cli: &Cli) -> anyhow::Result<(Subcommand, ExperimentConfig)> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    let cmd = match &cli.command {
        Command::Attractor(a) => {
            let c = &mut cfg.attractor;
            set(&mut c.secondary, a.secondary);
            set(&mut c.duration, a.duration);
            set(&mut c.dt, a.dt);
            Subcommand::Attractor
        }
        Command::Reservoir(a) => {
            let (r, n) = (&mut cfg.reservoir, &mut cfg.network);
            set(&mut r.task, a.task);
            if let Some(l) = a.lambda {
                r.lambda = l;
                r.memory_lambda = l;
            }
            r.lambda_sweep |= a.lambda_sweep;
            if a.resistive_only {
                n.p_capacitive = 0.0;
                n.p_memristive = 0.0;
            }
            set(&mut n.p_capacitive, a.p_capacitive);
            set(&mut n.p_memristive, a.p_memristive);
            Subcommand::Reservoir
        }
        Command::Wall(a) => {
            let w = &mut cfg.wall;
            if let Some(Preset::PaperWall) = a.preset {
                (w.rows, w.cols) = (20, 30);
            }
            set(&mut w.task, a.task);
            set(&mut w.rows, a.rows);
            set(&mut w.cols, a.cols);
            set(&mut w.steps, a.steps);
            set(&mut w.morph_op, a.op);
            if a.initial.is_some() {
                w.initial = a.initial.clone();
            }
            if a.image.is_some() {
                w.image = a.image.clone();
            }
            Subcommand::Wall
        }
        Command::Route(a) => {
            let r = &mut cfg.route;
            if a.scenario.is_some() {
                r.scenario = a.scenario.clone();
            }
            set(&mut r.max_faults, a.max_faults);
            set(&mut r.ttl, a.ttl);
            set(&mut r.rows, a.rows);
            set(&mut r.cols, a.cols);
            Subcommand::Route
        }
    };
    Ok((cmd, cfg))
}

fn set<T>(slot: &mut T, flag: Option<T>) {
    if let Some(v) = flag {
        *slot = v;
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve(&cli).and_then(|(cmd, cfg)| {
        let dir = RunDir::create(&cfg.out, &format!("{}-{}", cmd.name(), cfg.seed), cli.force)?;
        run_command(cmd, &cfg, &dir).with_context(|| format!("{} run failed", cmd.name()))
    });
    match result {
        Ok(outcome) if outcome.failures.is_empty() => {
            println!("{}", outcome.summary_line());
            ExitCode::SUCCESS
        }
        Ok(outcome) => {
            println!("{}", outcome.summary_line());
            eprintln!("oracle check failed: {}", outcome.failures.join("; "));
            ExitCode::from(2)
        }
        Err(e) => {
            // Some parsers report multi-line snippets; keep the diagnostic on one line.
            let msg = format!("{e:#}");
            eprintln!("error: {}", msg.split_whitespace().collect::<Vec<_>>().join(" "));
            ExitCode::FAILURE
        }
    }
}
