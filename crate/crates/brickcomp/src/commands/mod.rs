//! The four experiments. Each writes its files into a [`RunDir`] and
//! returns a one-line `key=value` summary plus any failed internal checks.

pub mod attractor;
pub mod reservoir;
pub mod route;
pub mod wall;

use std::fmt::Display;

use crate::config::ExperimentConfig;
use crate::run_dir::RunDir;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Attractor,
    Reservoir,
    Wall,
    Route,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Attractor => "attractor",
            Subcommand::Reservoir => "reservoir",
            Subcommand::Wall => "wall",
            Subcommand::Route => "route",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub summary: Vec<(String, String)>,
    /// Failed oracle checks; empty on success.
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn put(&mut self, key: &str, value: impl Display) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn summary_line(&self) -> String {
        self.summary.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    }
}

/// Runs `cmd`, echoing `cfg` as `config.toml` and the summary as
/// `summary.txt` inside `dir`.
pub fn run_command(cmd: Subcommand, cfg: &ExperimentConfig, dir: &RunDir) -> anyhow::Result<Outcome> {
    dir.write("config.toml", cfg.to_toml()?)?;
    let mut out = Outcome::default();
    out.put("subcommand", cmd.name());
    out.put("seed", cfg.seed);
    match cmd {
        Subcommand::Attractor => attractor::run(cfg, dir, &mut out)?,
        Subcommand::Reservoir => reservoir::run(cfg, dir, &mut out)?,
        Subcommand::Wall => wall::run(cfg, dir, &mut out)?,
        Subcommand::Route => route::run(cfg, dir, &mut out)?,
    }
    out.put("oracle_ok", out.failures.is_empty());
    dir.write("summary.txt", out.summary_line() + "\n")?;
    Ok(out)
}
