//! Experiment configuration, stored as TOML.
//!
//! Every field has a default, so a config file only lists what it changes.
//! Command-line flags are applied on top of the file. Each run echoes the
//! fully resolved config as `config.toml` next to its outputs.

use std::path::{Path, PathBuf};

use anyhow::Context;
use brickcomp_core::network::{LogRange, MemristorParams, NetworkGenParams, Scheme, WaveKind};
use brickcomp_core::wall::MorphOp;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Seeds the network, stimuli phases, wall patterns and fault draws.
    pub seed: u64,
    /// Parent of the per-run output directory.
    pub out: PathBuf,
    pub network: NetworkSection,
    pub attractor: AttractorSection,
    pub reservoir: ReservoirSection,
    pub wall: WallSection,
    pub route: RouteSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            out: PathBuf::from("runs"),
            network: NetworkSection::default(),
            attractor: AttractorSection::default(),
            reservoir: ReservoirSection::default(),
            wall: WallSection::default(),
            route: RouteSection::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeName {
    Trapezoidal,
    BackwardEuler,
}

impl From<SchemeName> for Scheme {
    fn from(s: SchemeName) -> Self {
        match s {
            SchemeName::Trapezoidal => Scheme::Trapezoidal,
            SchemeName::BackwardEuler => Scheme::BackwardEuler,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum WaveName {
    Square,
    Sine,
    Sawtooth,
}

impl From<WaveName> for WaveKind {
    fn from(w: WaveName) -> Self {
        match w {
            WaveName::Square => WaveKind::Square,
            WaveName::Sine => WaveKind::Sine,
            WaveName::Sawtooth => WaveKind::Sawtooth,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub lattice: [usize; 3],
    pub p_metallic: f64,
    pub p_memristive: f64,
    pub p_capacitive: f64,
    /// `[lo, hi]` ohms, log-uniform.
    pub metallic_ohms: [f64; 2],
    pub matrix_ohms: [f64; 2],
    /// `[lo, hi]` farads, log-uniform.
    pub capacitance: [f64; 2],
    pub r_on: f64,
    pub r_off: f64,
    pub mobility: f64,
    pub length_scale: f64,
    pub leak_factor: f64,
    pub input_pins: usize,
    pub output_pins: usize,
}

impl Default for NetworkSection {
    fn default() -> Self {
        let p = NetworkGenParams::default();
        Self {
            lattice: [p.lattice_dims.0, p.lattice_dims.1, p.lattice_dims.2],
            p_metallic: p.p_metallic,
            p_memristive: p.p_memristive,
            p_capacitive: p.p_capacitive,
            metallic_ohms: [p.metallic_ohms.lo, p.metallic_ohms.hi],
            matrix_ohms: [p.matrix_ohms.lo, p.matrix_ohms.hi],
            capacitance: [p.capacitance.lo, p.capacitance.hi],
            r_on: p.memristor.r_on,
            r_off: p.memristor.r_off,
            mobility: p.memristor.mobility,
            length_scale: p.memristor.length_scale,
            leak_factor: p.leak_factor,
            input_pins: p.pin_count_in,
            output_pins: p.pin_count_out,
        }
    }
}

impl NetworkSection {
    pub fn params(&self, seed: u64) -> NetworkGenParams {
        NetworkGenParams {
            lattice_dims: (self.lattice[0], self.lattice[1], self.lattice[2]),
            p_metallic: self.p_metallic,
            p_memristive: self.p_memristive,
            p_capacitive: self.p_capacitive,
            metallic_ohms: LogRange::new(self.metallic_ohms[0], self.metallic_ohms[1]),
            matrix_ohms: LogRange::new(self.matrix_ohms[0], self.matrix_ohms[1]),
            capacitance: LogRange::new(self.capacitance[0], self.capacitance[1]),
            memristor: MemristorParams {
                r_on: self.r_on,
                r_off: self.r_off,
                mobility: self.mobility,
                length_scale: self.length_scale,
            },
            leak_factor: self.leak_factor,
            pin_count_in: self.input_pins,
            pin_count_out: self.output_pins,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AttractorSection {
    pub dt: f64,
    pub duration: f64,
    pub scheme: SchemeName,
    pub primary_frequency: f64,
    pub secondary_frequency: f64,
    pub secondary: WaveName,
    pub amplitude: f64,
    /// Simulation steps per recorded sample.
    pub record_stride: usize,
    /// Index into the output pins of the embedded channel.
    pub channel: usize,
    /// Embedding lag in recorded samples.
    pub lag: usize,
    pub resolution: usize,
    /// Side of `portrait.ppm` in pixels.
    pub image_size: usize,
}

impl Default for AttractorSection {
    fn default() -> Self {
        Self {
            dt: 2e-5,
            duration: 1.0,
            scheme: SchemeName::Trapezoidal,
            primary_frequency: 100.0,
            secondary_frequency: 101.0,
            secondary: WaveName::Sine,
            amplitude: 1.0,
            record_stride: 5,
            channel: 0,
            lag: 25,
            resolution: 64,
            image_size: 256,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ReservoirTask {
    Classify,
    Memory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureName {
    Mean,
    MeanAndPower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReservoirSection {
    pub task: ReservoirTask,
    pub dt: f64,
    pub scheme: SchemeName,
    pub washout: f64,
    pub sample_period: f64,
    pub input_scale: f64,
    pub lambda: f64,
    /// Also fit every λ in `sweep_lambdas` and write `lambda_sweep.csv`.
    pub lambda_sweep: bool,
    pub sweep_lambdas: Vec<f64>,
    pub episodes: usize,
    pub episode_duration: f64,
    pub features: FeatureName,
    pub control_permutations: usize,
    pub max_delay: usize,
    pub memory_samples: usize,
    pub memory_sample_period: f64,
    pub memory_washout: f64,
    pub memory_lambda: f64,
}

impl Default for ReservoirSection {
    fn default() -> Self {
        Self {
            task: ReservoirTask::Classify,
            dt: 5e-5,
            scheme: SchemeName::Trapezoidal,
            washout: 0.1,
            sample_period: 1e-4,
            input_scale: 1.0,
            lambda: 1e-2,
            lambda_sweep: false,
            sweep_lambdas: vec![1e-6, 1e-4, 1e-2, 1.0, 1e2, 1e4],
            episodes: 30,
            episode_duration: 1.1,
            features: FeatureName::MeanAndPower,
            control_permutations: 20,
            max_delay: 5,
            memory_samples: 600,
            memory_sample_period: 1e-3,
            memory_washout: 0.02,
            memory_lambda: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum WallTask {
    Wave,
    Voronoi,
    Morph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MorphName {
    Dilate,
    Erode,
    Contour,
}

impl From<MorphName> for MorphOp {
    fn from(m: MorphName) -> Self {
        match m {
            MorphName::Dilate => MorphOp::Dilate,
            MorphName::Erode => MorphOp::Erode,
            MorphName::Contour => MorphOp::Contour,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WallSection {
    pub task: WallTask,
    pub rows: usize,
    pub cols: usize,
    pub toroidal: bool,
    pub steps: usize,
    /// Initially excited cells as `[x, y]`; empty means the centre brick.
    pub sources: Vec<[usize; 2]>,
    /// Text-grid file with the initial state; overrides `sources`.
    pub initial: Option<PathBuf>,
    pub excite_lo: u8,
    pub excite_hi: u8,
    pub refractory_len: u32,
    /// Random Voronoi seeds drawn when `voronoi_cells` is empty.
    pub voronoi_seeds: usize,
    pub voronoi_cells: Vec<[usize; 2]>,
    pub morph_op: MorphName,
    /// Binary text-grid image; a random image of `morph_density` otherwise.
    pub image: Option<PathBuf>,
    pub morph_density: f64,
    pub brick_w: usize,
    pub brick_h: usize,
}

impl Default for WallSection {
    fn default() -> Self {
        Self {
            task: WallTask::Wave,
            rows: 15,
            cols: 15,
            toroidal: false,
            steps: 30,
            sources: Vec::new(),
            initial: None,
            excite_lo: 1,
            excite_hi: 6,
            refractory_len: 1,
            voronoi_seeds: 5,
            voronoi_cells: Vec::new(),
            morph_op: MorphName::Dilate,
            image: None,
            morph_density: 0.5,
            brick_w: 8,
            brick_h: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RouteSection {
    pub rows: usize,
    pub cols: usize,
    pub ttl: u32,
    /// Scenario file; a random fault sweep runs when absent.
    pub scenario: Option<PathBuf>,
    pub max_faults: usize,
    pub fault_step: usize,
    /// Independent nested fault orders in the sweep.
    pub trials: usize,
    /// Random src/dst pairs per trial.
    pub pairs: usize,
}

impl Default for RouteSection {
    fn default() -> Self {
        Self {
            rows: 20,
            cols: 30,
            ttl: 100,
            scenario: None,
            max_faults: 50,
            fault_step: 5,
            trials: 5,
            pairs: 20,
        }
    }
}
