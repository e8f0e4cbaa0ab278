use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::harvest::{harvest_states, ReservoirConfig, StateMatrix};
use super::metrics::{accuracy, r_squared, Standardizer};
use super::readout::{predict, train_ridge, OneVsRest, ReadoutWeights};
use crate::linalg::Matrix;
use crate::network::{CircuitTopology, NodeId, SimConfig, Stimulus, WaveKind, Waveform};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Episode {
    pub stimuli: BTreeMap<NodeId, Stimulus>,
    pub label: usize,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskDataset {
    pub episodes: Vec<Episode>,
    pub classes: usize,
    pub seed: u64,
}

impl TaskDataset {
    pub fn validate(&self) -> Result<()> {
        let has = |s| self.episodes.iter().any(|e| e.split == s);
        if !has(Split::Train) || !has(Split::Test) {
            return Err(Error::invalid("dataset needs both train and test episodes"));
        }
        if self.episodes.iter().any(|e| e.label >= self.classes) {
            return Err(Error::invalid("episode label outside the class set"));
        }
        Ok(())
    }
}

/// Uniform i.i.d. input stream on `[-1, 1]`.
pub fn memory_input_stream(seed: u64, len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemoryTaskConfig {
    pub input_pin: NodeId,
    pub max_delay: usize,
    /// Input values after the washout.
    pub samples: usize,
    /// Ridge penalty on z-scored states.
    pub lambda: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemoryCapacity {
    /// Held-out r² for delays `0..=max_delay`.
    pub per_delay: Vec<f64>,
    /// Sum over delays `1..=max_delay`.
    pub capacity: f64,
    /// Readout per delay, on z-scored states.
    pub readouts: Vec<ReadoutWeights>,
}

/// Harvested states of the memory task split into z-scored train/test
/// matrices with delayed-input targets.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryData {
    pub harvested: StateMatrix,
    pub x_train: Matrix,
    pub x_test: Matrix,
    /// `(train, test)` targets for delays `0..=max_delay`.
    pub targets: Vec<(Vec<f64>, Vec<f64>)>,
}

/// Drives `input_pin` with a piecewise-constant random stream (one value
/// per sample period, `input_scale` volts per unit, other input pins held
/// at 0 V) and pairs each post-washout state with the inputs before it.
///
/// The first two thirds of the usable rows train, the last third is held out.
pub fn memory_task_data(
    topology: &CircuitTopology,
    sim: &SimConfig,
    res: &ReservoirConfig,
    task: &MemoryTaskConfig,
) -> Result<MemoryData> {
    if task.max_delay < 1 {
        return Err(Error::invalid("max_delay must be at least 1"));
    }
    if !topology.input_pins.contains(&task.input_pin) {
        return Err(Error::invalid("memory task input is not an input pin"));
    }
    let stride = res.stride(sim.dt);
    let hold = stride as f64 * sim.dt;
    let washout_rows = libm::ceil(res.washout / hold - 1e-9).max(0.0) as usize;
    let levels = washout_rows + task.samples;
    let inputs = memory_input_stream(task.seed, levels);

    let mut stimuli: BTreeMap<NodeId, Stimulus> =
        topology.input_pins.iter().map(|&p| (p, Stimulus::Constant(0.0))).collect();
    stimuli.insert(
        task.input_pin,
        Stimulus::Steps { hold, levels: inputs.iter().map(|u| u * res.input_scale).collect() },
    );
    let sim = SimConfig { duration: levels as f64 * hold, ..sim.clone() };
    let res = ReservoirConfig { sample_period: hold, ..res.clone() };
    let harvested = harvest_states(topology, &stimuli, &sim, &res)?;

    // Row at t = j·hold has seen input j−1 for a full hold.
    let input_index: Vec<usize> =
        harvested.times.iter().map(|t| (libm::round(t / hold) as usize).saturating_sub(1)).collect();
    let rows: Vec<usize> = (0..harvested.times.len()).filter(|&r| input_index[r] >= task.max_delay).collect();
    if rows.len() < 6 {
        return Err(Error::invalid("too few samples for the requested delays"));
    }
    let n_train = rows.len() * 2 / 3;
    let pick = |subset: &[usize]| {
        let cols = harvested.states.cols();
        let mut data = Vec::with_capacity(subset.len() * cols);
        for &r in subset {
            data.extend_from_slice(harvested.states.row(r));
        }
        Matrix::from_row_major(subset.len(), cols, data)
    };
    let (train_rows, test_rows) = rows.split_at(n_train);
    let scaler = Standardizer::fit(&pick(train_rows));
    let x_train = scaler.apply(&pick(train_rows));
    let x_test = scaler.apply(&pick(test_rows));
    let targets = (0..=task.max_delay)
        .map(|d| {
            let target = |rs: &[usize]| rs.iter().map(|&r| inputs[input_index[r] - d]).collect::<Vec<_>>();
            (target(train_rows), target(test_rows))
        })
        .collect();
    Ok(MemoryData { harvested, x_train, x_test, targets })
}

/// Ridge readouts for every delay of `data` and their held-out r².
pub fn memory_capacity_from(data: &MemoryData, lambda: f64) -> Result<MemoryCapacity> {
    let mut per_delay = Vec::with_capacity(data.targets.len());
    let mut readouts = Vec::with_capacity(data.targets.len());
    for (train, test) in &data.targets {
        let readout = train_ridge(&data.x_train, train, lambda)?;
        per_delay.push(r_squared(&predict(&readout, &data.x_test)?, test));
        readouts.push(readout);
    }
    let capacity = per_delay[1..].iter().sum();
    Ok(MemoryCapacity { per_delay, capacity, readouts })
}

/// [`memory_task_data`] followed by [`memory_capacity_from`] at `task.lambda`.
pub fn memory_capacity(
    topology: &CircuitTopology,
    sim: &SimConfig,
    res: &ReservoirConfig,
    task: &MemoryTaskConfig,
) -> Result<MemoryCapacity> {
    memory_capacity_from(&memory_task_data(topology, sim, res, task)?, task.lambda)
}

/// How an episode's harvested states become one feature vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpisodeFeatures {
    /// Time-mean voltage per sampled node.
    Mean,
    /// Time-mean voltage followed by time-mean squared voltage per node.
    MeanAndPower,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationTaskConfig {
    pub primary_pin: NodeId,
    pub secondary_pin: NodeId,
    pub n_episodes: usize,
    pub episode_duration: f64,
    pub primary_frequency: f64,
    pub secondary_frequency: f64,
    pub amplitude: f64,
    pub lambda: f64,
    pub features: EpisodeFeatures,
    /// Label permutations averaged into the chance-level control (0 skips it).
    pub control_permutations: usize,
    pub seed: u64,
}

impl ClassificationTaskConfig {
    /// Defaults on the first two input pins of `topology`.
    pub fn for_topology(topology: &CircuitTopology) -> Result<Self> {
        if topology.input_pins.len() < 2 {
            return Err(Error::invalid("classification needs two input pins"));
        }
        Ok(Self {
            primary_pin: topology.input_pins[0],
            secondary_pin: topology.input_pins[1],
            n_episodes: 30,
            episode_duration: 1.1,
            primary_frequency: 100.0,
            secondary_frequency: 101.0,
            amplitude: 1.0,
            lambda: 1e-2,
            features: EpisodeFeatures::MeanAndPower,
            control_permutations: 20,
            seed: 0,
        })
    }
}

/// Balanced episodes over the three secondary waveform classes (label =
/// index into [`WaveKind::ALL`]) with random phases on both generators and
/// a 2/3–1/3 train/test split stratified by label.
pub fn build_waveform_dataset(cfg: &ClassificationTaskConfig) -> Result<TaskDataset> {
    if cfg.n_episodes < 12 {
        return Err(Error::invalid("at least 12 episodes are required"));
    }
    if cfg.primary_pin == cfg.secondary_pin {
        return Err(Error::invalid("primary and secondary pins must differ"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut episodes: Vec<Episode> = (0..cfg.n_episodes)
        .map(|i| {
            let label = i % WaveKind::ALL.len();
            let primary = Waveform::new(WaveKind::Square, cfg.primary_frequency, cfg.amplitude)
                .with_phase(rng.gen_range(0.0..2.0 * PI));
            let secondary = Waveform::new(WaveKind::ALL[label], cfg.secondary_frequency, cfg.amplitude)
                .with_phase(rng.gen_range(0.0..2.0 * PI));
            let stimuli = BTreeMap::from([
                (cfg.primary_pin, Stimulus::from(primary)),
                (cfg.secondary_pin, Stimulus::from(secondary)),
            ]);
            Episode { stimuli, label, split: Split::Train }
        })
        .collect();
    for class in 0..WaveKind::ALL.len() {
        let mut members: Vec<usize> = (0..episodes.len()).filter(|&i| episodes[i].label == class).collect();
        members.shuffle(&mut rng);
        let n_train = libm::round(members.len() as f64 * 2.0 / 3.0) as usize;
        for &i in &members[n_train..] {
            episodes[i].split = Split::Test;
        }
    }
    let ds = TaskDataset { episodes, classes: WaveKind::ALL.len(), seed: cfg.seed };
    ds.validate()?;
    Ok(ds)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    /// Mean held-out accuracy with labels permuted before training, over
    /// `control_permutations` permutations; `None` when skipped.
    pub control_accuracy: Option<f64>,
    /// One row per episode, unstandardized.
    pub features: Matrix,
    pub labels: Vec<usize>,
    pub splits: Vec<Split>,
    pub model: OneVsRest,
    pub scaler: Standardizer,
}

/// Episode features from harvested states.
pub fn episode_features(states: &Matrix, kind: EpisodeFeatures) -> Vec<f64> {
    let n = states.rows() as f64;
    let d = states.cols();
    let mut mean = vec![0.0; d];
    let mut power = vec![0.0; d];
    for r in 0..states.rows() {
        for (c, v) in states.row(r).iter().enumerate() {
            mean[c] += v / n;
            power[c] += v * v / n;
        }
    }
    match kind {
        EpisodeFeatures::Mean => mean,
        EpisodeFeatures::MeanAndPower => {
            mean.extend(power);
            mean
        }
    }
}

struct Fitted {
    model: OneVsRest,
    scaler: Standardizer,
    train_accuracy: f64,
    test_accuracy: f64,
}

fn fit_split(rows: &[Vec<f64>], labels: &[usize], splits: &[Split], classes: usize, lambda: f64) -> Result<Fitted> {
    let select = |s: Split| -> (Matrix, Vec<usize>) {
        let idx: Vec<usize> = (0..splits.len()).filter(|&i| splits[i] == s).collect();
        let m = Matrix::from_rows(&idx.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>());
        (m, idx.iter().map(|&i| labels[i]).collect())
    };
    let (x_train, y_train) = select(Split::Train);
    let (x_test, y_test) = select(Split::Test);
    let scaler = Standardizer::fit(&x_train);
    let (x_train, x_test) = (scaler.apply(&x_train), scaler.apply(&x_test));
    let model = OneVsRest::train(&x_train, &y_train, classes, lambda)?;
    let train_accuracy = accuracy(&model.classify(&x_train)?, &y_train);
    let test_accuracy = accuracy(&model.classify(&x_test)?, &y_test);
    Ok(Fitted { model, scaler, train_accuracy, test_accuracy })
}

/// Classifies the secondary waveform from per-episode features with
/// one-vs-rest ridge readouts on z-scored features.
pub fn waveform_classification_task(
    topology: &CircuitTopology,
    sim: &SimConfig,
    res: &ReservoirConfig,
    cfg: &ClassificationTaskConfig,
) -> Result<ClassificationReport> {
    let dataset = build_waveform_dataset(cfg)?;
    let sim = SimConfig { duration: cfg.episode_duration, ..sim.clone() };
    let mut rows = Vec::with_capacity(dataset.episodes.len());
    for ep in &dataset.episodes {
        let h = harvest_states(topology, &ep.stimuli, &sim, res)?;
        rows.push(episode_features(&h.states, cfg.features));
    }
    let labels: Vec<usize> = dataset.episodes.iter().map(|e| e.label).collect();
    let splits: Vec<Split> = dataset.episodes.iter().map(|e| e.split).collect();
    let fitted = fit_split(&rows, &labels, &splits, dataset.classes, cfg.lambda)?;

    let control_accuracy = if cfg.control_permutations > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_5eed_5eed_5eed);
        let mut total = 0.0;
        for _ in 0..cfg.control_permutations {
            let mut shuffled = labels.clone();
            shuffled.shuffle(&mut rng);
            total += fit_split(&rows, &shuffled, &splits, dataset.classes, cfg.lambda)?.test_accuracy;
        }
        Some(total / cfg.control_permutations as f64)
    } else {
        None
    };

    Ok(ClassificationReport {
        train_accuracy: fitted.train_accuracy,
        test_accuracy: fitted.test_accuracy,
        control_accuracy,
        features: Matrix::from_rows(&rows),
        labels,
        splits,
        model: fitted.model,
        scaler: fitted.scaler,
    })
}
