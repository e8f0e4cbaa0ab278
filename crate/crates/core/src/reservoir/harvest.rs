use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::network::{simulate, CircuitTopology, NodeId, Recording, SimConfig, Stimulus};
use crate::{math, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirConfig {
    pub sampled_nodes: Vec<NodeId>,
    /// Seconds discarded at the start of every run.
    pub washout: f64,
    /// Seconds between harvested rows; rounded to a whole number of steps.
    pub sample_period: f64,
    /// Volts per unit of task input.
    pub input_scale: f64,
}

impl ReservoirConfig {
    pub fn new(sampled_nodes: Vec<NodeId>) -> Self {
        Self { sampled_nodes, washout: 0.0, sample_period: 0.0, input_scale: 1.0 }
    }

    pub fn validate(&self, sim: &SimConfig, topology: &CircuitTopology) -> Result<()> {
        sim.validate()?;
        if self.sampled_nodes.is_empty() {
            return Err(Error::invalid("no sampled nodes"));
        }
        if let Some(n) = self.sampled_nodes.iter().find(|&&n| n >= topology.node_count) {
            return Err(Error::invalid(format!("sampled node {n} does not exist")));
        }
        if self.sample_period < sim.dt * (1.0 - 1e-9) {
            return Err(Error::invalid("sample period is shorter than the simulation step"));
        }
        if !(self.washout >= 0.0 && self.washout < sim.duration) {
            return Err(Error::invalid("washout must lie in [0, duration)"));
        }
        if !(self.input_scale.is_finite()) {
            return Err(Error::invalid("input scale must be finite"));
        }
        Ok(())
    }

    pub fn stride(&self, dt: f64) -> usize {
        (libm::round(self.sample_period / dt) as usize).max(1)
    }
}

/// Harvested reservoir states: one row per sample time, one column per
/// sampled node.
#[derive(Debug, Clone, PartialEq)]
pub struct StateMatrix {
    pub times: Vec<f64>,
    pub nodes: Vec<NodeId>,
    pub states: Matrix,
}

/// Simulates the network, drops rows before the washout and returns the
/// sampled-node voltages every `sample_period`.
pub fn harvest_states(
    topology: &CircuitTopology,
    stimuli: &BTreeMap<NodeId, Stimulus>,
    sim: &SimConfig,
    res: &ReservoirConfig,
) -> Result<StateMatrix> {
    res.validate(sim, topology)?;
    let config = SimConfig {
        record_stride: res.stride(sim.dt),
        recording: Recording::Nodes(res.sampled_nodes.clone()),
        ..sim.clone()
    };
    let trace = simulate(topology, stimuli, &config)?;
    let cutoff = res.washout - 1e-9 * sim.dt;
    let first = trace.times.iter().position(|&t| t >= cutoff).unwrap_or(trace.len());
    if first == trace.len() {
        return Err(Error::invalid("no samples remain after the washout"));
    }
    let cols = trace.samples.cols();
    let kept = trace.samples.as_slice()[first * cols..].to_vec();
    let rows = trace.len() - first;
    Ok(StateMatrix {
        times: trace.times[first..].to_vec(),
        nodes: trace.nodes,
        states: Matrix::from_row_major(rows, cols, kept),
    })
}

/// Mean distance between two aligned state trajectories divided by their
/// mean state norm. Zero iff the trajectories coincide.
pub fn trajectory_separation(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch { expected: a.rows() * a.cols(), found: b.rows() * b.cols() });
    }
    if a.rows() == 0 {
        return Err(Error::invalid("empty trajectories"));
    }
    let (mut dist, mut scale) = (0.0, 0.0);
    for r in 0..a.rows() {
        let (x, y) = (a.row(r), b.row(r));
        dist += math::sqrt(x.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum());
        let nx = math::sqrt(x.iter().map(|v| v * v).sum());
        let ny = math::sqrt(y.iter().map(|v| v * v).sum());
        scale += 0.5 * (nx + ny);
    }
    if dist == 0.0 {
        return Ok(0.0);
    }
    Ok(dist / scale)
}

pub fn separation_score(
    topology: &CircuitTopology,
    stimulus_a: &BTreeMap<NodeId, Stimulus>,
    stimulus_b: &BTreeMap<NodeId, Stimulus>,
    sim: &SimConfig,
    res: &ReservoirConfig,
) -> Result<f64> {
    let a = harvest_states(topology, stimulus_a, sim, res)?;
    let b = harvest_states(topology, stimulus_b, sim, res)?;
    trajectory_separation(&a.states, &b.states)
}
