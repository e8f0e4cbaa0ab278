use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::element::{CircuitTopology, ElementKind, NodeId};
use super::waveform::Stimulus;
use crate::linalg::{Lu, Matrix};
use crate::{Error, Result};

/// Initial memristor state for a fresh circuit.
pub const INITIAL_MEMRISTOR_STATE: f64 = 0.5;

/// Length of the backward-Euler start-up step, as a fraction of `dt`.
const BOOTSTRAP_FRACTION: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    BackwardEuler,
    Trapezoidal,
}

/// Which node voltages a simulation records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recording {
    OutputPins,
    AllNodes,
    Nodes(Vec<NodeId>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub duration: f64,
    pub scheme: Scheme,
    pub record_stride: usize,
    pub recording: Recording,
}

impl SimConfig {
    pub fn new(dt: f64, duration: f64) -> Self {
        Self {
            dt,
            duration,
            scheme: Scheme::Trapezoidal,
            record_stride: 1,
            recording: Recording::OutputPins,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid("dt must be positive"));
        }
        // duration == dt is allowed and yields a single step.
        if !(self.duration >= self.dt && self.duration.is_finite()) {
            return Err(Error::invalid("duration must be at least dt"));
        }
        if self.record_stride == 0 {
            return Err(Error::invalid("record stride must be at least 1"));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        let n = libm::round(self.duration / self.dt) as usize;
        n.max(1)
    }
}

/// Full dynamic state of a circuit at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitState {
    pub time: f64,
    pub voltages: Vec<f64>,
    /// One entry per memristor, in [`CircuitTopology::memristor_indices`] order.
    pub memristor_states: Vec<f64>,
    /// Capacitor branch currents (a → b), one per element slot; `None`
    /// until a step has produced a consistent history.
    pub capacitor_currents: Option<Vec<f64>>,
}

impl CircuitState {
    pub fn at_rest(topology: &CircuitTopology) -> Self {
        Self {
            time: 0.0,
            voltages: vec![0.0; topology.node_count],
            memristor_states: vec![INITIAL_MEMRISTOR_STATE; topology.memristor_indices().len()],
            capacitor_currents: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutput {
    pub state: CircuitState,
    /// Voltage across and current through each memristor during the step.
    pub memristor_voltages: Vec<f64>,
    pub memristor_currents: Vec<f64>,
}

/// Stored energy `½·Σ C·v²` over all capacitors.
pub fn capacitive_energy(topology: &CircuitTopology, voltages: &[f64]) -> f64 {
    topology
        .elements
        .iter()
        .filter_map(|e| match e.kind {
            ElementKind::Capacitor(c) => {
                let v = voltages[e.a] - voltages[e.b];
                Some(0.5 * c * v * v)
            }
            _ => None,
        })
        .sum()
}

/// Reusable solver for one topology and one fixed set of driven pins.
///
/// Driven pins and ground are eliminated; the remaining node voltages solve
/// `G·v = i` with capacitors replaced by their companion conductance and
/// history current and memristors frozen at their current resistance.
#[derive(Debug, Clone)]
pub struct TransientSolver<'a> {
    topology: &'a CircuitTopology,
    /// Node → unknown index, `None` for ground and driven pins.
    unknown: Vec<Option<usize>>,
    driven: Vec<NodeId>,
    memristors: Vec<usize>,
    matrix: Matrix,
    rhs: Vec<f64>,
    solution: Vec<f64>,
    cached: Option<(Scheme, f64, Lu)>,
}

impl<'a> TransientSolver<'a> {
    pub fn new(topology: &'a CircuitTopology, driven: &[NodeId]) -> Result<Self> {
        topology.validate()?;
        let mut driven: Vec<NodeId> = driven.to_vec();
        driven.sort_unstable();
        driven.dedup();
        for p in &driven {
            if !topology.input_pins.contains(p) {
                return Err(Error::invalid(format!("node {p} is not an input pin")));
            }
        }
        let mut unknown = vec![None; topology.node_count];
        let mut n = 0;
        for (node, slot) in unknown.iter_mut().enumerate() {
            if node != topology.ground && driven.binary_search(&node).is_err() {
                *slot = Some(n);
                n += 1;
            }
        }
        Ok(Self {
            topology,
            unknown,
            driven,
            memristors: topology.memristor_indices(),
            matrix: Matrix::zeros(n, n),
            rhs: vec![0.0; n],
            solution: vec![0.0; n],
            cached: None,
        })
    }

    pub fn driven_pins(&self) -> &[NodeId] {
        &self.driven
    }

    /// Advances `state` by `dt` with the driven pins held at `sources`
    /// (evaluated at the end of the step).
    ///
    /// A trapezoidal step from a state without capacitor-current history
    /// first takes a tiny backward-Euler step to establish consistent
    /// currents, then covers the rest of `dt` with the trapezoidal rule.
    pub fn step(
        &mut self,
        state: &CircuitState,
        sources: &BTreeMap<NodeId, f64>,
        dt: f64,
        scheme: Scheme,
    ) -> Result<StepOutput> {
        let topo = self.topology;
        let time = state.time + dt;
        if state.voltages.len() != topo.node_count {
            return Err(Error::DimensionMismatch {
                expected: topo.node_count,
                found: state.voltages.len(),
            });
        }
        if state.memristor_states.len() != self.memristors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.memristors.len(),
                found: state.memristor_states.len(),
            });
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid("dt must be positive"));
        }
        let mut fixed = vec![0.0; topo.node_count];
        for (&pin, &v) in sources {
            if self.driven.binary_search(&pin).is_err() {
                return Err(Error::invalid(format!("source on node {pin} which this solver does not drive")));
            }
            if !v.is_finite() {
                return Err(Error::NumericalInstability { time });
            }
            fixed[pin] = v;
        }

        let has_history = matches!(&state.capacitor_currents, Some(i) if i.len() == topo.elements.len());
        match scheme {
            Scheme::BackwardEuler => self.advance(state, &fixed, dt, Scheme::BackwardEuler),
            Scheme::Trapezoidal if has_history => self.advance(state, &fixed, dt, Scheme::Trapezoidal),
            Scheme::Trapezoidal => {
                let h = dt * BOOTSTRAP_FRACTION;
                let at_step_end = |e: Error| match e {
                    Error::SingularCircuit { .. } => Error::SingularCircuit { time },
                    Error::NumericalInstability { .. } => Error::NumericalInstability { time },
                    other => other,
                };
                let boot = self.advance(state, &fixed, h, Scheme::BackwardEuler).map_err(at_step_end)?;
                let mut out =
                    self.advance(&boot.state, &fixed, dt - h, Scheme::Trapezoidal).map_err(at_step_end)?;
                out.state.time = time;
                Ok(out)
            }
        }
    }

    fn advance(&mut self, state: &CircuitState, fixed: &[f64], dt: f64, scheme: Scheme) -> Result<StepOutput> {
        let topo = self.topology;
        let time = state.time + dt;
        let history = match scheme {
            Scheme::Trapezoidal => state.capacitor_currents.as_deref(),
            Scheme::BackwardEuler => None,
        };
        let cap_scale = match scheme {
            Scheme::Trapezoidal => 2.0 / dt,
            Scheme::BackwardEuler => 1.0 / dt,
        };
        let cap_history = |idx: usize, geq: f64, v0: f64| match history {
            Some(i0) => geq * v0 + i0[idx],
            None => geq * v0,
        };

        let reuse = self.memristors.is_empty()
            && matches!(&self.cached, Some((s, d, _)) if *s == scheme && *d == dt);
        if !reuse {
            self.matrix.fill(0.0);
        }
        self.rhs.iter_mut().for_each(|r| *r = 0.0);

        let mut mem_slot = 0;
        for (idx, e) in topo.elements.iter().enumerate() {
            let (g, hist) = match e.kind {
                ElementKind::Resistor(g) => (g, 0.0),
                ElementKind::Memristor(m) => {
                    let w = state.memristor_states[mem_slot];
                    mem_slot += 1;
                    (1.0 / m.resistance(w), 0.0)
                }
                ElementKind::Capacitor(c) => {
                    let geq = c * cap_scale;
                    (geq, cap_history(idx, geq, state.voltages[e.a] - state.voltages[e.b]))
                }
            };
            let ua = self.unknown[e.a];
            let ub = self.unknown[e.b];
            if let Some(i) = ua {
                if !reuse {
                    self.matrix[(i, i)] += g;
                    if let Some(j) = ub {
                        self.matrix[(i, j)] -= g;
                    }
                }
                if ub.is_none() {
                    self.rhs[i] += g * fixed[e.b];
                }
                self.rhs[i] += hist;
            }
            if let Some(j) = ub {
                if !reuse {
                    self.matrix[(j, j)] += g;
                    if let Some(i) = ua {
                        self.matrix[(j, i)] -= g;
                    }
                }
                if ua.is_none() {
                    self.rhs[j] += g * fixed[e.a];
                }
                self.rhs[j] -= hist;
            }
        }
        if !reuse && topo.leak_conductance > 0.0 {
            for i in 0..self.rhs.len() {
                self.matrix[(i, i)] += topo.leak_conductance;
            }
        }

        if !self.rhs.is_empty() {
            if !reuse {
                let lu = Lu::factor(&self.matrix).map_err(|_| Error::SingularCircuit { time })?;
                self.cached = Some((scheme, dt, lu));
            }
            let (_, _, lu) = self.cached.as_ref().expect("factorization cached above");
            lu.solve_into(&self.rhs, &mut self.solution);
        }

        let mut voltages = fixed.to_vec();
        for (node, slot) in self.unknown.iter().enumerate() {
            if let Some(i) = slot {
                voltages[node] = self.solution[*i];
            }
        }
        voltages[topo.ground] = 0.0;
        if voltages.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalInstability { time });
        }

        let mut cap_currents = vec![0.0; topo.elements.len()];
        let mut memristor_states = Vec::with_capacity(self.memristors.len());
        let mut memristor_voltages = Vec::with_capacity(self.memristors.len());
        let mut memristor_currents = Vec::with_capacity(self.memristors.len());
        let mut mem_slot = 0;
        for (idx, e) in topo.elements.iter().enumerate() {
            let v1 = voltages[e.a] - voltages[e.b];
            match e.kind {
                ElementKind::Capacitor(c) => {
                    let geq = c * cap_scale;
                    let hist = cap_history(idx, geq, state.voltages[e.a] - state.voltages[e.b]);
                    cap_currents[idx] = geq * v1 - hist;
                }
                ElementKind::Memristor(m) => {
                    let w = state.memristor_states[mem_slot];
                    mem_slot += 1;
                    let i = v1 / m.resistance(w);
                    memristor_voltages.push(v1);
                    memristor_currents.push(i);
                    memristor_states.push(m.advance(w, i, dt));
                }
                ElementKind::Resistor(_) => {}
            }
        }
        if memristor_states.iter().chain(&cap_currents).any(|v| !v.is_finite()) {
            return Err(Error::NumericalInstability { time });
        }

        Ok(StepOutput {
            state: CircuitState {
                time,
                voltages,
                memristor_states,
                capacitor_currents: Some(cap_currents),
            },
            memristor_voltages,
            memristor_currents,
        })
    }
}

/// Single transient step; see [`TransientSolver::step`]. Every key of
/// `sources` must be an input pin and is held at the given voltage.
pub fn step_transient(
    topology: &CircuitTopology,
    state: &CircuitState,
    sources: &BTreeMap<NodeId, f64>,
    dt: f64,
    scheme: Scheme,
) -> Result<StepOutput> {
    let driven: Vec<NodeId> = sources.keys().copied().collect();
    TransientSolver::new(topology, &driven)?.step(state, sources, dt, scheme)
}

/// Time-sampled simulation output. Row `k` of every matrix belongs to
/// `times[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub nodes: Vec<NodeId>,
    pub times: Vec<f64>,
    /// time × recorded nodes, volts.
    pub samples: Matrix,
    /// time × memristors, state `w`.
    pub memristor_states: Matrix,
    pub memristor_voltages: Matrix,
    pub memristor_currents: Matrix,
}

impl TraceRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn channel(&self, c: usize) -> Vec<f64> {
        self.samples.column(c)
    }

    pub fn channel_of(&self, node: NodeId) -> Option<Vec<f64>> {
        self.nodes.iter().position(|&n| n == node).map(|c| self.channel(c))
    }
}

/// Runs the circuit from rest; see [`simulate_from`].
pub fn simulate(
    topology: &CircuitTopology,
    stimuli: &BTreeMap<NodeId, Stimulus>,
    config: &SimConfig,
) -> Result<TraceRecord> {
    simulate_from(topology, stimuli, config, CircuitState::at_rest(topology))
}

/// Steps the circuit `round(duration/dt)` times from `initial`, recording
/// after every `record_stride`-th step. Step `k` ends at `t = initial.time + k·dt`.
pub fn simulate_from(
    topology: &CircuitTopology,
    stimuli: &BTreeMap<NodeId, Stimulus>,
    config: &SimConfig,
    initial: CircuitState,
) -> Result<TraceRecord> {
    config.validate()?;
    for (pin, s) in stimuli {
        if !s.is_valid() {
            return Err(Error::invalid(format!("stimulus on pin {pin} is invalid")));
        }
    }
    let driven: Vec<NodeId> = stimuli.keys().copied().collect();
    let mut solver = TransientSolver::new(topology, &driven)?;
    let nodes = match &config.recording {
        Recording::OutputPins => topology.output_pins.clone(),
        Recording::AllNodes => (0..topology.node_count).collect(),
        Recording::Nodes(n) => {
            if let Some(bad) = n.iter().find(|&&x| x >= topology.node_count) {
                return Err(Error::invalid(format!("recorded node {bad} does not exist")));
            }
            n.clone()
        }
    };
    let steps = config.steps();
    let rows = steps / config.record_stride;
    let mems = topology.memristor_indices().len();
    let mut times = Vec::with_capacity(rows);
    let mut samples = Vec::with_capacity(rows * nodes.len());
    let mut mstates = Vec::with_capacity(rows * mems);
    let mut mvolts = Vec::with_capacity(rows * mems);
    let mut mcurrents = Vec::with_capacity(rows * mems);

    let t0 = initial.time;
    let mut state = initial;
    let mut sources = BTreeMap::new();
    for k in 1..=steps {
        let t = t0 + k as f64 * config.dt;
        sources.clear();
        for (&pin, s) in stimuli {
            sources.insert(pin, s.value(t));
        }
        let out = solver.step(&state, &sources, config.dt, config.scheme)?;
        state = out.state;
        state.time = t;
        if k % config.record_stride == 0 {
            times.push(t);
            samples.extend(nodes.iter().map(|&n| state.voltages[n]));
            mstates.extend_from_slice(&state.memristor_states);
            mvolts.extend_from_slice(&out.memristor_voltages);
            mcurrents.extend_from_slice(&out.memristor_currents);
        }
    }
    let rows = times.len();
    Ok(TraceRecord {
        samples: Matrix::from_row_major(rows, nodes.len(), samples),
        memristor_states: Matrix::from_row_major(rows, mems, mstates),
        memristor_voltages: Matrix::from_row_major(rows, mems, mvolts),
        memristor_currents: Matrix::from_row_major(rows, mems, mcurrents),
        nodes,
        times,
    })
}
