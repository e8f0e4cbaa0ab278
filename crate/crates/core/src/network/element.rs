use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

pub type NodeId = usize;

/// Linear ion-drift memristor: `R(w) = r_on·w + r_off·(1−w)` with state
/// `w ∈ [0, 1]` driven by `dw/dt = (mobility/length_scale²)·r_on·i·w(1−w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemristorParams {
    pub r_on: f64,
    pub r_off: f64,
    pub mobility: f64,
    pub length_scale: f64,
}

impl Default for MemristorParams {
    fn default() -> Self {
        Self { r_on: 100.0, r_off: 16_000.0, mobility: 1e-14, length_scale: 1e-9 }
    }
}

impl MemristorParams {
    pub fn resistance(&self, w: f64) -> f64 {
        self.r_on * w + self.r_off * (1.0 - w)
    }

    /// Rate constant multiplying `i·w(1−w)`.
    pub fn drift_rate(&self) -> f64 {
        self.mobility / (self.length_scale * self.length_scale) * self.r_on
    }

    /// Explicit state update over `dt` for current `i`, clamped to `[0, 1]`.
    pub fn advance(&self, w: f64, current: f64, dt: f64) -> f64 {
        let next = w + dt * self.drift_rate() * current * w * (1.0 - w);
        next.clamp(0.0, 1.0)
    }

    fn validate(&self) -> Result<()> {
        if !(self.r_on > 0.0 && self.r_on < self.r_off && self.r_off.is_finite()) {
            return Err(Error::invalid(format!(
                "memristor needs 0 < r_on < r_off, got r_on={} r_off={}",
                self.r_on, self.r_off
            )));
        }
        if !(self.mobility > 0.0 && self.mobility.is_finite()) {
            return Err(Error::invalid("memristor mobility must be positive"));
        }
        if !(self.length_scale > 0.0 && self.length_scale.is_finite()) {
            return Err(Error::invalid("memristor length scale must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementKind {
    /// Conductance in siemens.
    Resistor(f64),
    /// Capacitance in farads.
    Capacitor(f64),
    Memristor(MemristorParams),
}

impl ElementKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ElementKind::Resistor(g) if !(g > 0.0 && g.is_finite()) => {
                Err(Error::invalid(format!("resistor conductance must be positive, got {g}")))
            }
            ElementKind::Capacitor(c) if !(c > 0.0 && c.is_finite()) => {
                Err(Error::invalid(format!("capacitance must be positive, got {c}")))
            }
            ElementKind::Memristor(m) => m.validate(),
            _ => Ok(()),
        }
    }

    pub fn is_conductive(&self) -> bool {
        !matches!(self, ElementKind::Capacitor(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub a: NodeId,
    pub b: NodeId,
    pub kind: ElementKind,
}

/// A circuit over `node_count` nodes. `leak_conductance` is applied from
/// every non-ground node to ground (0 disables it).
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitTopology {
    pub node_count: usize,
    pub ground: NodeId,
    pub elements: Vec<Element>,
    pub input_pins: Vec<NodeId>,
    pub output_pins: Vec<NodeId>,
    pub leak_conductance: f64,
    pub seed: u64,
}

impl CircuitTopology {
    /// An empty circuit with ground at node 0 and no leak.
    pub fn new(node_count: usize) -> Self {
        Self {
            node_count,
            ground: 0,
            elements: Vec::new(),
            input_pins: Vec::new(),
            output_pins: Vec::new(),
            leak_conductance: 0.0,
            seed: 0,
        }
    }

    pub fn with_element(mut self, a: NodeId, b: NodeId, kind: ElementKind) -> Self {
        self.elements.push(Element { a, b, kind });
        self
    }

    pub fn with_pins(mut self, inputs: Vec<NodeId>, outputs: Vec<NodeId>) -> Self {
        self.input_pins = inputs;
        self.output_pins = outputs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_count < 2 {
            return Err(Error::invalid("a circuit needs at least two nodes"));
        }
        if self.ground >= self.node_count {
            return Err(Error::invalid("ground is not a valid node"));
        }
        for (i, e) in self.elements.iter().enumerate() {
            if e.a >= self.node_count || e.b >= self.node_count {
                return Err(Error::invalid(format!("element {i} references a missing node")));
            }
            if e.a == e.b {
                return Err(Error::invalid(format!("element {i} is a self-loop on node {}", e.a)));
            }
            e.kind.validate()?;
        }
        for &p in self.input_pins.iter().chain(&self.output_pins) {
            if p >= self.node_count || p == self.ground {
                return Err(Error::invalid(format!("pin {p} is not a valid non-ground node")));
            }
        }
        if !(self.leak_conductance >= 0.0 && self.leak_conductance.is_finite()) {
            return Err(Error::invalid("leak conductance must be finite and non-negative"));
        }
        Ok(())
    }

    /// Indices into `elements` of the memristors, in order. Memristor state
    /// vectors follow this order.
    pub fn memristor_indices(&self) -> Vec<usize> {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e.kind, ElementKind::Memristor(_)))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn count_kind(&self, pred: impl Fn(&ElementKind) -> bool) -> usize {
        self.elements.iter().filter(|e| pred(&e.kind)).count()
    }

    /// Whether every node has a conducting path (resistor, memristor or
    /// leak) to ground.
    pub fn is_grounded(&self) -> bool {
        if self.leak_conductance > 0.0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.node_count];
        for e in self.elements.iter().filter(|e| e.kind.is_conductive()) {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![self.ground];
        seen[self.ground] = true;
        while let Some(n) = stack.pop() {
            for &m in &adj[n] {
                if !seen[m] {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}
