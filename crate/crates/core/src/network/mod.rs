//! Random resistor/capacitor/memristor networks and their transient response.
//!
//! A [`CircuitTopology`] is a list of two-terminal elements between numbered
//! nodes plus a uniform leak conductance from every node to ground. Input
//! pins are driven by ideal voltage sources; everything else is solved by
//! nodal analysis with companion models for the dynamic elements.

mod element;
mod generate;
mod portrait;
mod transient;
mod waveform;

pub use element::{CircuitTopology, Element, ElementKind, MemristorParams, NodeId};
pub use generate::{generate_network, LogRange, NetworkGenParams};
pub use portrait::{delay_embed, delay_embed_series, portrait_coverage};
pub use transient::{
    capacitive_energy, simulate, simulate_from, step_transient, CircuitState, Recording, Scheme,
    SimConfig, StepOutput, TraceRecord, TransientSolver,
};
pub use waveform::{waveform_sample, Stimulus, WaveKind, Waveform};
