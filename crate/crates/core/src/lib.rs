//! Simulation core for computing-brick experiments.
//!
//! Four layers, bottom to top:
//!
//! * [`network`]: random resistor/capacitor/memristor lattices and a
//!   fixed-step nodal-analysis transient solver.
//! * [`reservoir`]: treats a simulated network as a reservoir, harvests its
//!   states and trains linear readouts on them.
//! * [`wall`]: running-bond brick walls as a graph cellular automaton
//!   (excitation waves, Voronoi wavefronts, binary morphology, rasters).
//! * [`comm`]: lock-step flooding and gossip between bricks with failed units.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. File formats and the command-line driver live in the companion
//! `brickcomp` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod comm;
pub mod error;
pub mod linalg;
pub mod network;
pub mod reservoir;
pub mod wall;

pub use error::{Error, Result};

pub(crate) mod math {
    //! Float functions that are not in `core`.
    pub use libm::{exp, fabs as abs, floor, log, sin, sqrt};
}
