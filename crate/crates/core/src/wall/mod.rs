//! A running-bond brick wall as a graph cellular automaton.
//!
//! Cell `(x, y)` (column, row) has id `y·cols + x`. Its neighbours are
//! `(x±1, y)`, `(x, y±1)` and `(x+o, y±1)` with `o = +1` on even rows and
//! `o = −1` on odd rows; edge bricks keep whichever of those exist.

mod automaton;
mod graph;
mod morphology;
mod render;
mod voronoi;

pub use automaton::{
    broadcast_time, first_excitation_steps, run, step_sync, CellState, RuleSpec, RuleTable, TableState,
    TABLE_MAX_COUNT,
    WallState,
};
pub use graph::{build_brick_wall, build_brick_wall_toroidal, CellId, WallGraph};
pub use morphology::{morph_op, MorphOp};
pub use render::{
    render_binary, render_cells, render_labels, render_scatter, render_states, BrickGeometry, Raster,
    PALETTE_EXCITED, PALETTE_REFRACTORY, PALETTE_RESTING,
};
pub use voronoi::{voronoi_wavefront, Voronoi, VoronoiLabel};
