use alloc::vec;
use alloc::vec::Vec;

use super::automaton::{CellState, WallState};
use super::graph::WallGraph;
use super::voronoi::VoronoiLabel;
use crate::{Error, Result};

pub const PALETTE_RESTING: [u8; 3] = [140, 82, 45];
pub const PALETTE_EXCITED: [u8; 3] = [220, 30, 30];
pub const PALETTE_REFRACTORY: [u8; 3] = [40, 70, 200];
const BACKGROUND: [u8; 3] = [200, 200, 200];
const MORTAR: [u8; 3] = [0, 0, 0];
const OFF: [u8; 3] = [245, 245, 240];
const ON: [u8; 3] = [20, 20, 20];
const LABEL_PALETTE: [[u8; 3]; 8] = [
    [230, 159, 0],
    [86, 180, 233],
    [0, 158, 115],
    [240, 228, 66],
    [0, 114, 178],
    [213, 94, 0],
    [204, 121, 167],
    [120, 190, 60],
];

/// RGB image, rows top to bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
}

impl Raster {
    pub fn filled(width: usize, height: usize, color: [u8; 3]) -> Self {
        Self { width, height, pixels: vec![color; width * height] }
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, color: [u8; 3]) {
        if x < self.width && y < self.height {
            self.pixels[y * self.width + x] = color;
        }
    }
}

/// Pixel size of one brick.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BrickGeometry {
    pub brick_w: usize,
    pub brick_h: usize,
}

impl Default for BrickGeometry {
    fn default() -> Self {
        Self { brick_w: 8, brick_h: 4 }
    }
}

/// Even rows are drawn half a brick to the right, matching the `o = +1`
/// neighbour offset. A single-row wall has no offset.
pub fn render_cells(graph: &WallGraph, geom: BrickGeometry, color: impl Fn(usize) -> [u8; 3]) -> Result<Raster> {
    if geom.brick_w == 0 || geom.brick_h == 0 {
        return Err(Error::invalid("brick geometry must be non-empty"));
    }
    let shift = if graph.rows() > 1 { geom.brick_w / 2 } else { 0 };
    let mut r = Raster::filled(graph.cols() * geom.brick_w + shift, graph.rows() * geom.brick_h, BACKGROUND);
    for c in 0..graph.len() {
        let (x, y) = graph.coords(c);
        let x0 = x * geom.brick_w + if y % 2 == 0 { shift } else { 0 };
        let y0 = y * geom.brick_h;
        let fill = color(c);
        for dy in 0..geom.brick_h {
            for dx in 0..geom.brick_w {
                // Mortar lines on the right and bottom edge of larger bricks.
                let mortar = (geom.brick_w > 2 && dx == geom.brick_w - 1) || (geom.brick_h > 2 && dy == geom.brick_h - 1);
                r.set(x0 + dx, y0 + dy, if mortar { MORTAR } else { fill });
            }
        }
    }
    Ok(r)
}

pub fn render_states(graph: &WallGraph, state: &WallState, geom: BrickGeometry) -> Result<Raster> {
    if state.cells.len() != graph.len() {
        return Err(Error::DimensionMismatch { expected: graph.len(), found: state.cells.len() });
    }
    render_cells(graph, geom, |c| match state.cells[c] {
        CellState::Resting => PALETTE_RESTING,
        CellState::Excited => PALETTE_EXCITED,
        CellState::Refractory(_) => PALETTE_REFRACTORY,
    })
}

pub fn render_labels(graph: &WallGraph, labels: &[VoronoiLabel], geom: BrickGeometry) -> Result<Raster> {
    if labels.len() != graph.len() {
        return Err(Error::DimensionMismatch { expected: graph.len(), found: labels.len() });
    }
    render_cells(graph, geom, |c| match labels[c] {
        VoronoiLabel::Region(i) => LABEL_PALETTE[i % LABEL_PALETTE.len()],
        VoronoiLabel::Boundary => ON,
        VoronoiLabel::Unreached => BACKGROUND,
    })
}

pub fn render_binary(graph: &WallGraph, image: &[bool], geom: BrickGeometry) -> Result<Raster> {
    if image.len() != graph.len() {
        return Err(Error::DimensionMismatch { expected: graph.len(), found: image.len() });
    }
    render_cells(graph, geom, |c| if image[c] { ON } else { OFF })
}

/// Square scatter plot of 2-D points, axes scaled to the joint range.
pub fn render_scatter(points: &[[f64; 2]], size: usize) -> Result<Raster> {
    if size == 0 {
        return Err(Error::invalid("scatter size must be positive"));
    }
    let mut r = Raster::filled(size, size, [255, 255, 255]);
    let finite = points.iter().flatten().filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if lo > hi {
        return Ok(r);
    }
    let span = if hi > lo { hi - lo } else { 1.0 };
    let scale = (size - 1) as f64 / span;
    for p in points {
        if !(p[0].is_finite() && p[1].is_finite()) {
            continue;
        }
        let px = ((p[0] - lo) * scale + 0.5) as usize;
        let py = ((p[1] - lo) * scale + 0.5) as usize;
        r.set(px, size - 1 - py.min(size - 1), [0, 0, 0]);
    }
    Ok(r)
}
