use alloc::vec::Vec;

use super::graph::WallGraph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MorphOp {
    Dilate,
    Erode,
    /// On cells with at least one off neighbour.
    Contour,
}

impl MorphOp {
    pub const ALL: [MorphOp; 3] = [MorphOp::Dilate, MorphOp::Erode, MorphOp::Contour];

    pub fn name(self) -> &'static str {
        match self {
            MorphOp::Dilate => "dilate",
            MorphOp::Erode => "erode",
            MorphOp::Contour => "contour",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.name() == s)
    }
}

/// One synchronous morphological step with the wall neighbourhood as the
/// structuring element.
pub fn morph_op(graph: &WallGraph, image: &[bool], op: MorphOp) -> Result<Vec<bool>> {
    if image.len() != graph.len() {
        return Err(Error::DimensionMismatch { expected: graph.len(), found: image.len() });
    }
    Ok((0..graph.len())
        .map(|c| {
            let mut nbrs = graph.neighbors(c).iter().map(|&n| image[n]);
            match op {
                MorphOp::Dilate => image[c] || nbrs.any(|b| b),
                MorphOp::Erode => image[c] && nbrs.all(|b| b),
                MorphOp::Contour => image[c] && nbrs.any(|b| !b),
            }
        })
        .collect())
}
