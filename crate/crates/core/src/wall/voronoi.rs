use alloc::vec;
use alloc::vec::Vec;

use super::graph::{CellId, WallGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VoronoiLabel {
    /// Index into the seed list.
    Region(usize),
    Boundary,
    Unreached,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Voronoi {
    pub labels: Vec<VoronoiLabel>,
    /// Tick at which each cell was first reached.
    pub arrival: Vec<Option<u32>>,
}

impl Voronoi {
    pub fn boundary_count(&self) -> usize {
        self.labels.iter().filter(|l| **l == VoronoiLabel::Boundary).count()
    }
}

/// Wavefront tessellation: one wave per seed, advancing one graph step per
/// tick. A cell reached by a single label takes it; a cell reached at the
/// same tick by two or more labels, or by a boundary front, becomes boundary.
/// Boundary cells keep propagating, so collisions stay closed.
pub fn voronoi_wavefront(graph: &WallGraph, seeds: &[CellId]) -> Result<Voronoi> {
    if seeds.is_empty() {
        return Err(Error::invalid("voronoi needs at least one seed"));
    }
    let n = graph.len();
    let mut labels = vec![VoronoiLabel::Unreached; n];
    let mut arrival = vec![None; n];
    for (i, &s) in seeds.iter().enumerate() {
        if s >= n {
            return Err(Error::invalid("voronoi seed outside the wall"));
        }
        if arrival[s].is_some() {
            return Err(Error::invalid("voronoi seeds must be distinct"));
        }
        labels[s] = VoronoiLabel::Region(i);
        arrival[s] = Some(0);
    }

    let mut front: Vec<CellId> = seeds.to_vec();
    let mut tick = 0u32;
    while !front.is_empty() {
        tick += 1;
        let mut incoming: Vec<Option<VoronoiLabel>> = vec![None; n];
        let mut next = Vec::new();
        for &c in &front {
            for &nb in graph.neighbors(c) {
                if arrival[nb].is_some() {
                    continue;
                }
                let label = labels[c];
                match incoming[nb] {
                    None => {
                        incoming[nb] = Some(label);
                        next.push(nb);
                    }
                    Some(prev) if prev != label => incoming[nb] = Some(VoronoiLabel::Boundary),
                    Some(_) => {}
                }
            }
        }
        for &c in &next {
            labels[c] = incoming[c].expect("queued cells have an incoming label");
            arrival[c] = Some(tick);
        }
        front = next;
    }
    Ok(Voronoi { labels, arrival })
}

#[cfg(test)]
mod tests {
    use super::super::graph::build_brick_wall;
    use super::*;

    #[test]
    fn single_seed_claims_everything() {
        let w = build_brick_wall(7, 9).unwrap();
        let v = voronoi_wavefront(&w, &[20]).unwrap();
        assert!(v.labels.iter().all(|l| *l == VoronoiLabel::Region(0)));
        assert_eq!(v.arrival, w.bfs_distances(&[20], None));
    }

    #[test]
    fn bad_seed_sets_rejected() {
        let w = build_brick_wall(3, 3).unwrap();
        assert!(voronoi_wavefront(&w, &[]).is_err());
        assert!(voronoi_wavefront(&w, &[1, 1]).is_err());
        assert!(voronoi_wavefront(&w, &[9]).is_err());
    }

    #[test]
    fn row_split_into_halves() {
        let w = build_brick_wall(1, 5).unwrap();
        let v = voronoi_wavefront(&w, &[0, 4]).unwrap();
        use VoronoiLabel::*;
        assert_eq!(v.labels, vec![Region(0), Region(0), Boundary, Region(1), Region(1)]);
    }
}
