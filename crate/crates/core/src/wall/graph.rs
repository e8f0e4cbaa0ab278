use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

pub type CellId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallGraph {
    rows: usize,
    cols: usize,
    adjacency: Vec<Vec<CellId>>,
}

/// Offset of the diagonal neighbours in row `y`.
fn row_offset(y: usize) -> isize {
    if y % 2 == 0 {
        1
    } else {
        -1
    }
}

fn raw_neighbours(x: usize, y: usize) -> [(isize, isize); 6] {
    let (x, y) = (x as isize, y as isize);
    let o = row_offset(y as usize);
    [(x - 1, y), (x + 1, y), (x, y - 1), (x + o, y - 1), (x, y + 1), (x + o, y + 1)]
}

/// Bounded wall: edge bricks simply have fewer neighbours.
pub fn build_brick_wall(rows: usize, cols: usize) -> Result<WallGraph> {
    if rows == 0 || cols == 0 {
        return Err(Error::invalid("wall dimensions must be positive"));
    }
    let mut adjacency = Vec::with_capacity(rows * cols);
    for y in 0..rows {
        for x in 0..cols {
            let n = raw_neighbours(x, y)
                .into_iter()
                .filter(|&(nx, ny)| nx >= 0 && ny >= 0 && (nx as usize) < cols && (ny as usize) < rows)
                .map(|(nx, ny)| ny as usize * cols + nx as usize)
                .collect();
            adjacency.push(n);
        }
    }
    Ok(WallGraph { rows, cols, adjacency })
}

/// Wall wrapped in both directions. Needs an even number of rows so the
/// row parity, and with it the offset convention, survives the wrap.
pub fn build_brick_wall_toroidal(rows: usize, cols: usize) -> Result<WallGraph> {
    if rows == 0 || cols == 0 || rows % 2 != 0 {
        return Err(Error::invalid("a toroidal wall needs positive dimensions and an even row count"));
    }
    let (r, c) = (rows as isize, cols as isize);
    let mut adjacency = Vec::with_capacity(rows * cols);
    for y in 0..rows {
        for x in 0..cols {
            let me = y * cols + x;
            let mut n: Vec<CellId> = raw_neighbours(x, y)
                .into_iter()
                .map(|(nx, ny)| (ny.rem_euclid(r) as usize) * cols + nx.rem_euclid(c) as usize)
                .filter(|&id| id != me)
                .collect();
            n.sort_unstable();
            n.dedup();
            adjacency.push(n);
        }
    }
    Ok(WallGraph { rows, cols, adjacency })
}

impl WallGraph {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn cell(&self, x: usize, y: usize) -> CellId {
        assert!(x < self.cols && y < self.rows, "cell ({x}, {y}) outside the wall");
        y * self.cols + x
    }

    /// `(column, row)` of a cell.
    pub fn coords(&self, id: CellId) -> (usize, usize) {
        (id % self.cols, id / self.cols)
    }

    pub fn neighbors(&self, id: CellId) -> &[CellId] {
        &self.adjacency[id]
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Graph whose neighbourhoods are all cells within `radius` hops.
    pub fn with_radius(&self, radius: usize) -> WallGraph {
        let adjacency = (0..self.len())
            .map(|c| {
                let d = self.bfs_distances(&[c], None);
                (0..self.len())
                    .filter(|&o| o != c && matches!(d[o], Some(k) if k as usize <= radius))
                    .collect()
            })
            .collect();
        WallGraph { rows: self.rows, cols: self.cols, adjacency }
    }

    /// Hop distances from the nearest of `sources`, skipping cells marked
    /// `true` in `blocked`.
    pub fn bfs_distances(&self, sources: &[CellId], blocked: Option<&[bool]>) -> Vec<Option<u32>> {
        let is_blocked = |c: CellId| blocked.is_some_and(|b| b[c]);
        let mut dist = vec![None; self.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if !is_blocked(s) && dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(c) = queue.pop_front() {
            let d = dist[c].expect("queued cells have a distance");
            for &n in &self.adjacency[c] {
                if dist[n].is_none() && !is_blocked(n) {
                    dist[n] = Some(d + 1);
                    queue.push_back(n);
                }
            }
        }
        dist
    }

    /// Largest hop distance from `source`, or `None` if some cell is
    /// unreachable.
    pub fn eccentricity(&self, source: CellId) -> Option<u32> {
        self.bfs_distances(&[source], None).into_iter().try_fold(0, |m, d| d.map(|d| m.max(d)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_brick_has_no_neighbours() {
        let w = build_brick_wall(1, 1).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w.neighbors(0).is_empty());
    }

    #[test]
    fn centre_of_three_by_three_has_six() {
        let w = build_brick_wall(3, 3).unwrap();
        let c = w.cell(1, 1);
        let mut n = w.neighbors(c).to_vec();
        n.sort_unstable();
        // Odd row: diagonals lean left.
        let mut expect = vec![w.cell(0, 1), w.cell(2, 1), w.cell(1, 0), w.cell(0, 0), w.cell(1, 2), w.cell(0, 2)];
        expect.sort_unstable();
        assert_eq!(n, expect);
    }

    #[test]
    fn adjacency_is_symmetric_without_self_loops() {
        for w in [build_brick_wall(10, 10).unwrap(), build_brick_wall(7, 4).unwrap(), build_brick_wall_toroidal(6, 5).unwrap()] {
            for c in 0..w.len() {
                assert!(!w.neighbors(c).contains(&c));
                for &n in w.neighbors(c) {
                    assert!(w.neighbors(n).contains(&c), "{c} -> {n} not mirrored");
                }
            }
        }
    }

    #[test]
    fn interior_cells_have_six_neighbours() {
        let w = build_brick_wall(10, 10).unwrap();
        for y in 1..9 {
            for x in 1..9 {
                assert_eq!(w.neighbors(w.cell(x, y)).len(), 6);
            }
        }
        let t = build_brick_wall_toroidal(6, 6).unwrap();
        assert!((0..t.len()).all(|c| t.neighbors(c).len() == 6));
        assert!(build_brick_wall_toroidal(5, 6).is_err());
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(build_brick_wall(0, 3).is_err());
        assert!(build_brick_wall(3, 0).is_err());
    }

    #[test]
    fn radius_two_neighbourhood_is_larger() {
        let w = build_brick_wall(9, 9).unwrap();
        let w2 = w.with_radius(2);
        assert_eq!(w2.neighbors(w.cell(4, 4)).len(), 18);
        let w1 = w.with_radius(1);
        for c in 0..w.len() {
            let mut a = w.neighbors(c).to_vec();
            a.sort_unstable();
            assert_eq!(w1.neighbors(c), a.as_slice());
        }
    }
}
