use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::wall::{CellId, WallGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FaultScenario {
    pub failed: BTreeSet<CellId>,
    /// Seed the set was drawn from, if random.
    pub seed: Option<u64>,
}

impl FaultScenario {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn from_cells(graph: &WallGraph, cells: impl IntoIterator<Item = CellId>) -> Result<Self> {
        let s = Self { failed: cells.into_iter().collect(), seed: None };
        s.validate(graph)?;
        Ok(s)
    }

    /// `count` failed cells drawn without replacement, never touching
    /// `protect`. Equal seeds give nested sets as `count` grows.
    pub fn random(graph: &WallGraph, count: usize, seed: u64, protect: &[CellId]) -> Result<Self> {
        let order = nested_fault_order(graph, seed, protect);
        if count > order.len() {
            return Err(Error::invalid("more faults requested than unprotected cells"));
        }
        Ok(Self { failed: order[..count].iter().copied().collect(), seed: Some(seed) })
    }

    pub fn failure_count(&self) -> usize {
        self.failed.len()
    }

    pub fn is_failed(&self, cell: CellId) -> bool {
        self.failed.contains(&cell)
    }

    /// `true` for failed cells.
    pub fn failed_mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &c in &self.failed {
            if c < n {
                m[c] = true;
            }
        }
        m
    }

    pub fn validate(&self, graph: &WallGraph) -> Result<()> {
        match self.failed.iter().next_back() {
            Some(&c) if c >= graph.len() => Err(Error::invalid("failed cell outside the wall")),
            _ => Ok(()),
        }
    }
}

/// Seeded shuffle of the unprotected cells; the first `k` entries form the
/// `k`-fault scenario.
pub fn nested_fault_order(graph: &WallGraph, seed: u64, protect: &[CellId]) -> Vec<CellId> {
    let mut cells: Vec<CellId> = (0..graph.len()).filter(|c| !protect.contains(c)).collect();
    cells.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    cells
}
