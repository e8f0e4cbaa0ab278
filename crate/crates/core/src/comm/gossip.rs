use alloc::vec;
use alloc::vec::Vec;

use super::fault::FaultScenario;
use super::flood::RunRecord;
use crate::wall::WallGraph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Aggregation {
    Min,
    Max,
}

impl Aggregation {
    fn combine(self, a: f64, b: f64) -> f64 {
        match self {
            Aggregation::Min => a.min(b),
            Aggregation::Max => a.max(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GossipState {
    /// `None` for failed cells.
    pub values: Vec<Option<f64>>,
    pub rounds: usize,
    /// Last round that changed any value (0 if none did).
    pub settled_round: usize,
    pub record: RunRecord,
}

/// Each round every alive cell replaces its value with the aggregate over
/// itself and its alive neighbours, reading only the previous round.
pub fn gossip_aggregate(
    graph: &WallGraph,
    faults: &FaultScenario,
    initial: &[f64],
    aggregation: Aggregation,
    rounds: usize,
) -> Result<GossipState> {
    if initial.len() != graph.len() {
        return Err(Error::DimensionMismatch { expected: graph.len(), found: initial.len() });
    }
    if initial.iter().any(|v| v.is_nan()) {
        return Err(Error::invalid("gossip values must not be NaN"));
    }
    faults.validate(graph)?;
    let failed = faults.failed_mask(graph.len());
    let mut values: Vec<Option<f64>> =
        initial.iter().zip(&failed).map(|(&v, &f)| if f { None } else { Some(v) }).collect();
    let sends_per_round: u64 = (0..graph.len())
        .filter(|&c| !failed[c])
        .map(|c| graph.neighbors(c).iter().filter(|&&n| !failed[n]).count() as u64)
        .sum();

    let mut record = RunRecord::default();
    let mut settled_round = 0;
    for round in 1..=rounds {
        let next: Vec<Option<f64>> = (0..graph.len())
            .map(|c| {
                values[c].map(|v| {
                    graph.neighbors(c).iter().filter_map(|&n| values[n]).fold(v, |acc, x| aggregation.combine(acc, x))
                })
            })
            .collect();
        record.per_round.push(sends_per_round);
        if next != values {
            settled_round = round;
        }
        values = next;
    }
    Ok(GossipState { values, rounds, settled_round, record })
}

/// Exact mean of each alive component, computed by summing up a BFS tree
/// rooted at the component's lowest id and broadcasting the result down.
pub fn spanning_tree_mean(graph: &WallGraph, faults: &FaultScenario, values: &[f64]) -> Result<Vec<Option<f64>>> {
    if values.len() != graph.len() {
        return Err(Error::DimensionMismatch { expected: graph.len(), found: values.len() });
    }
    faults.validate(graph)?;
    let failed = faults.failed_mask(graph.len());
    let n = graph.len();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut seen = failed.clone();
    let mut out = vec![None; n];
    let mut sum = vec![0.0; n];
    let mut count = vec![0usize; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut order = vec![root];
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for &nb in graph.neighbors(c) {
                if !seen[nb] {
                    seen[nb] = true;
                    parent[nb] = Some(c);
                    order.push(nb);
                }
            }
        }
        // Convergecast in reverse BFS order.
        for &c in order.iter().rev() {
            sum[c] += values[c];
            count[c] += 1;
            if let Some(p) = parent[c] {
                sum[p] += sum[c];
                count[p] += count[c];
            }
        }
        let mean = sum[root] / count[root] as f64;
        for &c in &order {
            out[c] = Some(mean);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wall::build_brick_wall;

    #[test]
    fn zero_rounds_is_identity() {
        let w = build_brick_wall(3, 3).unwrap();
        let init: Vec<f64> = (0..9).map(|i| i as f64).collect();
        let g = gossip_aggregate(&w, &FaultScenario::none(), &init, Aggregation::Min, 0).unwrap();
        assert_eq!(g.values, init.iter().map(|&v| Some(v)).collect::<Vec<_>>());
        assert_eq!(g.settled_round, 0);
    }

    #[test]
    fn max_spreads_along_a_row() {
        let w = build_brick_wall(1, 4).unwrap();
        let g = gossip_aggregate(&w, &FaultScenario::none(), &[0.0, 0.0, 0.0, 5.0], Aggregation::Max, 5).unwrap();
        assert!(g.values.iter().all(|v| *v == Some(5.0)));
        assert_eq!(g.settled_round, 3);
        assert_eq!(g.record.per_round, vec![6; 5]);
    }

    #[test]
    fn mean_per_component() {
        let w = build_brick_wall(1, 5).unwrap();
        let f = FaultScenario::from_cells(&w, [2]).unwrap();
        let m = spanning_tree_mean(&w, &f, &[1.0, 3.0, 100.0, 4.0, 8.0]).unwrap();
        assert_eq!(m, vec![Some(2.0), Some(2.0), None, Some(6.0), Some(6.0)]);
    }
}
