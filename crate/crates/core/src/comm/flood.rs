use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::fault::FaultScenario;
use crate::wall::{CellId, WallGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub msg_id: u64,
    pub src: CellId,
    pub dst: CellId,
    pub payload: Vec<u8>,
    /// Round budget, at least 1.
    pub ttl: u32,
    /// Rounds taken to reach `dst`.
    pub hops: u32,
}

impl Message {
    pub fn new(msg_id: u64, src: CellId, dst: CellId, ttl: u32) -> Self {
        Self { msg_id, src, dst, payload: Vec::new(), ttl, hops: 0 }
    }
}

/// Sends per round; entry `r` is round `r + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunRecord {
    pub per_round: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageCost {
    pub total: u64,
    pub per_round: Vec<u64>,
}

pub fn message_cost(record: &RunRecord) -> MessageCost {
    MessageCost { total: record.per_round.iter().sum(), per_round: record.per_round.clone() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloodOutcome {
    pub delivered: bool,
    /// Round in which `dst` was first informed.
    pub hops: Option<u32>,
    pub messages_sent: u64,
    /// Round each cell was first informed.
    pub informed: Vec<Option<u32>>,
    pub record: RunRecord,
    /// The message as it arrived, with `hops` filled in.
    pub message: Message,
}

fn check_alive(graph: &WallGraph, faults: &FaultScenario, cell: CellId) -> Result<()> {
    if cell >= graph.len() {
        return Err(Error::invalid("cell outside the wall"));
    }
    if faults.is_failed(cell) {
        return Err(Error::FailedCell(cell));
    }
    Ok(())
}

/// Flood `msg` for up to `msg.ttl` rounds. Each cell forwards the message
/// once, in the round after it was informed, to all alive neighbours.
/// Forwarding goes on after delivery until the budget or the wave runs out.
pub fn flood(graph: &WallGraph, faults: &FaultScenario, msg: &Message) -> Result<FloodOutcome> {
    if msg.ttl == 0 {
        return Err(Error::invalid("ttl must be at least 1"));
    }
    faults.validate(graph)?;
    check_alive(graph, faults, msg.src)?;
    check_alive(graph, faults, msg.dst)?;

    let mut informed = vec![None; graph.len()];
    informed[msg.src] = Some(0);
    let mut record = RunRecord::default();
    if msg.src != msg.dst {
        let failed = faults.failed_mask(graph.len());
        let mut frontier = vec![msg.src];
        for round in 1..=msg.ttl {
            if frontier.is_empty() {
                break;
            }
            let mut sent = 0u64;
            let mut next = Vec::new();
            for &c in &frontier {
                for &n in graph.neighbors(c) {
                    if failed[n] {
                        continue;
                    }
                    sent += 1;
                    if informed[n].is_none() {
                        informed[n] = Some(round);
                        next.push(n);
                    }
                }
            }
            record.per_round.push(sent);
            frontier = next;
        }
    }
    let hops = informed[msg.dst];
    let mut message = msg.clone();
    message.hops = hops.unwrap_or(0);
    Ok(FloodOutcome {
        delivered: hops.is_some(),
        hops,
        messages_sent: record.per_round.iter().sum(),
        informed,
        record,
        message,
    })
}

pub fn flood_route(graph: &WallGraph, faults: &FaultScenario, src: CellId, dst: CellId, ttl: u32) -> Result<FloodOutcome> {
    flood(graph, faults, &Message::new(0, src, dst, ttl))
}

/// Cells reachable from `src` through alive cells.
pub fn connectivity_oracle(graph: &WallGraph, faults: &FaultScenario, src: CellId) -> Result<BTreeSet<CellId>> {
    faults.validate(graph)?;
    check_alive(graph, faults, src)?;
    let mask = faults.failed_mask(graph.len());
    Ok(graph
        .bfs_distances(&[src], Some(&mask))
        .into_iter()
        .enumerate()
        .filter_map(|(c, d)| d.map(|_| c))
        .collect())
}
