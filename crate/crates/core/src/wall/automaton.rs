use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::graph::{CellId, WallGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellState {
    Resting,
    Excited,
    /// Steps left before returning to rest, ≥ 1.
    Refractory(u32),
}

/// State kinds seen by a [`RuleTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TableState {
    Resting,
    Excited,
    Refractory,
}

impl TableState {
    pub const ALL: [TableState; 3] = [TableState::Resting, TableState::Excited, TableState::Refractory];

    fn of(s: CellState) -> Self {
        match s {
            CellState::Resting => TableState::Resting,
            CellState::Excited => TableState::Excited,
            CellState::Refractory(_) => TableState::Refractory,
        }
    }

    fn name(self) -> &'static str {
        match self {
            TableState::Resting => "resting",
            TableState::Excited => "excited",
            TableState::Refractory => "refractory",
        }
    }
}

/// Largest excited-neighbour count a table must cover.
pub const TABLE_MAX_COUNT: usize = 6;

/// Totalistic three-state rule: next state from (state, excited-neighbour
/// count). Table-driven refractory cells last exactly one step.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RuleTable {
    pub entries: BTreeMap<(TableState, u8), TableState>,
}

impl RuleTable {
    /// Table equivalent of an interval rule with one refractory step.
    pub fn from_interval(lo: u8, hi: u8) -> Self {
        let mut entries = BTreeMap::new();
        for count in 0..=TABLE_MAX_COUNT as u8 {
            let fire = (lo..=hi).contains(&count);
            entries.insert((TableState::Resting, count), if fire { TableState::Excited } else { TableState::Resting });
            entries.insert((TableState::Excited, count), TableState::Refractory);
            entries.insert((TableState::Refractory, count), TableState::Resting);
        }
        Self { entries }
    }

    pub fn validate(&self) -> Result<()> {
        for s in TableState::ALL {
            for count in 0..=TABLE_MAX_COUNT {
                if !self.entries.contains_key(&(s, count as u8)) {
                    return Err(Error::MalformedRuleTable { state: s.name(), count });
                }
            }
        }
        Ok(())
    }

    fn next(&self, s: CellState, count: usize) -> Result<CellState> {
        let kind = TableState::of(s);
        let out = u8::try_from(count)
            .ok()
            .and_then(|c| self.entries.get(&(kind, c)))
            .ok_or(Error::MalformedRuleTable { state: kind.name(), count })?;
        Ok(match out {
            TableState::Resting => CellState::Resting,
            TableState::Excited => CellState::Excited,
            TableState::Refractory => CellState::Refractory(1),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSpec {
    pub excite_lo: u8,
    pub excite_hi: u8,
    pub refractory_len: u32,
    /// Overrides the interval rule when present.
    pub table: Option<RuleTable>,
}

impl RuleSpec {
    /// Rest → excited on at least one excited neighbour; one refractory step.
    pub fn classic() -> Self {
        Self { excite_lo: 1, excite_hi: 6, refractory_len: 1, table: None }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1 <= self.excite_lo && self.excite_lo <= self.excite_hi && self.excite_hi <= 6) {
            return Err(Error::invalid("excitation interval must satisfy 1 <= lo <= hi <= 6"));
        }
        if self.refractory_len == 0 {
            return Err(Error::invalid("refractory length must be at least 1"));
        }
        if let Some(t) = &self.table {
            t.validate()?;
        }
        Ok(())
    }
}

impl Default for RuleSpec {
    fn default() -> Self {
        Self::classic()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallState {
    pub cells: Vec<CellState>,
    pub step: u64,
}

impl WallState {
    pub fn resting(n: usize) -> Self {
        Self { cells: vec![CellState::Resting; n], step: 0 }
    }

    pub fn with_excited(n: usize, excited: &[CellId]) -> Self {
        let mut s = Self::resting(n);
        for &c in excited {
            s.cells[c] = CellState::Excited;
        }
        s
    }

    pub fn excited_count(&self) -> usize {
        self.cells.iter().filter(|c| **c == CellState::Excited).count()
    }
}

/// One synchronous update. Every cell reads only the input state.
pub fn step_sync(graph: &WallGraph, state: &WallState, rule: &RuleSpec) -> Result<WallState> {
    if state.cells.len() != graph.len() {
        return Err(Error::DimensionMismatch { expected: graph.len(), found: state.cells.len() });
    }
    rule.validate()?;
    let (lo, hi) = (rule.excite_lo as usize, rule.excite_hi as usize);
    let cells = (0..graph.len())
        .map(|c| {
            let s = state.cells[c];
            let excited = graph.neighbors(c).iter().filter(|&&n| state.cells[n] == CellState::Excited).count();
            if let Some(t) = &rule.table {
                return t.next(s, excited);
            }
            Ok(match s {
                CellState::Resting if (lo..=hi).contains(&excited) => CellState::Excited,
                CellState::Resting => CellState::Resting,
                CellState::Excited => CellState::Refractory(rule.refractory_len),
                CellState::Refractory(k) if k > 1 => CellState::Refractory(k - 1),
                CellState::Refractory(_) => CellState::Resting,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WallState { cells, step: state.step + 1 })
}

/// Trajectory starting with `initial`, at most `max_steps` updates,
/// stopping before a state that repeats its predecessor.
pub fn run(graph: &WallGraph, initial: &WallState, rule: &RuleSpec, max_steps: usize) -> Result<Vec<WallState>> {
    if initial.cells.len() != graph.len() {
        return Err(Error::DimensionMismatch { expected: graph.len(), found: initial.cells.len() });
    }
    let mut traj = vec![initial.clone()];
    for _ in 0..max_steps {
        let next = step_sync(graph, traj.last().expect("trajectory is never empty"), rule)?;
        if next.cells == traj.last().expect("trajectory is never empty").cells {
            break;
        }
        traj.push(next);
    }
    Ok(traj)
}

/// Step at which each cell is first excited (0 for initially excited
/// cells), running until no cell is excited or `max_steps` is reached.
pub fn first_excitation_steps(
    graph: &WallGraph,
    initial: &WallState,
    rule: &RuleSpec,
    max_steps: usize,
) -> Result<Vec<Option<usize>>> {
    if initial.cells.len() != graph.len() {
        return Err(Error::DimensionMismatch { expected: graph.len(), found: initial.cells.len() });
    }
    let mut first = vec![None; graph.len()];
    let mut state = initial.clone();
    for step in 0..=max_steps {
        let mut any = false;
        for (c, s) in state.cells.iter().enumerate() {
            if *s == CellState::Excited {
                any = true;
                first[c].get_or_insert(step);
            }
        }
        if !any || step == max_steps {
            break;
        }
        state = step_sync(graph, &state, rule)?;
    }
    Ok(first)
}

/// Steps until every cell has been excited at least once under the classic
/// rule, starting from a single excited `source`.
pub fn broadcast_time(graph: &WallGraph, source: CellId) -> Result<usize> {
    if source >= graph.len() {
        return Err(Error::invalid("broadcast source outside the wall"));
    }
    let initial = WallState::with_excited(graph.len(), &[source]);
    // A single wave needs at most one step per cell.
    let first = first_excitation_steps(graph, &initial, &RuleSpec::classic(), graph.len())?;
    let mut latest = 0;
    for (c, f) in first.into_iter().enumerate() {
        latest = latest.max(f.ok_or(Error::Unreachable(c))?);
    }
    Ok(latest)
}
