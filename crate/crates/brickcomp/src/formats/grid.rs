//! One character per cell, one line per wall row (row 0 first).
//!
//! * wall states: `.` resting, `E` excited, `R` refractory with one step
//!   left, `2`–`9` refractory with that many steps left;
//! * Voronoi labels: `0`–`9`, `a`–`z`, `A`–`Z` for regions, `#` boundary,
//!   `?` unreached;
//! * binary images: `#` on, `.` off.
//!
//! Trajectories are blocks headed by `step <n>` and separated by a blank line.

use std::fmt::Write;

use brickcomp_core::wall::{CellState, VoronoiLabel, WallState};

use super::ParseError;

const LABEL_CHARS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// Parsed rectangular grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid<T> {
    pub rows: usize,
    pub cols: usize,
    pub cells: Vec<T>,
}

fn render<T>(cols: usize, cells: &[T], ch: impl Fn(&T) -> Result<char, String>) -> Result<String, String> {
    if cols == 0 || cells.len() % cols != 0 {
        return Err(format!("{} cells do not fill rows of {cols}", cells.len()));
    }
    let mut s = String::with_capacity(cells.len() + cells.len() / cols);
    for row in cells.chunks(cols) {
        for c in row {
            s.push(ch(c)?);
        }
        s.push('\n');
    }
    Ok(s)
}

fn parse<T>(text: &str, cell: impl Fn(char) -> Option<T>) -> Result<Grid<T>, ParseError> {
    let mut cols = None;
    let mut cells = Vec::new();
    let mut rows = 0;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let n = line.chars().count();
        if *cols.get_or_insert(n) != n {
            return Err(ParseError::new(i + 1, "ragged grid row"));
        }
        for ch in line.chars() {
            cells.push(cell(ch).ok_or_else(|| ParseError::new(i + 1, format!("unexpected cell `{ch}`")))?);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| ParseError::new(1, "empty grid"))?;
    Ok(Grid { rows, cols, cells })
}

fn state_char(s: &CellState) -> Result<char, String> {
    Ok(match *s {
        CellState::Resting => '.',
        CellState::Excited => 'E',
        CellState::Refractory(1) => 'R',
        CellState::Refractory(k @ 2..=9) => char::from(b'0' + k as u8),
        CellState::Refractory(k) => return Err(format!("refractory count {k} has no grid character")),
    })
}

fn char_state(c: char) -> Option<CellState> {
    match c {
        '.' => Some(CellState::Resting),
        'E' => Some(CellState::Excited),
        'R' => Some(CellState::Refractory(1)),
        '2'..='9' => Some(CellState::Refractory(c as u32 - '0' as u32)),
        _ => None,
    }
}

pub fn write_states(cols: usize, state: &WallState) -> Result<String, String> {
    render(cols, &state.cells, state_char)
}

pub fn parse_states(text: &str) -> Result<Grid<CellState>, ParseError> {
    parse(text, char_state)
}

pub fn write_labels(cols: usize, labels: &[VoronoiLabel]) -> Result<String, String> {
    render(cols, labels, |l| match *l {
        VoronoiLabel::Region(i) => LABEL_CHARS
            .get(i)
            .map(|&b| char::from(b))
            .ok_or_else(|| format!("region {i} has no grid character")),
        VoronoiLabel::Boundary => Ok('#'),
        VoronoiLabel::Unreached => Ok('?'),
    })
}

pub fn parse_labels(text: &str) -> Result<Grid<VoronoiLabel>, ParseError> {
    parse(text, |c| match c {
        '#' => Some(VoronoiLabel::Boundary),
        '?' => Some(VoronoiLabel::Unreached),
        _ => LABEL_CHARS.iter().position(|&b| char::from(b) == c).map(VoronoiLabel::Region),
    })
}

pub fn write_binary(cols: usize, image: &[bool]) -> Result<String, String> {
    render(cols, image, |&b| Ok(if b { '#' } else { '.' }))
}

pub fn parse_binary(text: &str) -> Result<Grid<bool>, ParseError> {
    parse(text, |c| match c {
        '#' => Some(true),
        '.' => Some(false),
        _ => None,
    })
}

pub fn write_trajectory(cols: usize, states: &[WallState]) -> Result<String, String> {
    let mut s = String::new();
    for (i, st) in states.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        writeln!(s, "step {}", st.step).unwrap();
        s.push_str(&write_states(cols, st)?);
    }
    Ok(s)
}

pub fn parse_trajectory(text: &str) -> Result<Vec<WallState>, ParseError> {
    let mut out = Vec::new();
    let mut block: Option<(u64, usize, String)> = None;
    let finish = |b: (u64, usize, String), out: &mut Vec<WallState>| -> Result<(), ParseError> {
        let g = parse_states(&b.2).map_err(|e| ParseError::new(b.1 + e.line, e.message))?;
        out.push(WallState { cells: g.cells, step: b.0 });
        Ok(())
    };
    for (i, line) in text.lines().enumerate() {
        if let Some(n) = line.strip_prefix("step ") {
            if let Some(b) = block.take() {
                finish(b, &mut out)?;
            }
            let step = n.trim().parse().map_err(|_| ParseError::new(i + 1, "bad step number"))?;
            block = Some((step, i + 1, String::new()));
        } else if let Some(b) = block.as_mut() {
            b.2.push_str(line);
            b.2.push('\n');
        } else if !line.trim().is_empty() {
            return Err(ParseError::new(i + 1, "grid line before the first `step` header"));
        }
    }
    if let Some(b) = block {
        finish(b, &mut out)?;
    }
    Ok(out)
}
