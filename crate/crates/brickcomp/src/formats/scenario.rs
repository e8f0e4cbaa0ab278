//! Routing scenario files.
//!
//! ```text
//! wall 20 30
//! ttl 100
//! scenario cut-a
//! faults 4 34 64
//! pair 0 599
//! pair 12 40
//! ```
//!
//! `wall` and `ttl` apply to every scenario; `faults` and `pair` lines
//! belong to the most recent `scenario`.

use std::fmt::Write;

use super::{content_lines, parse_num, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub id: String,
    pub faults: Vec<usize>,
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioFile {
    pub rows: usize,
    pub cols: usize,
    pub ttl: u32,
    pub scenarios: Vec<ScenarioSpec>,
}

pub fn write_scenarios(f: &ScenarioFile) -> String {
    let mut s = String::new();
    writeln!(s, "wall {} {}", f.rows, f.cols).unwrap();
    writeln!(s, "ttl {}", f.ttl).unwrap();
    for sc in &f.scenarios {
        writeln!(s, "scenario {}", sc.id).unwrap();
        if !sc.faults.is_empty() {
            let list: Vec<String> = sc.faults.iter().map(|c| c.to_string()).collect();
            writeln!(s, "faults {}", list.join(" ")).unwrap();
        }
        for (a, b) in &sc.pairs {
            writeln!(s, "pair {a} {b}").unwrap();
        }
    }
    s
}

pub fn parse_scenarios(text: &str) -> Result<ScenarioFile, ParseError> {
    let mut dims = None;
    let mut ttl = None;
    let mut scenarios: Vec<ScenarioSpec> = Vec::new();
    for (ln, line) in content_lines(text) {
        let mut tok = line.split_whitespace();
        let key = tok.next().expect("content lines are non-empty");
        let current = |s: &mut Vec<ScenarioSpec>| -> Result<usize, ParseError> {
            s.len().checked_sub(1).ok_or_else(|| ParseError::new(ln, format!("`{key}` before any `scenario`")))
        };
        match key {
            "wall" => dims = Some((parse_num(ln, tok.next(), "rows")?, parse_num(ln, tok.next(), "cols")?)),
            "ttl" => ttl = Some(parse_num(ln, tok.next(), "ttl")?),
            "scenario" => {
                let id = tok.next().ok_or_else(|| ParseError::new(ln, "missing scenario id"))?;
                if scenarios.iter().any(|s| s.id == id) {
                    return Err(ParseError::new(ln, format!("duplicate scenario `{id}`")));
                }
                scenarios.push(ScenarioSpec { id: id.to_string(), faults: Vec::new(), pairs: Vec::new() });
            }
            "faults" => {
                let i = current(&mut scenarios)?;
                for t in tok.by_ref() {
                    scenarios[i].faults.push(parse_num(ln, Some(t), "fault cell")?);
                }
            }
            "pair" => {
                let i = current(&mut scenarios)?;
                let pair = (parse_num(ln, tok.next(), "src")?, parse_num(ln, tok.next(), "dst")?);
                scenarios[i].pairs.push(pair);
            }
            other => return Err(ParseError::new(ln, format!("unknown keyword `{other}`"))),
        }
        if let Some(extra) = tok.next() {
            return Err(ParseError::new(ln, format!("unexpected `{extra}`")));
        }
    }
    let (rows, cols) = dims.ok_or_else(|| ParseError::new(0, "missing `wall` line"))?;
    let ttl = ttl.ok_or_else(|| ParseError::new(0, "missing `ttl` line"))?;
    Ok(ScenarioFile { rows, cols, ttl, scenarios })
}
