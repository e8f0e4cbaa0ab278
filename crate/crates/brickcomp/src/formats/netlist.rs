//! Circuit netlists.
//!
//! ```text
//! nodes 38
//! ground 0
//! inputs 3 17
//! outputs 5 9 12
//! leak 6.25e-6
//! seed 4
//! G 1 2 0.001          # conductance, siemens
//! C 2 0 1e-6           # capacitance, farads
//! M 2 3 100 16000 1e-14 1e-9   # r_on r_off mobility length_scale
//! ```
//!
//! Header lines come first; element lines keep their order.

use std::fmt::Write;

use brickcomp_core::network::{CircuitTopology, Element, ElementKind, MemristorParams};

use super::{content_lines, parse_num, ParseError};

pub fn write_netlist(topo: &CircuitTopology) -> String {
    let mut s = String::new();
    let list = |v: &[usize]| v.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" ");
    writeln!(s, "nodes {}", topo.node_count).unwrap();
    writeln!(s, "ground {}", topo.ground).unwrap();
    writeln!(s, "inputs {}", list(&topo.input_pins)).unwrap();
    writeln!(s, "outputs {}", list(&topo.output_pins)).unwrap();
    writeln!(s, "leak {}", topo.leak_conductance).unwrap();
    writeln!(s, "seed {}", topo.seed).unwrap();
    for e in &topo.elements {
        match e.kind {
            ElementKind::Resistor(g) => writeln!(s, "G {} {} {}", e.a, e.b, g),
            ElementKind::Capacitor(c) => writeln!(s, "C {} {} {}", e.a, e.b, c),
            ElementKind::Memristor(m) => {
                writeln!(s, "M {} {} {} {} {} {}", e.a, e.b, m.r_on, m.r_off, m.mobility, m.length_scale)
            }
        }
        .unwrap();
    }
    s
}

pub fn parse_netlist(text: &str) -> Result<CircuitTopology, ParseError> {
    let mut topo: Option<CircuitTopology> = None;
    let mut ground = 0;
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut leak = 0.0;
    let mut seed = 0;
    let mut elements = Vec::new();
    for (ln, line) in content_lines(text) {
        let mut tok = line.split_whitespace();
        let key = tok.next().expect("content lines are non-empty");
        match key {
            "nodes" => topo = Some(CircuitTopology::new(parse_num(ln, tok.next(), "node count")?)),
            "ground" => ground = parse_num(ln, tok.next(), "ground node")?,
            "inputs" => inputs = tok.by_ref().map(|t| parse_num(ln, Some(t), "input pin")).collect::<Result<_, _>>()?,
            "outputs" => {
                outputs = tok.by_ref().map(|t| parse_num(ln, Some(t), "output pin")).collect::<Result<_, _>>()?
            }
            "leak" => leak = parse_num(ln, tok.next(), "leak conductance")?,
            "seed" => seed = parse_num(ln, tok.next(), "seed")?,
            "G" | "C" | "M" => {
                let a = parse_num(ln, tok.next(), "node")?;
                let b = parse_num(ln, tok.next(), "node")?;
                let kind = match key {
                    "G" => ElementKind::Resistor(parse_num(ln, tok.next(), "conductance")?),
                    "C" => ElementKind::Capacitor(parse_num(ln, tok.next(), "capacitance")?),
                    _ => ElementKind::Memristor(MemristorParams {
                        r_on: parse_num(ln, tok.next(), "r_on")?,
                        r_off: parse_num(ln, tok.next(), "r_off")?,
                        mobility: parse_num(ln, tok.next(), "mobility")?,
                        length_scale: parse_num(ln, tok.next(), "length scale")?,
                    }),
                };
                elements.push(Element { a, b, kind });
            }
            other => return Err(ParseError::new(ln, format!("unknown keyword `{other}`"))),
        }
        if let Some(extra) = tok.next() {
            return Err(ParseError::new(ln, format!("unexpected `{extra}`")));
        }
    }
    let mut topo = topo.ok_or_else(|| ParseError::new(0, "missing `nodes` line"))?;
    topo.ground = ground;
    topo.input_pins = inputs;
    topo.output_pins = outputs;
    topo.leak_conductance = leak;
    topo.seed = seed;
    topo.elements = elements;
    Ok(topo)
}
