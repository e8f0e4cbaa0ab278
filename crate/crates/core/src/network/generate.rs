use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::element::{CircuitTopology, Element, ElementKind, MemristorParams, NodeId};
use crate::{math, Error, Result};

/// Closed interval sampled log-uniformly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRange {
    pub lo: f64,
    pub hi: f64,
}

impl LogRange {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        let (a, b) = (math::log(self.lo), math::log(self.hi));
        math::exp(a + (b - a) * rng.gen::<f64>())
    }

    fn validate(&self, what: &str) -> Result<()> {
        if !(self.lo > 0.0 && self.lo <= self.hi && self.hi.is_finite()) {
            return Err(Error::invalid(format!("{what} range must satisfy 0 < lo <= hi")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkGenParams {
    pub lattice_dims: (usize, usize, usize),
    pub p_metallic: f64,
    pub p_memristive: f64,
    pub p_capacitive: f64,
    /// Ohms for metallic (shaving) edges.
    pub metallic_ohms: LogRange,
    /// Ohms for the weakly conducting matrix.
    pub matrix_ohms: LogRange,
    pub capacitance: LogRange,
    pub memristor: MemristorParams,
    /// Leak resistance to ground as a multiple of the memristor `r_off`.
    pub leak_factor: f64,
    pub pin_count_in: usize,
    pub pin_count_out: usize,
    pub seed: u64,
}

impl Default for NetworkGenParams {
    fn default() -> Self {
        Self {
            lattice_dims: (6, 6, 1),
            p_metallic: 0.10,
            p_memristive: 0.05,
            p_capacitive: 0.30,
            metallic_ohms: LogRange::new(1.0, 10.0),
            matrix_ohms: LogRange::new(1e4, 1e6),
            capacitance: LogRange::new(1e-9, 1e-6),
            memristor: MemristorParams::default(),
            leak_factor: 10.0,
            pin_count_in: 2,
            pin_count_out: 8,
            seed: 0,
        }
    }
}

impl NetworkGenParams {
    pub fn validate(&self) -> Result<()> {
        let (nx, ny, nz) = self.lattice_dims;
        if nx == 0 || ny == 0 || nz == 0 {
            return Err(Error::invalid("lattice dimensions must be positive"));
        }
        if nx * ny * nz < 2 {
            return Err(Error::invalid("lattice needs at least two nodes"));
        }
        let ps = [self.p_metallic, self.p_memristive, self.p_capacitive];
        if ps.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::invalid("element probabilities must lie in [0, 1]"));
        }
        if ps.iter().sum::<f64>() > 1.0 + 1e-12 {
            return Err(Error::invalid("element probabilities sum to more than 1"));
        }
        self.metallic_ohms.validate("metallic resistance")?;
        self.matrix_ohms.validate("matrix resistance")?;
        self.capacitance.validate("capacitance")?;
        ElementKind::Memristor(self.memristor).validate()?;
        if !(self.leak_factor > 0.0 && self.leak_factor.is_finite()) {
            return Err(Error::invalid("leak factor must be positive"));
        }
        Ok(())
    }
}

/// Lattice node `(x, y, z)` maps to node id `1 + x + nx·(y + ny·z)`; node 0
/// is ground.
pub fn lattice_node(dims: (usize, usize, usize), x: usize, y: usize, z: usize) -> NodeId {
    1 + x + dims.0 * (y + dims.1 * z)
}

/// Builds a nearest-neighbour lattice whose edges are independently drawn
/// as metallic resistors, memristors, capacitors or matrix resistors, then
/// places input and output pins on distinct boundary nodes.
pub fn generate_network(params: &NetworkGenParams) -> Result<CircuitTopology> {
    params.validate()?;
    let dims @ (nx, ny, nz) = params.lattice_dims;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut edges = Vec::new();
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let here = lattice_node(dims, x, y, z);
                if x + 1 < nx {
                    edges.push((here, lattice_node(dims, x + 1, y, z)));
                }
                if y + 1 < ny {
                    edges.push((here, lattice_node(dims, x, y + 1, z)));
                }
                if z + 1 < nz {
                    edges.push((here, lattice_node(dims, x, y, z + 1)));
                }
            }
        }
    }

    let t_metal = params.p_metallic;
    let t_mem = t_metal + params.p_memristive;
    let t_cap = t_mem + params.p_capacitive;
    let elements = edges
        .into_iter()
        .map(|(a, b)| {
            let u: f64 = rng.gen();
            let kind = if u < t_metal {
                ElementKind::Resistor(1.0 / params.metallic_ohms.sample(&mut rng))
            } else if u < t_mem {
                ElementKind::Memristor(params.memristor)
            } else if u < t_cap {
                ElementKind::Capacitor(params.capacitance.sample(&mut rng))
            } else {
                ElementKind::Resistor(1.0 / params.matrix_ohms.sample(&mut rng))
            };
            Element { a, b, kind }
        })
        .collect();

    let on_edge = |v: usize, n: usize| n > 1 && (v == 0 || v + 1 == n);
    let mut boundary = Vec::new();
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let flat = nx == 1 || ny == 1;
                if flat || on_edge(x, nx) || on_edge(y, ny) || on_edge(z, nz) {
                    boundary.push(lattice_node(dims, x, y, z));
                }
            }
        }
    }
    let wanted = params.pin_count_in + params.pin_count_out;
    if wanted > boundary.len() {
        return Err(Error::invalid(format!(
            "{wanted} pins requested but the lattice has only {} boundary nodes",
            boundary.len()
        )));
    }
    let (picked, _) = boundary.partial_shuffle(&mut rng, wanted);
    let input_pins = picked[..params.pin_count_in].to_vec();
    let output_pins = picked[params.pin_count_in..].to_vec();

    Ok(CircuitTopology {
        node_count: nx * ny * nz + 1,
        ground: 0,
        elements,
        input_pins,
        output_pins,
        leak_conductance: 1.0 / (params.leak_factor * params.memristor.r_off),
        seed: params.seed,
    })
}
