use anyhow::{ensure, Context};
use brickcomp_core::wall::{
    broadcast_time, build_brick_wall, build_brick_wall_toroidal, morph_op, render_binary, render_labels,
    render_states, run as run_ca, voronoi_wavefront, BrickGeometry, CellState, MorphOp, RuleSpec, VoronoiLabel,
    WallGraph, WallState,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Outcome;
use crate::config::{ExperimentConfig, WallSection, WallTask};
use crate::formats::{grid, ppm};
use crate::run_dir::RunDir;

pub fn run(cfg: &ExperimentConfig, dir: &RunDir, out: &mut Outcome) -> anyhow::Result<()> {
    // A grid file given as input fixes the wall size.
    let mut cfg = cfg.clone();
    let dims = match (cfg.wall.task, &cfg.wall.initial, &cfg.wall.image) {
        (WallTask::Wave, Some(path), _) => Some(grid_dims(path, grid::parse_states)?),
        (WallTask::Morph, _, Some(path)) => Some(grid_dims(path, grid::parse_binary)?),
        _ => None,
    };
    if let Some(dims) = dims {
        (cfg.wall.rows, cfg.wall.cols) = dims;
    }
    let cfg = &cfg;
    let w = &cfg.wall;
    let graph =
        if w.toroidal { build_brick_wall_toroidal(w.rows, w.cols)? } else { build_brick_wall(w.rows, w.cols)? };
    let geom = BrickGeometry { brick_w: w.brick_w, brick_h: w.brick_h };
    out.put("rows", w.rows);
    out.put("cols", w.cols);
    match w.task {
        WallTask::Wave => wave(cfg, &graph, geom, dir, out),
        WallTask::Voronoi => voronoi(cfg, &graph, geom, dir, out),
        WallTask::Morph => morph(cfg, &graph, geom, dir, out),
    }
}

fn cell_at(graph: &WallGraph, xy: [usize; 2]) -> anyhow::Result<usize> {
    ensure!(xy[0] < graph.cols() && xy[1] < graph.rows(), "cell [{}, {}] is outside the wall", xy[0], xy[1]);
    Ok(graph.cell(xy[0], xy[1]))
}

fn read_text(path: &std::path::Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn grid_dims<T>(
    path: &std::path::Path,
    parse: impl Fn(&str) -> Result<grid::Grid<T>, crate::formats::ParseError>,
) -> anyhow::Result<(usize, usize)> {
    let g = parse(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok((g.rows, g.cols))
}

fn read_grid<T>(
    path: &std::path::Path,
    w: &WallSection,
    parse: impl Fn(&str) -> Result<grid::Grid<T>, crate::formats::ParseError>,
) -> anyhow::Result<Vec<T>> {
    let text = read_text(path)?;
    let g = parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    ensure!((g.rows, g.cols) == (w.rows, w.cols), "{} is {}x{}, the wall is {}x{}", path.display(), g.rows, g.cols, w.rows, w.cols);
    Ok(g.cells)
}

fn frame_name(i: usize) -> String {
    format!("frames/frame_{i:04}.ppm")
}

fn wave(cfg: &ExperimentConfig, graph: &WallGraph, geom: BrickGeometry, dir: &RunDir, out: &mut Outcome) -> anyhow::Result<()> {
    let w = &cfg.wall;
    let initial = match &w.initial {
        Some(path) => WallState { cells: read_grid(path, w, grid::parse_states)?, step: 0 },
        None => {
            let sources = if w.sources.is_empty() {
                vec![graph.cell(w.cols / 2, w.rows / 2)]
            } else {
                w.sources.iter().map(|&xy| cell_at(graph, xy)).collect::<anyhow::Result<_>>()?
            };
            WallState::with_excited(graph.len(), &sources)
        }
    };
    let rule = RuleSpec { excite_lo: w.excite_lo, excite_hi: w.excite_hi, refractory_len: w.refractory_len, table: None };
    let traj = run_ca(graph, &initial, &rule, w.steps)?;

    for (i, s) in traj.iter().enumerate() {
        dir.write(frame_name(i), ppm::encode_ppm(&render_states(graph, s, geom)?))?;
    }
    dir.write("states.txt", grid::write_trajectory(graph.cols(), &traj).map_err(anyhow::Error::msg)?)?;

    let sources: Vec<usize> = (0..graph.len()).filter(|&c| initial.cells[c] == CellState::Excited).collect();
    out.put("task", "wave");
    out.put("sources", sources.len());
    out.put("steps_run", traj.len() - 1);
    out.put("excited_final", traj.last().expect("trajectory is never empty").excited_count());

    // With threshold 1 and no refractory cells at the start, the front moves
    // one BFS shell per step.
    let plain_start = initial.cells.iter().all(|c| matches!(c, CellState::Resting | CellState::Excited));
    if rule.excite_lo == 1 && plain_start && !sources.is_empty() {
        let dist = graph.bfs_distances(&sources, None);
        let mut first = vec![None; graph.len()];
        for (t, s) in traj.iter().enumerate() {
            for (c, st) in s.cells.iter().enumerate() {
                if *st == CellState::Excited && first[c].is_none() {
                    first[c] = Some(t as u32);
                }
            }
        }
        let horizon = (traj.len() - 1) as u32;
        let expected: Vec<Option<u32>> = dist.iter().map(|d| d.filter(|&d| d <= horizon)).collect();
        let matched = first == expected;
        out.put("oracle_match", matched);
        out.check(matched, || "first excitation differs from BFS distance".into());
        if sources.len() == 1 && !w.toroidal && rule == RuleSpec::classic() {
            let b = broadcast_time(graph, sources[0])?;
            let ecc = graph.eccentricity(sources[0]).context("wall is disconnected")?;
            out.put("broadcast_time", b);
            out.put("eccentricity", ecc);
            out.check(b == ecc as usize, || format!("broadcast time {b} differs from eccentricity {ecc}"));
        }
    } else {
        out.put("oracle_match", "skipped");
    }
    Ok(())
}

fn voronoi(cfg: &ExperimentConfig, graph: &WallGraph, geom: BrickGeometry, dir: &RunDir, out: &mut Outcome) -> anyhow::Result<()> {
    let w = &cfg.wall;
    let seeds: Vec<usize> = if w.voronoi_cells.is_empty() {
        ensure!(w.voronoi_seeds >= 1 && w.voronoi_seeds <= graph.len(), "voronoi_seeds must be in 1..={}", graph.len());
        sample(&mut ChaCha8Rng::seed_from_u64(cfg.seed), graph.len(), w.voronoi_seeds).into_vec()
    } else {
        w.voronoi_cells.iter().map(|&xy| cell_at(graph, xy)).collect::<anyhow::Result<_>>()?
    };
    let v = voronoi_wavefront(graph, &seeds)?;
    let ticks = v.arrival.iter().flatten().copied().max().unwrap_or(0);
    for t in 0..=ticks {
        let partial: Vec<VoronoiLabel> = v
            .labels
            .iter()
            .zip(&v.arrival)
            .map(|(l, a)| if matches!(a, Some(a) if *a <= t) { *l } else { VoronoiLabel::Unreached })
            .collect();
        dir.write(frame_name(t as usize), ppm::encode_ppm(&render_labels(graph, &partial, geom)?))?;
    }
    dir.write("states.txt", grid::write_labels(graph.cols(), &v.labels).map_err(anyhow::Error::msg)?)?;

    let per_seed: Vec<Vec<Option<u32>>> = seeds.iter().map(|&s| graph.bfs_distances(&[s], None)).collect();
    let oracle: Vec<VoronoiLabel> = (0..graph.len())
        .map(|c| match per_seed.iter().filter_map(|d| d[c]).min() {
            None => VoronoiLabel::Unreached,
            Some(best) => {
                let mut winners = (0..seeds.len()).filter(|&i| per_seed[i][c] == Some(best));
                match (winners.next(), winners.next()) {
                    (Some(i), None) => VoronoiLabel::Region(i),
                    _ => VoronoiLabel::Boundary,
                }
            }
        })
        .collect();
    let matched = oracle == v.labels;
    out.put("task", "voronoi");
    out.put("seeds", seeds.len());
    out.put("ticks", ticks);
    out.put("boundary_cells", v.boundary_count());
    out.put("oracle_match", matched);
    out.check(matched, || "voronoi labels differ from the nearest-seed oracle".into());
    Ok(())
}

fn morph(cfg: &ExperimentConfig, graph: &WallGraph, geom: BrickGeometry, dir: &RunDir, out: &mut Outcome) -> anyhow::Result<()> {
    let w = &cfg.wall;
    let image = match &w.image {
        Some(path) => read_grid(path, w, grid::parse_binary)?,
        None => {
            ensure!((0.0..=1.0).contains(&w.morph_density), "morph_density must be in [0, 1]");
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..graph.len()).map(|_| rng.gen_bool(w.morph_density)).collect()
        }
    };
    let op = MorphOp::from(w.morph_op);
    let result = morph_op(graph, &image, op)?;
    dir.write("frames/input.ppm", ppm::encode_ppm(&render_binary(graph, &image, geom)?))?;
    dir.write(format!("frames/{}.ppm", op.name()), ppm::encode_ppm(&render_binary(graph, &result, geom)?))?;
    dir.write("input.txt", grid::write_binary(graph.cols(), &image).map_err(anyhow::Error::msg)?)?;
    dir.write("states.txt", grid::write_binary(graph.cols(), &result).map_err(anyhow::Error::msg)?)?;

    // Cell-by-cell definition and erosion/dilation duality.
    let expected: Vec<bool> = (0..graph.len())
        .map(|c| {
            let nb = graph.neighbors(c);
            match op {
                MorphOp::Dilate => image[c] || nb.iter().any(|&n| image[n]),
                MorphOp::Erode => image[c] && nb.iter().all(|&n| image[n]),
                MorphOp::Contour => image[c] && nb.iter().any(|&n| !image[n]),
            }
        })
        .collect();
    let complement: Vec<bool> = image.iter().map(|b| !b).collect();
    let dual: Vec<bool> = morph_op(graph, &complement, MorphOp::Dilate)?.into_iter().map(|b| !b).collect();
    let matched = expected == result && morph_op(graph, &image, MorphOp::Erode)? == dual;
    out.put("task", "morph");
    out.put("op", op.name());
    out.put("on_before", image.iter().filter(|b| **b).count());
    out.put("on_after", result.iter().filter(|b| **b).count());
    out.put("oracle_match", matched);
    out.check(matched, || "morphology result disagrees with its definition or duality".into());
    Ok(())
}
