use std::collections::BTreeMap;

use anyhow::{ensure, Context};
use brickcomp_core::comm::{flood_route, gossip_aggregate, nested_fault_order, Aggregation, FaultScenario};
use brickcomp_core::wall::{build_brick_wall, WallGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Outcome;
use crate::config::ExperimentConfig;
use crate::formats::scenario::{self, ScenarioSpec};
use crate::formats::table::{self, RouteRow};
use crate::run_dir::RunDir;

pub fn run(cfg: &ExperimentConfig, dir: &RunDir, out: &mut Outcome) -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (graph, ttl, scenarios, nested) = match &cfg.route.scenario {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file = scenario::parse_scenarios(&text).with_context(|| format!("parsing {}", path.display()))?;
            (build_brick_wall(file.rows, file.cols)?, file.ttl, file.scenarios, false)
        }
        None => {
            let graph = build_brick_wall(cfg.route.rows, cfg.route.cols)?;
            let scenarios = fault_sweep(cfg, &graph, &mut rng)?;
            (graph, cfg.route.ttl, scenarios, true)
        }
    };
    out.put("rows", graph.rows());
    out.put("cols", graph.cols());
    out.put("ttl", ttl);

    let mut rows = Vec::new();
    let mut gossip_ok = true;
    for sc in &scenarios {
        let faults = FaultScenario::from_cells(&graph, sc.faults.iter().copied())?;
        let failed = faults.failed_mask(graph.len());
        for &(src, dst) in &sc.pairs {
            let flood = flood_route(&graph, &faults, src, dst, ttl).with_context(|| format!("scenario {}", sc.id))?;
            let dist = graph.bfs_distances(&[src], Some(&failed))[dst];
            let reachable = matches!(dist, Some(d) if d <= ttl);
            out.check(flood.delivered == reachable && (!reachable || flood.hops == dist), || {
                format!("scenario {} pair {src}->{dst}: flood disagrees with BFS", sc.id)
            });
            rows.push(RouteRow {
                scenario_id: sc.id.clone(),
                fault_count: faults.failure_count(),
                src,
                dst,
                delivered: flood.delivered,
                hops: flood.hops,
                messages: flood.messages_sent,
                oracle_reachable: reachable,
            });
        }
        gossip_ok &= gossip_check(&graph, &faults, &failed, &mut rng)?;
    }
    out.check(gossip_ok, || "gossip min did not settle on the component minimum within the diameter".into());
    dir.write("results.csv", table::write_route_rows(&rows)?)?;

    // Delivery rate per fault count.
    let mut by_count: BTreeMap<usize, (usize, usize, u64)> = BTreeMap::new();
    for r in &rows {
        let e = by_count.entry(r.fault_count).or_default();
        e.0 += 1;
        e.1 += r.delivered as usize;
        e.2 += r.messages;
    }
    let rate = |e: &(usize, usize, u64)| e.1 as f64 / e.0 as f64;
    let curve = by_count.iter().map(|(k, e)| {
        vec![k.to_string(), e.0.to_string(), e.1.to_string(), rate(e).to_string(), e.2.to_string()]
    });
    dir.write("delivery.csv", table::write_csv(&["fault_count", "pairs", "delivered", "delivery_rate", "messages"], curve)?)?;
    if nested {
        let rates: Vec<f64> = by_count.values().map(rate).collect();
        out.check(rates.windows(2).all(|w| w[1] <= w[0]), || "delivery rate increased with more faults".into());
    }

    out.put("scenarios", scenarios.len());
    out.put("pairs", rows.len());
    if let (Some(first), Some(last)) = (by_count.iter().next(), by_count.iter().next_back()) {
        out.put(&format!("delivery_rate_f{}", first.0), rate(first.1));
        if last.0 != first.0 {
            out.put(&format!("delivery_rate_f{}", last.0), rate(last.1));
        }
    }
    out.put("gossip_ok", gossip_ok);
    Ok(())
}

/// `trials` nested fault orders; each trial floods the same random pairs
/// at every fault count `0, step, 2·step, …, max_faults`.
fn fault_sweep(cfg: &ExperimentConfig, graph: &WallGraph, rng: &mut ChaCha8Rng) -> anyhow::Result<Vec<ScenarioSpec>> {
    let r = &cfg.route;
    ensure!(graph.len() >= 2, "the wall needs at least two cells");
    ensure!(r.fault_step >= 1, "fault_step must be at least 1");
    let mut counts: Vec<usize> = (0..=r.max_faults).step_by(r.fault_step).collect();
    if counts.last() != Some(&r.max_faults) {
        counts.push(r.max_faults);
    }
    let mut out = Vec::new();
    for trial in 0..r.trials {
        let pairs: Vec<(usize, usize)> = (0..r.pairs)
            .map(|_| {
                let src = rng.gen_range(0..graph.len());
                let dst = (src + rng.gen_range(1..graph.len())) % graph.len();
                (src, dst)
            })
            .collect();
        let protect: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let order = nested_fault_order(graph, rng.gen(), &protect);
        ensure!(r.max_faults <= order.len(), "max_faults exceeds the {} cells that can fail", order.len());
        for &k in &counts {
            out.push(ScenarioSpec { id: format!("t{trial}-f{k}"), faults: order[..k].to_vec(), pairs: pairs.clone() });
        }
    }
    Ok(out)
}

/// Min-gossip for the largest alive-component diameter must leave every
/// alive cell holding its component minimum.
fn gossip_check(graph: &WallGraph, faults: &FaultScenario, failed: &[bool], rng: &mut ChaCha8Rng) -> anyhow::Result<bool> {
    let values: Vec<f64> = (0..graph.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
    let mut component = vec![usize::MAX; graph.len()];
    let mut minima = Vec::new();
    let mut diameter = 0;
    for c in 0..graph.len() {
        let dist = graph.bfs_distances(&[c], Some(failed));
        if failed[c] {
            continue;
        }
        diameter = diameter.max(dist.iter().flatten().copied().max().unwrap_or(0));
        if component[c] == usize::MAX {
            let id = minima.len();
            let mut min = f64::INFINITY;
            for (o, d) in dist.iter().enumerate() {
                if d.is_some() {
                    component[o] = id;
                    min = min.min(values[o]);
                }
            }
            minima.push(min);
        }
    }
    let g = gossip_aggregate(graph, faults, &values, Aggregation::Min, diameter as usize)?;
    Ok(g.settled_round <= diameter as usize
        && (0..graph.len()).all(|c| failed[c] || g.values[c] == Some(minima[component[c]])))
}
