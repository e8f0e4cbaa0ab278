use std::collections::BTreeMap;

use brickcomp_core::network::{
    delay_embed, generate_network, portrait_coverage, simulate, Recording, SimConfig, Stimulus, WaveKind, Waveform,
};
use brickcomp_core::wall::render_scatter;

use super::Outcome;
use crate::config::ExperimentConfig;
use crate::formats::{netlist, ppm, table};
use crate::run_dir::RunDir;

/// Drives the network with the primary square wave plus the secondary
/// waveform, and once with the primary alone, then compares the coverage
/// of the two delay-embedded portraits.
pub fn run(cfg: &ExperimentConfig, dir: &RunDir, out: &mut Outcome) -> anyhow::Result<()> {
    let a = &cfg.attractor;
    let topo = generate_network(&cfg.network.params(cfg.seed))?;
    anyhow::ensure!(topo.input_pins.len() >= 2, "the attractor run needs two input pins");
    dir.write("network.txt", netlist::write_netlist(&topo))?;

    let (p, q) = (topo.input_pins[0], topo.input_pins[1]);
    let primary = Stimulus::from(Waveform::new(WaveKind::Square, a.primary_frequency, a.amplitude));
    let secondary = Stimulus::from(Waveform::new(a.secondary.into(), a.secondary_frequency, a.amplitude));
    let sim = SimConfig {
        scheme: a.scheme.into(),
        record_stride: a.record_stride,
        recording: Recording::OutputPins,
        ..SimConfig::new(a.dt, a.duration)
    };
    let dual = simulate(&topo, &BTreeMap::from([(p, primary.clone()), (q, secondary)]), &sim)?;
    let single = simulate(&topo, &BTreeMap::from([(p, primary), (q, Stimulus::Constant(0.0))]), &sim)?;

    let points = delay_embed(&dual, a.channel, a.lag)?;
    let single_points = delay_embed(&single, a.channel, a.lag)?;
    let (cov_dual, cov_single) = (portrait_coverage(&points, a.resolution), portrait_coverage(&single_points, a.resolution));

    dir.write("trace.csv", table::write_trace(&dual)?)?;
    let rows = points.iter().map(|p| vec![p[0].to_string(), p[1].to_string()]);
    dir.write("portrait.csv", table::write_csv(&["v", "v_lagged"], rows)?)?;
    dir.write("portrait.ppm", ppm::encode_ppm(&render_scatter(&points, a.image_size)?))?;

    out.put("secondary", WaveKind::from(a.secondary).name());
    out.put("node", dual.nodes[a.channel]);
    out.put("samples", dual.len());
    out.put("coverage_dual", cov_dual);
    out.put("coverage_primary", cov_single);
    out.put("dual_exceeds_primary", cov_dual > cov_single);
    Ok(())
}
