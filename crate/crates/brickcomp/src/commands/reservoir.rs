use brickcomp_core::linalg::Matrix;
use brickcomp_core::network::{generate_network, CircuitTopology, SimConfig, WaveKind};
use brickcomp_core::reservoir::{
    memory_capacity_from, memory_task_data, nrmse, predict, waveform_classification_task, ClassificationTaskConfig,
    EpisodeFeatures, MemoryTaskConfig, OneVsRest, ReadoutWeights, ReservoirConfig, Split, Standardizer,
};

use super::Outcome;
use crate::config::{ExperimentConfig, FeatureName, ReservoirTask};
use crate::formats::{netlist, table};
use crate::run_dir::RunDir;

pub fn run(cfg: &ExperimentConfig, dir: &RunDir, out: &mut Outcome) -> anyhow::Result<()> {
    let topo = generate_network(&cfg.network.params(cfg.seed))?;
    dir.write("network.txt", netlist::write_netlist(&topo))?;
    match cfg.reservoir.task {
        ReservoirTask::Classify => classify(cfg, &topo, dir, out),
        ReservoirTask::Memory => memory(cfg, &topo, dir, out),
    }
}

fn weights_csv(names: &[String], readouts: &[ReadoutWeights]) -> anyhow::Result<Vec<u8>> {
    let width = readouts.first().map_or(0, |r| r.weights.len());
    let header: Vec<String> =
        ["readout".to_string(), "bias".to_string()].into_iter().chain((0..width).map(|i| format!("w{i}"))).collect();
    let rows = names.iter().zip(readouts).map(|(n, r)| {
        [n.clone(), r.bias.to_string()].into_iter().chain(r.weights.iter().map(f64::to_string)).collect()
    });
    Ok(table::write_csv(&header, rows)?)
}

/// Writes `lambda_sweep.csv` and checks that the weight norm never grows
/// with λ. `fit` returns (mean NRMSE, weight norm) for one λ.
fn lambda_sweep(
    cfg: &ExperimentConfig,
    dir: &RunDir,
    out: &mut Outcome,
    mut fit: impl FnMut(f64) -> anyhow::Result<(f64, f64)>,
) -> anyhow::Result<()> {
    let mut lambdas = cfg.reservoir.sweep_lambdas.clone();
    lambdas.sort_by(f64::total_cmp);
    let mut rows = Vec::new();
    let mut prev: Option<f64> = None;
    for &l in &lambdas {
        let (err, norm) = fit(l)?;
        if let Some(p) = prev {
            out.check(norm <= p * (1.0 + 1e-9) + 1e-300, || format!("weight norm grew from {p} to {norm} at lambda={l}"));
        }
        prev = Some(norm);
        rows.push(vec![l.to_string(), err.to_string(), norm.to_string()]);
    }
    dir.write("lambda_sweep.csv", table::write_csv(&["lambda", "nrmse", "weight_norm"], rows)?)?;
    out.put("sweep_points", lambdas.len());
    Ok(())
}

fn classify(cfg: &ExperimentConfig, topo: &CircuitTopology, dir: &RunDir, out: &mut Outcome) -> anyhow::Result<()> {
    let r = &cfg.reservoir;
    let sim = SimConfig { scheme: r.scheme.into(), ..SimConfig::new(r.dt, r.episode_duration) };
    let res = ReservoirConfig {
        washout: r.washout,
        sample_period: r.sample_period,
        input_scale: r.input_scale,
        ..ReservoirConfig::new(topo.output_pins.clone())
    };
    let task = ClassificationTaskConfig {
        n_episodes: r.episodes,
        episode_duration: r.episode_duration,
        lambda: r.lambda,
        features: match r.features {
            FeatureName::Mean => EpisodeFeatures::Mean,
            FeatureName::MeanAndPower => EpisodeFeatures::MeanAndPower,
        },
        control_permutations: r.control_permutations,
        seed: cfg.seed,
        ..ClassificationTaskConfig::for_topology(topo)?
    };
    let report = waveform_classification_task(topo, &sim, &res, &task)?;

    let width = report.features.cols();
    let header: Vec<String> = ["episode", "label", "split"]
        .into_iter()
        .map(String::from)
        .chain((0..width).map(|i| format!("f{i}")))
        .collect();
    let rows = (0..report.features.rows()).map(|i| {
        let split = if report.splits[i] == Split::Train { "train" } else { "test" };
        [i.to_string(), WaveKind::ALL[report.labels[i]].name().to_string(), split.to_string()]
            .into_iter()
            .chain(report.features.row(i).iter().map(f64::to_string))
            .collect()
    });
    dir.write("states.csv", table::write_csv(&header, rows)?)?;
    let names: Vec<String> = WaveKind::ALL.iter().map(|k| k.name().to_string()).collect();
    dir.write("weights.csv", weights_csv(&names, &report.model.readouts)?)?;

    out.put("task", "classify");
    out.put("episodes", report.labels.len());
    out.put("train_accuracy", report.train_accuracy);
    out.put("accuracy", report.test_accuracy);
    if let Some(c) = report.control_accuracy {
        out.put("control_accuracy", c);
    }
    let in_unit = |v: f64| (0.0..=1.0).contains(&v);
    out.check(in_unit(report.test_accuracy) && in_unit(report.train_accuracy), || "accuracy outside [0, 1]".into());

    if r.lambda_sweep {
        let pick = |s: Split| {
            let idx: Vec<usize> = (0..report.splits.len()).filter(|&i| report.splits[i] == s).collect();
            let rows: Vec<Vec<f64>> = idx.iter().map(|&i| report.features.row(i).to_vec()).collect();
            (Matrix::from_rows(&rows), idx.iter().map(|&i| report.labels[i]).collect::<Vec<_>>())
        };
        let (x_train, y_train) = pick(Split::Train);
        let (x_test, y_test) = pick(Split::Test);
        let scaler = Standardizer::fit(&x_train);
        let (x_train, x_test) = (scaler.apply(&x_train), scaler.apply(&x_test));
        let classes = WaveKind::ALL.len();
        lambda_sweep(cfg, dir, out, |l| {
            let model = OneVsRest::train(&x_train, &y_train, classes, l)?;
            let mut err = 0.0;
            let mut norm2 = 0.0;
            for (c, readout) in model.readouts.iter().enumerate() {
                let target: Vec<f64> = y_test.iter().map(|&y| if y == c { 1.0 } else { -1.0 }).collect();
                err += nrmse(&predict(readout, &x_test)?, &target)? / classes as f64;
                norm2 += readout.weight_norm().powi(2);
            }
            Ok((err, norm2.sqrt()))
        })?;
    }
    Ok(())
}

fn memory(cfg: &ExperimentConfig, topo: &CircuitTopology, dir: &RunDir, out: &mut Outcome) -> anyhow::Result<()> {
    let r = &cfg.reservoir;
    anyhow::ensure!(!topo.input_pins.is_empty(), "the memory task needs an input pin");
    let sim = SimConfig { scheme: r.scheme.into(), ..SimConfig::new(r.dt, r.memory_sample_period) };
    let res = ReservoirConfig {
        washout: r.memory_washout,
        sample_period: r.memory_sample_period,
        input_scale: r.input_scale,
        ..ReservoirConfig::new(topo.output_pins.clone())
    };
    let task = MemoryTaskConfig {
        input_pin: topo.input_pins[0],
        max_delay: r.max_delay,
        samples: r.memory_samples,
        lambda: r.memory_lambda,
        seed: cfg.seed,
    };
    let data = memory_task_data(topo, &sim, &res, &task)?;
    let mc = memory_capacity_from(&data, task.lambda)?;

    let h = &data.harvested;
    let header: Vec<String> = std::iter::once("t".to_string()).chain(h.nodes.iter().map(|n| n.to_string())).collect();
    let rows = (0..h.times.len()).map(|k| {
        std::iter::once(h.times[k]).chain(h.states.row(k).iter().copied()).map(|v| v.to_string()).collect()
    });
    dir.write("states.csv", table::write_csv(&header, rows)?)?;
    let names: Vec<String> = (0..mc.readouts.len()).map(|d| format!("delay{d}")).collect();
    dir.write("weights.csv", weights_csv(&names, &mc.readouts)?)?;
    let rows = mc.per_delay.iter().enumerate().map(|(d, r2)| vec![d.to_string(), r2.to_string()]);
    dir.write("memory.csv", table::write_csv(&["delay", "r2"], rows)?)?;

    let test_nrmse = |readout: &ReadoutWeights, d: usize| -> anyhow::Result<f64> {
        Ok(nrmse(&predict(readout, &data.x_test)?, &data.targets[d].1)?)
    };
    out.put("task", "memory");
    out.put("memory_capacity", mc.capacity);
    out.put("r2_delay0", mc.per_delay[0]);
    out.put("nrmse_delay0", test_nrmse(&mc.readouts[0], 0)?);
    out.check(mc.per_delay.iter().all(|v| (0.0..=1.0).contains(v)), || "r² outside [0, 1]".into());

    if r.lambda_sweep {
        lambda_sweep(cfg, dir, out, |l| {
            let fit = memory_capacity_from(&data, l)?;
            let mut err = 0.0;
            let mut norm2 = 0.0;
            for (d, readout) in fit.readouts.iter().enumerate() {
                err += test_nrmse(readout, d)? / fit.readouts.len() as f64;
                norm2 += readout.weight_norm().powi(2);
            }
            Ok((err, norm2.sqrt()))
        })?;
    }
    Ok(())
}
