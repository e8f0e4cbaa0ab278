use std::collections::BTreeMap;
use std::f64::consts::PI;

use brickcomp_core::network::*;
use brickcomp_core::Error;
use proptest::prelude::*;

fn series_rc() -> CircuitTopology {
    // 1 = source, 2 = capacitor node.
    CircuitTopology::new(3)
        .with_element(1, 2, ElementKind::Resistor(1e-3))
        .with_element(2, 0, ElementKind::Capacitor(1e-6))
        .with_pins(vec![1], vec![2])
}

fn one_source(pin: NodeId, s: Stimulus) -> BTreeMap<NodeId, Stimulus> {
    BTreeMap::from([(pin, s)])
}

#[test]
fn rc_step_matches_exponential_charge() {
    let topo = series_rc();
    let tau = 1e-3;
    for scheme in [Scheme::Trapezoidal, Scheme::BackwardEuler] {
        let dt = if scheme == Scheme::Trapezoidal { tau / 100.0 } else { tau / 10_000.0 };
        let cfg = SimConfig { scheme, ..SimConfig::new(dt, 5.0 * tau) };
        let trace = simulate(&topo, &one_source(1, Stimulus::Constant(1.0)), &cfg).unwrap();
        let v = trace.channel(0);
        for (t, vc) in trace.times.iter().zip(&v) {
            let exact = 1.0 - (-t / tau).exp();
            assert!(((vc - exact) / exact).abs() < 1e-3, "{scheme:?} t={t} v={vc} exact={exact}");
        }
        let at_tau = v[trace.times.iter().position(|t| (t - tau).abs() < dt / 2.0).unwrap()];
        assert!((at_tau - 0.6321).abs() < 1e-3);
    }
}

#[test]
fn passive_network_at_rest_stays_at_rest() {
    let topo = generate_network(&NetworkGenParams { seed: 11, ..Default::default() }).unwrap();
    let stim: BTreeMap<_, _> = topo.input_pins.iter().map(|&p| (p, Stimulus::Constant(0.0))).collect();
    let cfg = SimConfig { recording: Recording::AllNodes, ..SimConfig::new(1e-5, 2e-3) };
    let trace = simulate(&topo, &stim, &cfg).unwrap();
    assert!(trace.samples.as_slice().iter().all(|&v| v == 0.0));
    assert!(trace.memristor_states.as_slice().iter().all(|&w| w == 0.5));
}

fn single_memristor(m: MemristorParams) -> CircuitTopology {
    CircuitTopology::new(2)
        .with_element(1, 0, ElementKind::Memristor(m))
        .with_pins(vec![1], vec![1])
}

#[test]
fn memristor_loop_is_pinched_at_origin() {
    // Slow drift so the state neither saturates nor sticks within a cycle.
    let m = MemristorParams { length_scale: 1e-8, ..Default::default() };
    let topo = single_memristor(m);
    let amp = 1.0;
    let wave = Waveform::new(WaveKind::Sine, 1.0, amp);
    let cfg = SimConfig::new(1e-4, 2.0);
    let trace = simulate(&topo, &one_source(1, wave.into()), &cfg).unwrap();
    let v = trace.memristor_voltages.column(0);
    let i = trace.memristor_currents.column(0);
    let mut near_zero = 0;
    for (v, i) in v.iter().zip(&i) {
        assert!(i.abs() <= v.abs() / m.r_on + 1e-15);
        if v.abs() < 1e-6 * amp {
            near_zero += 1;
            assert!(i.abs() < 1e-6 * amp / m.r_on);
        }
    }
    assert!(near_zero >= 3, "no zero crossings sampled");
    // The loop is a genuine hysteresis: the state moves.
    let w = trace.memristor_states.column(0);
    let (lo, hi) = w.iter().fold((1.0f64, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
    assert!(hi - lo > 0.05, "memristor state barely moved: {lo}..{hi}");
    // Same voltage on the rising and falling flank gives different currents.
    let k_up = trace.times.iter().position(|t| (t - 0.0833).abs() < 5e-5).unwrap();
    let k_down = trace.times.iter().position(|t| (t - 0.4167).abs() < 5e-5).unwrap();
    assert!((v[k_up] - v[k_down]).abs() < 1e-3);
    assert!((i[k_up] - i[k_down]).abs() > 1e-6);
}

#[test]
fn resistive_divider_scales_square_wave() {
    // 1 —1k— 2 —3k— ground: v2 = 0.75·v1.
    let topo = CircuitTopology::new(3)
        .with_element(1, 2, ElementKind::Resistor(1e-3))
        .with_element(2, 0, ElementKind::Resistor(1.0 / 3000.0))
        .with_pins(vec![1], vec![2]);
    let wave = Waveform::new(WaveKind::Square, 100.0, 2.0);
    let trace = simulate(&topo, &one_source(1, wave.into()), &SimConfig::new(1e-4, 0.05)).unwrap();
    for (t, v) in trace.times.iter().zip(trace.channel(0)) {
        let expect = 0.75 * waveform_sample(&wave, *t);
        assert!((v - expect).abs() < 1e-12, "t={t}");
    }
}

#[test]
fn dual_drive_trace_is_bounded() {
    for seed in 0..5 {
        let topo = generate_network(&NetworkGenParams { seed, ..Default::default() }).unwrap();
        let stim = BTreeMap::from([
            (topo.input_pins[0], Stimulus::from(Waveform::new(WaveKind::Square, 100.0, 1.0))),
            (topo.input_pins[1], Stimulus::from(Waveform::new(WaveKind::Sine, 101.0, 1.0))),
        ]);
        let cfg = SimConfig { recording: Recording::AllNodes, ..SimConfig::new(2e-5, 1.0) };
        let trace = simulate(&topo, &stim, &cfg).unwrap();
        let peak = trace.samples.max_abs();
        assert!(peak.is_finite());
        // A capacitor coupled to a square edge can swing a node by the full
        // peak-to-peak step, so the bound is the sum of peak-to-peak ranges.
        assert!(peak <= 2.0 * (1.0 + 1.0) + 1e-9, "seed {seed}: peak {peak}");
        eprintln!("seed {seed}: peak {peak}");
    }
}

#[test]
fn duration_equal_to_dt_records_one_step() {
    let trace = simulate(&series_rc(), &one_source(1, Stimulus::Constant(1.0)), &SimConfig::new(1e-4, 1e-4)).unwrap();
    assert_eq!(trace.len(), 1);
    assert_eq!(trace.times, vec![1e-4]);
}

#[test]
fn record_stride_subsamples() {
    let cfg = SimConfig { record_stride: 4, ..SimConfig::new(1e-5, 1e-3) };
    let trace = simulate(&series_rc(), &one_source(1, Stimulus::Constant(1.0)), &cfg).unwrap();
    assert_eq!(trace.len(), 25);
    assert!((trace.times[0] - 4e-5).abs() < 1e-15);
}

#[test]
fn floating_node_is_reported_as_singular() {
    let topo = CircuitTopology::new(4)
        .with_element(1, 2, ElementKind::Resistor(1.0))
        .with_element(2, 0, ElementKind::Resistor(1.0))
        .with_element(3, 2, ElementKind::Capacitor(1e-6))
        .with_pins(vec![1], vec![3]);
    // Node 3 only couples through a capacitor: fine for transients.
    assert!(simulate(&topo, &one_source(1, Stimulus::Constant(1.0)), &SimConfig::new(1e-5, 1e-4)).is_ok());
    let isolated = CircuitTopology::new(4)
        .with_element(1, 2, ElementKind::Resistor(1.0))
        .with_element(2, 0, ElementKind::Resistor(1.0))
        .with_pins(vec![1], vec![3]);
    let err = simulate(&isolated, &one_source(1, Stimulus::Constant(1.0)), &SimConfig::new(1e-5, 1e-4)).unwrap_err();
    assert!(matches!(err, Error::SingularCircuit { time } if (time - 1e-5).abs() < 1e-18));
}

#[test]
fn stimulus_must_target_an_input_pin() {
    let err = simulate(&series_rc(), &one_source(2, Stimulus::Constant(1.0)), &SimConfig::new(1e-5, 1e-4));
    assert!(matches!(err, Err(Error::InvalidParams(_))));
}

#[test]
fn runaway_source_reports_instability() {
    let topo = series_rc();
    let state = CircuitState::at_rest(&topo);
    let err = step_transient(&topo, &state, &BTreeMap::from([(1, f64::INFINITY)]), 1e-5, Scheme::Trapezoidal);
    assert!(matches!(err, Err(Error::NumericalInstability { .. })));
}

#[test]
fn simulation_is_bit_identical_across_runs() {
    let topo = generate_network(&NetworkGenParams { seed: 5, ..Default::default() }).unwrap();
    let stim = BTreeMap::from([
        (topo.input_pins[0], Stimulus::from(Waveform::new(WaveKind::Square, 100.0, 1.0))),
        (topo.input_pins[1], Stimulus::from(Waveform::new(WaveKind::Sawtooth, 101.0, 1.0))),
    ]);
    let cfg = SimConfig::new(2e-5, 0.05);
    assert_eq!(simulate(&topo, &stim, &cfg).unwrap(), simulate(&topo, &stim, &cfg).unwrap());
}

#[test]
fn rc_network_is_linear_in_its_sources() {
    let params = NetworkGenParams { p_memristive: 0.0, seed: 21, ..Default::default() };
    let topo = generate_network(&params).unwrap();
    let (p, q) = (topo.input_pins[0], topo.input_pins[1]);
    let a = Stimulus::from(Waveform::new(WaveKind::Square, 100.0, 1.0));
    let b = Stimulus::from(Waveform::new(WaveKind::Sine, 101.0, 0.7));
    let zero = Stimulus::Constant(0.0);
    let cfg = SimConfig { recording: Recording::AllNodes, ..SimConfig::new(2e-5, 0.05) };
    let ra = simulate(&topo, &BTreeMap::from([(p, a.clone()), (q, zero.clone())]), &cfg).unwrap();
    let rb = simulate(&topo, &BTreeMap::from([(p, zero), (q, b.clone())]), &cfg).unwrap();
    let rab = simulate(&topo, &BTreeMap::from([(p, a), (q, b)]), &cfg).unwrap();
    let scale = rab.samples.max_abs();
    for ((x, y), z) in ra.samples.as_slice().iter().zip(rb.samples.as_slice()).zip(rab.samples.as_slice()) {
        assert!((x + y - z).abs() <= 1e-6 * scale);
    }
}

#[test]
fn sine_embedding_at_quarter_period_is_a_circle() {
    let n = 4025;
    let series: Vec<f64> = (0..n).map(|k| (2.0 * PI * k as f64 / 100.0).sin()).collect();
    let pts = delay_embed_series(&series, 25).unwrap();
    // Eccentricity from the covariance eigenvalues of the point cloud.
    let m = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p[0] / m, b + p[1] / m));
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in &pts {
        sxx += (p[0] - mx).powi(2) / m;
        syy += (p[1] - my).powi(2) / m;
        sxy += (p[0] - mx) * (p[1] - my) / m;
    }
    let tr = sxx + syy;
    let disc = ((sxx - syy).powi(2) + 4.0 * sxy * sxy).sqrt();
    let (l1, l2) = ((tr + disc) / 2.0, (tr - disc) / 2.0);
    let ecc = (1.0 - l2 / l1).sqrt();
    assert!(ecc < 0.05, "eccentricity {ecc}");
    for p in &pts {
        assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-9);
    }
}

#[test]
fn dual_frequency_portrait_covers_more_than_single() {
    let topo = generate_network(&NetworkGenParams { seed: 2, ..Default::default() }).unwrap();
    let primary = Stimulus::from(Waveform::new(WaveKind::Square, 100.0, 1.0));
    let secondary = Stimulus::from(Waveform::new(WaveKind::Sine, 101.0, 1.0));
    let cfg = SimConfig { record_stride: 5, ..SimConfig::new(2e-5, 1.0) };
    let (p, q) = (topo.input_pins[0], topo.input_pins[1]);
    let dual = simulate(&topo, &BTreeMap::from([(p, primary.clone()), (q, secondary.clone())]), &cfg).unwrap();
    let single_p = simulate(&topo, &BTreeMap::from([(p, primary), (q, Stimulus::Constant(0.0))]), &cfg).unwrap();
    let single_q = simulate(&topo, &BTreeMap::from([(p, Stimulus::Constant(0.0)), (q, secondary)]), &cfg).unwrap();
    let lag = 25; // quarter period of 100 Hz at 1e-4 s per sample
    let cov = |t: &TraceRecord| portrait_coverage(&delay_embed(t, 0, lag).unwrap(), 64);
    let (d, a, b) = (cov(&dual), cov(&single_p), cov(&single_q));
    eprintln!("coverage dual={d} square={a} sine={b}");
    assert!(d > a && d > b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn memristor_states_stay_in_unit_interval(seed in 0u64..1000, amp in 0.1f64..20.0) {
        let params = NetworkGenParams { p_memristive: 0.4, seed, ..Default::default() };
        let topo = generate_network(&params).unwrap();
        let stim = BTreeMap::from([
            (topo.input_pins[0], Stimulus::from(Waveform::new(WaveKind::Square, 100.0, amp))),
        ]);
        let trace = simulate(&topo, &stim, &SimConfig::new(5e-5, 0.05)).unwrap();
        prop_assert!(trace.memristor_states.as_slice().iter().all(|w| (0.0..=1.0).contains(w)));
    }

    #[test]
    fn square_wave_only_takes_two_values(t in 0.0f64..10.0, f in 0.1f64..1e3, a in 0.0f64..5.0) {
        let v = waveform_sample(&Waveform::new(WaveKind::Square, f, a), t);
        prop_assert!(v == a || v == -a);
        let s = waveform_sample(&Waveform::new(WaveKind::Sawtooth, f, a), t);
        prop_assert!(s >= -a && s <= a);
    }
}
