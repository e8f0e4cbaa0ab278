use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WaveKind {
    Square,
    Sine,
    Sawtooth,
}

impl WaveKind {
    pub const ALL: [WaveKind; 3] = [WaveKind::Square, WaveKind::Sine, WaveKind::Sawtooth];

    pub fn name(self) -> &'static str {
        match self {
            WaveKind::Square => "square",
            WaveKind::Sine => "sine",
            WaveKind::Sawtooth => "sawtooth",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waveform {
    pub kind: WaveKind,
    /// Hz, > 0.
    pub frequency: f64,
    /// Volts, ≥ 0.
    pub amplitude: f64,
    /// Radians.
    pub phase: f64,
    pub dc_offset: f64,
}

impl Waveform {
    pub fn new(kind: WaveKind, frequency: f64, amplitude: f64) -> Self {
        Self { kind, frequency, amplitude, phase: 0.0, dc_offset: 0.0 }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn is_valid(&self) -> bool {
        self.frequency > 0.0
            && self.frequency.is_finite()
            && self.amplitude >= 0.0
            && self.amplitude.is_finite()
            && self.phase.is_finite()
            && self.dc_offset.is_finite()
    }
}

/// Value of `w` at time `t`.
///
/// The square wave is `A·sign(sin(2πft+φ))` with the zero crossings mapped
/// to `+A`; the sawtooth ramps from `−A` to `+A` once per period.
pub fn waveform_sample(w: &Waveform, t: f64) -> f64 {
    let mut cycles = w.frequency * t + w.phase / (2.0 * PI);
    // Instants within rounding distance of a switching point sit on it.
    let half = libm::round(2.0 * cycles) / 2.0;
    if math::abs(cycles - half) <= 1e-9 * (1.0 + math::abs(cycles)) {
        cycles = half;
    }
    let frac = cycles - math::floor(cycles);
    let v = match w.kind {
        WaveKind::Sine => w.amplitude * math::sin(2.0 * PI * w.frequency * t + w.phase),
        WaveKind::Square => {
            if frac > 0.5 {
                -w.amplitude
            } else {
                w.amplitude
            }
        }
        WaveKind::Sawtooth => w.amplitude * (2.0 * frac - 1.0),
    };
    v + w.dc_offset
}

/// A source voltage as a function of time.
#[derive(Debug, Clone, PartialEq)]
pub enum Stimulus {
    Constant(f64),
    Wave(Waveform),
    /// `levels[k]` held on `(k·hold, (k+1)·hold]`, so a sample taken at
    /// `(k+1)·hold` has seen level `k` for the whole hold. Zero outside.
    Steps { hold: f64, levels: Vec<f64> },
    /// The inner stimulus on `[on, off)`, zero elsewhere.
    Gated { inner: Box<Stimulus>, on: f64, off: f64 },
}

impl Stimulus {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Stimulus::Constant(v) => *v,
            Stimulus::Wave(w) => waveform_sample(w, t),
            Stimulus::Steps { hold, levels } => {
                // Sample instants land on multiples of `hold` up to rounding;
                // the tolerance keeps them on the level that just ended.
                let k = libm::ceil(t / hold - 1e-9) - 1.0;
                if k < 0.0 {
                    0.0
                } else {
                    levels.get(k as usize).copied().unwrap_or(0.0)
                }
            }
            Stimulus::Gated { inner, on, off } => {
                if t >= *on && t < *off {
                    inner.value(t)
                } else {
                    0.0
                }
            }
        }
    }

    /// Upper bound on `|value(t)|`.
    pub fn peak(&self) -> f64 {
        match self {
            Stimulus::Constant(v) => math::abs(*v),
            Stimulus::Wave(w) => w.amplitude + math::abs(w.dc_offset),
            Stimulus::Steps { levels, .. } => {
                levels.iter().fold(0.0, |m, v| if math::abs(*v) > m { math::abs(*v) } else { m })
            }
            Stimulus::Gated { inner, .. } => inner.peak(),
        }
    }

    pub fn is_valid(&self) -> bool {
        match self {
            Stimulus::Constant(v) => v.is_finite(),
            Stimulus::Wave(w) => w.is_valid(),
            Stimulus::Steps { hold, levels } => {
                *hold > 0.0 && hold.is_finite() && levels.iter().all(|v| v.is_finite())
            }
            Stimulus::Gated { inner, on, off } => on <= off && inner.is_valid(),
        }
    }

    pub fn gated(self, on: f64, off: f64) -> Self {
        Stimulus::Gated { inner: Box::new(self), on, off }
    }
}

impl From<Waveform> for Stimulus {
    fn from(w: Waveform) -> Self {
        Stimulus::Wave(w)
    }
}
