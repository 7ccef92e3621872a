use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::signal::Signal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignalKind {
    LinearSweep,
    LogSweep,
    Impulse,
    PureTone,
    /// Equal-amplitude tones at `SignalSpec::freqs` with seeded random phases.
    MultiTone,
    /// Consecutive semitones from `f0` up to at most `f1`, equal duration each.
    Chromatic,
}

impl FromStr for SignalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "linear_sweep" => Ok(Self::LinearSweep),
            "log_sweep" => Ok(Self::LogSweep),
            "impulse" => Ok(Self::Impulse),
            "pure_tone" | "tone" => Ok(Self::PureTone),
            "multi_tone" => Ok(Self::MultiTone),
            "chromatic" => Ok(Self::Chromatic),
            other => invalid(format!("unknown signal kind '{other}'")),
        }
    }
}

impl fmt::Display for SignalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::LinearSweep => "linear_sweep",
            Self::LogSweep => "log_sweep",
            Self::Impulse => "impulse",
            Self::PureTone => "pure_tone",
            Self::MultiTone => "multi_tone",
            Self::Chromatic => "chromatic",
        })
    }
}

/// Recipe for a synthetic test signal. Every generated signal stays within
/// [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    pub kind: SignalKind,
    pub f0: f64,
    pub f1: f64,
    pub freqs: Vec<f64>,
    pub duration: f64,
    pub sample_rate: f64,
    /// Start phase in radians (tones and sweeps).
    pub phase: f64,
    pub amplitude: f64,
    pub seed: u64,
}

impl SignalSpec {
    pub fn new(kind: SignalKind, f0: f64, f1: f64, duration: f64, sample_rate: f64) -> Self {
        Self {
            kind,
            f0,
            f1,
            freqs: Vec::new(),
            duration,
            sample_rate,
            phase: 0.0,
            amplitude: 1.0,
            seed: 0,
        }
    }

    pub fn linear_sweep(f0: f64, f1: f64, duration: f64, sample_rate: f64) -> Self {
        Self::new(SignalKind::LinearSweep, f0, f1, duration, sample_rate)
    }

    pub fn log_sweep(f0: f64, f1: f64, duration: f64, sample_rate: f64) -> Self {
        Self::new(SignalKind::LogSweep, f0, f1, duration, sample_rate)
    }

    pub fn impulse(duration: f64, sample_rate: f64) -> Self {
        Self::new(SignalKind::Impulse, 0.0, 0.0, duration, sample_rate)
    }

    pub fn pure_tone(freq: f64, duration: f64, sample_rate: f64) -> Self {
        Self::new(SignalKind::PureTone, freq, freq, duration, sample_rate)
    }

    pub fn multi_tone(freqs: Vec<f64>, duration: f64, sample_rate: f64, seed: u64) -> Self {
        Self {
            freqs,
            seed,
            ..Self::new(SignalKind::MultiTone, 0.0, 0.0, duration, sample_rate)
        }
    }

    pub fn chromatic(f0: f64, f1: f64, duration: f64, sample_rate: f64) -> Self {
        Self::new(SignalKind::Chromatic, f0, f1, duration, sample_rate)
    }

    pub fn n_samples(&self) -> usize {
        (self.duration * self.sample_rate).round() as usize
    }

    fn validate(&self) -> Result<()> {
        if !(self.sample_rate > 0.0) || !self.sample_rate.is_finite() {
            return invalid(format!("sample rate must be positive, got {}", self.sample_rate));
        }
        if !(self.duration > 0.0) || self.n_samples() == 0 {
            return invalid(format!("duration {} s yields no samples", self.duration));
        }
        if !(0.0..=1.0).contains(&self.amplitude) {
            return invalid(format!("amplitude must be in [0, 1], got {}", self.amplitude));
        }
        let nyquist = self.sample_rate / 2.0;
        let freqs: &[f64] = match self.kind {
            SignalKind::Impulse => &[],
            SignalKind::MultiTone => &self.freqs,
            _ => &[self.f0, self.f1],
        };
        if self.kind == SignalKind::MultiTone && freqs.is_empty() {
            return invalid("multi_tone needs at least one frequency");
        }
        for f in freqs {
            if !(*f >= 0.0) || *f > nyquist {
                return invalid(format!("frequency {f} Hz outside [0, Nyquist = {nyquist} Hz]"));
            }
        }
        match self.kind {
            SignalKind::LogSweep if !(self.f0 > 0.0 && self.f1 > 0.0) => {
                invalid("log sweep needs positive start and end frequencies")
            }
            SignalKind::Chromatic if !(self.f0 > 0.0 && self.f1 >= self.f0) => {
                invalid("chromatic scale needs 0 < f0 <= f1")
            }
            _ => Ok(()),
        }
    }
}

/// Instantaneous phase of a linear sweep at time `t` over total length `total`.
fn linear_phase(f0: f64, f1: f64, t: f64, total: f64) -> f64 {
    2.0 * PI * (f0 * t + (f1 - f0) * t * t / (2.0 * total))
}

fn log_phase(f0: f64, f1: f64, t: f64, total: f64) -> f64 {
    if f0 == f1 {
        return 2.0 * PI * f0 * t;
    }
    let rate = (f1 / f0).ln();
    2.0 * PI * f0 * total / rate * ((t * rate / total).exp() - 1.0)
}

pub fn gen_signal(spec: &SignalSpec) -> Result<Signal> {
    spec.validate()?;
    let n = spec.n_samples();
    let sr = spec.sample_rate;
    let total = n as f64 / sr;
    let a = spec.amplitude;
    let time = |i: usize| i as f64 / sr;
    let samples: Vec<f64> = match spec.kind {
        SignalKind::LinearSweep => (0..n)
            .map(|i| a * (linear_phase(spec.f0, spec.f1, time(i), total) + spec.phase).sin())
            .collect(),
        SignalKind::LogSweep => (0..n)
            .map(|i| a * (log_phase(spec.f0, spec.f1, time(i), total) + spec.phase).sin())
            .collect(),
        SignalKind::Impulse => {
            let mut v = vec![0.0; n];
            v[0] = 1.0;
            v
        }
        SignalKind::PureTone => (0..n)
            .map(|i| a * (2.0 * PI * spec.f0 * time(i) + spec.phase).sin())
            .collect(),
        SignalKind::MultiTone => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let phases: Vec<f64> = spec.freqs.iter().map(|_| rng.random_range(0.0..2.0 * PI)).collect();
            let scale = a / spec.freqs.len() as f64;
            (0..n)
                .map(|i| {
                    let t = time(i);
                    scale
                        * spec
                            .freqs
                            .iter()
                            .zip(&phases)
                            .map(|(f, p)| (2.0 * PI * f * t + p).sin())
                            .sum::<f64>()
                })
                .collect()
        }
        SignalKind::Chromatic => {
            let notes = 1 + (12.0 * (spec.f1 / spec.f0).log2() + 1e-9).floor() as usize;
            let per_note = n.div_ceil(notes);
            let mut phase = spec.phase;
            (0..n)
                .map(|i| {
                    let f = spec.f0 * 2f64.powf((i / per_note) as f64 / 12.0);
                    let v = a * phase.sin();
                    phase = (phase + 2.0 * PI * f / sr) % (2.0 * PI);
                    v
                })
                .collect()
        }
    };
    Signal::new(samples, sr)
}
