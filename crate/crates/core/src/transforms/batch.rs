use rayon::prelude::*;

use super::cqt::Cqt;
use super::mel::MelSpectrogram;
use super::spectrogram::Spectrogram;
use super::stft::Stft;
use crate::error::{invalid, Result};
use crate::signal::Signal;

/// Environment variable capping the worker count of [`batch_transform`].
pub const THREADS_ENV: &str = "SPECTRO_THREADS";

/// Any prepared transform that can be applied across a batch.
#[derive(Debug, Clone)]
pub enum Transform {
    Stft(Stft),
    Mel(MelSpectrogram),
    Cqt(Cqt),
}

impl Transform {
    pub fn sample_rate(&self) -> f64 {
        match self {
            Self::Stft(t) => t.params().sample_rate,
            Self::Mel(t) => t.params().sample_rate,
            Self::Cqt(t) => t.config().sample_rate,
        }
    }

    pub fn apply(&self, x: &Signal) -> Result<Spectrogram> {
        match self {
            Self::Stft(t) => t.transform(x),
            Self::Mel(t) => t.transform(x),
            Self::Cqt(t) => t.transform(x),
        }
    }
}

impl From<Stft> for Transform {
    fn from(t: Stft) -> Self {
        Self::Stft(t)
    }
}

impl From<MelSpectrogram> for Transform {
    fn from(t: MelSpectrogram) -> Self {
        Self::Mel(t)
    }
}

impl From<Cqt> for Transform {
    fn from(t: Cqt) -> Self {
        Self::Cqt(t)
    }
}

/// Worker count from `SPECTRO_THREADS`, falling back to the available cores.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Apply `transform` to every signal, in parallel, returning results in input
/// order. Each output is identical to a sequential `apply` call.
pub fn batch_transform(transform: &Transform, signals: &[Signal]) -> Result<Vec<Spectrogram>> {
    let Some(first) = signals.first() else {
        return Ok(Vec::new());
    };
    if let Some((i, s)) = signals
        .iter()
        .enumerate()
        .find(|(_, s)| s.sample_rate() != first.sample_rate())
    {
        return invalid(format!(
            "mixed sample rates in batch: signal 0 is {} Hz, signal {i} is {} Hz",
            first.sample_rate(),
            s.sample_rate()
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count().min(signals.len()))
        .build()
        .map_err(|e| crate::Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| signals.par_iter().map(|s| transform.apply(s)).collect())
}
