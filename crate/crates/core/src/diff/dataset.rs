use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SineExample {
    pub waveform: Vec<f64>,
    pub freq_hz: f64,
    /// `(f - f_lo) / (f_hi - f_lo)`.
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SineDatasetConfig {
    pub f_lo: u32,
    pub f_hi: u32,
    /// Spacing between consecutive integer frequencies.
    pub step: u32,
    pub phases: usize,
    pub sample_rate: f64,
    pub length: usize,
    pub seed: u64,
    pub train_fraction: f64,
}

impl Default for SineDatasetConfig {
    /// Desk-scale set: 2,000 frequencies x 2 phases = 4,000 examples.
    fn default() -> Self {
        Self {
            f_lo: 200,
            f_hi: 2199,
            step: 1,
            phases: 2,
            sample_rate: 44100.0,
            length: 512,
            seed: 42,
            train_fraction: 0.8,
        }
    }
}

impl SineDatasetConfig {
    /// Full-band set over 200..=22050 Hz at every second integer, 10 phases.
    pub fn full_band() -> Self {
        Self {
            f_hi: 22050,
            step: 2,
            phases: 10,
            ..Self::default()
        }
    }

    pub fn n_examples(&self) -> usize {
        if self.step == 0 || self.f_hi < self.f_lo {
            return 0;
        }
        ((self.f_hi - self.f_lo) / self.step + 1) as usize * self.phases
    }
}

/// Pure sines at integer frequencies and evenly spaced phases, split into
/// train and test partitions by a seeded shuffle.
#[derive(Debug, Clone, PartialEq)]
pub struct SineDataset {
    examples: Vec<SineExample>,
    train: Vec<usize>,
    test: Vec<usize>,
    config: SineDatasetConfig,
}

impl SineDataset {
    pub fn examples(&self) -> &[SineExample] {
        &self.examples
    }

    pub fn train_indices(&self) -> &[usize] {
        &self.train
    }

    pub fn test_indices(&self) -> &[usize] {
        &self.test
    }

    pub fn config(&self) -> &SineDatasetConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }
}

pub fn gen_sine_dataset(f_lo: u32, f_hi: u32, phases: usize, sample_rate: f64, length: usize, seed: u64) -> Result<SineDataset> {
    gen_sine_dataset_with(&SineDatasetConfig {
        f_lo,
        f_hi,
        phases,
        sample_rate,
        length,
        seed,
        ..SineDatasetConfig::default()
    })
}

pub fn gen_sine_dataset_with(cfg: &SineDatasetConfig) -> Result<SineDataset> {
    if !(cfg.sample_rate > 0.0) {
        return invalid("sample rate must be positive");
    }
    if f64::from(cfg.f_hi) > cfg.sample_rate / 2.0 {
        return invalid(format!("f_hi {} Hz exceeds Nyquist ({} Hz)", cfg.f_hi, cfg.sample_rate / 2.0));
    }
    if cfg.f_hi <= cfg.f_lo || cfg.step == 0 || cfg.phases == 0 || cfg.length == 0 {
        return invalid("need f_lo < f_hi and positive step, phases and length");
    }
    if !(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0) {
        return invalid("train fraction must lie in (0, 1)");
    }
    let span = f64::from(cfg.f_hi - cfg.f_lo);
    let mut examples = Vec::with_capacity(cfg.n_examples());
    for f in (cfg.f_lo..=cfg.f_hi).step_by(cfg.step as usize) {
        let freq = f64::from(f);
        let w = 2.0 * PI * freq / cfg.sample_rate;
        for p in 0..cfg.phases {
            let phase = 2.0 * PI * p as f64 / cfg.phases as f64;
            examples.push(SineExample {
                waveform: (0..cfg.length).map(|n| (w * n as f64 + phase).sin()).collect(),
                freq_hz: freq,
                target: (freq - f64::from(cfg.f_lo)) / span,
            });
        }
    }
    let mut order: Vec<usize> = (0..examples.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));
    let n_train = (examples.len() as f64 * cfg.train_fraction).round() as usize;
    let test = order.split_off(n_train);
    Ok(SineDataset {
        examples,
        train: order,
        test,
        config: cfg.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_scale_counts() {
        let ds = gen_sine_dataset(200, 2199, 2, 44100.0, 64, 1).unwrap();
        assert_eq!(ds.len(), 4000);
        assert_eq!(ds.train_indices().len(), 3200);
        assert_eq!(ds.test_indices().len(), 800);
        let mut all: Vec<usize> = ds.train_indices().iter().chain(ds.test_indices()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..4000).collect::<Vec<_>>());
    }

    #[test]
    fn full_band_count() {
        assert_eq!(SineDatasetConfig::full_band().n_examples(), 109_260);
    }

    #[test]
    fn seeded_and_normalized() {
        let a = gen_sine_dataset(200, 300, 3, 8000.0, 32, 9).unwrap();
        assert_eq!(a, gen_sine_dataset(200, 300, 3, 8000.0, 32, 9).unwrap());
        assert_ne!(a.train_indices(), gen_sine_dataset(200, 300, 3, 8000.0, 32, 10).unwrap().train_indices());
        assert!(a.examples().iter().all(|e| (0.0..=1.0).contains(&e.target)));
        assert_eq!(a.examples()[0].target, 0.0);
        assert_eq!(a.examples().last().unwrap().target, 1.0);
    }

    #[test]
    fn rejects_above_nyquist() {
        assert!(gen_sine_dataset(200, 4001, 1, 8000.0, 32, 0).is_err());
    }
}
