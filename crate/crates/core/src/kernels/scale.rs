use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// How the normalized frequencies of the DFT rows are laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaleKind {
    /// Integer bins, `sigma(k) = k`.
    #[default]
    No,
    Linear,
    Log,
}

impl FromStr for ScaleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "no" | "none" => Ok(Self::No),
            "linear" => Ok(Self::Linear),
            "log" => Ok(Self::Log),
            other => invalid(format!("unknown frequency scale '{other}'")),
        }
    }
}

impl fmt::Display for ScaleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::No => "no",
            Self::Linear => "linear",
            Self::Log => "log",
        })
    }
}

/// Converts a normalized frequency (cycles per window) to Hz: `f = k s / N`.
pub fn k_to_hz(k: f64, sample_rate: f64, n: usize) -> f64 {
    k * sample_rate / n as f64
}

pub fn hz_to_k(f: f64, sample_rate: f64, n: usize) -> f64 {
    f * n as f64 / sample_rate
}

/// Normalized frequencies `sigma(k)` of the `mu` rows of a DFT kernel bank.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyScale {
    kind: ScaleKind,
    f_start: f64,
    f_end: f64,
    bins: usize,
    window_len: usize,
    sample_rate: f64,
    sigma: Vec<f64>,
}

impl FrequencyScale {
    pub fn new(
        kind: ScaleKind,
        window_len: usize,
        sample_rate: f64,
        f_start: f64,
        f_end: f64,
        bins: usize,
    ) -> Result<Self> {
        if window_len == 0 {
            return invalid("window length must be positive");
        }
        if !(sample_rate > 0.0) {
            return invalid("sample rate must be positive");
        }
        if bins == 0 || bins > window_len / 2 + 1 {
            return invalid(format!(
                "bin count must be in 1..={}, got {bins}",
                window_len / 2 + 1
            ));
        }
        if kind != ScaleKind::No {
            if !(f_start > 0.0) {
                return invalid(format!("start frequency must be positive, got {f_start}"));
            }
            if f_end <= f_start {
                return invalid(format!("end frequency {f_end} must exceed start {f_start}"));
            }
            if f_end > sample_rate / 2.0 {
                return invalid(format!(
                    "end frequency {f_end} exceeds Nyquist {}",
                    sample_rate / 2.0
                ));
            }
        }
        let mut scale = Self {
            kind,
            f_start,
            f_end,
            bins,
            window_len,
            sample_rate,
            sigma: Vec::new(),
        };
        scale.sigma = (0..bins).map(|k| scale.sigma_at(k as f64)).collect();
        Ok(scale)
    }

    /// Evaluates the scale formula at any (possibly fractional or
    /// out-of-range) index.
    pub fn sigma_at(&self, k: f64) -> f64 {
        let n = self.window_len as f64;
        let s = self.sample_rate;
        let mu = self.bins as f64;
        match self.kind {
            ScaleKind::No => k,
            ScaleKind::Linear => (self.f_end - self.f_start) * n / (mu * s) * k + self.f_start * n / s,
            ScaleKind::Log => self.f_start * n / s * (self.f_end / self.f_start).powf(k / mu),
        }
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn kind(&self) -> ScaleKind {
        self.kind
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn f_start(&self) -> f64 {
        self.f_start
    }

    pub fn f_end(&self) -> f64 {
        self.f_end
    }

    /// Row center frequencies in Hz.
    pub fn bin_freqs_hz(&self) -> Vec<f64> {
        self.sigma
            .iter()
            .map(|&k| k_to_hz(k, self.sample_rate, self.window_len))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear_scale_anchor_values() {
        let s = FrequencyScale::new(ScaleKind::Linear, 2048, 44100.0, 50.0, 6000.0, 1025).unwrap();
        assert_abs_diff_eq!(s.sigma()[0], 2.3220, epsilon = 5e-5);
        assert_abs_diff_eq!(s.sigma()[1], 2.5916, epsilon = 5e-5);
        assert_abs_diff_eq!(s.sigma()[2], 2.86, epsilon = 5e-3);
        assert_abs_diff_eq!(s.sigma()[1023], 278.10, epsilon = 5e-3);
        // The published 278.36 is this value truncated to two decimals.
        assert_abs_diff_eq!(s.sigma()[1024], 278.3699, epsilon = 5e-5);
        let hz = s.bin_freqs_hz();
        assert_abs_diff_eq!(hz[1] - hz[0], 5950.0 / 1025.0, epsilon = 1e-9);
        assert_abs_diff_eq!(hz[0], 50.0, epsilon = 1e-9);
    }

    #[test]
    fn identity_scale() {
        let s = FrequencyScale::new(ScaleKind::No, 8, 8000.0, 0.0, 0.0, 5).unwrap();
        assert_eq!(s.sigma(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn linear_and_log_share_endpoints() {
        let lin = FrequencyScale::new(ScaleKind::Linear, 2048, 44100.0, 50.0, 6000.0, 1025).unwrap();
        let log = FrequencyScale::new(ScaleKind::Log, 2048, 44100.0, 50.0, 6000.0, 1025).unwrap();
        let start = 50.0 * 2048.0 / 44100.0;
        let end = 6000.0 * 2048.0 / 44100.0;
        for s in [&lin, &log] {
            assert_abs_diff_eq!(s.sigma_at(0.0), start, epsilon = 1e-12);
            assert_abs_diff_eq!(s.sigma_at(1025.0), end, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(log.sigma()[0], 2.3220, epsilon = 5e-5);
    }

    #[test]
    fn scale_errors() {
        let mk = |kind, fs, fe, mu| FrequencyScale::new(kind, 2048, 44100.0, fs, fe, mu);
        assert!(mk(ScaleKind::Linear, 6000.0, 50.0, 100).is_err());
        assert!(mk(ScaleKind::Log, 50.0, 30000.0, 100).is_err());
        assert!(mk(ScaleKind::Linear, 50.0, 6000.0, 1026).is_err());
        assert!(mk(ScaleKind::No, 0.0, 0.0, 0).is_err());
    }

    #[test]
    fn bin_frequency_conversion() {
        assert_abs_diff_eq!(k_to_hz(1.0, 44100.0, 2048), 21.533, epsilon = 1e-3);
        assert_eq!(k_to_hz(0.0, 44100.0, 2048), 0.0);
        assert_eq!(k_to_hz(1024.0, 44100.0, 2048), 22050.0);
        assert_abs_diff_eq!(hz_to_k(k_to_hz(3.7, 16000.0, 512), 16000.0, 512), 3.7, epsilon = 1e-12);
    }
}
