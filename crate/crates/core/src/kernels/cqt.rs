use std::f64::consts::PI;
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex64;

use super::fft::{fft_in_place, next_power_of_two};
use crate::error::{invalid, Error, Result};
use crate::signal::{window_shape, WindowKind};

/// Quality factor: cycles of oscillation per constant-Q basis vector,
/// `Q = 1 / (2^{1/b} - 1)`.
pub fn cqt_q(bins_per_octave: usize) -> f64 {
    1.0 / (2f64.powf(1.0 / bins_per_octave as f64) - 1.0)
}

/// Per-kernel amplitude normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CqtNorm {
    None,
    /// Divide by the L1 norm, so a unit sinusoid at the bin frequency gives 1/2.
    #[default]
    L1,
    L2,
}

impl FromStr for CqtNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "0" => Ok(Self::None),
            "1" | "l1" => Ok(Self::L1),
            "2" | "l2" => Ok(Self::L2),
            other => invalid(format!("unknown CQT norm '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelDomain {
    Time,
    /// Time kernels plus their FFTs.
    Frequency,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CqtConfig {
    pub sample_rate: f64,
    pub fmin: f64,
    pub n_bins: usize,
    pub bins_per_octave: usize,
    pub hop_length: usize,
    pub window: WindowKind,
    pub norm: CqtNorm,
    /// When set, overrides `n_bins` with `floor(b log2(fmax/fmin)) + 1`.
    pub fmax: Option<f64>,
}

impl Default for CqtConfig {
    fn default() -> Self {
        Self {
            sample_rate: 22050.0,
            fmin: 32.70,
            n_bins: 84,
            bins_per_octave: 12,
            hop_length: 512,
            window: WindowKind::Hann,
            norm: CqtNorm::L1,
            fmax: None,
        }
    }
}

impl CqtConfig {
    pub fn new(sample_rate: f64, fmin: f64, n_bins: usize, bins_per_octave: usize, hop_length: usize) -> Self {
        Self {
            sample_rate,
            fmin,
            n_bins,
            bins_per_octave,
            hop_length,
            ..Self::default()
        }
    }

    pub fn resolved_n_bins(&self) -> usize {
        match self.fmax {
            Some(fmax) if fmax > self.fmin => {
                (self.bins_per_octave as f64 * (fmax / self.fmin).log2()).floor() as usize + 1
            }
            _ => self.n_bins,
        }
    }

    pub fn q(&self) -> f64 {
        cqt_q(self.bins_per_octave)
    }

    pub fn bin_freq(&self, k: usize) -> f64 {
        self.fmin * 2f64.powf(k as f64 / self.bins_per_octave as f64)
    }

    pub fn bin_freqs_hz(&self) -> Vec<f64> {
        (0..self.resolved_n_bins()).map(|k| self.bin_freq(k)).collect()
    }

    pub fn n_octaves(&self) -> usize {
        self.resolved_n_bins().div_ceil(self.bins_per_octave)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sample_rate > 0.0) {
            return invalid("sample rate must be positive");
        }
        if !(self.fmin > 0.0) {
            return invalid(format!("fmin must be positive, got {}", self.fmin));
        }
        if let Some(fmax) = self.fmax {
            if fmax <= self.fmin {
                return invalid(format!("fmax {fmax} must exceed fmin {}", self.fmin));
            }
        }
        if self.bins_per_octave == 0 || self.resolved_n_bins() == 0 {
            return invalid("need at least one bin and one bin per octave");
        }
        if self.hop_length == 0 {
            return invalid("hop length must be positive");
        }
        let top = self.bin_freq(self.resolved_n_bins() - 1);
        if top >= self.sample_rate / 2.0 {
            return invalid(format!(
                "top CQT bin {top:.2} Hz is not below Nyquist {}",
                self.sample_rate / 2.0
            ));
        }
        Ok(())
    }

    /// Window length of each bin, `ceil(Q s / f_k)`.
    pub fn lengths(&self) -> Vec<usize> {
        let q = self.q();
        (0..self.resolved_n_bins())
            .map(|k| (q * self.sample_rate / self.bin_freq(k)).ceil() as usize)
            .collect()
    }

    /// Longest kernel rounded up to a power of two.
    pub fn fft_len(&self) -> usize {
        next_power_of_two(self.lengths().first().copied().unwrap_or(1))
    }
}

/// Complex constant-Q kernels, center-aligned in rows of `fft_len` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CqtKernelBank {
    q: f64,
    lengths: Vec<usize>,
    pub time_kernels: Array2<Complex64>,
    pub freq_kernels: Option<Array2<Complex64>>,
    bin_freqs_hz: Vec<f64>,
    sample_rate: f64,
}

impl CqtKernelBank {
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn bin_freqs_hz(&self) -> &[f64] {
        &self.bin_freqs_hz
    }

    pub fn fft_len(&self) -> usize {
        self.time_kernels.ncols()
    }

    pub fn n_bins(&self) -> usize {
        self.time_kernels.nrows()
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    /// Real and imaginary parts of the time kernels as separate matrices.
    pub fn split_time_kernels(&self) -> (Array2<f64>, Array2<f64>) {
        (
            self.time_kernels.mapv(|c| c.re),
            self.time_kernels.mapv(|c| c.im),
        )
    }
}

/// Builds kernel `k` as `w(t) e^{-2 pi i f_k t / s}` with `t` measured from
/// the centre of a `fft_len` row and `w` a window (periodic Hann by default)
/// stretched to exactly `Q s / f_k` samples, so at most `N_k` samples are
/// nonzero. Sampling the window in continuous time keeps kernels built at
/// different rates consistent with each other.
pub fn build_cqt_kernels(cfg: &CqtConfig, domain: KernelDomain) -> Result<CqtKernelBank> {
    cfg.validate()?;
    let lengths = cfg.lengths();
    let fft_len = cfg.fft_len();
    let n_bins = lengths.len();
    let mut time_kernels = Array2::<Complex64>::zeros((n_bins, fft_len));

    let centre = fft_len as f64 / 2.0;
    for (k, mut row) in time_kernels.rows_mut().into_iter().enumerate() {
        let freq = cfg.bin_freq(k) / cfg.sample_rate;
        let width = cfg.q() / freq;
        for (n, cell) in row.iter_mut().enumerate() {
            let tau = n as f64 - centre;
            if tau.abs() < width / 2.0 {
                let w = window_shape(cfg.window, 0.5 + tau / width);
                *cell = Complex64::from_polar(w, -2.0 * PI * freq * tau);
            }
        }
        let norm = match cfg.norm {
            CqtNorm::None => 1.0,
            CqtNorm::L1 => row.iter().map(|c| c.norm()).sum(),
            CqtNorm::L2 => row.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
        };
        if norm > 0.0 {
            row.mapv_inplace(|c| c / norm);
        }
    }

    let freq_kernels = match domain {
        KernelDomain::Time => None,
        KernelDomain::Frequency => {
            let mut fk = time_kernels.clone();
            for mut row in fk.rows_mut() {
                let slice = row.as_slice_mut().expect("standard layout row");
                fft_in_place(slice, false)?;
            }
            Some(fk)
        }
    };

    Ok(CqtKernelBank {
        q: cfg.q(),
        lengths,
        time_kernels,
        freq_kernels,
        bin_freqs_hz: cfg.bin_freqs_hz(),
        sample_rate: cfg.sample_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn q_values() {
        assert_abs_diff_eq!(cqt_q(12), 16.8172, epsilon = 1e-4);
        assert_abs_diff_eq!(cqt_q(24), 34.1271, epsilon = 1e-4);
        assert_abs_diff_eq!(cqt_q(1), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn piano_range_lengths() {
        let cfg = CqtConfig::new(44100.0, 27.5, 176, 24, 512);
        let lengths = cfg.lengths();
        assert!(lengths[0] == 54727 || lengths[0] == 54728, "{}", lengths[0]);
        assert_eq!(cfg.fft_len(), 65536);
    }

    #[test]
    fn bin_frequencies_span_a3_to_a7() {
        // 60 bins from A3 would run past Nyquist at 8 kHz; A3..A7 is 49 bins.
        assert!(CqtConfig::new(8000.0, 220.0, 60, 12, 128).validate().is_err());
        let cfg = CqtConfig::new(8000.0, 220.0, 49, 12, 128);
        let bank = build_cqt_kernels(&cfg, KernelDomain::Time).unwrap();
        assert_abs_diff_eq!(bank.bin_freqs_hz()[0], 220.0, epsilon = 1e-9);
        assert_abs_diff_eq!(bank.bin_freqs_hz()[48], 3520.0, epsilon = 1e-9);
    }

    #[test]
    fn lengths_halve_per_octave_and_keep_q_cycles() {
        let cfg = CqtConfig::new(22050.0, 55.0, 72, 12, 512);
        let lengths = cfg.lengths();
        assert!(lengths.windows(2).all(|w| w[0] > w[1]));
        for k in 0..lengths.len() - 12 {
            let ratio = lengths[k] as f64 / lengths[k + 12] as f64;
            assert!((lengths[k] as i64 - 2 * lengths[k + 12] as i64).abs() <= 1, "{ratio}");
        }
        let q = cfg.q();
        for (k, &len) in lengths.iter().enumerate() {
            let f = cfg.bin_freq(k);
            let cycles = f * len as f64 / cfg.sample_rate;
            assert!(cycles >= q && cycles < q + f / cfg.sample_rate + 1e-9);
        }
    }

    #[test]
    fn kernels_are_centered_and_normalized() {
        let cfg = CqtConfig::new(8000.0, 220.0, 24, 12, 128);
        let bank = build_cqt_kernels(&cfg, KernelDomain::Time).unwrap();
        let l = bank.fft_len();
        for (k, row) in bank.time_kernels.rows().into_iter().enumerate() {
            let nz = row.iter().filter(|c| c.norm() > 0.0).count();
            assert!(nz <= bank.lengths()[k] && nz + 2 >= bank.lengths()[k], "{k}: {nz}");
            for j in 1..l / 2 {
                assert!((row[l / 2 + j] - row[l / 2 - j].conj()).norm() < 1e-15);
            }
            let l1: f64 = row.iter().map(|c| c.norm()).sum();
            assert_abs_diff_eq!(l1, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn frequency_kernels_peak_at_bin_frequency() {
        let cfg = CqtConfig::new(8000.0, 220.0, 49, 12, 128);
        let bank = build_cqt_kernels(&cfg, KernelDomain::Frequency).unwrap();
        let fk = bank.freq_kernels.as_ref().unwrap();
        let l = bank.fft_len() as f64;
        for (k, row) in fk.rows().into_iter().enumerate() {
            // e^{-i w n} puts the energy at the negative frequency -f_k.
            let (peak, _) = row
                .iter()
                .enumerate()
                .fold((0, 0.0), |acc, (i, c)| if c.norm() > acc.1 { (i, c.norm()) } else { acc });
            let expect = l - bank.bin_freqs_hz()[k] * l / cfg.sample_rate;
            assert!((peak as f64 - expect).abs() <= 1.0, "bin {k}: {peak} vs {expect}");
        }
    }

    #[test]
    fn config_errors_and_fmax() {
        let mut cfg = CqtConfig::new(8000.0, 220.0, 61, 12, 128);
        assert!(cfg.validate().is_err()); // bin 60 = 7040 Hz > 4000
        cfg.n_bins = 48;
        assert!(cfg.validate().is_ok());
        cfg.fmax = Some(880.0);
        assert_eq!(cfg.resolved_n_bins(), 25);
        cfg.fmin = 0.0;
        assert!(cfg.validate().is_err());
        assert!(build_cqt_kernels(&cfg, KernelDomain::Time).is_err());
    }
}
