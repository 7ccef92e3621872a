use std::borrow::Cow;
use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use super::spectrogram::{SpecKind, Spectrogram};
use crate::error::{invalid, Result};
use crate::kernels::{build_dft_kernels, DftKernelBank, FrequencyScale, ScaleKind};
use crate::signal::{conv1d_strided, make_window, pad_slice, PadMode, Signal, Window, WindowKind};

#[derive(Debug, Clone, PartialEq)]
pub struct StftParams {
    pub sample_rate: f64,
    pub n_fft: usize,
    /// Number of output rows; defaults to `n_fft / 2 + 1`.
    pub freq_bins: Option<usize>,
    pub hop_length: usize,
    pub window: WindowKind,
    pub freq_scale: ScaleKind,
    pub center: bool,
    pub pad_mode: PadMode,
    /// Start of the linear/log frequency scales, Hz.
    pub fmin: f64,
    /// End of the linear/log frequency scales, Hz.
    pub fmax: f64,
    pub output: SpecKind,
}

impl Default for StftParams {
    fn default() -> Self {
        Self {
            sample_rate: 22050.0,
            n_fft: 2048,
            freq_bins: None,
            hop_length: 512,
            window: WindowKind::Hann,
            freq_scale: ScaleKind::No,
            center: true,
            pad_mode: PadMode::Reflect,
            fmin: 50.0,
            fmax: 6000.0,
            output: SpecKind::Magnitude,
        }
    }
}

impl StftParams {
    pub fn n_bins(&self) -> usize {
        self.freq_bins.unwrap_or(self.n_fft / 2 + 1)
    }

    /// Frame count for a signal of `len` samples.
    pub fn n_frames(&self, len: usize) -> usize {
        frame_total(len, self.n_fft, self.hop_length, self.center)
    }
}

pub(crate) fn frame_total(len: usize, n: usize, hop: usize, center: bool) -> usize {
    if center {
        1 + len / hop
    } else if len < n {
        0
    } else {
        1 + (len - n) / hop
    }
}

/// Centre-pads by `n/2` on each side when `center` is set; otherwise checks
/// that at least one full frame fits.
pub(crate) fn frame_input<'a>(x: &'a [f64], n: usize, center: bool, mode: PadMode) -> Result<Cow<'a, [f64]>> {
    if x.is_empty() {
        return invalid("signal is empty");
    }
    if center {
        Ok(Cow::Owned(pad_slice(x, mode, n / 2, n / 2)?))
    } else if x.len() < n {
        invalid(format!(
            "signal of {} samples is shorter than the {n}-sample window",
            x.len()
        ))
    } else {
        Ok(Cow::Borrowed(x))
    }
}

/// STFT as two strided convolutions with windowed cosine and sine kernels.
#[derive(Debug, Clone)]
pub struct Stft {
    params: StftParams,
    bank: DftKernelBank,
}

impl Stft {
    pub fn new(params: StftParams) -> Result<Self> {
        if params.n_fft == 0 || params.hop_length == 0 {
            return invalid("n_fft and hop_length must be positive");
        }
        let scale = FrequencyScale::new(
            params.freq_scale,
            params.n_fft,
            params.sample_rate,
            params.fmin,
            params.fmax,
            params.n_bins(),
        )?;
        let window = make_window(params.window, params.n_fft, true)?;
        let bank = build_dft_kernels(&scale, &window)?;
        Ok(Self { params, bank })
    }

    pub fn params(&self) -> &StftParams {
        &self.params
    }

    pub fn kernels(&self) -> &DftKernelBank {
        &self.bank
    }

    pub fn window(&self) -> &Window {
        self.bank.window()
    }

    /// Raw convolution responses `(sum x cos, sum x sin)`, each bins x frames.
    /// The DFT is `re - i im`.
    pub fn conv_parts(&self, x: &[f64]) -> Result<(Array2<f64>, Array2<f64>)> {
        let p = &self.params;
        let framed = frame_input(x, p.n_fft, p.center, p.pad_mode)?;
        let re = conv1d_strided(&framed, self.bank.re.view(), p.hop_length)?;
        let im = conv1d_strided(&framed, self.bank.im.view(), p.hop_length)?;
        Ok((re.values, im.values))
    }

    pub fn transform(&self, x: &Signal) -> Result<Spectrogram> {
        check_rate(x, self.params.sample_rate)?;
        let (re, im) = self.conv_parts(x.samples())?;
        let bins = self.bank.bin_freqs_hz().to_vec();
        let hop = self.params.hop_length;
        let sr = self.params.sample_rate;
        Ok(match self.params.output {
            SpecKind::Complex => {
                let c = Array2::from_shape_fn(re.dim(), |ix| Complex64::new(re[ix], -im[ix]));
                Spectrogram::from_complex(c, SpecKind::Complex, bins, hop, sr)
            }
            SpecKind::Magnitude => {
                let m = Array2::from_shape_fn(re.dim(), |ix| re[ix].hypot(im[ix]));
                Spectrogram::from_real_unchecked(SpecKind::Magnitude, m, bins, hop, sr)
            }
            SpecKind::Power => {
                let m = Array2::from_shape_fn(re.dim(), |ix| re[ix] * re[ix] + im[ix] * im[ix]);
                Spectrogram::from_real_unchecked(SpecKind::Power, m, bins, hop, sr)
            }
        })
    }
}

pub(crate) fn check_rate(x: &Signal, expected: f64) -> Result<()> {
    if x.sample_rate() != expected {
        return invalid(format!(
            "signal sample rate {} does not match the transform's {expected}",
            x.sample_rate()
        ));
    }
    Ok(())
}

pub fn stft(x: &Signal, params: &StftParams) -> Result<Spectrogram> {
    Stft::new(params.clone())?.transform(x)
}

/// Baseline used by the benchmark: a per-frame `O(N^2)` DFT loop over the
/// integer bins `0..=N/2`, with a precomputed twiddle table but no kernel
/// matrices. Returns the magnitude, bins x frames.
pub fn naive_stft_magnitude(x: &[f64], n_fft: usize, hop: usize, window: &Window, center: bool, pad_mode: PadMode) -> Result<Array2<f64>> {
    if window.len() != n_fft || hop == 0 {
        return invalid("window length must equal n_fft and hop must be positive");
    }
    let framed = frame_input(x, n_fft, center, pad_mode)?;
    let frames = 1 + (framed.len() - n_fft) / hop;
    let bins = n_fft / 2 + 1;
    let cos: Vec<f64> = (0..n_fft).map(|i| (2.0 * PI * i as f64 / n_fft as f64).cos()).collect();
    let sin: Vec<f64> = (0..n_fft).map(|i| (2.0 * PI * i as f64 / n_fft as f64).sin()).collect();
    let w = window.values();
    let mut out = Array2::zeros((bins, frames));
    let mut seg = vec![0.0; n_fft];
    for t in 0..frames {
        for (s, (v, wv)) in seg.iter_mut().zip(framed[t * hop..t * hop + n_fft].iter().zip(w)) {
            *s = v * wv;
        }
        for k in 0..bins {
            let (mut re, mut im) = (0.0, 0.0);
            let mut idx = 0usize;
            for s in &seg {
                re += s * cos[idx];
                im += s * sin[idx];
                idx += k;
                if idx >= n_fft {
                    idx -= n_fft;
                }
            }
            out[[k, t]] = re.hypot(im);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tone(freq: f64, sr: f64, len: usize) -> Signal {
        Signal::new(
            (0..len).map(|n| (2.0 * PI * freq * n as f64 / sr).cos()).collect(),
            sr,
        )
        .unwrap()
    }

    #[test]
    fn bin_centred_cosine_is_orthogonal() {
        let sr = 6400.0;
        let n = 64;
        // bin 8 of a 64-point window at 6400 Hz is 800 Hz
        let x = tone(800.0, sr, 640);
        let p = StftParams {
            sample_rate: sr,
            n_fft: n,
            hop_length: n,
            window: WindowKind::Rectangular,
            center: false,
            ..StftParams::default()
        };
        let s = stft(&x, &p).unwrap();
        assert_eq!(s.n_bins(), 33);
        assert_eq!(s.n_frames(), 10);
        let m = s.real().unwrap();
        for t in 0..s.n_frames() {
            for k in 0..33 {
                let v = m[[k, t]];
                if k == 8 {
                    assert!((v - 32.0).abs() < 1e-9);
                } else {
                    assert!(v < 1e-9, "bin {k} frame {t}: {v}");
                }
            }
        }
    }

    #[test]
    fn zero_signal_shape() {
        let p = StftParams::default();
        let x = Signal::zeros(10000, 22050.0).unwrap();
        let s = stft(&x, &p).unwrap();
        assert_eq!((s.n_bins(), s.n_frames()), (1025, 1 + 10000 / 512));
        assert!(s.real().unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn bench_corpus_frame_shape() {
        let p = StftParams {
            sample_rate: 44100.0,
            ..StftParams::default()
        };
        assert_eq!(p.n_frames(80000), 157);
        assert_eq!(p.n_bins(), 1025);
    }

    #[test]
    fn errors() {
        let p = StftParams {
            center: false,
            ..StftParams::default()
        };
        let short = Signal::zeros(100, 22050.0).unwrap();
        assert!(stft(&short, &p).is_err());
        assert!(stft(&Signal::zeros(0, 22050.0).unwrap(), &StftParams::default()).is_err());
        let wrong_rate = Signal::zeros(4096, 44100.0).unwrap();
        assert!(stft(&wrong_rate, &StftParams::default()).is_err());
        let bad = StftParams {
            freq_scale: ScaleKind::Linear,
            fmax: 20000.0,
            ..StftParams::default()
        };
        assert!(Stft::new(bad).is_err());
    }

    #[test]
    fn power_and_complex_agree_with_magnitude() {
        let x = tone(1000.0, 22050.0, 4096);
        let mut p = StftParams::default();
        let mag = stft(&x, &p).unwrap().real().unwrap().clone();
        p.output = SpecKind::Power;
        let pow = stft(&x, &p).unwrap().real().unwrap().clone();
        p.output = SpecKind::Complex;
        let cpx = stft(&x, &p).unwrap();
        let c = cpx.complex().unwrap();
        for ((m, pw), z) in mag.iter().zip(pow.iter()).zip(c.iter()) {
            assert!((m * m - pw).abs() <= 1e-9 * (1.0 + pw));
            assert!((z.norm() - m).abs() <= 1e-9 * (1.0 + m));
        }
    }

    #[test]
    fn naive_baseline_matches_conv() {
        let x: Vec<f64> = (0..3000).map(|n| ((n * n) % 17) as f64 / 8.0 - 1.0).collect();
        let sig = Signal::new(x.clone(), 8000.0).unwrap();
        let p = StftParams {
            sample_rate: 8000.0,
            n_fft: 128,
            hop_length: 32,
            ..StftParams::default()
        };
        let stft = Stft::new(p.clone()).unwrap();
        let conv = stft.transform(&sig).unwrap();
        let naive = naive_stft_magnitude(&x, 128, 32, stft.window(), true, PadMode::Reflect).unwrap();
        let conv = conv.real().unwrap();
        assert_eq!(conv.dim(), naive.dim());
        for (a, b) in conv.iter().zip(naive.iter()) {
            assert!((a - b).abs() < 1e-10 * (1.0 + b));
        }
    }
}
