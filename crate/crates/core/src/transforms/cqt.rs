use std::fmt;
use std::str::FromStr;

use ndarray::{s, Array2};
use num_complex::Complex64;

use super::spectrogram::{SpecKind, Spectrogram};
use super::stft::{check_rate, frame_input};
use crate::error::{invalid, Error, Result};
use crate::kernels::{build_cqt_kernels, build_dft_kernels, CqtConfig, CqtKernelBank, DftKernelBank, FrequencyScale, KernelDomain, ScaleKind};
use crate::signal::{conv1d_strided, design_lowpass_fir, downsample2, make_window, pad_slice, FirFilter, PadMode, Signal, WindowKind};

/// Which of the four constant-Q pipelines to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CqtAlgorithm {
    /// Frequency-domain kernels applied to a full-length DFT of each frame.
    Cqt1992,
    /// Time-domain kernels applied directly by strided convolution.
    #[default]
    Cqt1992v2,
    /// Top-octave frequency-domain kernels over a recursively halved input.
    Cqt2010,
    /// Top-octave time-domain kernels over a recursively halved input.
    Cqt2010v2,
}

impl FromStr for CqtAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().trim_start_matches("cqt") {
            "1992" => Ok(Self::Cqt1992),
            "1992v2" => Ok(Self::Cqt1992v2),
            "2010" => Ok(Self::Cqt2010),
            "2010v2" => Ok(Self::Cqt2010v2),
            other => invalid(format!("unknown CQT algorithm '{other}'")),
        }
    }
}

impl fmt::Display for CqtAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Cqt1992 => "1992",
            Self::Cqt1992v2 => "1992v2",
            Self::Cqt2010 => "2010",
            Self::Cqt2010v2 => "2010v2",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CqtOptions {
    pub output: SpecKind,
    pub pad_mode: PadMode,
    /// Recursive variants only: halve the input up front while the top bin
    /// stays below `Nyquist / EARLY_DOWNSAMPLE_MARGIN`.
    pub early_downsample: bool,
    /// Length of the antialiasing filter used for each factor-2 step.
    pub fir_taps: usize,
}

impl Default for CqtOptions {
    fn default() -> Self {
        Self {
            output: SpecKind::Magnitude,
            pad_mode: PadMode::Reflect,
            early_downsample: true,
            fir_taps: 255,
        }
    }
}

const EARLY_DOWNSAMPLE_MARGIN: f64 = 1.3;

/// Kernels ready for one of the two application routes.
#[derive(Debug, Clone)]
struct KernelRoute {
    bank: CqtKernelBank,
    re: Array2<f64>,
    im: Array2<f64>,
    /// Parseval route only: windowless DFT rows plus the frequency kernels
    /// split into real and imaginary parts.
    parseval: Option<(DftKernelBank, Array2<f64>, Array2<f64>)>,
}

impl KernelRoute {
    fn new(cfg: &CqtConfig, parseval: bool) -> Result<Self> {
        let domain = if parseval { KernelDomain::Frequency } else { KernelDomain::Time };
        let bank = build_cqt_kernels(cfg, domain)?;
        let (re, im) = bank.split_time_kernels();
        let parseval = if parseval {
            let l = bank.fft_len();
            let scale = FrequencyScale::new(ScaleKind::No, l, cfg.sample_rate, 0.0, 0.0, l / 2 + 1)?;
            let dft = build_dft_kernels(&scale, &make_window(WindowKind::Rectangular, l, true)?)?;
            let fk = bank.freq_kernels.as_ref().expect("frequency kernels requested");
            Some((dft, fk.mapv(|c| c.re), fk.mapv(|c| c.im)))
        } else {
            None
        };
        Ok(Self { bank, re, im, parseval })
    }

    fn fft_len(&self) -> usize {
        self.bank.fft_len()
    }

    /// Complex response (bins x frames) of an already centre-padded input.
    fn respond(&self, padded: &[f64], hop: usize) -> Result<Array2<Complex64>> {
        match &self.parseval {
            None => {
                let re = conv1d_strided(padded, self.re.view(), hop)?.values;
                let im = conv1d_strided(padded, self.im.view(), hop)?.values;
                Ok(Array2::from_shape_fn(re.dim(), |ix| Complex64::new(re[ix], im[ix])))
            }
            Some((dft, yr, yi)) => {
                let l = self.fft_len();
                let c = conv1d_strided(padded, dft.re.view(), hop)?.values;
                let s = conv1d_strided(padded, dft.im.view(), hop)?.values;
                // conj(X[k]) = c[k] + i s[k]; the upper half follows from
                // X[L-k] = conj(X[k]) for a real frame.
                let frames = c.ncols();
                let mut cf = Array2::<f64>::zeros((l, frames));
                let mut sf = Array2::<f64>::zeros((l, frames));
                for k in 0..l {
                    let (src, sign) = if k <= l / 2 { (k, 1.0) } else { (l - k, -1.0) };
                    cf.row_mut(k).assign(&c.row(src));
                    sf.row_mut(k).assign(&(&s.row(src) * sign));
                }
                let scale = 1.0 / l as f64;
                let out_re = (yr.dot(&cf) - yi.dot(&sf)) * scale;
                let out_im = (yi.dot(&cf) + yr.dot(&sf)) * scale;
                Ok(Array2::from_shape_fn(out_re.dim(), |ix| Complex64::new(out_re[ix], out_im[ix])))
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Plan {
    Full(KernelRoute),
    Octaves {
        top: KernelRoute,
        /// Number of factor-2 steps applied before the top octave.
        early: usize,
        n_octaves: usize,
        fir: FirFilter,
    },
}

/// A constant-Q transform with kernels built once at construction.
#[derive(Debug, Clone)]
pub struct Cqt {
    cfg: CqtConfig,
    algorithm: CqtAlgorithm,
    options: CqtOptions,
    plan: Plan,
}

impl Cqt {
    pub fn new(cfg: CqtConfig, algorithm: CqtAlgorithm) -> Result<Self> {
        Self::with_options(cfg, algorithm, CqtOptions::default())
    }

    pub fn with_options(cfg: CqtConfig, algorithm: CqtAlgorithm, options: CqtOptions) -> Result<Self> {
        cfg.validate()?;
        let plan = match algorithm {
            CqtAlgorithm::Cqt1992 => Plan::Full(KernelRoute::new(&cfg, true)?),
            CqtAlgorithm::Cqt1992v2 => Plan::Full(KernelRoute::new(&cfg, false)?),
            CqtAlgorithm::Cqt2010 | CqtAlgorithm::Cqt2010v2 => {
                Self::octave_plan(&cfg, algorithm == CqtAlgorithm::Cqt2010, &options)?
            }
        };
        Ok(Self {
            cfg,
            algorithm,
            options,
            plan,
        })
    }

    fn octave_plan(cfg: &CqtConfig, parseval: bool, options: &CqtOptions) -> Result<Plan> {
        let n_bins = cfg.resolved_n_bins();
        let n_octaves = cfg.n_octaves();
        let divisor = 1usize << (n_octaves - 1);
        if !cfg.hop_length.is_multiple_of(divisor) {
            return invalid(format!(
                "hop_length {} must be divisible by {divisor} (2^(n_octaves-1) for {n_octaves} octaves)",
                cfg.hop_length
            ));
        }
        let n_top = n_bins.min(cfg.bins_per_octave);
        let f_top = cfg.bin_freq(n_bins - 1);
        let mut early = 0;
        if options.early_downsample {
            while cfg.sample_rate / f64::from(1u32 << (early + 1)) / 2.0 >= EARLY_DOWNSAMPLE_MARGIN * f_top
                && cfg.hop_length.is_multiple_of(divisor << (early + 1))
            {
                early += 1;
            }
        }
        let top_cfg = CqtConfig {
            sample_rate: cfg.sample_rate / f64::from(1u32 << early),
            fmin: cfg.bin_freq(n_bins - n_top),
            n_bins: n_top,
            fmax: None,
            ..cfg.clone()
        };
        let fir = design_lowpass_fir(options.fir_taps, 0.5, WindowKind::Hamming)?;
        Ok(Plan::Octaves {
            top: KernelRoute::new(&top_cfg, parseval)?,
            early,
            n_octaves,
            fir,
        })
    }

    pub fn config(&self) -> &CqtConfig {
        &self.cfg
    }

    pub fn algorithm(&self) -> CqtAlgorithm {
        self.algorithm
    }

    /// Kernels used by this transform: the full bank, or the top octave for
    /// the recursive variants.
    pub fn kernels(&self) -> &CqtKernelBank {
        match &self.plan {
            Plan::Full(route) => &route.bank,
            Plan::Octaves { top, .. } => &top.bank,
        }
    }

    /// Factor-2 steps applied before the top octave (recursive variants).
    pub fn early_downsamples(&self) -> usize {
        match &self.plan {
            Plan::Full(_) => 0,
            Plan::Octaves { early, .. } => *early,
        }
    }

    /// Complex constant-Q coefficients, bins (lowest first) x frames.
    pub fn complex(&self, x: &Signal) -> Result<Array2<Complex64>> {
        check_rate(x, self.cfg.sample_rate)?;
        let hop = self.cfg.hop_length;
        match &self.plan {
            Plan::Full(route) => {
                let padded = frame_input(x.samples(), route.fft_len(), true, self.options.pad_mode)?;
                route.respond(&padded, hop)
            }
            Plan::Octaves {
                top,
                early,
                n_octaves,
                fir,
            } => {
                let n_bins = self.cfg.resolved_n_bins();
                let b = self.cfg.bins_per_octave;
                let n_top = top.bank.n_bins();
                // Pad once at the full rate so every octave sees the same
                // boundary extension as the direct transform.
                let depth = early + n_octaves - 1;
                let half = top.fft_len() / 2;
                let pad = half << depth;
                if x.is_empty() {
                    return invalid("signal is empty");
                }
                let padded = pad_slice(x.samples(), self.options.pad_mode, pad, pad)?;
                let mut current = Signal::new(padded, x.sample_rate())?;
                for _ in 0..*early {
                    current = downsample2(&current, fir)?;
                }
                // Octave responses, highest first.
                let mut octaves: Vec<Array2<Complex64>> = Vec::with_capacity(*n_octaves);
                for octave in 0..*n_octaves {
                    if octave > 0 {
                        current = downsample2(&current, fir)?;
                    }
                    let shift = early + octave;
                    let offset = (pad >> shift) - half;
                    octaves.push(top.respond(&current.samples()[offset..], hop >> shift)?);
                }
                let frames = octaves
                    .iter()
                    .map(|o| o.ncols())
                    .fold(1 + x.len() / hop, usize::min);
                let mut out = Array2::<Complex64>::zeros((n_bins, frames));
                for (octave, resp) in octaves.iter().enumerate() {
                    for j in 0..n_top {
                        let Some(bin) = (n_bins + j).checked_sub(n_top + octave * b) else {
                            continue;
                        };
                        out.row_mut(bin).assign(&resp.slice(s![j, ..frames]));
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn transform(&self, x: &Signal) -> Result<Spectrogram> {
        let values = self.complex(x)?;
        Ok(Spectrogram::from_complex(
            values,
            self.options.output,
            self.cfg.bin_freqs_hz(),
            self.cfg.hop_length,
            self.cfg.sample_rate,
        ))
    }
}

pub fn cqt1992(x: &Signal, cfg: &CqtConfig) -> Result<Spectrogram> {
    Cqt::new(cfg.clone(), CqtAlgorithm::Cqt1992)?.transform(x)
}

pub fn cqt1992v2(x: &Signal, cfg: &CqtConfig) -> Result<Spectrogram> {
    Cqt::new(cfg.clone(), CqtAlgorithm::Cqt1992v2)?.transform(x)
}

pub fn cqt2010(x: &Signal, cfg: &CqtConfig) -> Result<Spectrogram> {
    Cqt::new(cfg.clone(), CqtAlgorithm::Cqt2010)?.transform(x)
}

pub fn cqt2010v2(x: &Signal, cfg: &CqtConfig) -> Result<Spectrogram> {
    Cqt::new(cfg.clone(), CqtAlgorithm::Cqt2010v2)?.transform(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tone(freq: f64, sr: f64, len: usize) -> Signal {
        Signal::new(
            (0..len).map(|n| (2.0 * PI * freq * n as f64 / sr).sin()).collect(),
            sr,
        )
        .unwrap()
    }

    #[test]
    fn zero_signal_gives_zeros_for_every_algorithm() {
        let cfg = CqtConfig::new(8000.0, 110.0, 24, 12, 64);
        let x = Signal::zeros(4000, 8000.0).unwrap();
        for algo in [CqtAlgorithm::Cqt1992, CqtAlgorithm::Cqt1992v2, CqtAlgorithm::Cqt2010, CqtAlgorithm::Cqt2010v2] {
            let s = Cqt::new(cfg.clone(), algo).unwrap().transform(&x).unwrap();
            assert_eq!(s.n_bins(), 24);
            assert!(s.real().unwrap().iter().all(|v| *v == 0.0), "{algo}");
        }
    }

    #[test]
    fn hop_divisibility_is_enforced() {
        let cfg = CqtConfig::new(22050.0, 55.0, 48, 12, 100);
        let err = Cqt::new(cfg, CqtAlgorithm::Cqt2010v2).unwrap_err().to_string();
        assert!(err.contains("divisible by 8"), "{err}");
    }

    #[test]
    fn octave_semitone_tone_peaks_at_bin_twelve() {
        let cfg = CqtConfig::new(22050.0, 220.0, 24, 12, 512);
        let x = tone(440.0, 22050.0, 22050);
        let s = cqt1992v2(&x, &cfg).unwrap();
        let track = s.argmax_track();
        for t in &track[2..track.len() - 2] {
            assert_eq!(*t, 12);
        }
        // L1-normalized kernels report half the amplitude of a sinusoid.
        let m = s.real().unwrap();
        let mid = s.n_frames() / 2;
        assert!((m[[12, mid]] - 0.5).abs() < 1e-3, "{}", m[[12, mid]]);
    }

    #[test]
    fn parses_algorithm_names() {
        assert_eq!("1992".parse::<CqtAlgorithm>().unwrap(), CqtAlgorithm::Cqt1992);
        assert_eq!("CQT2010v2".parse::<CqtAlgorithm>().unwrap(), CqtAlgorithm::Cqt2010v2);
        assert!("2020".parse::<CqtAlgorithm>().is_err());
        assert_eq!(CqtAlgorithm::default(), CqtAlgorithm::Cqt1992v2);
    }

    #[test]
    fn early_downsampling_respects_margin_and_hop() {
        let cfg = CqtConfig::new(22050.0, 55.0, 48, 12, 256);
        let c = Cqt::new(cfg.clone(), CqtAlgorithm::Cqt2010v2).unwrap();
        assert_eq!(c.early_downsamples(), 3);
        let c = Cqt::new(CqtConfig { hop_length: 32, ..cfg.clone() }, CqtAlgorithm::Cqt2010v2).unwrap();
        assert_eq!(c.early_downsamples(), 2);
        let opts = CqtOptions { early_downsample: false, ..CqtOptions::default() };
        let c = Cqt::with_options(cfg, CqtAlgorithm::Cqt2010v2, opts).unwrap();
        assert_eq!(c.early_downsamples(), 0);
    }
}
