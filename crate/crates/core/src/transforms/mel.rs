use ndarray::Array2;

use super::spectrogram::{SpecKind, Spectrogram};
use super::stft::{check_rate, Stft, StftParams};
use crate::error::{invalid, Result};
use crate::kernels::{build_mel_filter_bank, MelFilterBank, MelFormula, MelNorm, ScaleKind};
use crate::signal::{PadMode, Signal, WindowKind};

#[derive(Debug, Clone, PartialEq)]
pub struct MelParams {
    pub sample_rate: f64,
    pub n_fft: usize,
    pub n_mels: usize,
    pub hop_length: usize,
    pub window: WindowKind,
    pub center: bool,
    pub pad_mode: PadMode,
    pub htk: bool,
    pub fmin: f64,
    /// Defaults to Nyquist.
    pub fmax: Option<f64>,
    pub norm: MelNorm,
    /// Feed the filter bank the power spectrum instead of the magnitude.
    pub power: bool,
}

impl Default for MelParams {
    fn default() -> Self {
        Self {
            sample_rate: 22050.0,
            n_fft: 2048,
            n_mels: 128,
            hop_length: 512,
            window: WindowKind::Hann,
            center: true,
            pad_mode: PadMode::Reflect,
            htk: false,
            fmin: 0.0,
            fmax: None,
            norm: MelNorm::Area,
            power: false,
        }
    }
}

impl MelParams {
    pub fn stft_params(&self) -> StftParams {
        StftParams {
            sample_rate: self.sample_rate,
            n_fft: self.n_fft,
            freq_bins: None,
            hop_length: self.hop_length,
            window: self.window,
            freq_scale: ScaleKind::No,
            center: self.center,
            pad_mode: self.pad_mode,
            output: if self.power { SpecKind::Power } else { SpecKind::Magnitude },
            ..StftParams::default()
        }
    }

    pub fn formula(&self) -> MelFormula {
        if self.htk {
            MelFormula::Htk
        } else {
            MelFormula::Slaney
        }
    }
}

/// Magnitude STFT followed by a dense Mel filter bank, frame by frame.
#[derive(Debug, Clone)]
pub struct MelSpectrogram {
    params: MelParams,
    stft: Stft,
    bank: MelFilterBank,
}

impl MelSpectrogram {
    pub fn new(params: MelParams) -> Result<Self> {
        if params.n_mels == 0 {
            return invalid("n_mels must be positive");
        }
        let stft = Stft::new(params.stft_params())?;
        let fmax = params.fmax.unwrap_or(params.sample_rate / 2.0);
        let bank = build_mel_filter_bank(
            params.sample_rate,
            params.n_fft,
            params.n_mels,
            params.fmin,
            fmax,
            params.formula(),
            params.norm,
        )?;
        Ok(Self { params, stft, bank })
    }

    pub fn params(&self) -> &MelParams {
        &self.params
    }

    pub fn stft(&self) -> &Stft {
        &self.stft
    }

    pub fn filter_bank(&self) -> &MelFilterBank {
        &self.bank
    }

    pub fn transform(&self, x: &Signal) -> Result<Spectrogram> {
        check_rate(x, self.params.sample_rate)?;
        let spec = self.stft.transform(x)?;
        let stft_values = spec.real().expect("real STFT output");
        let mel: Array2<f64> = self.bank.weights.dot(stft_values);
        let kind = if self.params.power { SpecKind::Power } else { SpecKind::Magnitude };
        Ok(Spectrogram::from_real_unchecked(
            kind,
            mel,
            self.bank.mel_center_freqs_hz().to_vec(),
            self.params.hop_length,
            self.params.sample_rate,
        ))
    }
}

pub fn mel_spectrogram(x: &Signal, params: &MelParams) -> Result<Spectrogram> {
    MelSpectrogram::new(params.clone())?.transform(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn table_params() -> MelParams {
        MelParams {
            sample_rate: 1000.0,
            n_fft: 128,
            n_mels: 4,
            hop_length: 32,
            htk: true,
            norm: MelNorm::None,
            ..MelParams::default()
        }
    }

    #[test]
    fn zero_signal_is_zero() {
        let s = mel_spectrogram(&Signal::zeros(1000, 1000.0).unwrap(), &table_params()).unwrap();
        assert_eq!((s.n_bins(), s.n_frames()), (4, 1 + 1000 / 32));
        assert!(s.real().unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn equals_bank_times_stft_magnitude() {
        let x: Vec<f64> = (0..1000).map(|n| (2.0 * PI * 75.0 * n as f64 / 1000.0).sin()).collect();
        let x = Signal::new(x, 1000.0).unwrap();
        let mel = MelSpectrogram::new(table_params()).unwrap();
        let out = mel.transform(&x).unwrap();
        let stft = mel.stft().transform(&x).unwrap();
        let expect = mel.filter_bank().weights.dot(stft.real().unwrap());
        for (a, b) in out.real().unwrap().iter().zip(expect.iter()) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }
}
