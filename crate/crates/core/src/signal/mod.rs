//! Sample-domain primitives: the [`Signal`] type, analysis windows, padding,
//! strided convolution and the factor-2 antialiasing downsampler.

mod conv;
mod fir;
mod pad;
mod window;

pub(crate) use conv::frames_view;
pub use conv::{conv1d_strided, FrameMatrix};
pub use fir::{design_lowpass_fir, downsample2, fir_frequency_response, FirFilter};
pub use pad::{pad_signal, pad_slice, reflect_index, PadMode};
pub(crate) use window::window_shape;
pub use window::{make_window, Window, WindowKind};

use crate::error::{invalid, Result};

/// A mono sample sequence with its sample rate in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return invalid(format!("sample rate must be positive, got {sample_rate}"));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return invalid(format!("sample {i} is not finite"));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn zeros(len: usize, sample_rate: f64) -> Result<Self> {
        Self::new(vec![0.0; len], sample_rate)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Duration in seconds.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }
}

impl AsRef<[f64]> for Signal {
    fn as_ref(&self) -> &[f64] {
        &self.samples
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_rate_and_non_finite_samples() {
        assert!(Signal::new(vec![0.0], 0.0).is_err());
        assert!(Signal::new(vec![0.0], -1.0).is_err());
        assert!(Signal::new(vec![0.0, f64::NAN], 8000.0).is_err());
        assert!(Signal::new(vec![f64::INFINITY], 8000.0).is_err());
        let s = Signal::new(vec![], 8000.0).unwrap();
        assert!(s.is_empty());
    }
}
