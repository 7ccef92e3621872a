use std::f64::consts::PI;

use ndarray::Array2;

use super::scale::FrequencyScale;
use crate::error::{invalid, Result};
use crate::signal::Window;

/// Paired cosine/sine convolution kernels, one row per output bin.
///
/// Row `r` holds `cos(2 pi sigma(r) n / N) w[n]` and `sin(2 pi sigma(r) n / N) w[n]`
/// in natural index order; convolution is a sliding dot product, so the
/// real part of the DFT is the `re` response and the imaginary part is the
/// negated `im` response.
#[derive(Debug, Clone, PartialEq)]
pub struct DftKernelBank {
    pub re: Array2<f64>,
    pub im: Array2<f64>,
    scale: FrequencyScale,
    window: Window,
    bin_freqs_hz: Vec<f64>,
}

impl DftKernelBank {
    pub fn scale(&self) -> &FrequencyScale {
        &self.scale
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn bin_freqs_hz(&self) -> &[f64] {
        &self.bin_freqs_hz
    }

    pub fn n_bins(&self) -> usize {
        self.re.nrows()
    }

    pub fn kernel_len(&self) -> usize {
        self.re.ncols()
    }
}

pub fn build_dft_kernels(scale: &FrequencyScale, window: &Window) -> Result<DftKernelBank> {
    let n = scale.window_len();
    if window.len() != n {
        return invalid(format!(
            "window length {} does not match transform length {n}",
            window.len()
        ));
    }
    let w = window.values();
    let sigma = scale.sigma();
    let mut re = Array2::zeros((sigma.len(), n));
    let mut im = Array2::zeros((sigma.len(), n));
    for (r, &k) in sigma.iter().enumerate() {
        for (j, &wj) in w.iter().enumerate() {
            // For integer k reduce k*j mod N first; keeps exact zeros exact.
            let cycles = if k.fract() == 0.0 {
                ((k as u64 * j as u64) % n as u64) as f64
            } else {
                k * j as f64
            };
            let phase = 2.0 * PI * cycles / n as f64;
            re[[r, j]] = phase.cos() * wj;
            im[[r, j]] = phase.sin() * wj;
        }
    }
    Ok(DftKernelBank {
        re,
        im,
        scale: scale.clone(),
        window: window.clone(),
        bin_freqs_hz: scale.bin_freqs_hz(),
    })
}
