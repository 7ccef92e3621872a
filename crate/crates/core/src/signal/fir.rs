use std::f64::consts::PI;

use ndarray::ArrayView2;
use num_complex::Complex64;

use super::conv::conv1d_strided;
use super::pad::{pad_slice, PadMode};
use super::window::{make_window, WindowKind};
use super::Signal;
use crate::error::{invalid, Result};

/// Linear-phase FIR low-pass filter with unit DC gain.
#[derive(Debug, Clone, PartialEq)]
pub struct FirFilter {
    taps: Vec<f64>,
    normalized_cutoff: f64,
}

impl FirFilter {
    /// Wraps raw taps; used for hand-built filters such as `[0.5, 0.5]`.
    pub fn from_taps(taps: Vec<f64>, normalized_cutoff: f64) -> Result<Self> {
        if taps.is_empty() {
            return invalid("filter needs at least one tap");
        }
        Ok(Self {
            taps,
            normalized_cutoff,
        })
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// Cutoff as a fraction of the Nyquist frequency.
    pub fn normalized_cutoff(&self) -> f64 {
        self.normalized_cutoff
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// Complex response `sum_i b_i e^{-i w i}` at angular frequency `omega`.
    pub fn response_at(&self, omega: f64) -> Complex64 {
        self.taps
            .iter()
            .enumerate()
            .map(|(i, b)| Complex64::from_polar(*b, -omega * i as f64))
            .sum()
    }
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Window-method low-pass design: a sinc at `cutoff` (fraction of Nyquist)
/// tapered by a symmetric window, then scaled to unit DC gain.
pub fn design_lowpass_fir(num_taps: usize, cutoff: f64, window_kind: WindowKind) -> Result<FirFilter> {
    if num_taps < 3 || num_taps.is_multiple_of(2) {
        return invalid(format!("tap count must be odd and at least 3, got {num_taps}"));
    }
    if !(cutoff > 0.0 && cutoff < 1.0) {
        return invalid(format!("cutoff must lie in (0, 1), got {cutoff}"));
    }
    let window = make_window(window_kind, num_taps, false)?;
    let center = (num_taps / 2) as f64;
    let mut taps: Vec<f64> = window
        .values()
        .iter()
        .enumerate()
        .map(|(i, w)| cutoff * sinc(cutoff * (i as f64 - center)) * w)
        .collect();
    let gain: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= gain);
    // Force exact symmetry; the two halves can differ in the last ulp.
    for i in 0..num_taps / 2 {
        taps[num_taps - 1 - i] = taps[i];
    }
    Ok(FirFilter {
        taps,
        normalized_cutoff: cutoff,
    })
}

/// Magnitude response in dB on `n_points` evenly spaced frequencies in
/// `[0, pi]`, returned as `(fraction of Nyquist, dB)` pairs.
pub fn fir_frequency_response(filter: &FirFilter, n_points: usize) -> Result<Vec<(f64, f64)>> {
    if n_points < 2 {
        return invalid("need at least two response points");
    }
    Ok((0..n_points)
        .map(|i| {
            let frac = i as f64 / (n_points - 1) as f64;
            let mag = filter.response_at(frac * PI).norm();
            (frac, 20.0 * mag.max(1e-300).log10())
        })
        .collect())
}

/// Low-pass filters with the center tap aligned to each output sample, then
/// keeps every second sample. Edges are reflect-padded by half the filter
/// length so the filter never sees a hard boundary.
pub fn downsample2(x: &Signal, filter: &FirFilter) -> Result<Signal> {
    let taps = filter.taps();
    if x.len() < taps.len() {
        return invalid(format!(
            "signal of {} samples is shorter than the {}-tap filter",
            x.len(),
            taps.len()
        ));
    }
    let half = taps.len() / 2;
    // Odd tap count pads symmetrically; an even one leans one sample left.
    let right = taps.len() - 1 - half;
    let padded = pad_slice(x.samples(), PadMode::Reflect, half, right)?;
    let kernel = ArrayView2::from_shape((1, taps.len()), taps).expect("tap row");
    let out = conv1d_strided(&padded, kernel, 2)?;
    Signal::new(out.values.row(0).to_vec(), x.sample_rate() / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn response_db(f: &FirFilter, frac_nyquist: f64) -> f64 {
        20.0 * f.response_at(frac_nyquist * PI).norm().log10()
    }

    #[test]
    fn three_tap_rectangular_design() {
        // sinc(+-0.5) * 0.5 = 1/pi, center 0.5, normalized by 0.5 + 2/pi
        let f = design_lowpass_fir(3, 0.5, WindowKind::Rectangular).unwrap();
        let side = (1.0 / PI) / (0.5 + 2.0 / PI);
        let center = 0.5 / (0.5 + 2.0 / PI);
        assert_abs_diff_eq!(f.taps()[0], side, epsilon = 1e-12);
        assert_abs_diff_eq!(f.taps()[1], center, epsilon = 1e-12);
        assert_abs_diff_eq!(f.taps()[0], 0.2800, epsilon = 1e-4);
        assert_abs_diff_eq!(f.taps()[1], 0.4399, epsilon = 1e-4);
    }

    #[test]
    fn designed_filter_invariants() {
        for (n, cutoff, kind) in [
            (3, 0.5, WindowKind::Rectangular),
            (31, 0.25, WindowKind::Hann),
            (255, 0.5, WindowKind::Hamming),
            (101, 0.9, WindowKind::Blackman),
        ] {
            let f = design_lowpass_fir(n, cutoff, kind).unwrap();
            let taps = f.taps();
            assert_eq!(taps.len(), n);
            assert!((taps.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            for i in 0..n {
                assert_eq!(taps[i], taps[n - 1 - i]);
            }
        }
    }

    #[test]
    fn design_errors() {
        assert!(design_lowpass_fir(4, 0.5, WindowKind::Hamming).is_err());
        assert!(design_lowpass_fir(1, 0.5, WindowKind::Hamming).is_err());
        assert!(design_lowpass_fir(5, 0.0, WindowKind::Hamming).is_err());
        assert!(design_lowpass_fir(5, 1.0, WindowKind::Hamming).is_err());
    }

    #[test]
    fn default_antialias_filter_response() {
        let f = design_lowpass_fir(255, 0.5, WindowKind::Hamming).unwrap();
        assert!((f.response_at(0.0).norm() - 1.0).abs() < 1e-6);
        assert!(response_db(&f, 0.25).abs() < 0.1);
        assert!(response_db(&f, 0.55) < -50.0);
        assert!(response_db(&f, 0.75) < -50.0);
    }

    #[test]
    fn response_examples() {
        let identity = FirFilter::from_taps(vec![1.0], 1.0).unwrap();
        for (_, db) in fir_frequency_response(&identity, 16).unwrap() {
            assert_abs_diff_eq!(db, 0.0, epsilon = 1e-12);
        }
        let avg = FirFilter::from_taps(vec![0.5, 0.5], 0.5).unwrap();
        let resp = fir_frequency_response(&avg, 9).unwrap();
        assert_eq!(resp.last().unwrap().0, 1.0);
        assert!(resp.last().unwrap().1 < -100.0);
        assert_abs_diff_eq!(resp[0].1, 0.0, epsilon = 1e-12);
        assert!(fir_frequency_response(&avg, 1).is_err());
    }

    #[test]
    fn downsample_preserves_dc_and_zero() {
        let f = design_lowpass_fir(255, 0.5, WindowKind::Hamming).unwrap();
        let ones = Signal::new(vec![1.0; 2001], 8000.0).unwrap();
        let out = downsample2(&ones, &f).unwrap();
        assert_eq!(out.len(), 1001);
        assert_eq!(out.sample_rate(), 4000.0);
        let margin = f.len() / 2;
        for v in &out.samples()[margin / 2..out.len() - margin / 2] {
            assert!((v - 1.0).abs() < 1e-6);
        }
        let zeros = Signal::zeros(1000, 8000.0).unwrap();
        let out = downsample2(&zeros, &f).unwrap();
        assert_eq!(out.len(), 500);
        assert!(out.samples().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn downsample_rejects_short_signal() {
        let f = design_lowpass_fir(255, 0.5, WindowKind::Hamming).unwrap();
        let short = Signal::zeros(254, 8000.0).unwrap();
        assert!(downsample2(&short, &f).is_err());
    }

    #[test]
    fn downsample_removes_tone_above_new_nyquist() {
        let sr = 8000.0;
        let f = design_lowpass_fir(255, 0.5, WindowKind::Hamming).unwrap();
        let freq = 0.9 * sr / 2.0;
        let x: Vec<f64> = (0..8000)
            .map(|n| (2.0 * PI * freq * n as f64 / sr).sin())
            .collect();
        let rms = |v: &[f64]| (v.iter().map(|a| a * a).sum::<f64>() / v.len() as f64).sqrt();
        let out = downsample2(&Signal::new(x.clone(), sr).unwrap(), &f).unwrap();
        assert!(rms(out.samples()) < 10f64.powf(-50.0 / 20.0) * rms(&x));
    }
}
