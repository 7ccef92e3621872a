use std::str::FromStr;

use ndarray::Array2;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MelFormula {
    /// `m = 2595 log10(1 + f/700)`.
    Htk,
    /// Linear below 1 kHz (`3f/200`), logarithmic above.
    #[default]
    Slaney,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MelNorm {
    None,
    /// Scale each triangle by `2 / (f_{m+2} - f_m)` so it has unit area in Hz.
    #[default]
    Area,
}

impl FromStr for MelNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "0" => Ok(Self::None),
            "area" | "slaney" | "1" => Ok(Self::Area),
            other => invalid(format!("unknown mel norm '{other}'")),
        }
    }
}

const SLANEY_BREAK_HZ: f64 = 1000.0;
const SLANEY_BREAK_MEL: f64 = 15.0;

fn slaney_log_step() -> f64 {
    6.4f64.ln() / 27.0
}

pub fn hz_to_mel(f: f64, formula: MelFormula) -> Result<f64> {
    if !(f >= 0.0) {
        return invalid(format!("frequency must be non-negative, got {f}"));
    }
    Ok(match formula {
        MelFormula::Htk => 2595.0 * (1.0 + f / 700.0).log10(),
        MelFormula::Slaney if f < SLANEY_BREAK_HZ => 3.0 * f / 200.0,
        MelFormula::Slaney => SLANEY_BREAK_MEL + (f / SLANEY_BREAK_HZ).ln() / slaney_log_step(),
    })
}

pub fn mel_to_hz(m: f64, formula: MelFormula) -> Result<f64> {
    if !(m >= 0.0) {
        return invalid(format!("mel value must be non-negative, got {m}"));
    }
    Ok(match formula {
        MelFormula::Htk => 700.0 * (10f64.powf(m / 2595.0) - 1.0),
        MelFormula::Slaney if m < SLANEY_BREAK_MEL => 200.0 * m / 3.0,
        MelFormula::Slaney => SLANEY_BREAK_HZ * (slaney_log_step() * (m - SLANEY_BREAK_MEL)).exp(),
    })
}

/// Triangular filters mapping `n_fft/2 + 1` STFT bins onto `n_mels` Mel bins.
#[derive(Debug, Clone, PartialEq)]
pub struct MelFilterBank {
    pub weights: Array2<f64>,
    formula: MelFormula,
    norm: MelNorm,
    /// The `n_mels + 2` triangle corner frequencies in Hz.
    edges_hz: Vec<f64>,
}

impl MelFilterBank {
    pub fn formula(&self) -> MelFormula {
        self.formula
    }

    pub fn norm(&self) -> MelNorm {
        self.norm
    }

    pub fn n_mels(&self) -> usize {
        self.weights.nrows()
    }

    pub fn n_stft_bins(&self) -> usize {
        self.weights.ncols()
    }

    pub fn edges_hz(&self) -> &[f64] {
        &self.edges_hz
    }

    /// Peak frequency of each triangle.
    pub fn mel_center_freqs_hz(&self) -> &[f64] {
        &self.edges_hz[1..self.edges_hz.len() - 1]
    }

    /// Inclusive range of STFT bins with non-zero weight for each Mel bin,
    /// `None` for an empty triangle.
    pub fn supports(&self) -> Vec<Option<(usize, usize)>> {
        self.weights
            .rows()
            .into_iter()
            .map(|row| {
                let first = row.iter().position(|w| *w > 0.0)?;
                let last = row.iter().rposition(|w| *w > 0.0)?;
                Some((first, last))
            })
            .collect()
    }
}

pub fn build_mel_filter_bank(
    sample_rate: f64,
    n_fft: usize,
    n_mels: usize,
    fmin: f64,
    fmax: f64,
    formula: MelFormula,
    norm: MelNorm,
) -> Result<MelFilterBank> {
    if n_mels == 0 {
        return invalid("need at least one Mel bin");
    }
    if n_fft < 2 {
        return invalid("n_fft must be at least 2");
    }
    if !(fmin >= 0.0 && fmin < fmax) {
        return invalid(format!("need 0 <= fmin < fmax, got {fmin}..{fmax}"));
    }
    if fmax > sample_rate / 2.0 {
        return invalid(format!("fmax {fmax} exceeds Nyquist {}", sample_rate / 2.0));
    }

    let mel_lo = hz_to_mel(fmin, formula)?;
    let mel_hi = hz_to_mel(fmax, formula)?;
    let n_points = n_mels + 2;
    let step = (mel_hi - mel_lo) / (n_points - 1) as f64;
    let edges_hz = (0..n_points)
        .map(|i| {
            let m = if i == n_points - 1 { mel_hi } else { mel_lo + step * i as f64 };
            mel_to_hz(m, formula)
        })
        .collect::<Result<Vec<_>>>()?;

    let n_bins = n_fft / 2 + 1;
    let bin_hz: Vec<f64> = (0..n_bins)
        .map(|k| k as f64 * sample_rate / n_fft as f64)
        .collect();

    let mut weights = Array2::zeros((n_mels, n_bins));
    for m in 0..n_mels {
        let (lo, mid, hi) = (edges_hz[m], edges_hz[m + 1], edges_hz[m + 2]);
        let scale = match norm {
            MelNorm::None => 1.0,
            MelNorm::Area => 2.0 / (hi - lo),
        };
        for (k, &f) in bin_hz.iter().enumerate() {
            let rising = (f - lo) / (mid - lo);
            let falling = (hi - f) / (hi - mid);
            weights[[m, k]] = rising.min(falling).max(0.0) * scale;
        }
        if weights.row(m).iter().all(|w| *w == 0.0) {
            log::warn!(
                "Mel bin {m} ({lo:.1}-{hi:.1} Hz) covers no STFT bin; use fewer Mel bins or a longer n_fft"
            );
        }
    }

    Ok(MelFilterBank {
        weights,
        formula,
        norm,
        edges_hz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn conversion_anchor_values() {
        assert_abs_diff_eq!(hz_to_mel(700.0, MelFormula::Htk).unwrap(), 2595.0 * 2f64.log10(), epsilon = 1e-9);
        assert_abs_diff_eq!(hz_to_mel(700.0, MelFormula::Htk).unwrap(), 781.1728, epsilon = 1e-4);
        assert_abs_diff_eq!(hz_to_mel(1000.0, MelFormula::Slaney).unwrap(), 15.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hz_to_mel(200.0, MelFormula::Slaney).unwrap(), 3.0, epsilon = 1e-12);
        assert!(hz_to_mel(-1.0, MelFormula::Htk).is_err());
    }

    #[test]
    fn round_trips() {
        for formula in [MelFormula::Htk, MelFormula::Slaney] {
            for f in [20.0, 440.0, 4186.0, 15000.0] {
                let back = mel_to_hz(hz_to_mel(f, formula).unwrap(), formula).unwrap();
                assert!(((back - f) / f).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn htk_table_supports() {
        let bank = build_mel_filter_bank(1000.0, 128, 4, 0.0, 500.0, MelFormula::Htk, MelNorm::None).unwrap();
        assert_eq!(
            bank.supports(),
            vec![Some((1, 21)), Some((11, 34)), Some((22, 48)), Some((35, 64))]
        );
        let edges = bank.edges_hz();
        for (e, expect) in edges[1..].iter().zip([79.8, 168.4, 267.3, 377.4, 500.0]) {
            assert_abs_diff_eq!(*e, expect, epsilon = 0.15);
        }
    }

    #[test]
    fn triangles_are_unimodal_with_unit_peak() {
        let bank =
            build_mel_filter_bank(22050.0, 2048, 40, 0.0, 11025.0, MelFormula::Slaney, MelNorm::None).unwrap();
        for row in bank.weights.rows() {
            assert!(row.iter().all(|w| *w >= 0.0));
            let peak = row.iter().cloned().fold(0.0, f64::max);
            assert!(peak <= 1.0 + 1e-12);
            let argmax = row.iter().position(|w| *w == peak).unwrap();
            let v = row.to_vec();
            assert!(v[..=argmax].windows(2).all(|p| p[0] <= p[1]));
            assert!(v[argmax..].windows(2).all(|p| p[0] >= p[1]));
        }
    }

    #[test]
    fn area_norm_scales_each_row() {
        let args = (16000.0, 4096, 24, 30.0, 7600.0, MelFormula::Htk);
        let plain = build_mel_filter_bank(args.0, args.1, args.2, args.3, args.4, args.5, MelNorm::None).unwrap();
        let area = build_mel_filter_bank(args.0, args.1, args.2, args.3, args.4, args.5, MelNorm::Area).unwrap();
        let df = args.0 / args.1 as f64;
        let e = plain.edges_hz();
        for m in 0..24 {
            let factor = 2.0 / (e[m + 2] - e[m]);
            for k in 0..plain.n_stft_bins() {
                assert_abs_diff_eq!(area.weights[[m, k]], plain.weights[[m, k]] * factor, epsilon = 1e-15);
            }
            // A peak-1 triangle over [e_m, e_{m+2}] has area (e_{m+2} - e_m) / 2, so
            // the Riemann sum of the normalized row approximates 1.
            let integral: f64 = area.weights.row(m).sum() * df;
            assert!((integral - 1.0).abs() < 0.05, "row {m}: {integral}");
        }
    }

    #[test]
    fn bank_errors() {
        let b = |fmin, fmax, n| build_mel_filter_bank(1000.0, 128, n, fmin, fmax, MelFormula::Htk, MelNorm::None);
        assert!(b(0.0, 501.0, 4).is_err());
        assert!(b(300.0, 200.0, 4).is_err());
        assert!(b(0.0, 500.0, 0).is_err());
        // Too many Mel bins only warns.
        let dense = b(0.0, 500.0, 200).unwrap();
        assert!(dense.supports().iter().any(|s| s.is_none()));
    }
}
