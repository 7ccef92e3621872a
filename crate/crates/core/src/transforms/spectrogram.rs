use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SpecKind {
    #[default]
    Magnitude,
    Power,
    Complex,
}

impl FromStr for SpecKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "magnitude" | "mag" => Ok(Self::Magnitude),
            "power" => Ok(Self::Power),
            "complex" => Ok(Self::Complex),
            other => invalid(format!("unknown output kind '{other}'")),
        }
    }
}

impl fmt::Display for SpecKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Magnitude => "magnitude",
            Self::Power => "power",
            Self::Complex => "complex",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpecData {
    Real(Array2<f64>),
    Complex(Array2<Complex64>),
}

impl SpecData {
    pub fn dim(&self) -> (usize, usize) {
        match self {
            Self::Real(a) => a.dim(),
            Self::Complex(a) => a.dim(),
        }
    }
}

/// A bins x frames time-frequency matrix plus the metadata needed to place it
/// in time and frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    kind: SpecKind,
    data: SpecData,
    /// Centre frequency of each row. Empty when unknown (e.g. read back from
    /// a file, which does not store them).
    bin_freqs_hz: Vec<f64>,
    hop: usize,
    sample_rate: f64,
}

impl Spectrogram {
    pub fn new(kind: SpecKind, data: SpecData, bin_freqs_hz: Vec<f64>, hop: usize, sample_rate: f64) -> Result<Self> {
        match (&data, kind) {
            (SpecData::Complex(_), SpecKind::Complex) => {}
            (SpecData::Real(values), SpecKind::Magnitude | SpecKind::Power) => {
                if values.iter().any(|v| !(*v >= 0.0)) {
                    return invalid(format!("{kind} spectrogram has a negative or NaN entry"));
                }
            }
            _ => return invalid(format!("data layout does not match spectrogram kind {kind}")),
        }
        let (bins, _) = data.dim();
        if !bin_freqs_hz.is_empty() && bin_freqs_hz.len() != bins {
            return invalid(format!(
                "{} bin frequencies for {bins} bins",
                bin_freqs_hz.len()
            ));
        }
        if hop == 0 {
            return invalid("hop must be positive");
        }
        if !(sample_rate > 0.0) {
            return invalid("sample rate must be positive");
        }
        Ok(Self {
            kind,
            data,
            bin_freqs_hz,
            hop,
            sample_rate,
        })
    }

    pub(crate) fn from_complex(values: Array2<Complex64>, kind: SpecKind, bin_freqs_hz: Vec<f64>, hop: usize, sample_rate: f64) -> Self {
        let data = match kind {
            SpecKind::Complex => SpecData::Complex(values),
            SpecKind::Magnitude => SpecData::Real(values.mapv(|c| c.norm())),
            SpecKind::Power => SpecData::Real(values.mapv(|c| c.norm_sqr())),
        };
        Self {
            kind,
            data,
            bin_freqs_hz,
            hop,
            sample_rate,
        }
    }

    pub(crate) fn from_real_unchecked(kind: SpecKind, values: Array2<f64>, bin_freqs_hz: Vec<f64>, hop: usize, sample_rate: f64) -> Self {
        debug_assert!(kind != SpecKind::Complex);
        Self {
            kind,
            data: SpecData::Real(values),
            bin_freqs_hz,
            hop,
            sample_rate,
        }
    }

    pub fn kind(&self) -> SpecKind {
        self.kind
    }

    pub fn data(&self) -> &SpecData {
        &self.data
    }

    pub fn n_bins(&self) -> usize {
        self.data.dim().0
    }

    pub fn n_frames(&self) -> usize {
        self.data.dim().1
    }

    pub fn bin_freqs_hz(&self) -> &[f64] {
        &self.bin_freqs_hz
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    /// Real-valued entries; `None` for complex spectrograms.
    pub fn real(&self) -> Option<&Array2<f64>> {
        match &self.data {
            SpecData::Real(a) => Some(a),
            SpecData::Complex(_) => None,
        }
    }

    pub fn complex(&self) -> Option<&Array2<Complex64>> {
        match &self.data {
            SpecData::Complex(a) => Some(a),
            SpecData::Real(_) => None,
        }
    }

    /// Magnitude view regardless of kind (power is square-rooted).
    pub fn magnitude(&self) -> Array2<f64> {
        match (&self.data, self.kind) {
            (SpecData::Complex(a), _) => a.mapv(|c| c.norm()),
            (SpecData::Real(a), SpecKind::Power) => a.mapv(f64::sqrt),
            (SpecData::Real(a), _) => a.clone(),
        }
    }

    /// Index of the strongest bin in every frame.
    pub fn argmax_track(&self) -> Vec<usize> {
        let mag = self.magnitude();
        mag.columns()
            .into_iter()
            .map(|col| {
                col.iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |best, (i, v)| if *v > best.1 { (i, *v) } else { best })
                    .0
            })
            .collect()
    }

    /// Keeps the first `n` frames.
    pub fn truncate_frames(&mut self, n: usize) {
        let n = n.min(self.n_frames());
        self.data = match &self.data {
            SpecData::Real(a) => SpecData::Real(a.slice(ndarray::s![.., ..n]).to_owned()),
            SpecData::Complex(a) => SpecData::Complex(a.slice(ndarray::s![.., ..n]).to_owned()),
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn validates_kind_and_shape() {
        let real = SpecData::Real(array![[1.0, 2.0], [0.0, 3.0]]);
        assert!(Spectrogram::new(SpecKind::Magnitude, real.clone(), vec![0.0, 10.0], 4, 100.0).is_ok());
        assert!(Spectrogram::new(SpecKind::Complex, real.clone(), vec![], 4, 100.0).is_err());
        assert!(Spectrogram::new(SpecKind::Magnitude, real.clone(), vec![1.0], 4, 100.0).is_err());
        assert!(Spectrogram::new(SpecKind::Magnitude, real, vec![], 0, 100.0).is_err());
        let neg = SpecData::Real(array![[-1.0]]);
        assert!(Spectrogram::new(SpecKind::Power, neg, vec![], 1, 100.0).is_err());
    }

    #[test]
    fn argmax_and_truncate() {
        let data = SpecData::Real(array![[1.0, 5.0, 0.0], [2.0, 0.0, 0.5]]);
        let mut s = Spectrogram::new(SpecKind::Magnitude, data, vec![], 1, 1.0).unwrap();
        assert_eq!(s.argmax_track(), vec![1, 0, 1]);
        s.truncate_frames(2);
        assert_eq!(s.n_frames(), 2);
    }
}
