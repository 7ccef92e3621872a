use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WindowKind {
    #[default]
    Hann,
    Hamming,
    Blackman,
    Rectangular,
}

impl FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hann" | "hanning" => Ok(Self::Hann),
            "hamming" => Ok(Self::Hamming),
            "blackman" => Ok(Self::Blackman),
            "rectangular" | "rect" | "boxcar" | "ones" => Ok(Self::Rectangular),
            other => invalid(format!("unknown window kind '{other}'")),
        }
    }
}

impl fmt::Display for WindowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::Hann => "hann",
            Self::Hamming => "hamming",
            Self::Blackman => "blackman",
            Self::Rectangular => "rectangular",
        };
        f.write_str(name)
    }
}

/// A sampled analysis window with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    values: Vec<f64>,
    kind: WindowKind,
    periodic: bool,
}

impl Window {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Builds a window of length `n`.
///
/// A periodic window uses the denominator `n` (the DFT-even form used for
/// overlapping analysis frames); a symmetric one uses `n - 1`.
/// Window value at fractional position `u` in [0, 1] of one period.
pub(crate) fn window_shape(kind: WindowKind, u: f64) -> f64 {
    let phase = 2.0 * PI * u;
    let v = match kind {
        WindowKind::Hann => 0.5 - 0.5 * phase.cos(),
        WindowKind::Hamming => 0.54 - 0.46 * phase.cos(),
        WindowKind::Blackman => 0.42 - 0.5 * phase.cos() + 0.08 * (2.0 * phase).cos(),
        WindowKind::Rectangular => 1.0,
    };
    v.clamp(0.0, 1.0)
}

pub fn make_window(kind: WindowKind, n: usize, periodic: bool) -> Result<Window> {
    if n == 0 {
        return invalid("window length must be at least 1");
    }
    let values = if kind == WindowKind::Rectangular {
        vec![1.0; n]
    } else if n == 1 && !periodic {
        vec![1.0]
    } else {
        let denom = if periodic { n } else { n - 1 } as f64;
        (0..n).map(|i| window_shape(kind, i as f64 / denom)).collect()
    };
    Ok(Window {
        values,
        kind,
        periodic,
    })
}
