use std::str::FromStr;

use super::Signal;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PadMode {
    /// Mirror about the edge sample without repeating it.
    #[default]
    Reflect,
    ConstantZero,
}

impl FromStr for PadMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "reflect" => Ok(Self::Reflect),
            "constant" | "zero" | "constant_zero" | "constant-zero" => Ok(Self::ConstantZero),
            other => invalid(format!("unknown pad mode '{other}'")),
        }
    }
}

/// Maps an index of the padded sequence (shifted so that `0` is the first
/// original sample) back onto the original sequence. Returns `None` for
/// positions that are filled with zeros.
pub fn reflect_index(pos: isize, len: usize, mode: PadMode) -> Option<usize> {
    let n = len as isize;
    if (0..n).contains(&pos) {
        return Some(pos as usize);
    }
    match mode {
        PadMode::ConstantZero => None,
        PadMode::Reflect => {
            let mirrored = if pos < 0 { -pos } else { 2 * (n - 1) - pos };
            (0..n).contains(&mirrored).then_some(mirrored as usize)
        }
    }
}

pub fn pad_slice(x: &[f64], mode: PadMode, left: usize, right: usize) -> Result<Vec<f64>> {
    if mode == PadMode::Reflect && (left > 0 || right > 0) && (left >= x.len() || right >= x.len())
    {
        return invalid(format!(
            "reflect padding of {left}/{right} samples needs a signal longer than the pad, got {}",
            x.len()
        ));
    }
    let mut out = Vec::with_capacity(x.len() + left + right);
    let start = -(left as isize);
    let end = (x.len() + right) as isize;
    out.extend((start..end).map(|p| reflect_index(p, x.len(), mode).map_or(0.0, |i| x[i])));
    Ok(out)
}

pub fn pad_signal(x: &Signal, mode: PadMode, left: usize, right: usize) -> Result<Signal> {
    Signal::new(pad_slice(x.samples(), mode, left, right)?, x.sample_rate())
}
