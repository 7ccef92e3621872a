//! Binary spectrogram container.
//!
//! Layout (all little-endian):
//!
//! | offset | size | field                                   |
//! |--------|------|-----------------------------------------|
//! | 0      | 4    | magic `NASP`                            |
//! | 4      | 4    | version (1)                             |
//! | 8      | 1    | dtype: 0 = f32, 1 = f64                 |
//! | 9      | 1    | kind: 0 = magnitude, 1 = power, 2 = complex |
//! | 10     | 2    | reserved, zero                          |
//! | 12     | 4    | n_bins                                  |
//! | 16     | 4    | n_frames                                |
//! | 20     | 8    | sample rate (f64)                       |
//! | 28     | 4    | hop                                     |
//!
//! The payload follows in row-major bins x frames order, complex cells as
//! interleaved `re, im` pairs. Bin centre frequencies are not stored.

use std::fs;
use std::io::Write;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::transforms::{SpecData, SpecKind, Spectrogram};

pub const MAGIC: &[u8; 4] = b"NASP";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SpecDtype {
    F32,
    #[default]
    F64,
}

impl SpecDtype {
    fn width(self) -> usize {
        match self {
            Self::F32 => 4,
            Self::F64 => 8,
        }
    }
}

fn corrupt<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::CorruptFile(msg.into()))
}

pub fn encode_spec(spec: &Spectrogram, dtype: SpecDtype) -> Result<Vec<u8>> {
    let (bins, frames) = spec.data().dim();
    let (Ok(n_bins), Ok(n_frames), Ok(hop)) = (u32::try_from(bins), u32::try_from(frames), u32::try_from(spec.hop())) else {
        return Err(Error::InvalidArgument("spectrogram dimensions exceed u32".into()));
    };
    let kind: u8 = match spec.kind() {
        SpecKind::Magnitude => 0,
        SpecKind::Power => 1,
        SpecKind::Complex => 2,
    };
    let scalars: Vec<f64> = match spec.data() {
        SpecData::Real(a) => a.iter().copied().collect(),
        SpecData::Complex(a) => a.iter().flat_map(|c| [c.re, c.im]).collect(),
    };
    let mut out = Vec::with_capacity(HEADER_LEN + scalars.len() * dtype.width());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(match dtype {
        SpecDtype::F32 => 0,
        SpecDtype::F64 => 1,
    });
    out.push(kind);
    out.extend_from_slice(&0u16.to_le_bytes());
    out.extend_from_slice(&n_bins.to_le_bytes());
    out.extend_from_slice(&n_frames.to_le_bytes());
    out.extend_from_slice(&spec.sample_rate().to_le_bytes());
    out.extend_from_slice(&hop.to_le_bytes());
    for v in scalars {
        match dtype {
            SpecDtype::F32 => out.extend_from_slice(&(v as f32).to_le_bytes()),
            SpecDtype::F64 => out.extend_from_slice(&v.to_le_bytes()),
        }
    }
    Ok(out)
}

pub fn decode_spec(bytes: &[u8]) -> Result<Spectrogram> {
    if bytes.len() < HEADER_LEN {
        return corrupt(format!("{} bytes is shorter than the {HEADER_LEN}-byte header", bytes.len()));
    }
    if &bytes[0..4] != MAGIC {
        return corrupt("bad magic");
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"));
    let version = word(4);
    if version != VERSION {
        return corrupt(format!("unsupported version {version}"));
    }
    let dtype = match bytes[8] {
        0 => SpecDtype::F32,
        1 => SpecDtype::F64,
        other => return corrupt(format!("unknown dtype code {other}")),
    };
    let kind = match bytes[9] {
        0 => SpecKind::Magnitude,
        1 => SpecKind::Power,
        2 => SpecKind::Complex,
        other => return corrupt(format!("unknown kind code {other}")),
    };
    let bins = word(12) as usize;
    let frames = word(16) as usize;
    let sample_rate = f64::from_le_bytes(bytes[20..28].try_into().expect("8 bytes"));
    let hop = word(28) as usize;
    let per_cell = if kind == SpecKind::Complex { 2 } else { 1 };
    let expected = bins
        .checked_mul(frames)
        .and_then(|c| c.checked_mul(per_cell * dtype.width()));
    let payload = &bytes[HEADER_LEN..];
    if expected != Some(payload.len()) {
        return corrupt(format!(
            "header describes {bins}x{frames} {kind} cells but payload has {} bytes",
            payload.len()
        ));
    }
    let scalars: Vec<f64> = match dtype {
        SpecDtype::F32 => payload
            .chunks_exact(4)
            .map(|c| f64::from(f32::from_le_bytes(c.try_into().expect("4 bytes"))))
            .collect(),
        SpecDtype::F64 => payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect(),
    };
    let shape_err = |e: ndarray::ShapeError| Error::CorruptFile(e.to_string());
    let data = if kind == SpecKind::Complex {
        let cells = scalars.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        SpecData::Complex(Array2::from_shape_vec((bins, frames), cells).map_err(shape_err)?)
    } else {
        SpecData::Real(Array2::from_shape_vec((bins, frames), scalars).map_err(shape_err)?)
    };
    Spectrogram::new(kind, data, Vec::new(), hop, sample_rate).map_err(|e| Error::CorruptFile(e.to_string()))
}

pub fn write_spec(path: impl AsRef<Path>, spec: &Spectrogram, dtype: SpecDtype) -> Result<()> {
    fs::write(path, encode_spec(spec, dtype)?)?;
    Ok(())
}

pub fn read_spec(path: impl AsRef<Path>) -> Result<Spectrogram> {
    decode_spec(&fs::read(path)?)
}

/// Long-format CSV: one row per cell with bin, frequency (blank when unknown),
/// frame, time of the frame and the value (or `re,im` for complex data).
pub fn write_csv<W: Write>(mut out: W, spec: &Spectrogram) -> Result<()> {
    let complex = spec.kind() == SpecKind::Complex;
    if complex {
        writeln!(out, "bin,freq_hz,frame,time_s,re,im")?;
    } else {
        writeln!(out, "bin,freq_hz,frame,time_s,value")?;
    }
    let (bins, frames) = spec.data().dim();
    let seconds_per_frame = spec.hop() as f64 / spec.sample_rate();
    for b in 0..bins {
        let freq = spec.bin_freqs_hz().get(b).map(|f| f.to_string()).unwrap_or_default();
        for t in 0..frames {
            let time = t as f64 * seconds_per_frame;
            match spec.data() {
                SpecData::Real(a) => writeln!(out, "{b},{freq},{t},{time},{}", a[[b, t]])?,
                SpecData::Complex(a) => writeln!(out, "{b},{freq},{t},{time},{},{}", a[[b, t]].re, a[[b, t]].im)?,
            }
        }
    }
    Ok(())
}
