//! Minimal RIFF/WAVE reader and writer for PCM16 and IEEE float32.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::signal::Signal;

const FORMAT_PCM: u16 = 1;
const FORMAT_FLOAT: u16 = 3;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WavFormat {
    #[default]
    Pcm16,
    Float32,
}

fn corrupt<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::CorruptFile(msg.into()))
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

struct FmtChunk {
    format: u16,
    channels: u16,
    sample_rate: u32,
    bits: u16,
}

pub fn read_wav(path: impl AsRef<Path>) -> Result<Signal> {
    parse_wav(&fs::read(path)?)
}

/// Decode a WAVE byte buffer, averaging all channels to mono.
pub fn parse_wav(bytes: &[u8]) -> Result<Signal> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return corrupt("missing RIFF/WAVE header");
    }
    let mut fmt: Option<FmtChunk> = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let body = pos + 8;
        let Some(end) = body.checked_add(size).filter(|e| *e <= bytes.len()) else {
            return corrupt(format!(
                "chunk '{}' claims {size} bytes but only {} remain",
                String::from_utf8_lossy(id),
                bytes.len() - body
            ));
        };
        match id {
            b"fmt " => {
                if size < 16 {
                    return corrupt("fmt chunk shorter than 16 bytes");
                }
                let mut format = u16_at(bytes, body);
                if format == FORMAT_EXTENSIBLE {
                    if size < 26 {
                        return corrupt("extensible fmt chunk too short");
                    }
                    format = u16_at(bytes, body + 24);
                }
                fmt = Some(FmtChunk {
                    format,
                    channels: u16_at(bytes, body + 2),
                    sample_rate: u32_at(bytes, body + 4),
                    bits: u16_at(bytes, body + 14),
                });
            }
            b"data" => data = Some(&bytes[body..end]),
            _ => {}
        }
        pos = end + (size & 1);
    }
    let Some(fmt) = fmt else {
        return corrupt("no fmt chunk");
    };
    let Some(data) = data else {
        return corrupt("no data chunk");
    };
    let width = match (fmt.format, fmt.bits) {
        (FORMAT_PCM, 16) => 2,
        (FORMAT_FLOAT, 32) => 4,
        (format, bits) => {
            return Err(Error::UnsupportedFormat(format!(
                "format code {format} with {bits} bits per sample (need PCM16 or float32)"
            )))
        }
    };
    if fmt.channels == 0 {
        return corrupt("zero channels");
    }
    let channels = usize::from(fmt.channels);
    let frame = width * channels;
    if data.len() % frame != 0 {
        return corrupt(format!("data length {} is not a multiple of the {frame}-byte frame", data.len()));
    }
    let sample = |c: &[u8]| -> f64 {
        if width == 2 {
            f64::from(i16::from_le_bytes([c[0], c[1]])) / 32768.0
        } else {
            f64::from(f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        }
    };
    let samples = data
        .chunks_exact(frame)
        .map(|f| f.chunks_exact(width).map(sample).sum::<f64>() / channels as f64)
        .collect();
    Signal::new(samples, f64::from(fmt.sample_rate)).map_err(|e| Error::CorruptFile(e.to_string()))
}

/// Encode a mono signal. PCM16 rounds to the nearest step and clips to range.
pub fn encode_wav(x: &Signal, format: WavFormat) -> Result<Vec<u8>> {
    let rate = x.sample_rate();
    if rate.fract() != 0.0 || rate > f64::from(u32::MAX) {
        return Err(Error::InvalidArgument(format!("sample rate {rate} cannot be stored in a WAV header")));
    }
    let (code, width): (u16, u16) = match format {
        WavFormat::Pcm16 => (FORMAT_PCM, 2),
        WavFormat::Float32 => (FORMAT_FLOAT, 4),
    };
    let data_len = x.len() * usize::from(width);
    let Ok(riff_len) = u32::try_from(36 + data_len) else {
        return Err(Error::InvalidArgument("signal too long for a WAV file".into()));
    };
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&riff_len.to_le_bytes());
    out.extend_from_slice(b"WAVEfmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&code.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&(rate as u32).to_le_bytes());
    out.extend_from_slice(&(rate as u32 * u32::from(width)).to_le_bytes());
    out.extend_from_slice(&width.to_le_bytes());
    out.extend_from_slice(&(width * 8).to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for v in x.samples() {
        match format {
            WavFormat::Pcm16 => {
                let q = (v * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
                out.extend_from_slice(&q.to_le_bytes());
            }
            WavFormat::Float32 => out.extend_from_slice(&(*v as f32).to_le_bytes()),
        }
    }
    Ok(out)
}

pub fn write_wav(path: impl AsRef<Path>, x: &Signal, format: WavFormat) -> Result<()> {
    fs::write(path, encode_wav(x, format)?)?;
    Ok(())
}
