//! End-user transforms built from kernels and strided convolution.

mod batch;
mod cqt;
mod mel;
mod spectrogram;
mod stft;

pub use batch::{batch_transform, thread_count, Transform};
pub use cqt::{cqt1992, cqt1992v2, cqt2010, cqt2010v2, Cqt, CqtAlgorithm, CqtOptions};
pub use mel::{mel_spectrogram, MelParams, MelSpectrogram};
pub use spectrogram::{SpecData, SpecKind, Spectrogram};
pub(crate) use stft::{frame_input, frame_total};
pub use stft::{naive_stft_magnitude, stft, Stft, StftParams};
