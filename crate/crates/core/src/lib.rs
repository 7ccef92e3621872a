//! Time-frequency analysis built from explicit convolution kernels.
//!
//! Every transform here is a bank of kernels slid over the signal with a
//! stride: the STFT uses windowed cosine/sine rows, the Mel spectrogram adds a
//! triangular filter bank on top of the STFT magnitude, and the constant-Q
//! variants use either frequency-domain kernels (via Parseval's relation) or
//! the time-domain kernels directly, optionally one octave at a time over a
//! recursively downsampled input. Because the kernels are plain matrices, the
//! [`diff`] module can differentiate spectrogram outputs with respect to them
//! and train them.

pub mod diff;
pub mod error;
pub mod io;
pub mod kernels;
pub mod signal;
pub mod transforms;

pub use error::{Error, Result};
pub use signal::Signal;
pub use transforms::Spectrogram;
