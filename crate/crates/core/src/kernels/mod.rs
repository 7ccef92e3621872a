//! Kernel construction: DFT rows on arbitrary frequency scales, Mel filter
//! banks, constant-Q kernels, and the FFT / naive DFT pair.

mod cqt;
mod dft;
mod fft;
mod mel;
mod scale;

pub use cqt::{build_cqt_kernels, cqt_q, CqtConfig, CqtKernelBank, CqtNorm, KernelDomain};
pub use dft::{build_dft_kernels, DftKernelBank};
pub use fft::{dft_naive, fft, fft_in_place, next_power_of_two};
pub use mel::{build_mel_filter_bank, hz_to_mel, mel_to_hz, MelFilterBank, MelFormula, MelNorm};
pub use scale::{hz_to_k, k_to_hz, FrequencyScale, ScaleKind};
