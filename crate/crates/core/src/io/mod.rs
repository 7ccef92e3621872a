//! Audio input, synthetic test signals and spectrogram serialization.

mod gen;
mod specfile;
mod wav;

pub use gen::{gen_signal, SignalKind, SignalSpec};
pub use specfile::{decode_spec, encode_spec, read_spec, write_csv, write_spec, SpecDtype, HEADER_LEN, MAGIC, VERSION};
pub use wav::{encode_wav, parse_wav, read_wav, write_wav, WavFormat};
