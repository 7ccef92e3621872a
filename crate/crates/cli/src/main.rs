//! `spectro`: compute spectrograms from WAV files, generate test signals,
//! benchmark the convolution STFT and run the trainable-kernel demo.

mod bench;
mod commands;
mod selftest;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use spectro_core::io::SpecDtype;
use spectro_core::transforms::CqtAlgorithm;

/// Why a command failed; selects the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or parameter values (exit 1).
    Usage(anyhow::Error),
    /// Unreadable, malformed or unprocessable data (exit 2).
    Data(anyhow::Error),
    /// One or more self-test checks failed (exit 3).
    Selftest(usize),
}

impl Failure {
    pub fn usage(e: impl Into<anyhow::Error>) -> Self {
        Self::Usage(e.into())
    }

    pub fn data(e: impl Into<anyhow::Error>) -> Self {
        Self::Data(e.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 1,
            Self::Data(_) => 2,
            Self::Selftest(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "spectro", version, about = "Convolution-kernel STFT, Mel and CQT spectrograms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Short-time Fourier transform of a WAV file.
    Stft(StftArgs),
    /// Mel spectrogram of a WAV file.
    Melspec(MelArgs),
    /// Constant-Q transform of a WAV file.
    Cqt(CqtArgs),
    /// Write a synthetic test signal as WAV.
    Gen(GenArgs),
    /// Time batched convolution STFT against a naive per-frame DFT.
    Bench(BenchArgs),
    /// Train a sine-frequency regressor through an STFT or Mel layer.
    TrainDemo(TrainArgs),
    /// Run the built-in oracle checks.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Spec,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DtypeArg {
    F32,
    F64,
}

impl From<DtypeArg> for SpecDtype {
    fn from(d: DtypeArg) -> Self {
        match d {
            DtypeArg::F32 => SpecDtype::F32,
            DtypeArg::F64 => SpecDtype::F64,
        }
    }
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// Input WAV (PCM16 or float32, any channel count).
    pub input: std::path::PathBuf,
    /// Output path.
    pub output: std::path::PathBuf,
    #[arg(long, value_enum, default_value = "spec")]
    pub format: OutFormat,
    /// Scalar type of the binary payload.
    #[arg(long, value_enum, default_value = "f64")]
    pub dtype: DtypeArg,
    /// Drop this many samples from the start of the input.
    #[arg(long, default_value_t = 0)]
    pub skip_samples: usize,
}

#[derive(Debug, Args)]
pub struct FrameArgs {
    #[arg(long, alias = "hop", default_value_t = 512)]
    pub hop_length: usize,
    #[arg(long, default_value = "hann")]
    pub window: String,
    /// Analyse frames starting at sample 0 instead of centring them.
    #[arg(long)]
    pub no_center: bool,
    #[arg(long, default_value = "reflect")]
    pub pad_mode: String,
    /// magnitude, power or complex.
    #[arg(long, default_value = "magnitude")]
    pub output_format: String,
}

#[derive(Debug, Args)]
pub struct StftArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub frame: FrameArgs,
    #[arg(long, default_value_t = 2048)]
    pub n_fft: usize,
    /// Number of output bins (default n_fft/2 + 1).
    #[arg(long)]
    pub freq_bins: Option<usize>,
    /// no, linear or log.
    #[arg(long, default_value = "no")]
    pub freq_scale: String,
    #[arg(long, default_value_t = 50.0)]
    pub fmin: f64,
    #[arg(long, default_value_t = 6000.0)]
    pub fmax: f64,
}

#[derive(Debug, Args)]
pub struct MelArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long, alias = "hop", default_value_t = 512)]
    pub hop_length: usize,
    #[arg(long, default_value = "hann")]
    pub window: String,
    #[arg(long)]
    pub no_center: bool,
    #[arg(long, default_value = "reflect")]
    pub pad_mode: String,
    #[arg(long, default_value_t = 2048)]
    pub n_fft: usize,
    #[arg(long, default_value_t = 128)]
    pub n_mels: usize,
    #[arg(long, default_value_t = 0.0)]
    pub fmin: f64,
    /// Defaults to Nyquist.
    #[arg(long)]
    pub fmax: Option<f64>,
    /// Use the HTK mel formula instead of Slaney.
    #[arg(long)]
    pub htk: bool,
    /// area or none.
    #[arg(long, default_value = "area")]
    pub norm: String,
    /// Apply the filter bank to the power spectrum.
    #[arg(long)]
    pub power: bool,
}

#[derive(Debug, Args)]
pub struct CqtArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long, value_parser = parse_algo, default_value = "1992v2")]
    pub algo: CqtAlgorithm,
    #[arg(long, alias = "hop", default_value_t = 512)]
    pub hop_length: usize,
    #[arg(long, default_value_t = 32.70)]
    pub fmin: f64,
    /// Upper frequency; overrides --n-bins when given.
    #[arg(long)]
    pub fmax: Option<f64>,
    #[arg(long, default_value_t = 84)]
    pub n_bins: usize,
    #[arg(long, default_value_t = 12)]
    pub bins_per_octave: usize,
    #[arg(long, default_value = "hann")]
    pub window: String,
    /// l1, l2 or none.
    #[arg(long, default_value = "l1")]
    pub norm: String,
    #[arg(long, default_value = "reflect")]
    pub pad_mode: String,
    #[arg(long, default_value = "magnitude")]
    pub output_format: String,
    /// Skip the up-front downsampling of the recursive variants.
    #[arg(long)]
    pub no_early_downsample: bool,
}

fn parse_algo(s: &str) -> Result<CqtAlgorithm, String> {
    s.parse().map_err(|e: spectro_core::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WavFormatArg {
    Pcm16,
    Float32,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// linear-sweep, log-sweep, impulse, pure-tone, multi-tone or chromatic.
    pub kind: String,
    pub output: std::path::PathBuf,
    #[arg(long, default_value_t = 50.0)]
    pub f0: f64,
    #[arg(long, default_value_t = 6000.0)]
    pub f1: f64,
    /// Comma-separated tone frequencies for multi-tone.
    #[arg(long, value_delimiter = ',')]
    pub freqs: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub duration: f64,
    #[arg(long, alias = "sr", default_value_t = 22050.0)]
    pub sample_rate: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phase: f64,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "float32")]
    pub wav_format: WavFormatArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchTransform {
    Stft,
    Mel,
    Cqt,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 100)]
    pub signals: usize,
    #[arg(long, default_value_t = 80_000)]
    pub len: usize,
    #[arg(long, value_enum, default_value = "stft")]
    pub transform: BenchTransform,
    #[arg(long, default_value_t = 2048)]
    pub n_fft: usize,
    #[arg(long, alias = "hop", default_value_t = 512)]
    pub hop_length: usize,
    #[arg(long, alias = "sr", default_value_t = 22050.0)]
    pub sample_rate: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Skip the naive DFT baseline.
    #[arg(long)]
    pub no_naive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayerArg {
    Stft,
    Mel,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, value_enum, default_value = "stft")]
    pub layer: LayerArg,
    /// Keep the kernels fixed.
    #[arg(long)]
    pub frozen: bool,
    #[arg(long, default_value_t = 30)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 32)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub f_lo: u32,
    #[arg(long, default_value_t = 2199)]
    pub f_hi: u32,
    #[arg(long, default_value_t = 1)]
    pub step: u32,
    #[arg(long, default_value_t = 2)]
    pub phases: usize,
    /// Samples per example.
    #[arg(long, default_value_t = 512)]
    pub length: usize,
    #[arg(long, alias = "sr", default_value_t = 44100.0)]
    pub sample_rate: f64,
    #[arg(long, default_value_t = 64)]
    pub n_fft: usize,
    #[arg(long, alias = "hop", default_value_t = 32)]
    pub hop_length: usize,
    #[arg(long, default_value_t = 16)]
    pub n_mels: usize,
    /// Loss-history CSV (stdout when omitted).
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Write the final kernels as CSV (`row,col,re,im`).
    #[arg(long)]
    pub kernels_out: Option<std::path::PathBuf>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Stft(a) => commands::stft(&a),
        Command::Melspec(a) => commands::melspec(&a),
        Command::Cqt(a) => commands::cqt(&a),
        Command::Gen(a) => commands::gen(&a),
        Command::Bench(a) => bench::run(&a),
        Command::TrainDemo(a) => commands::train_demo(&a),
        Command::Selftest => selftest::run(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(e) | Failure::Data(e) => eprintln!("error: {e:#}"),
                Failure::Selftest(n) => eprintln!("selftest: {n} check(s) failed"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
