use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use anyhow::Context;
use spectro_core::diff::{gen_sine_dataset_with, train_frequency_predictor, LinearPredictor, SineDatasetConfig, TrainConfig, TrainableLayer};
use spectro_core::io::{gen_signal, read_wav, write_csv, write_spec, write_wav, SignalKind, SignalSpec, WavFormat};
use spectro_core::kernels::CqtConfig;
use spectro_core::transforms::{Cqt, CqtOptions, MelParams, MelSpectrogram, Stft, StftParams};
use spectro_core::{Signal, Spectrogram};

use crate::{CqtArgs, Failure, GenArgs, IoArgs, LayerArg, MelArgs, OutFormat, StftArgs, TrainArgs, WavFormatArg};

/// Parse a flag value with the core's `FromStr`, reporting a usage error.
fn flag<T>(name: &str, value: &str) -> Result<T, Failure>
where
    T: FromStr<Err = spectro_core::Error>,
{
    value
        .parse()
        .map_err(|e| Failure::usage(anyhow::anyhow!("--{name}: {e}")))
}

fn load(io: &IoArgs) -> Result<Signal, Failure> {
    let x = read_wav(&io.input)
        .with_context(|| format!("reading {}", io.input.display()))
        .map_err(Failure::data)?;
    if io.skip_samples == 0 {
        return Ok(x);
    }
    let rate = x.sample_rate();
    let samples = x.into_samples();
    let kept = samples.get(io.skip_samples..).unwrap_or_default().to_vec();
    Signal::new(kept, rate).map_err(Failure::data)
}

fn save(io: &IoArgs, spec: &Spectrogram) -> Result<(), Failure> {
    let result = match io.format {
        OutFormat::Spec => write_spec(&io.output, spec, io.dtype.into()),
        OutFormat::Csv => File::create(&io.output)
            .map_err(spectro_core::Error::from)
            .and_then(|f| write_csv(BufWriter::new(f), spec)),
    };
    result
        .with_context(|| format!("writing {}", io.output.display()))
        .map_err(Failure::data)?;
    log::info!(
        "wrote {} bins x {} frames to {}",
        spec.n_bins(),
        spec.n_frames(),
        io.output.display()
    );
    Ok(())
}

pub fn stft(a: &StftArgs) -> Result<(), Failure> {
    let x = load(&a.io)?;
    let params = StftParams {
        sample_rate: x.sample_rate(),
        n_fft: a.n_fft,
        freq_bins: a.freq_bins,
        hop_length: a.frame.hop_length,
        window: flag("window", &a.frame.window)?,
        freq_scale: flag("freq-scale", &a.freq_scale)?,
        center: !a.frame.no_center,
        pad_mode: flag("pad-mode", &a.frame.pad_mode)?,
        fmin: a.fmin,
        fmax: a.fmax,
        output: flag("output-format", &a.frame.output_format)?,
    };
    let t = Stft::new(params).map_err(Failure::usage)?;
    let spec = t.transform(&x).map_err(Failure::data)?;
    save(&a.io, &spec)
}

pub fn melspec(a: &MelArgs) -> Result<(), Failure> {
    let x = load(&a.io)?;
    let params = MelParams {
        sample_rate: x.sample_rate(),
        n_fft: a.n_fft,
        n_mels: a.n_mels,
        hop_length: a.hop_length,
        window: flag("window", &a.window)?,
        center: !a.no_center,
        pad_mode: flag("pad-mode", &a.pad_mode)?,
        htk: a.htk,
        fmin: a.fmin,
        fmax: a.fmax,
        norm: flag("norm", &a.norm)?,
        power: a.power,
    };
    let t = MelSpectrogram::new(params).map_err(Failure::usage)?;
    let spec = t.transform(&x).map_err(Failure::data)?;
    save(&a.io, &spec)
}

pub fn cqt(a: &CqtArgs) -> Result<(), Failure> {
    let x = load(&a.io)?;
    let cfg = CqtConfig {
        window: flag("window", &a.window)?,
        norm: flag("norm", &a.norm)?,
        fmax: a.fmax,
        ..CqtConfig::new(x.sample_rate(), a.fmin, a.n_bins, a.bins_per_octave, a.hop_length)
    };
    let options = CqtOptions {
        output: flag("output-format", &a.output_format)?,
        pad_mode: flag("pad-mode", &a.pad_mode)?,
        early_downsample: !a.no_early_downsample,
        ..CqtOptions::default()
    };
    let t = Cqt::with_options(cfg, a.algo, options).map_err(Failure::usage)?;
    let spec = t.transform(&x).map_err(Failure::data)?;
    save(&a.io, &spec)
}

pub fn gen(a: &GenArgs) -> Result<(), Failure> {
    let kind: SignalKind = flag("kind", &a.kind)?;
    let spec = SignalSpec {
        kind,
        f0: a.f0,
        f1: a.f1,
        freqs: a.freqs.clone(),
        duration: a.duration,
        sample_rate: a.sample_rate,
        phase: a.phase,
        amplitude: a.amplitude,
        seed: a.seed,
    };
    let x = gen_signal(&spec).map_err(Failure::usage)?;
    let format = match a.wav_format {
        WavFormatArg::Pcm16 => WavFormat::Pcm16,
        WavFormatArg::Float32 => WavFormat::Float32,
    };
    write_wav(&a.output, &x, format)
        .with_context(|| format!("writing {}", a.output.display()))
        .map_err(Failure::data)
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::data)
}

pub fn train_demo(a: &TrainArgs) -> Result<(), Failure> {
    let ds_cfg = SineDatasetConfig {
        f_lo: a.f_lo,
        f_hi: a.f_hi,
        step: a.step,
        phases: a.phases,
        sample_rate: a.sample_rate,
        length: a.length,
        seed: a.seed,
        ..SineDatasetConfig::default()
    };
    let ds = gen_sine_dataset_with(&ds_cfg).map_err(Failure::usage)?;
    let trainable = !a.frozen;
    let mut layer = match a.layer {
        LayerArg::Stft => {
            let stft = Stft::new(StftParams {
                sample_rate: a.sample_rate,
                n_fft: a.n_fft,
                hop_length: a.hop_length,
                ..StftParams::default()
            })
            .map_err(Failure::usage)?;
            TrainableLayer::stft(&stft, trainable)
        }
        LayerArg::Mel => {
            let mel = MelSpectrogram::new(MelParams {
                sample_rate: a.sample_rate,
                n_fft: a.n_fft,
                n_mels: a.n_mels,
                hop_length: a.hop_length,
                ..MelParams::default()
            })
            .map_err(Failure::usage)?;
            TrainableLayer::mel(&mel, trainable)
        }
    }
    .map_err(Failure::usage)?;
    let mut predictor = LinearPredictor::zeros(layer.n_outputs() * layer.n_frames(a.length));
    let cfg = TrainConfig {
        epochs: a.epochs,
        lr: a.lr,
        batch_size: a.batch_size,
        seed: a.seed,
        feature_scale: None,
    };
    let history = train_frequency_predictor(&ds, &mut layer, &mut predictor, &cfg).map_err(Failure::data)?;
    let csv = history.to_csv();
    match &a.out {
        Some(path) => write_text(path, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = &a.kernels_out {
        let mut text = String::from("row,col,re,im\n");
        for ((r, c), v) in layer.re.indexed_iter() {
            text.push_str(&format!("{r},{c},{v},{}\n", layer.im[[r, c]]));
        }
        write_text(path, &text)?;
    }
    if let (Some(tr), Some(te)) = (history.final_train(), history.final_test()) {
        let mut err = std::io::stderr().lock();
        let _ = writeln!(
            err,
            "{} layer ({}): final train mse {tr:.6}, test mse {te:.6}",
            match a.layer {
                LayerArg::Stft => "stft",
                LayerArg::Mel => "mel",
            },
            if trainable { "trainable" } else { "frozen" }
        );
    }
    Ok(())
}
