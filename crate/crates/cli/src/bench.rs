use std::time::Instant;

use spectro_core::io::{gen_signal, SignalSpec};
use spectro_core::kernels::CqtConfig;
use spectro_core::signal::{make_window, WindowKind};
use spectro_core::transforms::{batch_transform, naive_stft_magnitude, thread_count, Cqt, CqtAlgorithm, MelParams, MelSpectrogram, Stft, StftParams, Transform};
use spectro_core::Signal;

use crate::{BenchArgs, BenchTransform, Failure};

/// Deterministic corpus: three seeded random-phase tones per signal.
fn corpus(a: &BenchArgs) -> Result<Vec<Signal>, Failure> {
    let nyquist = a.sample_rate / 2.0;
    (0..a.signals)
        .map(|i| {
            let base = 55.0 * (1.0 + (i % 13) as f64);
            let freqs = vec![base, (base * 2.7).min(nyquist * 0.9), (base * 7.3).min(nyquist * 0.9)];
            let spec = SignalSpec::multi_tone(freqs, a.len as f64 / a.sample_rate, a.sample_rate, a.seed + i as u64);
            gen_signal(&spec).map_err(Failure::usage)
        })
        .collect()
}

fn build(a: &BenchArgs) -> Result<Transform, Failure> {
    let sr = a.sample_rate;
    let t = match a.transform {
        BenchTransform::Stft => Transform::from(
            Stft::new(StftParams {
                sample_rate: sr,
                n_fft: a.n_fft,
                hop_length: a.hop_length,
                ..StftParams::default()
            })
            .map_err(Failure::usage)?,
        ),
        BenchTransform::Mel => Transform::from(
            MelSpectrogram::new(MelParams {
                sample_rate: sr,
                n_fft: a.n_fft,
                hop_length: a.hop_length,
                ..MelParams::default()
            })
            .map_err(Failure::usage)?,
        ),
        BenchTransform::Cqt => {
            let cfg = CqtConfig {
                sample_rate: sr,
                hop_length: a.hop_length,
                ..CqtConfig::default()
            };
            Transform::from(Cqt::new(cfg, CqtAlgorithm::Cqt1992v2).map_err(Failure::usage)?)
        }
    };
    Ok(t)
}

pub fn run(a: &BenchArgs) -> Result<(), Failure> {
    if a.signals == 0 || a.len == 0 {
        return Err(Failure::usage(anyhow::anyhow!("--signals and --len must be positive")));
    }
    let signals = corpus(a)?;
    let transform = build(a)?;

    let start = Instant::now();
    let sequential = signals
        .iter()
        .map(|s| transform.apply(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::data)?;
    let sequential_s = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let batched = batch_transform(&transform, &signals).map_err(Failure::data)?;
    let batch_s = start.elapsed().as_secs_f64();

    let identical = batched == sequential;
    println!("transform: {:?}", a.transform);
    println!("signals: {}", a.signals);
    println!("samples per signal: {}", a.len);
    println!("threads: {}", thread_count());
    println!("batch equals sequential: {identical}");
    if !identical {
        return Err(Failure::data(anyhow::anyhow!("batched output differs from sequential output")));
    }
    println!("conv sequential seconds: {sequential_s:.3}");
    println!("conv batch seconds: {batch_s:.3}");

    if a.transform == BenchTransform::Stft && !a.no_naive {
        let window = make_window(WindowKind::Hann, a.n_fft, true).map_err(Failure::usage)?;
        let start = Instant::now();
        let naive = signals
            .iter()
            .map(|s| naive_stft_magnitude(s.samples(), a.n_fft, a.hop_length, &window, true, Default::default()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(Failure::data)?;
        let naive_s = start.elapsed().as_secs_f64();
        let mut worst = 0.0f64;
        for (n, c) in naive.iter().zip(&batched) {
            let c = c.real().expect("magnitude output");
            let peak = c.iter().fold(0.0f64, |m, v| m.max(*v));
            let diff = n.iter().zip(c).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
            worst = worst.max(diff / peak.max(f64::MIN_POSITIVE));
        }
        println!("naive seconds: {naive_s:.3}");
        println!("naive max relative deviation: {worst:.3e}");
        println!("naive / batch: {:.2}x", naive_s / batch_s);
    }
    Ok(())
}
