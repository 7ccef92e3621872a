//! Quick oracle checks bundled with the binary.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use spectro_core::diff::{finite_diff_check, TrainableLayer};
use spectro_core::io::{decode_spec, encode_spec, encode_wav, gen_signal, parse_wav, SignalSpec, SpecDtype, WavFormat};
use spectro_core::kernels::{build_mel_filter_bank, dft_naive, fft, CqtConfig, MelFormula, MelNorm};
use spectro_core::signal::{design_lowpass_fir, WindowKind};
use spectro_core::transforms::{Cqt, CqtAlgorithm, CqtOptions, SpecKind, Stft, StftParams};
use spectro_core::Signal;

use crate::Failure;

type Check = Result<(), String>;

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn fft_round_trip() -> Check {
    let v: Vec<Complex64> = (0..64).map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos())).collect();
    let back = fft(&fft(&v, false).map_err(err)?, true).map_err(err)?;
    let worst = v.iter().zip(&back).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    ensure(worst < 1e-12, || format!("round-trip error {worst:e}"))?;
    let fast = fft(&v, false).map_err(err)?;
    let slow = dft_naive(&v);
    let worst = fast.iter().zip(&slow).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    ensure(worst < 1e-10, || format!("fft vs naive DFT error {worst:e}"))
}

fn stft_matches_naive_dft() -> Check {
    let (n, hop, sr) = (128usize, 32usize, 8000.0);
    let stft = Stft::new(StftParams {
        sample_rate: sr,
        n_fft: n,
        hop_length: hop,
        output: SpecKind::Complex,
        ..StftParams::default()
    })
    .map_err(err)?;
    let x = gen_signal(&SignalSpec::multi_tone(vec![97.0, 1234.5, 3210.0], 0.2, sr, 3)).map_err(err)?;
    let spec = stft.transform(&x).map_err(err)?;
    let c = spec.complex().ok_or("expected complex output")?;
    let padded = spectro_core::signal::pad_slice(x.samples(), Default::default(), n / 2, n / 2).map_err(err)?;
    let w = stft.window().values();
    let mut worst = 0.0f64;
    let mut peak = 0.0f64;
    for t in 0..c.ncols() {
        let frame: Vec<Complex64> = (0..n).map(|m| Complex64::new(padded[t * hop + m] * w[m], 0.0)).collect();
        let reference = dft_naive(&frame);
        for k in 0..c.nrows() {
            worst = worst.max((c[[k, t]] - reference[k]).norm());
            peak = peak.max(reference[k].norm());
        }
    }
    ensure(worst / peak < 1e-10, || format!("relative error {:e}", worst / peak))
}

fn mel_table() -> Check {
    let bank = build_mel_filter_bank(1000.0, 128, 4, 0.0, 500.0, MelFormula::Htk, MelNorm::Area).map_err(err)?;
    let expected = [Some((1, 21)), Some((11, 34)), Some((22, 48)), Some((35, 64))];
    ensure(bank.supports() == expected, || format!("supports {:?}", bank.supports()))
}

fn cqt_parseval() -> Check {
    let cfg = CqtConfig::new(8000.0, 110.0, 36, 12, 128);
    let opts = CqtOptions {
        output: SpecKind::Complex,
        ..CqtOptions::default()
    };
    let x = gen_signal(&SignalSpec::log_sweep(100.0, 3000.0, 0.5, 8000.0)).map_err(err)?;
    let a = Cqt::with_options(cfg.clone(), CqtAlgorithm::Cqt1992, opts.clone()).map_err(err)?.complex(&x).map_err(err)?;
    let b = Cqt::with_options(cfg, CqtAlgorithm::Cqt1992v2, opts).map_err(err)?.complex(&x).map_err(err)?;
    let peak = b.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let worst = a.iter().zip(&b).fold(0.0f64, |m, (p, q)| m.max((p - q).norm()));
    ensure(worst / peak < 1e-9, || format!("relative error {:e}", worst / peak))
}

fn antialias_filter() -> Check {
    let fir = design_lowpass_fir(255, 0.5, WindowKind::Hamming).map_err(err)?;
    let dc = fir.response_at(0.0).norm();
    ensure((dc - 1.0).abs() < 1e-6, || format!("DC gain {dc}"))?;
    let stop = 20.0 * fir.response_at(0.55 * PI).norm().log10();
    ensure(stop <= -50.0, || format!("{stop:.1} dB at 0.55 Nyquist"))
}

fn file_round_trips() -> Check {
    let values = Array2::from_shape_fn((3, 4), |(b, t)| (b as f64 + 1.0) / (t as f64 + 3.0));
    let spec = spectro_core::Spectrogram::new(
        SpecKind::Magnitude,
        spectro_core::transforms::SpecData::Real(values),
        vec![],
        128,
        8000.0,
    )
    .map_err(err)?;
    let back = decode_spec(&encode_spec(&spec, SpecDtype::F64).map_err(err)?).map_err(err)?;
    ensure(back == spec, || "SpecFile round trip changed the data".into())?;
    let x = Signal::new((0..200).map(|i| (i as f64 * 0.05).sin() * 0.8).collect(), 8000.0).map_err(err)?;
    let y = parse_wav(&encode_wav(&x, WavFormat::Pcm16).map_err(err)?).map_err(err)?;
    let worst = x.samples().iter().zip(y.samples()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    ensure(worst <= 1.0 / 32768.0, || format!("WAV round trip error {worst:e}"))
}

fn stft_kernel_gradient() -> Check {
    let stft = Stft::new(StftParams {
        sample_rate: 8000.0,
        n_fft: 32,
        hop_length: 16,
        ..StftParams::default()
    })
    .map_err(err)?;
    let layer = TrainableLayer::stft(&stft, true).map_err(err)?;
    let x = gen_signal(&SignalSpec::multi_tone(vec![300.0, 1700.0], 0.03, 8000.0, 1)).map_err(err)?;
    let fwd = layer.forward(x.samples()).map_err(err)?;
    let grads = layer.vjp(&fwd, Array2::ones(fwd.output.dim()).view(), false).map_err(err)?;
    let idx = [(1, 3), (4, 10), (9, 17), (16, 31)];
    let rel = finite_diff_check(
        |re| {
            let probe = TrainableLayer { re: re.clone(), ..layer.clone() };
            probe.forward(x.samples()).map(|f| f.output.sum()).unwrap_or(f64::NAN)
        },
        &grads.re,
        &layer.re,
        &idx,
        1e-6,
    );
    ensure(rel < 1e-6, || format!("relative error {rel:e}"))
}

pub fn run() -> Result<(), Failure> {
    let checks: [(&str, fn() -> Check); 7] = [
        ("fft round trip and naive DFT agreement", fft_round_trip),
        ("convolution STFT equals per-frame DFT", stft_matches_naive_dft),
        ("HTK mel filter supports", mel_table),
        ("CQT frequency-domain route equals direct kernels", cqt_parseval),
        ("antialiasing filter DC gain and stopband", antialias_filter),
        ("SpecFile and WAV round trips", file_round_trips),
        ("STFT kernel gradient against finite differences", stft_kernel_gradient),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(()) => println!("PASS {name}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        return Err(Failure::Selftest(failed));
    }
    Ok(())
}
