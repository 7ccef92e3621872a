use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;
use spectro_core::io::{decode_spec, encode_spec, encode_wav, gen_signal, parse_wav, read_spec, read_wav, write_csv, write_spec, write_wav, SignalSpec, SpecDtype, WavFormat};
use spectro_core::transforms::{SpecData, SpecKind};
use spectro_core::{Signal, Spectrogram};

fn real_spec(values: Array2<f64>) -> Spectrogram {
    Spectrogram::new(SpecKind::Magnitude, SpecData::Real(values), vec![], 128, 16000.0).unwrap()
}

#[test]
fn spec_files_round_trip_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let values = Array2::from_shape_fn((5, 7), |(i, j)| (i * 7 + j) as f64 * 0.1);
    let spec = real_spec(values.clone());
    let path = dir.path().join("a.spec");
    write_spec(&path, &spec, SpecDtype::F64).unwrap();
    assert_eq!(read_spec(&path).unwrap().data(), spec.data());

    write_spec(&path, &spec, SpecDtype::F32).unwrap();
    let back = read_spec(&path).unwrap();
    let want = values.mapv(|v| f64::from(v as f32));
    assert_eq!(back.real().unwrap(), &want);

    let c = Array2::from_shape_fn((3, 4), |(i, j)| Complex64::new(i as f64, -(j as f64)));
    let spec = Spectrogram::new(SpecKind::Complex, SpecData::Complex(c), vec![], 64, 8000.0).unwrap();
    write_spec(&path, &spec, SpecDtype::F64).unwrap();
    let back = read_spec(&path).unwrap();
    assert_eq!(back.data(), spec.data());
    assert_eq!(back.kind(), SpecKind::Complex);
}

#[test]
fn corrupt_spec_bytes_are_rejected() {
    let bytes = encode_spec(&real_spec(Array2::zeros((2, 2))), SpecDtype::F64).unwrap();
    assert!(decode_spec(&bytes[..bytes.len() - 1]).is_err());
    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(decode_spec(&bad).is_err());
    assert!(decode_spec(&[]).is_err());
}

#[test]
fn wav_files_round_trip_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let x = gen_signal(&SignalSpec::linear_sweep(100.0, 3000.0, 0.25, 16000.0)).unwrap();
    let path = dir.path().join("s.wav");
    write_wav(&path, &x, WavFormat::Pcm16).unwrap();
    let back = read_wav(&path).unwrap();
    assert_eq!(back.sample_rate(), 16000.0);
    assert!(x.samples().iter().zip(back.samples()).all(|(a, b)| (a - b).abs() <= 1.0 / 32768.0));
}

#[test]
fn csv_lists_every_cell() {
    let mut out = Vec::new();
    write_csv(&mut out, &real_spec(Array2::ones((2, 3)))).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "bin,freq_hz,frame,time_s,value");
    assert_eq!(lines.len(), 1 + 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoded_spec_decodes_identically(rows in 1usize..8, cols in 1usize..8, seed in any::<u64>()) {
        let values = Array2::from_shape_fn((rows, cols), |(i, j)| ((seed ^ (i * 31 + j) as u64) % 1000) as f64 / 7.0);
        let spec = real_spec(values);
        let back = decode_spec(&encode_spec(&spec, SpecDtype::F64).unwrap()).unwrap();
        prop_assert_eq!(back.data(), spec.data());
        prop_assert_eq!(back.hop(), 128);
    }

    #[test]
    fn float_wav_round_trip_is_exact(v in prop::collection::vec(-1.0f32..1.0, 1..200)) {
        let x = Signal::new(v.iter().map(|s| f64::from(*s)).collect(), 44100.0).unwrap();
        let back = parse_wav(&encode_wav(&x, WavFormat::Float32).unwrap()).unwrap();
        prop_assert_eq!(back, x);
    }
}
