use std::path::Path;
use std::process::{Command, Output};

use spectro_core::io::read_spec;

fn spectro(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectro")).current_dir(dir).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn stft_of_generated_tone_has_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&spectro(&["gen", "pure-tone", "tone.wav", "--f0", "440", "--duration", "1", "--sr", "22050"], d)), 0);
    assert_eq!(code(&spectro(&["stft", "tone.wav", "tone.spec", "--n-fft", "2048", "--hop", "512"], d)), 0);
    let spec = read_spec(d.join("tone.spec")).unwrap();
    assert_eq!(spec.n_bins(), 1025);
    assert_eq!(spec.n_frames(), 1 + 22050 / 512);
    let peak = spec.argmax_track()[20];
    assert_eq!(peak, (440.0f64 * 2048.0 / 22050.0).round() as usize);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&spectro(&["gen", "multi-tone", "m.wav", "--freqs", "220,330,550", "--duration", "0.5", "--seed", "3"], d)), 0);
    for (cmd, extra) in [("stft", vec![]), ("melspec", vec!["--n-mels", "40"]), ("cqt", vec!["--algo", "2010", "--fmin", "55", "--n-bins", "48"])] {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let name = format!("{cmd}{run}.csv");
            let mut args = vec![cmd, "m.wav", name.as_str(), "--format", "csv"];
            args.extend(&extra);
            assert_eq!(code(&spectro(&args, d)), 0, "{cmd}");
            outputs.push(std::fs::read(d.join(&name)).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{cmd}");
    }
}

#[test]
fn exit_codes_separate_usage_and_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&spectro(&["--help"], d)), 0);
    assert_eq!(code(&spectro(&["--bogus"], d)), 1);
    assert_eq!(code(&spectro(&["stft", "missing.wav", "out.spec"], d)), 2);
    std::fs::write(d.join("junk.wav"), b"not a wav file").unwrap();
    assert_eq!(code(&spectro(&["stft", "junk.wav", "out.spec"], d)), 2);
    assert_eq!(code(&spectro(&["gen", "pure-tone", "t.wav", "--f0", "100", "--duration", "0.1"], d)), 0);
    assert_eq!(code(&spectro(&["stft", "t.wav", "out.spec", "--window", "triangle"], d)), 1);
    assert_eq!(code(&spectro(&["stft", "t.wav", "out.spec", "--hop", "0"], d)), 1);
    assert_eq!(code(&spectro(&["cqt", "t.wav", "out.spec", "--algo", "2010", "--hop", "100"], d)), 1);
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = spectro(&["selftest"], dir.path());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
}
