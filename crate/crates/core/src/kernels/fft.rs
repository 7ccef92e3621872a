use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Iterative radix-2 FFT. The inverse is scaled by `1/N`.
pub fn fft(v: &[Complex64], inverse: bool) -> Result<Vec<Complex64>> {
    let mut out = v.to_vec();
    fft_in_place(&mut out, inverse)?;
    Ok(out)
}

pub fn fft_in_place(buf: &mut [Complex64], inverse: bool) -> Result<()> {
    let n = buf.len();
    if n == 0 || !n.is_power_of_two() {
        return invalid(format!("FFT length must be a power of two, got {n}"));
    }
    if n == 1 {
        return Ok(());
    }

    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            buf.swap(i, j);
        }
    }

    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        // Twiddles computed directly per stage rather than by recurrence,
        // which would accumulate rounding error over long transforms.
        let twiddles: Vec<Complex64> = (0..half)
            .map(|k| Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / len as f64))
            .collect();
        for chunk in buf.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((a, b), w) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let t = *b * w;
                *b = *a - t;
                *a += t;
            }
        }
        len <<= 1;
    }

    if inverse {
        let scale = 1.0 / n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
    }
    Ok(())
}

/// Direct `O(N^2)` evaluation of `X[k] = sum_n x[n] e^{-2 pi i k n / N}`.
///
/// The phase index `k*n` is reduced modulo `N` before the trig call so large
/// transforms keep full precision.
pub fn dft_naive(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(i, v)| {
                    let idx = (k as u128 * i as u128 % n as u128) as f64;
                    v * Complex64::from_polar(1.0, -2.0 * PI * idx / n as f64)
                })
                .sum()
        })
        .collect()
}

pub fn next_power_of_two(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn impulse_examples() {
        let out = fft(&[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)], false).unwrap();
        assert!(close(&out, &[c(1., 0.); 4], 1e-15));
        let out = fft(&[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)], false).unwrap();
        assert!(close(&out, &[c(1., 0.), c(0., -1.), c(-1., 0.), c(0., 1.)], 1e-15));
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(fft(&[c(1., 0.); 6], false).is_err());
        assert!(fft(&[], false).is_err());
        assert_eq!(fft(&[c(2., 1.)], true).unwrap(), vec![c(2., 1.)]);
    }

    #[test]
    fn round_trip_and_naive_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2usize, 8, 64, 512] {
            let v: Vec<Complex64> = (0..n)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let f = fft(&v, false).unwrap();
            let back = fft(&f, true).unwrap();
            assert!(close(&back, &v, 1e-12));
            let naive = dft_naive(&v);
            let scale = naive.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(close(&f, &naive, 1e-10 * scale));
        }
    }

    #[test]
    fn naive_dft_cosine_orthogonality() {
        let x: Vec<Complex64> = (0..8)
            .map(|n| c((2.0 * PI * 2.0 * n as f64 / 8.0).cos(), 0.0))
            .collect();
        let out = dft_naive(&x);
        for (k, v) in out.iter().enumerate() {
            let expect = if k == 2 || k == 6 { c(4.0, 0.0) } else { c(0.0, 0.0) };
            assert!((v - expect).norm() < 1e-12, "bin {k}: {v}");
        }
        assert!(dft_naive(&[c(0., 0.); 5]).iter().all(|z| z.norm() == 0.0));
    }
}
