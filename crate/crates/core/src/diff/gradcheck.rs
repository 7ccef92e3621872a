use ndarray::Array2;

/// Largest relative error between `analytic` and a central difference of `f`
/// over the sampled entries: `|a - fd| / (|a| + 1e-12)`.
pub fn finite_diff_check<F>(mut f: F, analytic: &Array2<f64>, theta: &Array2<f64>, indices: &[(usize, usize)], eps: f64) -> f64
where
    F: FnMut(&Array2<f64>) -> f64,
{
    let mut probe = theta.clone();
    let mut worst = 0.0f64;
    for &ix in indices {
        let orig = probe[ix];
        probe[ix] = orig + eps;
        let up = f(&probe);
        probe[ix] = orig - eps;
        let down = f(&probe);
        probe[ix] = orig;
        let fd = (up - down) / (2.0 * eps);
        let a = analytic[ix];
        worst = worst.max((a - fd).abs() / (a.abs() + 1e-12));
    }
    worst
}
