use ndarray::{Array2, ArrayView2, ShapeBuilder};

use crate::error::{invalid, Result};

/// Output of a strided convolution: one row per kernel, one column per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMatrix {
    pub values: Array2<f64>,
    pub hop: usize,
}

impl FrameMatrix {
    pub fn n_rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_frames(&self) -> usize {
        self.values.ncols()
    }
}

/// Number of complete length-`m` frames at offsets `0, stride, 2*stride, ...`.
pub fn frame_count(len: usize, m: usize, stride: usize) -> usize {
    if m > len || stride == 0 {
        0
    } else {
        1 + (len - m) / stride
    }
}

/// Zero-copy `m x frames` view whose column `t` is `x[t*stride .. t*stride + m]`.
pub(crate) fn frames_view(x: &[f64], m: usize, stride: usize) -> ArrayView2<'_, f64> {
    let t = frame_count(x.len(), m, stride);
    if t == 0 {
        return ArrayView2::from_shape((m, 0), &[]).expect("empty view");
    }
    ArrayView2::from_shape((m, t).strides((1, stride)), x).expect("frame view within bounds")
}

/// Slides every kernel row over `x` with the given stride.
///
/// `out[r][t] = sum_m x[t*stride + m] * kernels[r][m]` (cross-correlation, so
/// kernels are stored in natural index order).
pub fn conv1d_strided(x: &[f64], kernels: ArrayView2<'_, f64>, stride: usize) -> Result<FrameMatrix> {
    let (rows, m) = kernels.dim();
    if rows == 0 || m == 0 {
        return invalid("kernel set is empty");
    }
    if stride == 0 {
        return invalid("stride must be at least 1");
    }
    if m > x.len() {
        return invalid(format!(
            "kernel length {m} exceeds signal length {}; pad the signal first",
            x.len()
        ));
    }
    let frames = frames_view(x, m, stride);
    Ok(FrameMatrix {
        values: kernels.dot(&frames),
        hop: stride,
    })
}
