use ndarray::{Array2, ArrayView2, Zip};

use crate::error::{invalid, Result};
use crate::kernels::{build_cqt_kernels, CqtConfig, KernelDomain};
use crate::signal::{frames_view, reflect_index, PadMode};
use crate::transforms::{frame_input, frame_total, MelSpectrogram, Stft};

/// Default magnitude smoothing, `S = sqrt(re^2 + im^2 + eps)`.
pub const EPS_MAG: f64 = 1e-12;

/// A spectrogram front end whose kernels are ordinary parameter matrices.
///
/// The forward pass is `S = sqrt(conv(x, h_re)^2 + conv(x, h_im)^2 + eps)`,
/// optionally followed by a filter bank `M = W S`. With `trainable` unset,
/// [`TrainableLayer::apply`] leaves every parameter untouched.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainableLayer {
    pub re: Array2<f64>,
    pub im: Array2<f64>,
    pub mel: Option<Array2<f64>>,
    pub hop: usize,
    pub center: bool,
    pub pad_mode: PadMode,
    pub eps_mag: f64,
    pub trainable: bool,
}

/// Intermediate values of one forward pass, kept for the backward pass.
#[derive(Debug, Clone)]
pub struct Forward {
    /// Frames as columns, kernel_len x frames.
    pub frames: Array2<f64>,
    pub re: Array2<f64>,
    pub im: Array2<f64>,
    pub magnitude: Array2<f64>,
    /// `magnitude`, or the filter-bank output when a bank is present.
    pub output: Array2<f64>,
    input_len: usize,
}

/// Gradients of a scalar loss with respect to every layer parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerGrads {
    pub re: Array2<f64>,
    pub im: Array2<f64>,
    pub mel: Option<Array2<f64>>,
    pub input: Option<Vec<f64>>,
}

impl LayerGrads {
    pub fn zeros_like(layer: &TrainableLayer) -> Self {
        Self {
            re: Array2::zeros(layer.re.dim()),
            im: Array2::zeros(layer.im.dim()),
            mel: layer.mel.as_ref().map(|w| Array2::zeros(w.dim())),
            input: None,
        }
    }

    /// `self += other`, parameters only.
    pub fn accumulate(&mut self, other: &LayerGrads) {
        self.re += &other.re;
        self.im += &other.im;
        if let (Some(a), Some(b)) = (self.mel.as_mut(), other.mel.as_ref()) {
            *a += b;
        }
    }
}

impl TrainableLayer {
    pub fn from_kernels(re: Array2<f64>, im: Array2<f64>, hop: usize, center: bool, trainable: bool) -> Result<Self> {
        if re.dim() != im.dim() || re.ncols() == 0 {
            return invalid(format!("kernel shapes {:?} and {:?} differ or are empty", re.dim(), im.dim()));
        }
        if hop == 0 {
            return invalid("hop must be positive");
        }
        Ok(Self {
            re,
            im,
            mel: None,
            hop,
            center,
            pad_mode: PadMode::Reflect,
            eps_mag: EPS_MAG,
            trainable,
        })
    }

    /// Magnitude STFT layer initialised from the transform's kernels.
    pub fn stft(stft: &Stft, trainable: bool) -> Result<Self> {
        let p = stft.params();
        let bank = stft.kernels();
        let mut layer = Self::from_kernels(bank.re.clone(), bank.im.clone(), p.hop_length, p.center, trainable)?;
        layer.pad_mode = p.pad_mode;
        Ok(layer)
    }

    /// Mel layer: STFT kernels followed by the triangular filter bank, both
    /// trainable together.
    pub fn mel(mel: &MelSpectrogram, trainable: bool) -> Result<Self> {
        let mut layer = Self::stft(mel.stft(), trainable)?;
        layer.mel = Some(mel.filter_bank().weights.clone());
        Ok(layer)
    }

    /// Magnitude CQT layer from the direct (time-domain) kernels.
    pub fn cqt(cfg: &CqtConfig, trainable: bool) -> Result<Self> {
        let bank = build_cqt_kernels(cfg, KernelDomain::Time)?;
        let (re, im) = bank.split_time_kernels();
        Self::from_kernels(re, im, cfg.hop_length, true, trainable)
    }

    pub fn kernel_len(&self) -> usize {
        self.re.ncols()
    }

    pub fn n_outputs(&self) -> usize {
        self.mel.as_ref().map_or(self.re.nrows(), |w| w.nrows())
    }

    pub fn n_frames(&self, len: usize) -> usize {
        frame_total(len, self.kernel_len(), self.hop, self.center)
    }

    pub fn forward(&self, x: &[f64]) -> Result<Forward> {
        let n = self.kernel_len();
        let framed = frame_input(x, n, self.center, self.pad_mode)?;
        let frames = frames_view(&framed, n, self.hop).to_owned();
        self.forward_frames(frames, x.len())
    }

    fn forward_frames(&self, frames: Array2<f64>, input_len: usize) -> Result<Forward> {
        let re = self.re.dot(&frames);
        let im = self.im.dot(&frames);
        let eps = self.eps_mag;
        let magnitude = Zip::from(&re).and(&im).map_collect(|r, i| (r * r + i * i + eps).sqrt());
        let output = match &self.mel {
            Some(w) => {
                if w.ncols() != magnitude.nrows() {
                    return invalid(format!(
                        "filter bank expects {} bins, kernels produce {}",
                        w.ncols(),
                        magnitude.nrows()
                    ));
                }
                w.dot(&magnitude)
            }
            None => magnitude.clone(),
        };
        Ok(Forward {
            frames,
            re,
            im,
            magnitude,
            output,
            input_len,
        })
    }

    /// Vector-Jacobian product: pulls `upstream = dL/d output` back to every
    /// parameter and, if asked, to the input signal.
    pub fn vjp(&self, fwd: &Forward, upstream: ArrayView2<'_, f64>, with_input: bool) -> Result<LayerGrads> {
        if upstream.dim() != fwd.output.dim() {
            return invalid(format!(
                "upstream gradient shape {:?} does not match output shape {:?}",
                upstream.dim(),
                fwd.output.dim()
            ));
        }
        let (d_mag, d_mel) = match &self.mel {
            Some(w) => (w.t().dot(&upstream), Some(upstream.dot(&fwd.magnitude.t()))),
            None => (upstream.to_owned(), None),
        };
        let d_re = Zip::from(&d_mag).and(&fwd.re).and(&fwd.magnitude).map_collect(|g, r, s| g * r / s);
        let d_im = Zip::from(&d_mag).and(&fwd.im).and(&fwd.magnitude).map_collect(|g, i, s| g * i / s);
        let input = with_input.then(|| self.input_grad(fwd, &d_re, &d_im));
        Ok(LayerGrads {
            re: d_re.dot(&fwd.frames.t()),
            im: d_im.dot(&fwd.frames.t()),
            mel: d_mel,
            input,
        })
    }

    fn input_grad(&self, fwd: &Forward, d_re: &Array2<f64>, d_im: &Array2<f64>) -> Vec<f64> {
        let d_frames = self.re.t().dot(d_re) + self.im.t().dot(d_im);
        let n = self.kernel_len();
        let left = if self.center { n / 2 } else { 0 };
        let len = fwd.input_len;
        let mut grad = vec![0.0; len];
        for ((m, t), g) in d_frames.indexed_iter() {
            let pos = (t * self.hop + m) as isize - left as isize;
            if let Some(i) = reflect_index(pos, len, self.pad_mode) {
                grad[i] += g;
            }
        }
        grad
    }

    /// Plain gradient step `theta -= lr * grad`, skipped when frozen.
    pub fn apply(&mut self, grads: &LayerGrads, lr: f64) {
        if !self.trainable {
            return;
        }
        self.re.scaled_add(-lr, &grads.re);
        self.im.scaled_add(-lr, &grads.im);
        if let (Some(w), Some(g)) = (self.mel.as_mut(), grads.mel.as_ref()) {
            w.scaled_add(-lr, g);
        }
    }
}
