use ndarray::{Array1, Array2};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dataset::SineDataset;
use super::layer::{LayerGrads, TrainableLayer};
use super::predictor::LinearPredictor;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub lr: f64,
    pub batch_size: usize,
    /// Seeds the per-epoch shuffle.
    pub seed: u64,
    /// Multiplier applied to the layer output before the predictor. `None`
    /// picks the reciprocal of the mean feature-vector L2 norm of the
    /// training set under the initial kernels.
    pub feature_scale: Option<f64>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 30,
            lr: 0.01,
            batch_size: 32,
            seed: 42,
            feature_scale: None,
        }
    }
}

/// Mean squared error after each epoch, on normalized targets.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LossHistory {
    pub train_mse: Vec<f64>,
    pub test_mse: Vec<f64>,
}

impl LossHistory {
    pub fn final_train(&self) -> Option<f64> {
        self.train_mse.last().copied()
    }

    pub fn final_test(&self) -> Option<f64> {
        self.test_mse.last().copied()
    }

    /// `epoch,train_mse,test_mse` rows, epochs counted from 1.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,train_mse,test_mse\n");
        for (i, (a, b)) in self.train_mse.iter().zip(&self.test_mse).enumerate() {
            out.push_str(&format!("{},{a},{b}\n", i + 1));
        }
        out
    }
}

fn flat(output: Array2<f64>, scale: f64) -> Array1<f64> {
    let n = output.len();
    output.into_shape_with_order(n).expect("contiguous output") * scale
}

/// Cached features of a frozen layer, or nothing when kernels keep moving.
struct FeatureCache(Option<Vec<Array1<f64>>>);

impl FeatureCache {
    fn features(&self, layer: &TrainableLayer, ds: &SineDataset, i: usize, scale: f64) -> Result<Array1<f64>> {
        match &self.0 {
            Some(cache) => Ok(cache[i].clone()),
            None => Ok(flat(layer.forward(&ds.examples()[i].waveform)?.output, scale)),
        }
    }
}

fn mse(layer: &TrainableLayer, predictor: &LinearPredictor, ds: &SineDataset, idx: &[usize], cache: &FeatureCache, scale: f64) -> Result<f64> {
    let mut total = 0.0;
    for &i in idx {
        let f = cache.features(layer, ds, i, scale)?;
        let err = predictor.predict(f.view()) - ds.examples()[i].target;
        total += err * err;
    }
    Ok(total / idx.len().max(1) as f64)
}

/// Plain mini-batch SGD on `sigmoid(w . vec(layer(x)) + b)` against the
/// normalized frequency. Kernels move only if the layer is trainable.
pub fn train_frequency_predictor(ds: &SineDataset, layer: &mut TrainableLayer, predictor: &mut LinearPredictor, cfg: &TrainConfig) -> Result<LossHistory> {
    if cfg.batch_size == 0 {
        return invalid("batch size must be positive");
    }
    if ds.train_indices().is_empty() {
        return invalid("dataset has no training examples");
    }
    let len = ds.config().length;
    let out_shape = (layer.n_outputs(), layer.n_frames(len));
    let n_features = out_shape.0 * out_shape.1;
    if predictor.n_features() != n_features {
        return invalid(format!(
            "predictor takes {} features, layer produces {n_features}",
            predictor.n_features()
        ));
    }
    let scale = match cfg.feature_scale {
        Some(s) => s,
        None => {
            let mut total = 0.0;
            for &i in ds.train_indices() {
                let f = flat(layer.forward(&ds.examples()[i].waveform)?.output, 1.0);
                total += f.dot(&f).sqrt();
            }
            let mean = total / ds.train_indices().len() as f64;
            if mean > 0.0 { 1.0 / mean } else { 1.0 }
        }
    };
    let cache = if layer.trainable {
        FeatureCache(None)
    } else {
        let mut all = Vec::with_capacity(ds.len());
        for e in ds.examples() {
            all.push(flat(layer.forward(&e.waveform)?.output, scale));
        }
        FeatureCache(Some(all))
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order = ds.train_indices().to_vec();
    let mut history = LossHistory::default();
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(cfg.batch_size) {
            let mut grad_w = Array1::<f64>::zeros(n_features);
            let mut grad_b = 0.0;
            let mut layer_grads = layer.trainable.then(|| LayerGrads::zeros_like(layer));
            for &i in batch {
                let target = ds.examples()[i].target;
                match layer_grads.as_mut() {
                    None => {
                        let f = cache.features(layer, ds, i, scale)?;
                        let dz = LinearPredictor::output_grad(predictor.predict(f.view()), target, batch.len());
                        grad_w.scaled_add(dz, &f);
                        grad_b += dz;
                    }
                    Some(acc) => {
                        let fwd = layer.forward(&ds.examples()[i].waveform)?;
                        let f = flat(fwd.output.clone(), scale);
                        let dz = LinearPredictor::output_grad(predictor.predict(f.view()), target, batch.len());
                        grad_w.scaled_add(dz, &f);
                        grad_b += dz;
                        let upstream = (&predictor.weights * (dz * scale))
                            .into_shape_with_order(out_shape)
                            .expect("feature count checked");
                        acc.accumulate(&layer.vjp(&fwd, upstream.view(), false)?);
                    }
                }
            }
            predictor.weights.scaled_add(-cfg.lr, &grad_w);
            predictor.bias -= cfg.lr * grad_b;
            if let Some(g) = layer_grads {
                layer.apply(&g, cfg.lr);
            }
        }
        history.train_mse.push(mse(layer, predictor, ds, ds.train_indices(), &cache, scale)?);
        history.test_mse.push(mse(layer, predictor, ds, ds.test_indices(), &cache, scale)?);
    }
    Ok(history)
}
