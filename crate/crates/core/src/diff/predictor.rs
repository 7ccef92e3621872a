use ndarray::{Array1, ArrayView1};

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// One sigmoid unit over a flattened spectrogram.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPredictor {
    pub weights: Array1<f64>,
    pub bias: f64,
}

impl LinearPredictor {
    /// All-zero weights, so every initial prediction is 0.5.
    pub fn zeros(n_features: usize) -> Self {
        Self {
            weights: Array1::zeros(n_features),
            bias: 0.0,
        }
    }

    pub fn n_features(&self) -> usize {
        self.weights.len()
    }

    pub fn predict(&self, features: ArrayView1<'_, f64>) -> f64 {
        sigmoid(self.weights.dot(&features) + self.bias)
    }

    /// `dL/dz` for a squared error `(p - y)^2 / batch` at prediction `p`.
    pub fn output_grad(prediction: f64, target: f64, batch: usize) -> f64 {
        2.0 * (prediction - target) / batch as f64 * prediction * (1.0 - prediction)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn prediction_is_in_open_unit_interval() {
        let p = LinearPredictor {
            weights: array![30.0, -30.0],
            bias: 0.0,
        };
        assert_eq!(LinearPredictor::zeros(2).predict(array![5.0, 1.0].view()), 0.5);
        let hi = p.predict(array![1.0, 0.0].view());
        let lo = p.predict(array![0.0, 1.0].view());
        assert!(hi < 1.0 && hi > 0.99);
        assert!(lo > 0.0 && lo < 0.01);
    }

    #[test]
    fn output_grad_matches_difference() {
        let (z, y, eps) = (0.3, 0.8, 1e-6);
        let loss = |z: f64| (sigmoid(z) - y).powi(2) / 4.0;
        let fd = (loss(z + eps) - loss(z - eps)) / (2.0 * eps);
        assert!((LinearPredictor::output_grad(sigmoid(z), y, 4) - fd).abs() < 1e-9);
    }
}
