//! Gradients of spectrogram layers with respect to their kernels, and a small
//! frequency-regression experiment that trains through them.

mod dataset;
mod gradcheck;
mod layer;
mod predictor;
mod train;

pub use dataset::{gen_sine_dataset, gen_sine_dataset_with, SineDataset, SineDatasetConfig, SineExample};
pub use gradcheck::finite_diff_check;
pub use layer::{Forward, LayerGrads, TrainableLayer, EPS_MAG};
pub use predictor::LinearPredictor;
pub use train::{train_frequency_predictor, LossHistory, TrainConfig};
