//! Message-passing layers with hand-written backward passes, a gradient
//! checker and an Adam trainer for binary graph classification.

mod grad;
mod layers;
mod mlp;
mod model;
mod tensor;
mod train;

pub use grad::{grad_check, grad_check_input, grad_check_layer, pooled_mse, FD_STEP};
pub use layers::{
    AttentionBias, BaseKind, GraphContext, Layer, MessageWeights, MpLayer, SoftmaxAxis, Trans,
    TRANS_HIDDEN,
};
pub use mlp::{Linear, Mlp, Parameters};
pub use model::{cross_entropy, Classifier, ModelKind, NUM_CLASSES, NUM_LAYERS};
pub use tensor::DenseTensor;
pub use train::{
    accuracy, prepare_samples, train_classifier, train_model, Adam, EpochLog, Sample, TrainConfig,
    TrainReport,
};
