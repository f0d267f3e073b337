//! Neural Exploitability Descent: a small ReLU network with a legal-action
//! softmax head, trained by explicit backpropagation of the baseline loss.

mod ed;
mod loss;
mod mlp;

use thiserror::Error;

pub use ed::{InputEncoding, NeuralConfig, NeuralEd};
pub use loss::{baselines, loss, loss_gradient, loss_with_baselines, regularization, Sample};
pub use mlp::{masked_softmax, Architecture, ForwardCache, Gradients, InitScheme, Layer, Mlp};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NeuralError {
    #[error("no legal actions to choose from")]
    NoLegalActions,
    #[error("network shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite parameter")]
    NonFinite,
    #[error("bad checkpoint: {0}")]
    Checkpoint(String),
}
