use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::neural::NeuralError;
use crate::policy::{softmax, SimplexVector};
use crate::scalar::Real;

/// Layer sizes of a fully-connected network with ReLU hidden layers and a
/// linear output layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    pub inputs: usize,
    pub hidden: Vec<usize>,
    pub outputs: usize,
    pub bias: bool,
}

impl Architecture {
    pub fn new(inputs: usize, hidden: Vec<usize>, outputs: usize) -> Self {
        Architecture {
            inputs,
            hidden,
            outputs,
            bias: true,
        }
    }

    fn widths(&self) -> Vec<usize> {
        let mut w = vec![self.inputs];
        w.extend(&self.hidden);
        w.push(self.outputs);
        w
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitScheme {
    /// Weights uniform in `±1/sqrt(fan_in)`, biases zero.
    #[default]
    FanInUniform,
    Zeros,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer<T> {
    pub inputs: usize,
    pub outputs: usize,
    /// Row-major `outputs × inputs`.
    pub weights: Vec<T>,
    pub bias: Option<Vec<T>>,
}

impl<T: Real> Layer<T> {
    fn num_params(&self) -> usize {
        self.weights.len() + self.bias.as_ref().map_or(0, Vec::len)
    }

    fn apply(&self, x: &[T]) -> Vec<T> {
        let mut out = match &self.bias {
            Some(b) => b.clone(),
            None => vec![T::zero(); self.outputs],
        };
        // Column-wise so that zero inputs (common with bit encodings) are
        // skipped entirely.
        for (j, &xj) in x.iter().enumerate() {
            if xj == T::zero() {
                continue;
            }
            for (o, out_o) in out.iter_mut().enumerate() {
                *out_o = *out_o + self.weights[o * self.inputs + j] * xj;
            }
        }
        out
    }
}

/// Gradient buffers with the same shapes as the network.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradients<T> {
    pub layers: Vec<Layer<T>>,
}

impl<T: Real> Gradients<T> {
    pub fn flat(&self) -> Vec<T> {
        flatten(&self.layers)
    }
}

/// Activations retained from a forward pass for backpropagation.
#[derive(Clone, Debug)]
pub struct ForwardCache<T> {
    /// Input to each layer; post-ReLU for hidden layers.
    pub inputs: Vec<Vec<T>>,
    pub logits: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mlp<T> {
    arch: Architecture,
    layers: Vec<Layer<T>>,
}

fn flatten<T: Real>(layers: &[Layer<T>]) -> Vec<T> {
    let mut out = Vec::new();
    for l in layers {
        out.extend(&l.weights);
        if let Some(b) = &l.bias {
            out.extend(b);
        }
    }
    out
}

impl<T: Real> Mlp<T> {
    pub fn new(arch: Architecture, init: InitScheme, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let widths = arch.widths();
        let layers = widths
            .windows(2)
            .map(|w| {
                let (n_in, n_out) = (w[0], w[1]);
                let bound = 1.0 / (n_in.max(1) as f64).sqrt();
                let weights = (0..n_in * n_out)
                    .map(|_| match init {
                        InitScheme::FanInUniform => rng.gen_range(-bound..=bound),
                        InitScheme::Zeros => 0.0,
                    })
                    .map(|x| T::from_f64(x).expect("f64 converts"))
                    .collect();
                Layer {
                    inputs: n_in,
                    outputs: n_out,
                    weights,
                    bias: arch.bias.then(|| vec![T::zero(); n_out]),
                }
            })
            .collect();
        Mlp { arch, layers }
    }

    pub fn from_layers(arch: Architecture, layers: Vec<Layer<T>>) -> Result<Self, NeuralError> {
        let widths = arch.widths();
        let ok = layers.len() + 1 == widths.len()
            && layers.iter().zip(widths.windows(2)).all(|(l, w)| {
                l.inputs == w[0]
                    && l.outputs == w[1]
                    && l.weights.len() == w[0] * w[1]
                    && l.bias.as_ref().map(Vec::len) == arch.bias.then_some(w[1])
            });
        if !ok {
            return Err(NeuralError::Shape("layers do not match the architecture".into()));
        }
        if flatten(&layers).iter().any(|x| !x.is_finite()) {
            return Err(NeuralError::NonFinite);
        }
        Ok(Mlp { arch, layers })
    }

    pub fn architecture(&self) -> &Architecture {
        &self.arch
    }

    pub fn layers(&self) -> &[Layer<T>] {
        &self.layers
    }

    pub fn num_params(&self) -> usize {
        self.layers.iter().map(Layer::num_params).sum()
    }

    /// All parameters, layer by layer, weights before biases.
    pub fn params(&self) -> Vec<T> {
        flatten(&self.layers)
    }

    pub fn set_params(&mut self, flat: &[T]) {
        assert_eq!(flat.len(), self.num_params());
        let mut it = flat.iter().copied();
        for l in &mut self.layers {
            for w in &mut l.weights {
                *w = it.next().expect("length checked");
            }
            if let Some(b) = &mut l.bias {
                for x in b {
                    *x = it.next().expect("length checked");
                }
            }
        }
    }

    pub fn sum_squares(&self) -> T {
        self.params().iter().map(|&x| x * x).sum()
    }

    pub fn zero_gradients(&self) -> Gradients<T> {
        Gradients {
            layers: self
                .layers
                .iter()
                .map(|l| Layer {
                    inputs: l.inputs,
                    outputs: l.outputs,
                    weights: vec![T::zero(); l.weights.len()],
                    bias: l.bias.as_ref().map(|b| vec![T::zero(); b.len()]),
                })
                .collect(),
        }
    }

    pub fn forward_cached(&self, input: &[T]) -> ForwardCache<T> {
        assert_eq!(input.len(), self.arch.inputs, "input width");
        let mut inputs = Vec::with_capacity(self.layers.len());
        let mut x = input.to_vec();
        let last = self.layers.len() - 1;
        for (k, l) in self.layers.iter().enumerate() {
            let mut y = l.apply(&x);
            if k < last {
                for v in &mut y {
                    *v = v.max(T::zero());
                }
            }
            inputs.push(std::mem::replace(&mut x, y));
        }
        ForwardCache { inputs, logits: x }
    }

    pub fn logits(&self, input: &[T]) -> Vec<T> {
        self.forward_cached(input).logits
    }

    /// Softmax over the logits of the `legal` output slots, in that order.
    pub fn forward(&self, input: &[T], legal: &[usize]) -> Result<SimplexVector<T>, NeuralError> {
        let logits = self.logits(input);
        masked_softmax(&logits, legal)
    }

    /// Accumulates `∂L/∂θ` into `grads` given `∂L/∂logits`.
    pub fn backward(&self, cache: &ForwardCache<T>, grad_logits: &[T], grads: &mut Gradients<T>) {
        let mut delta = grad_logits.to_vec();
        for k in (0..self.layers.len()).rev() {
            let l = &self.layers[k];
            let g = &mut grads.layers[k];
            let x = &cache.inputs[k];
            for (o, &d) in delta.iter().enumerate() {
                if d == T::zero() {
                    continue;
                }
                if let Some(b) = &mut g.bias {
                    b[o] = b[o] + d;
                }
                let row = &mut g.weights[o * l.inputs..(o + 1) * l.inputs];
                for (w, &xj) in row.iter_mut().zip(x) {
                    if xj != T::zero() {
                        *w = *w + d * xj;
                    }
                }
            }
            if k == 0 {
                break;
            }
            // Through the weights, then the ReLU that produced `x`.
            let mut prev = vec![T::zero(); l.inputs];
            for (o, &d) in delta.iter().enumerate() {
                if d == T::zero() {
                    continue;
                }
                let row = &l.weights[o * l.inputs..(o + 1) * l.inputs];
                for (p, &w) in prev.iter_mut().zip(row) {
                    *p = *p + d * w;
                }
            }
            for (p, &xj) in prev.iter_mut().zip(x) {
                if xj <= T::zero() {
                    *p = T::zero();
                }
            }
            delta = prev;
        }
    }

    /// `θ ← θ - lr · g`.
    pub fn descend(&mut self, grads: &Gradients<T>, lr: T) {
        for (l, g) in self.layers.iter_mut().zip(&grads.layers) {
            for (w, &d) in l.weights.iter_mut().zip(&g.weights) {
                *w = *w - lr * d;
            }
            if let (Some(b), Some(gb)) = (&mut l.bias, &g.bias) {
                for (x, &d) in b.iter_mut().zip(gb) {
                    *x = *x - lr * d;
                }
            }
        }
    }
}

pub fn masked_softmax<T: Real>(logits: &[T], legal: &[usize]) -> Result<SimplexVector<T>, NeuralError> {
    if legal.is_empty() {
        return Err(NeuralError::NoLegalActions);
    }
    let picked: Vec<T> = legal.iter().map(|&a| logits[a]).collect();
    Ok(softmax(&picked))
}

#[derive(Serialize, Deserialize)]
struct LayerDoc {
    inputs: usize,
    outputs: usize,
    weights: Vec<f64>,
    bias: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct CheckpointDoc {
    format: String,
    version: u32,
    architecture: Architecture,
    layers: Vec<LayerDoc>,
}

const CHECKPOINT_FORMAT: &str = "ed-mlp";

impl Mlp<f64> {
    /// JSON checkpoint: architecture plus row-major weights. Floats use
    /// shortest round-trip formatting, so reloading is lossless.
    pub fn to_json(&self) -> String {
        let doc = CheckpointDoc {
            format: CHECKPOINT_FORMAT.into(),
            version: 1,
            architecture: self.arch.clone(),
            layers: self
                .layers
                .iter()
                .map(|l| LayerDoc {
                    inputs: l.inputs,
                    outputs: l.outputs,
                    weights: l.weights.clone(),
                    bias: l.bias.clone(),
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("checkpoints always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, NeuralError> {
        let doc: CheckpointDoc =
            serde_json::from_str(text).map_err(|e| NeuralError::Checkpoint(e.to_string()))?;
        if doc.format != CHECKPOINT_FORMAT || doc.version != 1 {
            return Err(NeuralError::Checkpoint(format!(
                "unsupported checkpoint {} v{}",
                doc.format, doc.version
            )));
        }
        let layers = doc
            .layers
            .into_iter()
            .map(|l| Layer {
                inputs: l.inputs,
                outputs: l.outputs,
                weights: l.weights,
                bias: l.bias,
            })
            .collect();
        Mlp::from_layers(doc.architecture, layers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_network_is_uniform_over_legal_actions() {
        let net = Mlp::<f64>::new(Architecture::new(4, vec![8], 3), InitScheme::Zeros, 0);
        let p = net.forward(&[1.0, 0.0, 1.0, 0.0], &[0, 2]).unwrap();
        assert_eq!(&*p, &[0.5, 0.5]);
        assert!(matches!(net.forward(&[0.0; 4], &[]), Err(NeuralError::NoLegalActions)));
    }

    #[test]
    fn masking_renormalizes_the_remaining_actions() {
        let net = Mlp::<f64>::new(Architecture::new(3, vec![8], 3), InitScheme::FanInUniform, 3);
        let x = [1.0, 0.0, 1.0];
        let z = net.logits(&x);
        let two = net.forward(&x, &[0, 2]).unwrap();
        let e0 = z[0].exp();
        let e2 = z[2].exp();
        assert!((two[0] - e0 / (e0 + e2)).abs() < 1e-15);
        assert!(two.iter().all(|&p| p > 0.0));
    }

    #[test]
    fn forward_is_deterministic_and_seeded() {
        let a = Mlp::<f64>::new(Architecture::new(5, vec![16, 16], 4), InitScheme::FanInUniform, 11);
        let b = Mlp::<f64>::new(Architecture::new(5, vec![16, 16], 4), InitScheme::FanInUniform, 11);
        let c = Mlp::<f64>::new(Architecture::new(5, vec![16, 16], 4), InitScheme::FanInUniform, 12);
        let x = [1.0, 1.0, 0.0, 0.0, 1.0];
        assert_eq!(a.logits(&x), a.logits(&x));
        assert_eq!(a, b);
        assert_ne!(a, c);
        let bound = 1.0 / 5f64.sqrt();
        assert!(a.layers()[0].weights.iter().all(|w| w.abs() <= bound));
    }

    #[test]
    fn checkpoint_round_trip() {
        let net = Mlp::<f64>::new(Architecture::new(6, vec![8, 4], 3), InitScheme::FanInUniform, 5);
        let back = Mlp::from_json(&net.to_json()).unwrap();
        assert_eq!(back, net);
        assert!(Mlp::from_json("{\"format\":\"ed-mlp\"").is_err());
    }

    #[test]
    fn param_flattening_round_trip() {
        let mut net = Mlp::<f64>::new(Architecture::new(3, vec![4], 2), InitScheme::FanInUniform, 1);
        assert_eq!(net.num_params(), 3 * 4 + 4 + 4 * 2 + 2);
        let mut p = net.params();
        p[0] = 9.0;
        net.set_params(&p);
        assert_eq!(net.layers()[0].weights[0], 9.0);
    }
}
