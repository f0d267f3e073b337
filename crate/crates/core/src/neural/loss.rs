use crate::neural::{Gradients, Mlp, NeuralError};
use crate::neural::mlp::masked_softmax;
use crate::policy::pg_update_direction;
use crate::scalar::Real;

/// One infostate's training signal.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample<T> {
    pub input: Vec<T>,
    /// Output slots of the legal actions, in policy order.
    pub legal: Vec<usize>,
    /// Action values against the best response, aligned with `legal`.
    pub q: Vec<T>,
}

/// `B(s) = π(s) · q(s)` under the current network.
pub fn baselines<T: Real>(net: &Mlp<T>, samples: &[Sample<T>]) -> Result<Vec<T>, NeuralError> {
    samples
        .iter()
        .map(|s| {
            let pi = net.forward(&s.input, &s.legal)?;
            Ok(pi.iter().zip(&s.q).map(|(&p, &q)| p * q).sum())
        })
        .collect()
}

/// `w_r / n · Σ θ²` with `n` the parameter count.
pub fn regularization<T: Real>(net: &Mlp<T>, weight_decay: T) -> T {
    weight_decay * net.sum_squares() / T::from_count(net.num_params())
}

/// `-Σ_s π(s) · (q(s) - B(s)) + w_r / n · Σ θ²` with the baselines held fixed.
pub fn loss_with_baselines<T: Real>(
    net: &Mlp<T>,
    samples: &[Sample<T>],
    baselines: &[T],
    weight_decay: T,
) -> Result<T, NeuralError> {
    let mut total = T::zero();
    for (s, &b) in samples.iter().zip(baselines) {
        let pi = net.forward(&s.input, &s.legal)?;
        let gain: T = pi.iter().zip(&s.q).map(|(&p, &q)| p * (q - b)).sum();
        total = total - gain;
    }
    Ok(total + regularization(net, weight_decay))
}

/// The loss with baselines computed from the network itself. Its value is
/// the regularization term; only its gradient carries the policy signal.
pub fn loss<T: Real>(net: &Mlp<T>, samples: &[Sample<T>], weight_decay: T) -> Result<T, NeuralError> {
    let b = baselines(net, samples)?;
    loss_with_baselines(net, samples, &b, weight_decay)
}

/// `∂L/∂logits` for one sample: `-π_a (q_a - π·q)` on legal slots.
pub(crate) fn logit_gradient<T: Real>(outputs: usize, legal: &[usize], pi: &[T], q: &[T]) -> Vec<T> {
    let mut g = vec![T::zero(); outputs];
    for (&slot, d) in legal.iter().zip(pg_update_direction(pi, q)) {
        g[slot] = -d;
    }
    g
}

/// Adds `2 w_r / n · θ` to `grads`.
pub(crate) fn add_regularization_gradient<T: Real>(net: &Mlp<T>, weight_decay: T, grads: &mut Gradients<T>) {
    if weight_decay == T::zero() {
        return;
    }
    let scale = (T::one() + T::one()) * weight_decay / T::from_count(net.num_params());
    for (g, l) in grads.layers.iter_mut().zip(net.layers()) {
        for (d, &w) in g.weights.iter_mut().zip(&l.weights) {
            *d = *d + scale * w;
        }
        if let (Some(gb), Some(b)) = (&mut g.bias, &l.bias) {
            for (d, &w) in gb.iter_mut().zip(b) {
                *d = *d + scale * w;
            }
        }
    }
}

/// Backpropagated gradient of [`loss`].
pub fn loss_gradient<T: Real>(
    net: &Mlp<T>,
    samples: &[Sample<T>],
    weight_decay: T,
) -> Result<Gradients<T>, NeuralError> {
    let mut grads = net.zero_gradients();
    let outputs = net.architecture().outputs;
    for s in samples {
        let cache = net.forward_cached(&s.input);
        let pi = masked_softmax(&cache.logits, &s.legal)?;
        let g = logit_gradient(outputs, &s.legal, &pi, &s.q);
        net.backward(&cache, &g, &mut grads);
    }
    add_regularization_gradient(net, weight_decay, &mut grads);
    Ok(grads)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::{Architecture, InitScheme};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn samples(rng: &mut ChaCha8Rng, inputs: usize, outputs: usize, n: usize) -> Vec<Sample<f64>> {
        (0..n)
            .map(|_| {
                let input = (0..inputs).map(|_| if rng.gen_bool(0.5) { 1.0 } else { 0.0 }).collect();
                let mut legal: Vec<usize> = (0..outputs).filter(|_| rng.gen_bool(0.7)).collect();
                if legal.is_empty() {
                    legal.push(0);
                }
                let q = legal.iter().map(|_| rng.gen_range(-2.0..2.0)).collect();
                Sample { input, legal, q }
            })
            .collect()
    }

    #[test]
    fn loss_value_is_the_regularizer() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let net = Mlp::<f64>::new(Architecture::new(6, vec![8], 3), InitScheme::FanInUniform, 4);
        let data = samples(&mut rng, 6, 3, 10);
        assert!(loss(&net, &data, 0.0).unwrap().abs() < 1e-12);
        let l = loss(&net, &data, 1e-4).unwrap();
        let reg = 1e-4 * net.sum_squares() / net.num_params() as f64;
        assert!((l - reg).abs() < 1e-12);
    }

    #[test]
    fn regularizer_plug_in() {
        let mut net = Mlp::<f64>::new(Architecture::new(2, vec![], 2), InitScheme::Zeros, 0);
        // Six parameters; set two of them to 1 so Σθ² = 2.
        let mut p = net.params();
        p[0] = 1.0;
        p[3] = -1.0;
        net.set_params(&p);
        assert_eq!(regularization(&net, 1e-4), 1e-4 * 2.0 / 6.0);
    }

    #[test]
    fn gradient_matches_central_differences_on_tiny_net() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let net = Mlp::<f64>::new(Architecture::new(3, vec![8], 2), InitScheme::FanInUniform, 1);
        let data = samples(&mut rng, 3, 2, 6);
        let w = 1e-3;
        let b = baselines(&net, &data).unwrap();
        let g = loss_gradient(&net, &data, w).unwrap().flat();
        let p0 = net.params();
        let h = 1e-6;
        for i in 0..p0.len() {
            let mut probe = net.clone();
            let mut p = p0.clone();
            p[i] += h;
            probe.set_params(&p);
            let up = loss_with_baselines(&probe, &data, &b, w).unwrap();
            p[i] -= 2.0 * h;
            probe.set_params(&p);
            let down = loss_with_baselines(&probe, &data, &b, w).unwrap();
            let fd = (up - down) / (2.0 * h);
            let scale = fd.abs().max(g[i].abs()).max(1e-8);
            assert!((fd - g[i]).abs() / scale < 1e-5, "param {i}: fd {fd} vs {}", g[i]);
        }
    }
}
