use serde::{Deserialize, Serialize};

use crate::game::{GameTree, Player};
use crate::neural::loss::{add_regularization_gradient, logit_gradient};
use crate::neural::mlp::masked_softmax;
use crate::neural::{Architecture, ForwardCache, InitScheme, Mlp};
use crate::policy::{JointPolicy, TabularPolicy};
use crate::scalar::Real;
use crate::solvers::{to_real, Algorithm, BestIterateTracker, ResponseRound, Solver, StepSchedule};
use crate::values::ValueError;

/// Network input for an infostate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum InputEncoding {
    /// The game's bit encoding.
    #[default]
    Game,
    /// One input per infostate of either player; with no hidden layers and
    /// no bias the network is exactly a logit table.
    OneHot,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeuralConfig {
    pub hidden_layers: usize,
    pub hidden_width: usize,
    pub weight_decay: f64,
    pub init: InitScheme,
    pub bias: bool,
    pub encoding: InputEncoding,
}

impl Default for NeuralConfig {
    fn default() -> Self {
        NeuralConfig {
            hidden_layers: 1,
            hidden_width: 64,
            weight_decay: 1e-6,
            init: InitScheme::FanInUniform,
            bias: true,
            encoding: InputEncoding::Game,
        }
    }
}

impl NeuralConfig {
    pub fn architecture(&self, tree: &GameTree) -> Architecture {
        let inputs = match self.encoding {
            InputEncoding::Game => tree.encoding_size(),
            InputEncoding::OneHot => tree.num_infostates(Player::P0) + tree.num_infostates(Player::P1),
        };
        Architecture {
            inputs,
            hidden: vec![self.hidden_width; self.hidden_layers],
            outputs: tree.num_distinct_actions(),
            bias: self.bias,
        }
    }
}

struct Site<T> {
    input: Vec<T>,
    legal: Vec<usize>,
}

/// Exploitability Descent with one policy network shared by both players.
///
/// Each iteration reads the tabular policy off the network at every
/// infostate, computes both best responses, evaluates counterfactual values
/// against them, and takes one gradient-descent step on the baseline loss
/// summed over all infostates.
pub struct NeuralEd<'a, T> {
    tree: &'a GameTree,
    net: Mlp<T>,
    schedule: StepSchedule,
    weight_decay: T,
    sites: [Vec<Site<T>>; 2],
    iteration: usize,
    tracker: BestIterateTracker<T>,
}

impl<'a, T: Real> NeuralEd<'a, T> {
    pub fn new(tree: &'a GameTree, config: &NeuralConfig, schedule: StepSchedule, seed: u64) -> Self {
        let net = Mlp::new(config.architecture(tree), config.init, seed);
        Self::with_network(tree, net, config.encoding, config.weight_decay, schedule)
    }

    pub fn with_network(
        tree: &'a GameTree,
        net: Mlp<T>,
        encoding: InputEncoding,
        weight_decay: f64,
        schedule: StepSchedule,
    ) -> Self {
        let n0 = tree.num_infostates(Player::P0);
        let width = net.architecture().inputs;
        let sites = Player::BOTH.map(|p| {
            tree.infostates(p)
                .iter()
                .enumerate()
                .map(|(s, info)| {
                    let input = match encoding {
                        InputEncoding::Game => info
                            .encoding
                            .iter()
                            .map(|&b| if b { T::one() } else { T::zero() })
                            .collect(),
                        InputEncoding::OneHot => {
                            let mut x = vec![T::zero(); width];
                            x[s + if p == Player::P0 { 0 } else { n0 }] = T::one();
                            x
                        }
                    };
                    Site {
                        input,
                        legal: info.actions.iter().map(|a| a.id as usize).collect(),
                    }
                })
                .collect()
        });
        NeuralEd {
            tree,
            net,
            schedule,
            weight_decay: to_real(weight_decay),
            sites,
            iteration: 0,
            tracker: BestIterateTracker::new(),
        }
    }

    pub fn network(&self) -> &Mlp<T> {
        &self.net
    }

    fn readout(&self) -> ([Vec<ForwardCache<T>>; 2], JointPolicy<T>) {
        let caches = Player::BOTH.map(|p| {
            self.sites[p.index()]
                .iter()
                .map(|site| self.net.forward_cached(&site.input))
                .collect::<Vec<_>>()
        });
        let [a, b] = Player::BOTH.map(|p| {
            let rows = caches[p.index()]
                .iter()
                .zip(&self.sites[p.index()])
                .map(|(c, site)| {
                    masked_softmax(&c.logits, &site.legal)
                        .expect("every infostate has a legal action")
                        .into_inner()
                })
                .collect();
            TabularPolicy::from_rows_unchecked(p, rows)
        });
        (caches, JointPolicy::new(a, b).expect("player order"))
    }
}

impl<T: Real> Solver<T> for NeuralEd<'_, T> {
    fn algorithm(&self) -> Algorithm {
        Algorithm::EdNeural
    }

    fn iteration(&self) -> usize {
        self.iteration
    }

    fn step(&mut self) -> Result<(), ValueError> {
        let (caches, current) = self.readout();
        let round = ResponseRound::compute(self.tree, &current)?;
        self.tracker
            .observe_joint(self.iteration, &current, round.worst_case());

        let outputs = self.net.architecture().outputs;
        let mut grads = self.net.zero_gradients();
        for p in Player::BOTH {
            let i = p.index();
            for (s, site) in self.sites[i].iter().enumerate() {
                let g = logit_gradient(outputs, &site.legal, current[p].probs(s), &round.cf[i].action_values[s]);
                self.net.backward(&caches[i][s], &g, &mut grads);
            }
        }
        add_regularization_gradient(&self.net, self.weight_decay, &mut grads);
        let t = self.iteration + 1;
        self.net.descend(&grads, to_real(self.schedule.at(t)));
        self.iteration = t;
        Ok(())
    }

    fn current_policy(&self) -> JointPolicy<T> {
        self.readout().1
    }

    fn tracker(&self) -> Option<&BestIterateTracker<T>> {
        Some(&self.tracker)
    }

    fn tracker_mut(&mut self) -> Option<&mut BestIterateTracker<T>> {
        Some(&mut self.tracker)
    }
}
