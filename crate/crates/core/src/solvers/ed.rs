use std::fmt;

use crate::game::{GameTree, Player};
use crate::policy::{pg_update_direction, project_l2_simplex, JointPolicy, LogitTable, TabularPolicy};
use crate::scalar::Real;
use crate::solvers::{to_real, Algorithm, BestIterateTracker, RegretMeter, ResponseRound, Solver, StepSchedule};
use crate::values::{ValueError, ZeroMass};

/// The tabular ED instantiations: which action values drive the update and
/// how the parameters map to a policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdVariant {
    /// Normalized q-values, `θ_s ← Π(θ_s + α q(s))`.
    QL2,
    /// Counterfactual values, `θ_s ← Π(θ_s + α q^c(s))`.
    QcL2,
    /// Softmax policy gradient, `θ_s ← θ_s + α ⟨∇_θ softmax(θ_s), q^c(s)⟩`.
    QcSoftmax,
    /// Mirror descent with softmax transfer, `θ_s ← θ_s + α q^c(s)`.
    QcMd,
}

impl EdVariant {
    pub fn algorithm(self) -> Algorithm {
        match self {
            EdVariant::QL2 => Algorithm::EdQL2,
            EdVariant::QcL2 => Algorithm::EdQcL2,
            EdVariant::QcSoftmax => Algorithm::EdQcSoftmax,
            EdVariant::QcMd => Algorithm::EdQcMd,
        }
    }

    pub fn from_algorithm(a: Algorithm) -> Option<Self> {
        match a {
            Algorithm::EdQL2 => Some(EdVariant::QL2),
            Algorithm::EdQcL2 => Some(EdVariant::QcL2),
            Algorithm::EdQcSoftmax => Some(EdVariant::QcSoftmax),
            Algorithm::EdQcMd => Some(EdVariant::QcMd),
            _ => None,
        }
    }

    pub fn uses_logits(self) -> bool {
        matches!(self, EdVariant::QcSoftmax | EdVariant::QcMd)
    }
}

impl fmt::Display for EdVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.algorithm().as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EdParams<T> {
    Simplex(TabularPolicy<T>),
    Logits(LogitTable<T>),
}

impl<T: Real> EdParams<T> {
    pub fn policy(&self) -> TabularPolicy<T> {
        match self {
            EdParams::Simplex(p) => p.clone(),
            EdParams::Logits(l) => l.policy(),
        }
    }
}

/// Tabular Exploitability Descent: every iteration computes both players'
/// best responses to the previous joint policy, then takes one ascent step
/// per infostate for each player against them.
#[derive(Clone, Debug)]
pub struct ExploitabilityDescent<'a, T> {
    tree: &'a GameTree,
    variant: EdVariant,
    schedule: StepSchedule,
    zero_mass: ZeroMass,
    params: [EdParams<T>; 2],
    order: [Player; 2],
    iteration: usize,
    tracker: BestIterateTracker<T>,
    meter: RegretMeter<T>,
}

impl<'a, T: Real> ExploitabilityDescent<'a, T> {
    /// Starts from the uniform policy (zero logits for softmax variants).
    pub fn new(tree: &'a GameTree, variant: EdVariant, schedule: StepSchedule) -> Self {
        let params = Player::BOTH.map(|p| {
            if variant.uses_logits() {
                EdParams::Logits(LogitTable::zeros(tree, p))
            } else {
                EdParams::Simplex(TabularPolicy::uniform(tree, p))
            }
        });
        Self::with_params(tree, variant, schedule, params)
    }

    /// Starts from given logits; simplex variants start at their softmax.
    pub fn from_logits(
        tree: &'a GameTree,
        variant: EdVariant,
        schedule: StepSchedule,
        logits: [LogitTable<T>; 2],
    ) -> Self {
        let params = logits.map(|l| {
            if variant.uses_logits() {
                EdParams::Logits(l)
            } else {
                EdParams::Simplex(l.policy())
            }
        });
        Self::with_params(tree, variant, schedule, params)
    }

    fn with_params(tree: &'a GameTree, variant: EdVariant, schedule: StepSchedule, params: [EdParams<T>; 2]) -> Self {
        ExploitabilityDescent {
            tree,
            variant,
            schedule,
            zero_mass: ZeroMass::Error,
            params,
            order: Player::BOTH,
            iteration: 0,
            tracker: BestIterateTracker::new(),
            meter: RegretMeter::new(tree),
        }
    }

    pub fn with_zero_mass(mut self, zero_mass: ZeroMass) -> Self {
        self.zero_mass = zero_mass;
        self
    }

    /// Order in which the players' parameter updates are applied within an
    /// iteration. Results do not depend on it.
    pub fn with_update_order(mut self, order: [Player; 2]) -> Self {
        assert_ne!(order[0], order[1]);
        self.order = order;
        self
    }

    pub fn variant(&self) -> EdVariant {
        self.variant
    }

    pub fn params(&self, player: Player) -> &EdParams<T> {
        &self.params[player.index()]
    }

    pub fn regret_meter(&self) -> &RegretMeter<T> {
        &self.meter
    }
}

impl<T: Real> Solver<T> for ExploitabilityDescent<'_, T> {
    fn algorithm(&self) -> Algorithm {
        self.variant.algorithm()
    }

    fn iteration(&self) -> usize {
        self.iteration
    }

    fn step(&mut self) -> Result<(), ValueError> {
        let current = self.current_policy();
        let round = ResponseRound::compute(self.tree, &current)?;
        let values = match self.variant {
            EdVariant::QL2 => [
                round.cf[0].normalized(self.tree, self.zero_mass)?,
                round.cf[1].normalized(self.tree, self.zero_mass)?,
            ],
            _ => round.cf.clone(),
        };
        let w = round.worst_case();
        self.tracker.observe_joint(self.iteration, &current, w);
        for p in Player::BOTH {
            self.meter
                .observe(self.tree, p, &round.response_to(p).policy, w[p.index()]);
        }

        let t = self.iteration + 1;
        let alpha: T = to_real(self.schedule.at(t));
        for p in self.order {
            let q = &values[p.index()].action_values;
            match &mut self.params[p.index()] {
                EdParams::Simplex(pol) => {
                    for (s, qs) in q.iter().enumerate() {
                        let moved: Vec<T> = pol.probs(s).iter().zip(qs).map(|(&x, &qa)| x + alpha * qa).collect();
                        pol.set(s, project_l2_simplex(&moved).expect("finite inputs project"));
                    }
                }
                EdParams::Logits(theta) => {
                    for (s, qs) in q.iter().enumerate() {
                        let dir = match self.variant {
                            EdVariant::QcSoftmax => pg_update_direction(current[p].probs(s), qs),
                            _ => qs.clone(),
                        };
                        for (x, d) in theta.row_mut(s).iter_mut().zip(dir) {
                            *x = *x + alpha * d;
                        }
                    }
                }
            }
        }
        self.iteration = t;
        Ok(())
    }

    fn current_policy(&self) -> JointPolicy<T> {
        let [a, b] = &self.params;
        JointPolicy::new(a.policy(), b.policy()).expect("player order")
    }

    fn tracker(&self) -> Option<&BestIterateTracker<T>> {
        Some(&self.tracker)
    }

    fn tracker_mut(&mut self) -> Option<&mut BestIterateTracker<T>> {
        Some(&mut self.tracker)
    }
}
