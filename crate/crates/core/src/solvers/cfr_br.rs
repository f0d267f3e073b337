use crate::game::{GameTree, Player};
use crate::policy::{project_l2_simplex, softmax, JointPolicy, TabularPolicy};
use crate::scalar::Real;
use crate::solvers::{regret_matching, to_real, Algorithm, BestIterateTracker, RegretMeter, ResponseRound, Solver, StepSchedule};
use crate::values::ValueError;

/// The per-infostate online learner CFR-BR runs against best responses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LocalLearner {
    RegretMatching,
    /// Exponential weights over accumulated counterfactual values,
    /// `π = softmax(Q / τ)`.
    Hedge { temperature: f64 },
    /// Projected gradient ascent on counterfactual regrets.
    Giga(StepSchedule),
}

/// CFR against a best-responding opponent, run for both players at once:
/// each player learns from counterfactual values computed against the
/// opponent's best response to that player's current policy.
#[derive(Clone, Debug)]
pub struct CfrBr<'a, T> {
    tree: &'a GameTree,
    learner: LocalLearner,
    /// Cumulative regrets (regret matching) or values (hedge).
    accum: [Vec<Vec<T>>; 2],
    current: JointPolicy<T>,
    iteration: usize,
    tracker: BestIterateTracker<T>,
    meter: RegretMeter<T>,
}

impl<'a, T: Real> CfrBr<'a, T> {
    pub fn new(tree: &'a GameTree, learner: LocalLearner) -> Self {
        let zeros = |p: Player| {
            tree.infostates(p)
                .iter()
                .map(|s| vec![T::zero(); s.num_actions()])
                .collect()
        };
        CfrBr {
            tree,
            learner,
            accum: Player::BOTH.map(zeros),
            current: JointPolicy::uniform(tree),
            iteration: 0,
            tracker: BestIterateTracker::new(),
            meter: RegretMeter::new(tree),
        }
    }

    pub fn regret_meter(&self) -> &RegretMeter<T> {
        &self.meter
    }
}

impl<T: Real> Solver<T> for CfrBr<'_, T> {
    fn algorithm(&self) -> Algorithm {
        match self.learner {
            LocalLearner::Hedge { .. } => Algorithm::CfrBrHedge,
            _ => Algorithm::CfrBr,
        }
    }

    fn iteration(&self) -> usize {
        self.iteration
    }

    fn step(&mut self) -> Result<(), ValueError> {
        let round = ResponseRound::compute(self.tree, &self.current)?;
        let w = round.worst_case();
        self.tracker.observe_joint(self.iteration, &self.current, w);
        for p in Player::BOTH {
            self.meter
                .observe(self.tree, p, &round.response_to(p).policy, w[p.index()]);
        }
        let t = self.iteration + 1;
        for p in Player::BOTH {
            let i = p.index();
            let cf = &round.cf[i];
            let mut rows = Vec::with_capacity(cf.action_values.len());
            for (s, q) in cf.action_values.iter().enumerate() {
                let v = cf.state_values[s];
                let acc = &mut self.accum[i][s];
                let row = match self.learner {
                    LocalLearner::RegretMatching => {
                        for (r, &qa) in acc.iter_mut().zip(q) {
                            *r = *r + qa - v;
                        }
                        regret_matching(acc)
                    }
                    LocalLearner::Hedge { temperature } => {
                        let tau: T = to_real(temperature);
                        for (r, &qa) in acc.iter_mut().zip(q) {
                            *r = *r + qa;
                        }
                        let scaled: Vec<T> = acc.iter().map(|&x| x / tau).collect();
                        softmax(&scaled).into_inner()
                    }
                    LocalLearner::Giga(schedule) => {
                        let alpha: T = to_real(schedule.at(t));
                        let pi = self.current[p].probs(s);
                        let moved: Vec<T> = pi.iter().zip(q).map(|(&x, &qa)| x + alpha * (qa - v)).collect();
                        project_l2_simplex(&moved)
                            .expect("finite inputs project")
                            .into_inner()
                    }
                };
                rows.push(row);
            }
            self.current[p] = TabularPolicy::from_rows_unchecked(p, rows);
        }
        self.iteration = t;
        Ok(())
    }

    fn current_policy(&self) -> JointPolicy<T> {
        self.current.clone()
    }

    fn tracker(&self) -> Option<&BestIterateTracker<T>> {
        Some(&self.tracker)
    }

    fn tracker_mut(&mut self) -> Option<&mut BestIterateTracker<T>> {
        Some(&mut self.tracker)
    }
}
