use crate::game::{GameTree, Player};
use crate::policy::{JointPolicy, TabularPolicy};
use crate::scalar::Real;
use crate::solvers::{Algorithm, Solver};
use crate::values::{evaluate, ValueError};

/// `R⁺ / ΣR⁺`, or uniform when no regret is positive.
pub fn regret_matching<T: Real>(regrets: &[T]) -> Vec<T> {
    let pos: Vec<T> = regrets.iter().map(|&r| r.max(T::zero())).collect();
    let z: T = pos.iter().copied().sum();
    if z > T::zero() {
        pos.iter().map(|&r| r / z).collect()
    } else {
        vec![T::one() / T::from_count(regrets.len()); regrets.len()]
    }
}

fn zeros<T: Real>(tree: &GameTree, p: Player) -> Vec<Vec<T>> {
    tree.infostates(p)
        .iter()
        .map(|s| vec![T::zero(); s.num_actions()])
        .collect()
}

pub(crate) fn normalize_rows<T: Real>(p: Player, acc: &[Vec<T>]) -> TabularPolicy<T> {
    let rows = acc
        .iter()
        .map(|row| {
            let z: T = row.iter().copied().sum();
            if z > T::zero() {
                row.iter().map(|&x| x / z).collect()
            } else {
                vec![T::one() / T::from_count(row.len()); row.len()]
            }
        })
        .collect();
    TabularPolicy::from_rows_unchecked(p, rows)
}

/// Vanilla CFR with simultaneous updates: both players' regrets come from
/// one evaluation of the current joint policy.
#[derive(Clone, Debug)]
pub struct Cfr<'a, T> {
    tree: &'a GameTree,
    regrets: [Vec<Vec<T>>; 2],
    average: [Vec<Vec<T>>; 2],
    current: JointPolicy<T>,
    iteration: usize,
}

impl<'a, T: Real> Cfr<'a, T> {
    pub fn new(tree: &'a GameTree) -> Self {
        Cfr {
            tree,
            regrets: Player::BOTH.map(|p| zeros(tree, p)),
            average: Player::BOTH.map(|p| zeros(tree, p)),
            current: JointPolicy::uniform(tree),
            iteration: 0,
        }
    }

    pub fn regrets(&self, player: Player) -> &[Vec<T>] {
        &self.regrets[player.index()]
    }

    pub fn average_policy(&self) -> JointPolicy<T> {
        let [a, b] = Player::BOTH.map(|p| normalize_rows(p, &self.average[p.index()]));
        JointPolicy::new(a, b).expect("player order")
    }
}

impl<T: Real> Solver<T> for Cfr<'_, T> {
    fn algorithm(&self) -> Algorithm {
        Algorithm::Cfr
    }

    fn iteration(&self) -> usize {
        self.iteration
    }

    fn step(&mut self) -> Result<(), ValueError> {
        let eval = evaluate(self.tree, &self.current)?;
        for p in Player::BOTH {
            let i = p.index();
            let cf = &eval.counterfactual[i];
            for (s, info) in self.tree.infostates(p).iter().enumerate() {
                let own = eval.reach.own(p, info.members[0]);
                let pi = self.current[p].probs(s);
                for a in 0..info.num_actions() {
                    self.regrets[i][s][a] = self.regrets[i][s][a] + cf.action_values[s][a] - cf.state_values[s];
                    self.average[i][s][a] = self.average[i][s][a] + own * pi[a];
                }
            }
        }
        for p in Player::BOTH {
            let rows = self.regrets[p.index()].iter().map(|r| regret_matching(r)).collect();
            self.current[p] = TabularPolicy::from_rows_unchecked(p, rows);
        }
        self.iteration += 1;
        Ok(())
    }

    fn current_policy(&self) -> JointPolicy<T> {
        self.current.clone()
    }

    fn report_policy(&self) -> JointPolicy<T> {
        self.average_policy()
    }
}
