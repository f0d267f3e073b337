//! Best-iterate tracking and the online regret meter of best-response
//! dynamics.

use crate::best_response::best_response;
use crate::game::{GameTree, Player};
use crate::policy::{JointPolicy, TabularPolicy};
use crate::scalar::Scalar;
use crate::values::ValueError;

#[derive(Clone, Debug, PartialEq)]
pub struct BestIterate<T> {
    /// `v_i(π_i, b_{-i}(π_i))`: the worst-case value of the iterate.
    pub value: T,
    pub iteration: usize,
    pub policy: TabularPolicy<T>,
}

/// Keeps, per player, the iterate with the highest value against the
/// opponent's best response.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BestIterateTracker<T> {
    best: [Option<BestIterate<T>>; 2],
}

impl<T: Scalar> BestIterateTracker<T> {
    pub fn new() -> Self {
        BestIterateTracker { best: [None, None] }
    }

    /// Offers `policy` (iterate number `iteration`) with worst-case value
    /// `value`. Returns whether it became the new best.
    pub fn observe(&mut self, iteration: usize, policy: &TabularPolicy<T>, value: T) -> bool {
        let slot = &mut self.best[policy.player().index()];
        let better = slot.as_ref().map_or(true, |b| value > b.value);
        if better {
            *slot = Some(BestIterate {
                value,
                iteration,
                policy: policy.clone(),
            });
        }
        better
    }

    /// Offers both components of `joint` with worst-case values `w`.
    pub fn observe_joint(&mut self, iteration: usize, joint: &JointPolicy<T>, w: [T; 2]) {
        for p in Player::BOTH {
            self.observe(iteration, &joint[p], w[p.index()]);
        }
    }

    pub fn best(&self, player: Player) -> Option<&BestIterate<T>> {
        self.best[player.index()].as_ref()
    }

    /// NashConv of the joint formed by the two best iterates:
    /// `-(w_0 + w_1)` in a zero-sum game.
    pub fn nash_conv(&self) -> Option<T> {
        match &self.best {
            [Some(a), Some(b)] => Some(-(a.value + b.value)),
            _ => None,
        }
    }

    pub fn joint(&self) -> Option<JointPolicy<T>> {
        match &self.best {
            [Some(a), Some(b)] => JointPolicy::new(a.policy.clone(), b.policy.clone()).ok(),
            _ => None,
        }
    }
}

/// Measures each player's external regret against the sequence of
/// opponent best responses it faced.
///
/// With `w_i^t = v_i(π_i^t, b_{-i}^t)`, the average regret is
/// `R_i^T / T = max_{π'} v_i(π', b̄_{-i}) - mean_t w_i^t`, where `b̄_{-i}` is
/// the realization-weighted average of the responses, i.e. the behavioral
/// form of their uniform mixture.
#[derive(Clone, Debug)]
pub struct RegretMeter<T> {
    /// Per player i: accumulated realization-weighted rows of `b_{-i}`.
    responses: [Vec<Vec<T>>; 2],
    value_sum: [T; 2],
    rounds: [usize; 2],
}

impl<T: Scalar> RegretMeter<T> {
    pub fn new(tree: &GameTree) -> Self {
        let zeros = |p: Player| {
            tree.infostates(p)
                .iter()
                .map(|s| vec![T::zero(); s.num_actions()])
                .collect()
        };
        RegretMeter {
            responses: [zeros(Player::P1), zeros(Player::P0)],
            value_sum: [T::zero(); 2],
            rounds: [0; 2],
        }
    }

    /// Records one round for `player`: the opponent response it faced and
    /// its value against it.
    pub fn observe(&mut self, tree: &GameTree, player: Player, response: &TabularPolicy<T>, value: T) {
        assert_eq!(response.player(), player.opponent());
        let x = response.realization(tree);
        let acc = &mut self.responses[player.index()];
        for (s, row) in acc.iter_mut().enumerate() {
            for (a, r) in row.iter_mut().enumerate() {
                *r = *r + x[s] * response.probs(s)[a];
            }
        }
        self.value_sum[player.index()] = self.value_sum[player.index()] + value;
        self.rounds[player.index()] += 1;
    }

    pub fn rounds(&self, player: Player) -> usize {
        self.rounds[player.index()]
    }

    pub fn mean_value(&self, player: Player) -> T {
        self.value_sum[player.index()] / T::from_count(self.rounds[player.index()].max(1))
    }

    /// Behavioral form of the average opponent response.
    pub fn average_response(&self, player: Player) -> TabularPolicy<T> {
        let rows = self.responses[player.index()]
            .iter()
            .map(|row| {
                let z: T = row.iter().copied().sum();
                if z > T::zero() {
                    row.iter().map(|&r| r / z).collect()
                } else {
                    vec![T::from_ratio(1, row.len() as i64); row.len()]
                }
            })
            .collect();
        TabularPolicy::from_rows_unchecked(player.opponent(), rows)
    }

    /// `max_{π'} v_i(π', b̄_{-i})`.
    pub fn best_fixed_value(&self, tree: &GameTree, player: Player) -> Result<T, ValueError> {
        Ok(best_response(tree, &self.average_response(player), player)?.value)
    }

    /// `R_i^T / T`.
    pub fn average_regret(&self, tree: &GameTree, player: Player) -> Result<T, ValueError> {
        Ok(self.best_fixed_value(tree, player)? - self.mean_value(player))
    }
}
