//! Exact best responses, exploitability and NashConv.
//!
//! The best response is computed in two phases. A downward pass collects the
//! opponent-and-chance reach of every node. An upward pass then picks, at
//! each of the responder's infostates, the action with the largest
//! reach-weighted continuation value summed over the member histories, and
//! plays that action at every member. Ties go to the lowest action
//! position. Infostates the opponent never reaches are still assigned an
//! action, using unit weights over the members, so the returned policy is
//! defined everywhere.

use crate::game::{GameTree, NodeId, NodeKind, Player};
use crate::policy::{JointPolicy, TabularPolicy};
use crate::scalar::{ratio_to, Scalar};
use crate::values::{expected_value, ValueError};

#[derive(Clone, Debug, PartialEq)]
pub struct BestResponse<T> {
    /// Pure policy: probability one on `choices[s]` at each infostate.
    pub policy: TabularPolicy<T>,
    /// `v_{i,(b_i, π_{-i})}`.
    pub value: T,
    pub choices: Vec<usize>,
}

struct Responder<'a, T> {
    tree: &'a GameTree,
    opp: &'a TabularPolicy<T>,
    player: Player,
    reach: Vec<T>,
    values: Vec<Option<T>>,
    choices: Vec<Option<usize>>,
}

impl<T: Scalar> Responder<'_, T> {
    fn value(&mut self, n: NodeId) -> T {
        if let Some(v) = self.values[n] {
            return v;
        }
        let tree = self.tree;
        let v = match &tree.node(n).kind {
            NodeKind::Terminal { utility } => T::from_int(utility[self.player.index()]),
            NodeKind::Chance { children, probs } => {
                let mut acc = T::zero();
                for (&c, &p) in children.iter().zip(probs) {
                    acc = acc + ratio_to::<T>(p) * self.value(c);
                }
                acc
            }
            NodeKind::Decision {
                player,
                infostate,
                children,
            } if *player != self.player => {
                let opp = self.opp;
                let mut acc = T::zero();
                for (&c, &p) in children.iter().zip(opp.probs(*infostate)) {
                    if p != T::zero() {
                        acc = acc + p * self.value(c);
                    }
                }
                acc
            }
            NodeKind::Decision {
                infostate, children, ..
            } => {
                let a = self.choose(*infostate);
                self.value(children[a])
            }
        };
        self.values[n] = Some(v);
        v
    }

    fn choose(&mut self, s: usize) -> usize {
        if let Some(a) = self.choices[s] {
            return a;
        }
        let info = self.tree.infostate(self.player, s);
        let mass: T = info.members.iter().map(|&h| self.reach[h]).sum();
        let unit = mass == T::zero();
        let mut totals = vec![T::zero(); info.num_actions()];
        for &h in &info.members {
            let w = if unit { T::one() } else { self.reach[h] };
            if w == T::zero() {
                continue;
            }
            let NodeKind::Decision { children, .. } = &self.tree.node(h).kind else {
                unreachable!("infostate members are decision nodes")
            };
            for (t, &c) in totals.iter_mut().zip(children) {
                *t = *t + w * self.value(c);
            }
        }
        let mut best = 0;
        for a in 1..totals.len() {
            if totals[a] > totals[best] {
                best = a;
            }
        }
        self.choices[s] = Some(best);
        best
    }
}

/// Opponent-and-chance reach of every node, ignoring `player`'s own moves.
fn opponent_reach<T: Scalar>(tree: &GameTree, opp: &TabularPolicy<T>, player: Player) -> Vec<T> {
    let mut reach = vec![T::zero(); tree.num_nodes()];
    reach[tree.root()] = T::one();
    for (id, node) in tree.nodes().iter().enumerate() {
        let r = reach[id];
        match &node.kind {
            NodeKind::Terminal { .. } => {}
            NodeKind::Chance { children, probs } => {
                for (&c, &p) in children.iter().zip(probs) {
                    reach[c] = r * ratio_to::<T>(p);
                }
            }
            NodeKind::Decision {
                player: actor,
                infostate,
                children,
            } => {
                if *actor == player {
                    for &c in children {
                        reach[c] = r;
                    }
                } else {
                    for (&c, &p) in children.iter().zip(opp.probs(*infostate)) {
                        reach[c] = r * p;
                    }
                }
            }
        }
    }
    reach
}

/// Best response of `player` to the opponent policy `opp`.
pub fn best_response<T: Scalar>(
    tree: &GameTree,
    opp: &TabularPolicy<T>,
    player: Player,
) -> Result<BestResponse<T>, ValueError> {
    assert_eq!(opp.player(), player.opponent(), "opp must belong to the opponent");
    // Shape check through a joint with a placeholder for the responder.
    JointPolicy::uniform(tree).with(opp.clone()).check_shape(tree)?;
    let n = tree.num_infostates(player);
    let mut r = Responder {
        tree,
        opp,
        player,
        reach: opponent_reach(tree, opp, player),
        values: vec![None; tree.num_nodes()],
        choices: vec![None; n],
    };
    let value = r.value(tree.root());
    for s in 0..n {
        r.choose(s);
    }
    let choices: Vec<usize> = r.choices.into_iter().map(|c| c.expect("all chosen")).collect();
    Ok(BestResponse {
        policy: TabularPolicy::pure(tree, player, &choices),
        value,
        choices,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExploitabilityReport<T> {
    /// `v_i(π)`.
    pub values: [T; 2],
    /// `max_{π'_i} v_i(π'_i, π_{-i})`.
    pub best_response_values: [T; 2],
    /// `δ_i = best_response_values[i] - values[i]`.
    pub exploitability: [T; 2],
    pub nash_conv: T,
}

pub fn exploitability_report<T: Scalar>(
    tree: &GameTree,
    joint: &JointPolicy<T>,
) -> Result<ExploitabilityReport<T>, ValueError> {
    let values = expected_value(tree, joint)?;
    let br0 = best_response(tree, &joint[Player::P1], Player::P0)?.value;
    let br1 = best_response(tree, &joint[Player::P0], Player::P1)?.value;
    let exploitability = [br0 - values[0], br1 - values[1]];
    Ok(ExploitabilityReport {
        values,
        best_response_values: [br0, br1],
        exploitability,
        nash_conv: exploitability[0] + exploitability[1],
    })
}

/// Per-player exploitability `δ_i`.
pub fn exploitability<T: Scalar>(tree: &GameTree, joint: &JointPolicy<T>) -> Result<[T; 2], ValueError> {
    Ok(exploitability_report(tree, joint)?.exploitability)
}

/// `δ_0 + δ_1`.
pub fn nash_conv<T: Scalar>(tree: &GameTree, joint: &JointPolicy<T>) -> Result<T, ValueError> {
    Ok(exploitability_report(tree, joint)?.nash_conv)
}

/// The α = 1/6 member of Kuhn poker's equilibrium family, in the tree's
/// infostate order. Player 0 holds the first card.
pub fn kuhn_equilibrium<T: Scalar>(tree: &GameTree) -> JointPolicy<T> {
    use crate::game::InfoStateKey;
    let r = |n: i64, d: i64| T::from_ratio(n, d);
    // Probability of the second action (bet or call).
    let rows: [(Player, &[u8], T); 12] = [
        (Player::P0, b"J", r(1, 6)),
        (Player::P0, b"Q", r(0, 1)),
        (Player::P0, b"K", r(1, 2)),
        (Player::P0, b"Jpb", r(0, 1)),
        (Player::P0, b"Qpb", r(1, 2)),
        (Player::P0, b"Kpb", r(1, 1)),
        (Player::P1, b"Jp", r(1, 3)),
        (Player::P1, b"Qp", r(0, 1)),
        (Player::P1, b"Kp", r(1, 1)),
        (Player::P1, b"Jb", r(0, 1)),
        (Player::P1, b"Qb", r(1, 3)),
        (Player::P1, b"Kb", r(1, 1)),
    ];
    let mut joint = JointPolicy::uniform(tree);
    for (p, key, bet) in rows {
        let s = tree
            .infostate_index(&InfoStateKey::new(p, key.to_vec()))
            .expect("tree is Kuhn poker");
        joint[p].set(s, crate::policy::SimplexVector::from_unchecked(vec![T::one() - bet, bet]));
    }
    joint
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Action, GameDynamics, History, InfoStateKey, Turn};
    use crate::games::{load_tree, Kuhn};
    use crate::policy::{realization_mix, SimplexVector};
    use num_rational::Rational64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_policy(tree: &GameTree, p: Player, rng: &mut ChaCha8Rng) -> TabularPolicy<f64> {
        let rows = tree
            .infostates(p)
            .iter()
            .map(|s| {
                let w: Vec<f64> = (0..s.num_actions()).map(|_| rng.gen::<f64>()).collect();
                let z: f64 = w.iter().sum();
                w.iter().map(|x| x / z).collect()
            })
            .collect();
        TabularPolicy::from_table(tree, p, rows).unwrap()
    }

    /// Max over all pure strategies by direct enumeration.
    fn pure_strategy_max(tree: &GameTree, opp: &TabularPolicy<f64>, player: Player) -> f64 {
        let n = tree.num_infostates(player);
        let widths: Vec<usize> = tree.infostates(player).iter().map(|s| s.num_actions()).collect();
        let mut choice = vec![0usize; n];
        let mut best = f64::NEG_INFINITY;
        loop {
            let pure = TabularPolicy::pure(tree, player, &choice);
            let joint = JointPolicy::uniform(tree).with(opp.clone()).with(pure);
            best = best.max(expected_value(tree, &joint).unwrap()[player.index()]);
            let mut i = 0;
            loop {
                if i == n {
                    return best;
                }
                choice[i] += 1;
                if choice[i] < widths[i] {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn kuhn_best_response_matches_pure_strategy_enumeration() {
        let tree = load_tree("kuhn").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            for p in Player::BOTH {
                let opp = random_policy(&tree, p.opponent(), &mut rng);
                let br = best_response(&tree, &opp, p).unwrap();
                let oracle = pure_strategy_max(&tree, &opp, p);
                assert!((br.value - oracle).abs() <= 1e-12, "{} vs {}", br.value, oracle);
            }
        }
    }

    #[test]
    fn value_equals_playout_of_returned_policy() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for name in ["kuhn", "leduc", "goofspiel_4"] {
            let tree = load_tree(name).unwrap();
            for p in Player::BOTH {
                let opp = random_policy(&tree, p.opponent(), &mut rng);
                let br = best_response(&tree, &opp, p).unwrap();
                let joint = JointPolicy::uniform(&tree).with(opp).with(br.policy.clone());
                let v = expected_value(&tree, &joint).unwrap()[p.index()];
                assert!((v - br.value).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kuhn_uniform_exploitability_matches_oracle() {
        let tree = load_tree("kuhn").unwrap();
        let joint = JointPolicy::<f64>::uniform(&tree);
        let rep = exploitability_report(&tree, &joint).unwrap();
        for p in Player::BOTH {
            let oracle = pure_strategy_max(&tree, &joint[p.opponent()], p) - rep.values[p.index()];
            assert!((rep.exploitability[p.index()] - oracle).abs() < 1e-12);
        }
        assert!(rep.nash_conv > 0.0);
        let br_sum = rep.best_response_values[0] + rep.best_response_values[1];
        assert!((rep.nash_conv - br_sum).abs() < 1e-12);
    }

    #[test]
    fn kuhn_equilibrium_is_exact() {
        let tree = load_tree("kuhn").unwrap();
        let joint = kuhn_equilibrium::<Rational64>(&tree);
        let rep = exploitability_report(&tree, &joint).unwrap();
        assert_eq!(rep.values[0], Rational64::new(-1, 18));
        assert_eq!(rep.exploitability, [Rational64::from_integer(0); 2]);
        assert_eq!(rep.best_response_values[0], Rational64::new(-1, 18));

        let f = kuhn_equilibrium::<f64>(&tree);
        assert!(nash_conv(&tree, &f).unwrap().abs() < 2e-9);
    }

    #[test]
    fn exploitable_leduc_opponent() {
        // Fold whenever folding is legal, otherwise call.
        let tree = load_tree("leduc").unwrap();
        let choices: Vec<usize> = tree
            .infostates(Player::P1)
            .iter()
            .map(|s| s.actions.iter().position(|a| a.id == crate::games::actions::leduc::FOLD).unwrap_or(0))
            .collect();
        let folder = TabularPolicy::<f64>::pure(&tree, Player::P1, &choices);
        let br = best_response(&tree, &folder, Player::P0).unwrap();
        assert!(br.value > 0.0);
    }

    #[test]
    fn pure_opponent_gives_attainable_value() {
        let tree = load_tree("kuhn").unwrap();
        for mask in 0..64usize {
            let choices: Vec<usize> = (0..6).map(|b| (mask >> b) & 1).collect();
            let opp = TabularPolicy::<f64>::pure(&tree, Player::P1, &choices);
            let br = best_response(&tree, &opp, Player::P0).unwrap();
            // Pure vs pure: only chance randomizes, so the value is a
            // multiple of 1/6.
            let scaled = br.value * 6.0;
            assert!((scaled - scaled.round()).abs() < 1e-12);
            assert!((br.value - pure_strategy_max(&tree, &opp, Player::P0)).abs() < 1e-12);
        }
    }

    #[test]
    fn ties_go_to_lowest_action() {
        let tree = load_tree("kuhn").unwrap();
        // The opponent never bets, so Kpb has zero reach and is decided
        // with unit weights over its members.
        let opp = TabularPolicy::<f64>::pure(&tree, Player::P1, &[0; 6]);
        let br = best_response(&tree, &opp, Player::P0).unwrap();
        let s = tree.infostate_index(&InfoStateKey::new(Player::P0, b"Kpb".to_vec())).unwrap();
        assert_eq!(br.choices[s], 1, "calling with K always wins");
        let flat = GameTree::build(&crate::games::SingleDecision::new(vec![1, 1, 1])).unwrap();
        let opp = TabularPolicy::<f64>::uniform(&flat, Player::P1);
        assert_eq!(best_response(&flat, &opp, Player::P0).unwrap().choices, vec![0]);
    }

    #[test]
    fn mixing_toward_best_response_never_hurts() {
        let tree = load_tree("kuhn").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pi = random_policy(&tree, Player::P0, &mut rng);
        let opp = random_policy(&tree, Player::P1, &mut rng);
        let br = best_response(&tree, &opp, Player::P0).unwrap();
        let base = JointPolicy::uniform(&tree).with(opp);
        let mut last = f64::NEG_INFINITY;
        for k in 0..=10 {
            let mixed = realization_mix(&tree, &pi, &br.policy, k as f64 / 10.0);
            let v = expected_value(&tree, &base.with(mixed)).unwrap()[0];
            assert!(v >= last - 1e-12);
            last = v;
        }
        assert!((last - br.value).abs() < 1e-12);
    }

    /// Kuhn with every decision's legal actions listed in reverse.
    struct ReversedKuhn;

    impl GameDynamics for ReversedKuhn {
        fn name(&self) -> &str {
            "kuhn_reversed"
        }
        fn turn(&self, h: &History) -> Turn {
            Kuhn.turn(h)
        }
        fn legal_actions(&self, h: &History) -> Vec<Action> {
            let mut a = Kuhn.legal_actions(h);
            a.reverse();
            a
        }
        fn chance_outcomes(&self, h: &History) -> Vec<(Action, Rational64)> {
            Kuhn.chance_outcomes(h)
        }
        fn utility(&self, h: &History, p: Player) -> i64 {
            Kuhn.utility(h, p)
        }
        fn info_state_key(&self, h: &History, p: Player) -> InfoStateKey {
            Kuhn.info_state_key(h, p)
        }
        fn max_depth(&self) -> usize {
            Kuhn.max_depth()
        }
        fn num_distinct_actions(&self) -> usize {
            Kuhn.num_distinct_actions()
        }
        fn encoding_size(&self) -> usize {
            Kuhn.encoding_size()
        }
        fn write_encoding(&self, h: &History, p: Player, out: &mut Vec<bool>) {
            Kuhn.write_encoding(h, p, out)
        }
    }

    #[test]
    fn nash_conv_ignores_action_order() {
        let tree = load_tree("kuhn").unwrap();
        let rev = GameTree::build(&ReversedKuhn).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let joint = JointPolicy::new(
                random_policy(&tree, Player::P0, &mut rng),
                random_policy(&tree, Player::P1, &mut rng),
            )
            .unwrap();
            let mut flipped = JointPolicy::<f64>::uniform(&rev);
            for p in Player::BOTH {
                for (s, info) in tree.infostates(p).iter().enumerate() {
                    let t = rev.infostate_index(&info.key).unwrap();
                    let mut row = joint[p].probs(s).to_vec();
                    row.reverse();
                    flipped[p].set(t, SimplexVector::new(row).unwrap());
                }
            }
            let a = nash_conv(&tree, &joint).unwrap();
            let b = nash_conv(&rev, &flipped).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn exploitability_is_nonnegative(seed in any::<u64>()) {
            let tree = load_tree("kuhn").unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let joint = JointPolicy::new(
                random_policy(&tree, Player::P0, &mut rng),
                random_policy(&tree, Player::P1, &mut rng),
            ).unwrap();
            let d = exploitability(&tree, &joint).unwrap();
            prop_assert!(d[0] >= -1e-12 && d[1] >= -1e-12);
        }
    }
}
