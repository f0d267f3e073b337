//! Exact full-tree evaluation of a joint policy: reach probabilities, root
//! values, normalized q-values and counterfactual values.
//!
//! Chance is folded into the opponent's reach, so for player `i`
//! `total(h) = own(i, h) * opp(i, h)`.

use thiserror::Error;

use crate::game::{GameTree, NodeId, NodeKind, Player};
use crate::policy::{JointPolicy, PolicyError};
use crate::scalar::{ratio_to, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ValueError {
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("infostate {key} has zero opponent reach mass; q-values are undefined")]
    ZeroReachMass { player: Player, key: String },
}

/// What to do at an infostate whose normalizing mass is zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ZeroMass {
    #[default]
    Error,
    /// Report the (all-zero) counterfactual values and flag the infostate.
    Fallback,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueMode {
    Normalized,
    Counterfactual,
}

/// Per-node reach probabilities split by contributor.
#[derive(Clone, Debug)]
pub struct ReachDecomposition<T> {
    player: [Vec<T>; 2],
    chance: Vec<T>,
}

impl<T: Scalar> ReachDecomposition<T> {
    pub fn compute(tree: &GameTree, joint: &JointPolicy<T>) -> Result<Self, ValueError> {
        joint.check_shape(tree)?;
        Ok(Self::compute_unchecked(tree, joint))
    }

    pub(crate) fn compute_unchecked(tree: &GameTree, joint: &JointPolicy<T>) -> Self {
        let n = tree.num_nodes();
        let mut player = [vec![T::zero(); n], vec![T::zero(); n]];
        let mut chance = vec![T::zero(); n];
        player[0][0] = T::one();
        player[1][0] = T::one();
        chance[0] = T::one();
        for (id, node) in tree.nodes().iter().enumerate() {
            match &node.kind {
                NodeKind::Terminal { .. } => {}
                NodeKind::Chance { children, probs } => {
                    for (&c, &p) in children.iter().zip(probs) {
                        player[0][c] = player[0][id];
                        player[1][c] = player[1][id];
                        chance[c] = chance[id] * ratio_to::<T>(p);
                    }
                }
                NodeKind::Decision {
                    player: actor,
                    infostate,
                    children,
                } => {
                    let a = actor.index();
                    let probs = joint[*actor].probs(*infostate);
                    for (&c, &p) in children.iter().zip(probs) {
                        player[a][c] = player[a][id] * p;
                        player[1 - a][c] = player[1 - a][id];
                        chance[c] = chance[id];
                    }
                }
            }
        }
        ReachDecomposition { player, chance }
    }

    /// `η_i(h)`: product of `player`'s own action probabilities.
    pub fn own(&self, player: Player, node: NodeId) -> T {
        self.player[player.index()][node]
    }

    /// `η_{-i}(h)`: opponent and chance contributions.
    pub fn opp(&self, player: Player, node: NodeId) -> T {
        self.player[player.opponent().index()][node] * self.chance[node]
    }

    pub fn chance(&self, node: NodeId) -> T {
        self.chance[node]
    }

    pub fn total(&self, node: NodeId) -> T {
        self.player[0][node] * self.player[1][node] * self.chance[node]
    }
}

/// Per-infostate action values for one player.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueReport<T> {
    pub player: Player,
    pub mode: ValueMode,
    /// `q(s, ·)` or `q^c(s, ·)`, indexed by legal-action position.
    pub action_values: Vec<Vec<T>>,
    /// `v(s)` or `v^c(s)`.
    pub state_values: Vec<T>,
    /// `B_{-i}(π, s)`: summed opponent-and-chance reach of the members.
    pub reach_mass: Vec<T>,
    /// Infostates that hit the zero-mass fallback.
    pub degenerate: Vec<usize>,
}

impl<T: Scalar> ValueReport<T> {
    /// Divides counterfactual values by `B_{-i}(π, s)`, giving Eq. 2 q-values.
    pub fn normalized(&self, tree: &GameTree, zero_mass: ZeroMass) -> Result<ValueReport<T>, ValueError> {
        let mut out = self.clone();
        out.mode = ValueMode::Normalized;
        for s in 0..self.action_values.len() {
            let b = self.reach_mass[s];
            if b == T::zero() {
                match zero_mass {
                    ZeroMass::Error => {
                        return Err(ValueError::ZeroReachMass {
                            player: self.player,
                            key: tree.infostate(self.player, s).key.to_string(),
                        })
                    }
                    ZeroMass::Fallback => out.degenerate.push(s),
                }
                continue;
            }
            for q in &mut out.action_values[s] {
                *q = *q / b;
            }
            out.state_values[s] = out.state_values[s] / b;
        }
        Ok(out)
    }
}

/// Everything one downward and one upward pass produce.
#[derive(Clone, Debug)]
pub struct Evaluation<T> {
    pub reach: ReachDecomposition<T>,
    /// Expected utility for player 0 of the subtree at each node.
    pub node_values: Vec<T>,
    pub counterfactual: [ValueReport<T>; 2],
}

impl<T: Scalar> Evaluation<T> {
    pub fn root_values(&self) -> [T; 2] {
        [self.node_values[0], -self.node_values[0]]
    }

    /// Normalized q-values derived from the counterfactual report.
    pub fn q_values(
        &self,
        tree: &GameTree,
        player: Player,
        zero_mass: ZeroMass,
    ) -> Result<ValueReport<T>, ValueError> {
        self.counterfactual[player.index()].normalized(tree, zero_mass)
    }
}

/// Subtree values for player 0 under `joint`, bottom-up over the preorder.
pub(crate) fn node_values<T: Scalar>(tree: &GameTree, joint: &JointPolicy<T>) -> Vec<T> {
    let mut v = vec![T::zero(); tree.num_nodes()];
    for (id, node) in tree.nodes().iter().enumerate().rev() {
        v[id] = match &node.kind {
            NodeKind::Terminal { utility } => T::from_int(utility[0]),
            NodeKind::Chance { children, probs } => children
                .iter()
                .zip(probs)
                .map(|(&c, &p)| ratio_to::<T>(p) * v[c])
                .sum(),
            NodeKind::Decision {
                player,
                infostate,
                children,
            } => children
                .iter()
                .zip(joint[*player].probs(*infostate))
                .map(|(&c, &p)| p * v[c])
                .sum(),
        };
    }
    v
}

fn sign<T: Scalar>(player: Player, x: T) -> T {
    match player {
        Player::P0 => x,
        Player::P1 => -x,
    }
}

fn counterfactual_report<T: Scalar>(
    tree: &GameTree,
    joint: &JointPolicy<T>,
    reach: &ReachDecomposition<T>,
    values: &[T],
    player: Player,
) -> ValueReport<T> {
    let states = tree.infostates(player);
    let mut action_values = Vec::with_capacity(states.len());
    let mut state_values = Vec::with_capacity(states.len());
    let mut reach_mass = Vec::with_capacity(states.len());
    for (s, info) in states.iter().enumerate() {
        let mut q = vec![T::zero(); info.num_actions()];
        let mut mass = T::zero();
        for &h in &info.members {
            let w = reach.opp(player, h);
            mass = mass + w;
            if w == T::zero() {
                continue;
            }
            if let NodeKind::Decision { children, .. } = &tree.node(h).kind {
                for (qa, &c) in q.iter_mut().zip(children) {
                    *qa = *qa + w * sign(player, values[c]);
                }
            }
        }
        let v = joint[player]
            .probs(s)
            .iter()
            .zip(&q)
            .map(|(&p, &x)| p * x)
            .sum();
        action_values.push(q);
        state_values.push(v);
        reach_mass.push(mass);
    }
    ValueReport {
        player,
        mode: ValueMode::Counterfactual,
        action_values,
        state_values,
        reach_mass,
        degenerate: Vec::new(),
    }
}

/// One downward reach pass and one upward value pass, producing
/// counterfactual reports for both players.
pub fn evaluate<T: Scalar>(tree: &GameTree, joint: &JointPolicy<T>) -> Result<Evaluation<T>, ValueError> {
    let reach = ReachDecomposition::compute(tree, joint)?;
    let node_values = node_values(tree, joint);
    let counterfactual = Player::BOTH.map(|p| counterfactual_report(tree, joint, &reach, &node_values, p));
    Ok(Evaluation {
        reach,
        node_values,
        counterfactual,
    })
}

/// Root values `v_{i,π}` for both players.
pub fn expected_value<T: Scalar>(tree: &GameTree, joint: &JointPolicy<T>) -> Result<[T; 2], ValueError> {
    joint.check_shape(tree)?;
    let v0 = node_values(tree, joint)[tree.root()];
    Ok([v0, -v0])
}

/// Counterfactual action values `q^c_i(s, a) = Σ_{h∈s} η_{-i}(h) q_i(h, a)`.
pub fn counterfactual_values<T: Scalar>(
    tree: &GameTree,
    joint: &JointPolicy<T>,
    player: Player,
) -> Result<ValueReport<T>, ValueError> {
    let reach = ReachDecomposition::compute(tree, joint)?;
    let values = node_values(tree, joint);
    Ok(counterfactual_report(tree, joint, &reach, &values, player))
}

/// Normalized q-values: counterfactual values divided by `B_{-i}(π, s)`.
pub fn q_values<T: Scalar>(
    tree: &GameTree,
    joint: &JointPolicy<T>,
    player: Player,
    zero_mass: ZeroMass,
) -> Result<ValueReport<T>, ValueError> {
    counterfactual_values(tree, joint, player)?.normalized(tree, zero_mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{GameDynamics, History, InfoStateKey, Turn};
    use crate::games::{load_tree, Kuhn, MatrixGame};
    use crate::policy::TabularPolicy;
    use num_rational::Rational64;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_joint(tree: &GameTree, rng: &mut ChaCha8Rng) -> JointPolicy<f64> {
        let [p0, p1] = Player::BOTH.map(|p| {
            let rows = tree
                .infostates(p)
                .iter()
                .map(|s| {
                    let w: Vec<f64> = (0..s.num_actions()).map(|_| rng.gen::<f64>() + 1e-3).collect();
                    let z: f64 = w.iter().sum();
                    w.iter().map(|x| x / z).collect()
                })
                .collect();
            TabularPolicy::from_table(tree, p, rows).unwrap()
        });
        JointPolicy::new(p0, p1).unwrap()
    }

    /// Expected value straight from the rules, recursing over histories.
    fn rules_value(game: &dyn GameDynamics, tree: &GameTree, joint: &JointPolicy<f64>, h: &History) -> f64 {
        match game.turn(h) {
            Turn::Terminal => game.utility(h, Player::P0) as f64,
            Turn::Chance => game
                .chance_outcomes(h)
                .iter()
                .map(|(a, p)| p.to_f64().unwrap() * rules_value(game, tree, joint, &h.child(a.id)))
                .sum(),
            Turn::Player(p) => {
                let s = tree.infostate_index(&game.info_state_key(h, p)).unwrap();
                game.legal_actions(h)
                    .iter()
                    .zip(joint[p].probs(s))
                    .map(|(a, &pr)| pr * rules_value(game, tree, joint, &h.child(a.id)))
                    .sum()
            }
        }
    }

    /// Reach of a node by walking parent links, one factor at a time.
    fn path_factors(tree: &GameTree, joint: &JointPolicy<f64>, node: NodeId) -> [f64; 3] {
        let mut f = [1.0; 3];
        let mut cur = node;
        while let Some(parent) = tree.node(cur).parent {
            let last = *tree.node(cur).history.actions().last().unwrap();
            match &tree.node(parent).kind {
                NodeKind::Chance { children, probs } => {
                    let pos = children.iter().position(|&c| c == cur).unwrap();
                    f[2] *= probs[pos].to_f64().unwrap();
                }
                NodeKind::Decision { player, infostate, .. } => {
                    let info = tree.infostate(*player, *infostate);
                    let pos = info.actions.iter().position(|a| a.id == last).unwrap();
                    f[player.index()] *= joint[*player].probs(*infostate)[pos];
                }
                NodeKind::Terminal { .. } => unreachable!(),
            }
            cur = parent;
        }
        f
    }

    /// Counterfactual values straight from the definition.
    fn naive_counterfactual(tree: &GameTree, joint: &JointPolicy<f64>, player: Player) -> Vec<Vec<f64>> {
        fn subtree(tree: &GameTree, joint: &JointPolicy<f64>, n: NodeId) -> f64 {
            match &tree.node(n).kind {
                NodeKind::Terminal { utility } => utility[0] as f64,
                NodeKind::Chance { children, probs } => children
                    .iter()
                    .zip(probs)
                    .map(|(&c, p)| p.to_f64().unwrap() * subtree(tree, joint, c))
                    .sum(),
                NodeKind::Decision { player, infostate, children } => children
                    .iter()
                    .zip(joint[*player].probs(*infostate))
                    .map(|(&c, &p)| p * subtree(tree, joint, c))
                    .sum(),
            }
        }
        let sgn = if player == Player::P0 { 1.0 } else { -1.0 };
        tree.infostates(player)
            .iter()
            .map(|info| {
                (0..info.num_actions())
                    .map(|a| {
                        info.members
                            .iter()
                            .map(|&h| {
                                let f = path_factors(tree, joint, h);
                                let opp = f[player.opponent().index()] * f[2];
                                let NodeKind::Decision { children, .. } = &tree.node(h).kind else {
                                    unreachable!()
                                };
                                opp * sgn * subtree(tree, joint, children[a])
                            })
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn kuhn_uniform_matches_rules_recursion() {
        let tree = load_tree("kuhn").unwrap();
        let joint = JointPolicy::uniform(&tree);
        let v = expected_value(&tree, &joint).unwrap();
        let oracle = rules_value(&Kuhn, &tree, &joint, &History::new());
        assert!((v[0] - oracle).abs() < 1e-12);
        assert_eq!(v[0] + v[1], 0.0);
    }

    #[test]
    fn kuhn_uniform_exact_value() {
        // Enumerate the 6 deals and all betting lines by hand-written rules.
        let tree = load_tree("kuhn").unwrap();
        let joint = JointPolicy::<Rational64>::uniform(&tree);
        let v = expected_value(&tree, &joint).unwrap();
        let half = Rational64::new(1, 2);
        let mut total = Rational64::from_integer(0);
        for c0 in 0..3i64 {
            for c1 in 0..3i64 {
                if c0 == c1 {
                    continue;
                }
                let win = if c0 > c1 { 1 } else { -1 };
                let w = |x: i64| Rational64::from_integer(x);
                // pp, pbp, pbb, bp, bb
                let line = half * half * w(win)
                    + half * half * half * w(-1)
                    + half * half * half * w(2 * win)
                    + half * half * w(1)
                    + half * half * w(2 * win);
                total += line * Rational64::new(1, 6);
            }
        }
        assert_eq!(v[0], total);
    }

    #[test]
    fn matrix_game_bilinear_value() {
        let tree = GameTree::build(&MatrixGame::new("m", vec![vec![3, -1], vec![0, 2]])).unwrap();
        let p0 = TabularPolicy::from_table(&tree, Player::P0, vec![vec![0.25, 0.75]]).unwrap();
        let p1 = TabularPolicy::from_table(&tree, Player::P1, vec![vec![0.5, 0.5]]).unwrap();
        let v = expected_value(&tree, &JointPolicy::new(p0, p1).unwrap()).unwrap();
        // 0.25*(1.5 - 0.5) + 0.75*(0 + 1)
        assert!((v[0] - 1.0f64).abs() < 1e-15);
    }

    #[test]
    fn single_pass_matches_naive_definition() {
        let tree = load_tree("kuhn").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let joint = random_joint(&tree, &mut rng);
            let eval = evaluate(&tree, &joint).unwrap();
            for p in Player::BOTH {
                let naive = naive_counterfactual(&tree, &joint, p);
                for (a, b) in eval.counterfactual[p.index()].action_values.iter().flatten().zip(naive.iter().flatten()) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn counterfactual_state_values_sum_to_root_value() {
        let tree = load_tree("kuhn").unwrap();
        let joint = JointPolicy::<f64>::uniform(&tree);
        let eval = evaluate(&tree, &joint).unwrap();
        // Root infostates of player 0 partition the tree.
        let roots: f64 = tree
            .infostates(Player::P0)
            .iter()
            .enumerate()
            .filter(|(_, s)| s.parent.is_none())
            .map(|(i, _)| eval.counterfactual[0].state_values[i])
            .sum();
        assert!((roots - eval.root_values()[0]).abs() < 1e-12);
    }

    #[test]
    fn kuhn_q_value_is_average_over_deals() {
        // P1 holds J after P0 passed: P0 holds Q or K with equal weight.
        let tree = load_tree("kuhn").unwrap();
        let joint = JointPolicy::<f64>::uniform(&tree);
        let q = q_values(&tree, &joint, Player::P1, ZeroMass::Error).unwrap();
        let s = tree.infostate_index(&InfoStateKey::new(Player::P1, b"Jp".to_vec())).unwrap();
        // pass: showdown -1. bet: P0 folds half (+1) or calls half (-2).
        let per_deal_bet = 0.5 * 1.0 + 0.5 * -2.0;
        assert_eq!(q.action_values[s], vec![-1.0, per_deal_bet]);
    }

    #[test]
    fn zero_mass_is_an_error_unless_fallback() {
        let tree = load_tree("kuhn").unwrap();
        let mut joint = JointPolicy::<f64>::uniform(&tree);
        for s in 0..tree.num_infostates(Player::P0) {
            if tree.infostate(Player::P0, s).parent.is_none() {
                joint[Player::P0].set(s, crate::policy::SimplexVector::pure(2, 0));
            }
        }
        // P0 never bets first, so P1 never sees a bet.
        match q_values(&tree, &joint, Player::P1, ZeroMass::Error) {
            Err(ValueError::ZeroReachMass { player, key }) => {
                assert_eq!(player, Player::P1);
                assert!(key.ends_with('b'));
            }
            other => panic!("unexpected {other:?}"),
        }
        let q = q_values(&tree, &joint, Player::P1, ZeroMass::Fallback).unwrap();
        assert_eq!(q.degenerate.len(), 3);
    }

    #[test]
    fn single_member_infostate_ignores_reach() {
        let game = MatrixGame::new("m", vec![vec![1, 5]]);
        let tree = GameTree::build(&game).unwrap();
        let joint = JointPolicy::<f64>::uniform(&tree);
        let q = q_values(&tree, &joint, Player::P1, ZeroMass::Error).unwrap();
        assert_eq!(q.action_values[0], vec![-1.0, -5.0]);
    }

    #[test]
    fn root_counterfactual_values_equal_q_without_chance() {
        let tree = GameTree::build(&MatrixGame::new("m", vec![vec![2, 0], vec![1, 3]])).unwrap();
        let p0 = TabularPolicy::from_table(&tree, Player::P0, vec![vec![0.3, 0.7]]).unwrap();
        let joint = JointPolicy::new(p0, TabularPolicy::uniform(&tree, Player::P1)).unwrap();
        let cf = counterfactual_values(&tree, &joint, Player::P0).unwrap();
        let q = q_values(&tree, &joint, Player::P0, ZeroMass::Error).unwrap();
        assert_eq!(cf.action_values, q.action_values);
    }

    #[test]
    fn counterfactual_values_scale_with_opponent_reach() {
        let tree = load_tree("kuhn").unwrap();
        let with_bet = |b: f64| {
            let mut joint = JointPolicy::<f64>::uniform(&tree);
            for card in [b"Q", b"K"] {
                let s = tree.infostate_index(&InfoStateKey::new(Player::P0, card.to_vec())).unwrap();
                joint[Player::P0].set(s, crate::policy::SimplexVector::new(vec![1.0 - b, b]).unwrap());
            }
            joint
        };
        let s = tree.infostate_index(&InfoStateKey::new(Player::P1, b"Jb".to_vec())).unwrap();
        let full = counterfactual_values(&tree, &with_bet(0.6), Player::P1).unwrap();
        let half = counterfactual_values(&tree, &with_bet(0.3), Player::P1).unwrap();
        for (a, b) in full.action_values[s].iter().zip(&half.action_values[s]) {
            assert!((a / 2.0 - b).abs() < 1e-15);
        }
    }

    #[test]
    fn regret_against_own_policy_sums_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for name in ["kuhn", "leduc"] {
            let tree = load_tree(name).unwrap();
            let joint = random_joint(&tree, &mut rng);
            let eval = evaluate(&tree, &joint).unwrap();
            for p in Player::BOTH {
                let r = &eval.counterfactual[p.index()];
                for s in 0..r.action_values.len() {
                    let pi = joint[p].probs(s);
                    let total: f64 = pi
                        .iter()
                        .zip(&r.action_values[s])
                        .map(|(p, q)| p * (q - r.state_values[s]))
                        .sum();
                    assert!(total.abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn q_is_counterfactual_over_mass() {
        let tree = load_tree("leduc").unwrap();
        let joint = random_joint(&tree, &mut ChaCha8Rng::seed_from_u64(3));
        let eval = evaluate(&tree, &joint).unwrap();
        for p in Player::BOTH {
            let q = eval.q_values(&tree, p, ZeroMass::Error).unwrap();
            let cf = &eval.counterfactual[p.index()];
            for s in 0..q.action_values.len() {
                for (a, b) in q.action_values[s].iter().zip(&cf.action_values[s]) {
                    assert!((a - b / cf.reach_mass[s]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn full_reach_normalization_coincides() {
        // Own reach is constant within an infostate, so dividing by total
        // reach gives the same q as dividing by opponent reach.
        let tree = load_tree("leduc").unwrap();
        let joint = random_joint(&tree, &mut ChaCha8Rng::seed_from_u64(5));
        let eval = evaluate(&tree, &joint).unwrap();
        for p in Player::BOTH {
            let q = eval.q_values(&tree, p, ZeroMass::Error).unwrap();
            for (s, info) in tree.infostates(p).iter().enumerate() {
                let own: Vec<f64> = info.members.iter().map(|&h| eval.reach.own(p, h)).collect();
                assert!(own.iter().all(|&x| (x - own[0]).abs() < 1e-15));
                let den: f64 = info.members.iter().map(|&h| eval.reach.total(h)).sum();
                for a in 0..info.num_actions() {
                    let num: f64 = info
                        .members
                        .iter()
                        .map(|&h| {
                            let NodeKind::Decision { children, .. } = &tree.node(h).kind else {
                                unreachable!()
                            };
                            eval.reach.total(h) * sign(p, eval.node_values[children[a]])
                        })
                        .sum();
                    assert!((num / den - q.action_values[s][a]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn reach_factorizes_on_every_game() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for name in ["kuhn", "leduc", "goofspiel_4", "liars_dice_11"] {
            let tree = load_tree(name).unwrap();
            for round in 0..5 {
                let joint = random_joint(&tree, &mut rng);
                let reach = ReachDecomposition::compute(&tree, &joint).unwrap();
                assert_eq!(reach.total(0), 1.0);
                assert_eq!(reach.own(Player::P0, 0), 1.0);
                // Path walking is quadratic; spot-check a stride on the big game.
                let stride = if tree.num_nodes() > 50_000 { 97 } else { 1 };
                for h in (round..tree.num_nodes()).step_by(stride) {
                    for p in Player::BOTH {
                        let t = reach.own(p, h) * reach.opp(p, h);
                        assert!((t - reach.total(h)).abs() <= 1e-15);
                    }
                    if stride == 1 || h % (stride * 10) == round {
                        let f = path_factors(&tree, &joint, h);
                        assert!((f[0] - reach.own(Player::P0, h)).abs() < 1e-14);
                        assert!((f[1] - reach.own(Player::P1, h)).abs() < 1e-14);
                        assert!((f[2] - reach.chance(h)).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn missing_infostate_is_reported() {
        let tree = load_tree("kuhn").unwrap();
        let short = TabularPolicy::<f64>::from_rows_unchecked(Player::P0, vec![vec![0.5, 0.5]; 4]);
        let joint = JointPolicy::new(short, TabularPolicy::uniform(&tree, Player::P1)).unwrap();
        assert!(matches!(
            expected_value(&tree, &joint),
            Err(ValueError::Policy(PolicyError::MissingInfostate(_)))
        ));
    }

    proptest::proptest! {
        #![proptest_config(proptest::test_runner::Config::with_cases(24))]

        #[test]
        fn value_identities_hold_for_random_policies(seed in proptest::prelude::any::<u64>(), game in 0usize..3) {
            let tree = load_tree(["kuhn", "leduc", "goofspiel_4"][game]).unwrap();
            let joint = random_joint(&tree, &mut ChaCha8Rng::seed_from_u64(seed));
            let eval = evaluate(&tree, &joint).unwrap();
            let v = eval.root_values();
            proptest::prop_assert!((v[0] + v[1]).abs() < 1e-12);
            for p in Player::BOTH {
                let cf = &eval.counterfactual[p.index()];
                let q = eval.q_values(&tree, p, ZeroMass::Error).unwrap();
                for s in 0..cf.action_values.len() {
                    let pi = joint[p].probs(s);
                    let vc: f64 = pi.iter().zip(&cf.action_values[s]).map(|(p, q)| p * q).sum();
                    proptest::prop_assert!((vc - cf.state_values[s]).abs() < 1e-9);
                    for (a, b) in q.action_values[s].iter().zip(&cf.action_values[s]) {
                        proptest::prop_assert!((a - b / cf.reach_mass[s]).abs() < 1e-9);
                    }
                }
            }
        }
    }
}
