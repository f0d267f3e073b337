use std::ops::{Index, IndexMut};

use crate::game::{GameTree, Player};
use crate::policy::{softmax, PolicyError, SimplexVector};
use crate::scalar::{Real, Scalar};

/// Behavioral policy for one player: a distribution over legal actions for
/// every infostate, indexed in the tree's key order.
#[derive(Clone, Debug, PartialEq)]
pub struct TabularPolicy<T> {
    player: Player,
    table: Vec<Vec<T>>,
}

impl<T: Scalar> TabularPolicy<T> {
    pub fn uniform(tree: &GameTree, player: Player) -> Self {
        let table = tree
            .infostates(player)
            .iter()
            .map(|s| SimplexVector::uniform(s.num_actions()).into_inner())
            .collect();
        TabularPolicy { player, table }
    }

    /// Checks shape against the tree and that each row is a distribution.
    pub fn from_table(
        tree: &GameTree,
        player: Player,
        table: Vec<Vec<T>>,
    ) -> Result<Self, PolicyError> {
        let states = tree.infostates(player);
        if table.len() != states.len() {
            return Err(PolicyError::Shape(format!(
                "{} rows for {} infostates",
                table.len(),
                states.len()
            )));
        }
        for (row, s) in table.iter().zip(states) {
            if row.len() != s.num_actions() {
                return Err(PolicyError::Shape(format!(
                    "{} has {} actions, row has {}",
                    s.key,
                    s.num_actions(),
                    row.len()
                )));
            }
            SimplexVector::new(row.clone()).map_err(|e| match e {
                PolicyError::NotOnSimplex(m) => PolicyError::NotOnSimplex(format!("{}: {m}", s.key)),
                other => other,
            })?;
        }
        Ok(TabularPolicy { player, table })
    }

    /// A deterministic policy from per-infostate action positions.
    pub fn pure(tree: &GameTree, player: Player, choices: &[usize]) -> Self {
        let table = tree
            .infostates(player)
            .iter()
            .zip(choices)
            .map(|(s, &c)| SimplexVector::pure(s.num_actions(), c).into_inner())
            .collect();
        TabularPolicy { player, table }
    }

    pub(crate) fn from_rows_unchecked(player: Player, table: Vec<Vec<T>>) -> Self {
        TabularPolicy { player, table }
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn probs(&self, infostate: usize) -> &[T] {
        &self.table[infostate]
    }

    pub fn set(&mut self, infostate: usize, probs: SimplexVector<T>) {
        assert_eq!(probs.len(), self.table[infostate].len());
        self.table[infostate] = probs.into_inner();
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.table
    }

    pub fn to_f64(&self) -> TabularPolicy<f64> {
        TabularPolicy {
            player: self.player,
            table: self
                .table
                .iter()
                .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
                .collect(),
        }
    }

    /// Largest absolute entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &TabularPolicy<T>) -> f64 {
        self.table
            .iter()
            .flatten()
            .zip(other.table.iter().flatten())
            .map(|(a, b)| (*a - *b).abs_value().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

impl<T: Scalar> TabularPolicy<T> {
    /// Own realization probability of every infostate: the product of this
    /// policy's probabilities on the owner's earlier actions.
    pub fn realization(&self, tree: &GameTree) -> Vec<T> {
        let mut x = vec![T::one(); self.table.len()];
        for &s in tree.top_down_order(self.player) {
            if let Some((prev, a)) = tree.infostate(self.player, s).parent {
                x[s] = x[prev] * self.table[prev][a];
            }
        }
        x
    }
}

/// Behavioral form of the mixed strategy `(1 - λ)·a + λ·b`.
///
/// Each infostate takes the realization-weighted average of the two rows;
/// where neither policy reaches the state, `a`'s row is kept.
pub fn realization_mix<T: Scalar>(
    tree: &GameTree,
    a: &TabularPolicy<T>,
    b: &TabularPolicy<T>,
    lambda: T,
) -> TabularPolicy<T> {
    assert_eq!(a.player, b.player);
    let xa = a.realization(tree);
    let xb = b.realization(tree);
    let table = a
        .table
        .iter()
        .zip(&b.table)
        .enumerate()
        .map(|(s, (ra, rb))| {
            let wa = (T::one() - lambda) * xa[s];
            let wb = lambda * xb[s];
            let den = wa + wb;
            if den == T::zero() {
                return ra.clone();
            }
            let step = wb / den;
            ra.iter().zip(rb).map(|(&p, &q)| p + step * (q - p)).collect()
        })
        .collect();
    TabularPolicy {
        player: a.player,
        table,
    }
}

/// Uniform distribution at every infostate of `player`.
pub fn uniform_policy<T: Scalar>(tree: &GameTree, player: Player) -> TabularPolicy<T> {
    TabularPolicy::uniform(tree, player)
}

/// One policy per player.
#[derive(Clone, Debug, PartialEq)]
pub struct JointPolicy<T> {
    players: [TabularPolicy<T>; 2],
}

impl<T: Scalar> JointPolicy<T> {
    pub fn new(p0: TabularPolicy<T>, p1: TabularPolicy<T>) -> Result<Self, PolicyError> {
        if p0.player() != Player::P0 || p1.player() != Player::P1 {
            return Err(PolicyError::Shape("policies given in the wrong player order".into()));
        }
        Ok(JointPolicy { players: [p0, p1] })
    }

    pub fn uniform(tree: &GameTree) -> Self {
        JointPolicy {
            players: Player::BOTH.map(|p| TabularPolicy::uniform(tree, p)),
        }
    }

    /// Replaces `player`'s component.
    pub fn with(&self, policy: TabularPolicy<T>) -> Self {
        let mut out = self.clone();
        let p = policy.player().index();
        out.players[p] = policy;
        out
    }

    /// Checks that both components match the tree's infostate layout.
    pub fn check_shape(&self, tree: &GameTree) -> Result<(), PolicyError> {
        for p in Player::BOTH {
            let states = tree.infostates(p);
            let pol = &self[p];
            if pol.len() != states.len() {
                let missing = states.get(pol.len()).map(|s| s.key.to_string());
                return Err(PolicyError::MissingInfostate(missing.unwrap_or_default()));
            }
            if let Some(s) = states
                .iter()
                .zip(pol.rows())
                .find(|(s, row)| s.num_actions() != row.len())
            {
                return Err(PolicyError::Shape(format!("row for {} has wrong length", s.0.key)));
            }
        }
        Ok(())
    }

    pub fn to_f64(&self) -> JointPolicy<f64> {
        JointPolicy {
            players: [self.players[0].to_f64(), self.players[1].to_f64()],
        }
    }

    pub fn into_parts(self) -> [TabularPolicy<T>; 2] {
        self.players
    }
}

impl<T> Index<Player> for JointPolicy<T> {
    type Output = TabularPolicy<T>;

    fn index(&self, p: Player) -> &TabularPolicy<T> {
        &self.players[p.index()]
    }
}

impl<T> IndexMut<Player> for JointPolicy<T> {
    fn index_mut(&mut self, p: Player) -> &mut TabularPolicy<T> {
        &mut self.players[p.index()]
    }
}

/// Unconstrained per-infostate parameters of a softmax policy.
#[derive(Clone, Debug, PartialEq)]
pub struct LogitTable<T> {
    player: Player,
    logits: Vec<Vec<T>>,
}

impl<T: Real> LogitTable<T> {
    pub fn zeros(tree: &GameTree, player: Player) -> Self {
        LogitTable {
            player,
            logits: tree
                .infostates(player)
                .iter()
                .map(|s| vec![T::zero(); s.num_actions()])
                .collect(),
        }
    }

    pub fn from_rows(
        tree: &GameTree,
        player: Player,
        logits: Vec<Vec<T>>,
    ) -> Result<Self, PolicyError> {
        let states = tree.infostates(player);
        let ok = logits.len() == states.len()
            && logits.iter().zip(states).all(|(r, s)| r.len() == s.num_actions());
        if !ok {
            return Err(PolicyError::Shape("logit table does not match the tree".into()));
        }
        if logits.iter().flatten().any(|x| !x.is_finite()) {
            return Err(PolicyError::NonFinite);
        }
        Ok(LogitTable { player, logits })
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn row(&self, infostate: usize) -> &[T] {
        &self.logits[infostate]
    }

    pub fn row_mut(&mut self, infostate: usize) -> &mut [T] {
        &mut self.logits[infostate]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.logits
    }

    pub fn len(&self) -> usize {
        self.logits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logits.is_empty()
    }

    pub fn all_finite(&self) -> bool {
        self.logits.iter().flatten().all(|x| x.is_finite())
    }

    pub fn policy(&self) -> TabularPolicy<T> {
        TabularPolicy::from_rows_unchecked(
            self.player,
            self.logits.iter().map(|r| softmax(r).into_inner()).collect(),
        )
    }
}
