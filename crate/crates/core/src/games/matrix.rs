//! One-shot games: a normal-form matrix game played as an extensive-form
//! game (player 1 does not observe player 0's row), and a single decision.

use num_rational::Rational64;

use crate::game::{Action, GameDynamics, History, InfoStateKey, Player, Turn};

/// Row player is player 0; `payoffs[r][c]` is player 0's utility.
#[derive(Clone, Debug)]
pub struct MatrixGame {
    name: String,
    payoffs: Vec<Vec<i64>>,
}

impl MatrixGame {
    pub fn new(name: impl Into<String>, payoffs: Vec<Vec<i64>>) -> Self {
        assert!(!payoffs.is_empty() && !payoffs[0].is_empty());
        assert!(payoffs.iter().all(|r| r.len() == payoffs[0].len()));
        MatrixGame {
            name: name.into(),
            payoffs,
        }
    }

    pub fn matching_pennies() -> Self {
        Self::new("matching_pennies", vec![vec![1, -1], vec![-1, 1]])
    }

    fn rows(&self) -> usize {
        self.payoffs.len()
    }

    fn cols(&self) -> usize {
        self.payoffs[0].len()
    }
}

impl GameDynamics for MatrixGame {
    fn name(&self) -> &str {
        &self.name
    }

    fn turn(&self, h: &History) -> Turn {
        match h.len() {
            0 => Turn::Player(Player::P0),
            1 => Turn::Player(Player::P1),
            _ => Turn::Terminal,
        }
    }

    fn legal_actions(&self, h: &History) -> Vec<Action> {
        let n = match h.len() {
            0 => self.rows(),
            1 => self.cols(),
            _ => 0,
        };
        (0..n as u32).map(|a| Action::new(a, format!("a{a}"))).collect()
    }

    fn chance_outcomes(&self, _h: &History) -> Vec<(Action, Rational64)> {
        Vec::new()
    }

    fn utility(&self, h: &History, player: Player) -> i64 {
        let a = h.actions();
        let u0 = self.payoffs[a[0] as usize][a[1] as usize];
        if player == Player::P0 {
            u0
        } else {
            -u0
        }
    }

    fn info_state_key(&self, _h: &History, player: Player) -> InfoStateKey {
        InfoStateKey::new(player, Vec::new())
    }

    fn max_depth(&self) -> usize {
        2
    }

    fn num_distinct_actions(&self) -> usize {
        self.rows().max(self.cols())
    }

    fn encoding_size(&self) -> usize {
        2
    }

    fn write_encoding(&self, _h: &History, player: Player, out: &mut Vec<bool>) {
        out.extend((0..2).map(|p| p == player.index()));
    }
}

/// Player 0 picks one action and the game ends.
#[derive(Clone, Debug)]
pub struct SingleDecision {
    payoffs: Vec<i64>,
}

impl SingleDecision {
    pub fn new(payoffs: Vec<i64>) -> Self {
        assert!(!payoffs.is_empty());
        SingleDecision { payoffs }
    }
}

impl GameDynamics for SingleDecision {
    fn name(&self) -> &str {
        "single_decision"
    }

    fn turn(&self, h: &History) -> Turn {
        if h.is_empty() {
            Turn::Player(Player::P0)
        } else {
            Turn::Terminal
        }
    }

    fn legal_actions(&self, h: &History) -> Vec<Action> {
        if !h.is_empty() {
            return Vec::new();
        }
        (0..self.payoffs.len() as u32)
            .map(|a| Action::new(a, format!("a{a}")))
            .collect()
    }

    fn chance_outcomes(&self, _h: &History) -> Vec<(Action, Rational64)> {
        Vec::new()
    }

    fn utility(&self, h: &History, player: Player) -> i64 {
        let u0 = self.payoffs[h.actions()[0] as usize];
        if player == Player::P0 {
            u0
        } else {
            -u0
        }
    }

    fn info_state_key(&self, _h: &History, player: Player) -> InfoStateKey {
        InfoStateKey::new(player, Vec::new())
    }

    fn max_depth(&self) -> usize {
        1
    }

    fn num_distinct_actions(&self) -> usize {
        self.payoffs.len()
    }

    fn encoding_size(&self) -> usize {
        2
    }

    fn write_encoding(&self, _h: &History, player: Player, out: &mut Vec<bool>) {
        out.extend((0..2).map(|p| p == player.index()));
    }
}
