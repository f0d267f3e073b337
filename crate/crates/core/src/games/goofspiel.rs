//! Imperfect-information Goofspiel with four cards and a fixed, decreasing
//! point deck. Simultaneous bids are serialized (player 0, then player 1);
//! after each round both players only learn whether they won, lost or tied.

use std::cmp::Ordering;

use num_rational::Rational64;

use crate::game::{Action, GameDynamics, History, InfoStateKey, Player, Turn};

const CARDS: u32 = 4;

#[derive(Clone, Copy, Debug, Default)]
pub struct Goofspiel;

impl Goofspiel {
    /// Point card contested in round `r` (0-based).
    pub fn point_card(r: usize) -> i64 {
        CARDS as i64 - r as i64
    }

    fn rounds(h: &History) -> impl Iterator<Item = (u32, u32)> + '_ {
        h.actions().chunks_exact(2).map(|c| (c[0], c[1]))
    }

    fn remaining(h: &History, p: Player) -> Vec<u32> {
        let used: Vec<u32> = h
            .actions()
            .iter()
            .skip(p.index())
            .step_by(2)
            .copied()
            .collect();
        (0..CARDS).filter(|c| !used.contains(c)).collect()
    }
}

fn outcome_char(own: u32, other: u32) -> char {
    match own.cmp(&other) {
        Ordering::Greater => 'W',
        Ordering::Less => 'L',
        Ordering::Equal => 'T',
    }
}

impl GameDynamics for Goofspiel {
    fn name(&self) -> &str {
        "goofspiel_4"
    }

    fn turn(&self, h: &History) -> Turn {
        if h.len() >= 2 * CARDS as usize {
            Turn::Terminal
        } else if h.len() % 2 == 0 {
            Turn::Player(Player::P0)
        } else {
            Turn::Player(Player::P1)
        }
    }

    fn legal_actions(&self, h: &History) -> Vec<Action> {
        match self.turn(h) {
            Turn::Player(p) => Self::remaining(h, p)
                .into_iter()
                .map(|c| Action::new(c, format!("bid{}", c + 1)))
                .collect(),
            _ => Vec::new(),
        }
    }

    fn chance_outcomes(&self, _h: &History) -> Vec<(Action, Rational64)> {
        Vec::new()
    }

    fn utility(&self, h: &History, player: Player) -> i64 {
        let mut points = [0i64; 2];
        for (r, (b0, b1)) in Self::rounds(h).enumerate() {
            match b0.cmp(&b1) {
                Ordering::Greater => points[0] += Self::point_card(r),
                Ordering::Less => points[1] += Self::point_card(r),
                Ordering::Equal => {}
            }
        }
        let diff = points[player.index()] - points[1 - player.index()];
        diff.signum()
    }

    fn info_state_key(&self, h: &History, player: Player) -> InfoStateKey {
        let mut key = String::new();
        for (b0, b1) in Self::rounds(h) {
            let (own, other) = if player == Player::P0 { (b0, b1) } else { (b1, b0) };
            key.push(char::from_digit(own + 1, 10).expect("digit"));
            key.push(outcome_char(own, other));
        }
        InfoStateKey::new(player, key.into_bytes())
    }

    fn max_depth(&self) -> usize {
        2 * CARDS as usize
    }

    fn num_distinct_actions(&self) -> usize {
        CARDS as usize
    }

    fn encoding_size(&self) -> usize {
        2 + (CARDS * CARDS) as usize + 3 * CARDS as usize
    }

    /// Layout: player (2) | own bid per completed round (4 x 4) |
    /// win/lose/tie per completed round (4 x 3).
    fn write_encoding(&self, h: &History, player: Player, out: &mut Vec<bool>) {
        out.extend((0..2).map(|p| p == player.index()));
        let rounds: Vec<(u32, u32)> = Self::rounds(h)
            .map(|(b0, b1)| if player == Player::P0 { (b0, b1) } else { (b1, b0) })
            .collect();
        for r in 0..CARDS as usize {
            let own = rounds.get(r).map(|x| x.0);
            out.extend((0..CARDS).map(|c| Some(c) == own));
        }
        for r in 0..CARDS as usize {
            let o = rounds.get(r).map(|&(a, b)| outcome_char(a, b));
            out.extend(['W', 'L', 'T'].iter().map(|c| Some(*c) == o));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(v: &[u32]) -> History {
        History::from(v.to_vec())
    }

    #[test]
    fn player_one_does_not_see_the_pending_bid() {
        let a = Goofspiel.info_state_key(&h(&[3]), Player::P1);
        let b = Goofspiel.info_state_key(&h(&[0]), Player::P1);
        assert_eq!(a, b);
        let after = Goofspiel.info_state_key(&h(&[3, 1]), Player::P1);
        assert_eq!(after.bytes, b"2L");
    }

    #[test]
    fn ties_discard_the_point_card() {
        // Round 1 tie (4 discarded); P0 wins 3 and 2, P1 wins 1.
        let z = h(&[0, 0, 3, 2, 2, 1, 1, 3]);
        assert!(Goofspiel.is_terminal(&z));
        assert_eq!(Goofspiel.utility(&z, Player::P0), 1);
        assert_eq!(Goofspiel.utility(&z, Player::P1), -1);
        let tie = h(&[0, 0, 1, 1, 2, 2, 3, 3]);
        assert_eq!(Goofspiel.utility(&tie, Player::P0), 0);
    }
}
