//! Liar's Dice with one six-sided die per player. Sixes are wild.
//!
//! Bids `q-f` are ordered by quantity then face (`1-1 < ... < 1-6 < 2-1 <
//! ... < 2-6`); each bid must exceed the previous one and "Liar" may be
//! called after any bid.

use num_rational::Rational64;

use crate::game::{Action, GameDynamics, History, InfoStateKey, Player, Turn};

const FACES: u32 = 6;
const NUM_BIDS: u32 = 12;
pub const LIAR: u32 = NUM_BIDS;

pub fn bid_quantity(bid: u32) -> u32 {
    bid / FACES + 1
}

pub fn bid_face(bid: u32) -> u32 {
    bid % FACES + 1
}

fn bid_label(bid: u32) -> String {
    if bid == LIAR {
        "liar".to_string()
    } else {
        format!("{}-{}", bid_quantity(bid), bid_face(bid))
    }
}

/// Whether the claim "at least `q` dice show `f`" holds for the two dice.
pub fn bid_satisfied(bid: u32, dice: [u32; 2]) -> bool {
    let (q, f) = (bid_quantity(bid), bid_face(bid));
    let count = dice
        .iter()
        .filter(|&&d| d == f || d == FACES)
        .count() as u32;
    count >= q
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LiarsDice;

impl LiarsDice {
    fn bids(h: &History) -> &[u32] {
        h.actions().get(2..).unwrap_or(&[])
    }

    fn die(h: &History, p: Player) -> Option<u32> {
        h.actions().get(p.index()).map(|&d| d + 1)
    }
}

impl GameDynamics for LiarsDice {
    fn name(&self) -> &str {
        "liars_dice_11"
    }

    fn turn(&self, h: &History) -> Turn {
        if h.len() < 2 {
            return Turn::Chance;
        }
        let bids = Self::bids(h);
        if bids.last() == Some(&LIAR) {
            Turn::Terminal
        } else {
            Turn::Player(Player::from_index(bids.len() % 2).expect("two players"))
        }
    }

    fn legal_actions(&self, h: &History) -> Vec<Action> {
        if !matches!(self.turn(h), Turn::Player(_)) {
            return Vec::new();
        }
        let bids = Self::bids(h);
        let first = bids.last().map_or(0, |&b| b + 1);
        let mut out: Vec<Action> = (first..NUM_BIDS)
            .map(|b| Action::new(b, bid_label(b)))
            .collect();
        if !bids.is_empty() {
            out.push(Action::new(LIAR, bid_label(LIAR)));
        }
        out
    }

    fn chance_outcomes(&self, h: &History) -> Vec<(Action, Rational64)> {
        if h.len() >= 2 {
            return Vec::new();
        }
        (0..FACES)
            .map(|d| (Action::new(d, (d + 1).to_string()), Rational64::new(1, FACES as i64)))
            .collect()
    }

    fn utility(&self, h: &History, player: Player) -> i64 {
        let bids = Self::bids(h);
        let calls = bids.len() - 1;
        let caller = calls % 2;
        let last = bids[calls - 1];
        let dice = [
            Self::die(h, Player::P0).expect("dealt"),
            Self::die(h, Player::P1).expect("dealt"),
        ];
        let winner = if bid_satisfied(last, dice) {
            1 - caller
        } else {
            caller
        };
        if winner == player.index() {
            1
        } else {
            -1
        }
    }

    fn info_state_key(&self, h: &History, player: Player) -> InfoStateKey {
        let mut key = String::new();
        if let Some(d) = Self::die(h, player) {
            key.push_str(&d.to_string());
        }
        key.push(':');
        let labels: Vec<String> = Self::bids(h).iter().map(|&b| bid_label(b)).collect();
        key.push_str(&labels.join(","));
        InfoStateKey::new(player, key.into_bytes())
    }

    fn max_depth(&self) -> usize {
        2 + NUM_BIDS as usize + 1
    }

    fn num_distinct_actions(&self) -> usize {
        NUM_BIDS as usize + 1
    }

    fn encoding_size(&self) -> usize {
        2 + FACES as usize + NUM_BIDS as usize
    }

    /// Layout: player (2) | own die (6) | one bit per bid already made.
    /// Bids strictly increase and players alternate, so the set of bids
    /// determines the whole bidding sequence.
    fn write_encoding(&self, h: &History, player: Player, out: &mut Vec<bool>) {
        out.extend((0..2).map(|p| p == player.index()));
        let die = Self::die(h, player);
        out.extend((1..=FACES).map(|f| Some(f) == die));
        let bids = Self::bids(h);
        out.extend((0..NUM_BIDS).map(|b| bids.contains(&b)));
    }
}
