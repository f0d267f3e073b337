//! Kuhn poker: three cards, one ante, a single betting round with at most
//! one bet of one chip.

use num_rational::Rational64;

use crate::game::{Action, GameDynamics, History, InfoStateKey, Player, Turn};

pub const PASS: u32 = 0;
pub const BET: u32 = 1;

const CARDS: [char; 3] = ['J', 'Q', 'K'];

#[derive(Clone, Copy, Debug, Default)]
pub struct Kuhn;

impl Kuhn {
    fn betting(h: &History) -> &[u32] {
        h.actions().get(2..).unwrap_or(&[])
    }

    fn is_over(bets: &[u32]) -> bool {
        matches!(
            bets,
            [PASS, PASS] | [BET, PASS] | [BET, BET] | [PASS, BET, PASS] | [PASS, BET, BET]
        )
    }
}

fn bet_char(a: u32) -> u8 {
    if a == PASS {
        b'p'
    } else {
        b'b'
    }
}

impl GameDynamics for Kuhn {
    fn name(&self) -> &str {
        "kuhn"
    }

    fn turn(&self, h: &History) -> Turn {
        if h.len() < 2 {
            return Turn::Chance;
        }
        let bets = Self::betting(h);
        if Self::is_over(bets) {
            Turn::Terminal
        } else if bets.len() % 2 == 0 {
            Turn::Player(Player::P0)
        } else {
            Turn::Player(Player::P1)
        }
    }

    fn legal_actions(&self, h: &History) -> Vec<Action> {
        match self.turn(h) {
            Turn::Player(_) => vec![Action::new(PASS, "pass"), Action::new(BET, "bet")],
            _ => Vec::new(),
        }
    }

    fn chance_outcomes(&self, h: &History) -> Vec<(Action, Rational64)> {
        let dealt = h.actions();
        match dealt.len() {
            0 => (0..3)
                .map(|c| (Action::new(c, CARDS[c as usize].to_string()), Rational64::new(1, 3)))
                .collect(),
            1 => (0..3)
                .filter(|&c| c != dealt[0])
                .map(|c| (Action::new(c, CARDS[c as usize].to_string()), Rational64::new(1, 2)))
                .collect(),
            _ => Vec::new(),
        }
    }

    fn utility(&self, h: &History, player: Player) -> i64 {
        let cards = &h.actions()[..2];
        let showdown = if cards[0] > cards[1] { 1 } else { -1 };
        let u0 = match Self::betting(h) {
            [PASS, PASS] => showdown,
            [BET, PASS] => 1,
            [PASS, BET, PASS] => -1,
            [BET, BET] | [PASS, BET, BET] => 2 * showdown,
            _ => 0,
        };
        if player == Player::P0 {
            u0
        } else {
            -u0
        }
    }

    fn info_state_key(&self, h: &History, player: Player) -> InfoStateKey {
        let mut bytes = Vec::with_capacity(4);
        if let Some(&c) = h.actions().get(player.index()) {
            bytes.push(CARDS[c as usize] as u8);
        }
        bytes.extend(Self::betting(h).iter().map(|&a| bet_char(a)));
        InfoStateKey::new(player, bytes)
    }

    fn max_depth(&self) -> usize {
        5
    }

    fn num_distinct_actions(&self) -> usize {
        2
    }

    fn encoding_size(&self) -> usize {
        11
    }

    /// Layout: player (2) | private card (3) | three betting slots (2 each).
    fn write_encoding(&self, h: &History, player: Player, out: &mut Vec<bool>) {
        out.extend((0..2).map(|p| p == player.index()));
        let card = h.actions().get(player.index()).copied();
        out.extend((0..3).map(|c| Some(c) == card));
        let bets = Self::betting(h);
        for slot in 0..3 {
            let a = bets.get(slot).copied();
            out.extend((0..2).map(|x| Some(x) == a));
        }
    }
}
