//! Leduc poker: six cards in three ranks, two betting rounds (bet sizes 2 and
//! 4) with a single public card dealt between them.
//!
//! Each round allows at most two wagers: a bet and one raise on top of it.
//! Player 0 opens both rounds. Folding is only offered when facing a wager.

use num_rational::Rational64;

use crate::game::{Action, GameDynamics, History, InfoStateKey, Player, Turn};

pub const FOLD: u32 = 0;
pub const CALL: u32 = 1;
pub const RAISE: u32 = 2;

const NUM_CARDS: u32 = 6;
const MAX_RAISES: usize = 2;
const BET_SIZES: [i64; 2] = [2, 4];
const MAX_ROUND_ACTIONS: usize = 4;

fn card_label(c: u32) -> String {
    let rank = ['J', 'Q', 'K'][(c / 2) as usize];
    let suit = ['s', 'h'][(c % 2) as usize];
    format!("{rank}{suit}")
}

fn rank(c: u32) -> u32 {
    c / 2
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Leduc;

#[derive(Clone, Debug, Default)]
struct State {
    private: [Option<u32>; 2],
    public: Option<u32>,
    rounds: [Vec<u32>; 2],
    round: usize,
    contrib: [i64; 2],
    raises: usize,
    folded: Option<usize>,
    awaiting_public: bool,
    finished: bool,
}

impl State {
    fn replay(h: &History) -> State {
        let mut s = State {
            contrib: [1, 1],
            ..State::default()
        };
        for &a in h.actions() {
            if s.private[0].is_none() {
                s.private[0] = Some(a);
            } else if s.private[1].is_none() {
                s.private[1] = Some(a);
            } else if s.awaiting_public {
                s.public = Some(a);
                s.awaiting_public = false;
                s.round = 1;
                s.raises = 0;
            } else {
                s.bet(a);
            }
        }
        s
    }

    fn to_act(&self) -> usize {
        self.rounds[self.round].len() % 2
    }

    fn bet(&mut self, a: u32) {
        let me = self.to_act();
        let opp = 1 - me;
        self.rounds[self.round].push(a);
        match a {
            FOLD => {
                self.folded = Some(me);
                self.finished = true;
            }
            CALL => {
                self.contrib[me] = self.contrib[opp];
                if self.rounds[self.round].len() >= 2 {
                    if self.round == 0 {
                        self.awaiting_public = true;
                    } else {
                        self.finished = true;
                    }
                }
            }
            _ => {
                self.contrib[me] = self.contrib[opp] + BET_SIZES[self.round];
                self.raises += 1;
            }
        }
    }

    fn dealt(&self) -> Vec<u32> {
        self.private.iter().chain([&self.public]).flatten().copied().collect()
    }

    fn strength(&self, p: usize) -> (bool, u32) {
        let card = self.private[p].expect("dealt");
        let public = self.public.expect("dealt");
        (rank(card) == rank(public), rank(card))
    }
}

impl GameDynamics for Leduc {
    fn name(&self) -> &str {
        "leduc"
    }

    fn turn(&self, h: &History) -> Turn {
        let s = State::replay(h);
        if s.finished {
            Turn::Terminal
        } else if s.private[1].is_none() || s.awaiting_public {
            Turn::Chance
        } else {
            Turn::Player(Player::from_index(s.to_act()).expect("two players"))
        }
    }

    fn legal_actions(&self, h: &History) -> Vec<Action> {
        if !matches!(self.turn(h), Turn::Player(_)) {
            return Vec::new();
        }
        let s = State::replay(h);
        let me = s.to_act();
        let mut out = Vec::with_capacity(3);
        if s.contrib[me] < s.contrib[1 - me] {
            out.push(Action::new(FOLD, "fold"));
        }
        out.push(Action::new(CALL, "call"));
        if s.raises < MAX_RAISES {
            out.push(Action::new(RAISE, "raise"));
        }
        out
    }

    fn chance_outcomes(&self, h: &History) -> Vec<(Action, Rational64)> {
        if self.turn(h) != Turn::Chance {
            return Vec::new();
        }
        let dealt = State::replay(h).dealt();
        let remaining = NUM_CARDS as i64 - dealt.len() as i64;
        (0..NUM_CARDS)
            .filter(|c| !dealt.contains(c))
            .map(|c| (Action::new(c, card_label(c)), Rational64::new(1, remaining)))
            .collect()
    }

    fn utility(&self, h: &History, player: Player) -> i64 {
        let s = State::replay(h);
        let p = player.index();
        let winner = match s.folded {
            Some(f) => Some(1 - f),
            None => {
                let (a, b) = (s.strength(0), s.strength(1));
                match a.cmp(&b) {
                    std::cmp::Ordering::Greater => Some(0),
                    std::cmp::Ordering::Less => Some(1),
                    std::cmp::Ordering::Equal => None,
                }
            }
        };
        match winner {
            Some(w) if w == p => s.contrib[1 - p],
            Some(_) => -s.contrib[p],
            None => 0,
        }
    }

    fn info_state_key(&self, h: &History, player: Player) -> InfoStateKey {
        let s = State::replay(h);
        let mut key = String::new();
        if let Some(c) = s.private[player.index()] {
            key.push_str(&card_label(c));
        }
        key.push(':');
        let code = |a: &u32| ['f', 'c', 'r'][*a as usize];
        key.extend(s.rounds[0].iter().map(code));
        if let Some(c) = s.public {
            key.push('/');
            key.push_str(&card_label(c));
            key.push(':');
            key.extend(s.rounds[1].iter().map(code));
        }
        InfoStateKey::new(player, key.into_bytes())
    }

    fn max_depth(&self) -> usize {
        3 + 2 * MAX_ROUND_ACTIONS
    }

    fn num_distinct_actions(&self) -> usize {
        3
    }

    fn encoding_size(&self) -> usize {
        2 + 6 + 6 + 2 * MAX_ROUND_ACTIONS * 3
    }

    /// Layout: player (2) | private card (6) | public card (6) |
    /// round one slots (4 x 3) | round two slots (4 x 3).
    fn write_encoding(&self, h: &History, player: Player, out: &mut Vec<bool>) {
        let s = State::replay(h);
        out.extend((0..2).map(|p| p == player.index()));
        let own = s.private[player.index()];
        out.extend((0..NUM_CARDS).map(|c| Some(c) == own));
        out.extend((0..NUM_CARDS).map(|c| Some(c) == s.public));
        for round in &s.rounds {
            for slot in 0..MAX_ROUND_ACTIONS {
                let a = round.get(slot).copied();
                out.extend((0..3).map(|x| Some(x) == a));
            }
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
    fn fold_is_only_offered_facing_a_wager() {
        let root = h(&[0, 2]);
        let ids: Vec<u32> = Leduc.legal_actions(&root).iter().map(|a| a.id).collect();
        assert_eq!(ids, vec![CALL, RAISE]);
        let ids: Vec<u32> = Leduc
            .legal_actions(&h(&[0, 2, RAISE]))
            .iter()
            .map(|a| a.id)
            .collect();
        assert_eq!(ids, vec![FOLD, CALL, RAISE]);
        // Two wagers cap the round.
        let ids: Vec<u32> = Leduc
            .legal_actions(&h(&[0, 2, RAISE, RAISE]))
            .iter()
            .map(|a| a.id)
            .collect();
        assert_eq!(ids, vec![FOLD, CALL]);
    }

    #[test]
    fn public_card_excludes_private_cards() {
        let after_round = h(&[0, 2, CALL, CALL]);
        assert_eq!(Leduc.turn(&after_round), Turn::Chance);
        let outcomes = Leduc.chance_outcomes(&after_round);
        let ids: Vec<u32> = outcomes.iter().map(|(a, _)| a.id).collect();
        assert_eq!(ids, vec![1, 3, 4, 5]);
        assert!(outcomes.iter().all(|(_, p)| *p == Rational64::new(1, 4)));
    }

    #[test]
    fn chip_accounting() {
        // P0 Js, P1 Qs, both check, public Jh: P0 pairs. Round two: bet, call.
        let z = h(&[0, 2, CALL, CALL, 1, RAISE, CALL]);
        assert!(Leduc.is_terminal(&z));
        assert_eq!(Leduc.utility(&z, Player::P0), 5);
        assert_eq!(Leduc.utility(&z, Player::P1), -5);
        // Bet, raise, fold in round one: P0 folds and loses 1 + 2.
        let z = h(&[0, 2, RAISE, RAISE, FOLD]);
        assert_eq!(Leduc.utility(&z, Player::P0), -3);
        assert_eq!(Leduc.utility(&z, Player::P1), 3);
        // Same-rank private cards tie without a pair.
        let z = h(&[0, 1, CALL, CALL, 4, CALL, CALL]);
        assert_eq!(Leduc.utility(&z, Player::P0), 0);
    }

    #[test]
    fn keys_and_encoding() {
        let x = h(&[0, 2, RAISE, CALL, 5, CALL]);
        assert_eq!(Leduc.info_state_key(&x, Player::P1).bytes, b"Qs:rc/Kh:c");
        let bits = Leduc.encode(&x, Player::P1).unwrap();
        assert_eq!(bits.len(), 38);
        assert!(bits.len() <= 52);
    }
}
