//! Extensive-form game abstraction.
//!
//! A game is described through [`GameDynamics`]: histories are plain action
//! sequences and every query recomputes whatever state it needs from them.
//! Solvers never talk to a `GameDynamics` directly during iteration; they use
//! the flat [`GameTree`] compiled from it once.

mod traverse;
mod tree;

use std::fmt;

use num_rational::Rational64;
use thiserror::Error;

pub use traverse::{enumerate_histories, enumerate_infostates, validate_perfect_recall};
pub use tree::{GameTree, InfoState, Node, NodeId, NodeKind};

/// One of the two non-chance players.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    P0,
    P1,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::P0, Player::P1];

    pub fn index(self) -> usize {
        match self {
            Player::P0 => 0,
            Player::P1 => 1,
        }
    }

    pub fn from_index(i: usize) -> Option<Player> {
        match i {
            0 => Some(Player::P0),
            1 => Some(Player::P1),
            _ => None,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::P0 => Player::P1,
            Player::P1 => Player::P0,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Who moves at a history.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Turn {
    Player(Player),
    Chance,
    Terminal,
}

/// A move. `id` indexes the game's global action space
/// (`0..num_distinct_actions`) for player moves and the chance outcome space
/// for chance moves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Action {
    pub id: u32,
    pub label: String,
}

impl Action {
    pub fn new(id: u32, label: impl Into<String>) -> Self {
        Action {
            id,
            label: label.into(),
        }
    }
}

/// Sequence of action ids applied from the empty history.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct History(Vec<u32>);

impl History {
    pub fn new() -> Self {
        History(Vec::new())
    }

    pub fn actions(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, action: u32) -> History {
        let mut next = self.0.clone();
        next.push(action);
        History(next)
    }

    pub fn is_prefix_of(&self, other: &History) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl From<Vec<u32>> for History {
    fn from(v: Vec<u32>) -> Self {
        History(v)
    }
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// A player's observation sequence, as a stable byte string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfoStateKey {
    pub player: Player,
    pub bytes: Vec<u8>,
}

impl InfoStateKey {
    pub fn new(player: Player, bytes: impl Into<Vec<u8>>) -> Self {
        InfoStateKey {
            player,
            bytes: bytes.into(),
        }
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.bytes)
    }
}

impl fmt::Display for InfoStateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let printable = self.bytes.iter().all(|b| b.is_ascii_graphic() || *b == b' ');
        if printable {
            write!(f, "p{}:{}", self.player, String::from_utf8_lossy(&self.bytes))
        } else {
            write!(f, "p{}:0x{}", self.player, self.to_hex())
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("unknown game `{0}`")]
    UnknownGame(String),
    #[error("action {action} is not legal at history {history}")]
    IllegalAction { action: u32, history: History },
    #[error("history {0} is terminal")]
    TerminalHistory(History),
    #[error("history {0} is not terminal")]
    NotTerminal(History),
    #[error("history {history} exceeds the declared maximum depth {max_depth}")]
    DepthExceeded { history: History, max_depth: usize },
    #[error("chance outcomes at {history} sum to {total}, not 1")]
    ChanceNotNormalized { history: History, total: Rational64 },
    #[error("terminal {0} is not zero-sum")]
    NotZeroSum(History),
    #[error("histories {first} and {second} share infostate {key} but disagree on legal actions")]
    InconsistentActions {
        key: InfoStateKey,
        first: History,
        second: History,
    },
    #[error(
        "perfect recall violated at {key}: {first} and {second} have different own pasts"
    )]
    PerfectRecall {
        key: InfoStateKey,
        first: History,
        second: History,
    },
}

/// A finite two-player zero-sum extensive-form game with chance.
pub trait GameDynamics: Send + Sync {
    /// CLI-facing identifier.
    fn name(&self) -> &str;

    fn initial_history(&self) -> History {
        History::new()
    }

    fn turn(&self, h: &History) -> Turn;

    fn is_terminal(&self, h: &History) -> bool {
        self.turn(h) == Turn::Terminal
    }

    /// Legal player moves at a decision history, in canonical (ascending id)
    /// order. Empty at chance and terminal histories.
    fn legal_actions(&self, h: &History) -> Vec<Action>;

    /// Chance outcomes with exact probabilities. Empty unless `h` is a chance
    /// history.
    fn chance_outcomes(&self, h: &History) -> Vec<(Action, Rational64)>;

    /// Payoff at a terminal history, in integer units.
    fn utility(&self, h: &History, player: Player) -> i64;

    fn info_state_key(&self, h: &History, player: Player) -> InfoStateKey;

    fn max_depth(&self) -> usize;

    /// Size of the global player action space.
    fn num_distinct_actions(&self) -> usize;

    fn encoding_size(&self) -> usize;

    /// Writes the fixed-size bit encoding of `player`'s view of a
    /// non-terminal history.
    fn write_encoding(&self, h: &History, player: Player, out: &mut Vec<bool>);

    fn encode(&self, h: &History, player: Player) -> Result<Vec<bool>, GameError> {
        if self.is_terminal(h) {
            return Err(GameError::TerminalHistory(h.clone()));
        }
        let mut out = Vec::with_capacity(self.encoding_size());
        self.write_encoding(h, player, &mut out);
        debug_assert_eq!(out.len(), self.encoding_size());
        Ok(out)
    }

    fn apply(&self, h: &History, action: u32) -> Result<History, GameError> {
        let legal = match self.turn(h) {
            Turn::Terminal => false,
            Turn::Chance => self.chance_outcomes(h).iter().any(|(a, _)| a.id == action),
            Turn::Player(_) => self.legal_actions(h).iter().any(|a| a.id == action),
        };
        if legal {
            Ok(h.child(action))
        } else {
            Err(GameError::IllegalAction {
                action,
                history: h.clone(),
            })
        }
    }
}
