//! The benchmark games and their CLI identifiers.

mod goofspiel;
mod kuhn;
mod leduc;
mod liars_dice;
mod matrix;

use std::fmt;
use std::str::FromStr;

pub use goofspiel::Goofspiel;
pub use kuhn::Kuhn;
pub use leduc::Leduc;
pub use liars_dice::{bid_face, bid_quantity, bid_satisfied, LiarsDice};
pub use matrix::{MatrixGame, SingleDecision};

pub mod actions {
    pub mod kuhn {
        pub use crate::games::kuhn::{BET, PASS};
    }
    pub mod leduc {
        pub use crate::games::leduc::{CALL, FOLD, RAISE};
    }
    pub mod liars_dice {
        pub use crate::games::liars_dice::LIAR;
    }
}

use crate::game::{validate_perfect_recall, GameDynamics, GameError, GameTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameId {
    Kuhn,
    Leduc,
    LiarsDice,
    Goofspiel,
}

impl GameId {
    pub const ALL: [GameId; 4] = [
        GameId::Kuhn,
        GameId::Leduc,
        GameId::LiarsDice,
        GameId::Goofspiel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GameId::Kuhn => "kuhn",
            GameId::Leduc => "leduc",
            GameId::LiarsDice => "liars_dice_11",
            GameId::Goofspiel => "goofspiel_4",
        }
    }

    pub fn dynamics(self) -> Box<dyn GameDynamics> {
        match self {
            GameId::Kuhn => Box::new(Kuhn),
            GameId::Leduc => Box::new(Leduc),
            GameId::LiarsDice => Box::new(LiarsDice),
            GameId::Goofspiel => Box::new(Goofspiel),
        }
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GameId {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kuhn" => Ok(GameId::Kuhn),
            "leduc" => Ok(GameId::Leduc),
            "liars_dice_11" | "liars_dice" => Ok(GameId::LiarsDice),
            "goofspiel_4" | "goofspiel" => Ok(GameId::Goofspiel),
            other => Err(GameError::UnknownGame(other.to_string())),
        }
    }
}

/// Looks up a benchmark game by name and checks perfect recall.
pub fn build_game(name: &str) -> Result<Box<dyn GameDynamics>, GameError> {
    let game = name.parse::<GameId>()?.dynamics();
    validate_perfect_recall(game.as_ref())?;
    Ok(game)
}

/// Builds and compiles a benchmark game. Compilation checks zero-sum
/// payoffs, chance normalization and per-infostate action consistency.
pub fn load_tree(name: &str) -> Result<GameTree, GameError> {
    let game = build_game(name)?;
    GameTree::build(game.as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in GameId::ALL {
            assert_eq!(id.as_str().parse::<GameId>().unwrap(), id);
        }
        assert!(matches!(
            "chess".parse::<GameId>(),
            Err(GameError::UnknownGame(_))
        ));
        assert!(build_game("go").is_err());
    }
}
