//! JSON policy files.
//!
//! ```json
//! {
//!   "format": "ed-tabular-policy",
//!   "version": 1,
//!   "game": "kuhn",
//!   "players": [
//!     { "player": 0, "table": { "4a": [0.5, 0.5], ... } }
//!   ]
//! }
//! ```
//!
//! Keys are hex-encoded infostate byte strings. Probabilities are written
//! with shortest round-trip formatting, so reading a file back reproduces
//! every `f64` exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::game::{GameTree, InfoStateKey, Player};
use crate::policy::{JointPolicy, PolicyError, TabularPolicy};

pub const POLICY_FORMAT: &str = "ed-tabular-policy";
pub const POLICY_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyTable {
    pub player: u8,
    pub table: BTreeMap<String, Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyDocument {
    pub format: String,
    pub version: u32,
    pub game: String,
    pub players: Vec<PolicyTable>,
}

impl PolicyDocument {
    pub fn new(tree: &GameTree, policies: &[&TabularPolicy<f64>]) -> Self {
        let players = policies
            .iter()
            .map(|pol| {
                let table = tree
                    .infostates(pol.player())
                    .iter()
                    .zip(pol.rows())
                    .map(|(s, row)| (s.key.to_hex(), row.clone()))
                    .collect();
                PolicyTable {
                    player: pol.player().index() as u8,
                    table,
                }
            })
            .collect();
        PolicyDocument {
            format: POLICY_FORMAT.to_string(),
            version: POLICY_VERSION,
            game: tree.name().to_string(),
            players,
        }
    }

    pub fn from_joint(tree: &GameTree, joint: &JointPolicy<f64>) -> Self {
        Self::new(tree, &[&joint[Player::P0], &joint[Player::P1]])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("policy documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, PolicyError> {
        let doc: PolicyDocument =
            serde_json::from_str(text).map_err(|e| PolicyError::Malformed(e.to_string()))?;
        if doc.format != POLICY_FORMAT || doc.version != POLICY_VERSION {
            return Err(PolicyError::Malformed(format!(
                "unsupported format {} v{}",
                doc.format, doc.version
            )));
        }
        Ok(doc)
    }

    /// Rebuilds `player`'s policy, requiring every infostate of the tree.
    pub fn policy(&self, tree: &GameTree, player: Player) -> Result<TabularPolicy<f64>, PolicyError> {
        if self.game != tree.name() {
            return Err(PolicyError::WrongGame {
                expected: tree.name().to_string(),
                found: self.game.clone(),
            });
        }
        let table = self
            .players
            .iter()
            .find(|t| t.player as usize == player.index())
            .ok_or_else(|| PolicyError::Malformed(format!("no table for player {player}")))?;
        for k in table.table.keys() {
            let bytes = hex::decode(k).map_err(|e| PolicyError::Malformed(format!("key {k}: {e}")))?;
            if tree.infostate_index(&InfoStateKey::new(player, bytes)).is_none() {
                return Err(PolicyError::Malformed(format!("unknown infostate key {k}")));
            }
        }
        let rows = tree
            .infostates(player)
            .iter()
            .map(|s| {
                table
                    .table
                    .get(&s.key.to_hex())
                    .cloned()
                    .ok_or_else(|| PolicyError::MissingInfostate(s.key.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        TabularPolicy::from_table(tree, player, rows)
    }

    pub fn joint(&self, tree: &GameTree) -> Result<JointPolicy<f64>, PolicyError> {
        JointPolicy::new(self.policy(tree, Player::P0)?, self.policy(tree, Player::P1)?)
    }
}
