use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use super::{Action, GameDynamics, GameError, History, InfoStateKey, Player, Turn};

/// Every history reachable from the initial one, in depth-first preorder.
pub fn enumerate_histories(game: &dyn GameDynamics) -> Result<Vec<History>, GameError> {
    let mut out = Vec::new();
    let mut stack = vec![game.initial_history()];
    while let Some(h) = stack.pop() {
        if h.len() > game.max_depth() {
            return Err(GameError::DepthExceeded {
                history: h,
                max_depth: game.max_depth(),
            });
        }
        let children: Vec<u32> = match game.turn(&h) {
            Turn::Terminal => Vec::new(),
            Turn::Chance => game.chance_outcomes(&h).into_iter().map(|(a, _)| a.id).collect(),
            Turn::Player(_) => game.legal_actions(&h).into_iter().map(|a| a.id).collect(),
        };
        for &a in children.iter().rev() {
            stack.push(h.child(a));
        }
        out.push(h);
    }
    Ok(out)
}

/// The player's information states, sorted by key, each with its legal
/// actions.
pub fn enumerate_infostates(
    game: &dyn GameDynamics,
    player: Player,
) -> Result<Vec<(InfoStateKey, Vec<Action>)>, GameError> {
    let mut seen: BTreeMap<InfoStateKey, (History, Vec<Action>)> = BTreeMap::new();
    for h in enumerate_histories(game)? {
        if game.turn(&h) != Turn::Player(player) {
            continue;
        }
        let key = game.info_state_key(&h, player);
        let actions = game.legal_actions(&h);
        match seen.entry(key) {
            Entry::Vacant(slot) => {
                slot.insert((h, actions));
            }
            Entry::Occupied(slot) => {
                if slot.get().1 != actions {
                    return Err(GameError::InconsistentActions {
                        key: slot.key().clone(),
                        first: slot.get().0.clone(),
                        second: h,
                    });
                }
            }
        }
    }
    Ok(seen.into_iter().map(|(k, (_, a))| (k, a)).collect())
}

type OwnPast = Vec<(InfoStateKey, u32)>;

/// Checks that all histories grouped into one information state share the
/// owning player's sequence of earlier (infostate, action) pairs.
pub fn validate_perfect_recall(game: &dyn GameDynamics) -> Result<(), GameError> {
    let mut first_seen: BTreeMap<InfoStateKey, (History, OwnPast)> = BTreeMap::new();
    let mut stack: Vec<(History, [OwnPast; 2])> =
        vec![(game.initial_history(), [Vec::new(), Vec::new()])];
    while let Some((h, pasts)) = stack.pop() {
        if h.len() > game.max_depth() {
            return Err(GameError::DepthExceeded {
                history: h,
                max_depth: game.max_depth(),
            });
        }
        match game.turn(&h) {
            Turn::Terminal => {}
            Turn::Chance => {
                for (a, _) in game.chance_outcomes(&h) {
                    stack.push((h.child(a.id), pasts.clone()));
                }
            }
            Turn::Player(p) => {
                let key = game.info_state_key(&h, p);
                let own = &pasts[p.index()];
                match first_seen.entry(key.clone()) {
                    Entry::Vacant(slot) => {
                        slot.insert((h.clone(), own.clone()));
                    }
                    Entry::Occupied(slot) => {
                        if &slot.get().1 != own {
                            return Err(GameError::PerfectRecall {
                                key,
                                first: slot.get().0.clone(),
                                second: h,
                            });
                        }
                    }
                }
                for a in game.legal_actions(&h) {
                    let mut next = pasts.clone();
                    next[p.index()].push((key.clone(), a.id));
                    stack.push((h.child(a.id), next));
                }
            }
        }
    }
    Ok(())
}
