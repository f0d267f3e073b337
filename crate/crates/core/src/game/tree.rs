use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{One, Zero};

use super::{Action, GameDynamics, GameError, History, InfoStateKey, Player, Turn};

pub type NodeId = usize;

#[derive(Clone, Debug)]
pub enum NodeKind {
    Terminal {
        utility: [i64; 2],
    },
    Chance {
        children: Vec<NodeId>,
        probs: Vec<Rational64>,
    },
    Decision {
        player: Player,
        infostate: usize,
        children: Vec<NodeId>,
    },
}

#[derive(Clone, Debug)]
pub struct Node {
    pub history: History,
    pub parent: Option<NodeId>,
    pub kind: NodeKind,
}

/// An information state of the compiled tree.
#[derive(Clone, Debug)]
pub struct InfoState {
    pub key: InfoStateKey,
    pub actions: Vec<Action>,
    /// Decision nodes grouped into this state, in preorder.
    pub members: Vec<NodeId>,
    /// The owner's previous (infostate index, action position), if any.
    pub parent: Option<(usize, usize)>,
    /// History length of the members.
    pub depth: usize,
    pub encoding: Vec<bool>,
}

impl InfoState {
    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }
}

/// A game materialized as a flat preorder node array with per-player
/// infostate tables sorted by key.
#[derive(Clone, Debug)]
pub struct GameTree {
    name: String,
    nodes: Vec<Node>,
    infostates: [Vec<InfoState>; 2],
    /// Infostate indices sorted so every state follows its own-parent.
    top_down: [Vec<usize>; 2],
    num_distinct_actions: usize,
    encoding_size: usize,
}

struct Builder<'a> {
    game: &'a dyn GameDynamics,
    nodes: Vec<Node>,
    ids: [BTreeMap<InfoStateKey, usize>; 2],
    states: [Vec<InfoState>; 2],
}

impl Builder<'_> {
    fn visit(
        &mut self,
        h: History,
        parent: Option<NodeId>,
        own_prev: [Option<(usize, usize)>; 2],
    ) -> Result<NodeId, GameError> {
        if h.len() > self.game.max_depth() {
            return Err(GameError::DepthExceeded {
                history: h,
                max_depth: self.game.max_depth(),
            });
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            history: h.clone(),
            parent,
            kind: NodeKind::Terminal { utility: [0, 0] },
        });
        let kind = match self.game.turn(&h) {
            Turn::Terminal => {
                let utility = [
                    self.game.utility(&h, Player::P0),
                    self.game.utility(&h, Player::P1),
                ];
                if utility[0] + utility[1] != 0 {
                    return Err(GameError::NotZeroSum(h));
                }
                NodeKind::Terminal { utility }
            }
            Turn::Chance => {
                let outcomes = self.game.chance_outcomes(&h);
                let total: Rational64 = outcomes.iter().map(|(_, p)| *p).sum();
                if !total.is_one() || outcomes.iter().any(|(_, p)| *p < Rational64::zero()) {
                    return Err(GameError::ChanceNotNormalized { history: h, total });
                }
                let mut children = Vec::with_capacity(outcomes.len());
                let mut probs = Vec::with_capacity(outcomes.len());
                for (a, p) in outcomes {
                    children.push(self.visit(h.child(a.id), Some(id), own_prev)?);
                    probs.push(p);
                }
                NodeKind::Chance { children, probs }
            }
            Turn::Player(player) => {
                let p = player.index();
                let key = self.game.info_state_key(&h, player);
                let actions = self.game.legal_actions(&h);
                let next_id = self.states[p].len();
                let s = *self.ids[p].entry(key.clone()).or_insert(next_id);
                if s == next_id {
                    let encoding = self.game.encode(&h, player)?;
                    self.states[p].push(InfoState {
                        key,
                        actions: actions.clone(),
                        members: Vec::new(),
                        parent: own_prev[p],
                        depth: h.len(),
                        encoding,
                    });
                } else if self.states[p][s].actions != actions {
                    let first = self.nodes[self.states[p][s].members[0]].history.clone();
                    return Err(GameError::InconsistentActions {
                        key,
                        first,
                        second: h,
                    });
                }
                self.states[p][s].members.push(id);
                let mut children = Vec::with_capacity(actions.len());
                for (pos, a) in actions.iter().enumerate() {
                    let mut prev = own_prev;
                    prev[p] = Some((s, pos));
                    children.push(self.visit(h.child(a.id), Some(id), prev)?);
                }
                NodeKind::Decision {
                    player,
                    infostate: s,
                    children,
                }
            }
        };
        self.nodes[id].kind = kind;
        Ok(id)
    }
}

impl GameTree {
    pub fn build(game: &dyn GameDynamics) -> Result<GameTree, GameError> {
        let mut b = Builder {
            game,
            nodes: Vec::new(),
            ids: [BTreeMap::new(), BTreeMap::new()],
            states: [Vec::new(), Vec::new()],
        };
        b.visit(game.initial_history(), None, [None, None])?;

        // Renumber infostates into key order.
        let Builder {
            mut nodes,
            ids,
            states,
            ..
        } = b;
        let mut remap = [Vec::new(), Vec::new()];
        let mut sorted: [Vec<InfoState>; 2] = [Vec::new(), Vec::new()];
        for p in 0..2 {
            remap[p] = vec![0; states[p].len()];
            for (new, (_, &old)) in ids[p].iter().enumerate() {
                remap[p][old] = new;
            }
            let mut slots: Vec<Option<InfoState>> = states[p].iter().cloned().map(Some).collect();
            for &old in ids[p].values() {
                let mut st = slots[old].take().expect("each id appears once");
                st.parent = st.parent.map(|(s, a)| (remap[p][s], a));
                sorted[p].push(st);
            }
        }
        for node in &mut nodes {
            if let NodeKind::Decision {
                player, infostate, ..
            } = &mut node.kind
            {
                *infostate = remap[player.index()][*infostate];
            }
        }
        let top_down = [0, 1].map(|p| {
            let mut order: Vec<usize> = (0..sorted[p].len()).collect();
            order.sort_by_key(|&s| sorted[p][s].depth);
            order
        });
        Ok(GameTree {
            name: game.name().to_string(),
            nodes,
            infostates: sorted,
            top_down,
            num_distinct_actions: game.num_distinct_actions(),
            encoding_size: game.encoding_size(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_terminals(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Terminal { .. }))
            .count()
    }

    pub fn infostates(&self, player: Player) -> &[InfoState] {
        &self.infostates[player.index()]
    }

    pub fn infostate(&self, player: Player, index: usize) -> &InfoState {
        &self.infostates[player.index()][index]
    }

    pub fn num_infostates(&self, player: Player) -> usize {
        self.infostates[player.index()].len()
    }

    pub fn infostate_index(&self, key: &InfoStateKey) -> Option<usize> {
        self.infostates[key.player.index()]
            .binary_search_by(|s| s.key.cmp(key))
            .ok()
    }

    /// Infostate indices ordered so that each state comes after the state
    /// where its owner last acted.
    pub fn top_down_order(&self, player: Player) -> &[usize] {
        &self.top_down[player.index()]
    }

    pub fn num_distinct_actions(&self) -> usize {
        self.num_distinct_actions
    }

    pub fn encoding_size(&self) -> usize {
        self.encoding_size
    }

    pub fn max_actions(&self, player: Player) -> usize {
        self.infostates(player)
            .iter()
            .map(InfoState::num_actions)
            .max()
            .unwrap_or(0)
    }

    /// Payoff range `max u - min u` over terminals for `player`.
    pub fn utility_range(&self, player: Player) -> i64 {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for n in &self.nodes {
            if let NodeKind::Terminal { utility } = n.kind {
                lo = lo.min(utility[player.index()]);
                hi = hi.max(utility[player.index()]);
            }
        }
        hi.saturating_sub(lo).max(0)
    }
}
