//! Spacetime games: DAGs of decision nodes with players, action sets, edge
//! labels, an information-set partition and the set of complete histories.

mod alternating;
mod canonical;
mod extensive;
mod history;

pub use alternating::{check_alternating, check_alternating_with, AlternationReport, AlternationRule, RuleViolation};
pub use canonical::canonicalize_contexts;
pub use extensive::{to_extensive_form, ExtensiveForm, TreeNode};
pub use history::{enumerate_complete_histories, enumerate_histories, History, ValidationReport};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::cover::{Cover, Facet};
use crate::ids::{is_valid_token, Action, InfoSetId, NodeId, PlayerId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("identifier {0:?} is empty or contains whitespace, '=' or a leading '#'")]
    InvalidIdentifier(String),
    #[error("node {0} is declared twice")]
    DuplicateNode(NodeId),
    #[error("edge refers to unknown node {0}")]
    UnknownNode(NodeId),
    #[error("edge {0} -> {1} is declared twice")]
    DuplicateEdge(NodeId, NodeId),
    #[error("graph has a directed cycle through {}", render_nodes(.0))]
    CyclicGraph(Vec<NodeId>),
    #[error("edge {from} -> {to} is labeled {label}, which is not available at {from}")]
    EdgeLabelNotAvailable { from: NodeId, to: NodeId, label: Action },
    #[error("information set {0} mixes nodes of different players")]
    InfoSetOwnerMismatch(InfoSetId),
    #[error("information set {0} mixes nodes with different action sets")]
    InfoSetActionMismatch(InfoSetId),
    #[error("node {0} has an empty action set")]
    EmptyActionSet(NodeId),
    #[error("declared outcome assigns {action} to {info_set}, which is unknown or unavailable")]
    InvalidOutcome { info_set: InfoSetId, action: Action },
    #[error("game is not alternating: {0}")]
    NotAlternating(String),
    #[error("context renaming is not injective at node {node}: {context} is produced by several actions")]
    ContextCollision { node: NodeId, context: Action },
}

fn render_nodes(nodes: &[NodeId]) -> String {
    nodes.iter().map(NodeId::as_str).collect::<Vec<_>>().join(" -> ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub owner: PlayerId,
    pub actions: BTreeSet<Action>,
    pub info_set: InfoSetId,
}

/// Raw description of one node, as read from a document or a fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSpec {
    pub id: NodeId,
    pub player: PlayerId,
    /// Defaults to a singleton information set named after the node.
    pub info_set: Option<InfoSetId>,
    pub actions: Vec<Action>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub from: NodeId,
    pub to: NodeId,
    pub label: Action,
}

/// Raw game description consumed by [`build_game`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GameSpec {
    pub nodes: Vec<NodeSpec>,
    pub edges: Vec<EdgeSpec>,
    /// Declared global action set; defaults to the union of node action sets.
    pub actions: Option<Vec<Action>>,
    /// Declared outcomes; computed when absent.
    pub outcomes: Option<Vec<History>>,
}

impl GameSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node<I, A>(mut self, id: &str, player: &str, info_set: &str, actions: I) -> Self
    where
        I: IntoIterator<Item = A>,
        A: Into<Action>,
    {
        self.nodes.push(NodeSpec {
            id: id.into(),
            player: player.into(),
            info_set: Some(info_set.into()),
            actions: actions.into_iter().map(Into::into).collect(),
        });
        self
    }

    pub fn edge(mut self, from: &str, to: &str, label: &str) -> Self {
        self.edges.push(EdgeSpec { from: from.into(), to: to.into(), label: label.into() });
        self
    }

    pub fn build(self) -> Result<SpacetimeGame, GameError> {
        build_game(self)
    }
}

/// A spacetime game. Immutable after construction; the structural
/// invariants (acyclicity, edge labels available at their source, information
/// sets compatible with owners and action sets) hold for every value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpacetimeGame {
    nodes: BTreeMap<NodeId, Node>,
    edges: BTreeMap<(NodeId, NodeId), Action>,
    info_sets: BTreeMap<InfoSetId, BTreeSet<NodeId>>,
    actions: BTreeSet<Action>,
    outcomes: Vec<History>,
    preds: BTreeMap<NodeId, BTreeSet<NodeId>>,
    succs: BTreeMap<NodeId, BTreeSet<NodeId>>,
    node_order: Vec<NodeId>,
    info_order: Vec<InfoSetId>,
    info_rank: BTreeMap<InfoSetId, usize>,
    eval_order: Option<Vec<InfoSetId>>,
}

/// Validates a raw description and builds the game. When outcomes are
/// omitted they are set to the complete histories.
pub fn build_game(spec: GameSpec) -> Result<SpacetimeGame, GameError> {
    let mut nodes = BTreeMap::new();
    for n in spec.nodes {
        for s in [n.id.as_str(), n.player.as_str()] {
            check_token(s)?;
        }
        if let Some(i) = &n.info_set {
            check_token(i.as_str())?;
        }
        for a in &n.actions {
            check_token(a.as_str())?;
        }
        if n.actions.is_empty() {
            return Err(GameError::EmptyActionSet(n.id));
        }
        let info_set = n.info_set.unwrap_or_else(|| InfoSetId::new(n.id.as_str()));
        let node = Node { owner: n.player, actions: n.actions.into_iter().collect(), info_set };
        if nodes.insert(n.id.clone(), node).is_some() {
            return Err(GameError::DuplicateNode(n.id));
        }
    }

    let mut edges = BTreeMap::new();
    for e in spec.edges {
        check_token(e.label.as_str())?;
        for end in [&e.from, &e.to] {
            if !nodes.contains_key(end) {
                return Err(GameError::UnknownNode(end.clone()));
            }
        }
        if !nodes[&e.from].actions.contains(&e.label) {
            return Err(GameError::EdgeLabelNotAvailable { from: e.from, to: e.to, label: e.label });
        }
        let key = (e.from, e.to);
        if edges.contains_key(&key) {
            return Err(GameError::DuplicateEdge(key.0, key.1));
        }
        edges.insert(key, e.label);
    }

    let mut info_sets: BTreeMap<InfoSetId, BTreeSet<NodeId>> = BTreeMap::new();
    for (id, n) in &nodes {
        info_sets.entry(n.info_set.clone()).or_default().insert(id.clone());
    }
    for (i, members) in &info_sets {
        let mut it = members.iter().map(|m| &nodes[m]);
        let first = it.next().expect("information sets are non-empty");
        for other in it {
            if other.owner != first.owner {
                return Err(GameError::InfoSetOwnerMismatch(i.clone()));
            }
            if other.actions != first.actions {
                return Err(GameError::InfoSetActionMismatch(i.clone()));
            }
        }
    }

    let mut actions: BTreeSet<Action> = nodes.values().flat_map(|n| n.actions.iter().cloned()).collect();
    if let Some(declared) = spec.actions {
        for a in &declared {
            check_token(a.as_str())?;
        }
        actions.extend(declared);
    }

    let mut preds: BTreeMap<NodeId, BTreeSet<NodeId>> = nodes.keys().map(|k| (k.clone(), BTreeSet::new())).collect();
    let mut succs = preds.clone();
    for (from, to) in edges.keys() {
        preds.get_mut(to).expect("known node").insert(from.clone());
        succs.get_mut(from).expect("known node").insert(to.clone());
    }

    let node_order = topological_nodes(&nodes, &preds, &succs)?;
    let node_pos: BTreeMap<&NodeId, usize> = node_order.iter().enumerate().map(|(i, n)| (n, i)).collect();
    let mut ranked: Vec<(usize, InfoSetId)> = info_sets
        .iter()
        .map(|(i, members)| (members.iter().map(|m| node_pos[m]).min().unwrap_or(0), i.clone()))
        .collect();
    ranked.sort();
    let info_order: Vec<InfoSetId> = ranked.into_iter().map(|(_, i)| i).collect();
    let info_rank = info_order.iter().enumerate().map(|(r, i)| (i.clone(), r)).collect();

    let mut game = SpacetimeGame {
        nodes,
        edges,
        info_sets,
        actions,
        outcomes: Vec::new(),
        preds,
        succs,
        node_order,
        info_order,
        info_rank,
        eval_order: None,
    };
    game.eval_order = game.compute_eval_order();

    match spec.outcomes {
        Some(declared) => {
            for h in &declared {
                for (i, a) in h.iter() {
                    let ok = game.info_sets.contains_key(i) && game.actions_at(i).is_some_and(|acts| acts.contains(a));
                    if !ok {
                        return Err(GameError::InvalidOutcome { info_set: i.clone(), action: a.clone() });
                    }
                }
            }
            let mut declared = declared;
            declared.sort_by(|a, b| game.history_key(a).cmp(&game.history_key(b)));
            declared.dedup();
            game.outcomes = declared;
        }
        None => game.outcomes = enumerate_complete_histories(&game),
    }
    Ok(game)
}

fn check_token(s: &str) -> Result<(), GameError> {
    if is_valid_token(s) {
        Ok(())
    } else {
        Err(GameError::InvalidIdentifier(s.to_owned()))
    }
}

/// Kahn's algorithm with lexicographic tie-breaking.
fn topological_nodes(
    nodes: &BTreeMap<NodeId, Node>,
    preds: &BTreeMap<NodeId, BTreeSet<NodeId>>,
    succs: &BTreeMap<NodeId, BTreeSet<NodeId>>,
) -> Result<Vec<NodeId>, GameError> {
    let mut indegree: BTreeMap<&NodeId, usize> = preds.iter().map(|(k, v)| (k, v.len())).collect();
    let mut ready: BTreeSet<&NodeId> = indegree.iter().filter(|(_, d)| **d == 0).map(|(k, _)| *k).collect();
    let mut order = Vec::with_capacity(nodes.len());
    while let Some(n) = ready.pop_first() {
        order.push(n.clone());
        for s in &succs[n] {
            let d = indegree.get_mut(s).expect("known node");
            *d -= 1;
            if *d == 0 {
                ready.insert(s);
            }
        }
    }
    if order.len() == nodes.len() {
        return Ok(order);
    }
    // Walk predecessors inside the residual graph until a node repeats.
    let residual: BTreeSet<&NodeId> = indegree.iter().filter(|(_, d)| **d > 0).map(|(k, _)| *k).collect();
    let mut path: Vec<&NodeId> = vec![*residual.iter().next().expect("residual is non-empty")];
    loop {
        let cur = *path.last().expect("non-empty path");
        let next = preds[cur].iter().find(|p| residual.contains(p)).expect("residual nodes keep a residual predecessor");
        if let Some(pos) = path.iter().position(|p| *p == next) {
            let mut cycle: Vec<NodeId> = path[pos..].iter().map(|n| (*n).clone()).collect();
            cycle.reverse();
            return Err(GameError::CyclicGraph(cycle));
        }
        path.push(next);
    }
}

impl SpacetimeGame {
    pub fn nodes(&self) -> impl Iterator<Item = (&NodeId, &Node)> {
        self.nodes.iter()
    }

    pub fn node(&self, id: &NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&NodeId, &NodeId, &Action)> {
        self.edges.iter().map(|((a, b), l)| (a, b, l))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// σ(from, to), defined only when the edge exists.
    pub fn edge_label(&self, from: &NodeId, to: &NodeId) -> Option<&Action> {
        self.edges.get(&(from.clone(), to.clone()))
    }

    pub fn predecessors(&self, n: &NodeId) -> &BTreeSet<NodeId> {
        &self.preds[n]
    }

    pub fn successors(&self, n: &NodeId) -> &BTreeSet<NodeId> {
        &self.succs[n]
    }

    pub fn info_set_of(&self, n: &NodeId) -> &InfoSetId {
        &self.nodes[n].info_set
    }

    pub fn owner(&self, n: &NodeId) -> &PlayerId {
        &self.nodes[n].owner
    }

    pub fn info_sets(&self) -> impl Iterator<Item = (&InfoSetId, &BTreeSet<NodeId>)> {
        self.info_sets.iter()
    }

    pub fn info_set_nodes(&self, i: &InfoSetId) -> Option<&BTreeSet<NodeId>> {
        self.info_sets.get(i)
    }

    pub fn info_set_owner(&self, i: &InfoSetId) -> Option<&PlayerId> {
        self.info_sets.get(i).and_then(|m| m.iter().next()).map(|n| &self.nodes[n].owner)
    }

    /// χ(i) for an information set.
    pub fn actions_at(&self, i: &InfoSetId) -> Option<&BTreeSet<Action>> {
        self.info_sets.get(i).and_then(|m| m.iter().next()).map(|n| &self.nodes[n].actions)
    }

    /// The global action set 𝒜.
    pub fn actions(&self) -> &BTreeSet<Action> {
        &self.actions
    }

    pub fn players(&self) -> BTreeSet<PlayerId> {
        self.nodes.values().map(|n| n.owner.clone()).collect()
    }

    /// Information sets owned by `p`, in canonical order.
    pub fn info_sets_of(&self, p: &PlayerId) -> Vec<InfoSetId> {
        self.info_order.iter().filter(|i| self.info_set_owner(i) == Some(p)).cloned().collect()
    }

    /// Nodes owned by `p`, sorted by id.
    pub fn nodes_of(&self, p: &PlayerId) -> Vec<NodeId> {
        self.nodes.iter().filter(|(_, n)| &n.owner == p).map(|(k, _)| k.clone()).collect()
    }

    /// Canonical information-set order: by the topological position of the
    /// earliest member node, ties broken by id.
    pub fn canonical_info_order(&self) -> &[InfoSetId] {
        &self.info_order
    }

    pub fn info_rank(&self, i: &InfoSetId) -> usize {
        self.info_rank.get(i).copied().unwrap_or(usize::MAX)
    }

    /// Topological node order with lexicographic tie-breaking.
    pub fn node_order(&self) -> &[NodeId] {
        &self.node_order
    }

    /// Information sets in an order compatible with the information-set
    /// dependency graph, or `None` when that graph has a cycle.
    pub fn evaluation_order(&self) -> Option<&[InfoSetId]> {
        self.eval_order.as_deref()
    }

    pub fn roots(&self) -> Vec<NodeId> {
        self.preds.iter().filter(|(_, p)| p.is_empty()).map(|(k, _)| k.clone()).collect()
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        self.succs.iter().filter(|(_, s)| s.is_empty()).map(|(k, _)| k.clone()).collect()
    }

    /// The declared (or computed) outcomes 𝒵 in canonical order.
    pub fn outcomes(&self) -> &[History] {
        &self.outcomes
    }

    /// Sort key for histories: values in canonical information-set order,
    /// with unassigned sorting first.
    pub fn history_key<'a>(&'a self, h: &'a History) -> Vec<Option<&'a Action>> {
        self.info_order.iter().map(|i| h.get(i)).collect()
    }

    /// A node is activated by `h` when every incoming edge label equals the
    /// value `h` assigns to the source node's information set.
    pub fn node_activated(&self, n: &NodeId, h: &History) -> bool {
        self.preds[n]
            .iter()
            .all(|m| h.get(self.info_set_of(m)) == self.edge_label(m, n))
    }

    /// An information set is activated when one of its nodes is.
    pub fn info_set_activated(&self, i: &InfoSetId, h: &History) -> bool {
        self.info_sets.get(i).is_some_and(|members| members.iter().any(|n| self.node_activated(n, h)))
    }

    /// The causal bridge of a node: its predecessors with the labels of the
    /// edges into it.
    pub fn causal_bridge(&self, n: &NodeId) -> BTreeMap<NodeId, Action> {
        self.preds[n]
            .iter()
            .map(|m| (m.clone(), self.edge_label(m, n).expect("predecessor edge").clone()))
            .collect()
    }

    /// The unique parent of a node with exactly one predecessor.
    pub fn parent(&self, n: &NodeId) -> Option<&NodeId> {
        let p = &self.preds[n];
        if p.len() == 1 {
            p.iter().next()
        } else {
            None
        }
    }

    fn compute_eval_order(&self) -> Option<Vec<InfoSetId>> {
        let mut deps: BTreeMap<&InfoSetId, BTreeSet<&InfoSetId>> =
            self.info_sets.keys().map(|i| (i, BTreeSet::new())).collect();
        for (from, to) in self.edges.keys() {
            let (a, b) = (self.info_set_of(from), self.info_set_of(to));
            if a == b {
                return None;
            }
            deps.get_mut(b).expect("known").insert(a);
        }
        let mut placed: BTreeSet<&InfoSetId> = BTreeSet::new();
        let mut order = Vec::with_capacity(deps.len());
        while order.len() < deps.len() {
            let next = self
                .info_order
                .iter()
                .find(|i| !placed.contains(i) && deps[i].iter().all(|d| placed.contains(d)))?;
            placed.insert(next);
            order.push(next.clone());
        }
        Some(order)
    }

    /// Removes never-activated information sets (with their nodes and edges)
    /// and declared actions no node offers. Outcomes are recomputed.
    pub fn prune_unused(&self) -> SpacetimeGame {
        let report = self.validate();
        let dead: BTreeSet<&InfoSetId> = report.unused_info_sets.iter().collect();
        let spec = GameSpec {
            nodes: self
                .nodes
                .iter()
                .filter(|(_, n)| !dead.contains(&n.info_set))
                .map(|(id, n)| NodeSpec {
                    id: id.clone(),
                    player: n.owner.clone(),
                    info_set: Some(n.info_set.clone()),
                    actions: n.actions.iter().cloned().collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .filter(|((a, b), _)| !dead.contains(self.info_set_of(a)) && !dead.contains(self.info_set_of(b)))
                .map(|((a, b), l)| EdgeSpec { from: a.clone(), to: b.clone(), label: l.clone() })
                .collect(),
            actions: None,
            outcomes: None,
        };
        build_game(spec).expect("pruning preserves structural invariants")
    }

    /// Converts back to a raw description (outcomes included).
    pub fn to_spec(&self) -> GameSpec {
        let used: BTreeSet<&Action> = self.nodes.values().flat_map(|n| n.actions.iter()).collect();
        let extra: Vec<Action> = self.actions.iter().filter(|a| !used.contains(a)).cloned().collect();
        GameSpec {
            nodes: self
                .nodes
                .iter()
                .map(|(id, n)| NodeSpec {
                    id: id.clone(),
                    player: n.owner.clone(),
                    info_set: Some(n.info_set.clone()),
                    actions: n.actions.iter().cloned().collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|((a, b), l)| EdgeSpec { from: a.clone(), to: b.clone(), label: l.clone() })
                .collect(),
            actions: if extra.is_empty() { None } else { Some(self.actions.iter().cloned().collect()) },
            outcomes: Some(self.outcomes.clone()),
        }
    }
}

/// Natural cover with nature played by [`crate::ids::NATURE`].
pub fn natural_cover(game: &SpacetimeGame) -> Cover {
    natural_cover_for(game, &PlayerId::nature())
}

/// Facets of the nature-projected supports of the game's outcomes.
pub fn natural_cover_for(game: &SpacetimeGame, nature: &PlayerId) -> Cover {
    let nature_sets: BTreeSet<InfoSetId> = game.info_sets_of(nature).into_iter().collect();
    Cover::facets_of(game.outcomes().iter().map(|z| -> Facet {
        z.support().filter(|i| nature_sets.contains(*i)).cloned().collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> SpacetimeGame {
        GameSpec::new()
            .node("B", "Bob", "B", ["{x}"])
            .node("x", "Alfred", "x", ["0", "1"])
            .edge("B", "x", "{x}")
            .build()
            .unwrap()
    }

    #[test]
    fn minimal_game_builds_with_two_outcomes() {
        let g = minimal();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.outcomes().len(), 2);
        assert_eq!(g.canonical_info_order(), &[InfoSetId::from("B"), InfoSetId::from("x")]);
    }

    #[test]
    fn edge_label_must_be_available() {
        let err = GameSpec::new()
            .node("B", "Bob", "B", ["{x}"])
            .node("x", "Alfred", "x", ["0", "1"])
            .edge("B", "x", "{y}")
            .build()
            .unwrap_err();
        assert!(matches!(err, GameError::EdgeLabelNotAvailable { .. }));
    }

    #[test]
    fn cycles_are_rejected_with_the_cycle() {
        let err = GameSpec::new()
            .node("a", "P", "a", ["0"])
            .node("b", "P", "b", ["0"])
            .node("c", "P", "c", ["0"])
            .edge("a", "b", "0")
            .edge("b", "c", "0")
            .edge("c", "b", "0")
            .build()
            .unwrap_err();
        match err {
            GameError::CyclicGraph(cycle) => {
                let set: BTreeSet<_> = cycle.iter().map(NodeId::as_str).collect();
                assert_eq!(set, BTreeSet::from(["b", "c"]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn info_sets_must_share_owner_and_actions() {
        let err = GameSpec::new()
            .node("a", "P", "i", ["0"])
            .node("b", "Q", "i", ["0"])
            .build()
            .unwrap_err();
        assert_eq!(err, GameError::InfoSetOwnerMismatch("i".into()));
        let err = GameSpec::new()
            .node("a", "P", "i", ["0"])
            .node("b", "P", "i", ["1"])
            .build()
            .unwrap_err();
        assert_eq!(err, GameError::InfoSetActionMismatch("i".into()));
    }

    #[test]
    fn empty_action_sets_are_rejected() {
        let err = GameSpec::new().node("a", "P", "a", Vec::<&str>::new()).build().unwrap_err();
        assert_eq!(err, GameError::EmptyActionSet("a".into()));
    }

    #[test]
    fn identifiers_with_equals_are_rejected() {
        let err = GameSpec::new().node("a=b", "P", "a", ["0"]).build().unwrap_err();
        assert!(matches!(err, GameError::InvalidIdentifier(_)));
    }

    #[test]
    fn natural_cover_of_minimal_game() {
        let c = natural_cover(&minimal());
        assert_eq!(c.to_string(), "{x}");
    }

    #[test]
    fn pruning_removes_never_activated_sets() {
        // `dead` needs both outcomes of `x` at once and can never activate.
        let g = GameSpec::new()
            .node("B", "Bob", "B", ["{x}"])
            .node("x1", "Alfred", "x", ["0", "1"])
            .node("x2", "Alfred", "x", ["0", "1"])
            .node("dead", "Bob", "dead", ["go"])
            .edge("B", "x1", "{x}")
            .edge("B", "x2", "{x}")
            .edge("x1", "dead", "0")
            .edge("x2", "dead", "1")
            .build()
            .unwrap();
        let report = g.validate();
        assert_eq!(report.unused_info_sets, vec![InfoSetId::from("dead")]);
        let pruned = g.prune_unused();
        assert!(pruned.node(&"dead".into()).is_none());
        assert!(pruned.validate().valid);
    }
}
