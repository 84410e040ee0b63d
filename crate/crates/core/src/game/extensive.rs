use std::collections::BTreeMap;

use super::{History, SpacetimeGame};
use crate::ids::{Action, InfoSetId, PlayerId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeNode {
    Decision {
        info_set: InfoSetId,
        player: PlayerId,
        /// Children in action order.
        children: Vec<(Action, usize)>,
    },
    Leaf {
        history: History,
    },
}

/// A game tree whose decision nodes are labeled by the spacetime game's
/// information sets. Node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensiveForm {
    pub nodes: Vec<TreeNode>,
}

impl ExtensiveForm {
    pub fn root(&self) -> usize {
        0
    }

    pub fn leaves(&self) -> Vec<&History> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                TreeNode::Leaf { history } => Some(history),
                TreeNode::Decision { .. } => None,
            })
            .collect()
    }

    /// Tree nodes grouped by the information set they decide.
    pub fn info_sets(&self) -> BTreeMap<&InfoSetId, Vec<usize>> {
        let mut out: BTreeMap<&InfoSetId, Vec<usize>> = BTreeMap::new();
        for (k, n) in self.nodes.iter().enumerate() {
            if let TreeNode::Decision { info_set, .. } = n {
                out.entry(info_set).or_default().push(k);
            }
        }
        out
    }

    pub fn is_perfect_information(&self) -> bool {
        self.info_sets().values().all(|v| v.len() == 1)
    }

    /// Number of decisions on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        fn go(t: &ExtensiveForm, k: usize) -> usize {
            match &t.nodes[k] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Decision { children, .. } => 1 + children.iter().map(|(_, c)| go(t, *c)).max().unwrap_or(0),
            }
        }
        go(self, 0)
    }

    /// Information set and player decided at each depth along the first
    /// branch; a compact shape summary.
    pub fn first_path(&self) -> Vec<(&InfoSetId, usize)> {
        let mut out = Vec::new();
        let mut k = 0;
        while let TreeNode::Decision { info_set, children, .. } = &self.nodes[k] {
            out.push((info_set, children.len()));
            k = children[0].1;
        }
        out
    }
}

/// Unfolds the game into a tree. At every tree node the next decision is the
/// first unassigned activated information set in canonical order; a node with
/// none left is a leaf carrying its complete history.
pub fn to_extensive_form(game: &SpacetimeGame) -> ExtensiveForm {
    let mut tree = ExtensiveForm { nodes: Vec::new() };
    unfold(game, &mut History::new(), &mut tree);
    tree
}

fn unfold(game: &SpacetimeGame, h: &mut History, tree: &mut ExtensiveForm) -> usize {
    let me = tree.nodes.len();
    let next = game
        .canonical_info_order()
        .iter()
        .find(|i| h.get(i).is_none() && game.info_set_activated(i, h))
        .cloned();
    let Some(i) = next else {
        tree.nodes.push(TreeNode::Leaf { history: h.clone() });
        return me;
    };
    let player = game.info_set_owner(&i).expect("known information set").clone();
    tree.nodes.push(TreeNode::Decision { info_set: i.clone(), player, children: Vec::new() });
    let mut children = Vec::new();
    for a in game.actions_at(&i).expect("known information set").clone() {
        h.insert(i.clone(), a.clone());
        let c = unfold(game, h, tree);
        h.remove(&i);
        children.push((a, c));
    }
    if let TreeNode::Decision { children: slot, .. } = &mut tree.nodes[me] {
        *slot = children;
    }
    me
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameSpec;

    #[test]
    fn minimal_game_unfolds_to_two_levels() {
        let g = GameSpec::new()
            .node("B", "Bob", "B", ["{x}"])
            .node("x", "Alfred", "x", ["0", "1"])
            .edge("B", "x", "{x}")
            .build()
            .unwrap();
        let t = to_extensive_form(&g);
        assert_eq!(t.leaves().len(), 2);
        assert_eq!(t.depth(), 2);
        assert_eq!(t.nodes.len(), 4);
        assert!(t.is_perfect_information());
    }
}
