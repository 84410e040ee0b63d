//! Graphviz export. Observer nodes are boxes, nature nodes ellipses;
//! information sets with several nodes are dashed clusters.

use std::fmt::Write as _;

use crate::game::SpacetimeGame;
use crate::ids::PlayerId;
use crate::scenario::Scenario;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT for a game. `color` fills nodes by player.
pub fn game_to_dot(game: &SpacetimeGame, color: bool) -> String {
    let nature = PlayerId::nature();
    let mut out = String::from("digraph game {\n  rankdir=TB;\n");
    let style = |p: &PlayerId| -> String {
        let shape = if *p == nature { "ellipse" } else { "box" };
        if color {
            let fill = if *p == nature { "lightyellow" } else { "lightblue" };
            format!("shape={shape}, style=filled, fillcolor={fill}")
        } else {
            format!("shape={shape}")
        }
    };
    let mut k = 0;
    for (i, members) in game.info_sets() {
        if members.len() > 1 {
            let _ = writeln!(out, "  subgraph cluster_{k} {{\n    label={};\n    style=dashed;", quote(i.as_str()));
            for n in members {
                let _ = writeln!(out, "    {} [label={}, {}];", quote(n.as_str()), quote(i.as_str()), style(game.owner(n)));
            }
            out.push_str("  }\n");
            k += 1;
        } else {
            for n in members {
                let _ = writeln!(out, "  {} [label={}, {}];", quote(n.as_str()), quote(i.as_str()), style(game.owner(n)));
            }
        }
    }
    for (a, b, l) in game.edges() {
        let _ = writeln!(out, "  {} -> {} [label={}];", quote(a.as_str()), quote(b.as_str()), quote(l.as_str()));
    }
    out.push_str("}\n");
    out
}

/// DOT for a scenario: enabling event sets (boxes) point at the measurements
/// they enable (ellipses); facets are dashed clusters listed as comments
/// since measurements may share several facets.
pub fn scenario_to_dot(scenario: &Scenario, color: bool) -> String {
    let mut out = String::from("digraph scenario {\n  rankdir=LR;\n");
    for x in scenario.measurements() {
        let outcomes: Vec<&str> = scenario.outcomes_of(x).expect("known").iter().map(|o| o.as_str()).collect();
        let fill = if color { ", style=filled, fillcolor=lightyellow" } else { "" };
        let _ = writeln!(
            out,
            "  {} [shape=ellipse, label={}{fill}];",
            quote(&format!("m:{x}")),
            quote(&format!("{x} ∈ {{{}}}", outcomes.join(",")))
        );
    }
    for t in scenario.enabling_sides() {
        let fill = if color { ", style=filled, fillcolor=lightblue" } else { "" };
        let _ = writeln!(out, "  {} [shape=box, label={}{fill}];", quote(&format!("e:{t}")), quote(&t.to_string()));
    }
    for (t, x) in scenario.enabling() {
        let _ = writeln!(out, "  {} -> {};", quote(&format!("e:{t}")), quote(&format!("m:{x}")));
    }
    for f in scenario.cover().facets() {
        let names: Vec<&str> = f.iter().map(|x| x.as_str()).collect();
        let _ = writeln!(out, "  // facet {{{}}}", names.join(","));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn minimal_game_has_two_nodes() {
        let dot = game_to_dot(&corpus::minimal_game(), false);
        assert_eq!(dot.matches("[label=").count() - dot.matches("->").count(), 2);
        assert_eq!(dot.matches("->").count(), 1);
        assert_eq!(dot, game_to_dot(&corpus::minimal_game(), false));
    }

    #[test]
    fn cyclic3_topology() {
        let dot = game_to_dot(&corpus::cyclic3_game(), true);
        assert_eq!(dot.matches("shape=box").count(), 1);
        assert_eq!(dot.matches("shape=ellipse").count(), 6);
        assert_eq!(dot.matches("subgraph cluster_").count(), 3);
    }

    #[test]
    fn scenario_is_bipartite() {
        let dot = scenario_to_dot(&corpus::adaptive().scenario, false);
        assert_eq!(dot.matches("shape=box").count(), 2);
        assert_eq!(dot.matches("->").count(), 4);
    }
}
