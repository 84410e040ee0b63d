//! The `spacetime-doc` text format.
//!
//! ```text
//! spacetime-doc version=1 kind=game
//! [nodes]
//! # id player info-set actions...
//! B Bob B {x}
//! x Alfred x 0 1
//! [edges]
//! B x {x}
//! ```
//!
//! Kinds: `game` (sections `nodes`, `edges`, optional `actions` and
//! `outcomes`), `scenario` (`measurements`, `enabling`, `cover`), `model`
//! (scenario sections plus `distribution`; header carries `semiring=`),
//! `game-morphism` (`source:` and `target:` game sections, `nu`, `beta`) and
//! `scenario-morphism` (`source:`/`target:` scenario sections, `pi`,
//! `alpha`). Tokens are separated by whitespace; `#` starts a comment.
//! Rationals are written `p/q`. See `docs/format.md` for the grammar.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use num::BigRational;
use thiserror::Error;

use crate::categories::{GameMorphism, ScenarioMorphism};
use crate::cover::Facet;
use crate::empirical::{EmpiricalModel, Semiring};
use crate::game::{enumerate_complete_histories, EdgeSpec, GameError, GameSpec, History, NodeSpec, SpacetimeGame};
use crate::ids::{Action, InfoSetId, Measurement, NodeId, Outcome};
use crate::scenario::{EventSet, Scenario, ScenarioError, ScenarioSpec};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "spacetime-doc";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("semantic error at line {line}, column {column}: {message}")]
    Semantic { line: usize, column: usize, message: String },
}

impl FormatError {
    pub fn location(&self) -> (usize, usize) {
        match self {
            FormatError::Syntax { line, column, .. } | FormatError::Semantic { line, column, .. } => (*line, *column),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentKind {
    Game,
    Scenario,
    Model,
    GameMorphism,
    ScenarioMorphism,
}

impl DocumentKind {
    pub fn name(self) -> &'static str {
        match self {
            DocumentKind::Game => "game",
            DocumentKind::Scenario => "scenario",
            DocumentKind::Model => "model",
            DocumentKind::GameMorphism => "game-morphism",
            DocumentKind::ScenarioMorphism => "scenario-morphism",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Self::Game, Self::Scenario, Self::Model, Self::GameMorphism, Self::ScenarioMorphism]
            .into_iter()
            .find(|k| k.name() == s)
    }

    fn sections(self) -> &'static [&'static str] {
        match self {
            DocumentKind::Game => &["nodes", "edges", "actions", "outcomes"],
            DocumentKind::Scenario => &["measurements", "enabling", "cover"],
            DocumentKind::Model => &["measurements", "enabling", "cover", "distribution"],
            DocumentKind::GameMorphism => &[
                "source:nodes",
                "source:edges",
                "source:actions",
                "source:outcomes",
                "target:nodes",
                "target:edges",
                "target:actions",
                "target:outcomes",
                "nu",
                "beta",
            ],
            DocumentKind::ScenarioMorphism => &[
                "source:measurements",
                "source:enabling",
                "source:cover",
                "target:measurements",
                "target:enabling",
                "target:cover",
                "pi",
                "alpha",
            ],
        }
    }
}

/// Any parsed document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Game(SpacetimeGame),
    Scenario(Scenario),
    Model(EmpiricalModel),
    GameMorphism(GameMorphism),
    ScenarioMorphism(ScenarioMorphism),
}

impl Document {
    pub fn kind(&self) -> DocumentKind {
        match self {
            Document::Game(_) => DocumentKind::Game,
            Document::Scenario(_) => DocumentKind::Scenario,
            Document::Model(_) => DocumentKind::Model,
            Document::GameMorphism(_) => DocumentKind::GameMorphism,
            Document::ScenarioMorphism(_) => DocumentKind::ScenarioMorphism,
        }
    }
}

#[derive(Debug, Clone)]
struct Line<'a> {
    no: usize,
    tokens: Vec<(usize, &'a str)>,
}

#[derive(Debug, Clone)]
struct Section<'a> {
    line: usize,
    lines: Vec<Line<'a>>,
}

struct Parsed<'a> {
    kind: DocumentKind,
    header: BTreeMap<&'a str, &'a str>,
    header_line: usize,
    sections: BTreeMap<String, Section<'a>>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, column, message: message.into() }
}

fn semantic(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Semantic { line, column, message: message.into() }
}

fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            if c == '#' {
                return out;
            }
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn split_document(text: &str) -> Result<Parsed<'_>, FormatError> {
    let mut header: Option<(usize, Vec<(usize, &str)>)> = None;
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let no = idx + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        if header.is_none() {
            header = Some((no, tokens));
            continue;
        }
        let (col, first) = tokens[0];
        if tokens.len() == 1 && first.starts_with('[') && first.ends_with(']') && first.len() > 2 {
            let name = first[1..first.len() - 1].to_string();
            if sections.contains_key(&name) {
                return Err(syntax(no, col, format!("section [{name}] appears twice")));
            }
            sections.insert(name.clone(), Section { line: no, lines: Vec::new() });
            current = Some(name);
            continue;
        }
        let Some(name) = &current else {
            return Err(syntax(no, col, "content before the first section"));
        };
        sections.get_mut(name).expect("open section").lines.push(Line { no, tokens });
    }
    let Some((hline, htokens)) = header else {
        return Err(syntax(1, 1, "empty document: expected a `spacetime-doc` header"));
    };
    if htokens[0].1 != MAGIC {
        return Err(syntax(hline, htokens[0].0, format!("expected `{MAGIC}` header")));
    }
    let mut fields = BTreeMap::new();
    for (col, tok) in &htokens[1..] {
        let Some((k, v)) = tok.split_once('=') else {
            return Err(syntax(hline, *col, format!("header field `{tok}` is not key=value")));
        };
        fields.insert(k, v);
    }
    let Some(version) = fields.get("version") else {
        return Err(syntax(hline, 1, "header lacks version="));
    };
    if version.parse::<u32>().ok() != Some(FORMAT_VERSION) {
        return Err(syntax(hline, 1, format!("unsupported version {version}; this reader understands {FORMAT_VERSION}")));
    }
    let kind_name = fields.get("kind").ok_or_else(|| syntax(hline, 1, "header lacks kind="))?;
    let kind = DocumentKind::parse(kind_name).ok_or_else(|| syntax(hline, 1, format!("unknown kind {kind_name}")))?;
    for (name, s) in &sections {
        if !kind.sections().contains(&name.as_str()) {
            return Err(syntax(s.line, 1, format!("unknown section [{name}] for kind {}", kind.name())));
        }
    }
    Ok(Parsed { kind, header: fields, header_line: hline, sections })
}

impl<'a> Parsed<'a> {
    fn section(&self, name: &str) -> Option<&Section<'a>> {
        self.sections.get(name)
    }

    fn lines(&self, name: &str) -> &[Line<'a>] {
        self.sections.get(name).map_or(&[], |s| s.lines.as_slice())
    }

    fn require(&self, name: &str) -> Result<&Section<'a>, FormatError> {
        self.section(name).ok_or_else(|| syntax(self.header_line, 1, format!("missing section [{name}]")))
    }

    /// First line in the given sections containing a token equal to one of
    /// `needles` (all of them, in any position).
    fn locate(&self, names: &[String], needles: &[&str]) -> (usize, usize) {
        for n in names {
            for l in self.lines(n) {
                if needles.iter().all(|x| l.tokens.iter().any(|(_, t)| t == x || t.split_once('=').is_some_and(|(a, _)| a == *x))) {
                    let col = l.tokens.iter().find(|(_, t)| *t == needles[0]).map_or(1, |(c, _)| *c);
                    return (l.no, col);
                }
            }
        }
        names.iter().find_map(|n| self.section(n)).map_or((self.header_line, 1), |s| (s.line, 1))
    }

    fn locate_last(&self, names: &[String], needle: &str, position: usize) -> (usize, usize) {
        let mut found = None;
        for n in names {
            for l in self.lines(n) {
                if l.tokens.get(position).is_some_and(|(_, t)| *t == needle) {
                    found = Some((l.no, l.tokens[position].0));
                }
            }
        }
        found.unwrap_or_else(|| self.locate(names, &[needle]))
    }
}

fn event((col, tok): (usize, &str), line: usize) -> Result<(String, String), FormatError> {
    match tok.split_once('=') {
        Some((a, b)) if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
        _ => Err(syntax(line, col, format!("expected name=value, found `{tok}`"))),
    }
}

fn parse_game(p: &Parsed, prefix: &str) -> Result<SpacetimeGame, FormatError> {
    let name = |s: &str| format!("{prefix}{s}");
    p.require(&name("nodes"))?;
    let mut spec = GameSpec::new();
    for l in p.lines(&name("nodes")) {
        if l.tokens.len() < 4 {
            return Err(syntax(l.no, l.tokens[0].0, "node line needs: id player info-set action..."));
        }
        let t: Vec<&str> = l.tokens.iter().map(|(_, t)| *t).collect();
        spec.nodes.push(NodeSpec {
            id: t[0].into(),
            player: t[1].into(),
            info_set: Some(t[2].into()),
            actions: t[3..].iter().map(|a| (*a).into()).collect(),
        });
    }
    for l in p.lines(&name("edges")) {
        if l.tokens.len() != 3 {
            return Err(syntax(l.no, l.tokens[0].0, "edge line needs: from to label"));
        }
        spec.edges.push(EdgeSpec { from: l.tokens[0].1.into(), to: l.tokens[1].1.into(), label: l.tokens[2].1.into() });
    }
    if p.section(&name("actions")).is_some() {
        spec.actions = Some(p.lines(&name("actions")).iter().flat_map(|l| l.tokens.iter().map(|(_, t)| Action::from(*t))).collect());
    }
    if p.section(&name("outcomes")).is_some() {
        let mut outs = Vec::new();
        for l in p.lines(&name("outcomes")) {
            let mut h = History::new();
            if !(l.tokens.len() == 1 && l.tokens[0].1 == "-") {
                for tok in &l.tokens {
                    let (i, a) = event(*tok, l.no)?;
                    h.insert(i.into(), a.into());
                }
            }
            outs.push(h);
        }
        spec.outcomes = Some(outs);
    }
    spec.build().map_err(|e| {
        let all = [name("nodes"), name("edges"), name("actions"), name("outcomes")];
        let nodes = [name("nodes")];
        let edges = [name("edges")];
        let (line, col) = match &e {
            GameError::DuplicateNode(n) => p.locate_last(&nodes, n.as_str(), 0),
            GameError::UnknownNode(n) => p.locate(&edges, &[n.as_str()]),
            GameError::DuplicateEdge(a, b) => {
                let mut found = p.locate(&edges, &[a.as_str(), b.as_str()]);
                for l in p.lines(&name("edges")) {
                    if l.tokens[0].1 == a.as_str() && l.tokens[1].1 == b.as_str() {
                        found = (l.no, 1);
                    }
                }
                found
            }
            GameError::CyclicGraph(c) if c.len() > 1 => p.locate(&edges, &[c[0].as_str(), c[1].as_str()]),
            GameError::CyclicGraph(c) => p.locate(&edges, &[c[0].as_str()]),
            GameError::EdgeLabelNotAvailable { from, to, .. } => p.locate(&edges, &[from.as_str(), to.as_str()]),
            GameError::InfoSetOwnerMismatch(i) | GameError::InfoSetActionMismatch(i) => p.locate_last(&nodes, i.as_str(), 2),
            GameError::InvalidOutcome { info_set, .. } => p.locate(&[name("outcomes")], &[info_set.as_str()]),
            GameError::InvalidIdentifier(s) => p.locate(&all, &[s.as_str()]),
            _ => p.locate(&all, &[]),
        };
        semantic(line, col, e.to_string())
    })
}

fn scenario_spec(p: &Parsed, prefix: &str) -> Result<ScenarioSpec, FormatError> {
    let name = |s: &str| format!("{prefix}{s}");
    p.require(&name("measurements"))?;
    let mut spec = ScenarioSpec::new();
    for l in p.lines(&name("measurements")) {
        if l.tokens.len() < 2 {
            return Err(syntax(l.no, l.tokens[0].0, "measurement line needs: name outcome..."));
        }
        spec.outcomes.push((l.tokens[0].1.into(), l.tokens[1..].iter().map(|(_, t)| Outcome::from(*t)).collect()));
    }
    for l in p.lines(&name("enabling")) {
        let mut events = Vec::new();
        for tok in &l.tokens[1..] {
            let (a, b) = event(*tok, l.no)?;
            events.push((Measurement::from(a), Outcome::from(b)));
        }
        spec.enabling.push((events, l.tokens[0].1.into()));
    }
    for l in p.lines(&name("cover")) {
        spec.cover.push(l.tokens.iter().map(|(_, t)| Measurement::from(*t)).collect());
    }
    Ok(spec)
}

fn parse_scenario(p: &Parsed, prefix: &str) -> Result<Scenario, FormatError> {
    let spec = scenario_spec(p, prefix)?;
    let name = |s: &str| format!("{prefix}{s}");
    let all = [name("measurements"), name("enabling"), name("cover")];
    spec.build().map_err(|e| {
        let (line, col) = match &e {
            ScenarioError::DuplicateMeasurement(x) => p.locate_last(&[name("measurements")], x.as_str(), 0),
            ScenarioError::UnknownMeasurement(x) => p.locate(&[name("enabling"), name("cover")], &[x.as_str()]),
            ScenarioError::OutcomeNotAvailable { measurement, .. } => p.locate(&[name("enabling")], &[measurement.as_str()]),
            ScenarioError::InvalidIdentifier(s) => p.locate(&all, &[s.as_str()]),
            ScenarioError::Cover(_) => p.section(&name("cover")).map_or((p.header_line, 1), |s| (s.line, 1)),
            _ => p.locate(&all, &[]),
        };
        semantic(line, col, e.to_string())
    })
}

fn parse_rational(tok: &str, line: usize, col: usize) -> Result<BigRational, FormatError> {
    tok.parse::<BigRational>().map_err(|_| syntax(line, col, format!("`{tok}` is not a rational p/q")))
}

fn parse_model(p: &Parsed) -> Result<EmpiricalModel, FormatError> {
    let scenario = parse_scenario(p, "")?;
    let semiring = match p.header.get("semiring") {
        None => return Err(syntax(p.header_line, 1, "model header lacks semiring=")),
        Some(s) => Semiring::parse(s).ok_or_else(|| syntax(p.header_line, 1, format!("unknown semiring {s}")))?,
    };
    let mut m = EmpiricalModel::empty(scenario, semiring);
    for l in p.lines("distribution") {
        let bars: Vec<usize> = l.tokens.iter().enumerate().filter(|(_, (_, t))| *t == "|").map(|(i, _)| i).collect();
        let [b1, b2] = bars[..] else {
            return Err(syntax(l.no, 1, "distribution line needs: facet... | events... | weight"));
        };
        if b2 + 2 != l.tokens.len() {
            return Err(syntax(l.no, l.tokens[b2].0, "expected exactly one weight after the second `|`"));
        }
        let facet: Facet = l.tokens[..b1].iter().map(|(_, t)| InfoSetId::from(*t)).collect();
        let mut events = Vec::new();
        for tok in &l.tokens[b1 + 1..b2] {
            let (a, b) = event(*tok, l.no)?;
            events.push((Measurement::from(a), Outcome::from(b)));
        }
        let section = EventSet::from_events(events).map_err(|e| semantic(l.no, 1, e.to_string()))?;
        let (wcol, wtok) = l.tokens[b2 + 1];
        let w = parse_rational(wtok, l.no, wcol)?;
        if m.local(&facet).and_then(|d| d.weights.get(&section)).is_some() {
            return Err(semantic(l.no, 1, format!("section {section} is given twice")));
        }
        m.set(&facet, section, w).map_err(|e| semantic(l.no, 1, e.to_string()))?;
    }
    m.validate().map_err(|e| {
        let line = p.section("distribution").map_or(p.header_line, |s| s.line);
        semantic(line, 1, e.to_string())
    })?;
    Ok(m)
}

fn pairs<'a>(p: &'a Parsed, name: &str, width: usize) -> Result<Vec<(usize, Vec<&'a str>)>, FormatError> {
    p.require(name)?;
    p.lines(name)
        .iter()
        .map(|l| {
            if l.tokens.len() != width {
                Err(syntax(l.no, l.tokens[0].0, format!("[{name}] lines have {width} fields")))
            } else {
                Ok((l.no, l.tokens.iter().map(|(_, t)| *t).collect()))
            }
        })
        .collect()
}

fn parse_game_morphism(p: &Parsed) -> Result<GameMorphism, FormatError> {
    let source = Arc::new(parse_game(p, "source:")?);
    let target = Arc::new(parse_game(p, "target:")?);
    let mut nu_prime = BTreeMap::new();
    for (no, t) in pairs(p, "nu", 2)? {
        if nu_prime.insert(NodeId::from(t[0]), NodeId::from(t[1])).is_some() {
            return Err(semantic(no, 1, format!("nu' assigns {} twice", t[0])));
        }
    }
    let mut beta: BTreeMap<InfoSetId, BTreeMap<Action, Action>> = BTreeMap::new();
    for (no, t) in pairs(p, "beta", 3)? {
        if beta.entry(t[0].into()).or_default().insert(t[1].into(), t[2].into()).is_some() {
            return Err(semantic(no, 1, format!("beta at {} maps {} twice", t[0], t[1])));
        }
    }
    Ok(GameMorphism { source, target, nu_prime, beta })
}

fn parse_scenario_morphism(p: &Parsed) -> Result<ScenarioMorphism, FormatError> {
    let source = Arc::new(parse_scenario(p, "source:")?);
    let target = Arc::new(parse_scenario(p, "target:")?);
    let mut pi_prime = BTreeMap::new();
    for (no, t) in pairs(p, "pi", 2)? {
        if pi_prime.insert(Measurement::from(t[0]), Measurement::from(t[1])).is_some() {
            return Err(semantic(no, 1, format!("pi' assigns {} twice", t[0])));
        }
    }
    let mut alpha: BTreeMap<Measurement, BTreeMap<Outcome, Outcome>> = BTreeMap::new();
    for (no, t) in pairs(p, "alpha", 3)? {
        if alpha.entry(t[0].into()).or_default().insert(t[1].into(), t[2].into()).is_some() {
            return Err(semantic(no, 1, format!("alpha at {} maps {} twice", t[0], t[1])));
        }
    }
    Ok(ScenarioMorphism { source, target, pi_prime, alpha })
}

/// Parses any document, enforcing the invariants of the object it describes.
pub fn parse_document(text: &str) -> Result<Document, FormatError> {
    let p = split_document(text)?;
    Ok(match p.kind {
        DocumentKind::Game => Document::Game(parse_game(&p, "")?),
        DocumentKind::Scenario => Document::Scenario(parse_scenario(&p, "")?),
        DocumentKind::Model => Document::Model(parse_model(&p)?),
        DocumentKind::GameMorphism => Document::GameMorphism(parse_game_morphism(&p)?),
        DocumentKind::ScenarioMorphism => Document::ScenarioMorphism(parse_scenario_morphism(&p)?),
    })
}

fn header(out: &mut String, kind: DocumentKind, extra: &str) {
    let _ = writeln!(out, "{MAGIC} version={FORMAT_VERSION} kind={}{extra}", kind.name());
}

fn write_game(out: &mut String, g: &SpacetimeGame, prefix: &str) {
    let _ = writeln!(out, "[{prefix}nodes]");
    for (id, n) in g.nodes() {
        let acts: Vec<&str> = n.actions.iter().map(Action::as_str).collect();
        let _ = writeln!(out, "{id} {} {} {}", n.owner, n.info_set, acts.join(" "));
    }
    let _ = writeln!(out, "[{prefix}edges]");
    for (a, b, l) in g.edges() {
        let _ = writeln!(out, "{a} {b} {l}");
    }
    let used: BTreeSet<&Action> = g.nodes().flat_map(|(_, n)| n.actions.iter()).collect();
    let extra: Vec<&str> = g.actions().iter().filter(|a| !used.contains(a)).map(Action::as_str).collect();
    if !extra.is_empty() {
        let _ = writeln!(out, "[{prefix}actions]\n{}", extra.join(" "));
    }
    if g.outcomes() != enumerate_complete_histories(g).as_slice() {
        let _ = writeln!(out, "[{prefix}outcomes]");
        for h in g.outcomes() {
            if h.is_empty() {
                let _ = writeln!(out, "-");
            } else {
                let parts: Vec<String> = h.iter().map(|(i, a)| format!("{i}={a}")).collect();
                let _ = writeln!(out, "{}", parts.join(" "));
            }
        }
    }
}

fn events_text(t: &EventSet) -> String {
    t.iter().map(|(x, o)| format!(" {x}={o}")).collect()
}

fn write_scenario(out: &mut String, s: &Scenario, prefix: &str) {
    let _ = writeln!(out, "[{prefix}measurements]");
    for (x, os) in s.outcome_table() {
        let os: Vec<&str> = os.iter().map(Outcome::as_str).collect();
        let _ = writeln!(out, "{x} {}", os.join(" "));
    }
    let _ = writeln!(out, "[{prefix}enabling]");
    let mut lines: Vec<(&Measurement, &EventSet)> = s.enabling().iter().map(|(t, x)| (x, t)).collect();
    lines.sort();
    for (x, t) in lines {
        let _ = writeln!(out, "{x}{}", events_text(t));
    }
    let _ = writeln!(out, "[{prefix}cover]");
    for f in s.cover().facets() {
        let names: Vec<&str> = f.iter().map(InfoSetId::as_str).collect();
        let _ = writeln!(out, "{}", names.join(" "));
    }
}

/// Canonical text for a document.
pub fn serialize_document(doc: &Document) -> String {
    let mut out = String::new();
    match doc {
        Document::Game(g) => {
            header(&mut out, DocumentKind::Game, "");
            write_game(&mut out, g, "");
        }
        Document::Scenario(s) => {
            header(&mut out, DocumentKind::Scenario, "");
            write_scenario(&mut out, s, "");
        }
        Document::Model(m) => {
            header(&mut out, DocumentKind::Model, &format!(" semiring={}", m.semiring()));
            write_scenario(&mut out, m.scenario(), "");
            let _ = writeln!(out, "[distribution]");
            for (c, d) in m.locals() {
                let names: Vec<&str> = c.iter().map(InfoSetId::as_str).collect();
                for (s, w) in &d.weights {
                    let _ = writeln!(out, "{} |{} | {w}", names.join(" "), events_text(s));
                }
            }
        }
        Document::GameMorphism(m) => {
            header(&mut out, DocumentKind::GameMorphism, "");
            write_game(&mut out, &m.source, "source:");
            write_game(&mut out, &m.target, "target:");
            let _ = writeln!(out, "[nu]");
            for (a, b) in &m.nu_prime {
                let _ = writeln!(out, "{a} {b}");
            }
            let _ = writeln!(out, "[beta]");
            for (x, b) in &m.beta {
                for (a2, a) in b {
                    let _ = writeln!(out, "{x} {a2} {a}");
                }
            }
        }
        Document::ScenarioMorphism(m) => {
            header(&mut out, DocumentKind::ScenarioMorphism, "");
            write_scenario(&mut out, &m.source, "source:");
            write_scenario(&mut out, &m.target, "target:");
            let _ = writeln!(out, "[pi]");
            for (a, b) in &m.pi_prime {
                let _ = writeln!(out, "{a} {b}");
            }
            let _ = writeln!(out, "[alpha]");
            for (x, b) in &m.alpha {
                for (o2, o) in b {
                    let _ = writeln!(out, "{x} {o2} {o}");
                }
            }
        }
    }
    out
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_document(self))
    }
}
