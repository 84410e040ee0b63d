//! Command-line front end. `run` is the whole program minus process exit so
//! tests can drive it in-process.

use std::io::{Read, Write};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spacetime_core::categories::{
    check_game_morphism, check_scenario_morphism, functor_f_object, functor_g_object, lift_morphism, roundtrip_iso,
};
use spacetime_core::corpus;
use spacetime_core::dot::{game_to_dot, scenario_to_dot};
use spacetime_core::empirical::{
    check_compatibility, find_global_section, section_residual, verify_certificate, EmpiricalModel, Semiring,
    SectionResult,
};
use spacetime_core::format::{parse_document, serialize_document, Document};
use spacetime_core::game::{check_alternating_with, enumerate_complete_histories, enumerate_histories, natural_cover, SpacetimeGame};
use spacetime_core::ids::PlayerId;
use spacetime_core::scenario::{enumerate_scenario_histories, Scenario};
use spacetime_core::strategy::{enumerate_pure_strategies, reduced_strategic_form, strategic_form};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "spacetime", version, about = "Spacetime games, causal scenarios and contextuality checks")]
struct Cli {
    /// Emit the report on stdout as JSON instead of key: value lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Game,
    Scenario,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SemiringArg {
    Probability,
    Possibility,
    Signed,
}

impl From<SemiringArg> for Semiring {
    fn from(s: SemiringArg) -> Self {
        match s {
            SemiringArg::Probability => Semiring::Probability,
            SemiringArg::Possibility => Semiring::Possibility,
            SemiringArg::Signed => Semiring::Signed,
        }
    }
}

/// Inputs are file paths, `-` for stdin, or `corpus:<name>`.
#[derive(Subcommand, Debug)]
enum Command {
    /// Check a document's invariants (games: outcomes and unused parts).
    Validate { input: String },
    /// Evaluate the nine alternation rules on a game.
    CheckAlternating {
        input: String,
        /// Allow one unused observer action per observer node.
        #[arg(long)]
        relax_bob_a: bool,
    },
    /// Check that a scenario's cover is causally secured.
    CheckSecured { input: String },
    /// List complete histories (all histories with --all).
    Histories {
        input: String,
        #[arg(long)]
        all: bool,
    },
    /// Print the natural cover of a game or the cover of a scenario.
    Cover { input: String },
    /// Convert between games and scenarios with the functors F and G.
    Convert {
        #[arg(long)]
        to: Target,
        input: String,
    },
    /// Check that a scenario is isomorphic to its round trip through games.
    Roundtrip { input: String },
    /// List pure strategies, or print the strategic form as CSV.
    Strategies {
        input: String,
        #[arg(long)]
        player: Option<String>,
        /// Print the full strategic-form table as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Group strategies into outcome-equivalent classes.
    Reduced {
        input: String,
        #[arg(long)]
        player: Option<String>,
    },
    /// Decide whether an empirical model has a global section.
    CheckContextuality {
        input: String,
        /// Override the model's semiring.
        #[arg(long, value_enum)]
        semiring: Option<SemiringArg>,
    },
    /// Lift a scenario morphism to a game morphism between the G-images (or
    /// the given games).
    Lift {
        input: String,
        #[arg(long)]
        source_game: Option<String>,
        #[arg(long)]
        target_game: Option<String>,
    },
    /// List corpus entries or print one as a document.
    Corpus {
        name: Option<String>,
        /// Print the entry's scenario instead of its game.
        #[arg(long)]
        scenario: bool,
    },
    /// Export a game or scenario as Graphviz DOT.
    Dot { input: String },
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    json: bool,
    color: bool,
    ansi: bool,
}

/// A structured report: stdout gets key/value lines or JSON, stderr a one-line
/// human summary.
struct Report {
    command: &'static str,
    pass: bool,
    fields: Vec<(String, Value)>,
    items: Vec<String>,
}

impl Report {
    fn new(command: &'static str, pass: bool) -> Self {
        Report { command, pass, fields: Vec::new(), items: Vec::new() }
    }

    fn field(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.fields.push((k.to_string(), v.into()));
        self
    }

    fn items<I: IntoIterator<Item = String>>(mut self, it: I) -> Self {
        self.items.extend(it);
        self
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Io<'_> {
    fn emit(&mut self, r: Report, summary: &str) -> i32 {
        let status = if r.pass { "pass" } else { "fail" };
        if self.json {
            let fields: serde_json::Map<String, Value> = r.fields.iter().cloned().collect();
            let v = json!({"command": r.command, "status": status, "fields": fields, "items": r.items});
            let _ = writeln!(self.out, "{}", serde_json::to_string_pretty(&v).expect("json"));
        } else {
            let _ = writeln!(self.out, "command: {}\nstatus: {status}", r.command);
            for (k, v) in &r.fields {
                let _ = writeln!(self.out, "{k}: {}", render_value(v));
            }
            for i in &r.items {
                let _ = writeln!(self.out, "- {i}");
            }
        }
        let tag = match (self.ansi, r.pass) {
            (true, true) => "\x1b[32mPASS\x1b[0m",
            (true, false) => "\x1b[31mFAIL\x1b[0m",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        let _ = writeln!(self.err, "{tag} {}: {summary}", r.command);
        if r.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    fn usage(&mut self, msg: impl std::fmt::Display) -> i32 {
        let _ = writeln!(self.err, "error: {msg}");
        EXIT_USAGE
    }

    fn read_text(&mut self, input: &str) -> Result<String, String> {
        if input == "-" {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(|e| format!("reading stdin: {e}"))?;
            Ok(s)
        } else if let Some(name) = input.strip_prefix("corpus:") {
            corpus_document(name, false).map(|d| serialize_document(&d)).ok_or_else(|| format!("no corpus entry {name}"))
        } else {
            std::fs::read_to_string(input).map_err(|e| format!("reading {input}: {e}"))
        }
    }

    fn load(&mut self, input: &str) -> Result<Document, String> {
        let text = self.read_text(input)?;
        parse_document(&text).map_err(|e| format!("{input}: {e}"))
    }
}

fn corpus_document(name: &str, scenario: bool) -> Option<Document> {
    if let Some((_, m)) = corpus::standard_models().into_iter().find(|(n, _)| *n == name) {
        return Some(Document::Model(m));
    }
    let e = corpus::by_name(name)?;
    Some(if scenario { Document::Scenario(e.scenario) } else { Document::Game(e.game) })
}

/// Scenario view of a document: scenarios as-is, games through F.
fn as_scenario(doc: Document) -> Result<Scenario, String> {
    match doc {
        Document::Scenario(s) => Ok(s),
        Document::Model(m) => Ok(m.scenario().clone()),
        Document::Game(g) => functor_f_object(&g).map_err(|e| e.to_string()),
        other => Err(format!("expected a scenario or game, found a {}", other.kind().name())),
    }
}

fn as_game(doc: Document) -> Result<SpacetimeGame, String> {
    match doc {
        Document::Game(g) => Ok(g),
        other => Err(format!("expected a game, found a {}", other.kind().name())),
    }
}

fn player_arg(game: &SpacetimeGame, p: &Option<String>) -> Result<Vec<PlayerId>, String> {
    match p {
        None => Ok(game.players().into_iter().collect()),
        Some(name) => {
            let id = PlayerId::from(name.as_str());
            if game.players().contains(&id) {
                Ok(vec![id])
            } else {
                Err(format!("unknown player {name}"))
            }
        }
    }
}

/// Runs the CLI and returns the exit status. Status tags are never colored.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(args, stdin, out, err, false)
}

/// Like [`run`]; `err_is_terminal` enables colored PASS/FAIL tags unless
/// `NO_COLOR` is set.
pub fn run_with<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write, err_is_terminal: bool) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    let color = std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty());
    let mut io = Io { stdin, out, err, json: cli.json, color, ansi: color && err_is_terminal };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(msg) => io.usage(msg),
    }
}

fn dispatch(cmd: Command, io: &mut Io) -> Result<i32, String> {
    match cmd {
        Command::Validate { input } => {
            let text = io.read_text(&input)?;
            let doc = match parse_document(&text) {
                Ok(d) => d,
                Err(e) => {
                    let (line, column) = e.location();
                    let r = Report::new("validate", false)
                        .field("line", line)
                        .field("column", column)
                        .field("error", e.to_string());
                    return Ok(io.emit(r, &e.to_string()));
                }
            };
            Ok(validate(doc, io))
        }
        Command::CheckAlternating { input, relax_bob_a } => {
            let g = as_game(io.load(&input)?)?;
            let r = check_alternating_with(&g, relax_bob_a);
            let failed: Vec<&str> = r.failed_rules().into_iter().map(|x| x.id()).collect();
            let items = r.violations.iter().map(|v| format!("{}: {} ({})", v.rule.id(), v.detail, v.subjects.join(", ")));
            let rep = Report::new("check-alternating", r.passed).field("failed_rules", failed.join(",")).items(items);
            let summary = if r.passed { "all nine rules hold".to_string() } else { format!("fails {}", failed.join(", ")) };
            Ok(io.emit(rep, &summary))
        }
        Command::CheckSecured { input } => {
            let s = as_scenario(io.load(&input)?)?;
            let r = s.check_causally_secured().map_err(|e| e.to_string())?;
            let failed: Vec<String> = r.failed_criteria().into_iter().map(|c| c.to_string()).collect();
            let items = r.violations.iter().map(|v| format!("{}: {}", v.criterion, v.witness));
            let rep = Report::new("check-secured", r.passed).field("failed_criteria", failed.join(",")).items(items);
            let summary = if r.passed { "cover is causally secured".to_string() } else { format!("fails {}", failed.join(", ")) };
            Ok(io.emit(rep, &summary))
        }
        Command::Histories { input, all } => {
            let doc = io.load(&input)?;
            let (count, items): (usize, Vec<String>) = match doc {
                Document::Game(g) => {
                    let hs = if all { enumerate_histories(&g) } else { enumerate_complete_histories(&g) };
                    (hs.len(), hs.iter().map(|h| h.to_string()).collect())
                }
                other => {
                    let s = as_scenario(other)?;
                    let hs = enumerate_scenario_histories(&s, !all);
                    (hs.len(), hs.iter().map(|h| format!("{h:?}")).collect())
                }
            };
            let rep = Report::new("histories", true).field("count", count).items(items);
            Ok(io.emit(rep, &format!("{count} histories")))
        }
        Command::Cover { input } => {
            let doc = io.load(&input)?;
            let text = match &doc {
                Document::Game(g) => natural_cover(g).render_ordered(|x| g.info_rank(x)),
                Document::Scenario(s) => s.cover().to_string(),
                Document::Model(m) => m.scenario().cover().to_string(),
                other => return Err(format!("no cover for a {}", other.kind().name())),
            };
            if io.json {
                let rep = Report::new("cover", true).field("cover", text.clone());
                io.emit(rep, &text);
            } else {
                let _ = writeln!(io.out, "{text}");
            }
            Ok(EXIT_PASS)
        }
        Command::Convert { to, input } => {
            let doc = io.load(&input)?;
            let converted = match (to, doc) {
                (Target::Scenario, Document::Game(g)) => match functor_f_object(&g) {
                    Ok(s) => Document::Scenario(s),
                    Err(e) => {
                        let _ = writeln!(io.err, "FAIL convert: {e}");
                        return Ok(EXIT_FAIL);
                    }
                },
                (Target::Game, Document::Scenario(s)) => match functor_g_object(&s) {
                    Ok(g) => Document::Game(g),
                    Err(e) => {
                        let _ = writeln!(io.err, "FAIL convert: {e}");
                        return Ok(EXIT_FAIL);
                    }
                },
                (Target::Game, d @ Document::Game(_)) | (Target::Scenario, d @ Document::Scenario(_)) => d,
                (_, other) => return Err(format!("cannot convert a {}", other.kind().name())),
            };
            let _ = write!(io.out, "{}", serialize_document(&converted));
            let _ = writeln!(io.err, "PASS convert: wrote a {}", converted.kind().name());
            Ok(EXIT_PASS)
        }
        Command::Roundtrip { input } => {
            let s = as_scenario(io.load(&input)?)?;
            match roundtrip_iso(&s) {
                Ok(rt) => {
                    let rep = Report::new("roundtrip", true)
                        .field("game_nodes", rt.game.node_count())
                        .field("enabling_equal", true)
                        .field("composites_identity", true);
                    Ok(io.emit(rep, "scenario is isomorphic to F(G(scenario))"))
                }
                Err(e) => {
                    let rep = Report::new("roundtrip", false).field("error", e.to_string());
                    Ok(io.emit(rep, &e.to_string()))
                }
            }
        }
        Command::Strategies { input, player, csv } => {
            let g = as_game(io.load(&input)?)?;
            let players = player_arg(&g, &player)?;
            if csv {
                write_strategic_csv(&g, io)?;
                return Ok(EXIT_PASS);
            }
            let mut rep = Report::new("strategies", true);
            let mut items = Vec::new();
            for p in &players {
                let ss = enumerate_pure_strategies(&g, p).map_err(|e| e.to_string())?;
                rep = rep.field(&format!("count.{p}"), ss.len());
                items.extend(ss.iter().map(|s| s.to_string()));
            }
            let rep = rep.items(items);
            Ok(io.emit(rep, "strategies enumerated"))
        }
        Command::Reduced { input, player } => {
            let g = as_game(io.load(&input)?)?;
            let players = player_arg(&g, &player)?;
            let red = reduced_strategic_form(&g);
            let mut rep = Report::new("reduced", true);
            let mut items = Vec::new();
            for p in &players {
                let classes = red.classes_of(p).expect("player");
                let total = red.form.strategies[red.form.player_index(p).expect("player")].len();
                let cond: Vec<usize> = classes.iter().map(|c| c.conditional.len()).collect();
                rep = rep
                    .field(&format!("strategies.{p}"), total)
                    .field(&format!("classes.{p}"), classes.len())
                    .field(&format!("conditional_choices.{p}"), cond.iter().max().copied().unwrap_or(0));
                items.extend(
                    classes.iter().map(|c| format!("{} x{} conditional={}", c.representative, c.members.len(), c.conditional.len())),
                );
            }
            let rep = rep.items(items);
            Ok(io.emit(rep, "reduced strategic form computed"))
        }
        Command::CheckContextuality { input, semiring } => {
            let mut m = match io.load(&input)? {
                Document::Model(m) => m,
                other => return Err(format!("expected a model, found a {}", other.kind().name())),
            };
            if let Some(s) = semiring {
                m = m.with_semiring(s.into());
            }
            contextuality(&m, io)
        }
        Command::Lift { input, source_game, target_game } => {
            let mu = match io.load(&input)? {
                Document::ScenarioMorphism(m) => m,
                other => return Err(format!("expected a scenario-morphism, found a {}", other.kind().name())),
            };
            let mut game_for = |arg: &Option<String>, s: &Scenario| -> Result<SpacetimeGame, String> {
                match arg {
                    Some(path) => as_game(io.load(path)?),
                    None => functor_g_object(s).map_err(|e| e.to_string()),
                }
            };
            let target = Arc::new(game_for(&target_game, &mu.target)?);
            let source = Arc::new(game_for(&source_game, &mu.source)?);
            match lift_morphism(&mu, target, source) {
                Ok(g) => {
                    let _ = write!(io.out, "{}", serialize_document(&Document::GameMorphism(g)));
                    let _ = writeln!(io.err, "PASS lift: game morphism written");
                    Ok(EXIT_PASS)
                }
                Err(e) => {
                    let _ = writeln!(io.err, "FAIL lift: {e}");
                    Ok(EXIT_FAIL)
                }
            }
        }
        Command::Corpus { name, scenario } => match name {
            None => {
                let mut items: Vec<String> = corpus::all()
                    .iter()
                    .map(|e| {
                        let aliases = if e.aliases.is_empty() { String::new() } else { format!(" ({})", e.aliases.join(", ")) };
                        format!("{}{aliases}: {}{}", e.name, e.summary, if e.in_scope { "" } else { " [outside the categories]" })
                    })
                    .collect();
                items.extend(corpus::standard_models().iter().map(|(n, m)| format!("{n}: {} model", m.semiring())));
                let rep = Report::new("corpus", true).field("entries", items.len()).items(items);
                Ok(io.emit(rep, "corpus listed"))
            }
            Some(n) => {
                let doc = corpus_document(&n, scenario).ok_or_else(|| format!("no corpus entry {n}"))?;
                let _ = write!(io.out, "{}", serialize_document(&doc));
                Ok(EXIT_PASS)
            }
        },
        Command::Dot { input } => {
            let text = match io.load(&input)? {
                Document::Game(g) => game_to_dot(&g, io.color),
                Document::Scenario(s) => scenario_to_dot(&s, io.color),
                Document::Model(m) => scenario_to_dot(m.scenario(), io.color),
                other => return Err(format!("no DOT rendering for a {}", other.kind().name())),
            };
            let _ = write!(io.out, "{text}");
            Ok(EXIT_PASS)
        }
    }
}

fn validate(doc: Document, io: &mut Io) -> i32 {
    let kind = doc.kind().name();
    match doc {
        Document::Game(g) => {
            let r = g.validate();
            let rep = Report::new("validate", r.valid).field("kind", kind).items(r.diagnostics());
            io.emit(rep, if r.valid { "game is valid" } else { "game has unused or inconsistent parts" })
        }
        Document::Scenario(s) => {
            let rep = Report::new("validate", true)
                .field("kind", kind)
                .field("acyclic", s.check_acyclic())
                .field("unique_bridges", s.check_unique_causal_bridges().unique)
                .field("clean", s.is_clean())
                .field("in_category", s.in_category_scope());
            io.emit(rep, "scenario is well formed")
        }
        Document::Model(m) => {
            let c = check_compatibility(&m);
            let mut rep = Report::new("validate", c.compatible).field("kind", kind).field("compatible", c.compatible);
            if let Some(w) = &c.witness {
                rep = rep.field("witness", w.to_string());
            }
            io.emit(rep, if c.compatible { "model is compatible" } else { "model is not compatible" })
        }
        Document::GameMorphism(m) => {
            let r = check_game_morphism(&m);
            let items: Vec<String> = r.violations.iter().map(|v| format!("{}: {}", v.rule, v.detail)).chain(r.diagnostics.clone()).collect();
            let rep = Report::new("validate", r.passed).field("kind", kind).items(items);
            io.emit(rep, if r.passed { "game morphism satisfies all rules" } else { "game morphism violates rules" })
        }
        Document::ScenarioMorphism(m) => {
            let r = check_scenario_morphism(&m);
            let items: Vec<String> = r.violations.iter().map(|v| format!("{}: {}", v.rule, v.detail)).chain(r.diagnostics.clone()).collect();
            let rep = Report::new("validate", r.passed).field("kind", kind).items(items);
            io.emit(rep, if r.passed { "scenario morphism satisfies all rules" } else { "scenario morphism violates rules" })
        }
    }
}

fn contextuality(m: &EmpiricalModel, io: &mut Io) -> Result<i32, String> {
    let result = match find_global_section(m) {
        Ok(r) => r,
        Err(e) => {
            let rep = Report::new("check-contextuality", false).field("semiring", m.semiring().name()).field("error", e.to_string());
            return Ok(io.emit(rep, &e.to_string()));
        }
    };
    Ok(match result {
        SectionResult::Found(s) => {
            let residual = section_residual(m, &s).map_err(|e| e.to_string())?;
            let items = s.weights.iter().map(|(p, w)| format!("{w} {p}"));
            let rep = Report::new("check-contextuality", true)
                .field("semiring", m.semiring().name())
                .field("result", "feasible")
                .field("support", s.weights.len())
                .field("residual_zero", residual.is_empty())
                .items(items);
            io.emit(rep, "global section found; the model is non-contextual")
        }
        SectionResult::Infeasible(cert) => {
            let verified = verify_certificate(m, &cert).map_err(|e| e.to_string())?;
            let text = cert.to_string();
            let mut lines = text.lines();
            let kind = lines.next().unwrap_or_default().to_string();
            let rep = Report::new("check-contextuality", false)
                .field("semiring", m.semiring().name())
                .field("result", "infeasible")
                .field("certificate", kind)
                .field("certificate_verified", verified)
                .items(lines.map(|l| l.trim().to_string()));
            io.emit(rep, "no global section; the model is contextual")
        }
    })
}

fn write_strategic_csv(g: &SpacetimeGame, io: &mut Io) -> Result<(), String> {
    let form = strategic_form(g);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head: Vec<String> = form.players.iter().map(|p| p.to_string()).collect();
    head.push("history".into());
    w.write_record(&head).map_err(|e| e.to_string())?;
    let radices = form.radices();
    for (k, h) in form.table.iter().enumerate() {
        let mut rem = k;
        let mut idx = vec![0; radices.len()];
        for (j, r) in radices.iter().enumerate().rev() {
            idx[j] = rem % r;
            rem /= r;
        }
        let mut row: Vec<String> = idx.iter().enumerate().map(|(p, i)| form.strategies[p][*i].to_string()).collect();
        row.push(h.to_string());
        w.write_record(&row).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    let _ = io.out.write_all(&bytes);
    let _ = writeln!(io.err, "PASS strategies: {} profiles", form.table.len());
    Ok(())
}
