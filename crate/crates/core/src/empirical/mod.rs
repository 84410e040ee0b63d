//! Empirical models over a scenario's cover, compatibility, generation from
//! mixed strategies of nature, and exact global-section search.
//!
//! Local sections on a facet are partial: a measurement of the facet is in
//! the domain exactly when its bridge occurred. In scenarios without
//! adaptivity this is the full product of outcome sets.

pub mod lp;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigRational, One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::categories::{scenario_sketch, CategoryError};
use crate::cover::{render_facet, Facet};
use crate::game::{History, SpacetimeGame};
use crate::ids::{Measurement, PlayerId};
use crate::par::{decode, Exec};
use crate::scenario::{EventSet, Scenario};
use crate::strategy::{play, PureStrategy};

pub type Weight = BigRational;

/// How values combine and normalize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Semiring {
    /// Non-negative rationals summing to 1.
    Probability,
    /// Booleans (0 or 1) with at least one 1; sum is OR, product is AND.
    Possibility,
    /// Rationals of any sign summing to 1.
    Signed,
}

impl Semiring {
    pub fn name(self) -> &'static str {
        match self {
            Semiring::Probability => "probability",
            Semiring::Possibility => "possibility",
            Semiring::Signed => "signed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "probability" => Some(Semiring::Probability),
            "possibility" | "possibilistic" | "boolean" => Some(Semiring::Possibility),
            "signed" => Some(Semiring::Signed),
            _ => None,
        }
    }

    pub fn add(self, a: &Weight, b: &Weight) -> Weight {
        match self {
            Semiring::Possibility => {
                if a.is_zero() && b.is_zero() {
                    Weight::zero()
                } else {
                    Weight::one()
                }
            }
            _ => a + b,
        }
    }

    pub fn mul(self, a: &Weight, b: &Weight) -> Weight {
        match self {
            Semiring::Possibility => {
                if a.is_zero() || b.is_zero() {
                    Weight::zero()
                } else {
                    Weight::one()
                }
            }
            _ => a * b,
        }
    }

    /// Checks a weight collection against the normalization rule.
    pub fn check_normalized<'a, I: IntoIterator<Item = &'a Weight>>(self, values: I) -> Result<(), String> {
        let values: Vec<&Weight> = values.into_iter().collect();
        match self {
            Semiring::Possibility => {
                if let Some(v) = values.iter().find(|v| !v.is_zero() && !v.is_one()) {
                    return Err(format!("possibilistic value {v} is neither 0 nor 1"));
                }
                if values.iter().all(|v| v.is_zero()) {
                    return Err("no possible outcome".into());
                }
            }
            Semiring::Probability | Semiring::Signed => {
                if self == Semiring::Probability {
                    if let Some(v) = values.iter().find(|v| v.is_negative()) {
                        return Err(format!("negative probability {v}"));
                    }
                }
                let total: Weight = values.iter().copied().sum();
                if !total.is_one() {
                    return Err(format!("weights sum to {total}, not 1"));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmpiricalError {
    #[error("{sub} is not contained in facet {facet}")]
    NotSubset { sub: String, facet: String },
    #[error("not normalized: {0}")]
    NotNormalized(String),
    #[error("{0} is not a facet of the cover")]
    UnknownFacet(String),
    #[error("{section} is not a local section over {facet}")]
    InvalidSection { facet: String, section: String },
    #[error("facet {0} has no local distribution")]
    MissingLocal(String),
    #[error("model is not compatible: {0}")]
    IncompatibleModel(String),
    #[error("{0} global assignments exceed the enumeration limit")]
    TooLarge(u128),
    #[error("strategy is not a total assignment of the scenario's measurements: {0}")]
    InvalidStrategy(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// Cap on the number of global assignments enumerated.
pub const MAX_ASSIGNMENTS: u128 = 1 << 20;

/// A semiring-valued distribution over the local sections of one facet.
/// Absent sections have weight zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalDistribution {
    pub facet: Facet,
    pub weights: BTreeMap<EventSet, Weight>,
}

impl LocalDistribution {
    pub fn weight(&self, s: &EventSet) -> Weight {
        self.weights.get(s).cloned().unwrap_or_else(Weight::zero)
    }

    /// Weights with zero entries dropped, for comparison.
    pub fn support_map(&self) -> BTreeMap<&EventSet, &Weight> {
        self.weights.iter().filter(|(_, w)| !w.is_zero()).collect()
    }
}

/// Marginal on `sub`: semiring sum over the eliminated coordinates.
pub fn marginalize(d: &LocalDistribution, sub: &Facet, semiring: Semiring) -> Result<LocalDistribution, EmpiricalError> {
    if !sub.is_subset(&d.facet) {
        return Err(EmpiricalError::NotSubset { sub: render_facet(sub), facet: render_facet(&d.facet) });
    }
    let mut weights: BTreeMap<EventSet, Weight> = BTreeMap::new();
    for (s, w) in &d.weights {
        let key: EventSet = s.iter().filter(|(x, _)| sub.contains(*x)).map(|(x, o)| (x.clone(), o.clone())).collect();
        let slot = weights.entry(key).or_insert_with(Weight::zero);
        *slot = semiring.add(slot, w);
    }
    Ok(LocalDistribution { facet: sub.clone(), weights })
}

/// Every total assignment of outcomes to the scenario's measurements, in
/// measurement order with the last measurement varying fastest.
pub fn global_assignments(scenario: &Scenario) -> Result<Vec<EventSet>, EmpiricalError> {
    let table: Vec<(&Measurement, Vec<_>)> =
        scenario.outcome_table().iter().map(|(x, os)| (x, os.iter().collect())).collect();
    let count = table.iter().map(|(_, os)| os.len() as u128).product::<u128>();
    if count > MAX_ASSIGNMENTS {
        return Err(EmpiricalError::TooLarge(count));
    }
    let radices: Vec<usize> = table.iter().map(|(_, os)| os.len()).collect();
    Ok((0..count as usize)
        .map(|k| {
            decode(k, &radices)
                .into_iter()
                .zip(&table)
                .map(|(d, (x, os))| ((*x).clone(), os[d].clone()))
                .collect()
        })
        .collect())
}

/// The events that actually occur when nature answers by `lambda`: the
/// least set closed under "a measurement whose bridge occurred is performed".
pub fn activated_events(scenario: &Scenario, lambda: &EventSet) -> EventSet {
    let mut events = EventSet::new();
    loop {
        let mut grew = false;
        for (t, x) in scenario.enabling() {
            if events.get(x).is_none() && t.is_subset(&events) {
                if let Some(o) = lambda.get(x) {
                    events = events.with(x.clone(), o.clone());
                    grew = true;
                }
            }
        }
        if !grew {
            return events;
        }
    }
}

/// The local section `lambda` induces on a facet.
pub fn local_section(scenario: &Scenario, lambda: &EventSet, facet: &Facet) -> EventSet {
    activated_events(scenario, lambda)
        .iter()
        .filter(|(x, _)| facet.contains(*x))
        .map(|(x, o)| (x.clone(), o.clone()))
        .collect()
}

/// The local sections over a facet: images of all global assignments.
pub fn section_space(scenario: &Scenario, facet: &Facet) -> Result<BTreeSet<EventSet>, EmpiricalError> {
    Ok(global_assignments(scenario)?.iter().map(|l| local_section(scenario, l, facet)).collect())
}

fn as_events(s: &PureStrategy) -> EventSet {
    s.choice.iter().map(|(x, o)| (x.clone(), o.clone())).collect()
}

fn as_strategy(e: &EventSet) -> PureStrategy {
    PureStrategy { player: PlayerId::nature(), choice: e.as_map().clone() }
}

/// One local distribution per facet of a scenario's cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalModel {
    scenario: Scenario,
    semiring: Semiring,
    locals: BTreeMap<Facet, LocalDistribution>,
}

impl EmpiricalModel {
    /// A model with every facet present and all weights zero.
    pub fn empty(scenario: Scenario, semiring: Semiring) -> Self {
        let locals = scenario
            .cover()
            .facets()
            .map(|c| (c.clone(), LocalDistribution { facet: c.clone(), weights: BTreeMap::new() }))
            .collect();
        EmpiricalModel { scenario, semiring, locals }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    pub fn locals(&self) -> &BTreeMap<Facet, LocalDistribution> {
        &self.locals
    }

    pub fn local(&self, facet: &Facet) -> Option<&LocalDistribution> {
        self.locals.get(facet)
    }

    /// Sets one weight. The section must belong to the facet's section space.
    pub fn set(&mut self, facet: &Facet, section: EventSet, w: Weight) -> Result<(), EmpiricalError> {
        let local = self.locals.get_mut(facet).ok_or_else(|| EmpiricalError::UnknownFacet(render_facet(facet)))?;
        let space = section_space(&self.scenario, facet)?;
        if !space.contains(&section) {
            return Err(EmpiricalError::InvalidSection { facet: render_facet(facet), section: section.to_string() });
        }
        if w.is_zero() {
            local.weights.remove(&section);
        } else {
            local.weights.insert(section, w);
        }
        Ok(())
    }

    /// Same scenario, another semiring reading of the same numbers.
    pub fn with_semiring(&self, semiring: Semiring) -> Self {
        EmpiricalModel { semiring, ..self.clone() }
    }

    /// The possibilistic collapse: 1 on every section of non-zero weight.
    pub fn support(&self) -> Self {
        let locals = self
            .locals
            .iter()
            .map(|(c, d)| {
                let weights = d.support_map().into_keys().map(|s| (s.clone(), Weight::one())).collect();
                (c.clone(), LocalDistribution { facet: c.clone(), weights })
            })
            .collect();
        EmpiricalModel { scenario: self.scenario.clone(), semiring: Semiring::Possibility, locals }
    }

    /// Checks facets, section spaces and normalization.
    pub fn validate(&self) -> Result<(), EmpiricalError> {
        for c in self.scenario.cover().facets() {
            let d = self.locals.get(c).ok_or_else(|| EmpiricalError::MissingLocal(render_facet(c)))?;
            let space = section_space(&self.scenario, c)?;
            for s in d.weights.keys() {
                if !space.contains(s) {
                    return Err(EmpiricalError::InvalidSection { facet: render_facet(c), section: s.to_string() });
                }
            }
            self.semiring
                .check_normalized(d.weights.values())
                .map_err(|e| EmpiricalError::NotNormalized(format!("facet {}: {e}", render_facet(c))))?;
        }
        if let Some(c) = self.locals.keys().find(|c| !self.scenario.cover().contains_facet(c)) {
            return Err(EmpiricalError::UnknownFacet(render_facet(c)));
        }
        Ok(())
    }
}

/// Two facets whose marginals on their overlap differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityWitness {
    pub left: Facet,
    pub right: Facet,
    pub overlap: Facet,
    pub left_marginal: LocalDistribution,
    pub right_marginal: LocalDistribution,
}

impl fmt::Display for CompatibilityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "marginals of {} and {} differ on {}",
            render_facet(&self.left),
            render_facet(&self.right),
            render_facet(&self.overlap)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub compatible: bool,
    pub witness: Option<CompatibilityWitness>,
}

/// Pairwise agreement of marginals on facet intersections.
pub fn check_compatibility(m: &EmpiricalModel) -> CompatibilityReport {
    let facets: Vec<&Facet> = m.locals.keys().collect();
    for (i, a) in facets.iter().enumerate() {
        for b in &facets[i + 1..] {
            let overlap: Facet = a.intersection(b).cloned().collect();
            let la = marginalize(&m.locals[*a], &overlap, m.semiring).expect("subset");
            let lb = marginalize(&m.locals[*b], &overlap, m.semiring).expect("subset");
            if la.support_map() != lb.support_map() {
                return CompatibilityReport {
                    compatible: false,
                    witness: Some(CompatibilityWitness {
                        left: (*a).clone(),
                        right: (*b).clone(),
                        overlap,
                        left_marginal: la,
                        right_marginal: lb,
                    }),
                };
            }
        }
    }
    CompatibilityReport { compatible: true, witness: None }
}

fn check_mix(mix: &[(PureStrategy, Weight)], semiring: Semiring) -> Result<(), EmpiricalError> {
    semiring.check_normalized(mix.iter().map(|(_, w)| w)).map_err(EmpiricalError::NotNormalized)
}

/// Mixes deterministic models: each facet receives Σ_λ w(λ) δ[λ|facet].
pub fn model_from_assignment_mix(
    scenario: &Scenario,
    mix: &[(PureStrategy, Weight)],
    semiring: Semiring,
) -> Result<EmpiricalModel, EmpiricalError> {
    check_mix(mix, semiring)?;
    let xs = scenario.measurement_set();
    let mut m = EmpiricalModel::empty(scenario.clone(), semiring);
    for (s, w) in mix {
        if s.domain() != xs {
            return Err(EmpiricalError::InvalidStrategy(s.to_string()));
        }
        let lambda = as_events(s);
        let act = activated_events(scenario, &lambda);
        for (c, d) in m.locals.iter_mut() {
            let sec: EventSet = act.iter().filter(|(x, _)| c.contains(*x)).map(|(x, o)| (x.clone(), o.clone())).collect();
            let slot = d.weights.entry(sec).or_insert_with(Weight::zero);
            *slot = semiring.add(slot, w);
        }
    }
    for d in m.locals.values_mut() {
        d.weights.retain(|_, w| !w.is_zero());
    }
    Ok(m)
}

/// The model a mixed strategy of nature induces on a game's natural cover.
/// Local distributions are conditioned on the context being chosen, so
/// observer mixes do not enter; see [`history_distribution`] for those.
pub fn model_from_strategy_mix(
    game: &SpacetimeGame,
    nature_mix: &[(PureStrategy, Weight)],
    semiring: Semiring,
) -> Result<EmpiricalModel, EmpiricalError> {
    let scenario = scenario_sketch(game, &PlayerId::nature())?;
    model_from_assignment_mix(&scenario, nature_mix, semiring)
}

/// The distribution over complete histories when every player mixes
/// independently, by playing out each profile.
pub fn history_distribution(
    game: &SpacetimeGame,
    mixes: &[Vec<(PureStrategy, Weight)>],
    semiring: Semiring,
) -> Result<BTreeMap<History, Weight>, EmpiricalError> {
    for mix in mixes {
        check_mix(mix, semiring)?;
    }
    let radices: Vec<usize> = mixes.iter().map(Vec::len).collect();
    let total: usize = radices.iter().product();
    let mut out: BTreeMap<History, Weight> = BTreeMap::new();
    for k in 0..total {
        let digits = decode(k, &radices);
        let mut w = Weight::one();
        let mut profile = Vec::with_capacity(mixes.len());
        for (mix, d) in mixes.iter().zip(digits) {
            w = semiring.mul(&w, &mix[d].1);
            profile.push(mix[d].0.clone());
        }
        let h = play(game, &profile).map_err(|e| EmpiricalError::InvalidStrategy(e.to_string()))?;
        let slot = out.entry(h).or_insert_with(Weight::zero);
        *slot = semiring.add(slot, &w);
    }
    out.retain(|_, w| !w.is_zero());
    Ok(out)
}

/// A weighting of nature's pure strategies; zero weights are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalSection {
    pub semiring: Semiring,
    pub weights: BTreeMap<PureStrategy, Weight>,
}

/// One equation of the feasibility system: a facet and one of its sections.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Row {
    Normalization,
    Local { facet: Facet, section: EventSet },
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Row::Normalization => f.write_str("normalization"),
            Row::Local { facet, section } => write!(f, "{} {}", render_facet(facet), section),
        }
    }
}

/// Why no global section exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Row multipliers z with zᵀA ≥ 0 on every strategy column and zᵀb < 0.
    Farkas(BTreeMap<Row, Weight>),
    /// Row multipliers y with yᵀA = 0 and yᵀb = 1.
    Inconsistent(BTreeMap<Row, Weight>),
    /// A possible local section that no strategy consistent with the
    /// model's support explains.
    Unexplained(Row),
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let render = |m: &BTreeMap<Row, Weight>| {
            m.iter().filter(|(_, w)| !w.is_zero()).map(|(r, w)| format!("  {r}: {w}")).collect::<Vec<_>>().join("\n")
        };
        match self {
            Certificate::Farkas(z) => write!(f, "farkas\n{}", render(z)),
            Certificate::Inconsistent(y) => write!(f, "inconsistent\n{}", render(y)),
            Certificate::Unexplained(r) => write!(f, "unexplained {r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionResult {
    Found(GlobalSection),
    Infeasible(Certificate),
}

impl SectionResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SectionResult::Found(_))
    }
}

/// The feasibility system: rows, strategy columns and the 0/1 incidence
/// matrix, with the right-hand side read off the model.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub rows: Vec<Row>,
    pub columns: Vec<EventSet>,
    pub matrix: Vec<Vec<Weight>>,
    pub rhs: Vec<Weight>,
}

impl ConstraintSystem {
    pub fn build(m: &EmpiricalModel) -> Result<Self, EmpiricalError> {
        Self::build_with(m, Exec::default())
    }

    pub fn build_with(m: &EmpiricalModel, exec: Exec) -> Result<Self, EmpiricalError> {
        let sc = &m.scenario;
        let columns = global_assignments(sc)?;
        let activated: Vec<EventSet> = exec.map_slice(&columns, |l| activated_events(sc, l));
        let mut rows = vec![Row::Normalization];
        let mut rhs = vec![Weight::one()];
        for c in sc.cover().facets() {
            for s in section_space(sc, c)? {
                rhs.push(m.locals.get(c).map_or_else(Weight::zero, |d| d.weight(&s)));
                rows.push(Row::Local { facet: c.clone(), section: s });
            }
        }
        let matrix = exec.map_slice(&rows, |r| match r {
            Row::Normalization => vec![Weight::one(); activated.len()],
            Row::Local { facet, section } => activated
                .iter()
                .map(|act| {
                    let sec: EventSet =
                        act.iter().filter(|(x, _)| facet.contains(*x)).map(|(x, o)| (x.clone(), o.clone())).collect();
                    if &sec == section {
                        Weight::one()
                    } else {
                        Weight::zero()
                    }
                })
                .collect(),
        });
        Ok(ConstraintSystem { rows, columns, matrix, rhs })
    }

    /// Groups columns with identical incidence; representatives are the
    /// first member of each group.
    pub fn merged(&self) -> (Vec<Vec<Weight>>, Vec<Vec<usize>>) {
        let mut groups: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
        for j in 0..self.columns.len() {
            let sig: Vec<bool> = self.matrix.iter().map(|row| !row[j].is_zero()).collect();
            groups.entry(sig).or_default().push(j);
        }
        let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
        groups.sort();
        let matrix = self.matrix.iter().map(|row| groups.iter().map(|g| row[g[0]].clone()).collect()).collect();
        (matrix, groups)
    }

    fn certificate_map(&self, v: &[Weight]) -> BTreeMap<Row, Weight> {
        self.rows.iter().cloned().zip(v.iter().cloned()).filter(|(_, w)| !w.is_zero()).collect()
    }
}

/// Decides whether the model has a global section, exactly.
pub fn find_global_section(m: &EmpiricalModel) -> Result<SectionResult, EmpiricalError> {
    m.validate()?;
    let compat = check_compatibility(m);
    if let Some(w) = compat.witness {
        return Err(EmpiricalError::IncompatibleModel(w.to_string()));
    }
    let sys = ConstraintSystem::build(m)?;
    if m.semiring == Semiring::Possibility {
        return Ok(possibilistic_section(&sys));
    }
    let (matrix, groups) = sys.merged();
    let solved = match m.semiring {
        Semiring::Probability => match lp::nonnegative_feasibility(&matrix, &sys.rhs) {
            lp::Feasibility::Feasible(w) => Ok(w),
            lp::Feasibility::Infeasible(z) => Err(Certificate::Farkas(sys.certificate_map(&z))),
        },
        _ => lp::free_solution(&matrix, &sys.rhs).map_err(|y| Certificate::Inconsistent(sys.certificate_map(&y))),
    };
    Ok(match solved {
        Ok(w) => {
            let weights = groups
                .iter()
                .zip(w)
                .filter(|(_, w)| !w.is_zero())
                .map(|(g, w)| (as_strategy(&sys.columns[g[0]]), w))
                .collect();
            SectionResult::Found(GlobalSection { semiring: m.semiring, weights })
        }
        Err(c) => SectionResult::Infeasible(c),
    })
}

/// Boolean sections: the union of all strategies whose every local section
/// is possible is the largest candidate, and a section exists iff it explains
/// every possible local section.
fn possibilistic_section(sys: &ConstraintSystem) -> SectionResult {
    let candidates: Vec<usize> = (0..sys.columns.len())
        .filter(|&j| (0..sys.rows.len()).all(|i| sys.matrix[i][j].is_zero() || !sys.rhs[i].is_zero()))
        .collect();
    for (i, row) in sys.rows.iter().enumerate() {
        if matches!(row, Row::Local { .. }) && !sys.rhs[i].is_zero() && candidates.iter().all(|&j| sys.matrix[i][j].is_zero()) {
            return SectionResult::Infeasible(Certificate::Unexplained(row.clone()));
        }
    }
    if candidates.is_empty() {
        return SectionResult::Infeasible(Certificate::Unexplained(Row::Normalization));
    }
    let weights = candidates.into_iter().map(|j| (as_strategy(&sys.columns[j]), Weight::one())).collect();
    SectionResult::Found(GlobalSection { semiring: Semiring::Possibility, weights })
}

/// Checks a certificate against the model from scratch, over all strategy
/// columns (unmerged).
pub fn verify_certificate(m: &EmpiricalModel, cert: &Certificate) -> Result<bool, EmpiricalError> {
    let sys = ConstraintSystem::build_with(m, Exec::Sequential)?;
    let vec_of = |map: &BTreeMap<Row, Weight>| -> Vec<Weight> {
        sys.rows.iter().map(|r| map.get(r).cloned().unwrap_or_else(Weight::zero)).collect()
    };
    Ok(match cert {
        Certificate::Farkas(z) => lp::verify_farkas(&sys.matrix, &sys.rhs, &vec_of(z)),
        Certificate::Inconsistent(y) => {
            let y = vec_of(y);
            let yb: Weight = y.iter().zip(&sys.rhs).map(|(a, b)| a * b).sum();
            !yb.is_zero()
                && (0..sys.columns.len()).all(|j| y.iter().zip(&sys.matrix).map(|(a, row)| a * &row[j]).sum::<Weight>().is_zero())
        }
        Certificate::Unexplained(row) => {
            let Some(i) = sys.rows.iter().position(|r| r == row) else { return Ok(false) };
            let possible = |j: usize| (0..sys.rows.len()).all(|k| sys.matrix[k][j].is_zero() || !sys.rhs[k].is_zero());
            match row {
                Row::Normalization => (0..sys.columns.len()).all(|j| !possible(j)),
                _ => !sys.rhs[i].is_zero() && (0..sys.columns.len()).all(|j| sys.matrix[i][j].is_zero() || !possible(j)),
            }
        }
    })
}

/// The strategy list of a section with its weights.
pub fn deterministic_hvm_from_section(s: &GlobalSection) -> Vec<(PureStrategy, Weight)> {
    s.weights.iter().filter(|(_, w)| !w.is_zero()).map(|(p, w)| (p.clone(), w.clone())).collect()
}

/// Per-row differences between the re-mixed section and the model; empty
/// when the section reproduces the model exactly.
pub fn section_residual(m: &EmpiricalModel, s: &GlobalSection) -> Result<Vec<(Row, Weight)>, EmpiricalError> {
    let hvm = deterministic_hvm_from_section(s);
    let remixed = remix(m.scenario(), &hvm, m.semiring)?;
    let mut out = Vec::new();
    for (c, d) in &m.locals {
        let r = &remixed.locals[c];
        let keys: BTreeSet<&EventSet> = d.weights.keys().chain(r.weights.keys()).collect();
        for k in keys {
            let diff = r.weight(k) - d.weight(k);
            if !diff.is_zero() {
                out.push((Row::Local { facet: c.clone(), section: k.clone() }, diff));
            }
        }
    }
    Ok(out)
}

/// Re-mixes a hidden-variable model into an empirical model. Normalization
/// is not re-checked so that residuals of bad sections can be reported.
pub fn remix(scenario: &Scenario, hvm: &[(PureStrategy, Weight)], semiring: Semiring) -> Result<EmpiricalModel, EmpiricalError> {
    let mut m = EmpiricalModel::empty(scenario.clone(), semiring);
    for (s, w) in hvm {
        let act = activated_events(scenario, &as_events(s));
        for (c, d) in m.locals.iter_mut() {
            let sec: EventSet = act.iter().filter(|(x, _)| c.contains(*x)).map(|(x, o)| (x.clone(), o.clone())).collect();
            let slot = d.weights.entry(sec).or_insert_with(Weight::zero);
            *slot = semiring.add(slot, w);
        }
    }
    for d in m.locals.values_mut() {
        d.weights.retain(|_, w| !w.is_zero());
    }
    Ok(m)
}

/// Cross-check of the probabilistic decision by trying every basis of the
/// merged system. `None` when there are more than `limit` merged columns.
pub fn feasible_by_vertex_enumeration(m: &EmpiricalModel, limit: usize) -> Result<Option<bool>, EmpiricalError> {
    let sys = ConstraintSystem::build(m)?;
    let (matrix, _) = sys.merged();
    Ok(lp::vertex_enumeration(&matrix, &sys.rhs, limit).map(|r| r.is_some()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn r(s: &str) -> Weight {
        s.parse().unwrap()
    }

    #[test]
    fn pr_box_marginal_is_uniform() {
        let e = corpus::cyclic4();
        let pr = &e.models[1].1;
        let xw: Facet = crate::cover::facet(["W", "X"]);
        let d = marginalize(pr.local(&xw).unwrap(), &crate::cover::facet(["X"]), Semiring::Probability).unwrap();
        assert_eq!(d.weight(&EventSet::new().with("X", "0")), r("1/2"));
        assert_eq!(d.weight(&EventSet::new().with("X", "1")), r("1/2"));
        let unit = marginalize(pr.local(&xw).unwrap(), &Facet::new(), Semiring::Probability).unwrap();
        assert_eq!(unit.weight(&EventSet::new()), r("1"));
        assert!(marginalize(pr.local(&xw).unwrap(), &crate::cover::facet(["Y"]), Semiring::Probability).is_err());
    }

    #[test]
    fn adaptive_sections_are_partial() {
        let sc = corpus::adaptive().scenario;
        let space = section_space(&sc, &crate::cover::facet(["W", "Y"])).unwrap();
        let shown: Vec<String> = space.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown.len(), 3, "{shown:?}");
        assert!(space.contains(&EventSet::new().with("Y", "1")));
    }

    #[test]
    fn semiring_normalization() {
        assert!(Semiring::Probability.check_normalized(&[r("1/2"), r("1/2")]).is_ok());
        assert!(Semiring::Probability.check_normalized(&[r("3/2"), r("-1/2")]).is_err());
        assert!(Semiring::Signed.check_normalized(&[r("3/2"), r("-1/2")]).is_ok());
        assert!(Semiring::Possibility.check_normalized(&[r("0"), r("0")]).is_err());
        assert!(Semiring::Possibility.check_normalized(&[r("2")]).is_err());
    }
}
