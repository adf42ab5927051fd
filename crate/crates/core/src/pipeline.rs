//! Runs the checks requested by a [`RunConfig`] in dependency order and
//! assembles a deterministic [`VerificationReport`].

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::biorder::{BiorderedSet, Route};
use crate::complement::{
    check_oplus, check_ring_sum, verify_duals, verify_e1, verify_e2, verify_e3, ComplementMap,
};
use crate::error::{Error, Result};
use crate::lattice::{
    check_ideal_order, check_orthogonal_families, check_oplus_classes, check_subspace_correspondence,
    dual_isomorphism_check, homogeneous_basis_check, QuotientLattice,
};
use crate::report::{CheckRecord, GroupReport, VerificationReport};
use crate::ring::{
    build_matrix_ring, build_modular_ring, matrix_unit_idempotents, Budget, RingTable, TABLE_THRESHOLD,
};
use crate::semigroup::{sample_with, BaerMode, FiniteSemigroup, Side};
use crate::sequences::{verify_idpersp, DistanceTable, ESequenceGraph};

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Random orthogonal families checked on top of the matrix units.
pub const RANDOM_FAMILIES: usize = 50;
/// Seeded idempotents used for annihilator generators above the table threshold.
pub const RANDOM_IDEMPOTENTS: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RingSpec {
    Gfmatrix { n: usize, q: u32 },
    Zmod { m: u32 },
    Table { file: PathBuf },
}

impl RingSpec {
    pub fn build(&self, budget: &Budget) -> Result<RingTable> {
        match self {
            RingSpec::Gfmatrix { n, q } => build_matrix_ring(*n, *q, budget),
            RingSpec::Zmod { m } => build_modular_ring(*m, budget),
            RingSpec::Table { file } => {
                let ring = RingTable::from_csv_path(file)?;
                if ring.order() as u64 > budget.max_order {
                    return Err(Error::Budget { order: ring.order() as u128, limit: budget.max_order });
                }
                Ok(ring)
            }
        }
    }
}

/// Groups of checks, in the order they run and appear in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckGroup {
    Axioms,
    Baer,
    Lattice,
    Distances,
    Idpersp,
    Basis,
}

impl CheckGroup {
    pub const ALL: [CheckGroup; 6] = [
        CheckGroup::Axioms,
        CheckGroup::Baer,
        CheckGroup::Lattice,
        CheckGroup::Distances,
        CheckGroup::Idpersp,
        CheckGroup::Basis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckGroup::Axioms => "axioms",
            CheckGroup::Baer => "baer",
            CheckGroup::Lattice => "lattice",
            CheckGroup::Distances => "distances",
            CheckGroup::Idpersp => "idpersp",
            CheckGroup::Basis => "basis",
        }
    }

    /// Parses a comma-separated list; `all` selects every group.
    pub fn parse_list(text: &str) -> Result<Vec<CheckGroup>> {
        let mut out = Vec::new();
        for word in text.split(',').map(str::trim).filter(|w| !w.is_empty()) {
            if word == "all" {
                out.extend(Self::ALL);
                continue;
            }
            let group = Self::ALL
                .into_iter()
                .find(|g| g.name() == word)
                .ok_or_else(|| Error::Config(format!("unknown check group `{word}`")))?;
            out.push(group);
        }
        if out.is_empty() {
            return Err(Error::Config("no checks requested".into()));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// The complement-map axioms that `--axioms` can select.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    E1,
    E2,
    E2dual,
    E3,
}

impl Axiom {
    pub const ALL: [Axiom; 4] = [Axiom::E1, Axiom::E2, Axiom::E2dual, Axiom::E3];

    pub fn parse_list(text: &str) -> Result<Vec<Axiom>> {
        let mut out = Vec::new();
        for word in text.split(',').map(str::trim).filter(|w| !w.is_empty()) {
            out.push(match word.to_ascii_lowercase().as_str() {
                "e1" => Axiom::E1,
                "e2" => Axiom::E2,
                "e2dual" => Axiom::E2dual,
                "e3" => Axiom::E3,
                _ => return Err(Error::Config(format!("unknown axiom `{word}`"))),
            });
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BaerChoice {
    /// Full up to the table threshold, sampled above.
    Auto,
    Full,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub ring: RingSpec,
    pub checks: Vec<CheckGroup>,
    pub axioms: Vec<Axiom>,
    pub baer: BaerChoice,
    pub samples: usize,
    pub seed: u64,
    /// Basis members as element indices; matrix units when absent.
    pub basis: Option<Vec<u32>>,
    pub max_order: u64,
    /// Record wall-clock times per check. Off by default so that reports
    /// are byte-identical across runs.
    pub timings: bool,
}

impl RunConfig {
    pub fn new(ring: RingSpec) -> Self {
        Self {
            ring,
            checks: CheckGroup::ALL.to_vec(),
            axioms: Axiom::ALL.to_vec(),
            baer: BaerChoice::Auto,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            basis: None,
            max_order: Budget::default().max_order,
            timings: false,
        }
    }

    pub fn budget(&self) -> Budget {
        Budget { max_order: self.max_order }
    }
}

/// Exit status for an error: 3 for an exceeded budget, 2 for everything
/// else (bad configuration or input).
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Budget { .. } => 3,
        _ => 2,
    }
}

/// Exit status for a finished report.
pub fn report_exit_code(report: &VerificationReport) -> i32 {
    if report.summary.is_failure() {
        1
    } else {
        0
    }
}

/// Everything built from the ring once and shared by the checks.
pub struct Workbench {
    pub ring: RingTable,
    pub semigroup: FiniteSemigroup,
    pub biorder: BiorderedSet,
    pub complement: Option<ComplementMap>,
    regular: Option<bool>,
    left: Option<QuotientLattice>,
    right: Option<QuotientLattice>,
    graph: Option<ESequenceGraph>,
    distances: Option<DistanceTable>,
}

impl Workbench {
    pub fn new(ring: RingTable) -> Result<Self> {
        let semigroup = FiniteSemigroup::from_ring(&ring);
        let biorder = BiorderedSet::build(&semigroup)?;
        let complement = if ring.has_addition() && ring.one_index().is_some() {
            Some(ComplementMap::from_ring(&ring, &biorder)?)
        } else {
            None
        };
        Ok(Self {
            ring,
            semigroup,
            biorder,
            complement,
            regular: None,
            left: None,
            right: None,
            graph: None,
            distances: None,
        })
    }

    pub fn from_config(config: &RunConfig) -> Result<Self> {
        Self::new(config.ring.build(&config.budget())?)
    }

    pub fn positions(&self, elements: &[u32]) -> Result<Vec<usize>> {
        elements
            .iter()
            .map(|&x| {
                if x >= self.ring.order() {
                    return Err(Error::Config(format!("basis element {x} outside 0..{}", self.ring.order())));
                }
                self.biorder
                    .position_of(x)
                    .ok_or_else(|| Error::Config(format!("basis element {x} is not idempotent")))
            })
            .collect()
    }

    pub fn lattice(&mut self, side: Side) -> &QuotientLattice {
        let slot = match side {
            Side::Left => &mut self.left,
            Side::Right => &mut self.right,
        };
        slot.get_or_insert_with(|| QuotientLattice::from_biorder(&self.biorder, side))
    }

    pub fn graph(&mut self) -> &ESequenceGraph {
        self.graph.get_or_insert_with(|| ESequenceGraph::new(&self.biorder))
    }

    pub fn distances(&mut self) -> &DistanceTable {
        if self.distances.is_none() {
            let table = DistanceTable::compute(self.graph());
            self.distances = Some(table);
        }
        self.distances.as_ref().expect("just computed")
    }

    fn regular(&mut self) -> bool {
        *self
            .regular
            .get_or_insert_with(|| self.semigroup.check_regular().passed())
    }

    fn matrix_units(&self) -> Option<Vec<usize>> {
        let units = matrix_unit_idempotents(&self.ring).ok()?;
        self.positions(&units).ok()
    }

    pub fn subject(&self, config: &RunConfig) -> serde_json::Value {
        json!({
            "ring": self.ring.describe(),
            "idempotents": self.biorder.size(),
            "checks": config.checks,
            "axioms": config.axioms,
            "baer": config.baer,
            "samples": config.samples,
            "seed": config.seed,
            "basis": config.basis,
        })
    }
}

struct Recorder {
    timings: bool,
    records: Vec<CheckRecord>,
}

impl Recorder {
    fn run(&mut self, check: impl FnOnce() -> CheckRecord) {
        let start = Instant::now();
        let mut rec = check();
        if self.timings {
            rec.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        }
        self.records.push(rec);
    }

    /// Runs a check on one side of the quotient and tags it with the side.
    fn run_sided(&mut self, side: Side, check: impl FnOnce() -> CheckRecord) {
        self.run(|| {
            let mut rec = check();
            rec.check = format!(
                "{}-{}",
                rec.check,
                match side {
                    Side::Left => "left",
                    Side::Right => "right",
                }
            );
            rec
        });
    }
}

fn no_complement(check: &str) -> CheckRecord {
    CheckRecord::new(check, "requires the complement map e ↦ 1 - e")
        .skipped("ring has no additive table or no identity")
}

pub fn run_verify(config: &RunConfig) -> Result<VerificationReport> {
    let mut wb = Workbench::from_config(config)?;
    run_on(&mut wb, config)
}

pub fn run_on(wb: &mut Workbench, config: &RunConfig) -> Result<VerificationReport> {
    // resolve the basis before running anything, so a bad one is a config error
    let basis = if config.checks.contains(&CheckGroup::Basis) {
        Some(match &config.basis {
            Some(list) => wb.positions(list)?,
            None => wb.matrix_units().ok_or_else(|| {
                Error::Config("--basis is required for rings without matrix units".into())
            })?,
        })
    } else {
        None
    };
    let mut groups = Vec::new();
    for &group in &config.checks {
        let mut rec = Recorder { timings: config.timings, records: Vec::new() };
        match group {
            CheckGroup::Axioms => axioms(wb, config, &mut rec),
            CheckGroup::Baer => baer(wb, config, &mut rec),
            CheckGroup::Lattice => lattice(wb, config, &mut rec),
            CheckGroup::Distances => distances(wb, &mut rec),
            CheckGroup::Idpersp => idpersp(wb, &mut rec),
            CheckGroup::Basis => {
                let family = basis.as_deref().expect("resolved above");
                let left = wb.lattice(Side::Left).clone();
                rec.run(|| homogeneous_basis_check(&left, &wb.biorder, family).to_record());
            }
        }
        groups.push(GroupReport::new(group.name(), rec.records));
    }
    Ok(VerificationReport::new(wb.subject(config), groups))
}

fn axioms(wb: &mut Workbench, config: &RunConfig, rec: &mut Recorder) {
    rec.run(|| wb.ring.check_axioms(config.seed, config.samples));
    let mut regular = false;
    rec.run(|| {
        let r = wb.semigroup.check_regular();
        regular = r.passed();
        r
    });
    wb.regular = Some(regular);
    let b = &wb.biorder;
    rec.run(|| b.check_quasi_orders());
    rec.run(|| b.check_regularity());
    rec.run(|| b.check_route_agreement());
    rec.run(|| b.check_zero_products());
    let (e1, zero) = verify_e1(b);
    if config.axioms.contains(&Axiom::E1) {
        rec.run(|| e1);
    }
    let Some(c) = wb.complement.as_ref() else {
        for (axiom, id) in [(Axiom::E2, "E2"), (Axiom::E2dual, "E2-dual"), (Axiom::E3, "E3")] {
            if config.axioms.contains(&axiom) {
                rec.run(|| no_complement(id));
            }
        }
        return;
    };
    let zero_missing = |id: &str| {
        let mut r = CheckRecord::new(id, "requires a least idempotent 0");
        r.violation(json!({ "failure": "no least idempotent" }));
        r
    };
    if config.axioms.contains(&Axiom::E2) {
        match zero {
            Some(z) => rec.run(|| verify_e2(b, c, z)),
            None => rec.run(|| zero_missing("E2")),
        }
    }
    if config.axioms.contains(&Axiom::E2dual) {
        match zero {
            Some(z) => rec.run(|| verify_duals(b, c, z).0),
            None => rec.run(|| zero_missing("E2-dual")),
        }
    }
    if config.axioms.contains(&Axiom::E3) {
        rec.run(|| verify_e3(b, c));
        rec.run(|| check_oplus(b, c, Some(&wb.ring)));
        rec.run(|| check_ring_sum(b, c, &wb.ring));
    }
}

fn baer(wb: &mut Workbench, config: &RunConfig, rec: &mut Recorder) {
    let s = &wb.semigroup;
    let full = match config.baer {
        BaerChoice::Full => true,
        BaerChoice::Sampled => false,
        BaerChoice::Auto => s.order() <= TABLE_THRESHOLD,
    };
    let mode = if full {
        BaerMode::Full
    } else {
        BaerMode::Sampled { samples: config.samples, seed: config.seed }
    };
    rec.run(|| s.baer_check(mode));
    let scan: Vec<u32> = if full {
        s.elements().collect()
    } else {
        sample_with(s.order(), s.idempotents(), config.samples, config.seed)
    };
    rec.run(|| s.check_annihilator_reduction(&scan));
    match wb.complement.as_ref() {
        Some(c) => {
            let b = &wb.biorder;
            let positions: Vec<usize> = if s.order() <= TABLE_THRESHOLD {
                (0..b.size()).collect()
            } else {
                let mut units: Vec<u32> = matrix_unit_idempotents(&wb.ring).unwrap_or_default();
                units.extend(sample_with(b.size() as u32, &[], RANDOM_IDEMPOTENTS, config.seed).iter().map(|&p| b.element(p as usize)));
                units.sort_unstable();
                units.dedup();
                units.iter().filter_map(|&x| b.position_of(x)).collect()
            };
            let pairs: Vec<(u32, u32)> = positions.iter().map(|&p| (b.element(p), b.element(c.get(p)))).collect();
            rec.run(|| s.check_annihilator_generators(&pairs));
        }
        None => rec.run(|| no_complement("annihilator-generators")),
    }
}

fn lattice(wb: &mut Workbench, config: &RunConfig, rec: &mut Recorder) {
    let regular = wb.regular();
    let left = wb.lattice(Side::Left).clone();
    let right = wb.lattice(Side::Right).clone();
    let b = &wb.biorder;
    let c = wb.complement.as_ref();
    for (side, q) in [(Side::Left, &left), (Side::Right, &right)] {
        rec.run_sided(side, || q.check_lattice());
        rec.run_sided(side, || q.check_modular());
        rec.run_sided(side, || q.check_complemented(c.map(|c| (b, c))));
        rec.run_sided(side, || {
            if regular {
                check_ideal_order(q, b)
            } else {
                CheckRecord::new("principal-ideal-order", "the quotient order matches inclusion of principal ideals")
                    .skipped("semigroup is not regular; no correspondence is claimed")
            }
        });
        rec.run_sided(side, || check_subspace_correspondence(q, b, &wb.ring));
    }
    let Some(c) = c else {
        for id in ["dual-isomorphism", "oplus-classes", "orthogonal-families"] {
            rec.run(|| no_complement(id));
        }
        return;
    };
    rec.run(|| dual_isomorphism_check(&left, &right, b, c));
    rec.run(|| check_oplus_classes(&left, b, c));
    let families: Vec<Vec<usize>> = wb.matrix_units().into_iter().collect();
    rec.run(|| check_orthogonal_families(&left, b, c, &families, RANDOM_FAMILIES, config.seed));
}

fn distances(wb: &mut Workbench, rec: &mut Recorder) {
    wb.distances();
    let (b, g, t) = (&wb.biorder, wb.graph.as_ref().expect("built"), wb.distances.as_ref().expect("built"));
    rec.run(|| g.check_equivalences(b));
    rec.run(|| t.check_properties(b));
    rec.run(|| t.check_alternation(g, b));
}

fn idpersp(wb: &mut Workbench, rec: &mut Recorder) {
    wb.distances();
    let left = wb.lattice(Side::Left).clone();
    let t = wb.distances.as_ref().expect("built");
    rec.run(|| verify_idpersp(&wb.biorder, &left, t));
}

/// What `export` can write.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportTarget {
    Biorder,
    Lattice(Side),
    Graph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Dot,
}

pub fn export(wb: &mut Workbench, target: ExportTarget, format: ExportFormat) -> Result<String> {
    Ok(match (target, format) {
        (ExportTarget::Biorder, ExportFormat::Json) => pretty(&biorder_json(&wb.biorder))?,
        (ExportTarget::Biorder, ExportFormat::Dot) => biorder_dot(&wb.biorder),
        (ExportTarget::Lattice(side), ExportFormat::Json) => pretty(&wb.lattice(side).to_json())?,
        (ExportTarget::Lattice(side), ExportFormat::Dot) => wb.lattice(side).to_dot(),
        (ExportTarget::Graph, ExportFormat::Json) => {
            wb.distances();
            pretty(&wb.distances.as_ref().expect("built").to_json(&wb.biorder))?
        }
        (ExportTarget::Graph, ExportFormat::Dot) => {
            wb.graph();
            graph_dot(&wb.biorder, wb.graph.as_ref().expect("built"))
        }
    })
}

fn pretty(value: &serde_json::Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn adjacency(b: &BiorderedSet, rel: &crate::bits::BitRelation) -> Vec<(u32, Vec<u32>)> {
    (0..b.size())
        .map(|p| (b.element(p), rel.row(p).iter().map(|q| b.element(q)).collect()))
        .collect()
}

fn biorder_json(b: &BiorderedSet) -> serde_json::Value {
    let k = b.size();
    let sandwich: Vec<_> = (0..k)
        .flat_map(|e| (0..k).map(move |f| (e, f)))
        .map(|(e, f)| {
            let s = b.sandwich_set(e, f, Route::Abstract);
            json!([b.element(e), b.element(f), b.to_elements(&s.members)])
        })
        .collect();
    json!({
        "idempotents": b.elements(),
        "omega_l": adjacency(b, b.omega_l()),
        "omega_r": adjacency(b, b.omega_r()),
        "sandwich_sets": sandwich,
    })
}

/// Hasse diagram of ω.
fn biorder_dot(b: &BiorderedSet) -> String {
    let mut out = String::from("digraph biorder {\n  rankdir=BT;\n");
    for &e in b.elements() {
        out.push_str(&format!("  e{e} [label=\"{e}\"];\n"));
    }
    for (x, y) in b.omega().transitive_reduction().pairs() {
        out.push_str(&format!("  e{} -> e{};\n", b.element(x), b.element(y)));
    }
    out.push_str("}\n");
    out
}

/// L and R edges between distinct idempotents, each drawn once.
fn graph_dot(b: &BiorderedSet, g: &ESequenceGraph) -> String {
    let mut out = String::from("graph esequences {\n");
    for &e in b.elements() {
        out.push_str(&format!("  e{e} [label=\"{e}\"];\n"));
    }
    for (label, rel) in [("l", g.l()), ("r", g.r())] {
        for (x, y) in rel.pairs().filter(|&(x, y)| x < y) {
            out.push_str(&format!("  e{} -- e{} [label=\"{label}\"];\n", b.element(x), b.element(y)));
        }
    }
    out.push_str("}\n");
    out
}

/// Modularity and complements of a raw order, outside any semigroup.
pub fn run_order_check(lattice: &QuotientLattice) -> VerificationReport {
    let records = vec![lattice.check_lattice(), lattice.check_modular(), lattice.check_complemented(None)];
    VerificationReport::new(
        json!({ "order": { "elements": lattice.size(), "pairs": lattice.order().pair_count() } }),
        vec![GroupReport::new("lattice", records)],
    )
}

/// One row of the `bench` timing table.
#[derive(Clone, Debug, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub millis: u128,
    pub verdict: String,
}

/// Times each stage of a full run on the given configuration.
pub fn bench(config: &RunConfig) -> Result<Vec<StageTiming>> {
    let mut rows = Vec::new();
    let start = Instant::now();
    let ring = config.ring.build(&config.budget())?;
    rows.push(StageTiming { stage: "ring".into(), millis: start.elapsed().as_millis(), verdict: "-".into() });
    let start = Instant::now();
    let mut wb = Workbench::new(ring)?;
    rows.push(StageTiming { stage: "biorder".into(), millis: start.elapsed().as_millis(), verdict: "-".into() });
    let mut timed = config.clone();
    timed.timings = true;
    let report = run_on(&mut wb, &timed)?;
    for group in &report.groups {
        for r in &group.records {
            rows.push(StageTiming {
                stage: format!("{}/{}", group.group, r.check),
                millis: r.elapsed_ms.unwrap_or(0) as u128,
                verdict: serde_json::to_value(r.verdict)?.as_str().unwrap_or("").to_string(),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_lists_parse_and_sort() {
        assert_eq!(CheckGroup::parse_list("basis,axioms,basis").unwrap(), vec![CheckGroup::Axioms, CheckGroup::Basis]);
        assert_eq!(CheckGroup::parse_list("all").unwrap().len(), 6);
        assert!(matches!(CheckGroup::parse_list("nope"), Err(Error::Config(_))));
        assert_eq!(Axiom::parse_list("e3,E1").unwrap(), vec![Axiom::E1, Axiom::E3]);
    }

    #[test]
    fn m2_all_checks_pass() {
        let report = run_verify(&RunConfig::new(RingSpec::Gfmatrix { n: 2, q: 2 })).unwrap();
        let failed: Vec<_> = report.groups.iter().flat_map(|g| &g.records).filter(|r| r.failed()).map(|r| &r.check).collect();
        assert!(failed.is_empty(), "{failed:?}");
        assert_eq!(report_exit_code(&report), 0);
        let names: Vec<_> = report.groups.iter().map(|g| g.group.as_str()).collect();
        assert_eq!(names, ["axioms", "baer", "lattice", "distances", "idpersp", "basis"]);
    }

    #[test]
    fn z4_fails_regularity_at_two() {
        let mut cfg = RunConfig::new(RingSpec::Zmod { m: 4 });
        cfg.checks = vec![CheckGroup::Axioms];
        let report = run_verify(&cfg).unwrap();
        let rec = report.record("semigroup-regular").unwrap();
        assert!(rec.failed());
        assert_eq!(rec.counterexamples[0]["x"], 2);
        assert_eq!(report_exit_code(&report), 1);
    }

    #[test]
    fn z6_basis_fails_and_zmod_needs_a_basis() {
        let mut cfg = RunConfig::new(RingSpec::Zmod { m: 6 });
        cfg.checks = vec![CheckGroup::Basis];
        assert!(matches!(run_verify(&cfg), Err(Error::Config(_))));
        cfg.basis = Some(vec![3, 4]);
        let report = run_verify(&cfg).unwrap();
        assert_eq!(report_exit_code(&report), 1);
        assert!(report.record("homogeneous-basis").unwrap().notes.iter().any(|n| n.contains("E4(iii)")));
        cfg.basis = Some(vec![2]);
        assert!(matches!(run_verify(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn budget_errors_map_to_three() {
        let mut cfg = RunConfig::new(RingSpec::Gfmatrix { n: 3, q: 2 });
        cfg.max_order = 100;
        let err = run_verify(&cfg).unwrap_err();
        assert_eq!(exit_code(&err), 3);
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
    }

    #[test]
    fn exports_are_deterministic() {
        let cfg = RunConfig::new(RingSpec::Gfmatrix { n: 2, q: 2 });
        let mut wb = Workbench::from_config(&cfg).unwrap();
        let dot = export(&mut wb, ExportTarget::Lattice(Side::Left), ExportFormat::Dot).unwrap();
        assert_eq!(dot.matches("[label=").count(), 5);
        let a = export(&mut wb, ExportTarget::Biorder, ExportFormat::Json).unwrap();
        let mut wb2 = Workbench::from_config(&cfg).unwrap();
        assert_eq!(a, export(&mut wb2, ExportTarget::Biorder, ExportFormat::Json).unwrap());
        let graph = export(&mut wb, ExportTarget::Graph, ExportFormat::Dot).unwrap();
        assert!(graph.contains("label=\"l\"") && graph.contains("label=\"r\""));
    }
}
