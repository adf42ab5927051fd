//! Quotient orders E/L and E/R, their lattice operations, and the lattice
//! facts checked on them: modularity, complements, the duality induced by a
//! complement map, independence, perspectivity and homogeneous bases.
//!
//! Classes are numbered by their least member, so class 0 holds the least
//! idempotent index. Every witness is reported through that representative.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::biorder::BiorderedSet;
use crate::bits::{BitRelation, BitSet};
use crate::complement::{oplus, oplus_chain, random_orthogonal_family, verify_e1, ComplementMap};
use crate::error::{Error, Result};
use crate::matrix::{reduced_echelon, subspace_count};
use crate::report::CheckRecord;
use crate::ring::RingTable;
use crate::semigroup::Side;
use crate::sequences::{ESequenceGraph, Step};

/// Why a finite order is not a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "defect", rename_all = "kebab-case")]
pub enum LatticeDefect {
    NotPartialOrder { a: u32, b: u32 },
    NoJoin { a: u32, b: u32, upper_bounds: Vec<u32> },
    NoMeet { a: u32, b: u32, lower_bounds: Vec<u32> },
    Empty,
}

#[derive(Clone, Debug)]
pub struct QuotientLattice {
    side: Option<Side>,
    /// Members of each class, ascending.
    classes: Vec<Vec<u32>>,
    /// Class of each idempotent position (empty for raw orders).
    class_of: Vec<usize>,
    /// `order.contains(a, b)` iff `a ≤ b`.
    order: BitRelation,
    down: BitRelation,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: Option<usize>,
    top: Option<usize>,
    defect: Option<LatticeDefect>,
}

impl QuotientLattice {
    /// E/L (`Side::Left`, via ωl) or E/R (`Side::Right`, via ωr).
    pub fn from_biorder(b: &BiorderedSet, side: Side) -> Self {
        let rel = match side {
            Side::Left => b.omega_l(),
            Side::Right => b.omega_r(),
        };
        let k = b.size();
        let mut class_of = vec![usize::MAX; k];
        let mut reps = Vec::new();
        let mut classes = Vec::new();
        for p in 0..k {
            if class_of[p] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(p);
            let mut members = Vec::new();
            for q in rel.row(p).iter() {
                if rel.contains(q, p) {
                    class_of[q] = id;
                    members.push(b.element(q));
                }
            }
            classes.push(members);
        }
        let order = BitRelation::from_fn(reps.len(), |x, y| rel.contains(reps[x], reps[y]));
        let mut lattice = Self::assemble(Some(side), classes, order);
        lattice.class_of = class_of;
        lattice
    }

    /// A lattice read directly from an order on `0..n`, bypassing any
    /// semigroup. `order.contains(a, b)` means `a ≤ b`.
    pub fn from_order(order: BitRelation) -> Self {
        let classes = (0..order.size() as u32).map(|a| vec![a]).collect();
        Self::assemble(None, classes, order)
    }

    /// `n` labels with the listed `a ≤ b` pairs, closed reflexively and
    /// transitively.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut rel = BitRelation::identity(n);
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Parse(format!("pair ({a}, {b}) outside 0..{n}")));
            }
            rel.insert(a, b);
        }
        // Warshall closure
        let mut rows: Vec<BitSet> = rel.rows().to_vec();
        for m in 0..n {
            let via = rows[m].clone();
            for row in rows.iter_mut() {
                if row.contains(m) {
                    row.union_with(&via);
                }
            }
        }
        Ok(Self::from_order(BitRelation::from_rows(rows)))
    }

    /// Text form: the first line holds `n`, each further non-empty line a
    /// pair `a,b` meaning `a ≤ b`.
    pub fn parse_order(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty order file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("element count: {e}")))?;
        let mut pairs = Vec::new();
        for line in lines {
            let mut parts = line.split(',').map(str::trim);
            let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse(format!("expected `a,b`, got `{line}`")));
            };
            let a = a.parse().map_err(|e| Error::Parse(format!("`{line}`: {e}")))?;
            let b = b.parse().map_err(|e| Error::Parse(format!("`{line}`: {e}")))?;
            pairs.push((a, b));
        }
        Self::from_pairs(n, &pairs)
    }

    fn assemble(side: Option<Side>, classes: Vec<Vec<u32>>, order: BitRelation) -> Self {
        let n = order.size();
        let down = order.transpose();
        let mut lattice = Self {
            side,
            classes,
            class_of: Vec::new(),
            order,
            down,
            join: Vec::new(),
            meet: Vec::new(),
            bottom: None,
            top: None,
            defect: None,
        };
        if n == 0 {
            lattice.defect = Some(LatticeDefect::Empty);
            return lattice;
        }
        if !lattice.order.is_reflexive() || !lattice.order.is_transitive() {
            let (a, b) = lattice
                .order
                .first_irreflexive()
                .map(|a| (a, a))
                .or_else(|| lattice.order.first_intransitive().map(|(a, _, c)| (a, c)))
                .unwrap_or((0, 0));
            lattice.defect = Some(LatticeDefect::NotPartialOrder { a: lattice.label(a), b: lattice.label(b) });
            return lattice;
        }
        if let Some((a, b)) = lattice.order.first_asymmetric_pair() {
            lattice.defect = Some(LatticeDefect::NotPartialOrder { a: lattice.label(a), b: lattice.label(b) });
            return lattice;
        }
        lattice.bottom = (0..n).find(|&a| lattice.order.row(a).is_full());
        lattice.top = (0..n).find(|&a| lattice.down.row(a).is_full());
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let ups = lattice.order.row(a).intersection(lattice.order.row(b));
                match ups.iter().find(|&u| ups.is_subset(lattice.order.row(u))) {
                    Some(u) => join[a * n + b] = u,
                    None => {
                        lattice.defect = Some(LatticeDefect::NoJoin {
                            a: lattice.label(a),
                            b: lattice.label(b),
                            upper_bounds: ups.iter().map(|u| lattice.label(u)).collect(),
                        });
                        return lattice;
                    }
                }
                let downs = lattice.down.row(a).intersection(lattice.down.row(b));
                match downs.iter().find(|&d| downs.is_subset(lattice.down.row(d))) {
                    Some(d) => meet[a * n + b] = d,
                    None => {
                        lattice.defect = Some(LatticeDefect::NoMeet {
                            a: lattice.label(a),
                            b: lattice.label(b),
                            lower_bounds: downs.iter().map(|d| lattice.label(d)).collect(),
                        });
                        return lattice;
                    }
                }
            }
        }
        lattice.join = join;
        lattice.meet = meet;
        lattice
    }

    pub fn side(&self) -> Option<Side> {
        self.side
    }

    pub fn size(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    /// Least member of a class, used as its label.
    pub fn label(&self, class: usize) -> u32 {
        self.classes[class][0]
    }

    /// Class of an idempotent position. Panics for raw orders.
    pub fn class_of(&self, position: usize) -> usize {
        self.class_of[position]
    }

    pub fn order(&self) -> &BitRelation {
        &self.order
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.order.contains(a, b)
    }

    pub fn is_lattice(&self) -> bool {
        self.defect.is_none()
    }

    pub fn defect(&self) -> Option<&LatticeDefect> {
        self.defect.as_ref()
    }

    pub fn bottom(&self) -> Option<usize> {
        self.bottom
    }

    pub fn top(&self) -> Option<usize> {
        self.top
    }

    /// Panics unless [`Self::is_lattice`].
    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size() + b]
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b]
    }

    /// Join of a family; the empty join is the bottom.
    pub fn join_all(&self, family: impl IntoIterator<Item = usize>) -> usize {
        family
            .into_iter()
            .fold(self.bottom.expect("lattice has a bottom"), |acc, x| self.join(acc, x))
    }

    pub fn are_complements(&self, a: usize, x: usize) -> bool {
        Some(self.meet(a, x)) == self.bottom && Some(self.join(a, x)) == self.top
    }

    pub fn complements(&self, a: usize) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.are_complements(a, x)).collect()
    }

    /// Least common complement of `a` and `b`.
    pub fn perspective(&self, a: usize, b: usize) -> Option<usize> {
        (0..self.size()).find(|&x| self.are_complements(a, x) && self.are_complements(b, x))
    }

    /// Each member meets the join of the others at the bottom.
    pub fn independent(&self, family: &[usize]) -> bool {
        (0..family.len()).all(|i| {
            let others = family.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x);
            Some(self.meet(family[i], self.join_all(others))) == self.bottom
        })
    }

    fn not_a_lattice(&self, rec: &mut CheckRecord) -> bool {
        match &self.defect {
            Some(d) => {
                rec.violation(serde_json::to_value(d).expect("serializable"));
                true
            }
            None => false,
        }
    }

    pub fn check_lattice(&self) -> CheckRecord {
        let mut rec = CheckRecord::new("lattice", "the quotient order is a lattice");
        if !self.not_a_lattice(&mut rec) {
            rec.note(format!("{} classes", self.size()));
        }
        rec
    }

    /// `a ≤ c ⇒ a ∨ (b ∧ c) = (a ∨ b) ∧ c` over all triples.
    pub fn check_modular(&self) -> CheckRecord {
        let mut rec = CheckRecord::new("modular", "a ≤ c implies a ∨ (b ∧ c) = (a ∨ b) ∧ c");
        if self.not_a_lattice(&mut rec) {
            return rec;
        }
        let n = self.size();
        let failures: Vec<(usize, usize, usize)> = (0..n)
            .into_par_iter()
            .flat_map_iter(|a| {
                let mut out = Vec::new();
                for c in self.order.row(a).iter() {
                    for b in 0..n {
                        if self.join(a, self.meet(b, c)) != self.meet(self.join(a, b), c) {
                            out.push((a, b, c));
                        }
                    }
                }
                out.sort_unstable_by_key(|&(a, b, c)| (a, b, c));
                out
            })
            .collect();
        for (a, b, c) in failures {
            rec.violation(json!({ "a": self.label(a), "b": self.label(b), "c": self.label(c) }));
        }
        rec
    }

    /// Every class has a complement. With a biorder and complement map, the
    /// class of `c(e)` must also complement the class of `e`.
    pub fn check_complemented(&self, with: Option<(&BiorderedSet, &ComplementMap)>) -> CheckRecord {
        let mut rec = CheckRecord::new("complemented", "every class has a complement");
        if self.not_a_lattice(&mut rec) {
            return rec;
        }
        for a in 0..self.size() {
            match self.complements(a).first() {
                Some(&x) => rec.witness(json!({ "class": self.label(a), "complement": self.label(x) })),
                None => rec.violation(json!({ "class": self.label(a), "failure": "no complement" })),
            }
        }
        if let Some((b, c)) = with {
            for e in 0..b.size() {
                let (a, x) = (self.class_of(e), self.class_of(c.get(e)));
                if !self.are_complements(a, x) {
                    rec.violation(json!({
                        "e": b.element(e), "complement": b.element(c.get(e)),
                        "failure": "classes of e and c(e) are not complements",
                    }));
                }
            }
        }
        rec
    }

    pub fn to_json(&self) -> Value {
        let n = self.size();
        let table = |t: &[usize]| -> Vec<Vec<u32>> {
            if t.is_empty() {
                return Vec::new();
            }
            (0..n).map(|a| (0..n).map(|b| self.label(t[a * n + b])).collect()).collect()
        };
        json!({
            "side": self.side,
            "classes": self.classes,
            "order_pairs": self.order.pairs().map(|(a, b)| [self.label(a), self.label(b)]).collect::<Vec<_>>(),
            "bottom": self.bottom.map(|x| self.label(x)),
            "top": self.top.map(|x| self.label(x)),
            "defect": self.defect,
            "join": table(&self.join),
            "meet": table(&self.meet),
        })
    }

    /// Hasse diagram; nodes are named by representative and show class size.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n");
        for (i, members) in self.classes.iter().enumerate() {
            out.push_str(&format!(
                "  c{} [label=\"{} ({})\"];\n",
                self.label(i),
                self.label(i),
                members.len()
            ));
        }
        for (a, b) in self.order.transitive_reduction().pairs() {
            out.push_str(&format!("  c{} -> c{};\n", self.label(a), self.label(b)));
        }
        out.push_str("}\n");
        out
    }
}

/// The five-element non-modular lattice: 0 < a < c < 1, 0 < b < 1, labelled
/// 0 = bottom, 1 = a, 2 = b, 3 = c, 4 = top.
pub fn pentagon() -> QuotientLattice {
    QuotientLattice::from_pairs(5, &[(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)]).expect("in range")
}

/// The chain `0 < 1 < ... < n-1`.
pub fn chain(n: usize) -> QuotientLattice {
    let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    QuotientLattice::from_pairs(n, &pairs).expect("in range")
}

/// `class_L(e) ↦ class_R(c(e))` is a well-defined, bijective, order-reversing
/// map E/L → E/R.
pub fn dual_isomorphism_check(
    left: &QuotientLattice,
    right: &QuotientLattice,
    b: &BiorderedSet,
    c: &ComplementMap,
) -> CheckRecord {
    let mut rec = CheckRecord::new(
        "dual-isomorphism",
        "e ↦ c(e) induces an order-reversing bijection E/L → E/R",
    );
    let mut image: Vec<Option<usize>> = vec![None; left.size()];
    for e in 0..b.size() {
        let (a, x) = (left.class_of(e), right.class_of(c.get(e)));
        match image[a] {
            None => image[a] = Some(x),
            Some(prev) if prev != x => rec.violation(json!({
                "failure": "not well defined",
                "class": left.label(a), "images": [right.label(prev), right.label(x)],
            })),
            Some(_) => {}
        }
    }
    if left.size() != right.size() {
        rec.violation(json!({ "failure": "class counts differ", "left": left.size(), "right": right.size() }));
    }
    let map: Vec<usize> = image.iter().map(|x| x.expect("every class has a member")).collect();
    let mut hit = vec![false; right.size()];
    for &x in &map {
        if std::mem::replace(&mut hit[x], true) {
            rec.violation(json!({ "failure": "not injective", "image": right.label(x) }));
        }
    }
    for a in 0..left.size() {
        for a2 in 0..left.size() {
            if left.le(a, a2) != right.le(map[a2], map[a]) {
                rec.violation(json!({
                    "failure": "not order reversing",
                    "classes": [left.label(a), left.label(a2)],
                }));
            }
        }
    }
    rec.note(format!("{} ↔ {} classes", left.size(), right.size()));
    rec
}

/// `class(e) ≤ class(f)` iff the principal ideal of `e` lies in that of `f`
/// (`S e` on the left side, `e S` on the right side).
pub fn check_ideal_order(lattice: &QuotientLattice, b: &BiorderedSet) -> CheckRecord {
    let side = lattice.side().expect("quotient of a biorder");
    let mut rec = CheckRecord::new(
        "principal-ideal-order",
        "the quotient order matches inclusion of principal ideals",
    );
    let s = b.semigroup();
    let ideals: Vec<BitSet> = (0..b.size())
        .into_par_iter()
        .map(|e| s.principal_ideal(b.element(e), side))
        .collect();
    let reps: Vec<usize> = (0..lattice.size())
        .map(|a| b.position_of(lattice.label(a)).expect("representative is idempotent"))
        .collect();
    for e in 0..b.size() {
        let r = reps[lattice.class_of(e)];
        if ideals[e] != ideals[r] {
            rec.violation(json!({ "failure": "class members generate different ideals", "e": b.element(e), "representative": b.element(r) }));
        }
    }
    for a in 0..lattice.size() {
        for a2 in 0..lattice.size() {
            if lattice.le(a, a2) != ideals[reps[a]].is_subset(&ideals[reps[a2]]) {
                rec.violation(json!({ "classes": [lattice.label(a), lattice.label(a2)], "ordered": lattice.le(a, a2) }));
            }
        }
    }
    rec
}

/// For a matrix ring: L-classes correspond to row spaces and R-classes to
/// column spaces, bijectively onto all subspaces, with order matching
/// inclusion.
pub fn check_subspace_correspondence(lattice: &QuotientLattice, b: &BiorderedSet, ring: &RingTable) -> CheckRecord {
    let mut rec = CheckRecord::new(
        "subspace-lattice",
        "classes correspond to the subspaces of F_q^n, ordered by inclusion",
    );
    let Some(shape) = ring.matrix_shape() else {
        return rec.skipped("not a matrix ring");
    };
    let side = lattice.side().expect("quotient of a biorder");
    let space = |x: u32| {
        let m = shape.decode(x);
        match side {
            Side::Left => m.row_space(),
            Side::Right => m.column_space(),
        }
    };
    let spaces: Vec<Vec<Vec<u32>>> = (0..lattice.size()).map(|a| space(lattice.label(a))).collect();
    for e in 0..b.size() {
        let a = lattice.class_of(e);
        if space(b.element(e)) != spaces[a] {
            rec.violation(json!({ "failure": "class members span different spaces", "e": b.element(e), "representative": lattice.label(a) }));
        }
    }
    let mut sorted = spaces.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != spaces.len() {
        rec.violation(json!({ "failure": "two classes share a subspace" }));
    }
    let expected = subspace_count(shape.n as u32, shape.q as u64);
    if spaces.len() as u128 != expected {
        rec.violation(json!({ "failure": "class count", "classes": spaces.len(), "subspaces": expected.to_string() }));
    }
    let contained = |u: &Vec<Vec<u32>>, v: &Vec<Vec<u32>>| {
        let mut stacked = v.clone();
        stacked.extend(u.iter().cloned());
        stacked.is_empty() || reduced_echelon(stacked, shape.q).len() == v.len()
    };
    for a in 0..lattice.size() {
        for a2 in 0..lattice.size() {
            if lattice.le(a, a2) != contained(&spaces[a], &spaces[a2]) {
                rec.violation(json!({ "failure": "order differs from inclusion", "classes": [lattice.label(a), lattice.label(a2)] }));
            }
        }
    }
    rec.note(format!("{} classes, {} subspaces", spaces.len(), expected));
    rec
}

/// For every `f ω c(e)`: `class(e) ∨ class(f) = class(e ⊕ f)` and
/// `class(e) ∧ class(f)` is the bottom.
pub fn check_oplus_classes(lattice: &QuotientLattice, b: &BiorderedSet, c: &ComplementMap) -> CheckRecord {
    let mut rec = CheckRecord::new(
        "oplus-classes",
        "class(e) ∨ class(f) = class(e ⊕ f) and class(e) ∧ class(f) = bottom when f ω c(e)",
    );
    if lattice.not_a_lattice(&mut rec) {
        return rec;
    }
    let k = b.size();
    let found: Vec<(u64, Vec<Value>)> = (0..k)
        .into_par_iter()
        .map(|e| {
            let mut scanned = 0u64;
            let mut bad = Vec::new();
            for f in (0..k).filter(|&f| b.le(f, c.get(e))) {
                scanned += 1;
                let (a, x) = (lattice.class_of(e), lattice.class_of(f));
                match oplus(b, c, e, f, None) {
                    Ok(r) => {
                        if lattice.join(a, x) != lattice.class_of(r.h) || Some(lattice.meet(a, x)) != lattice.bottom() {
                            bad.push(json!({ "e": b.element(e), "f": b.element(f), "oplus": b.element(r.h) }));
                        }
                    }
                    Err(err) => bad.push(json!({ "e": b.element(e), "f": b.element(f), "error": err.to_string() })),
                }
            }
            (scanned, bad)
        })
        .collect();
    let mut scanned = 0;
    for (n, bad) in found {
        scanned += n;
        for cx in bad {
            rec.violation(cx);
        }
    }
    rec.note(format!("{scanned} ordered pairs with f ω c(e)"));
    rec
}

/// Pairwise orthogonal families have independent classes whose join is the
/// class of their `⊕`. Checked on `families` plus `random` seeded families.
pub fn check_orthogonal_families(
    lattice: &QuotientLattice,
    b: &BiorderedSet,
    c: &ComplementMap,
    families: &[Vec<usize>],
    random: usize,
    seed: u64,
) -> CheckRecord {
    let mut rec = CheckRecord::new(
        "orthogonal-families",
        "pairwise orthogonal idempotents have independent classes joining to the class of their ⊕",
    );
    if lattice.not_a_lattice(&mut rec) {
        return rec;
    }
    let Some(zero) = verify_e1(b).1 else {
        rec.violation(json!({ "failure": "no zero idempotent" }));
        return rec;
    };
    let mut all = families.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        all.push(random_orthogonal_family(b, zero, &mut rng, 6));
    }
    for family in all.iter().filter(|f| !f.is_empty()) {
        let classes: Vec<usize> = family.iter().map(|&e| lattice.class_of(e)).collect();
        let members = b.to_elements(family);
        if !lattice.independent(&classes) {
            rec.violation(json!({ "family": members, "failure": "classes not independent" }));
            continue;
        }
        match oplus_chain(b, c, family, seed) {
            Ok(h) if lattice.join_all(classes.iter().copied()) == lattice.class_of(h) => {}
            Ok(h) => rec.violation(json!({ "family": members, "oplus": b.element(h), "failure": "join differs from class of ⊕" })),
            Err(err) => rec.violation(json!({ "family": members, "error": err.to_string() })),
        }
    }
    rec.note(format!("{} families", all.len()));
    rec
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisStage {
    pub stage: &'static str,
    pub passed: bool,
    pub detail: Value,
}

/// A verified homogeneous basis of E/L.
#[derive(Clone, Debug, Serialize)]
pub struct BasisCertificate {
    pub idempotents: Vec<u32>,
    pub classes: Vec<u32>,
    /// Meet of each class with the join of the others.
    pub independence: Vec<u32>,
    pub join: u32,
    /// `(a, b, common complement)` for every pair.
    pub perspectivity: Vec<(u32, u32, u32)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisOutcome {
    pub size: usize,
    /// Fewer than four members: outside the range where the axioms
    /// characterize these biorders, though every check still runs.
    pub below_four: bool,
    pub stages: Vec<BasisStage>,
    pub first_failure: Option<&'static str>,
    pub certificate: Option<BasisCertificate>,
}

impl BasisOutcome {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }

    pub fn to_record(&self) -> CheckRecord {
        let mut rec = CheckRecord::new(
            "homogeneous-basis",
            "E4 (i)-(iii), then independent, pairwise perspective classes joining to the top",
        );
        for s in &self.stages {
            if !s.passed {
                rec.violation(json!({ "stage": s.stage, "detail": s.detail }));
            }
        }
        if let Some(cert) = &self.certificate {
            rec.witness(serde_json::to_value(cert).expect("serializable"));
        }
        if self.below_four {
            rec.note(format!("n = {} < 4", self.size));
        }
        if let Some(stage) = self.first_failure {
            rec.note(format!("first failure: {stage}"));
        }
        rec
    }
}

/// Checks `family` (idempotent positions) as a homogeneous basis:
/// (i) `M(e_i, e_j) = {0}` for `i ≠ j`; (ii) the only `e` above every `e_i`
/// in ω is the top idempotent; (iii) `d_l(e_i, e_j) = 3` for `i ≠ j`; then
/// independence, join = top and pairwise perspectivity in E/L.
pub fn homogeneous_basis_check(left: &QuotientLattice, b: &BiorderedSet, family: &[usize]) -> BasisOutcome {
    let n = family.len();
    let mut stages = Vec::new();
    let zero = verify_e1(b).1;
    let omega = b.omega();
    let top = (0..b.size()).find(|&t| (0..b.size()).all(|x| omega.contains(x, t)));
    let labels = |v: &[usize]| b.to_elements(v);

    let mut bad = Vec::new();
    for &x in family {
        for &y in family {
            if x != y && !zero.is_some_and(|z| b.m_set(x, y).is_zero_set(z)) {
                bad.push(json!([b.element(x), b.element(y)]));
            }
        }
    }
    let orthogonal_ok = bad.is_empty() && zero.is_some() && family.iter().collect::<std::collections::BTreeSet<_>>().len() == n;
    stages.push(BasisStage { stage: "E4(i)", passed: orthogonal_ok, detail: json!({ "pairs": bad }) });

    let mut above = BitSet::full(b.size());
    for &x in family {
        above.intersect_with(omega.row(x));
    }
    let upper = above.to_vec();
    let top_ok = top.is_some_and(|t| above.is_singleton_of(t));
    stages.push(BasisStage { stage: "E4(ii)", passed: top_ok, detail: json!({ "upper_bounds": labels(&upper) }) });

    let graph = ESequenceGraph::new(b);
    let mut dist = Vec::new();
    let mut dist_ok = true;
    for &x in family {
        let (row, _) = graph.distances_from(x, Some(Step::L));
        for &y in family {
            if x != y {
                dist_ok &= row[y] == 3;
                dist.push(json!([b.element(x), b.element(y), row[y]]));
            }
        }
    }
    stages.push(BasisStage { stage: "E4(iii)", passed: dist_ok, detail: json!({ "d_l": dist }) });

    let mut certificate = None;
    if left.is_lattice() {
        let classes: Vec<usize> = family.iter().map(|&e| left.class_of(e)).collect();
        let independence: Vec<usize> = (0..n)
            .map(|i| {
                let others = (0..n).filter(|&j| j != i).map(|j| classes[j]);
                left.meet(classes[i], left.join_all(others))
            })
            .collect();
        let independent = independence.iter().all(|&m| Some(m) == left.bottom());
        stages.push(BasisStage {
            stage: "independent",
            passed: independent,
            detail: json!({ "meets": independence.iter().map(|&m| left.label(m)).collect::<Vec<_>>() }),
        });
        let join = left.join_all(classes.iter().copied());
        let join_ok = Some(join) == left.top();
        stages.push(BasisStage { stage: "join-top", passed: join_ok, detail: json!({ "join": left.label(join) }) });
        let mut persp = Vec::new();
        let mut missing = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                match left.perspective(classes[i], classes[j]) {
                    Some(x) => persp.push((left.label(classes[i]), left.label(classes[j]), left.label(x))),
                    None => missing.push(json!([left.label(classes[i]), left.label(classes[j])])),
                }
            }
        }
        let persp_ok = missing.is_empty();
        stages.push(BasisStage { stage: "perspective", passed: persp_ok, detail: json!({ "without_common_complement": missing }) });
        if orthogonal_ok && top_ok && dist_ok && independent && join_ok && persp_ok {
            certificate = Some(BasisCertificate {
                idempotents: labels(family),
                classes: classes.iter().map(|&a| left.label(a)).collect(),
                independence: independence.iter().map(|&m| left.label(m)).collect(),
                join: left.label(join),
                perspectivity: persp,
            });
        }
    } else {
        stages.push(BasisStage {
            stage: "lattice",
            passed: false,
            detail: serde_json::to_value(left.defect()).expect("serializable"),
        });
    }
    let first_failure = stages.iter().find(|s| !s.passed).map(|s| s.stage);
    BasisOutcome { size: n, below_four: n < 4, stages, first_failure, certificate }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{build_matrix_ring, build_modular_ring, matrix_unit_idempotents, Budget};
    use crate::semigroup::FiniteSemigroup;

    fn setup(ring: &RingTable) -> (BiorderedSet, ComplementMap) {
        let b = BiorderedSet::build(&FiniteSemigroup::from_ring(ring)).unwrap();
        let c = ComplementMap::from_ring(ring, &b).unwrap();
        (b, c)
    }

    fn positions(b: &BiorderedSet, xs: &[u32]) -> Vec<usize> {
        xs.iter().map(|&x| b.position_of(x).unwrap()).collect()
    }

    #[test]
    fn z6_is_boolean_square() {
        let ring = build_modular_ring(6, &Budget::default()).unwrap();
        let (b, c) = setup(&ring);
        let l = QuotientLattice::from_biorder(&b, Side::Left);
        assert_eq!(l.classes(), &[vec![0], vec![1], vec![3], vec![4]]);
        assert_eq!(l.label(l.bottom().unwrap()), 0);
        assert_eq!(l.label(l.top().unwrap()), 1);
        let (three, four) = (l.class_of(b.position_of(3).unwrap()), l.class_of(b.position_of(4).unwrap()));
        assert_eq!(l.label(l.join(three, four)), 1);
        assert_eq!(l.label(l.meet(three, four)), 0);
        assert_eq!(l.perspective(three, four), None);
        assert!(l.check_modular().passed());
        assert!(l.check_complemented(Some((&b, &c))).passed());
        let r = QuotientLattice::from_biorder(&b, Side::Right);
        assert!(dual_isomorphism_check(&l, &r, &b, &c).passed());
    }

    #[test]
    fn m2_is_the_subspace_lattice_of_the_plane() {
        let ring = build_matrix_ring(2, 2, &Budget::default()).unwrap();
        let (b, _) = setup(&ring);
        let l = QuotientLattice::from_biorder(&b, Side::Left);
        assert_eq!(l.size(), 5);
        assert!(check_subspace_correspondence(&l, &b, &ring).passed());
        assert!(check_ideal_order(&l, &b).passed());
        let e11 = l.class_of(b.position_of(1).unwrap());
        let e22 = l.class_of(b.position_of(8).unwrap());
        assert!(l.are_complements(e11, e22));
        let x = l.perspective(e11, e22).unwrap();
        assert!(x != e11 && x != e22);
        // the line spanned by (1, 1): rows of the representative are multiples of (1, 1)
        let rows = ring.matrix_shape().unwrap().decode(l.label(x)).row_space();
        assert_eq!(rows, vec![vec![1, 1]]);
        assert!(!l.independent(&[e11, e11]));
        assert!(l.independent(&[e11]));
        assert!(l.to_dot().matches("->").count() == 6);
    }

    #[test]
    fn m3_lattice_suite() {
        let ring = build_matrix_ring(3, 2, &Budget::default()).unwrap();
        let (b, c) = setup(&ring);
        let l = QuotientLattice::from_biorder(&b, Side::Left);
        let r = QuotientLattice::from_biorder(&b, Side::Right);
        assert_eq!((l.size(), r.size()), (16, 16));
        for q in [&l, &r] {
            assert!(q.check_modular().passed());
            assert!(q.check_complemented(Some((&b, &c))).passed());
            assert!(check_subspace_correspondence(q, &b, &ring).passed());
            assert!(check_ideal_order(q, &b).passed());
        }
        assert!(dual_isomorphism_check(&l, &r, &b, &c).passed());
        assert!(check_oplus_classes(&l, &b, &c).passed());
        let units = positions(&b, &matrix_unit_idempotents(&ring).unwrap());
        assert!(check_orthogonal_families(&l, &b, &c, &[units], 10, 7).passed());
    }

    #[test]
    fn pentagon_fails_modularity_at_its_triple() {
        let n5 = pentagon();
        assert!(n5.is_lattice());
        let rec = n5.check_modular();
        assert!(rec.failed());
        assert_eq!(rec.counterexamples[0], json!({ "a": 1, "b": 2, "c": 3 }));
    }

    #[test]
    fn chain_middle_has_no_complement() {
        let rec = chain(3).check_complemented(None);
        assert!(rec.failed());
        assert_eq!(rec.counterexamples, vec![json!({ "class": 1, "failure": "no complement" })]);
        assert!(chain(3).check_modular().passed());
    }

    #[test]
    fn non_lattices_are_diagnosed() {
        // two incomparable maximal elements over a bottom
        let v = QuotientLattice::from_pairs(3, &[(0, 1), (0, 2)]).unwrap();
        assert!(matches!(v.defect(), Some(LatticeDefect::NoJoin { a: 1, b: 2, .. })));
        assert!(v.check_modular().failed());
        let cyc = QuotientLattice::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(matches!(cyc.defect(), Some(LatticeDefect::NotPartialOrder { .. })));
        let parsed = QuotientLattice::parse_order("5\n0,1\n1,3\n3,4\n0,2\n2,4\n").unwrap();
        assert_eq!(parsed.order(), pentagon().order());
    }

    #[test]
    fn singleton_lattice() {
        let one = chain(1);
        assert!(one.check_modular().passed());
        assert!(one.check_complemented(None).passed());
        assert!(one.independent(&[0]));
    }

    #[test]
    fn basis_of_matrix_units_in_the_plane_is_flagged() {
        let ring = build_matrix_ring(2, 2, &Budget::default()).unwrap();
        let (b, _) = setup(&ring);
        let l = QuotientLattice::from_biorder(&b, Side::Left);
        let units = positions(&b, &matrix_unit_idempotents(&ring).unwrap());
        let out = homogeneous_basis_check(&l, &b, &units);
        assert!(out.passed());
        assert!(out.below_four);
        assert!(out.certificate.is_some());
    }

    #[test]
    fn z6_basis_fails_at_distance() {
        let ring = build_modular_ring(6, &Budget::default()).unwrap();
        let (b, _) = setup(&ring);
        let l = QuotientLattice::from_biorder(&b, Side::Left);
        let out = homogeneous_basis_check(&l, &b, &positions(&b, &[3, 4]));
        assert_eq!(out.first_failure, Some("E4(iii)"));
        assert!(out.certificate.is_none());
    }
}
