//! Complement involutions on a biordered set and the partial sum `⊕`.
//!
//! Axioms checked over positions of a [`BiorderedSet`] with a map `c`:
//!
//! * E1: a least element `0` for ω.
//! * E2: (i) `c(c(e)) = e`; (ii) `f ωl e ⇔ c(e) ωr c(f)`;
//!   (iii) `f ωl c(e) ⇔ M(f, e) = {0}`.
//! * duals: (i) `1 = c(0)` is greatest for ω; (ii) `f ωr e ⇔ c(e) ωl c(f)`;
//!   (iii) `f ωr c(e) ⇔ M(e, f) = {0}`.
//! * E3: whenever `f ω c(e)`, `S(c(e), c(f)) ∩ S(c(f), c(e))` is nonempty.
//!   It is checked here as "exactly one element", and that element must be
//!   the product `c(e) c(f)`.
//!
//! `e ⊕ f` is `c(h)` for the unique `h` of that intersection.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::biorder::{BiorderedSet, Route};
use crate::error::{Error, Result};
use crate::report::CheckRecord;
use crate::ring::{complement_of, RingTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplementMap {
    map: Vec<usize>,
}

impl ComplementMap {
    /// `e ↦ 1 - e`, transported to positions.
    pub fn from_ring(ring: &RingTable, biorder: &BiorderedSet) -> Result<Self> {
        let map = biorder
            .elements()
            .iter()
            .map(|&e| {
                let c = complement_of(ring, e)?;
                biorder.position_of(c).ok_or(Error::NotIdempotent(c))
            })
            .collect::<Result<_>>()?;
        Ok(Self { map })
    }

    pub fn from_positions(map: Vec<usize>) -> Result<Self> {
        let k = map.len();
        if let Some(&bad) = map.iter().find(|&&p| p >= k) {
            return Err(Error::Precondition(format!(
                "complement position {bad} out of range for {k} idempotents"
            )));
        }
        Ok(Self { map })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            map: (0..k).collect(),
        }
    }

    #[inline]
    pub fn get(&self, e: usize) -> usize {
        self.map[e]
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

fn pair(b: &BiorderedSet, e: usize, f: usize) -> serde_json::Value {
    json!({ "e": b.element(e), "f": b.element(f) })
}

/// Scans all ordered pairs in parallel, returning the ones where `bad` holds,
/// in `(e, f)` order.
fn failing_pairs<F>(k: usize, bad: F) -> Vec<(usize, usize)>
where
    F: Fn(usize, usize) -> bool + Sync,
{
    (0..k)
        .into_par_iter()
        .flat_map_iter(|e| (0..k).filter(|&f| bad(e, f)).map(move |f| (e, f)).collect::<Vec<_>>())
        .collect()
}

/// Least element of ω, cross-checked against the parent semigroup's zero.
pub fn verify_e1(b: &BiorderedSet) -> (CheckRecord, Option<usize>) {
    let mut rec = CheckRecord::new("E1", "E1: there is 0 with 0 ω e for every e");
    let omega = b.omega();
    let bottoms: Vec<usize> = (0..b.size()).filter(|&p| omega.row(p).is_full()).collect();
    let zero = match bottoms.as_slice() {
        [z] => Some(*z),
        [] => {
            rec.violation(json!({ "failure": "no ω-least idempotent" }));
            None
        }
        many => {
            rec.violation(json!({ "failure": "several ω-least idempotents", "candidates": b.to_elements(many) }));
            None
        }
    };
    if let Some(z) = zero {
        rec.witness(json!({ "zero": b.element(z) }));
        if let Some(parent) = b.semigroup().zero() {
            if parent != b.element(z) {
                rec.violation(json!({ "failure": "ω-least idempotent differs from the semigroup zero", "least": b.element(z), "zero": parent }));
            }
        }
    }
    (rec, zero)
}

pub fn verify_e2(b: &BiorderedSet, c: &ComplementMap, zero: usize) -> CheckRecord {
    let mut rec = CheckRecord::new("E2", "E2: c is an involution; f ωl e ⇔ c(e) ωr c(f); f ωl c(e) ⇔ M(f, e) = {0}");
    let k = b.size();
    if c.len() != k {
        rec.violation(json!({ "failure": "complement map has the wrong length" }));
        return rec;
    }
    for e in (0..k).filter(|&e| c.get(c.get(e)) != e) {
        rec.violation(json!({ "condition": "E2(i)", "e": b.element(e), "c(c(e))": b.element(c.get(c.get(e))) }));
    }
    for (e, f) in failing_pairs(k, |e, f| b.le_l(f, e) != b.le_r(c.get(e), c.get(f))) {
        let mut cx = pair(b, e, f);
        cx["condition"] = json!("E2(ii)");
        cx["f ωl e"] = json!(b.le_l(f, e));
        rec.violation(cx);
    }
    for (e, f) in failing_pairs(k, |e, f| b.le_l(f, c.get(e)) != b.m_set(f, e).is_zero_set(zero)) {
        let mut cx = pair(b, e, f);
        cx["condition"] = json!("E2(iii)");
        cx["f ωl c(e)"] = json!(b.le_l(f, c.get(e)));
        rec.violation(cx);
    }
    rec.note("E2(iii) uses M(f, e), the argument order that matches fe = 0 in rings");
    rec
}

/// Returns the record and the greatest element `1 = c(0)` when it is ω-greatest.
pub fn verify_duals(b: &BiorderedSet, c: &ComplementMap, zero: usize) -> (CheckRecord, Option<usize>) {
    let mut rec = CheckRecord::new(
        "E2-dual",
        "duals: 1 = c(0) is ω-greatest; f ωr e ⇔ c(e) ωl c(f); f ωr c(e) ⇔ M(e, f) = {0}",
    );
    let k = b.size();
    let one = c.get(zero);
    let below: Vec<usize> = (0..k).filter(|&e| !b.le(e, one)).collect();
    for &e in &below {
        rec.violation(json!({ "condition": "dual(i)", "e": b.element(e), "one": b.element(one) }));
    }
    rec.witness(json!({ "one": b.element(one) }));
    for (e, f) in failing_pairs(k, |e, f| b.le_r(f, e) != b.le_l(c.get(e), c.get(f))) {
        let mut cx = pair(b, e, f);
        cx["condition"] = json!("dual(ii)");
        rec.violation(cx);
    }
    for (e, f) in failing_pairs(k, |e, f| b.le_r(f, c.get(e)) != b.m_set(e, f).is_zero_set(zero)) {
        let mut cx = pair(b, e, f);
        cx["condition"] = json!("dual(iii)");
        rec.violation(cx);
    }
    let one = below.is_empty().then_some(one);
    (rec, one)
}

/// `S(c(e), c(f)) ∩ S(c(f), c(e))` by the abstract route.
pub fn oplus_witnesses(b: &BiorderedSet, c: &ComplementMap, e: usize, f: usize) -> Vec<usize> {
    let (ce, cf) = (c.get(e), c.get(f));
    let first = b.sandwich_set(ce, cf, Route::Abstract).members;
    let second = b.sandwich_set(cf, ce, Route::Abstract).members;
    first.into_iter().filter(|h| second.contains(h)).collect()
}

/// E3 with uniqueness, over every ordered pair with `f ω c(e)`.
pub fn verify_e3(b: &BiorderedSet, c: &ComplementMap) -> CheckRecord {
    let mut rec = CheckRecord::new(
        "E3",
        "E3: f ω c(e) ⇒ S(c(e), c(f)) ∩ S(c(f), c(e)) is the single element c(e) c(f)",
    );
    let k = b.size();
    let results: Vec<(usize, usize, Vec<usize>)> = (0..k)
        .into_par_iter()
        .flat_map_iter(|e| {
            (0..k)
                .filter(move |&f| b.le(f, c.get(e)))
                .map(move |f| (e, f, oplus_witnesses(b, c, e, f)))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut scanned = 0u64;
    for (e, f, w) in results {
        scanned += 1;
        let product = b.product(c.get(e), c.get(f));
        match w.as_slice() {
            [h] if b.element(*h) == product => {
                if rec.witnesses.len() < 8 {
                    let mut wit = pair(b, e, f);
                    wit["witness"] = json!(b.element(*h));
                    rec.witness(wit);
                }
            }
            _ => {
                let mut cx = pair(b, e, f);
                cx["intersection"] = json!(b.to_elements(&w));
                cx["c(e)c(f)"] = json!(product);
                rec.violation(cx);
            }
        }
    }
    rec.note(format!("{scanned} ordered pairs with f ω c(e)"));
    rec
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OplusResult {
    pub e: usize,
    pub f: usize,
    pub h: usize,
    pub sandwich_witness: usize,
    /// `e ω h` and `f ω h`.
    pub upper_bound: bool,
    /// `h ωl g` for every common ωl-upper bound `g` of `e`, `f`.
    pub least_left: bool,
    /// `h ωr g` for every common ωr-upper bound `g` of `e`, `f`.
    pub least_right: bool,
    /// `h = e + f` in the ring, when one is attached.
    pub ring_sum_matches: Option<bool>,
}

impl OplusResult {
    pub fn characterized(&self) -> bool {
        self.upper_bound && self.least_left && self.least_right && self.ring_sum_matches != Some(false)
    }
}

/// `e ⊕ f`, for `f ω c(e)`.
///
/// Both sandwich sets are computed by both routes; a disagreement is an
/// error rather than a choice between them.
pub fn oplus(
    b: &BiorderedSet,
    c: &ComplementMap,
    e: usize,
    f: usize,
    ring: Option<&RingTable>,
) -> Result<OplusResult> {
    let (ce, cf) = (c.get(e), c.get(f));
    if !b.le(f, ce) {
        return Err(Error::Precondition(format!(
            "{} is not ω-below the complement of {}",
            b.element(f),
            b.element(e)
        )));
    }
    for (x, y) in [(ce, cf), (cf, ce)] {
        if b.sandwich_set(x, y, Route::Abstract).members != b.sandwich_set(x, y, Route::Semigroup).members {
            return Err(Error::RouteDisagreement {
                e: b.element(x),
                f: b.element(y),
            });
        }
    }
    let witnesses = oplus_witnesses(b, c, e, f);
    let &[w] = witnesses.as_slice() else {
        return Err(Error::NonUniqueWitness {
            e: b.element(e),
            f: b.element(f),
            size: witnesses.len(),
        });
    };
    let h = c.get(w);
    let mut common_l = b.omega_l().row(e).clone();
    common_l.intersect_with(b.omega_l().row(f));
    let mut common_r = b.omega_r().row(e).clone();
    common_r.intersect_with(b.omega_r().row(f));
    let ring_sum_matches = match ring {
        Some(r) if r.has_addition() => Some(r.add(b.element(e), b.element(f))? == b.element(h)),
        _ => None,
    };
    Ok(OplusResult {
        e,
        f,
        h,
        sandwich_witness: w,
        upper_bound: b.le(e, h) && b.le(f, h),
        least_left: common_l.is_subset(b.omega_l().row(h)),
        least_right: common_r.is_subset(b.omega_r().row(h)),
        ring_sum_matches,
    })
}

/// Every idempotent satisfying the three characterizing conditions of `e ⊕ f`.
pub fn oplus_candidates(b: &BiorderedSet, e: usize, f: usize) -> Vec<usize> {
    let mut common_l = b.omega_l().row(e).clone();
    common_l.intersect_with(b.omega_l().row(f));
    let mut common_r = b.omega_r().row(e).clone();
    common_r.intersect_with(b.omega_r().row(f));
    (0..b.size())
        .filter(|&h| {
            b.le(e, h)
                && b.le(f, h)
                && common_l.is_subset(b.omega_l().row(h))
                && common_r.is_subset(b.omega_r().row(h))
        })
        .collect()
}

/// `⊕` over every pair with `f ω c(e)`: it satisfies the characterization,
/// nothing else does, and it matches ring addition when available.
pub fn check_oplus(b: &BiorderedSet, c: &ComplementMap, ring: Option<&RingTable>) -> CheckRecord {
    let mut rec = CheckRecord::new(
        "oplus",
        "e ⊕ f is the unique common ω-upper bound below every common ωl- and ωr-upper bound",
    );
    let k = b.size();
    let results: Vec<(usize, usize, std::result::Result<(OplusResult, Vec<usize>), String>)> = (0..k)
        .into_par_iter()
        .flat_map_iter(|e| {
            (0..k)
                .filter(move |&f| b.le(f, c.get(e)))
                .map(move |f| {
                    let r = oplus(b, c, e, f, ring)
                        .map(|res| (res, oplus_candidates(b, e, f)))
                        .map_err(|err| err.to_string());
                    (e, f, r)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut count = 0u64;
    for (e, f, r) in results {
        count += 1;
        match r {
            Ok((res, candidates)) if res.characterized() && candidates == [res.h] => {
                if rec.witnesses.len() < 8 {
                    let mut w = pair(b, e, f);
                    w["e⊕f"] = json!(b.element(res.h));
                    rec.witness(w);
                }
            }
            Ok((res, candidates)) => {
                let mut cx = pair(b, e, f);
                cx["e⊕f"] = json!(b.element(res.h));
                cx["result"] = serde_json::to_value(&res).expect("serializes");
                cx["characterizing_elements"] = json!(b.to_elements(&candidates));
                rec.violation(cx);
            }
            Err(msg) => {
                let mut cx = pair(b, e, f);
                cx["error"] = json!(msg);
                rec.violation(cx);
            }
        }
    }
    rec.note(format!("{count} ordered pairs with f ω c(e)"));
    rec
}

/// Ring consistency: every pair of idempotents with `ef = fe = 0` has
/// `f ω c(e)` and `e ⊕ f = e + f`.
pub fn check_ring_sum(b: &BiorderedSet, c: &ComplementMap, ring: &RingTable) -> CheckRecord {
    let mut rec = CheckRecord::new("oplus-ring-sum", "ef = fe = 0 ⇒ e ⊕ f = e + f");
    let Some(zero) = ring.zero_index() else {
        return rec.skipped("ring has no zero");
    };
    if !ring.has_addition() {
        return rec.skipped("no addition table");
    }
    let k = b.size();
    let orthogonal = failing_pairs(k, |e, f| b.product(e, f) == zero && b.product(f, e) == zero);
    let bad: Vec<serde_json::Value> = orthogonal
        .par_iter()
        .filter_map(|&(e, f)| {
            let sum = ring.add(b.element(e), b.element(f)).ok()?;
            match oplus(b, c, e, f, Some(ring)) {
                Ok(res) if res.ring_sum_matches == Some(true) => None,
                Ok(res) => Some(json!({ "e": b.element(e), "f": b.element(f), "e⊕f": b.element(res.h), "e+f": sum })),
                Err(err) => Some(json!({ "e": b.element(e), "f": b.element(f), "e+f": sum, "error": err.to_string() })),
            }
        })
        .collect();
    for cx in bad {
        rec.violation(cx);
    }
    rec.note(format!("{} orthogonal ordered pairs", orthogonal.len()));
    rec
}

/// `M(e_i, e_j) = {0}` for all `i ≠ j`, else the first offending pair.
pub fn pairwise_orthogonal(b: &BiorderedSet, zero: usize, family: &[usize]) -> std::result::Result<(), (usize, usize)> {
    for (i, &x) in family.iter().enumerate() {
        for (j, &y) in family.iter().enumerate() {
            if i != j && !b.m_set(x, y).is_zero_set(zero) {
                return Err((x, y));
            }
        }
    }
    Ok(())
}

fn all_bracketings(
    b: &BiorderedSet,
    c: &ComplementMap,
    items: &[usize],
) -> Result<Vec<usize>> {
    if items.len() == 1 {
        return Ok(vec![items[0]]);
    }
    let mut out = Vec::new();
    for split in 1..items.len() {
        let lefts = all_bracketings(b, c, &items[..split])?;
        let rights = all_bracketings(b, c, &items[split..])?;
        for &l in &lefts {
            for &r in &rights {
                out.push(oplus(b, c, l, r, None)?.h);
            }
        }
    }
    Ok(out)
}

fn fold_left(b: &BiorderedSet, c: &ComplementMap, items: &[usize]) -> Result<usize> {
    let mut acc = items[0];
    for &x in &items[1..] {
        acc = oplus(b, c, acc, x, None)?.h;
    }
    Ok(acc)
}

fn fold_right(b: &BiorderedSet, c: &ComplementMap, items: &[usize]) -> Result<usize> {
    let mut acc = *items.last().expect("nonempty");
    for &x in items[..items.len() - 1].iter().rev() {
        acc = oplus(b, c, x, acc, None)?.h;
    }
    Ok(acc)
}

/// Iterated `⊕` of a pairwise orthogonal family.
///
/// For up to four members every ordering and bracketing is evaluated;
/// beyond that, 24 seeded orderings with both left and right folds.
pub fn oplus_chain(b: &BiorderedSet, c: &ComplementMap, family: &[usize], seed: u64) -> Result<usize> {
    let Some(&first) = family.first() else {
        return Err(Error::Precondition("empty family".into()));
    };
    let zero = verify_e1(b).1.ok_or_else(|| Error::Precondition("no zero idempotent".into()))?;
    if let Err((x, y)) = pairwise_orthogonal(b, zero, family) {
        return Err(Error::Precondition(format!(
            "M({}, {}) is not {{0}}",
            b.element(x),
            b.element(y)
        )));
    }
    if family.len() == 1 {
        return Ok(first);
    }
    let value = fold_left(b, c, family)?;
    let mut values = Vec::new();
    if family.len() <= 4 {
        for order in family.iter().copied().permutations(family.len()) {
            values.extend(all_bracketings(b, c, &order)?);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..24 {
            let mut order = family.to_vec();
            order.shuffle(&mut rng);
            values.push(fold_left(b, c, &order)?);
            values.push(fold_right(b, c, &order)?);
        }
    }
    if let Some(&other) = values.iter().find(|&&v| v != value) {
        return Err(Error::Precondition(format!(
            "chain is order dependent: {} vs {}",
            b.element(value),
            b.element(other)
        )));
    }
    Ok(value)
}

/// A seeded random pairwise orthogonal family of nonzero idempotents.
pub fn random_orthogonal_family(
    b: &BiorderedSet,
    zero: usize,
    rng: &mut ChaCha8Rng,
    max_len: usize,
) -> Vec<usize> {
    let target = rng.gen_range(1..=max_len.max(1));
    let mut candidates: Vec<usize> = (0..b.size()).filter(|&p| p != zero).collect();
    candidates.shuffle(rng);
    let mut family: Vec<usize> = Vec::new();
    for x in candidates {
        if family.len() == target {
            break;
        }
        if family
            .iter()
            .all(|&y| b.m_set(x, y).is_zero_set(zero) && b.m_set(y, x).is_zero_set(zero))
        {
            family.push(x);
        }
    }
    family
}
