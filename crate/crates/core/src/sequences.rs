//! E-sequences: walks through idempotents whose consecutive members are
//! L- or R-related. `d`, `d_l`, `d_r` are shortest walk lengths (with `d_l`
//! and `d_r` fixing the first step). A step may repeat an element, so
//! `d(e, e) = d_l(e, e) = d_r(e, e) = 1`. Zero means "no walk".

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::biorder::BiorderedSet;
use crate::bits::{BitRelation, BitSet};
use crate::lattice::QuotientLattice;
use crate::report::CheckRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Step {
    L,
    R,
}

/// L and R as bit relations over idempotent positions.
#[derive(Clone, Debug)]
pub struct ESequenceGraph {
    l: BitRelation,
    r: BitRelation,
}

impl ESequenceGraph {
    pub fn new(b: &BiorderedSet) -> Self {
        let l = b.omega_l().intersection(&b.omega_l().transpose());
        let r = b.omega_r().intersection(&b.omega_r().transpose());
        Self { l, r }
    }

    pub fn size(&self) -> usize {
        self.l.size()
    }

    pub fn l(&self) -> &BitRelation {
        &self.l
    }

    pub fn r(&self) -> &BitRelation {
        &self.r
    }

    pub fn relation(&self, step: Step) -> &BitRelation {
        match step {
            Step::L => &self.l,
            Step::R => &self.r,
        }
    }

    pub fn check_equivalences(&self, b: &BiorderedSet) -> CheckRecord {
        let mut rec = CheckRecord::new("l-r-equivalences", "L and R are equivalences");
        for (name, rel) in [("L", &self.l), ("R", &self.r)] {
            if let Some(a) = rel.first_irreflexive() {
                rec.violation(json!({ "relation": name, "irreflexive_at": b.element(a) }));
            }
            if let Some((x, y)) = rel.first_unsymmetric_pair() {
                rec.violation(json!({ "relation": name, "unsymmetric": [b.element(x), b.element(y)] }));
            }
            if let Some((x, y, z)) = rel.first_intransitive() {
                rec.violation(json!({ "relation": name, "intransitive": [b.element(x), b.element(y), b.element(z)] }));
            }
        }
        rec
    }

    fn neighbours(&self, frontier: &BitSet) -> BitSet {
        let mut next = BitSet::new(self.size());
        for v in frontier.iter() {
            next.union_with(self.l.row(v));
            next.union_with(self.r.row(v));
        }
        next
    }

    /// Layered expansion from `e`: entry `v` of the result is the shortest
    /// walk length to `v`, 0 when unreachable. `None` for `first` allows
    /// either relation on the first step. Returns `true` when a distance
    /// exceeded 255 and was left at 0.
    pub fn distances_from(&self, e: usize, first: Option<Step>) -> (Vec<u8>, bool) {
        let k = self.size();
        let mut dist = vec![0u8; k];
        let mut frontier = match first {
            Some(step) => self.relation(step).row(e).clone(),
            None => {
                let mut s = self.l.row(e).clone();
                s.union_with(self.r.row(e));
                s
            }
        };
        let mut visited = frontier.clone();
        let mut depth: u32 = 1;
        while !frontier.is_empty() {
            if depth > u8::MAX as u32 {
                return (dist, true);
            }
            for v in frontier.iter() {
                dist[v] = depth as u8;
            }
            let mut next = self.neighbours(&frontier);
            next.difference_with(&visited);
            visited.union_with(&next);
            frontier = next;
            depth += 1;
        }
        (dist, false)
    }

    /// As [`Self::distances_from`] with a fixed first step, but consecutive
    /// steps must alternate between L and R.
    pub fn alternating_distances_from(&self, e: usize, first: Step) -> Vec<u8> {
        let k = self.size();
        let mut dist = vec![0u8; k];
        let mut visited = [BitSet::new(k), BitSet::new(k)];
        let slot = |s: Step| match s {
            Step::L => 0,
            Step::R => 1,
        };
        let flip = |s: Step| match s {
            Step::L => Step::R,
            Step::R => Step::L,
        };
        let mut frontier = self.relation(first).row(e).clone();
        let mut last = first;
        visited[slot(last)] = frontier.clone();
        let mut depth: u32 = 1;
        while !frontier.is_empty() && depth <= u8::MAX as u32 {
            for v in frontier.iter() {
                if dist[v] == 0 {
                    dist[v] = depth as u8;
                }
            }
            let step = flip(last);
            let mut next = BitSet::new(k);
            for v in frontier.iter() {
                next.union_with(self.relation(step).row(v));
            }
            next.difference_with(&visited[slot(step)]);
            visited[slot(step)].union_with(&next);
            frontier = next;
            last = step;
            depth += 1;
        }
        dist
    }
}

pub fn distance(g: &ESequenceGraph, e: usize, f: usize) -> u8 {
    g.distances_from(e, None).0[f]
}

pub fn distance_sided(g: &ESequenceGraph, e: usize, f: usize, first: Step) -> u8 {
    g.distances_from(e, Some(first)).0[f]
}

/// All-pairs `d`, `d_l`, `d_r`, row-major over positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceTable {
    pub size: usize,
    pub d: Vec<u8>,
    pub d_l: Vec<u8>,
    pub d_r: Vec<u8>,
    pub overflow: bool,
}

impl DistanceTable {
    pub fn compute(g: &ESequenceGraph) -> Self {
        let k = g.size();
        let rows: Vec<_> = (0..k)
            .into_par_iter()
            .map(|e| {
                let (d, o1) = g.distances_from(e, None);
                let (dl, o2) = g.distances_from(e, Some(Step::L));
                let (dr, o3) = g.distances_from(e, Some(Step::R));
                (d, dl, dr, o1 || o2 || o3)
            })
            .collect();
        let mut table = Self {
            size: k,
            d: Vec::with_capacity(k * k),
            d_l: Vec::with_capacity(k * k),
            d_r: Vec::with_capacity(k * k),
            overflow: false,
        };
        for (d, dl, dr, o) in rows {
            table.d.extend(d);
            table.d_l.extend(dl);
            table.d_r.extend(dr);
            table.overflow |= o;
        }
        table
    }

    #[inline]
    pub fn d(&self, e: usize, f: usize) -> u8 {
        self.d[e * self.size + f]
    }

    #[inline]
    pub fn d_l(&self, e: usize, f: usize) -> u8 {
        self.d_l[e * self.size + f]
    }

    #[inline]
    pub fn d_r(&self, e: usize, f: usize) -> u8 {
        self.d_r[e * self.size + f]
    }

    /// Symmetry of `d`, `d = min(nonzero d_l, d_r)`, and the triangle inequality.
    pub fn check_properties(&self, b: &BiorderedSet) -> CheckRecord {
        let mut rec = CheckRecord::new(
            "distance-properties",
            "d symmetric; d = least nonzero of d_l, d_r; triangle inequality",
        );
        if self.overflow {
            rec.violation(json!({ "failure": "distance above 255" }));
        }
        let k = self.size;
        let bad: Vec<serde_json::Value> = (0..k)
            .into_par_iter()
            .flat_map_iter(|e| {
                let mut out = Vec::new();
                for f in 0..k {
                    let d = self.d(e, f);
                    if d != self.d(f, e) {
                        out.push(json!({ "property": "symmetry", "e": b.element(e), "f": b.element(f) }));
                    }
                    let sided = [self.d_l(e, f), self.d_r(e, f)]
                        .into_iter()
                        .filter(|&x| x > 0)
                        .min()
                        .unwrap_or(0);
                    if d != sided {
                        out.push(json!({ "property": "min of sided", "e": b.element(e), "f": b.element(f), "d": d, "d_l": self.d_l(e, f), "d_r": self.d_r(e, f) }));
                    }
                    if d == 0 {
                        continue;
                    }
                    for g in 0..k {
                        let (a, c) = (self.d(f, g), self.d(e, g));
                        if a > 0 && c > 0 && c as u16 > d as u16 + a as u16 {
                            out.push(json!({ "property": "triangle", "e": b.element(e), "f": b.element(f), "g": b.element(g) }));
                        }
                    }
                }
                out
            })
            .collect();
        for cx in bad {
            rec.violation(cx);
        }
        rec
    }

    /// Whether forcing strict L/R alternation changes any `d_l` or `d_r`.
    pub fn check_alternation(&self, g: &ESequenceGraph, b: &BiorderedSet) -> CheckRecord {
        let mut rec = CheckRecord::new(
            "strict-alternation",
            "shortest E-sequences need not repeat a relation: strict alternation gives the same d_l, d_r",
        );
        let k = self.size;
        let bad: Vec<serde_json::Value> = (0..k)
            .into_par_iter()
            .flat_map_iter(|e| {
                let al = g.alternating_distances_from(e, Step::L);
                let ar = g.alternating_distances_from(e, Step::R);
                (0..k)
                    .filter(|&f| al[f] != self.d_l(e, f) || ar[f] != self.d_r(e, f))
                    .map(|f| json!({ "e": b.element(e), "f": b.element(f), "alternating": [al[f], ar[f]], "free": [self.d_l(e, f), self.d_r(e, f)] }))
                    .collect::<Vec<_>>()
            })
            .collect();
        for cx in bad {
            rec.violation(cx);
        }
        rec
    }

    pub fn to_json(&self, b: &BiorderedSet) -> serde_json::Value {
        let k = self.size;
        let rows = |m: &[u8]| -> Vec<Vec<u8>> { (0..k).map(|e| m[e * k..(e + 1) * k].to_vec()).collect() };
        json!({
            "idempotents": b.elements(),
            "d": rows(&self.d),
            "d_l": rows(&self.d_l),
            "d_r": rows(&self.d_r),
        })
    }
}

/// For every ordered pair: L(e) and L(f) are perspective in E/L exactly when
/// `1 ≤ d_l(e, f) ≤ 3`.
pub fn verify_idpersp(b: &BiorderedSet, left: &QuotientLattice, table: &DistanceTable) -> CheckRecord {
    let mut rec = CheckRecord::new(
        "perspectivity-distance",
        "L(e), L(f) have a common complement iff 1 ≤ d_l(e, f) ≤ 3",
    );
    if !left.is_lattice() {
        rec.violation(json!({ "failure": "E/L is not a lattice" }));
        return rec;
    }
    let classes = left.size();
    let persp: Vec<Option<usize>> = (0..classes * classes)
        .into_par_iter()
        .map(|i| left.perspective(i / classes, i % classes))
        .collect();
    let k = b.size();
    let mut perspective_pairs = 0u64;
    for e in 0..k {
        for f in 0..k {
            let (a, c) = (left.class_of(e), left.class_of(f));
            let is_persp = persp[a * classes + c].is_some();
            let dl = table.d_l(e, f);
            perspective_pairs += is_persp as u64;
            if is_persp != (1..=3).contains(&dl) {
                rec.violation(json!({
                    "e": b.element(e), "f": b.element(f),
                    "perspective": is_persp, "d_l": dl,
                }));
            }
        }
    }
    rec.note(format!("{perspective_pairs} of {} ordered pairs are perspective", k * k));
    rec
}
