//! Multiplicative semigroup layer: idempotents, generalized inverses,
//! annihilators, principal one-sided ideals and the strongly regular Baer
//! property.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::report::CheckRecord;
use crate::ring::{Arith, RingTable, EXHAUSTIVE_TRIPLE_LIMIT, TABLE_THRESHOLD};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct FiniteSemigroup {
    order: u32,
    product: Arith,
    zero: Option<u32>,
    identity: Option<u32>,
    idempotents: Vec<u32>,
}

/// `inverse[x]` is a generalized inverse of `x`: `x x'' x = x` and `x'' x x'' = x''`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityWitness {
    inverse: Vec<u32>,
}

impl RegularityWitness {
    pub fn get(&self, x: u32) -> u32 {
        self.inverse[x as usize]
    }

    pub fn len(&self) -> usize {
        self.inverse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inverse.is_empty()
    }

    /// Both defining equations, for every element.
    pub fn holds_in(&self, s: &FiniteSemigroup) -> bool {
        self.inverse.iter().enumerate().all(|(x, &y)| {
            let x = x as u32;
            s.mul(s.mul(x, y), x) == x && s.mul(s.mul(y, x), y) == y
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regularity {
    Regular(RegularityWitness),
    /// Least element with no inner inverse.
    Irregular { x: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum BaerMode {
    Full,
    Sampled { samples: usize, seed: u64 },
}

impl FiniteSemigroup {
    pub fn from_ring(ring: &RingTable) -> Self {
        Self::from_arith(
            ring.order(),
            ring.multiplication().clone(),
            ring.zero_index(),
            ring.one_index(),
        )
    }

    /// Raw multiplication table; zero and identity are detected.
    pub fn from_table(order: u32, table: Vec<u32>) -> Result<Self> {
        Ok(Self::from_ring(&RingTable::from_tables(order, table, None)?))
    }

    pub fn from_arith(order: u32, product: Arith, zero: Option<u32>, identity: Option<u32>) -> Self {
        let idempotents = (0..order)
            .into_par_iter()
            .filter(|&x| product.apply(x, x) == x)
            .collect();
        Self {
            order,
            product,
            zero,
            identity,
            idempotents,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn zero(&self) -> Option<u32> {
        self.zero
    }

    pub fn identity(&self) -> Option<u32> {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.product.apply(a, b)
    }

    /// Fixed points of squaring, ascending.
    pub fn idempotents(&self) -> &[u32] {
        &self.idempotents
    }

    pub fn is_idempotent(&self, x: u32) -> bool {
        self.mul(x, x) == x
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.order
    }

    /// Exhaustive up to [`EXHAUSTIVE_TRIPLE_LIMIT`], seeded triples beyond.
    pub fn check_associativity(&self, seed: u64, samples: usize) -> CheckRecord {
        let mut rec = CheckRecord::new("associativity", "(xy)z = x(yz)");
        let n = self.order;
        let bad = |&(a, b, c): &(u32, u32, u32)| self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c));
        let failures: Vec<(u32, u32, u32)> = if n <= EXHAUSTIVE_TRIPLE_LIMIT {
            (0..n)
                .into_par_iter()
                .flat_map_iter(|a| {
                    (0..n)
                        .flat_map(move |b| (0..n).map(move |c| (a, b, c)))
                        .filter(bad)
                        .collect::<Vec<_>>()
                })
                .collect()
        } else {
            rec.note(format!("sampled {samples} triples with seed {seed}"));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let triples: Vec<(u32, u32, u32)> = (0..samples)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect();
            triples.into_par_iter().filter(bad).collect()
        };
        for (a, b, c) in failures {
            rec.violation(json!({ "x": a, "y": b, "z": c }));
        }
        rec
    }

    /// An inner inverse `x'` with `x x' x = x`: `x` itself when idempotent,
    /// otherwise the least index that works.
    pub fn inner_inverse(&self, x: u32) -> Option<u32> {
        if self.is_idempotent(x) {
            return Some(x);
        }
        (0..self.order).find(|&y| self.mul(self.mul(x, y), x) == x)
    }

    /// Generalized inverse `x'' = x' x x'` built from [`Self::inner_inverse`].
    pub fn generalized_inverse(&self, x: u32) -> Option<u32> {
        self.inner_inverse(x)
            .map(|y| self.mul(self.mul(y, x), y))
    }

    pub fn regularity_witnesses(&self) -> Regularity {
        let found: Vec<Option<u32>> = (0..self.order)
            .into_par_iter()
            .map(|x| self.generalized_inverse(x))
            .collect();
        match found.iter().position(Option::is_none) {
            Some(x) => Regularity::Irregular { x: x as u32 },
            None => Regularity::Regular(RegularityWitness {
                inverse: found.into_iter().flatten().collect(),
            }),
        }
    }

    pub fn check_regular(&self) -> CheckRecord {
        let mut rec = CheckRecord::new(
            "semigroup-regular",
            "every x has x' with x x' x = x",
        );
        match self.regularity_witnesses() {
            Regularity::Regular(w) => {
                debug_assert!(w.holds_in(self));
                for x in (0..self.order).take(8) {
                    rec.witness(json!({ "x": x, "generalized_inverse": w.get(x) }));
                }
            }
            Regularity::Irregular { x } => {
                rec.violation(json!({ "x": x, "reason": "no x' with x x' x = x" }));
            }
        }
        rec
    }

    pub fn annihilator(&self, x: u32, side: Side) -> Result<BitSet> {
        let zero = self.zero.ok_or(Error::MissingZero)?;
        let n = self.order;
        let mut out = BitSet::new(n as usize);
        for y in 0..n {
            let p = match side {
                Side::Left => self.mul(y, x),
                Side::Right => self.mul(x, y),
            };
            if p == zero {
                out.insert(y as usize);
            }
        }
        Ok(out)
    }

    /// `S x` (left) or `x S` (right).
    pub fn principal_ideal(&self, x: u32, side: Side) -> BitSet {
        let n = self.order;
        let mut out = BitSet::new(n as usize);
        for s in 0..n {
            let p = match side {
                Side::Left => self.mul(s, x),
                Side::Right => self.mul(x, s),
            };
            out.insert(p as usize);
        }
        out
    }

    /// Idempotent `g` in `set` above every other idempotent of `set`:
    /// `f g = f` on the left side, `g f = f` on the right side.
    fn greatest_idempotent_in(&self, set: &BitSet, side: Side) -> Option<u32> {
        let below = |f: u32, g: u32| match side {
            Side::Left => self.mul(f, g) == f,
            Side::Right => self.mul(g, f) == f,
        };
        let members: Vec<u32> = self
            .idempotents
            .iter()
            .copied()
            .filter(|&f| set.contains(f as usize))
            .collect();
        let mut candidate = *members.first()?;
        for &f in &members {
            if !below(f, candidate) {
                candidate = f;
            }
        }
        members
            .iter()
            .all(|&f| below(f, candidate))
            .then_some(candidate)
    }

    /// The Baer conditions at one element `x`, on one side.
    fn baer_at(&self, x: u32, side: Side) -> std::result::Result<BaerCertificate, serde_json::Value> {
        let side_name = match side {
            Side::Left => "left",
            Side::Right => "right",
        };
        // annihilator of x is a principal ideal
        let ann = self.annihilator(x, side).expect("zero checked by caller");
        let generator = self
            .greatest_idempotent_in(&ann, side)
            .filter(|&g| self.principal_ideal(g, side) == ann)
            .or_else(|| self.search_generator(&ann, side));
        let Some(generator) = generator else {
            return Err(json!({
                "x": x, "side": side_name,
                "failure": "annihilator is not a principal ideal",
                "annihilator": ann,
            }));
        };
        // principal ideal of x is an annihilator; its annihilated element lives
        // in the opposite-side annihilator of x
        let ideal = self.principal_ideal(x, side);
        let other = match side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        };
        let opposite = self.annihilator(x, other).expect("zero checked by caller");
        let annihilated = self
            .greatest_idempotent_in(&opposite, other)
            .filter(|&h| self.annihilator(h, side).ok().as_ref() == Some(&ideal))
            .or_else(|| self.search_annihilated(&ideal, side));
        let Some(annihilated) = annihilated else {
            return Err(json!({
                "x": x, "side": side_name,
                "failure": "principal ideal is not an annihilator",
                "ideal": ideal,
            }));
        };
        Ok(BaerCertificate {
            x,
            side,
            generator,
            annihilated,
        })
    }

    fn search_generator(&self, set: &BitSet, side: Side) -> Option<u32> {
        if self.order > TABLE_THRESHOLD {
            return None;
        }
        (0..self.order).find(|&y| &self.principal_ideal(y, side) == set)
    }

    fn search_annihilated(&self, set: &BitSet, side: Side) -> Option<u32> {
        if self.order > TABLE_THRESHOLD {
            return None;
        }
        (0..self.order).find(|&y| self.annihilator(y, side).ok().as_ref() == Some(set))
    }

    /// Strongly regular Baer property: left annihilators are exactly the
    /// principal left ideals, and dually on the right.
    ///
    /// For each scanned `x` the check exhibits a generator `g` with
    /// `ann(x) = S g` and an element `h` with `S x = ann(h)` (and the mirror
    /// images). Full mode scans every element; sampled mode scans all
    /// idempotents plus seeded random elements.
    pub fn baer_check(&self, mode: BaerMode) -> CheckRecord {
        let mut rec = CheckRecord::new(
            "baer",
            "left (right) annihilators coincide with principal left (right) ideals",
        );
        if self.zero.is_none() {
            rec.violation(json!({ "failure": "semigroup has no zero" }));
            return rec;
        }
        let scan: Vec<u32> = match mode {
            BaerMode::Full => (0..self.order).collect(),
            BaerMode::Sampled { samples, seed } => {
                rec.note(format!(
                    "sampled mode: {} idempotents plus {samples} random elements, seed {seed}",
                    self.idempotents.len()
                ));
                sample_with(self.order, &self.idempotents, samples, seed)
            }
        };
        let results: Vec<_> = scan
            .par_iter()
            .flat_map_iter(|&x| [Side::Left, Side::Right].map(|side| self.baer_at(x, side)))
            .collect();
        let mut certified = 0u64;
        for r in results {
            match r {
                Ok(cert) => {
                    certified += 1;
                    rec.witness(serde_json::to_value(cert).expect("certificate serializes"));
                }
                Err(cx) => rec.violation(cx),
            }
        }
        rec.note(format!("{certified} one-sided element certificates"));
        rec
    }

    /// `lann(x) = lann(x x')` and `rann(x) = rann(x' x)` for the inner inverse
    /// `x'`: the reduction of an element's annihilator to an idempotent's.
    pub fn check_annihilator_reduction(&self, scan: &[u32]) -> CheckRecord {
        let mut rec = CheckRecord::new(
            "annihilator-reduction",
            "lann(x) = lann(x x') and rann(x) = rann(x' x)",
        );
        if self.zero.is_none() {
            return rec.skipped("semigroup has no zero");
        }
        let bad: Vec<serde_json::Value> = scan
            .par_iter()
            .filter_map(|&x| {
                let Some(y) = self.inner_inverse(x) else {
                    return Some(json!({ "x": x, "failure": "x is not regular" }));
                };
                let e = self.mul(x, y);
                let f = self.mul(y, x);
                let left = self.annihilator(x, Side::Left).ok()? == self.annihilator(e, Side::Left).ok()?;
                let right = self.annihilator(x, Side::Right).ok()? == self.annihilator(f, Side::Right).ok()?;
                (!(left && right)).then(|| json!({ "x": x, "xx'": e, "x'x": f, "left": left, "right": right }))
            })
            .collect();
        for cx in bad {
            rec.violation(cx);
        }
        rec.note(format!("{} elements scanned", scan.len()));
        rec
    }

    /// For idempotent `e` with complement `c`: `lann(e) = S c` and `rann(e) = c S`.
    pub fn check_annihilator_generators(&self, pairs: &[(u32, u32)]) -> CheckRecord {
        let mut rec = CheckRecord::new(
            "annihilator-generators",
            "lann(e) = S e' and rann(e) = e' S for idempotent e",
        );
        if self.zero.is_none() {
            return rec.skipped("semigroup has no zero");
        }
        let bad: Vec<serde_json::Value> = pairs
            .par_iter()
            .filter_map(|&(e, c)| {
                let left = self.annihilator(e, Side::Left).ok()? == self.principal_ideal(c, Side::Left);
                let right = self.annihilator(e, Side::Right).ok()? == self.principal_ideal(c, Side::Right);
                (!(left && right)).then(|| json!({ "e": e, "complement": c, "left": left, "right": right }))
            })
            .collect();
        for cx in bad {
            rec.violation(cx);
        }
        rec.note(format!("{} idempotents checked", pairs.len()));
        rec
    }
}

#[derive(Clone, Debug, Serialize)]
struct BaerCertificate {
    x: u32,
    side: Side,
    /// `ann(x)` is the principal ideal generated by this element.
    generator: u32,
    /// The principal ideal of `x` is the annihilator of this element.
    annihilated: u32,
}

/// `always` plus `samples` seeded draws from `0..order`, sorted and deduplicated.
pub fn sample_with(order: u32, always: &[u32], samples: usize, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<u32> = always.to_vec();
    out.extend((0..samples).map(|_| rng.gen_range(0..order)));
    out.sort_unstable();
    out.dedup();
    out
}
