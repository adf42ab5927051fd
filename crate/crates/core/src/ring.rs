//! Finite rings with unity: matrix rings over prime fields, integers modulo
//! `m`, and raw tables read from CSV. Elements are dense `u32` indices.

use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::matrix::{is_prime, MatrixShape};
use crate::report::CheckRecord;

/// Orders up to this size get a full multiplication table.
pub const TABLE_THRESHOLD: u32 = 4096;

/// Orders up to this size get exhaustive triple scans (associativity,
/// distributivity); larger ones are sampled.
pub const EXHAUSTIVE_TRIPLE_LIMIT: u32 = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_order: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_order: 1 << 20 }
    }
}

impl Budget {
    fn admit(&self, order: u128) -> Result<u32> {
        if order > self.max_order as u128 || order > u32::MAX as u128 {
            return Err(Error::Budget {
                order,
                limit: self.max_order,
            });
        }
        Ok(order as u32)
    }
}

/// A binary operation on `0..order`, either tabulated or computed.
#[derive(Clone, Debug)]
pub enum Arith {
    Table { order: u32, data: Arc<[u32]> },
    ModMul(u32),
    ModAdd(u32),
    MatMul(MatrixShape),
    MatAdd(MatrixShape),
}

impl Arith {
    #[inline]
    pub fn apply(&self, a: u32, b: u32) -> u32 {
        match self {
            Arith::Table { order, data } => data[a as usize * *order as usize + b as usize],
            Arith::ModMul(m) => ((a as u64 * b as u64) % *m as u64) as u32,
            Arith::ModAdd(m) => ((a as u64 + b as u64) % *m as u64) as u32,
            Arith::MatMul(shape) => shape.mul(a, b),
            Arith::MatAdd(shape) => shape.add(a, b),
        }
    }

    pub fn tabulate(&self, order: u32) -> Arith {
        if self.is_tabulated() {
            return self.clone();
        }
        let data: Vec<u32> = (0..order)
            .flat_map(|a| (0..order).map(move |b| (a, b)))
            .map(|(a, b)| self.apply(a, b))
            .collect();
        Arith::Table {
            order,
            data: data.into(),
        }
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self, Arith::Table { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RingKind {
    GfMatrix { n: usize, q: u32 },
    Zmod { m: u32, squarefree: bool },
    RawTable,
}

impl RingKind {
    pub fn name(&self) -> &'static str {
        match self {
            RingKind::GfMatrix { .. } => "gfmatrix",
            RingKind::Zmod { .. } => "zmod",
            RingKind::RawTable => "table",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RingTable {
    kind: RingKind,
    order: u32,
    mul: Arith,
    add: Option<Arith>,
    zero: Option<u32>,
    one: Option<u32>,
}

pub fn build_matrix_ring(n: usize, q: u32, budget: &Budget) -> Result<RingTable> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let shape = MatrixShape::new(n, q);
    let order = budget.admit(shape.order())?;
    let mut mul = Arith::MatMul(shape);
    let mut add = Arith::MatAdd(shape);
    if order <= TABLE_THRESHOLD {
        mul = mul.tabulate(order);
        add = add.tabulate(order);
    }
    Ok(RingTable {
        kind: RingKind::GfMatrix { n, q },
        order,
        mul,
        add: Some(add),
        zero: Some(0),
        one: Some(shape.identity()),
    })
}

pub fn is_squarefree(m: u32) -> bool {
    let mut rest = m;
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= rest as u64 {
        if rest % d == 0 {
            rest /= d;
            if rest % d == 0 {
                return false;
            }
        }
        d += 1;
    }
    true
}

pub fn build_modular_ring(m: u32, budget: &Budget) -> Result<RingTable> {
    if m < 2 {
        return Err(Error::ModulusTooSmall(m));
    }
    let order = budget.admit(m as u128)?;
    let mut mul = Arith::ModMul(m);
    let mut add = Arith::ModAdd(m);
    if order <= TABLE_THRESHOLD {
        mul = mul.tabulate(order);
        add = add.tabulate(order);
    }
    Ok(RingTable {
        kind: RingKind::Zmod {
            m,
            squarefree: is_squarefree(m),
        },
        order,
        mul,
        add: Some(add),
        zero: Some(0),
        one: Some(1),
    })
}

impl RingTable {
    /// Raw structure from explicit tables. Without an addition table this is
    /// just a semigroup; zero and identity are detected from `mul`.
    pub fn from_tables(order: u32, mul: Vec<u32>, add: Option<Vec<u32>>) -> Result<Self> {
        let cells = order as usize * order as usize;
        if order == 0 {
            return Err(Error::Parse("order must be positive".into()));
        }
        for table in std::iter::once(&mul).chain(add.as_ref()) {
            if table.len() != cells {
                return Err(Error::Parse(format!(
                    "table has {} cells, expected {}",
                    table.len(),
                    cells
                )));
            }
            if let Some(&bad) = table.iter().find(|&&v| v >= order) {
                return Err(Error::OutOfRange {
                    index: bad as u64,
                    order,
                });
            }
        }
        let mul = Arith::Table {
            order,
            data: mul.into(),
        };
        let zero = (0..order).find(|&z| (0..order).all(|x| mul.apply(z, x) == z && mul.apply(x, z) == z));
        let one = (0..order).find(|&u| (0..order).all(|x| mul.apply(u, x) == x && mul.apply(x, u) == x));
        let add = add.map(|data| Arith::Table {
            order,
            data: data.into(),
        });
        Ok(Self {
            kind: RingKind::RawTable,
            order,
            mul,
            add,
            zero,
            one,
        })
    }

    /// CSV layout: a line holding the order `N`, then `N` rows of `N`
    /// indices for multiplication, then optionally `N` more rows for addition.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut records = Vec::new();
        for rec in csv.records() {
            let rec = rec?;
            if rec.iter().all(str::is_empty) {
                continue;
            }
            let row = rec
                .iter()
                .filter(|f| !f.is_empty())
                .map(|f| {
                    f.parse::<u32>()
                        .map_err(|e| Error::Parse(format!("bad entry {f:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            records.push(row);
        }
        let (header, body) = records
            .split_first()
            .ok_or_else(|| Error::Parse("empty table file".into()))?;
        let order = match header.as_slice() {
            [n] => *n,
            _ => return Err(Error::Parse("first line must hold the order".into())),
        };
        let n = order as usize;
        if body.len() != n && body.len() != 2 * n {
            return Err(Error::Parse(format!(
                "expected {n} or {} table rows, found {}",
                2 * n,
                body.len()
            )));
        }
        if let Some(row) = body.iter().find(|r| r.len() != n) {
            return Err(Error::Parse(format!(
                "row has {} entries, expected {n}",
                row.len()
            )));
        }
        let mul: Vec<u32> = body[..n].iter().flatten().copied().collect();
        let add = (body.len() == 2 * n).then(|| body[n..].iter().flatten().copied().collect());
        Self::from_tables(order, mul, add)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        Self::from_csv(std::fs::File::open(path)?)
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn zero_index(&self) -> Option<u32> {
        self.zero
    }

    pub fn one_index(&self) -> Option<u32> {
        self.one
    }

    pub fn has_addition(&self) -> bool {
        self.add.is_some()
    }

    pub fn is_tabulated(&self) -> bool {
        self.mul.is_tabulated()
    }

    pub fn multiplication(&self) -> &Arith {
        &self.mul
    }

    pub fn matrix_shape(&self) -> Option<MatrixShape> {
        match self.kind {
            RingKind::GfMatrix { n, q } => Some(MatrixShape::new(n, q)),
            _ => None,
        }
    }

    /// `Some(squarefree)` for `Z_m`; regularity is expected only when true.
    pub fn squarefree(&self) -> Option<bool> {
        match self.kind {
            RingKind::Zmod { squarefree, .. } => Some(squarefree),
            _ => None,
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul.apply(a, b)
    }

    pub fn add(&self, a: u32, b: u32) -> Result<u32> {
        self.add
            .as_ref()
            .map(|add| add.apply(a, b))
            .ok_or(Error::MissingAddition)
    }

    pub fn neg(&self, a: u32) -> Result<u32> {
        let add = self.add.as_ref().ok_or(Error::MissingAddition)?;
        let zero = self.zero.ok_or(Error::MissingZero)?;
        match &self.kind {
            RingKind::Zmod { m, .. } => Ok((m - a % m) % m),
            RingKind::GfMatrix { n, q } => Ok(MatrixShape::new(*n, *q).neg(a)),
            RingKind::RawTable => (0..self.order)
                .find(|&b| add.apply(a, b) == zero)
                .ok_or_else(|| Error::Parse(format!("element {a} has no additive inverse"))),
        }
    }

    pub fn is_idempotent(&self, e: u32) -> bool {
        self.mul(e, e) == e
    }

    fn check_index(&self, x: u32) -> Result<()> {
        if x >= self.order {
            return Err(Error::OutOfRange {
                index: x as u64,
                order: self.order,
            });
        }
        Ok(())
    }

    /// Exhaustive pair checks up to [`TABLE_THRESHOLD`], exhaustive triple
    /// checks up to [`EXHAUSTIVE_TRIPLE_LIMIT`], seeded samples beyond.
    pub fn check_axioms(&self, seed: u64, samples: usize) -> CheckRecord {
        let mut rec = CheckRecord::new(
            "ring-axioms",
            "ring with unity: abelian group under +, associative * with 1, distributive",
        );
        let Some(add) = self.add.as_ref() else {
            return rec.skipped("no addition table; structure is treated as a semigroup only");
        };
        let (Some(zero), Some(one)) = (self.zero, self.one) else {
            rec.violation(json!({ "missing": "multiplicative zero or identity" }));
            return rec;
        };
        let n = self.order;
        let pairs: Box<dyn Iterator<Item = (u32, u32)>> = if n <= TABLE_THRESHOLD {
            Box::new((0..n).flat_map(move |a| (0..n).map(move |b| (a, b))))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Box::new((0..samples).map(move |_| (rng.gen_range(0..n), rng.gen_range(0..n))))
        };
        for (a, b) in pairs {
            if add.apply(a, b) != add.apply(b, a) {
                rec.violation(json!({ "law": "additive commutativity", "a": a, "b": b }));
            }
        }
        for a in self.index_sample(seed ^ 1, samples) {
            if add.apply(a, zero) != a {
                rec.violation(json!({ "law": "additive identity", "a": a }));
            }
            if self.mul(a, one) != a || self.mul(one, a) != a {
                rec.violation(json!({ "law": "multiplicative identity", "a": a }));
            }
            if !matches!(self.neg(a), Ok(b) if add.apply(a, b) == zero) {
                rec.violation(json!({ "law": "additive inverse", "a": a }));
            }
        }
        let triple_laws = |a: u32, b: u32, c: u32| -> Option<serde_json::Value> {
            let law = if add.apply(add.apply(a, b), c) != add.apply(a, add.apply(b, c)) {
                "additive associativity"
            } else if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                "multiplicative associativity"
            } else {
                let bc = add.apply(b, c);
                if self.mul(a, bc) != add.apply(self.mul(a, b), self.mul(a, c))
                    || self.mul(bc, a) != add.apply(self.mul(b, a), self.mul(c, a))
                {
                    "distributivity"
                } else {
                    return None;
                }
            };
            Some(json!({ "law": law, "a": a, "b": b, "c": c }))
        };
        let bad: Vec<serde_json::Value> = if n <= EXHAUSTIVE_TRIPLE_LIMIT {
            (0..n)
                .into_par_iter()
                .flat_map_iter(|a| {
                    (0..n)
                        .flat_map(move |b| (0..n).map(move |c| (b, c)))
                        .filter_map(move |(b, c)| triple_laws(a, b, c))
                        .collect::<Vec<_>>()
                })
                .collect()
        } else {
            rec.note(format!("triple laws sampled: {samples} triples, seed {seed}"));
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
            let triples: Vec<(u32, u32, u32)> = (0..samples)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect();
            triples.par_iter().filter_map(|&(a, b, c)| triple_laws(a, b, c)).collect()
        };
        for cx in bad {
            rec.violation(cx);
        }
        rec
    }

    fn index_sample(&self, seed: u64, samples: usize) -> Vec<u32> {
        if self.order <= TABLE_THRESHOLD {
            (0..self.order).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).map(|_| rng.gen_range(0..self.order)).collect()
        }
    }

    pub fn describe(&self) -> serde_json::Value {
        json!({
            "ring": self.kind,
            "order": self.order,
            "tabulated": self.is_tabulated(),
            "zero": self.zero,
            "one": self.one,
        })
    }
}

/// The diagonal matrix units `E_11, ..., E_nn`.
pub fn matrix_unit_idempotents(ring: &RingTable) -> Result<Vec<u32>> {
    let shape = ring.matrix_shape().ok_or(Error::WrongKind {
        operation: "matrix units",
        actual: ring.kind.name(),
    })?;
    Ok((0..shape.n).map(|i| shape.unit(i, i)).collect())
}

/// `1 - e` for an idempotent `e`.
pub fn complement_of(ring: &RingTable, e: u32) -> Result<u32> {
    ring.check_index(e)?;
    if !ring.is_idempotent(e) {
        return Err(Error::NotIdempotent(e));
    }
    let one = ring.one.ok_or(Error::MissingIdentity)?;
    ring.add(one, ring.neg(e)?)
}
