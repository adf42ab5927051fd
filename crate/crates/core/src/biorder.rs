//! The biordered set of idempotents of a finite semigroup.
//!
//! Idempotents are addressed by *position*: their rank in the ascending list
//! of idempotent element indices. All relations are bit relations over
//! positions.
//!
//! * `e ωl f` iff `ef = e`, and `e ωr f` iff `fe = e`; `ω = ωl ∩ ωr`.
//! * `M(e, f) = {g : ge = g, fg = g}`, i.e. `ωl(e) ∩ ωr(f)`.
//! * `g ≺ h` (relative to `e`, `f`) iff `eg ωr eh` and `gf ωl hf`.
//! * The sandwich set `S(e, f)` is the set of `≺`-greatest members of
//!   `M(e, f)`. In a regular semigroup it equals `{h : fhe = h, ehf = ef}`.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bits::{BitRelation, BitSet};
use crate::error::{Error, Result};
use crate::report::CheckRecord;
use crate::semigroup::FiniteSemigroup;

const NOT_IDEMPOTENT: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Greatest elements of the M-set under `≺`, using only basic products.
    Abstract,
    /// `{h : fhe = h, ehf = ef}` evaluated in the parent semigroup.
    Semigroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MSet {
    pub e: usize,
    pub f: usize,
    pub members: BitSet,
}

impl MSet {
    pub fn is_zero_set(&self, zero: usize) -> bool {
        self.members.is_singleton_of(zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SandwichSet {
    pub e: usize,
    pub f: usize,
    pub members: Vec<usize>,
    pub route: Route,
}

#[derive(Clone, Debug)]
pub struct BiorderedSet {
    semigroup: FiniteSemigroup,
    elements: Vec<u32>,
    position: Vec<u32>,
    /// `products[a * k + b]` is the element index of `e_a e_b`.
    products: Vec<u32>,
    omega_l: BitRelation,
    omega_r: BitRelation,
    omega_l_down: BitRelation,
    omega_r_down: BitRelation,
}

impl BiorderedSet {
    pub fn build(semigroup: &FiniteSemigroup) -> Result<Self> {
        let elements = semigroup.idempotents().to_vec();
        if elements.is_empty() {
            return Err(Error::NoIdempotents);
        }
        let k = elements.len();
        let mut position = vec![NOT_IDEMPOTENT; semigroup.order() as usize];
        for (p, &x) in elements.iter().enumerate() {
            position[x as usize] = p as u32;
        }
        let products: Vec<u32> = (0..k * k)
            .into_par_iter()
            .map(|i| semigroup.mul(elements[i / k], elements[i % k]))
            .collect();
        let omega_l = BitRelation::from_fn(k, |a, b| products[a * k + b] == elements[a]);
        let omega_r = BitRelation::from_fn(k, |a, b| products[b * k + a] == elements[a]);
        let set = Self {
            semigroup: semigroup.clone(),
            omega_l_down: omega_l.transpose(),
            omega_r_down: omega_r.transpose(),
            elements,
            position,
            products,
            omega_l,
            omega_r,
        };
        // basic products on ωl ∪ ωr (and their inverses) must stay idempotent
        for (a, b) in set.omega_l.pairs().chain(set.omega_r.pairs()) {
            if set.product_position(a, b).is_none() || set.product_position(b, a).is_none() {
                return Err(Error::BasicProductNotIdempotent(
                    set.elements[a],
                    set.elements[b],
                ));
            }
        }
        Ok(set)
    }

    pub fn semigroup(&self) -> &FiniteSemigroup {
        &self.semigroup
    }

    /// Number of idempotents.
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    #[inline]
    pub fn element(&self, p: usize) -> u32 {
        self.elements[p]
    }

    #[inline]
    pub fn position_of(&self, x: u32) -> Option<usize> {
        match self.position.get(x as usize) {
            Some(&p) if p != NOT_IDEMPOTENT => Some(p as usize),
            _ => None,
        }
    }

    /// Parent-semigroup product of two idempotents, as an element index.
    #[inline]
    pub fn product(&self, a: usize, b: usize) -> u32 {
        self.products[a * self.size() + b]
    }

    /// Position of `e_a e_b` when that product is idempotent.
    #[inline]
    pub fn product_position(&self, a: usize, b: usize) -> Option<usize> {
        self.position_of(self.product(a, b))
    }

    pub fn in_domain(&self, a: usize, b: usize) -> bool {
        self.omega_l.contains(a, b)
            || self.omega_r.contains(a, b)
            || self.omega_l.contains(b, a)
            || self.omega_r.contains(b, a)
    }

    /// The partial product: defined exactly on ωl ∪ ωr and their inverses.
    pub fn basic_product(&self, a: usize, b: usize) -> Option<usize> {
        if self.in_domain(a, b) {
            self.product_position(a, b)
        } else {
            None
        }
    }

    pub fn omega_l(&self) -> &BitRelation {
        &self.omega_l
    }

    pub fn omega_r(&self) -> &BitRelation {
        &self.omega_r
    }

    /// Row `e` of the result is `ωl(e) = {f : f ωl e}`.
    pub fn omega_l_down(&self) -> &BitRelation {
        &self.omega_l_down
    }

    pub fn omega_r_down(&self) -> &BitRelation {
        &self.omega_r_down
    }

    #[inline]
    pub fn le_l(&self, a: usize, b: usize) -> bool {
        self.omega_l.contains(a, b)
    }

    #[inline]
    pub fn le_r(&self, a: usize, b: usize) -> bool {
        self.omega_r.contains(a, b)
    }

    /// The natural partial order ω.
    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le_l(a, b) && self.le_r(a, b)
    }

    pub fn omega(&self) -> BitRelation {
        self.omega_l.intersection(&self.omega_r)
    }

    /// Position of the parent semigroup's zero, when it exists.
    pub fn zero_position(&self) -> Option<usize> {
        self.semigroup.zero().and_then(|z| self.position_of(z))
    }

    pub fn m_set(&self, e: usize, f: usize) -> MSet {
        MSet {
            e,
            f,
            members: self.omega_l_down.row(e).intersection(self.omega_r_down.row(f)),
        }
    }

    /// `ωl(e) ∩ ωr(e)`: the alternative reading of the M-set definition that
    /// ignores `f`. Kept only to report how it compares.
    pub fn m_set_single_argument(&self, e: usize) -> BitSet {
        self.omega_l_down.row(e).intersection(self.omega_r_down.row(e))
    }

    /// `g ≺ h` relative to `(e, f)`, for `g`, `h` in `M(e, f)`.
    pub fn precedes(&self, e: usize, f: usize, g: usize, h: usize) -> bool {
        match (
            self.basic_product(e, g),
            self.basic_product(e, h),
            self.basic_product(g, f),
            self.basic_product(h, f),
        ) {
            (Some(eg), Some(eh), Some(gf), Some(hf)) => self.le_r(eg, eh) && self.le_l(gf, hf),
            _ => false,
        }
    }

    pub fn sandwich_set(&self, e: usize, f: usize, route: Route) -> SandwichSet {
        let members = match route {
            Route::Abstract => self.sandwich_abstract(e, f),
            Route::Semigroup => self.sandwich_semigroup(e, f),
        };
        SandwichSet { e, f, members, route }
    }

    /// `h` is greatest iff `eh` lies in every `ωr`-up-set of `eg` and `hf`
    /// in every `ωl`-up-set of `gf`, over `g` in `M(e, f)`.
    fn sandwich_abstract(&self, e: usize, f: usize) -> Vec<usize> {
        let m = self.m_set(e, f).members;
        let k = self.size();
        let mut upper_r = BitSet::full(k);
        let mut upper_l = BitSet::full(k);
        let mut left_products = Vec::with_capacity(m.count());
        for g in m.iter() {
            let eg = self.basic_product(e, g).expect("M-set members are ωl-below e");
            let gf = self.basic_product(g, f).expect("M-set members are ωr-below f");
            upper_r.intersect_with(self.omega_r.row(eg));
            upper_l.intersect_with(self.omega_l.row(gf));
            left_products.push((g, eg, gf));
        }
        left_products
            .into_iter()
            .filter(|&(_, eh, hf)| upper_r.contains(eh) && upper_l.contains(hf))
            .map(|(h, _, _)| h)
            .collect()
    }

    fn sandwich_semigroup(&self, e: usize, f: usize) -> Vec<usize> {
        let s = &self.semigroup;
        let (ee, ff) = (self.elements[e], self.elements[f]);
        let ef = self.product(e, f);
        (0..self.size())
            .filter(|&h| {
                let hh = self.elements[h];
                s.mul(self.product(f, h), ee) == hh && s.mul(self.product(e, h), ff) == ef
            })
            .collect()
    }

    /// ωl and ωr are reflexive and transitive; ω is antisymmetric.
    pub fn check_quasi_orders(&self) -> CheckRecord {
        let mut rec = CheckRecord::new(
            "quasi-orders",
            "ωl and ωr are quasi-orders and ω = ωl ∩ ωr is a partial order",
        );
        for (name, rel) in [("ωl", &self.omega_l), ("ωr", &self.omega_r)] {
            if let Some(a) = rel.first_irreflexive() {
                rec.violation(json!({ "relation": name, "irreflexive_at": self.elements[a] }));
            }
            if !rel.compose(rel).is_subset(rel) {
                let (a, b, c) = rel.first_intransitive().expect("composition found a gap");
                rec.violation(json!({
                    "relation": name,
                    "intransitive": [self.elements[a], self.elements[b], self.elements[c]],
                }));
            }
        }
        if let Some((a, b)) = self.omega().first_asymmetric_pair() {
            rec.violation(json!({ "relation": "ω", "not_antisymmetric": [self.elements[a], self.elements[b]] }));
        }
        rec.witness(json!({
            "idempotents": self.size(),
            "ωl_pairs": self.omega_l.pair_count(),
            "ωr_pairs": self.omega_r.pair_count(),
        }));
        rec
    }

    /// Every sandwich set is nonempty (abstract route).
    pub fn check_regularity(&self) -> CheckRecord {
        let mut rec = CheckRecord::new("biorder-regular", "S(e, f) is nonempty for all e, f");
        let k = self.size();
        let empty: Vec<(usize, usize)> = (0..k)
            .into_par_iter()
            .flat_map_iter(|e| {
                (0..k)
                    .filter(move |&f| self.sandwich_abstract(e, f).is_empty())
                    .map(move |f| (e, f))
            })
            .collect();
        for (e, f) in empty {
            rec.violation(json!({ "e": self.elements[e], "f": self.elements[f] }));
        }
        rec.note(format!("{} ordered pairs scanned", k * k));
        rec
    }

    /// Abstract and semigroup routes give the same sandwich set for every
    /// ordered pair.
    pub fn check_route_agreement(&self) -> CheckRecord {
        let mut rec = CheckRecord::new(
            "sandwich-routes",
            "greatest elements of M(e, f) under ≺ equal {h : fhe = h, ehf = ef}",
        );
        let k = self.size();
        let bad: Vec<serde_json::Value> = (0..k)
            .into_par_iter()
            .flat_map_iter(|e| {
                (0..k).filter_map(move |f| {
                    let a = self.sandwich_abstract(e, f);
                    let s = self.sandwich_semigroup(e, f);
                    (a != s).then(|| {
                        json!({
                            "e": self.elements[e],
                            "f": self.elements[f],
                            "abstract": self.to_elements(&a),
                            "semigroup": self.to_elements(&s),
                        })
                    })
                })
            })
            .collect();
        for cx in bad {
            rec.violation(cx);
        }
        rec.note(format!("{} ordered pairs compared", k * k));
        rec
    }

    /// `ef = 0` iff `M(e, f) = {0}`, over all ordered pairs.
    pub fn check_zero_products(&self) -> CheckRecord {
        let mut rec = CheckRecord::new("zero-product-mset", "ef = 0 iff M(e, f) = {0}");
        let Some(zero) = self.zero_position() else {
            return rec.skipped("no zero idempotent");
        };
        let zero_elem = self.elements[zero];
        let k = self.size();
        let (bad, single_argument_breaks): (Vec<_>, Vec<usize>) = (0..k)
            .into_par_iter()
            .map(|e| {
                let mut bad = Vec::new();
                let mut alt = 0;
                let alt_zero = self.m_set_single_argument(e).is_singleton_of(zero);
                for f in 0..k {
                    let product_zero = self.product(e, f) == zero_elem;
                    if product_zero != self.m_set(e, f).is_zero_set(zero) {
                        bad.push((e, f));
                    }
                    if product_zero != alt_zero {
                        alt += 1;
                    }
                }
                (bad, alt)
            })
            .unzip();
        for (e, f) in bad.into_iter().flatten() {
            rec.violation(json!({ "e": self.elements[e], "f": self.elements[f] }));
        }
        rec.note(format!(
            "M(e, f) read as ωl(e) ∩ ωr(f); the reading ωl(e) ∩ ωr(e) would break the equivalence on {} of {} pairs",
            single_argument_breaks.iter().sum::<usize>(),
            k * k
        ));
        rec
    }

    pub fn to_elements(&self, positions: &[usize]) -> Vec<u32> {
        positions.iter().map(|&p| self.elements[p]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{build_matrix_ring, build_modular_ring, Budget};

    fn biorder_of_zmod(m: u32) -> BiorderedSet {
        let ring = build_modular_ring(m, &Budget::default()).unwrap();
        BiorderedSet::build(&FiniteSemigroup::from_ring(&ring)).unwrap()
    }

    fn biorder_of_matrices(n: usize, q: u32) -> BiorderedSet {
        let ring = build_matrix_ring(n, q, &Budget::default()).unwrap();
        BiorderedSet::build(&FiniteSemigroup::from_ring(&ring)).unwrap()
    }

    fn pos(b: &BiorderedSet, x: u32) -> usize {
        b.position_of(x).unwrap()
    }

    #[test]
    fn z6_relations() {
        let b = biorder_of_zmod(6);
        assert_eq!(b.elements(), &[0, 1, 3, 4]);
        assert_eq!(b.omega_l(), b.omega_r());
        assert!(b.le(pos(&b, 3), pos(&b, 1)));
        for e in 0..4 {
            assert!(b.le(pos(&b, 0), e));
        }
        assert!(b.check_quasi_orders().passed());
    }

    #[test]
    fn singleton_relations_are_identity() {
        let s = FiniteSemigroup::from_table(1, vec![0]).unwrap();
        let b = BiorderedSet::build(&s).unwrap();
        assert_eq!(b.omega_l(), &BitRelation::identity(1));
        assert_eq!(b.omega_r(), &BitRelation::identity(1));
        assert!(b.check_regularity().passed());
    }

    #[test]
    fn m2_order_shape() {
        let b = biorder_of_matrices(2, 2);
        assert_eq!(b.size(), 8);
        let zero = pos(&b, 0);
        let one = pos(&b, 9);
        let middle: Vec<usize> = (0..8).filter(|&p| p != zero && p != one).collect();
        assert_eq!(middle.len(), 6);
        for p in 0..8 {
            assert!(b.le(zero, p) && b.le(p, one));
        }
        for &a in &middle {
            for &c in &middle {
                assert_eq!(b.le(a, c), a == c);
            }
        }
    }

    #[test]
    fn m_sets() {
        let m2 = biorder_of_matrices(2, 2);
        let (e11, e22) = (pos(&m2, 1), pos(&m2, 8));
        assert_eq!(m2.m_set(e11, e22).members.to_vec(), vec![pos(&m2, 0)]);
        for e in 0..m2.size() {
            assert!(m2.m_set(e, e).members.contains(e));
        }
        let z6 = biorder_of_zmod(6);
        assert_eq!(z6.m_set(pos(&z6, 3), pos(&z6, 4)).members.to_vec(), vec![pos(&z6, 0)]);
    }

    #[test]
    fn sandwich_examples_by_both_routes() {
        let m2 = biorder_of_matrices(2, 2);
        for route in [Route::Abstract, Route::Semigroup] {
            for e in 0..m2.size() {
                assert_eq!(m2.sandwich_set(e, e, route).members, vec![e]);
            }
            let s = m2.sandwich_set(pos(&m2, 1), pos(&m2, 8), route);
            assert_eq!(m2.to_elements(&s.members), vec![0]);
        }
        let z6 = biorder_of_zmod(6);
        for route in [Route::Abstract, Route::Semigroup] {
            let s = z6.sandwich_set(pos(&z6, 1), pos(&z6, 3), route);
            assert_eq!(z6.to_elements(&s.members), vec![3]);
        }
    }

    /// Direct transcription of the greatest-element definition.
    fn sandwich_by_definition(b: &BiorderedSet, e: usize, f: usize) -> Vec<usize> {
        let m: Vec<usize> = b.m_set(e, f).members.to_vec();
        m.iter()
            .copied()
            .filter(|&h| m.iter().all(|&g| b.precedes(e, f, g, h)))
            .collect()
    }

    #[test]
    fn bitset_sandwich_matches_pairwise_definition() {
        for b in [biorder_of_matrices(2, 3), biorder_of_matrices(3, 2)] {
            for e in 0..b.size() {
                for f in 0..b.size() {
                    assert_eq!(
                        b.sandwich_set(e, f, Route::Abstract).members,
                        sandwich_by_definition(&b, e, f)
                    );
                }
            }
        }
    }

    #[test]
    fn regularity_and_routes_on_small_rings() {
        for b in [biorder_of_zmod(6), biorder_of_matrices(2, 2), biorder_of_matrices(2, 3)] {
            assert!(b.check_regularity().passed());
            assert!(b.check_route_agreement().passed());
            assert!(b.check_zero_products().passed());
        }
    }

    #[test]
    fn z4_biorder_is_regular_although_semigroup_is_not() {
        let b = biorder_of_zmod(4);
        assert_eq!(b.elements(), &[0, 1]);
        assert!(b.check_regularity().passed());
    }

    #[test]
    fn basic_product_domain() {
        let m2 = biorder_of_matrices(2, 2);
        let (e11, e22) = (pos(&m2, 1), pos(&m2, 8));
        // E11 and E22 are ω-incomparable and not related by ωl or ωr
        assert_eq!(m2.basic_product(e11, e22), None);
        assert_eq!(m2.basic_product(e11, pos(&m2, 9)), Some(e11));
    }
}
