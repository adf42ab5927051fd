use biorder::biorder::BiorderedSet;
use biorder::complement::{oplus_chain, random_orthogonal_family, verify_duals, verify_e1, verify_e2, verify_e3, ComplementMap};
use biorder::lattice::QuotientLattice;
use biorder::ring::{build_matrix_ring, build_modular_ring, is_squarefree, Budget};
use biorder::semigroup::{FiniteSemigroup, Side};
use biorder::sequences::{DistanceTable, ESequenceGraph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn zmod(m: u32) -> (biorder::ring::RingTable, FiniteSemigroup, BiorderedSet) {
    let ring = build_modular_ring(m, &Budget::default()).unwrap();
    let s = FiniteSemigroup::from_ring(&ring);
    let b = BiorderedSet::build(&s).unwrap();
    (ring, s, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn zmod_idempotents_and_regularity(m in 2u32..120) {
        let (_, s, _) = zmod(m);
        let oracle: Vec<u32> = (0..m).filter(|&x| x * x % m == x).collect();
        prop_assert_eq!(s.idempotents(), oracle.as_slice());
        let squarefree = (2..m).all(|p| m % (p * p) != 0);
        prop_assert_eq!(is_squarefree(m), squarefree);
        prop_assert_eq!(s.check_regular().passed(), squarefree);
    }

    #[test]
    fn zmod_complement_axioms(m in 2u32..120) {
        let (ring, _, b) = zmod(m);
        let c = ComplementMap::from_ring(&ring, &b).unwrap();
        for e in 0..b.size() {
            prop_assert_eq!(c.get(c.get(e)), e);
        }
        let (e1, zero) = verify_e1(&b);
        prop_assert!(e1.passed());
        let zero = zero.unwrap();
        prop_assert!(verify_e2(&b, &c, zero).passed());
        prop_assert!(verify_duals(&b, &c, zero).0.passed());
        prop_assert!(verify_e3(&b, &c).passed());
        prop_assert!(b.check_route_agreement().passed());
    }

    #[test]
    fn zmod_lattice_is_boolean(m in 2u32..120) {
        // commutative: L is trivial and E/L is the Boolean lattice on the idempotents
        let (_, s, b) = zmod(m);
        let l = QuotientLattice::from_biorder(&b, Side::Left);
        prop_assert_eq!(l.size(), s.idempotents().len());
        prop_assert!(l.size().is_power_of_two());
        prop_assert!(l.check_modular().passed());
        prop_assert!(l.check_complemented(None).passed());
    }

    #[test]
    fn orthogonal_chain_is_the_ring_sum(seed in any::<u64>()) {
        let ring = build_matrix_ring(3, 2, &Budget::default()).unwrap();
        let b = BiorderedSet::build(&FiniteSemigroup::from_ring(&ring)).unwrap();
        let c = ComplementMap::from_ring(&ring, &b).unwrap();
        let zero = b.position_of(0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let family = random_orthogonal_family(&b, zero, &mut rng, 3);
        let h = oplus_chain(&b, &c, &family, seed).unwrap();
        let sum = family.iter().try_fold(0, |acc, &e| ring.add(acc, b.element(e))).unwrap();
        prop_assert_eq!(b.element(h), sum);
    }

    #[test]
    fn lattice_laws_on_random_orders(n in 1usize..7, raw in prop::collection::vec((0usize..7, 0usize..7), 0..12)) {
        // orient pairs from smaller to larger label so the closure is a partial order
        let pairs: Vec<_> = raw.into_iter().filter(|&(a, b)| a < n && b < n).map(|(a, b)| (a.min(b), a.max(b))).collect();
        let l = QuotientLattice::from_pairs(n, &pairs).unwrap();
        prop_assert!(l.order().is_partial_order());
        if l.is_lattice() {
            for a in 0..n {
                for b in 0..n {
                    prop_assert_eq!(l.join(a, b), l.join(b, a));
                    prop_assert_eq!(l.meet(a, b), l.meet(b, a));
                    prop_assert_eq!(l.join(a, l.meet(a, b)), a);
                    prop_assert_eq!(l.meet(a, l.join(a, b)), a);
                    prop_assert!(l.le(a, l.join(a, b)) && l.le(l.meet(a, b), a));
                }
            }
        }
    }
}

#[test]
fn distance_invariants_on_matrix_rings() {
    for (n, q) in [(2, 2), (2, 3), (2, 5), (3, 2)] {
        let ring = build_matrix_ring(n, q, &Budget::default()).unwrap();
        let b = BiorderedSet::build(&FiniteSemigroup::from_ring(&ring)).unwrap();
        let g = ESequenceGraph::new(&b);
        let t = DistanceTable::compute(&g);
        assert!(t.check_properties(&b).passed());
        assert!(t.check_alternation(&g, &b).passed());
        // idempotents are joined by an E-sequence exactly when their ranks
        // agree, and then by one of length at most 3
        let shape = ring.matrix_shape().unwrap();
        let rank: Vec<usize> = b.elements().iter().map(|&x| shape.decode(x).rank()).collect();
        for e in 0..b.size() {
            for f in 0..b.size() {
                let d = t.d(e, f);
                assert_eq!(d != 0, rank[e] == rank[f], "M_{n}(F_{q}) ({e}, {f})");
                assert!(d <= 3);
            }
        }
    }
}
