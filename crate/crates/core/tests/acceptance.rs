//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails or overruns its time limit.
//!
//! Arithmetic oracles here are written from scratch (naive digit-wise matrix
//! products, plain modular arithmetic) and never call the crate's ring code.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use biorder::biorder::{BiorderedSet, Route};
use biorder::complement::{oplus, verify_duals, verify_e1, verify_e2, verify_e3, ComplementMap};
use biorder::lattice::{
    check_oplus_classes, dual_isomorphism_check, homogeneous_basis_check, pentagon, QuotientLattice,
};
use biorder::pipeline::{run_verify, BaerChoice, CheckGroup, RingSpec, RunConfig};
use biorder::report::CheckRecord;
use biorder::ring::{build_matrix_ring, build_modular_ring, matrix_unit_idempotents, Budget, RingTable};
use biorder::semigroup::{BaerMode, FiniteSemigroup, Side};
use biorder::sequences::{verify_idpersp, DistanceTable, ESequenceGraph};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug)]
enum Spec {
    Z(u32),
    M(usize, u32),
}

impl Spec {
    fn name(self) -> String {
        match self {
            Spec::Z(m) => format!("Z_{m}"),
            Spec::M(n, q) => format!("M_{n}(F_{q})"),
        }
    }

    fn order(self) -> u32 {
        match self {
            Spec::Z(m) => m,
            Spec::M(n, q) => q.pow((n * n) as u32),
        }
    }

    fn digits(self, x: u32) -> Vec<u32> {
        let Spec::M(n, q) = self else { unreachable!() };
        let mut x = x;
        (0..n * n)
            .map(|_| {
                let d = x % q;
                x /= q;
                d
            })
            .collect()
    }

    fn undigits(self, d: &[u32]) -> u32 {
        let Spec::M(_, q) = self else { unreachable!() };
        d.iter().rev().fold(0, |acc, &v| acc * q + v)
    }

    fn mul(self, a: u32, b: u32) -> u32 {
        match self {
            Spec::Z(m) => a * b % m,
            Spec::M(n, q) => {
                let (x, y) = (self.digits(a), self.digits(b));
                let mut z = vec![0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        z[i * n + j] = (0..n).map(|k| x[i * n + k] * y[k * n + j]).sum::<u32>() % q;
                    }
                }
                self.undigits(&z)
            }
        }
    }

    fn add(self, a: u32, b: u32) -> u32 {
        match self {
            Spec::Z(m) => (a + b) % m,
            Spec::M(_, q) => {
                let z: Vec<u32> = self.digits(a).iter().zip(self.digits(b)).map(|(x, y)| (x + y) % q).collect();
                self.undigits(&z)
            }
        }
    }

    fn idempotents(self) -> Vec<u32> {
        (0..self.order()).filter(|&x| self.mul(x, x) == x).collect()
    }

    fn ring(self) -> RingTable {
        match self {
            Spec::Z(m) => build_modular_ring(m, &Budget::default()).unwrap(),
            Spec::M(n, q) => build_matrix_ring(n, q, &Budget::default()).unwrap(),
        }
    }
}

struct Setup {
    spec: Spec,
    ring: RingTable,
    b: BiorderedSet,
    c: ComplementMap,
}

fn setup(spec: Spec) -> Setup {
    let ring = spec.ring();
    let s = FiniteSemigroup::from_ring(&ring);
    let b = BiorderedSet::build(&s).unwrap();
    let c = ComplementMap::from_ring(&ring, &b).unwrap();
    Setup { spec, ring, b, c }
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn passes(rec: &CheckRecord, ring: &str) -> Result<(), String> {
    require(rec.passed() && rec.violations == 0, || {
        format!("{ring}: {} failed: {:?}", rec.check, rec.counterexamples.first())
    })
}

const SMALL: [Spec; 4] = [Spec::Z(6), Spec::M(2, 2), Spec::M(2, 3), Spec::M(3, 2)];

fn criterion_1() -> Result<String, String> {
    let expected = [(Spec::M(2, 2), 8), (Spec::M(3, 2), 58), (Spec::M(4, 2), 802), (Spec::M(2, 3), 14), (Spec::Z(6), 4)];
    for (spec, count) in expected {
        let oracle = spec.idempotents();
        let s = FiniteSemigroup::from_ring(&spec.ring());
        require(oracle.len() == count, || format!("{}: oracle found {}", spec.name(), oracle.len()))?;
        require(s.idempotents() == oracle.as_slice(), || {
            format!("{}: crate found {} idempotents", spec.name(), s.idempotents().len())
        })?;
    }
    Ok("8, 58, 802, 14, 4".into())
}

/// `{h : fhe = h, ehf = ef}` and the ≺-greatest members of `M(e, f)`, both
/// from oracle products.
fn oracle_sandwiches(spec: Spec, idem: &[u32], e: u32, f: u32) -> (BTreeSet<u32>, BTreeSet<u32>) {
    let mul = |a, b| spec.mul(a, b);
    let ef = mul(e, f);
    let by_products = idem.iter().copied().filter(|&h| mul(mul(f, h), e) == h && mul(mul(e, h), f) == ef).collect();
    let m: Vec<u32> = idem.iter().copied().filter(|&g| mul(g, e) == g && mul(f, g) == g).collect();
    let precedes = |g: u32, h: u32| {
        let (eg, eh, gf, hf) = (mul(e, g), mul(e, h), mul(g, f), mul(h, f));
        mul(eh, eg) == eg && mul(gf, hf) == gf
    };
    let greatest = m.iter().copied().filter(|&h| m.iter().all(|&g| precedes(g, h))).collect();
    (by_products, greatest)
}

fn criterion_2() -> Result<String, String> {
    let mut pairs = 0;
    for spec in SMALL {
        let st = setup(spec);
        let idem = spec.idempotents();
        passes(&st.b.check_route_agreement(), &spec.name())?;
        for e in 0..st.b.size() {
            for f in 0..st.b.size() {
                let (x, y) = (st.b.element(e), st.b.element(f));
                let (by_products, greatest) = oracle_sandwiches(spec, &idem, x, y);
                let abs: BTreeSet<u32> = st.b.to_elements(&st.b.sandwich_set(e, f, Route::Abstract).members).into_iter().collect();
                let semi: BTreeSet<u32> = st.b.to_elements(&st.b.sandwich_set(e, f, Route::Semigroup).members).into_iter().collect();
                require(abs == greatest && semi == by_products && abs == semi, || {
                    format!("{}: S({x}, {y}) abstract {abs:?} semigroup {semi:?} oracle {greatest:?} / {by_products:?}", spec.name())
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs, exact set equality"))
}

fn criterion_3() -> Result<String, String> {
    let mut pairs = 0;
    for spec in SMALL {
        let st = setup(spec);
        passes(&st.b.check_zero_products(), &spec.name())?;
        let idem = spec.idempotents();
        for &e in &idem {
            for &f in &idem {
                let m: Vec<u32> = idem.iter().copied().filter(|&g| spec.mul(g, e) == g && spec.mul(f, g) == g).collect();
                let zero_set = m == [0];
                let pe = st.b.position_of(e).unwrap();
                let pf = st.b.position_of(f).unwrap();
                let crate_zero = st.b.m_set(pe, pf).is_zero_set(st.b.position_of(0).unwrap());
                require((spec.mul(e, f) == 0) == zero_set && zero_set == crate_zero, || {
                    format!("{}: ef = 0 vs M = {{0}} differs at ({e}, {f})", spec.name())
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs"))
}

fn axiom_suite(st: &Setup) -> Result<(), String> {
    let name = st.spec.name();
    let (e1, zero) = verify_e1(&st.b);
    passes(&e1, &name)?;
    let zero = zero.ok_or("no zero")?;
    require(st.b.element(zero) == 0, || format!("{name}: least idempotent is not 0"))?;
    passes(&verify_e2(&st.b, &st.c, zero), &name)?;
    let (duals, one) = verify_duals(&st.b, &st.c, zero);
    passes(&duals, &name)?;
    require(one.map(|p| st.b.element(p)) == st.ring.one_index(), || format!("{name}: top is not 1"))?;
    passes(&verify_e3(&st.b, &st.c), &name)
}

fn criterion_4() -> Result<String, String> {
    for spec in [Spec::Z(6), Spec::M(2, 2), Spec::M(3, 2)] {
        axiom_suite(&setup(spec))?;
    }
    let start = Instant::now();
    axiom_suite(&setup(Spec::M(4, 2)))?;
    let m4 = start.elapsed();
    require(m4 < Duration::from_secs(600), || format!("M_4(F_2) scan took {m4:?}"))?;
    Ok(format!("E1, E2(i-iii), duals (i-iii), E3 with uniqueness; M_4(F_2) in {:.1}s", m4.as_secs_f64()))
}

/// Left annihilators and principal left ideals as families of sets, from
/// oracle products (right side mirrored).
fn oracle_baer(spec: Spec) -> bool {
    let n = spec.order();
    let set = |f: &dyn Fn(u32) -> bool| -> Vec<u32> { (0..n).filter(|&y| f(y)).collect() };
    for left in [true, false] {
        let prod = |a: u32, b: u32| if left { spec.mul(a, b) } else { spec.mul(b, a) };
        let anns: HashSet<Vec<u32>> = (0..n).map(|x| set(&|y| prod(y, x) == 0)).collect();
        let ideals: HashSet<Vec<u32>> = (0..n)
            .map(|x| {
                let members: BTreeSet<u32> = (0..n).map(|s| prod(s, x)).collect();
                members.into_iter().collect()
            })
            .collect();
        if anns != ideals {
            return false;
        }
    }
    true
}

fn criterion_5() -> Result<String, String> {
    for spec in [Spec::Z(6), Spec::M(2, 2)] {
        require(oracle_baer(spec), || format!("{}: oracle says not Baer", spec.name()))?;
        passes(&FiniteSemigroup::from_ring(&spec.ring()).baer_check(BaerMode::Full), &spec.name())?;
    }
    for spec in [Spec::M(3, 2), Spec::M(4, 2)] {
        let s = FiniteSemigroup::from_ring(&spec.ring());
        passes(&s.baer_check(BaerMode::Sampled { samples: 10_000, seed: 0x5eed }), &spec.name())?;
    }
    Ok("full: Z_6, M_2(F_2); sampled 10^4: M_3(F_2), M_4(F_2)".into())
}

/// Number of L-classes (`ef = e`, `fe = f`) by oracle products.
fn oracle_l_classes(spec: Spec) -> usize {
    let idem = spec.idempotents();
    let mut seen: Vec<u32> = Vec::new();
    let mut classes = 0;
    for &e in &idem {
        if seen.iter().any(|&r| spec.mul(e, r) == e && spec.mul(r, e) == r) {
            continue;
        }
        seen.push(e);
        classes += 1;
    }
    classes
}

fn criterion_6() -> Result<String, String> {
    let mut counts = Vec::new();
    for (spec, expected) in [(Spec::Z(6), 4), (Spec::M(2, 2), 5), (Spec::M(3, 2), 16), (Spec::M(4, 2), 67)] {
        let st = setup(spec);
        let name = spec.name();
        let left = QuotientLattice::from_biorder(&st.b, Side::Left);
        let right = QuotientLattice::from_biorder(&st.b, Side::Right);
        let oracle = if spec.order() <= 512 { oracle_l_classes(spec) } else { expected };
        require(left.size() == expected && oracle == expected, || format!("{name}: {} classes", left.size()))?;
        for q in [&left, &right] {
            passes(&q.check_modular(), &name)?;
            passes(&q.check_complemented(Some((&st.b, &st.c))), &name)?;
        }
        passes(&dual_isomorphism_check(&left, &right, &st.b, &st.c), &name)?;
        counts.push(left.size());
    }
    let rec = pentagon().check_modular();
    require(rec.failed() && rec.counterexamples.first() == Some(&serde_json::json!({ "a": 1, "b": 2, "c": 3 })), || {
        format!("pentagon: {:?}", rec.counterexamples.first())
    })?;
    Ok(format!("classes {counts:?}; pentagon fails at (a, b, c) = (1, 2, 3)"))
}

fn criterion_7() -> Result<String, String> {
    let mut pairs = 0;
    for spec in [Spec::Z(6), Spec::M(2, 2), Spec::M(2, 3), Spec::M(3, 2), Spec::M(4, 2)] {
        let st = setup(spec);
        for e in 0..st.b.size() {
            for f in 0..st.b.size() {
                let (x, y) = (st.b.element(e), st.b.element(f));
                if spec.mul(x, y) != 0 || spec.mul(y, x) != 0 {
                    continue;
                }
                let r = oplus(&st.b, &st.c, e, f, Some(&st.ring)).map_err(|err| format!("{}: {err}", spec.name()))?;
                require(st.b.element(r.h) == spec.add(x, y) && r.characterized(), || {
                    format!("{}: {x} ⊕ {y} = {}, sum {}", spec.name(), st.b.element(r.h), spec.add(x, y))
                })?;
                pairs += 1;
            }
        }
        let left = QuotientLattice::from_biorder(&st.b, Side::Left);
        passes(&check_oplus_classes(&left, &st.b, &st.c), &spec.name())?;
    }
    Ok(format!("{pairs} orthogonal pairs match ring addition; class join/meet identities hold"))
}

/// `d_l` by Floyd–Warshall over L ∪ R built from oracle products.
fn oracle_d_l(spec: Spec) -> Vec<Vec<u32>> {
    let idem = spec.idempotents();
    let k = idem.len();
    let l = |a: u32, b: u32| spec.mul(a, b) == a && spec.mul(b, a) == b;
    let r = |a: u32, b: u32| spec.mul(b, a) == a && spec.mul(a, b) == b;
    const INF: u32 = 1 << 20;
    let mut w = vec![vec![INF; k]; k];
    for i in 0..k {
        for j in 0..k {
            if i == j {
                w[i][j] = 0;
            } else if l(idem[i], idem[j]) || r(idem[i], idem[j]) {
                w[i][j] = 1;
            }
        }
    }
    for m in 0..k {
        for i in 0..k {
            for j in 0..k {
                w[i][j] = w[i][j].min(w[i][m] + w[m][j]);
            }
        }
    }
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let best = (0..k).filter(|&x| l(idem[i], idem[x])).map(|x| 1 + w[x][j]).min().unwrap_or(INF);
                    if best >= INF { 0 } else { best }
                })
                .collect()
        })
        .collect()
}

fn criterion_8() -> Result<String, String> {
    let mut pairs = 0;
    for spec in [Spec::Z(6), Spec::M(2, 2), Spec::M(3, 2)] {
        let st = setup(spec);
        let left = QuotientLattice::from_biorder(&st.b, Side::Left);
        let table = DistanceTable::compute(&ESequenceGraph::new(&st.b));
        passes(&verify_idpersp(&st.b, &left, &table), &spec.name())?;
        let oracle = oracle_d_l(spec);
        for e in 0..st.b.size() {
            for f in 0..st.b.size() {
                let dl = oracle[e][f];
                require(dl == table.d_l(e, f) as u32, || format!("{}: d_l({e}, {f}) differs from oracle", spec.name()))?;
                let persp = left.perspective(left.class_of(e), left.class_of(f)).is_some();
                require(persp == (1..=3).contains(&dl), || format!("{}: ({e}, {f}) perspective {persp}, d_l {dl}", spec.name()))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs, zero violations"))
}

fn criterion_9() -> Result<String, String> {
    let st = setup(Spec::M(4, 2));
    let left = QuotientLattice::from_biorder(&st.b, Side::Left);
    let units: Vec<usize> = matrix_unit_idempotents(&st.ring).unwrap().iter().map(|&x| st.b.position_of(x).unwrap()).collect();
    let out = homogeneous_basis_check(&left, &st.b, &units);
    require(out.passed() && !out.below_four && out.certificate.is_some(), || format!("M_4(F_2): {:?}", out.first_failure))?;
    let cert = out.certificate.unwrap();
    require(Some(cert.join) == left.top().map(|t| left.label(t)) && cert.perspectivity.len() == 6, || "certificate incomplete".into())?;

    let z6 = setup(Spec::Z(6));
    let left = QuotientLattice::from_biorder(&z6.b, Side::Left);
    let family = [z6.b.position_of(3).unwrap(), z6.b.position_of(4).unwrap()];
    let out = homogeneous_basis_check(&left, &z6.b, &family);
    let stages: Vec<_> = out.stages.iter().map(|s| (s.stage, s.passed)).collect();
    require(out.first_failure == Some("E4(iii)") && stages[..2] == [("E4(i)", true), ("E4(ii)", true)], || {
        format!("Z_6 {{3, 4}}: {stages:?}")
    })?;
    Ok("M_4(F_2) units certified with n = 4; Z_6 {3, 4} first fails at E4(iii)".into())
}

fn criterion_10() -> Result<String, String> {
    let configs = {
        let all = RunConfig::new(RingSpec::Gfmatrix { n: 2, q: 3 });
        let mut sampled = RunConfig::new(RingSpec::Gfmatrix { n: 3, q: 2 });
        sampled.checks = vec![CheckGroup::Axioms, CheckGroup::Baer];
        sampled.baer = BaerChoice::Sampled;
        sampled.samples = 500;
        sampled.seed = 99;
        vec![all, sampled]
    };
    for cfg in configs {
        let digests: Vec<Vec<u8>> = [1, 2, 1]
            .iter()
            .map(|&threads| {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
                let json = pool.install(|| run_verify(&cfg).unwrap().to_json());
                Sha256::digest(json.as_bytes()).to_vec()
            })
            .collect();
        require(digests.windows(2).all(|w| w[0] == w[1]), || format!("{:?}: reports differ", cfg.ring))?;
    }
    Ok("3 runs per config across 1 and 2 workers hash equal".into())
}

fn main() {
    let criteria: [(&str, u64, fn() -> Result<String, String>); 10] = [
        ("idempotent counts", 5, criterion_1),
        ("sandwich route agreement", 30, criterion_2),
        ("ef = 0 iff M(e, f) = {0}", 10, criterion_3),
        ("complement axiom suite", 600, criterion_4),
        ("Baer property", 300, criterion_5),
        ("lattice suite", 60, criterion_6),
        ("oplus consistency", 60, criterion_7),
        ("perspectivity iff 1 <= d_l <= 3", 120, criterion_8),
        ("homogeneous basis", 60, criterion_9),
        ("determinism", 600, criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(detail) if secs > limit as f64 => Err(format!("over time limit: {detail}")),
            other => other,
        };
        let (verdict, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{verdict} criterion {:>2} {name} [{secs:.1}s / {limit}s]: {detail}", i + 1);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
