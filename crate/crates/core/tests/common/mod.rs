//! Brute-force oracles and property definitions shared by the property suite
//! and the acceptance runner.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use commwb_core::freeprod::{FreeProduct, Word};
use commwb_core::{
    cooperator, generate_congruence, generate_subuniverse, higgins, kernel_pair, library, pullback, quotient,
    smith, Congruence, FinAlgebra, Hom, Subuniverse,
};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

// ---------------------------------------------------------------------------
// Oracles. These use nothing but the group multiplication table.

/// Subgroup generated by `gens`, by naive saturation.
pub fn bf_subgroup(g: &FinAlgebra, gens: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = gens.into_iter().collect();
    set.insert(g.basepoint());
    loop {
        let mut next = set.clone();
        for &a in &set {
            for &b in &set {
                next.insert(g.mul(a, b));
            }
        }
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

/// Normal closure of `gens` in the subgroup `ambient`.
pub fn bf_normal_closure(g: &FinAlgebra, gens: &BTreeSet<usize>, ambient: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut set = bf_subgroup(g, gens.iter().copied());
    loop {
        let conj: Vec<usize> = set
            .iter()
            .flat_map(|&x| ambient.iter().map(move |&h| (x, h)))
            .map(|(x, h)| g.mul(g.mul(g.inv(h), x), h))
            .collect();
        let next = bf_subgroup(g, set.iter().copied().chain(conj));
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

/// `[K, L]` in a group: normal closure in `⟨K ∪ L⟩` of all `k⁻¹l⁻¹kl`.
pub fn bf_commutator(g: &FinAlgebra, k: &[usize], l: &[usize]) -> BTreeSet<usize> {
    let ambient = bf_subgroup(g, k.iter().chain(l).copied());
    let comms: BTreeSet<usize> = k
        .iter()
        .flat_map(|&a| l.iter().map(move |&b| (a, b)))
        .map(|(a, b)| g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b)))
        .collect();
    bf_normal_closure(g, &comms, &ambient)
}

pub fn set(s: &Subuniverse) -> BTreeSet<usize> {
    s.members().iter().copied().collect()
}

/// A congruence as the full set of related pairs.
pub fn rel(c: &Congruence) -> BTreeSet<(usize, usize)> {
    let n = c.parent().size();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| c.related(x, y))
        .collect()
}

/// Every `(op, args)` tuple of `a`, for re-scanning closure properties.
pub fn all_applications(a: &FinAlgebra) -> Vec<(usize, Vec<usize>)> {
    let n = a.size();
    let mut out = Vec::new();
    for op in 0..a.signature().ops().len() {
        let ar = a.signature().arity(op);
        let total = n.pow(ar as u32);
        for mut code in 0..total {
            let mut args = Vec::with_capacity(ar);
            for _ in 0..ar {
                args.push(code % n);
                code /= n;
            }
            out.push((op, args));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Inputs.

/// Builtin algebras small enough for exhaustive re-scans.
pub fn small_algebras() -> Vec<Arc<FinAlgebra>> {
    library::all().into_iter().filter(|a| a.size() <= 8).collect()
}

pub fn small_groups() -> Vec<Arc<FinAlgebra>> {
    library::groups_up_to(8)
}

/// An algebra index plus raw element seeds, reduced modulo the size later.
pub fn algebra_and_seeds(count: usize, max_seeds: usize) -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (
        0..count,
        prop::collection::vec(prop::collection::vec(any::<usize>(), 0..=max_seeds), 4),
    )
}

fn elements(a: &FinAlgebra, seeds: &[usize]) -> Vec<usize> {
    seeds.iter().map(|s| s % a.size()).collect()
}

fn pairs(a: &FinAlgebra, seeds: &[usize]) -> Vec<(usize, usize)> {
    seeds.chunks_exact(2).map(|p| (p[0] % a.size(), p[1] % a.size())).collect()
}

fn sub(a: &Arc<FinAlgebra>, seeds: &[usize]) -> Subuniverse {
    generate_subuniverse(a, elements(a, seeds)).unwrap()
}

fn cong(a: &Arc<FinAlgebra>, seeds: &[usize]) -> Congruence {
    generate_congruence(a, pairs(a, seeds)).unwrap()
}

// ---------------------------------------------------------------------------
// Core invariants.

pub fn prop_subuniverse_closure(a: &Arc<FinAlgebra>, seeds: &[Vec<usize>]) -> Result<(), TestCaseError> {
    let s = sub(a, &seeds[0]);
    let gens = elements(a, &seeds[0]);
    prop_assert!(gens.iter().all(|&g| s.contains(g)));
    prop_assert!(s.contains(a.basepoint()));
    for (op, args) in all_applications(a) {
        if args.iter().all(|&x| s.contains(x)) {
            prop_assert!(s.contains(a.apply(op, &args)), "{} not closed under op {op}", s);
        }
    }
    let again = generate_subuniverse(a, s.members().iter().copied()).unwrap();
    prop_assert_eq!(again.members(), s.members());
    let more: Vec<usize> = gens.iter().copied().chain(elements(a, &seeds[1])).collect();
    let bigger = generate_subuniverse(a, more).unwrap();
    prop_assert!(s.is_subset_of(&bigger));
    Ok(())
}

pub fn prop_congruence_closure(a: &Arc<FinAlgebra>, seeds: &[Vec<usize>]) -> Result<(), TestCaseError> {
    let c = cong(a, &seeds[0]);
    for (x, y) in pairs(a, &seeds[0]) {
        prop_assert!(c.related(x, y));
    }
    let n = a.size();
    for x in 0..n {
        prop_assert!(c.related(x, x));
        for y in 0..n {
            prop_assert_eq!(c.related(x, y), c.related(y, x));
            if c.related(x, y) {
                for z in 0..n {
                    if c.related(y, z) {
                        prop_assert!(c.related(x, z));
                    }
                }
            }
        }
    }
    // Compatibility: changing one argument within its class.
    for (op, args) in all_applications(a) {
        let v = a.apply(op, &args);
        for i in 0..args.len() {
            for y in 0..n {
                if c.related(args[i], y) {
                    let mut b = args.clone();
                    b[i] = y;
                    prop_assert!(c.related(v, a.apply(op, &b)), "op {op} breaks {c:?}");
                }
            }
        }
    }
    Ok(())
}

pub fn prop_quotient_round_trip(a: &Arc<FinAlgebra>, seeds: &[Vec<usize>]) -> Result<(), TestCaseError> {
    let c = cong(a, &seeds[0]);
    let (q, proj) = quotient(&c).unwrap();
    prop_assert_eq!(q.size(), c.num_blocks());
    prop_assert!(Hom::new(proj.dom().clone(), proj.cod().clone(), proj.map().to_vec()).is_ok());
    prop_assert_eq!(rel(&kernel_pair(&proj)), rel(&c));
    Ok(())
}

pub fn prop_pullback_of_quotient(a: &Arc<FinAlgebra>, seeds: &[Vec<usize>]) -> Result<(), TestCaseError> {
    let c = cong(a, &seeds[0]);
    let (_, proj) = quotient(&c).unwrap();
    let w = pullback(&proj, &proj).unwrap();
    let got: BTreeSet<(usize, usize)> = w.pairs().iter().copied().collect();
    prop_assert_eq!(got, rel(&c));
    for leg in &w.legs {
        prop_assert!(Hom::new(leg.dom().clone(), leg.cod().clone(), leg.map().to_vec()).is_ok());
    }
    let l = w.legs[0].then(&proj).unwrap();
    let r = w.legs[1].then(&proj).unwrap();
    prop_assert_eq!(l.map(), r.map());
    Ok(())
}

// ---------------------------------------------------------------------------
// Commutators.

pub fn prop_higgins_laws(a: &Arc<FinAlgebra>, seeds: &[Vec<usize>]) -> Result<(), TestCaseError> {
    let k = sub(a, &seeds[0]);
    let l = sub(a, &seeds[1]);
    let kl = higgins(a, &k, &l).unwrap();
    let lk = higgins(a, &l, &k).unwrap();
    prop_assert_eq!(kl.members(), lk.members(), "[K,L] != [L,K] for K={} L={}", k, l);
    let join = k.join(&l).unwrap();
    prop_assert!(kl.is_subset_of(&join));
    let k2 = generate_subuniverse(a, k.members().iter().copied().chain(elements(a, &seeds[2]))).unwrap();
    let l2 = generate_subuniverse(a, l.members().iter().copied().chain(elements(a, &seeds[3]))).unwrap();
    let bigger = higgins(a, &k2, &l2).unwrap();
    prop_assert!(kl.is_subset_of(&bigger), "monotonicity: [{k},{l}] = {kl} not in [{k2},{l2}] = {bigger}");
    let coop = cooperator(a, &k, &l).unwrap();
    prop_assert_eq!(coop.exists(), kl.is_trivial());
    // On the axes the cooperator restricts to the inclusions. Its domain is
    // K×L with pairs in lexicographic order of member positions.
    if let Some(phi) = coop.phi {
        let pos = |s: &Subuniverse| s.members().iter().position(|&x| x == a.basepoint()).unwrap();
        let (k0, l0) = (pos(&k), pos(&l));
        for (i, &x) in k.members().iter().enumerate() {
            prop_assert_eq!(phi.apply(i * l.len() + l0), x);
        }
        for (j, &y) in l.members().iter().enumerate() {
            prop_assert_eq!(phi.apply(k0 * l.len() + j), y);
        }
    }
    if a.is_group() {
        let oracle = bf_commutator(a, k.members(), l.members());
        prop_assert_eq!(set(&kl), oracle);
    }
    Ok(())
}

pub fn prop_smith_laws(a: &Arc<FinAlgebra>, seeds: &[Vec<usize>]) -> Result<(), TestCaseError> {
    let r = cong(a, &seeds[0]);
    let s = cong(a, &seeds[1]);
    let rs = smith(a, &r, &s).unwrap();
    let sr = smith(a, &s, &r).unwrap();
    let (rs, sr) = (rs.cong().unwrap(), sr.cong().unwrap());
    prop_assert_eq!(rel(rs), rel(sr));
    let meet: BTreeSet<_> = rel(&r).intersection(&rel(&s)).copied().collect();
    prop_assert!(rel(rs).is_subset(&meet));
    Ok(())
}

// ---------------------------------------------------------------------------
// Words in free products of groups.

/// Factors are the cyclic subgroups picked by the first seed list, each
/// included into the ambient group.
pub fn word_setup(g: &Arc<FinAlgebra>, seeds: &[usize]) -> (FreeProduct, Vec<Hom>) {
    let mut homs = Vec::new();
    for &s in seeds.iter().take(3) {
        homs.push(generate_subuniverse(g, [s % g.size()]).unwrap().to_algebra().1);
    }
    while homs.len() < 2 {
        homs.push(Subuniverse::full(g.clone()).to_algebra().1);
    }
    let fp = FreeProduct::new(homs.iter().map(|h| h.dom().clone()).collect()).unwrap();
    (fp, homs)
}

fn word_from(fp: &FreeProduct, seeds: &[usize]) -> Word {
    let n = fp.factors().len();
    let syl: Vec<(usize, usize)> = seeds
        .chunks_exact(2)
        .map(|p| {
            let f = p[0] % n;
            (f, p[1] % fp.factors()[f].size())
        })
        .collect();
    fp.word(&syl).unwrap()
}

pub fn prop_word_laws(g: &Arc<FinAlgebra>, seeds: &[Vec<usize>]) -> Result<(), TestCaseError> {
    let (fp, homs) = word_setup(g, &seeds[0]);
    let u = word_from(&fp, &seeds[1]);
    let v = word_from(&fp, &seeds[2]);
    let w = word_from(&fp, &seeds[3]);
    let e = Word::identity();
    let m = |x: &Word, y: &Word| -> Word { fp.multiply(x, y).unwrap() };
    prop_assert_eq!(m(&m(&u, &v), &w), m(&u, &m(&v, &w)));
    prop_assert_eq!(&m(&u, &e), &u);
    prop_assert_eq!(&m(&e, &u), &u);
    prop_assert!(m(&u, &fp.inverse(&u)).is_identity());
    // Reduced: no adjacent syllables share a factor, no identity syllables.
    for x in [&u, &v, &w] {
        for pair in x.syllables().windows(2) {
            prop_assert_ne!(pair[0].0, pair[1].0);
        }
        for &(f, y) in x.syllables() {
            prop_assert_ne!(y, fp.factors()[f].basepoint());
        }
    }
    let uv = m(&u, &v);
    for i in 0..fp.factors().len() {
        prop_assert_eq!(fp.delete_factor(&uv, i), m(&fp.delete_factor(&u, i), &fp.delete_factor(&v, i)));
    }
    let ev = |x: &Word| fp.evaluate(x, &homs).unwrap();
    prop_assert_eq!(ev(&uv), g.mul(ev(&u), ev(&v)));
    prop_assert_eq!(ev(&e), g.basepoint());
    Ok(())
}

pub type Check = fn(&Arc<FinAlgebra>, &[Vec<usize>]) -> Result<(), TestCaseError>;

/// Named property, its input algebras, and the seed shape it needs.
pub struct Property {
    pub name: &'static str,
    pub suite: &'static str,
    pub algebras: fn() -> Vec<Arc<FinAlgebra>>,
    pub check: Check,
    pub max_seeds: usize,
}

pub fn properties() -> Vec<Property> {
    vec![
        Property { name: "subuniverse closure", suite: "core", algebras: small_algebras, check: prop_subuniverse_closure, max_seeds: 3 },
        Property { name: "congruence closure", suite: "core", algebras: small_algebras, check: prop_congruence_closure, max_seeds: 4 },
        Property { name: "quotient round trip", suite: "core", algebras: small_algebras, check: prop_quotient_round_trip, max_seeds: 4 },
        Property { name: "pullback of a quotient", suite: "core", algebras: small_algebras, check: prop_pullback_of_quotient, max_seeds: 4 },
        Property { name: "higgins symmetry and monotonicity", suite: "commutators", algebras: small_algebras, check: prop_higgins_laws, max_seeds: 2 },
        Property { name: "smith symmetry and meet bound", suite: "commutators", algebras: small_algebras, check: prop_smith_laws, max_seeds: 4 },
        Property { name: "word algebra laws", suite: "words", algebras: small_groups, check: prop_word_laws, max_seeds: 16 },
    ]
}

/// Runs one property for `cases` generated inputs.
pub fn run_property(p: &Property, cases: u32) -> Result<(), String> {
    use proptest::test_runner::{Config, TestRunner};
    let algs = (p.algebras)();
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&algebra_and_seeds(algs.len(), p.max_seeds), |(i, seeds)| (p.check)(&algs[i], &seeds))
        .map_err(|e| format!("{}: {e}", p.name))
}
