//! Named algebras and homomorphism tables shipped with the crate.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::algebra::{FinAlgebra, Signature};
use crate::error::{Error, Result};
use crate::groups;
use crate::hom::Hom;
use crate::sub::generate_subuniverse;
use crate::varieties::{verify_identities, VarietyProfile};

/// Heyting semilattice on a finite distributive order: meet is the
/// greatest lower bound and `p ⇒ q` the greatest `r` with `r ∧ p ≤ q`.
pub fn heyting_from_order(
    name: &str,
    labels: &[&str],
    leq: impl Fn(usize, usize) -> bool,
) -> Result<FinAlgebra> {
    let n = labels.len();
    let invalid = |reason: String| Error::InvalidAlgebra {
        name: name.to_string(),
        reason,
    };
    let greatest = |cands: Vec<usize>| -> Option<usize> {
        cands.iter().copied().find(|&c| cands.iter().all(|&d| leq(d, c)))
    };
    let mut meet = vec![0; n * n];
    for p in 0..n {
        for q in 0..n {
            meet[p * n + q] = greatest((0..n).filter(|&r| leq(r, p) && leq(r, q)).collect())
                .ok_or_else(|| invalid(format!("no meet of {} and {}", labels[p], labels[q])))?;
        }
    }
    let mut imp = vec![0; n * n];
    for p in 0..n {
        for q in 0..n {
            imp[p * n + q] = greatest((0..n).filter(|&r| leq(meet[r * n + p], q)).collect())
                .ok_or_else(|| invalid(format!("no implication {} ⇒ {}", labels[p], labels[q])))?;
        }
    }
    let top = greatest((0..n).collect()).ok_or_else(|| invalid("no top element".into()))?;
    FinAlgebra::new(name, Signature::heyting_semilattice(), n, vec![meet, imp, vec![top]])?
        .with_labels(labels.iter().map(|s| s.to_string()).collect())
}

fn chain(name: &str, labels: &[&str]) -> FinAlgebra {
    heyting_from_order(name, labels, |a, b| a <= b).expect("chains are Heyting")
}

/// Componentwise order on a product of two chains of lengths `m` and `n`.
fn chain_product(name: &str, m: usize, n: usize) -> FinAlgebra {
    let labels: Vec<String> = (0..m * n).map(|x| format!("({},{})", x / n, x % n)).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    heyting_from_order(name, &refs, |a, b| a / n <= b / n && a % n <= b % n).expect("product of chains")
}

fn boolean(name: &str, bits: usize) -> FinAlgebra {
    let labels: Vec<String> = (0..1usize << bits)
        .map(|x| match (bits, x) {
            (2, 0) => "0".into(),
            (2, 1) => "a".into(),
            (2, 2) => "b".into(),
            (2, 3) => "1".into(),
            _ => format!("{x:0width$b}", width = bits),
        })
        .collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    heyting_from_order(name, &refs, |a, b| a & b == a).expect("boolean algebra")
}

/// The four-element boolean algebra with a new bottom (`bottom = true`) or a
/// new top below the old one.
fn boolean_with_extra(name: &str, bottom: bool) -> FinAlgebra {
    if bottom {
        // 0 < z < a, b < 1
        let up: [&[usize]; 5] = [&[0, 1, 2, 3, 4], &[1, 2, 3, 4], &[2, 4], &[3, 4], &[4]];
        heyting_from_order(name, &["0", "z", "a", "b", "1"], |x, y| up[x].contains(&y)).unwrap()
    } else {
        // 0 < a, b < u < 1
        let up: [&[usize]; 5] = [&[0, 1, 2, 3, 4], &[1, 3, 4], &[2, 3, 4], &[3, 4], &[4]];
        heyting_from_order(name, &["0", "a", "b", "u", "1"], |x, y| up[x].contains(&y)).unwrap()
    }
}

/// Raw homomorphism tables, kept unvalidated so that files reproducing
/// published data can be loaded and then checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomTable {
    pub name: &'static str,
    pub dom: &'static str,
    pub cod: &'static str,
    pub map: Vec<usize>,
}

struct Library {
    algebras: BTreeMap<String, Arc<FinAlgebra>>,
    order: Vec<String>,
}

fn build() -> Library {
    let mut list: Vec<FinAlgebra> = Vec::new();
    for n in 1..=16 {
        list.push(groups::cyclic(n));
    }
    let z = |n| groups::cyclic(n);
    list.push(groups::direct_product("V4", &z(2), &z(2)));
    list.push(groups::direct_product("Z2xZ4", &z(2), &z(4)));
    let v4 = groups::direct_product("V4", &z(2), &z(2));
    list.push(groups::direct_product("Z2^3", &z(2), &v4));
    list.push(groups::direct_product("Z3xZ3", &z(3), &z(3)));
    list.push(groups::direct_product("Z2xZ6", &z(2), &z(6)));
    list.push(groups::direct_product("Z2xZ8", &z(2), &z(8)));
    list.push(groups::direct_product("Z4xZ4", &z(4), &z(4)));
    let z2_3 = groups::direct_product("Z2^3", &z(2), &v4);
    list.push(groups::direct_product("Z2^4", &z(2), &z2_3));
    list.push(groups::s3());
    list.push(groups::dihedral("D4", 4));
    list.push(groups::dicyclic("Q8", 2));
    list.push(groups::dihedral("D5", 5));
    list.push(groups::a4());
    list.push(groups::dihedral("D6", 6));
    list.push(groups::dicyclic("Dic3", 3));
    list.push(groups::dihedral("D7", 7));
    list.push(groups::dihedral("D8", 8));
    list.push(groups::dicyclic("Q16", 4));
    list.push(groups::direct_product("Z2xD4", &z(2), &groups::dihedral("D4", 4)));
    list.push(groups::direct_product("Z2xQ8", &z(2), &groups::dicyclic("Q8", 2)));
    list.push(groups::direct_product("Z2xS3", &z(2), &groups::s3()));
    list.push(groups::direct_product("Z3xS3", &z(3), &groups::s3()));
    list.push(groups::direct_product("Z2xA4", &z(2), &groups::a4()));
    list.push(groups::s4());

    list.push(chain("hslat/chain2", &["0", "1"]));
    list.push(chain("hslat/chain3", &["0", "1/2", "1"]));
    list.push(chain("hslat/chain4", &["0", "1/3", "2/3", "1"]));
    list.push(chain("hslat/chain5", &["0", "1/4", "1/2", "3/4", "1"]));
    list.push(boolean("hslat/B2", 2));
    list.push(boolean_with_extra("hslat/1+B2", true));
    list.push(boolean_with_extra("hslat/B2+1", false));
    list.push(chain_product("hslat/2x3", 2, 3));
    list.push(boolean("hslat/B3", 3));
    list.push(chain_product("hslat/3x3", 3, 3));

    list.push(chain("cx/hslat-A", &["0", "1/2", "1"]));
    list.push(chain("cx/hslat-B", &["0", "1"]));
    list.push(boolean("cx/hslat-C", 2));
    list.push(chain("cx/hslat-D", &["0", "1/2", "1"]));

    let mut algebras = BTreeMap::new();
    let mut order = Vec::new();
    for a in list {
        let profile = VarietyProfile::detect(&a).expect("builtin algebras use builtin signatures");
        let report = verify_identities(&a, &profile).expect("signature matches");
        assert!(report.passed(), "builtin `{}` fails its profile: {:?}", a.name(), report.failure);
        order.push(a.name().to_string());
        algebras.insert(a.name().to_string(), Arc::new(a));
    }

    // Subgroups of S3 used by the weighted-commutator fixtures.
    let s3 = algebras["S3"].clone();
    for (name, gen) in [("A3", "(123)"), ("C2", "(12)")] {
        let sub = generate_subuniverse(&s3, [s3.element(gen).unwrap()]).unwrap();
        let alg = sub.to_algebra().0.as_ref().clone().with_name(name);
        order.push(name.to_string());
        algebras.insert(name.to_string(), Arc::new(alg));
    }
    Library { algebras, order }
}

fn library() -> &'static Library {
    static LIB: OnceLock<Library> = OnceLock::new();
    LIB.get_or_init(build)
}

pub fn algebra(name: &str) -> Result<Arc<FinAlgebra>> {
    library()
        .algebras
        .get(name)
        .cloned()
        .ok_or_else(|| Error::UnknownName(format!("builtin algebra `{name}`")))
}

/// All builtin names in registration order.
pub fn names() -> Vec<String> {
    library().order.clone()
}

pub fn all() -> Vec<Arc<FinAlgebra>> {
    library().order.iter().map(|n| library().algebras[n].clone()).collect()
}

pub fn algebras_with_signature(sig: &Signature) -> Vec<Arc<FinAlgebra>> {
    all().into_iter().filter(|a| a.signature() == sig).collect()
}

/// Builtin groups of order at most `max`.
pub fn groups_up_to(max: usize) -> Vec<Arc<FinAlgebra>> {
    all().into_iter().filter(|a| a.is_group() && a.size() <= max).collect()
}

/// Builtin Heyting semilattices, excluding the duplicates registered under
/// the `cx/` prefix.
pub fn heyting_semilattices() -> Vec<Arc<FinAlgebra>> {
    all()
        .into_iter()
        .filter(|a| a.name().starts_with("hslat/"))
        .collect()
}

/// The seven maps of the published Heyting semilattice diagram, exactly as
/// printed (`γ` included).
pub fn hslat_counterexample_tables() -> Vec<HomTable> {
    let t = |name, dom, cod, map: &[usize]| HomTable {
        name,
        dom,
        cod,
        map: map.to_vec(),
    };
    vec![
        t("f", "cx/hslat-A", "cx/hslat-B", &[0, 1, 1]),
        t("r", "cx/hslat-B", "cx/hslat-A", &[0, 2]),
        t("g", "cx/hslat-C", "cx/hslat-B", &[0, 0, 1, 1]),
        t("s", "cx/hslat-B", "cx/hslat-C", &[0, 3]),
        t("alpha", "cx/hslat-A", "cx/hslat-D", &[0, 1, 2]),
        t("beta", "cx/hslat-B", "cx/hslat-D", &[0, 2]),
        t("gamma", "cx/hslat-C", "cx/hslat-D", &[0, 2, 2, 2]),
    ]
}

impl HomTable {
    pub fn to_hom(&self) -> Result<Hom> {
        Hom::new(algebra(self.dom)?, algebra(self.cod)?, self.map.clone())
    }
}

/// The inclusion `C2 = {e,(12)} ↪ S3`.
pub fn c2_in_s3() -> Hom {
    let c2 = algebra("C2").unwrap();
    let s3 = algebra("S3").unwrap();
    let map = c2.elements().map(|x| s3.element(&c2.label(x)).unwrap()).collect();
    Hom::new(c2, s3, map).unwrap()
}
