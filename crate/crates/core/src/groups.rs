//! Concrete finite groups in the `mul/inv/e` signature. Element 0 is always
//! the identity.

use std::collections::{BTreeSet, HashMap};

use crate::algebra::{FinAlgebra, Signature};
use crate::error::Result;

/// Builds a group from a multiplication closure on `0..n` with identity 0.
pub fn from_mul(
    name: &str,
    n: usize,
    labels: Vec<String>,
    mul: impl Fn(usize, usize) -> usize,
) -> Result<FinAlgebra> {
    let sig = Signature::group();
    let (m, i) = (sig.op_index("mul").unwrap(), sig.op_index("inv").unwrap());
    let inv: Vec<usize> = (0..n)
        .map(|a| (0..n).find(|&b| mul(a, b) == 0).unwrap_or(0))
        .collect();
    FinAlgebra::from_fn(name, sig, n, |op, args| {
        if op == m {
            mul(args[0], args[1])
        } else if op == i {
            inv[args[0]]
        } else {
            0
        }
    })?
    .with_labels(labels)
}

pub fn cyclic(n: usize) -> FinAlgebra {
    from_mul(
        &format!("Z{n}"),
        n,
        (0..n).map(|k| k.to_string()).collect(),
        |a, b| (a + b) % n,
    )
    .expect("cyclic group")
}

/// Direct product with lexicographic element order and labels `(a,b)`.
pub fn direct_product(name: &str, g: &FinAlgebra, h: &FinAlgebra) -> FinAlgebra {
    let nh = h.size();
    let labels = (0..g.size() * nh)
        .map(|x| format!("({},{})", g.label(x / nh), h.label(x % nh)))
        .collect();
    from_mul(name, g.size() * nh, labels, |x, y| {
        g.mul(x / nh, y / nh) * nh + h.mul(x % nh, y % nh)
    })
    .expect("direct product of groups")
}

/// Dicyclic group of order `4n`: `a` of order `2n`, `x² = aⁿ`,
/// `x a x⁻¹ = a⁻¹`. Element `k + 2n·j` stands for `a^k x^j`.
pub fn dicyclic(name: &str, n: usize) -> FinAlgebra {
    let m = 2 * n;
    let labels = (0..2 * m)
        .map(|x| {
            let (k, j) = (x % m, x / m);
            match (k, j) {
                (0, 0) => "e".to_string(),
                (1, 0) => "a".to_string(),
                (k, 0) => format!("a^{k}"),
                (0, _) => "x".to_string(),
                (1, _) => "ax".to_string(),
                (k, _) => format!("a^{k}x"),
            }
        })
        .collect();
    from_mul(name, 2 * m, labels, |p, q| {
        let (k, j) = (p % m, p / m);
        let (l, i) = (q % m, q / m);
        match (j, i) {
            (0, _) => (k + l) % m + m * i,
            (_, 0) => (k + m - l) % m + m,
            _ => (k + m - l + n) % m,
        }
    })
    .expect("dicyclic group")
}

type Perm = Vec<u8>;

fn compose(p: &Perm, q: &Perm) -> Perm {
    // (p q)(i) = p(q(i)): apply q first.
    q.iter().map(|&i| p[i as usize]).collect()
}

/// Cycle notation with 1-based points; the identity prints as `e`.
pub fn cycle_label(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

fn parse_cycles(degree: usize, cycles: &[&[u8]]) -> Perm {
    let mut p: Perm = (0..degree as u8).collect();
    for c in cycles {
        for w in 0..c.len() {
            p[(c[w] - 1) as usize] = c[(w + 1) % c.len()] - 1;
        }
    }
    p
}

/// Permutation group on `degree` points generated by the given cycles
/// (1-based). Elements are ordered by support size, then by cycle label,
/// so the identity comes first.
pub fn perm_group(name: &str, degree: usize, gens: &[&[&[u8]]]) -> FinAlgebra {
    let gens: Vec<Perm> = gens.iter().map(|g| parse_cycles(degree, g)).collect();
    let id: Perm = (0..degree as u8).collect();
    let mut all: BTreeSet<Perm> = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in &gens {
            let q = compose(&p, g);
            if all.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    let mut elems: Vec<Perm> = all.into_iter().collect();
    let support = |p: &Perm| p.iter().enumerate().filter(|(i, &x)| *i != x as usize).count();
    elems.sort_by_key(|p| (support(p), cycle_label(p).len(), cycle_label(p)));
    let pos: HashMap<Perm, usize> = elems.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let labels = elems.iter().map(|p| cycle_label(p)).collect();
    from_mul(name, elems.len(), labels, |a, b| pos[&compose(&elems[a], &elems[b])]).expect("permutation group")
}

/// Symmetric group on 3 points.
pub fn s3() -> FinAlgebra {
    perm_group("S3", 3, &[&[&[1, 2]], &[&[1, 2, 3]]])
}

pub fn s4() -> FinAlgebra {
    perm_group("S4", 4, &[&[&[1, 2]], &[&[1, 2, 3, 4]]])
}

pub fn a4() -> FinAlgebra {
    perm_group("A4", 4, &[&[&[1, 2, 3]], &[&[1, 2], &[3, 4]]])
}

/// Dihedral group of order `2n` acting on an `n`-gon.
pub fn dihedral(name: &str, n: usize) -> FinAlgebra {
    let rot: Vec<u8> = (1..=n as u8).collect();
    let refl: Vec<Vec<u8>> = (1..=n as u8 / 2).map(|i| vec![i, n as u8 + 1 - i]).collect();
    let refl: Vec<&[u8]> = refl.iter().map(|c| c.as_slice()).collect();
    perm_group(name, n, &[&[rot.as_slice()], &refl])
}
