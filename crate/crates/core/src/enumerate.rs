//! Exhaustive enumeration of subuniverse and congruence lattices of small
//! algebras.

use std::collections::HashSet;
use std::sync::Arc;

use crate::algebra::FinAlgebra;
use crate::congruence::{generate_congruence, Congruence};
use crate::error::Result;
use crate::sub::{generate_subuniverse, Subuniverse};

/// Every subuniverse, found by repeatedly adjoining single elements to known
/// ones. Output is sorted by size, then members.
pub fn all_subuniverses(a: &Arc<FinAlgebra>) -> Result<Vec<Subuniverse>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = vec![Subuniverse::trivial(a.clone())];
    seen.insert(out[0].members().to_vec());
    let mut head = 0;
    while head < out.len() {
        let s = out[head].clone();
        head += 1;
        for x in a.elements() {
            if s.contains(x) {
                continue;
            }
            let t = generate_subuniverse(a, s.members().iter().copied().chain([x]))?;
            if seen.insert(t.members().to_vec()) {
                out.push(t);
            }
        }
    }
    out.sort_by(|p, q| (p.len(), p.members()).cmp(&(q.len(), q.members())));
    Ok(out)
}

/// Cyclic (one-generated) subuniverses, deduplicated.
pub fn principal_subuniverses(a: &Arc<FinAlgebra>) -> Result<Vec<Subuniverse>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in a.elements() {
        let s = generate_subuniverse(a, [x])?;
        if seen.insert(s.members().to_vec()) {
            out.push(s);
        }
    }
    out.sort_by(|p, q| (p.len(), p.members()).cmp(&(q.len(), q.members())));
    Ok(out)
}

/// Every congruence, as joins of principal congruences. Sorted by number of
/// blocks, descending (Δ first).
pub fn all_congruences(a: &Arc<FinAlgebra>) -> Result<Vec<Congruence>> {
    let mut principal = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let delta = Congruence::identity(a.clone());
    seen.insert(delta.block_ids().to_vec());
    for x in a.elements() {
        for y in (x + 1)..a.size() {
            let c = generate_congruence(a, [(x, y)])?;
            if seen.insert(c.block_ids().to_vec()) {
                principal.push(c);
            }
        }
    }
    let mut out = vec![delta];
    out.extend(principal.iter().cloned());
    let mut head = 1;
    while head < out.len() {
        let c = out[head].clone();
        head += 1;
        for p in &principal {
            let j = c.join(p)?;
            if seen.insert(j.block_ids().to_vec()) {
                out.push(j);
            }
        }
    }
    out.sort_by(|p, q| {
        q.num_blocks()
            .cmp(&p.num_blocks())
            .then_with(|| p.block_ids().cmp(q.block_ids()))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn subgroup_counts() {
        for (name, n) in [("Z4", 3), ("S3", 6), ("D4", 10), ("Q8", 6), ("A4", 10), ("S4", 30)] {
            let g = library::algebra(name).unwrap();
            assert_eq!(all_subuniverses(&g).unwrap().len(), n, "{name}");
        }
    }

    #[test]
    fn normal_subgroup_counts() {
        for (name, n) in [("Z4", 3), ("S3", 3), ("D4", 6), ("Q8", 6), ("A4", 3), ("Z2xZ4", 8)] {
            let g = library::algebra(name).unwrap();
            assert_eq!(all_congruences(&g).unwrap().len(), n, "{name}");
        }
    }

    #[test]
    fn heyting_congruences_match_filters() {
        // Congruences of a finite Heyting semilattice correspond to its
        // filters, i.e. principal up-sets in the finite case.
        for a in library::heyting_semilattices() {
            assert_eq!(all_congruences(&a).unwrap().len(), a.size(), "{}", a.name());
        }
    }
}
