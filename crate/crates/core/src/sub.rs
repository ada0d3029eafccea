use std::fmt;
use std::sync::Arc;

use crate::algebra::FinAlgebra;
use crate::closure::TupleClosure;
use crate::error::{Error, Result};
use crate::hom::Hom;

/// A subset of an algebra's carrier that contains the basepoint and is closed
/// under every operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subuniverse {
    parent: Arc<FinAlgebra>,
    members: Vec<usize>,
}

impl Subuniverse {
    /// Accepts `members` only after re-scanning every operation.
    pub fn new(parent: Arc<FinAlgebra>, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            parent.check_index(m)?;
        }
        let sub = Subuniverse { parent, members };
        sub.validate()?;
        Ok(sub)
    }

    pub(crate) fn from_sorted_unchecked(parent: Arc<FinAlgebra>, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Subuniverse { parent, members }
    }

    pub fn trivial(parent: Arc<FinAlgebra>) -> Self {
        let bp = parent.basepoint();
        Subuniverse {
            parent,
            members: vec![bp],
        }
    }

    pub fn full(parent: Arc<FinAlgebra>) -> Self {
        let members = parent.elements().collect();
        Subuniverse { parent, members }
    }

    pub fn parent(&self) -> &Arc<FinAlgebra> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// True when the subuniverse is `{basepoint}`.
    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1 && self.members[0] == self.parent.basepoint()
    }

    pub fn is_subset_of(&self, other: &Subuniverse) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.parent.size()];
        for &x in &self.members {
            m[x] = true;
        }
        m
    }

    /// Re-checks closure under every operation.
    pub fn validate(&self) -> Result<()> {
        let a = &*self.parent;
        let fail = |reason: String| Error::NotSubuniverse {
            algebra: a.name().to_string(),
            reason,
        };
        if !self.contains(a.basepoint()) {
            return Err(fail("basepoint missing".into()));
        }
        let mask = self.mask();
        let mut args = Vec::new();
        for (op, spec) in a.signature().ops().iter().enumerate() {
            let k = spec.arity;
            let m = self.members.len();
            let total = crate::algebra::checked_pow(m, k).ok_or_else(|| fail("too many tuples".into()))?;
            for code in 0..total {
                crate::algebra::decode_tuple(code, m, k, &mut args);
                for x in args.iter_mut() {
                    *x = self.members[*x];
                }
                let v = a.apply(op, &args);
                if !mask[v] {
                    return Err(fail(format!(
                        "{}({}) = {} leaves the set",
                        spec.name,
                        args.iter().map(|&x| a.label(x)).collect::<Vec<_>>().join(","),
                        a.label(v)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The subalgebra as a standalone algebra (elements renumbered in
    /// ascending order) together with its inclusion.
    pub fn to_algebra(&self) -> (Arc<FinAlgebra>, Hom) {
        let a = &*self.parent;
        let mut pos = vec![usize::MAX; a.size()];
        for (i, &m) in self.members.iter().enumerate() {
            pos[m] = i;
        }
        let members = &self.members;
        let sub = FinAlgebra::from_fn(
            format!("{}<{}>", a.name(), members.len()),
            a.signature().clone(),
            members.len(),
            |op, args| {
                let lifted: Vec<usize> = args.iter().map(|&x| members[x]).collect();
                pos[a.apply(op, &lifted)]
            },
        )
        .expect("closed subset yields valid tables")
        .with_group_ops(a.group_ops());
        let sub = match a.labels() {
            Some(l) => sub
                .with_labels(members.iter().map(|&m| l[m].clone()).collect())
                .expect("labels stay unique"),
            None => sub,
        };
        let sub = Arc::new(sub);
        let incl = Hom::new_unchecked(sub.clone(), self.parent.clone(), members.clone());
        (sub, incl)
    }

    pub fn intersection(&self, other: &Subuniverse) -> Result<Subuniverse> {
        same_parent(&self.parent, &other.parent)?;
        let members = self.members.iter().copied().filter(|&m| other.contains(m)).collect();
        Ok(Subuniverse::from_sorted_unchecked(self.parent.clone(), members))
    }

    /// Least subuniverse containing both.
    pub fn join(&self, other: &Subuniverse) -> Result<Subuniverse> {
        same_parent(&self.parent, &other.parent)?;
        let gens = self.members.iter().chain(&other.members).copied();
        generate_subuniverse(&self.parent, gens)
    }

    pub fn labels(&self) -> Vec<String> {
        self.members.iter().map(|&m| self.parent.label(m)).collect()
    }
}

impl fmt::Display for Subuniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(", "))
    }
}

pub(crate) fn same_parent(a: &Arc<FinAlgebra>, b: &Arc<FinAlgebra>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::Mismatch(format!(
            "`{}` and `{}` are different algebras",
            a.name(),
            b.name()
        )))
    }
}

/// Least subuniverse containing `gens` and the basepoint, computed by
/// work-list closure over the operation tables.
pub fn generate_subuniverse(
    a: &Arc<FinAlgebra>,
    gens: impl IntoIterator<Item = usize>,
) -> Result<Subuniverse> {
    let gens: Vec<Vec<usize>> = gens.into_iter().map(|g| vec![g]).collect();
    let cl = TupleClosure::generate(vec![a.as_ref()], &gens)?;
    let mut members: Vec<usize> = cl.iter().map(|t| t[0]).collect();
    members.sort_unstable();
    Ok(Subuniverse::from_sorted_unchecked(a.clone(), members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn spec_examples() {
        let z4 = library::algebra("Z4").unwrap();
        assert_eq!(generate_subuniverse(&z4, [2]).unwrap().members(), &[0, 2]);
        let s3 = library::algebra("S3").unwrap();
        let t = s3.element("(12)").unwrap();
        let c = s3.element("(123)").unwrap();
        assert_eq!(generate_subuniverse(&s3, [t, c]).unwrap().len(), 6);
        let ch = library::algebra("hslat/chain3").unwrap();
        let half = ch.element("1/2").unwrap();
        let s = generate_subuniverse(&ch, [half]).unwrap();
        assert_eq!(s.labels(), vec!["1/2", "1"]);
    }

    #[test]
    fn out_of_range_generator() {
        let z4 = library::algebra("Z4").unwrap();
        assert!(matches!(
            generate_subuniverse(&z4, [7]),
            Err(Error::IndexOutOfRange { index: 7, .. })
        ));
    }

    #[test]
    fn new_rejects_non_closed_sets() {
        let z4 = library::algebra("Z4").unwrap();
        assert!(Subuniverse::new(z4.clone(), [0, 1]).is_err());
        assert!(Subuniverse::new(z4.clone(), [2]).is_err());
        assert!(Subuniverse::new(z4, [0, 2]).is_ok());
    }

    #[test]
    fn to_algebra_keeps_labels() {
        let s3 = library::algebra("S3").unwrap();
        let a3 = generate_subuniverse(&s3, [s3.element("(123)").unwrap()]).unwrap();
        let (alg, incl) = a3.to_algebra();
        assert_eq!(alg.size(), 3);
        assert!(alg.is_group());
        assert!(crate::hom::check_hom(&alg, &s3, incl.map()).is_ok());
        assert!(alg.element("(132)").is_ok());
    }
}
