use std::fmt;
use std::sync::Arc;

use crate::algebra::{decode_tuple, FinAlgebra};
use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::sub::Subuniverse;

/// A validated homomorphism between finite algebras of one signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hom {
    dom: Arc<FinAlgebra>,
    cod: Arc<FinAlgebra>,
    map: Vec<usize>,
}

impl Hom {
    pub fn new(dom: Arc<FinAlgebra>, cod: Arc<FinAlgebra>, map: Vec<usize>) -> Result<Self> {
        check_hom(&dom, &cod, &map)?;
        Ok(Hom { dom, cod, map })
    }

    pub(crate) fn new_unchecked(dom: Arc<FinAlgebra>, cod: Arc<FinAlgebra>, map: Vec<usize>) -> Self {
        debug_assert!(check_hom(&dom, &cod, &map).is_ok());
        Hom { dom, cod, map }
    }

    pub fn identity(a: Arc<FinAlgebra>) -> Self {
        let map = a.elements().collect();
        Hom {
            dom: a.clone(),
            cod: a,
            map,
        }
    }

    /// The constant map onto the basepoint.
    pub fn zero(dom: Arc<FinAlgebra>, cod: Arc<FinAlgebra>) -> Result<Self> {
        dom.same_signature(&cod)?;
        let map = vec![cod.basepoint(); dom.size()];
        Ok(Hom { dom, cod, map })
    }

    pub fn dom(&self) -> &Arc<FinAlgebra> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinAlgebra> {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Hom) -> Result<Hom> {
        crate::sub::same_parent(&self.cod, &other.dom)
            .map_err(|_| Error::Mismatch(format!("cannot compose into `{}` from `{}`", other.dom.name(), self.cod.name())))?;
        let map = self.map.iter().map(|&x| other.map[x]).collect();
        Ok(Hom {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            map,
        })
    }

    pub fn is_identity(&self) -> bool {
        (Arc::ptr_eq(&self.dom, &self.cod) || self.dom == self.cod)
            && self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.size()];
        for &x in &self.map {
            hit[x] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.cod.size()];
        self.map.iter().all(|&x| !std::mem::replace(&mut hit[x], true))
    }
}

impl fmt::Display for Hom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: [", self.dom.name(), self.cod.name())?;
        for (i, &x) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}↦{}", self.dom.label(i), self.cod.label(x))?;
        }
        write!(f, "]")
    }
}

/// Checks that `map` preserves every operation table and the basepoint,
/// reporting the first violated `(op, tuple)`.
pub fn check_hom(dom: &FinAlgebra, cod: &FinAlgebra, map: &[usize]) -> Result<()> {
    let fail = |reason: String| Error::NotHomomorphism {
        dom: dom.name().to_string(),
        cod: cod.name().to_string(),
        reason,
    };
    dom.same_signature(cod)?;
    if map.len() != dom.size() {
        return Err(fail(format!(
            "map has {} entries for {} elements",
            map.len(),
            dom.size()
        )));
    }
    if let Some((i, &x)) = map.iter().enumerate().find(|(_, &x)| x >= cod.size()) {
        return Err(fail(format!("image of {} is {}, out of range", dom.label(i), x)));
    }
    if map[dom.basepoint()] != cod.basepoint() {
        return Err(fail(format!(
            "basepoint not preserved: {} ↦ {}, expected {}",
            dom.label(dom.basepoint()),
            cod.label(map[dom.basepoint()]),
            cod.label(cod.basepoint())
        )));
    }
    let mut args = Vec::new();
    let mut imgs = Vec::new();
    let n = dom.size();
    for (op, spec) in dom.signature().ops().iter().enumerate() {
        let total = crate::algebra::checked_pow(n, spec.arity).unwrap_or(0);
        for code in 0..total {
            decode_tuple(code, n, spec.arity, &mut args);
            imgs.clear();
            imgs.extend(args.iter().map(|&a| map[a]));
            let lhs = map[dom.table(op)[code]];
            let rhs = cod.apply(op, &imgs);
            if lhs != rhs {
                let shown: Vec<String> = args.iter().map(|&a| dom.label(a)).collect();
                let shown_img: Vec<String> = imgs.iter().map(|&a| cod.label(a)).collect();
                return Err(fail(format!(
                    "{op}({a}) = {v} maps to {lhs}, but {op}({b}) = {rhs}",
                    op = spec.name,
                    a = shown.join(","),
                    v = dom.label(dom.table(op)[code]),
                    lhs = cod.label(lhs),
                    b = shown_img.join(","),
                    rhs = cod.label(rhs),
                )));
            }
        }
    }
    Ok(())
}

/// `{a : f(a) = basepoint}`.
pub fn kernel_sub(f: &Hom) -> Subuniverse {
    let bp = f.cod.basepoint();
    let members = f
        .map
        .iter()
        .enumerate()
        .filter(|(_, &x)| x == bp)
        .map(|(i, _)| i)
        .collect();
    Subuniverse::from_sorted_unchecked(f.dom.clone(), members)
}

/// The kernel pair `{(a, a') : f(a) = f(a')}`.
pub fn kernel_pair(f: &Hom) -> Congruence {
    let mut first = vec![usize::MAX; f.cod.size()];
    let mut block = vec![0; f.dom.size()];
    for (a, &x) in f.map.iter().enumerate() {
        if first[x] == usize::MAX {
            first[x] = a;
        }
        block[a] = first[x];
    }
    Congruence::from_blocks_unchecked(f.dom.clone(), block)
}

pub fn image_sub(f: &Hom) -> Subuniverse {
    let mut members = f.map.clone();
    members.sort_unstable();
    members.dedup();
    Subuniverse::from_sorted_unchecked(f.cod.clone(), members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;

    #[test]
    fn spec_examples() {
        let z4 = library::algebra("Z4").unwrap();
        let z2 = library::algebra("Z2").unwrap();
        let mod2: Vec<usize> = (0..4).map(|x| x % 2).collect();
        assert!(check_hom(&z4, &z2, &mod2).is_ok());
        let shift: Vec<usize> = (0..4).map(|x| (x + 1) % 4).collect();
        let err = check_hom(&z4, &z4, &shift).unwrap_err();
        assert!(err.to_string().contains("basepoint not preserved"), "{err}");

        let f = Hom::new(z4.clone(), z2, mod2).unwrap();
        assert_eq!(kernel_pair(&f).blocks(), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(kernel_sub(&f).members(), &[0, 2]);
        let id = Hom::identity(z4.clone());
        assert!(kernel_pair(&id).is_identity());
        assert!(kernel_sub(&id).is_trivial());
    }

    #[test]
    fn zero_morphism() {
        let s3 = library::algebra("S3").unwrap();
        let one = library::algebra("Z1").unwrap();
        let z = Hom::zero(s3.clone(), one).unwrap();
        assert!(kernel_pair(&z).is_total());
        let z = Hom::zero(s3.clone(), s3.clone()).unwrap();
        assert!(image_sub(&z).is_trivial());
    }

    #[test]
    fn image_of_involution_inclusion() {
        let s3 = library::algebra("S3").unwrap();
        let t = s3.element("(12)").unwrap();
        let c2 = crate::sub::generate_subuniverse(&s3, [t]).unwrap();
        let (_, incl) = c2.to_algebra();
        assert_eq!(image_sub(&incl).labels(), vec!["e", "(12)"]);
    }

    #[test]
    fn witness_names_the_operation() {
        let z4 = library::algebra("Z4").unwrap();
        let bad = vec![0, 1, 0, 1];
        let err = check_hom(&z4, &z4, &bad).unwrap_err().to_string();
        assert!(err.contains("mul("), "{err}");
    }
}
