use std::sync::Arc;

use crate::algebra::FinAlgebra;
use crate::error::{Error, Result};
use crate::hom::Hom;
use crate::sub::same_parent;

/// The canonical maps `e1 = <1_A, s∘f>` and `e2 = <r∘g, 1_C>` into a pullback
/// of split epimorphisms.
#[derive(Debug, Clone)]
pub struct Sections {
    pub e1: Hom,
    pub e2: Hom,
}

/// A binary product or pullback with its projections.
#[derive(Debug, Clone)]
pub struct SpanWitness {
    pub carrier: Arc<FinAlgebra>,
    pub legs: [Hom; 2],
    pub induced: Option<Sections>,
    pairs: Vec<(usize, usize)>,
    index: Vec<usize>,
    right: usize,
}

impl SpanWitness {
    /// The pair of coordinates of carrier element `i`.
    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Carrier index of `(a, c)`, if that pair lies in the carrier.
    pub fn index_of(&self, a: usize, c: usize) -> Option<usize> {
        if c >= self.right {
            return None;
        }
        match self.index.get(a * self.right + c) {
            Some(&i) if i != usize::MAX => Some(i),
            _ => None,
        }
    }

    /// The map `D -> carrier` induced by a cone `(p: D -> A, q: D -> C)`.
    pub fn factor(&self, p: &Hom, q: &Hom) -> Result<Hom> {
        same_parent(p.dom(), q.dom())?;
        same_parent(p.cod(), self.legs[0].cod())?;
        same_parent(q.cod(), self.legs[1].cod())?;
        let map = p
            .map()
            .iter()
            .zip(q.map())
            .map(|(&a, &c)| {
                self.index_of(a, c)
                    .ok_or_else(|| Error::Mismatch("cone does not land in the pullback".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Hom::new_unchecked(p.dom().clone(), self.carrier.clone(), map))
    }
}

/// Subalgebra of `A × C` on the pairs satisfying `keep`, ordered
/// lexicographically.
fn fibred(
    name: String,
    a: &Arc<FinAlgebra>,
    c: &Arc<FinAlgebra>,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<SpanWitness> {
    a.same_signature(c)?;
    let (na, nc) = (a.size(), c.size());
    let mut pairs = Vec::new();
    let mut index = vec![usize::MAX; na * nc];
    for x in 0..na {
        for y in 0..nc {
            if keep(x, y) {
                index[x * nc + y] = pairs.len();
                pairs.push((x, y));
            }
        }
    }
    let group = match (a.group_ops(), c.group_ops()) {
        (Some(g), Some(h)) if g == h => Some(g),
        _ => None,
    };
    let mut left = Vec::new();
    let mut right = Vec::new();
    let carrier = FinAlgebra::from_fn(name, a.signature().clone(), pairs.len(), |op, args| {
        left.clear();
        right.clear();
        left.extend(args.iter().map(|&i| pairs[i].0));
        right.extend(args.iter().map(|&i| pairs[i].1));
        let (u, v) = (a.apply(op, &left), c.apply(op, &right));
        index[u * nc + v]
    })
    .map_err(|e| Error::Internal(format!("pullback not closed: {e}")))?
    .with_group_ops(group);
    let labels = pairs
        .iter()
        .map(|&(x, y)| format!("({},{})", a.label(x), c.label(y)))
        .collect();
    let carrier = Arc::new(carrier.with_labels(labels)?);
    let p1 = Hom::new_unchecked(carrier.clone(), a.clone(), pairs.iter().map(|p| p.0).collect());
    let p2 = Hom::new_unchecked(carrier.clone(), c.clone(), pairs.iter().map(|p| p.1).collect());
    Ok(SpanWitness {
        carrier,
        legs: [p1, p2],
        induced: None,
        pairs,
        index,
        right: nc,
    })
}

pub fn product(a: &Arc<FinAlgebra>, b: &Arc<FinAlgebra>) -> Result<SpanWitness> {
    fibred(format!("{}x{}", a.name(), b.name()), a, b, |_, _| true)
}

/// `A ×_B C = {(a, c) : f(a) = g(c)}`.
pub fn pullback(f: &Hom, g: &Hom) -> Result<SpanWitness> {
    same_parent(f.cod(), g.cod()).map_err(|_| {
        Error::Mismatch(format!(
            "pullback needs a common codomain, got `{}` and `{}`",
            f.cod().name(),
            g.cod().name()
        ))
    })?;
    fibred(
        format!("{}x[{}]{}", f.dom().name(), f.cod().name(), g.dom().name()),
        f.dom(),
        g.dom(),
        |x, y| f.apply(x) == g.apply(y),
    )
}

/// Pullback of split epimorphisms `f` (split by `r`) and `g` (split by
/// `s`), with `e1` and `e2` attached.
pub fn pullback_split(f: &Hom, r: &Hom, g: &Hom, s: &Hom) -> Result<SpanWitness> {
    if !r.then(f)?.is_identity() {
        return Err(Error::Precondition("f∘r is not the identity".into()));
    }
    if !s.then(g)?.is_identity() {
        return Err(Error::Precondition("g∘s is not the identity".into()));
    }
    let mut w = pullback(f, g)?;
    let e1 = w.factor(&Hom::identity(f.dom().clone()), &f.then(s)?)?;
    let e2 = w.factor(&g.then(r)?, &Hom::identity(g.dom().clone()))?;
    w.induced = Some(Sections { e1, e2 });
    Ok(w)
}

/// A split epimorphism `proj: total -> base` with section `sect`.
#[derive(Debug, Clone)]
pub struct PointObject {
    pub total: Arc<FinAlgebra>,
    pub base: Arc<FinAlgebra>,
    pub proj: Hom,
    pub sect: Hom,
}

impl PointObject {
    pub fn new(proj: Hom, sect: Hom) -> Result<Self> {
        same_parent(proj.cod(), sect.dom())?;
        same_parent(proj.dom(), sect.cod())?;
        if !sect.then(&proj)?.is_identity() {
            return Err(Error::Precondition("proj∘sect is not the identity".into()));
        }
        Ok(PointObject {
            total: proj.dom().clone(),
            base: proj.cod().clone(),
            proj,
            sect,
        })
    }

    /// The point `A × B ⇄ B` given by the second projection.
    pub fn trivial(a: &Arc<FinAlgebra>, b: &Arc<FinAlgebra>) -> Result<Self> {
        let w = product(a, b)?;
        let zero = Hom::zero(b.clone(), a.clone())?;
        let sect = w.factor(&zero, &Hom::identity(b.clone()))?;
        let [_, p2] = w.legs;
        PointObject::new(p2, sect)
    }
}

/// Change of base of `pt` along `p: E -> B`.
pub fn pullback_point(p: &Hom, pt: &PointObject) -> Result<(PointObject, SpanWitness)> {
    same_parent(p.cod(), &pt.base).map_err(|_| {
        Error::Mismatch(format!(
            "point lives over `{}` but the base change targets `{}`",
            pt.base.name(),
            p.cod().name()
        ))
    })?;
    let w = pullback(&pt.proj, p)?;
    let sect = w.factor(&p.then(&pt.sect)?, &Hom::identity(p.dom().clone()))?;
    let point = PointObject::new(w.legs[1].clone(), sect)?;
    Ok((point, w))
}
