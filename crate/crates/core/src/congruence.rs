use std::fmt;
use std::sync::Arc;

use crate::algebra::{checked_pow, decode_tuple, FinAlgebra};
use crate::error::{Error, Result};
use crate::hom::Hom;
use crate::sub::{same_parent, Subuniverse};

/// A congruence stored as a block id per element, the id being the least
/// member of the block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    parent: Arc<FinAlgebra>,
    block: Vec<usize>,
}

impl Congruence {
    /// Builds a congruence from any block labelling (labels are arbitrary
    /// integers; equal labels mean related) and validates compatibility.
    pub fn from_labels(parent: Arc<FinAlgebra>, labels: &[usize]) -> Result<Self> {
        if labels.len() != parent.size() {
            return Err(Error::NotCongruence {
                algebra: parent.name().to_string(),
                reason: format!("{} labels for {} elements", labels.len(), parent.size()),
            });
        }
        let mut first = std::collections::HashMap::new();
        let block = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| *first.entry(l).or_insert(i))
            .collect();
        let c = Congruence { parent, block };
        c.validate()?;
        Ok(c)
    }

    /// Builds from explicit blocks; elements not mentioned are singletons.
    pub fn from_blocks(parent: Arc<FinAlgebra>, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels: Vec<usize> = parent.elements().collect();
        let mut seen = vec![false; parent.size()];
        for b in blocks {
            let Some(&head) = b.first() else { continue };
            for &x in b {
                parent.check_index(x)?;
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::NotCongruence {
                        algebra: parent.name().to_string(),
                        reason: format!("{} appears in two blocks", parent.label(x)),
                    });
                }
                labels[x] = head;
            }
        }
        Self::from_labels(parent, &labels)
    }

    pub(crate) fn from_blocks_unchecked(parent: Arc<FinAlgebra>, block: Vec<usize>) -> Self {
        debug_assert!(block.iter().enumerate().all(|(i, &b)| b <= i && block[b] == b));
        Congruence { parent, block }
    }

    /// Δ.
    pub fn identity(parent: Arc<FinAlgebra>) -> Self {
        let block = parent.elements().collect();
        Congruence { parent, block }
    }

    /// ∇.
    pub fn total(parent: Arc<FinAlgebra>) -> Self {
        let block = vec![0; parent.size()];
        Congruence { parent, block }
    }

    pub fn parent(&self) -> &Arc<FinAlgebra> {
        &self.parent
    }

    /// Block id (least member) of `x`.
    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.block[x]
    }

    pub fn block_ids(&self) -> &[usize] {
        &self.block
    }

    #[inline]
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.block[a] == self.block[b]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.block.len()];
        for (x, &b) in self.block.iter().enumerate() {
            if slot[b] == usize::MAX {
                slot[b] = out.len();
                out.push(Vec::new());
            }
            out[slot[b]].push(x);
        }
        out
    }

    pub fn num_blocks(&self) -> usize {
        self.block.iter().enumerate().filter(|(i, &b)| *i == b).count()
    }

    pub fn is_identity(&self) -> bool {
        self.block.iter().enumerate().all(|(i, &b)| i == b)
    }

    pub fn is_total(&self) -> bool {
        self.block.iter().all(|&b| b == 0)
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Congruence) -> bool {
        self.block
            .iter()
            .enumerate()
            .all(|(x, &b)| other.related(x, b))
    }

    /// Related pairs `(a, b)` with `a < b`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.block.len();
        (0..n).flat_map(move |a| ((a + 1)..n).filter(move |&b| self.related(a, b)).map(move |b| (a, b)))
    }

    /// The basepoint class as a subuniverse.
    pub fn zero_class(&self) -> Subuniverse {
        let bp = self.parent.basepoint();
        let members = (0..self.block.len()).filter(|&x| self.related(x, bp)).collect();
        Subuniverse::from_sorted_unchecked(self.parent.clone(), members)
    }

    pub fn meet(&self, other: &Congruence) -> Result<Congruence> {
        same_parent(&self.parent, &other.parent)?;
        let n = self.block.len();
        let mut first = std::collections::HashMap::new();
        let block = (0..n)
            .map(|x| *first.entry((self.block[x], other.block[x])).or_insert(x))
            .collect();
        Ok(Congruence::from_blocks_unchecked(self.parent.clone(), block))
    }

    /// Join in the congruence lattice (transitive closure of the union).
    pub fn join(&self, other: &Congruence) -> Result<Congruence> {
        same_parent(&self.parent, &other.parent)?;
        let mut uf = UnionFind::from_blocks(&self.block);
        for (x, &b) in other.block.iter().enumerate() {
            uf.union(x, b);
        }
        Ok(Congruence::from_blocks_unchecked(self.parent.clone(), uf.canonical()))
    }

    /// Re-checks that the partition is compatible with every operation via
    /// one-step translations.
    pub fn validate(&self) -> Result<()> {
        let a = &*self.parent;
        let n = a.size();
        if self.block.len() != n || self.block.iter().enumerate().any(|(i, &b)| b > i || self.block[b] != b) {
            return Err(Error::NotCongruence {
                algebra: a.name().to_string(),
                reason: "block ids are not canonical".into(),
            });
        }
        let mut args = Vec::new();
        for (op, spec) in a.signature().ops().iter().enumerate() {
            let k = spec.arity;
            if k == 0 {
                continue;
            }
            let rest = checked_pow(n, k - 1).ok_or_else(|| Error::NotCongruence {
                algebra: a.name().to_string(),
                reason: "operation too large to scan".into(),
            })?;
            for x in 0..n {
                let y = self.block[x];
                if x == y {
                    continue;
                }
                for pos in 0..k {
                    for code in 0..rest {
                        decode_tuple(code, n, k - 1, &mut args);
                        args.insert(pos, x);
                        let u = a.apply(op, &args);
                        args[pos] = y;
                        let v = a.apply(op, &args);
                        if !self.related(u, v) {
                            return Err(Error::NotCongruence {
                                algebra: a.name().to_string(),
                                reason: format!(
                                    "{} ~ {} but {}(..) gives {} and {}",
                                    a.label(x),
                                    a.label(y),
                                    spec.name,
                                    a.label(u),
                                    a.label(v)
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks()
            .into_iter()
            .map(|b| {
                let l: Vec<String> = b.iter().map(|&x| self.parent.label(x)).collect();
                format!("{{{}}}", l.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn from_blocks(block: &[usize]) -> Self {
        UnionFind {
            parent: block.to_vec(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            let p = self.parent[x];
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    /// Returns true if two classes were merged. The smaller root wins, so
    /// roots stay least members.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub(crate) fn canonical(mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|x| self.find(x)).collect()
    }
}

/// Least congruence containing `pairs`.
pub fn generate_congruence(
    a: &Arc<FinAlgebra>,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Result<Congruence> {
    extend_congruence(&Congruence::identity(a.clone()), pairs)
}

/// Least congruence containing `base` and `pairs`. Only pairs that actually
/// merge two classes are propagated through one-step translations, since
/// `base` is already compatible.
pub fn extend_congruence(
    base: &Congruence,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Result<Congruence> {
    let a = &*base.parent;
    let n = a.size();
    let mut uf = UnionFind::from_blocks(&base.block);
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for (x, y) in pairs {
        a.check_index(x)?;
        a.check_index(y)?;
        if uf.union(x, y) {
            queue.push((x, y));
        }
    }
    let ops: Vec<(usize, usize)> = a
        .signature()
        .ops()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.arity > 0)
        .map(|(i, s)| (i, s.arity))
        .collect();
    let mut args = Vec::new();
    let mut head = 0;
    while head < queue.len() {
        let (x, y) = queue[head];
        head += 1;
        for &(op, k) in &ops {
            if k == 1 {
                let t = a.table(op);
                let (u, v) = (t[x], t[y]);
                if uf.union(u, v) {
                    queue.push((u, v));
                }
                continue;
            }
            if k == 2 {
                let t = a.table(op);
                for z in 0..n {
                    let (u, v) = (t[x * n + z], t[y * n + z]);
                    if uf.union(u, v) {
                        queue.push((u, v));
                    }
                    let (u, v) = (t[z * n + x], t[z * n + y]);
                    if uf.union(u, v) {
                        queue.push((u, v));
                    }
                }
                continue;
            }
            let rest = checked_pow(n, k - 1).ok_or_else(|| Error::Precondition("operation too large".into()))?;
            for pos in 0..k {
                for code in 0..rest {
                    decode_tuple(code, n, k - 1, &mut args);
                    args.insert(pos, x);
                    let u = a.apply(op, &args);
                    args[pos] = y;
                    let v = a.apply(op, &args);
                    if uf.union(u, v) {
                        queue.push((u, v));
                    }
                }
            }
        }
    }
    Ok(Congruence::from_blocks_unchecked(base.parent.clone(), uf.canonical()))
}

/// `A/θ` with block representatives (least members) in ascending order, and
/// the canonical surjection.
pub fn quotient(theta: &Congruence) -> Result<(Arc<FinAlgebra>, Hom)> {
    theta.validate()?;
    let a = &theta.parent;
    let reps: Vec<usize> = (0..a.size()).filter(|&x| theta.block[x] == x).collect();
    let mut pos = vec![0; a.size()];
    for (i, &r) in reps.iter().enumerate() {
        pos[r] = i;
    }
    let map: Vec<usize> = theta.block.iter().map(|&b| pos[b]).collect();
    let q = FinAlgebra::from_fn(
        format!("{}/~", a.name()),
        a.signature().clone(),
        reps.len(),
        |op, args| {
            let lifted: Vec<usize> = args.iter().map(|&x| reps[x]).collect();
            map[a.apply(op, &lifted)]
        },
    )?
    .with_group_ops(a.group_ops());
    let q = match a.labels() {
        Some(l) => q.with_labels(reps.iter().map(|&r| l[r].clone()).collect())?,
        None => q,
    };
    let q = Arc::new(q);
    let surj = Hom::new_unchecked(a.clone(), q.clone(), map);
    Ok((q, surj))
}

/// `{(a, a') : f(a) θ f(a')}` on the domain of `f`.
pub fn pullback_congruence(f: &Hom, theta: &Congruence) -> Result<Congruence> {
    same_parent(f.cod(), &theta.parent)?;
    let mut first = vec![usize::MAX; theta.parent.size()];
    let block = f
        .map()
        .iter()
        .enumerate()
        .map(|(x, &y)| {
            let b = theta.block[y];
            if first[b] == usize::MAX {
                first[b] = x;
            }
            first[b]
        })
        .collect();
    Ok(Congruence::from_blocks_unchecked(f.dom().clone(), block))
}
