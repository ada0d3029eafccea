//! Subalgebra generation inside finite products `A_0 x .. x A_{m-1}` of
//! algebras sharing a signature, without materialising the product tables.
//!
//! Every generated element remembers how it was produced, so any element can
//! be turned into a straight-line [`Certificate`] over the generators.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{FinAlgebra, GroupOps};
use crate::error::{Error, Result};

/// Products up to this many tuples get a dense index.
const DENSE_LIMIT: usize = 1 << 24;

#[derive(Debug, Clone)]
enum Origin {
    Gen(usize),
    Op { op: usize, args: Vec<u32> },
}

#[derive(Debug)]
enum TupleIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

/// One step of a straight-line program over generator tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Gen(usize),
    Apply { op: usize, args: Vec<usize> },
}

/// A straight-line program whose last step is the certified value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub steps: Vec<Step>,
}

impl Certificate {
    /// Re-evaluates the program in the product of `factors` from scratch.
    pub fn evaluate(&self, factors: &[&FinAlgebra], gens: &[Vec<usize>]) -> Result<Vec<usize>> {
        let mut values: Vec<Vec<usize>> = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            let v = match step {
                Step::Gen(g) => gens
                    .get(*g)
                    .cloned()
                    .ok_or_else(|| Error::Malformed(format!("certificate refers to generator {g}")))?,
                Step::Apply { op, args } => {
                    let mut out = Vec::with_capacity(factors.len());
                    let mut buf = Vec::with_capacity(args.len());
                    for (c, f) in factors.iter().enumerate() {
                        buf.clear();
                        for &a in args {
                            let val = values.get(a).ok_or_else(|| {
                                Error::Malformed("certificate step refers forward".into())
                            })?;
                            buf.push(val[c]);
                        }
                        out.push(f.apply(*op, &buf));
                    }
                    out
                }
            };
            values.push(v);
        }
        values
            .pop()
            .ok_or_else(|| Error::Malformed("empty certificate".into()))
    }

    /// Renders the program as a nested term, sharing nothing. Only meant for
    /// display of short certificates.
    pub fn render(&self, factor: &FinAlgebra, gen_names: &[String]) -> String {
        fn go(c: &Certificate, i: usize, a: &FinAlgebra, names: &[String], out: &mut String) {
            match &c.steps[i] {
                Step::Gen(g) => out.push_str(names.get(*g).map(String::as_str).unwrap_or("?")),
                Step::Apply { op, args } => {
                    out.push_str(&a.signature().ops()[*op].name);
                    if !args.is_empty() {
                        out.push('(');
                        for (n, &arg) in args.iter().enumerate() {
                            if n > 0 {
                                out.push(',');
                            }
                            go(c, arg, a, names, out);
                        }
                        out.push(')');
                    }
                }
            }
        }
        let mut out = String::new();
        if !self.steps.is_empty() {
            go(self, self.steps.len() - 1, factor, gen_names, &mut out);
        }
        out
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            match s {
                Step::Gen(g) => writeln!(f, "s{i} = g{g}")?,
                Step::Apply { op, args } => {
                    let a: Vec<String> = args.iter().map(|x| format!("s{x}")).collect();
                    writeln!(f, "s{i} = op{op}({})", a.join(","))?
                }
            }
        }
        Ok(())
    }
}

/// The subalgebra of a finite product generated by a set of tuples.
pub struct TupleClosure<'a> {
    factors: Vec<&'a FinAlgebra>,
    width: usize,
    radix: Vec<u64>,
    elems: Vec<usize>,
    origins: Vec<Origin>,
    index: TupleIndex,
}

impl<'a> TupleClosure<'a> {
    /// Generates the subalgebra of `factors[0] x .. x factors[m-1]` spanned by
    /// `gens` and the nullary constants. Elements are discovered in work-list
    /// order; generators come first in the order given.
    pub fn generate(factors: Vec<&'a FinAlgebra>, gens: &[Vec<usize>]) -> Result<Self> {
        let first = *factors
            .first()
            .ok_or_else(|| Error::Malformed("closure over an empty product".into()))?;
        for f in &factors[1..] {
            first.same_signature(f)?;
        }
        let width = factors.len();
        let mut radix = Vec::with_capacity(width);
        let mut total: u64 = 1;
        for f in &factors {
            radix.push(total);
            total = total
                .checked_mul(f.size() as u64)
                .ok_or_else(|| Error::Malformed("product too large to index".into()))?;
        }
        let index = if total as usize <= DENSE_LIMIT {
            TupleIndex::Dense(vec![u32::MAX; total as usize])
        } else {
            TupleIndex::Sparse(HashMap::new())
        };
        let mut cl = TupleClosure {
            factors,
            width,
            radix,
            elems: Vec::new(),
            origins: Vec::new(),
            index,
        };
        for (g, t) in gens.iter().enumerate() {
            if t.len() != width {
                return Err(Error::Malformed(format!(
                    "generator of width {} in a product of width {width}",
                    t.len()
                )));
            }
            for (c, &x) in t.iter().enumerate() {
                cl.factors[c].check_index(x)?;
            }
            cl.insert(t, Origin::Gen(g));
        }
        let sig = first.signature().clone();
        let mut scratch = Vec::with_capacity(width);
        for (op, spec) in sig.ops().iter().enumerate() {
            if spec.arity == 0 {
                scratch.clear();
                scratch.extend(cl.factors.iter().map(|f| f.apply(op, &[])));
                let t = scratch.clone();
                cl.insert(&t, Origin::Op { op, args: vec![] });
            }
        }
        match cl.common_group_ops() {
            Some(g) => cl.close_group(g),
            None => cl.close_generic(),
        }
        Ok(cl)
    }

    fn common_group_ops(&self) -> Option<GroupOps> {
        let g = self.factors[0].group_ops()?;
        self.factors
            .iter()
            .all(|f| f.group_ops() == Some(g))
            .then_some(g)
    }

    fn code(&self, t: &[usize]) -> u64 {
        t.iter()
            .zip(&self.radix)
            .map(|(&x, &r)| x as u64 * r)
            .sum()
    }

    fn insert(&mut self, t: &[usize], origin: Origin) -> (u32, bool) {
        let code = self.code(t);
        let next = self.origins.len() as u32;
        let slot = match &mut self.index {
            TupleIndex::Dense(v) => &mut v[code as usize],
            TupleIndex::Sparse(m) => m.entry(code).or_insert(u32::MAX),
        };
        if *slot != u32::MAX {
            return (*slot, false);
        }
        *slot = next;
        self.elems.extend_from_slice(t);
        self.origins.push(origin);
        (next, true)
    }

    /// Finite groups: the subgroup generated by a set is the submonoid it
    /// generates, so right multiplication by accepted generators suffices.
    fn close_group(&mut self, g: GroupOps) {
        let unit: Vec<usize> = self.factors.iter().map(|f| f.basepoint()).collect();
        let unit_idx = self.find(&unit).expect("identity inserted as a constant");
        let n_seed = self.len();
        let mut members: Vec<u32> = vec![unit_idx as u32];
        let mut is_member = vec![false; n_seed];
        is_member[unit_idx] = true;
        let mut accepted: Vec<usize> = Vec::new();
        let mut scratch = vec![0usize; self.width];
        for s in 0..n_seed {
            if is_member[s] {
                continue;
            }
            accepted.push(s);
            let before = members.len();
            for m in 0..before {
                let x = members[m] as usize;
                self.mul_into(g, x, s, &mut scratch);
                let (idx, _) = self.insert_from(&scratch, g.mul, x, s);
                Self::mark(&mut is_member, &mut members, idx);
            }
            let mut q = before;
            while q < members.len() {
                let x = members[q] as usize;
                q += 1;
                for k in 0..accepted.len() {
                    let a = accepted[k];
                    self.mul_into(g, x, a, &mut scratch);
                    let (idx, _) = self.insert_from(&scratch, g.mul, x, a);
                    Self::mark(&mut is_member, &mut members, idx);
                }
            }
        }
    }

    fn insert_from(&mut self, scratch: &[usize], op: usize, x: usize, y: usize) -> (usize, bool) {
        let t = scratch.to_vec();
        let (idx, fresh) = self.insert(
            &t,
            Origin::Op {
                op,
                args: vec![x as u32, y as u32],
            },
        );
        (idx as usize, fresh)
    }

    fn mark(is_member: &mut Vec<bool>, members: &mut Vec<u32>, idx: usize) {
        if idx >= is_member.len() {
            is_member.resize(idx + 1, false);
        }
        if !is_member[idx] {
            is_member[idx] = true;
            members.push(idx as u32);
        }
    }

    fn mul_into(&self, g: GroupOps, x: usize, y: usize, out: &mut [usize]) {
        let w = self.width;
        for c in 0..w {
            out[c] = self.factors[c].apply2(g.mul, self.elems[x * w + c], self.elems[y * w + c]);
        }
    }

    fn close_generic(&mut self) {
        let sig = self.factors[0].signature().clone();
        let ops: Vec<(usize, usize)> = sig
            .ops()
            .iter()
            .enumerate()
            .filter(|(_, o)| o.arity > 0)
            .map(|(i, o)| (i, o.arity))
            .collect();
        let w = self.width;
        let mut scratch = vec![0usize; w];
        let mut args: Vec<usize> = Vec::new();
        let mut comp_args: Vec<usize> = Vec::new();
        let mut i = 0;
        while i < self.origins.len() {
            for &(op, arity) in &ops {
                match arity {
                    1 => {
                        for c in 0..w {
                            scratch[c] = self.factors[c].table(op)[self.elems[i * w + c]];
                        }
                        self.insert_scratch(&scratch, op, &[i]);
                    }
                    2 => {
                        for j in 0..=i {
                            for c in 0..w {
                                scratch[c] = self.factors[c].apply2(op, self.elems[i * w + c], self.elems[j * w + c]);
                            }
                            self.insert_scratch(&scratch, op, &[i, j]);
                            if j != i {
                                for c in 0..w {
                                    scratch[c] =
                                        self.factors[c].apply2(op, self.elems[j * w + c], self.elems[i * w + c]);
                                }
                                self.insert_scratch(&scratch, op, &[j, i]);
                            }
                        }
                    }
                    k => {
                        // Tuples over [0, i] whose first occurrence of i is at `p`.
                        for p in 0..k {
                            args.clear();
                            args.resize(k, 0);
                            args[p] = i;
                            if p > 0 && i == 0 {
                                continue;
                            }
                            loop {
                                for c in 0..w {
                                    comp_args.clear();
                                    comp_args.extend(args.iter().map(|&a| self.elems[a * w + c]));
                                    scratch[c] = self.factors[c].apply(op, &comp_args);
                                }
                                let a = args.clone();
                                self.insert_scratch(&scratch, op, &a);
                                // Odometer over non-fixed positions.
                                let mut pos = k;
                                let mut advanced = false;
                                while pos > 0 {
                                    pos -= 1;
                                    if pos == p {
                                        continue;
                                    }
                                    let bound = if pos < p { i } else { i + 1 };
                                    if args[pos] + 1 < bound {
                                        args[pos] += 1;
                                        advanced = true;
                                        break;
                                    }
                                    args[pos] = 0;
                                }
                                if !advanced {
                                    break;
                                }
                            }
                        }
                    }
                }
            }
            i += 1;
        }
    }

    fn insert_scratch(&mut self, scratch: &[usize], op: usize, args: &[usize]) {
        let code = self.code(scratch);
        let known = match &self.index {
            TupleIndex::Dense(v) => v[code as usize] != u32::MAX,
            TupleIndex::Sparse(m) => m.contains_key(&code),
        };
        if !known {
            let t = scratch.to_vec();
            self.insert(
                &t,
                Origin::Op {
                    op,
                    args: args.iter().map(|&a| a as u32).collect(),
                },
            );
        }
    }

    pub fn len(&self) -> usize {
        self.origins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origins.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn factors(&self) -> &[&'a FinAlgebra] {
        &self.factors
    }

    pub fn tuple(&self, i: usize) -> &[usize] {
        &self.elems[i * self.width..(i + 1) * self.width]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.elems.chunks_exact(self.width)
    }

    pub fn find(&self, t: &[usize]) -> Option<usize> {
        if t.len() != self.width || t.iter().zip(&self.factors).any(|(&x, f)| x >= f.size()) {
            return None;
        }
        let code = self.code(t);
        let v = match &self.index {
            TupleIndex::Dense(v) => v[code as usize],
            TupleIndex::Sparse(m) => *m.get(&code)?,
        };
        (v != u32::MAX).then_some(v as usize)
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.find(t).is_some()
    }

    /// Straight-line program producing element `i` from the generators.
    pub fn certificate(&self, i: usize) -> Certificate {
        let mut needed = vec![false; i + 1];
        needed[i] = true;
        for k in (0..=i).rev() {
            if !needed[k] {
                continue;
            }
            if let Origin::Op { args, .. } = &self.origins[k] {
                for &a in args {
                    needed[a as usize] = true;
                }
            }
        }
        let mut renumber = vec![usize::MAX; i + 1];
        let mut steps = Vec::new();
        for k in 0..=i {
            if !needed[k] {
                continue;
            }
            renumber[k] = steps.len();
            steps.push(match &self.origins[k] {
                Origin::Gen(g) => Step::Gen(*g),
                Origin::Op { op, args } => Step::Apply {
                    op: *op,
                    args: args.iter().map(|&a| renumber[a as usize]).collect(),
                },
            });
        }
        Certificate { steps }
    }
}
