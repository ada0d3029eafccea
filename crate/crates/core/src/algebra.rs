//! Finite pointed algebras stored as dense operation tables.
//!
//! Elements are the indices `0..size`. An operation of arity `k` is a
//! row-major table of length `size^k`; the entry for `(a_0, .., a_{k-1})`
//! sits at `sum a_i * size^(k-1-i)`. The designated nullary operation of the
//! signature picks out the basepoint.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpSpec {
    #[serde(rename = "op")]
    pub name: String,
    pub arity: usize,
}

impl OpSpec {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        OpSpec {
            name: name.into(),
            arity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    ops: Vec<OpSpec>,
    basepoint_op: usize,
}

impl Signature {
    pub fn new(ops: Vec<OpSpec>, basepoint_op: &str) -> Result<Self> {
        let mut seen = HashSet::new();
        for op in &ops {
            if op.name.is_empty() {
                return Err(Error::InvalidSignature("empty operation name".into()));
            }
            if !seen.insert(op.name.as_str()) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate operation `{}`",
                    op.name
                )));
            }
        }
        let basepoint_op = ops
            .iter()
            .position(|o| o.name == basepoint_op)
            .ok_or_else(|| {
                Error::InvalidSignature(format!("basepoint operation `{basepoint_op}` not declared"))
            })?;
        if ops[basepoint_op].arity != 0 {
            return Err(Error::InvalidSignature(format!(
                "basepoint operation `{}` must be nullary",
                ops[basepoint_op].name
            )));
        }
        Ok(Signature { ops, basepoint_op })
    }

    pub fn ops(&self) -> &[OpSpec] {
        &self.ops
    }

    pub fn basepoint_op(&self) -> usize {
        self.basepoint_op
    }

    pub fn basepoint_name(&self) -> &str {
        &self.ops[self.basepoint_op].name
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn arity(&self, op: usize) -> usize {
        self.ops[op].arity
    }

    /// The signature `mul/2, inv/1, e/0` with basepoint `e`.
    pub fn group() -> Self {
        Signature::new(
            vec![OpSpec::new("mul", 2), OpSpec::new("inv", 1), OpSpec::new("e", 0)],
            "e",
        )
        .expect("group signature")
    }

    /// The signature `meet/2, imp/2, top/0` with basepoint `top`.
    pub fn heyting_semilattice() -> Self {
        Signature::new(
            vec![OpSpec::new("meet", 2), OpSpec::new("imp", 2), OpSpec::new("top", 0)],
            "top",
        )
        .expect("hslat signature")
    }
}

/// Operation indices of a group structure `mul/inv/e`, recorded once the
/// group axioms have been checked (or inherited from group factors).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupOps {
    pub mul: usize,
    pub inv: usize,
    pub unit: usize,
}

impl GroupOps {
    fn from_signature(sig: &Signature) -> Option<Self> {
        let mul = sig.op_index("mul")?;
        let inv = sig.op_index("inv")?;
        let unit = sig.basepoint_op();
        (sig.arity(mul) == 2 && sig.arity(inv) == 1 && sig.ops().len() == 3).then_some(GroupOps {
            mul,
            inv,
            unit,
        })
    }
}

/// Algebras above this size are not probed for the group axioms on
/// construction; derived algebras inherit the flag from their factors.
const GROUP_PROBE_LIMIT: usize = 128;

#[derive(Debug, Clone)]
pub struct FinAlgebra {
    name: String,
    signature: Signature,
    size: usize,
    tables: Vec<Vec<usize>>,
    basepoint: usize,
    labels: Option<Vec<String>>,
    group: Option<GroupOps>,
}

impl PartialEq for FinAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.signature == other.signature && self.tables == other.tables
    }
}

impl Eq for FinAlgebra {}

impl FinAlgebra {
    /// Validates the tables and builds the algebra.
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        size: usize,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: String| Error::InvalidAlgebra {
            name: name.clone(),
            reason,
        };
        if size == 0 {
            return Err(invalid("empty carrier; pointed algebras need at least one element".into()));
        }
        if tables.len() != signature.ops().len() {
            return Err(invalid(format!(
                "{} tables for {} operations",
                tables.len(),
                signature.ops().len()
            )));
        }
        for (op, table) in signature.ops().iter().zip(&tables) {
            let expected = checked_pow(size, op.arity)
                .ok_or_else(|| invalid(format!("table for `{}` too large", op.name)))?;
            if table.len() != expected {
                return Err(invalid(format!(
                    "table for `{}` has {} entries, expected {}",
                    op.name,
                    table.len(),
                    expected
                )));
            }
            if let Some((pos, v)) = table.iter().enumerate().find(|(_, &v)| v >= size) {
                return Err(invalid(format!(
                    "table for `{}` entry {} is {}, out of range",
                    op.name, pos, v
                )));
            }
        }
        let basepoint = tables[signature.basepoint_op()][0];
        let mut alg = FinAlgebra {
            name,
            signature,
            size,
            tables,
            basepoint,
            labels: None,
            group: None,
        };
        if alg.size <= GROUP_PROBE_LIMIT {
            alg.group = alg.probe_group();
        }
        Ok(alg)
    }

    /// Builds an algebra by evaluating a closure for every argument tuple.
    pub fn from_fn(
        name: impl Into<String>,
        signature: Signature,
        size: usize,
        mut f: impl FnMut(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        let mut tables = Vec::with_capacity(signature.ops().len());
        let mut args = Vec::new();
        for (op_idx, op) in signature.ops().iter().enumerate() {
            let len = checked_pow(size, op.arity).ok_or_else(|| Error::InvalidAlgebra {
                name: "<from_fn>".into(),
                reason: "table too large".into(),
            })?;
            let mut table = Vec::with_capacity(len);
            for code in 0..len {
                decode_tuple(code, size, op.arity, &mut args);
                table.push(f(op_idx, &args));
            }
            tables.push(table);
        }
        FinAlgebra::new(name, signature, size, tables)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::InvalidAlgebra {
                name: self.name.clone(),
                reason: format!("{} labels for {} elements", labels.len(), self.size),
            });
        }
        let unique: HashSet<_> = labels.iter().collect();
        if unique.len() != labels.len() {
            return Err(Error::InvalidAlgebra {
                name: self.name.clone(),
                reason: "duplicate element labels".into(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Marks the algebra as a group without re-checking the axioms. Used for
    /// products and subalgebras of groups, which are groups by construction.
    pub(crate) fn with_group_ops(mut self, ops: Option<GroupOps>) -> Self {
        if self.group.is_none() {
            self.group = ops;
        }
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.tables[op]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn group_ops(&self) -> Option<GroupOps> {
        self.group
    }

    pub fn is_group(&self) -> bool {
        self.group.is_some()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// Display name of an element: its label when present, else the index.
    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    /// Resolves a label (or a decimal index) to an element.
    pub fn element(&self, label: &str) -> Result<usize> {
        let label = label.trim().replace('½', "1/2");
        let label = label.as_str();
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == label) {
                return Ok(i);
            }
        }
        match label.parse::<usize>() {
            Ok(i) if i < self.size => Ok(i),
            Ok(i) => Err(self.out_of_range(i)),
            Err(_) => Err(Error::UnknownName(format!(
                "element `{label}` of `{}`",
                self.name
            ))),
        }
    }

    pub(crate) fn out_of_range(&self, index: usize) -> Error {
        Error::IndexOutOfRange {
            algebra: self.name.clone(),
            index,
            size: self.size,
        }
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.size {
            Ok(())
        } else {
            Err(self.out_of_range(index))
        }
    }

    #[inline]
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        let table = &self.tables[op];
        match args.len() {
            0 => table[0],
            1 => table[args[0]],
            2 => table[args[0] * self.size + args[1]],
            _ => {
                let mut code = 0;
                for &a in args {
                    code = code * self.size + a;
                }
                table[code]
            }
        }
    }

    #[inline]
    pub fn apply2(&self, op: usize, a: usize, b: usize) -> usize {
        self.tables[op][a * self.size + b]
    }

    pub fn same_signature(&self, other: &FinAlgebra) -> Result<()> {
        if self.signature == other.signature {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!(
                "`{}` and `{}` have different signatures",
                self.name, other.name
            )))
        }
    }

    /// Group multiplication, panicking if the algebra is not a group.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let g = self.group.expect("mul on a non-group algebra");
        self.apply2(g.mul, a, b)
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        let g = self.group.expect("inv on a non-group algebra");
        self.tables[g.inv][a]
    }

    /// Group commutator `a b a^-1 b^-1`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ab_ai = self.mul(ab, self.inv(a));
        self.mul(ab_ai, self.inv(b))
    }

    fn probe_group(&self) -> Option<GroupOps> {
        let g = GroupOps::from_signature(&self.signature)?;
        let n = self.size;
        let e = self.basepoint;
        let mul = |a, b| self.apply2(g.mul, a, b);
        for a in 0..n {
            if mul(e, a) != a || mul(a, e) != a {
                return None;
            }
            let ai = self.tables[g.inv][a];
            if mul(a, ai) != e || mul(ai, a) != e {
                return None;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul(a, b);
                for c in 0..n {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return None;
                    }
                }
            }
        }
        Some(g)
    }
}

impl fmt::Display for FinAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (size {})", self.name, self.size)
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Writes the row-major tuple for `code` into `out`.
pub(crate) fn decode_tuple(mut code: usize, size: usize, arity: usize, out: &mut Vec<usize>) {
    out.clear();
    out.resize(arity, 0);
    for slot in out.iter_mut().rev() {
        *slot = code % size;
        code /= size;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> FinAlgebra {
        FinAlgebra::from_fn("Z", Signature::group(), n, |op, a| match op {
            0 => (a[0] + a[1]) % n,
            1 => (n - a[0]) % n,
            _ => 0,
        })
        .unwrap()
    }

    #[test]
    fn rejects_empty_and_bad_tables() {
        let sig = Signature::group();
        assert!(FinAlgebra::new("x", sig.clone(), 0, vec![vec![], vec![], vec![0]]).is_err());
        let err = FinAlgebra::new("x", sig.clone(), 2, vec![vec![0, 1, 1, 2], vec![0, 1], vec![0]]);
        assert!(matches!(err, Err(Error::InvalidAlgebra { .. })));
        let err = FinAlgebra::new("x", sig, 2, vec![vec![0, 1, 1], vec![0, 1], vec![0]]);
        assert!(err.is_err());
    }

    #[test]
    fn signature_rules() {
        assert!(Signature::new(vec![OpSpec::new("a", 2), OpSpec::new("a", 1)], "a").is_err());
        assert!(Signature::new(vec![OpSpec::new("a", 2)], "a").is_err());
        assert!(Signature::new(vec![OpSpec::new("a", 2)], "b").is_err());
    }

    #[test]
    fn group_probe() {
        let g = z(4);
        assert!(g.is_group());
        assert_eq!(g.mul(3, 3), 2);
        assert_eq!(g.inv(1), 3);
        let mut tables = g.tables().to_vec();
        tables[0][5] = 0;
        let broken = FinAlgebra::new("bad", Signature::group(), 4, tables).unwrap();
        assert!(!broken.is_group());
    }

    #[test]
    fn ternary_tables_are_row_major() {
        let sig = Signature::new(vec![OpSpec::new("p", 3), OpSpec::new("o", 0)], "o").unwrap();
        let a = FinAlgebra::from_fn("t", sig, 3, |op, args| {
            if op == 0 {
                (args[0] + 2 * args[1] + args[2]) % 3
            } else {
                0
            }
        })
        .unwrap();
        assert_eq!(a.apply(0, &[1, 2, 0]), (1 + 4) % 3);
        assert_eq!(a.table(0)[9 + 6], (1 + 4) % 3);
    }
}
