//! JSON file formats for algebras, homomorphisms and diagrams.
//!
//! Algebras are referenced either by builtin name or inline:
//!
//! ```json
//! { "name": "Z2", "signature": [{"op": "mul", "arity": 2}, {"op": "inv", "arity": 1}, {"op": "e", "arity": 0}],
//!   "basepoint_op": "e", "size": 2, "tables": {"mul": [0, 1, 1, 0], "inv": [0, 1], "e": [0]} }
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{FinAlgebra, OpSpec, Signature};
use crate::commutators::WeightedCospan;
use crate::conditions::{AdmissibleDiagram, FibredObject};
use crate::error::{Error, Result};
use crate::hom::Hom;
use crate::library;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub signature: Vec<OpSpec>,
    pub basepoint_op: String,
    pub size: usize,
    pub tables: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl AlgebraFile {
    pub fn from_algebra(a: &FinAlgebra) -> Self {
        let sig = a.signature();
        AlgebraFile {
            name: a.name().to_string(),
            signature: sig.ops().to_vec(),
            basepoint_op: sig.basepoint_name().to_string(),
            size: a.size(),
            tables: sig
                .ops()
                .iter()
                .zip(a.tables())
                .map(|(o, t)| (o.name.clone(), t.clone()))
                .collect(),
            labels: a.labels().map(<[String]>::to_vec),
        }
    }

    pub fn to_algebra(&self) -> Result<FinAlgebra> {
        let sig = Signature::new(self.signature.clone(), &self.basepoint_op)?;
        if let Some(extra) = self.tables.keys().find(|k| sig.op_index(k).is_none()) {
            return Err(Error::InvalidAlgebra {
                name: self.name.clone(),
                reason: format!("table for unknown operation `{extra}`"),
            });
        }
        let tables = sig
            .ops()
            .iter()
            .map(|o| {
                self.tables.get(&o.name).cloned().ok_or_else(|| Error::InvalidAlgebra {
                    name: self.name.clone(),
                    reason: format!("no table for `{}`", o.name),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let a = FinAlgebra::new(self.name.clone(), sig, self.size, tables)?;
        match &self.labels {
            Some(l) => a.with_labels(l.clone()),
            None => Ok(a),
        }
    }
}

/// A builtin name or an inline table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Builtin(String),
    Inline(AlgebraFile),
}

impl AlgebraRef {
    pub fn resolve(&self) -> Result<Arc<FinAlgebra>> {
        match self {
            AlgebraRef::Builtin(name) => library::algebra(name),
            AlgebraRef::Inline(f) => Ok(Arc::new(f.to_algebra()?)),
        }
    }

    /// By name when `a` is a builtin algebra, inline otherwise.
    pub fn of(a: &FinAlgebra) -> Self {
        match library::algebra(a.name()) {
            Ok(b) if *b == *a => AlgebraRef::Builtin(a.name().to_string()),
            _ => AlgebraRef::Inline(AlgebraFile::from_algebra(a)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    pub dom: String,
    pub cod: String,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagramKind {
    /// Arrows `f, r, g, s, alpha, beta, gamma`.
    Admissible,
    /// Arrows `x, y, w`.
    Weighted,
    /// An object `proj: X -> B`, an optional section `sect`, and a base
    /// change `q: E -> B`.
    Fibred,
}

impl DiagramKind {
    pub fn arrows(self) -> &'static [&'static str] {
        match self {
            DiagramKind::Admissible => &["f", "r", "g", "s", "alpha", "beta", "gamma"],
            DiagramKind::Weighted => &["x", "y", "w"],
            DiagramKind::Fibred => &["proj", "sect", "q"],
        }
    }

    fn optional(self, arrow: &str) -> bool {
        self == DiagramKind::Fibred && arrow == "sect"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub name: String,
    pub kind: DiagramKind,
    /// Local names for algebras; hom endpoints refer to these first and to
    /// builtin names otherwise.
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraRef>,
    pub homs: BTreeMap<String, HomFile>,
}

#[derive(Debug, Clone)]
pub enum Diagram {
    Admissible(AdmissibleDiagram),
    Weighted(WeightedCospan),
    Fibred { object: FibredObject, q: Hom },
}

impl DiagramFile {
    pub fn resolve(&self) -> Result<Diagram> {
        let mut algs: BTreeMap<&str, Arc<FinAlgebra>> = BTreeMap::new();
        for (k, r) in &self.algebras {
            let a = r.resolve().map_err(|e| Error::Malformed(format!("algebras.{k}: {e}")))?;
            algs.insert(k, a);
        }
        let lookup = |n: &str| match algs.get(n) {
            Some(a) => Ok(a.clone()),
            None => library::algebra(n),
        };
        if let Some(extra) = self.homs.keys().find(|k| !self.kind.arrows().contains(&k.as_str())) {
            return Err(Error::Malformed(format!("homs.{extra}: not an arrow of a {:?} diagram", self.kind)));
        }
        let mut homs = BTreeMap::new();
        for &n in self.kind.arrows() {
            let Some(h) = self.homs.get(n) else {
                if self.kind.optional(n) {
                    continue;
                }
                return Err(Error::Malformed(format!("homs.{n}: missing")));
            };
            let at = |e: Error| Error::Malformed(format!("homs.{n}: {e}"));
            let hom = Hom::new(lookup(&h.dom).map_err(at)?, lookup(&h.cod).map_err(at)?, h.map.clone()).map_err(at)?;
            homs.insert(n, hom);
        }
        let take = |homs: &mut BTreeMap<&str, Hom>, n: &str| homs.remove(n).expect("arrow resolved");
        Ok(match self.kind {
            DiagramKind::Admissible => Diagram::Admissible(AdmissibleDiagram::new(
                take(&mut homs, "f"),
                take(&mut homs, "r"),
                take(&mut homs, "g"),
                take(&mut homs, "s"),
                take(&mut homs, "alpha"),
                take(&mut homs, "beta"),
                take(&mut homs, "gamma"),
            )?),
            DiagramKind::Weighted => Diagram::Weighted(WeightedCospan::new(take(&mut homs, "x"), take(&mut homs, "y"), take(&mut homs, "w"))?),
            DiagramKind::Fibred => Diagram::Fibred {
                object: FibredObject {
                    proj: take(&mut homs, "proj"),
                    sect: homs.remove("sect"),
                },
                q: take(&mut homs, "q"),
            },
        })
    }

    pub fn from_admissible(name: &str, d: &AdmissibleDiagram) -> Self {
        let arrows = [
            ("f", &d.f),
            ("r", &d.r),
            ("g", &d.g),
            ("s", &d.s),
            ("alpha", &d.alpha),
            ("beta", &d.beta),
            ("gamma", &d.gamma),
        ];
        let objects = [("A", d.a()), ("B", d.b()), ("C", d.c()), ("D", d.d())];
        Self::from_arrows(name, DiagramKind::Admissible, &objects, &arrows)
    }

    pub fn from_fibred(name: &str, object: &FibredObject, q: &Hom) -> Self {
        let objects = [("X", object.proj.dom()), ("B", object.proj.cod()), ("E", q.dom())];
        let mut arrows = vec![("proj", &object.proj), ("q", q)];
        if let Some(s) = &object.sect {
            arrows.push(("sect", s));
        }
        Self::from_arrows(name, DiagramKind::Fibred, &objects, &arrows)
    }

    pub fn from_weighted(name: &str, c: &WeightedCospan) -> Self {
        let objects = [("X", c.x.dom()), ("Y", c.y.dom()), ("W", c.w.dom()), ("D", c.target())];
        let arrows = [("x", &c.x), ("y", &c.y), ("w", &c.w)];
        Self::from_arrows(name, DiagramKind::Weighted, &objects, &arrows)
    }

    fn from_arrows(name: &str, kind: DiagramKind, objects: &[(&str, &Arc<FinAlgebra>)], arrows: &[(&str, &Hom)]) -> Self {
        let mut algebras: BTreeMap<String, AlgebraRef> = BTreeMap::new();
        let mut local = |a: &Arc<FinAlgebra>, hint: &str| -> String {
            let r = AlgebraRef::of(a);
            if let AlgebraRef::Builtin(n) = &r {
                return n.clone();
            }
            if let Some((k, _)) = algebras.iter().find(|(_, v)| **v == r) {
                return k.clone();
            }
            algebras.insert(hint.to_string(), r);
            hint.to_string()
        };
        let names: Vec<(String, &Arc<FinAlgebra>)> = objects.iter().map(|(h, a)| (local(a, h), *a)).collect();
        let name_of = |a: &Arc<FinAlgebra>| {
            names
                .iter()
                .find(|(_, b)| Arc::ptr_eq(a, b) || ***b == **a)
                .map(|(n, _)| n.clone())
                .expect("every endpoint is a diagram object")
        };
        let homs = arrows
            .iter()
            .map(|(n, h)| {
                (
                    n.to_string(),
                    HomFile {
                        dom: name_of(h.dom()),
                        cod: name_of(h.cod()),
                        map: h.map().to_vec(),
                    },
                )
            })
            .collect();
        DiagramFile {
            name: name.into(),
            kind,
            algebras,
            homs,
        }
    }
}

/// Parses JSON, reporting the origin, line and column of syntax errors.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::Malformed(format!("{origin}:{}:{}: {e}", e.line(), e.column())))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

/// Prefixes an error with the file it came from.
pub fn located(path: &Path, e: Error) -> Error {
    match e {
        Error::Malformed(m) => Error::Malformed(format!("{}: {m}", path.display())),
        e => Error::Malformed(format!("{}: {e}", path.display())),
    }
}

pub fn load_algebra(path: &Path) -> Result<FinAlgebra> {
    let f: AlgebraFile = parse_json(&read(path)?, &path.display().to_string())?;
    f.to_algebra().map_err(|e| located(path, e))
}

pub fn load_diagram(path: &Path) -> Result<(DiagramFile, Diagram)> {
    let f: DiagramFile = parse_json(&read(path)?, &path.display().to_string())?;
    let d = f.resolve().map_err(|e| located(path, e))?;
    Ok((f, d))
}

/// The Heyting semilattice diagram exactly as published, without validation.
pub fn hslat_counterexample_file() -> DiagramFile {
    let homs = library::hslat_counterexample_tables()
        .into_iter()
        .map(|t| {
            (
                t.name.to_string(),
                HomFile {
                    dom: t.dom.into(),
                    cod: t.cod.into(),
                    map: t.map,
                },
            )
        })
        .collect();
    DiagramFile {
        name: "cx/hslat-adm".into(),
        kind: DiagramKind::Admissible,
        algebras: BTreeMap::new(),
        homs,
    }
}
