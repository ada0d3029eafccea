//! Instance checkers for (SH), (SSH), (W), (C), (C̄) and admissibility,
//! plus the worked examples as executable fixtures.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::FinAlgebra;
use crate::closure::TupleClosure;
use crate::commutators::{
    cooperator, higgins, higgins_binary, higgins_ternary, normalise, smith, w_normal_closure, Completeness,
    TernaryStrategy, WeightedCospan,
};
use crate::congruence::Congruence;
use crate::construct::{pullback, pullback_point, pullback_split, PointObject, SpanWitness};
use crate::error::{Error, Result};
use crate::hom::{image_sub, kernel_pair, kernel_sub, Hom};
use crate::library;
use crate::sub::{generate_subuniverse, same_parent, Subuniverse};

/// A cospan in the fibre of points over `B`, written as the diagram
///
/// ```text
///   A --α--> D <--γ-- C
///   f⇅r      ↑β     g⇅s
///       B ------- B
/// ```
#[derive(Debug, Clone)]
pub struct AdmissibleDiagram {
    pub f: Hom,
    pub r: Hom,
    pub g: Hom,
    pub s: Hom,
    pub alpha: Hom,
    pub beta: Hom,
    pub gamma: Hom,
}

impl AdmissibleDiagram {
    /// Checks `f∘r = 1_B = g∘s` and `α∘r = β = γ∘s`.
    pub fn new(f: Hom, r: Hom, g: Hom, s: Hom, alpha: Hom, beta: Hom, gamma: Hom) -> Result<Self> {
        let shape = |what: &str| Error::Mismatch(format!("diagram arrows do not fit together: {what}"));
        same_parent(f.cod(), g.cod()).map_err(|_| shape("f and g need a common codomain"))?;
        same_parent(f.dom(), alpha.dom()).map_err(|_| shape("α must start at A"))?;
        same_parent(g.dom(), gamma.dom()).map_err(|_| shape("γ must start at C"))?;
        same_parent(alpha.cod(), gamma.cod()).map_err(|_| shape("α and γ need a common codomain"))?;
        same_parent(beta.dom(), f.cod()).map_err(|_| shape("β must start at B"))?;
        same_parent(beta.cod(), alpha.cod()).map_err(|_| shape("β must land in D"))?;
        if !r.then(&f)?.is_identity() {
            return Err(Error::Precondition("f∘r is not the identity".into()));
        }
        if !s.then(&g)?.is_identity() {
            return Err(Error::Precondition("g∘s is not the identity".into()));
        }
        if r.then(&alpha)?.map() != beta.map() {
            return Err(Error::Precondition("α∘r differs from β".into()));
        }
        if s.then(&gamma)?.map() != beta.map() {
            return Err(Error::Precondition("γ∘s differs from β".into()));
        }
        Ok(AdmissibleDiagram {
            f,
            r,
            g,
            s,
            alpha,
            beta,
            gamma,
        })
    }

    pub fn a(&self) -> &Arc<FinAlgebra> {
        self.f.dom()
    }

    pub fn b(&self) -> &Arc<FinAlgebra> {
        self.f.cod()
    }

    pub fn c(&self) -> &Arc<FinAlgebra> {
        self.g.dom()
    }

    pub fn d(&self) -> &Arc<FinAlgebra> {
        self.alpha.cod()
    }

    /// `Im(α∘ker f)` and `Im(γ∘ker g)` as subuniverses of `D`.
    pub fn kernel_images(&self) -> Result<(Subuniverse, Subuniverse)> {
        Ok((
            image_of(&self.alpha, &kernel_sub(&self.f))?,
            image_of(&self.gamma, &kernel_sub(&self.g))?,
        ))
    }
}

/// The image of a subuniverse under a homomorphism.
pub fn image_of(h: &Hom, x: &Subuniverse) -> Result<Subuniverse> {
    same_parent(h.dom(), x.parent())?;
    generate_subuniverse(h.cod(), x.members().iter().map(|&a| h.apply(a)))
}

/// Two derivations assigning different values to one pullback element.
#[derive(Debug, Clone, Serialize)]
pub struct Conflict {
    pub element: String,
    pub values: [String; 2],
    pub derivations: [String; 2],
}

#[derive(Debug, Clone)]
pub struct Admissibility {
    pub pullback: SpanWitness,
    pub phi: Option<Hom>,
    pub conflict: Option<Conflict>,
}

/// Looks for `φ: A×_B C -> D` with `φ∘e1 = α` and `φ∘e2 = γ` by closing the
/// relation generated by the graphs of `α` and `γ` inside `(A×_B C)×D`.
pub fn admissible(d: &AdmissibleDiagram) -> Result<Admissibility> {
    let w = pullback_split(&d.f, &d.r, &d.g, &d.s)?;
    let sections = w.induced.clone().ok_or_else(|| Error::Internal("pullback without sections".into()))?;
    let p = w.carrier.clone();
    let target = d.d();
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut names = Vec::new();
    for a in d.a().elements() {
        gens.push(vec![sections.e1.apply(a), d.alpha.apply(a)]);
        names.push(format!("e1({})", d.a().label(a)));
    }
    for c in d.c().elements() {
        gens.push(vec![sections.e2.apply(c), d.gamma.apply(c)]);
        names.push(format!("e2({})", d.c().label(c)));
    }
    let rel = TupleClosure::generate(vec![p.as_ref(), target.as_ref()], &gens)?;
    let mut graph: Vec<Option<usize>> = vec![None; p.size()];
    let mut conflict = None;
    for (i, t) in rel.iter().enumerate() {
        match graph[t[0]] {
            None => graph[t[0]] = Some(i),
            Some(j) if conflict.is_none() && rel.tuple(j)[1] != t[1] => {
                let render = |k: usize| rel.certificate(k).render(p.as_ref(), &names);
                conflict = Some(Conflict {
                    element: p.label(t[0]),
                    values: [target.label(rel.tuple(j)[1]), target.label(t[1])],
                    derivations: [render(j), render(i)],
                });
            }
            Some(_) => {}
        }
    }
    if let Some(x) = graph.iter().position(Option::is_none) {
        return Err(Error::NotMalcev(format!(
            "the closure assigns no value to pullback element {}",
            p.label(x)
        )));
    }
    let phi = match conflict {
        Some(_) => None,
        None => {
            let map = graph.iter().map(|i| rel.tuple(i.unwrap())[1]).collect();
            let phi = Hom::new(p, target.clone(), map)
                .map_err(|e| Error::Internal(format!("functional closure is not a homomorphism: {e}")))?;
            Some(phi)
        }
    };
    Ok(Admissibility {
        pullback: w,
        phi,
        conflict,
    })
}

/// The group formula `φ(a, c) = α(a·(r f a)⁻¹)·γ(c)`.
pub fn groups_phi(d: &AdmissibleDiagram) -> Result<Hom> {
    let target = d.d();
    if !target.is_group() || !d.a().is_group() || !d.c().is_group() {
        return Err(Error::Precondition("groups_phi needs a diagram of groups".into()));
    }
    let (kx, ky) = d.kernel_images()?;
    let c = higgins(target, &kx, &ky)?;
    if !c.is_trivial() {
        return Err(Error::Precondition(format!("α∘ker f and γ∘ker g do not commute: [{kx}, {ky}] = {c}")));
    }
    let w = pullback_split(&d.f, &d.r, &d.g, &d.s)?;
    let a = d.a();
    let map = w
        .pairs()
        .iter()
        .map(|&(x, y)| {
            let rf = d.r.apply(d.f.apply(x));
            target.mul(d.alpha.apply(a.mul(x, a.inv(rf))), d.gamma.apply(y))
        })
        .collect();
    let phi = Hom::new(w.carrier.clone(), target.clone(), map)
        .map_err(|e| Error::Internal(format!("group formula is not a homomorphism: {e}")))?;
    let sections = w.induced.as_ref().ok_or_else(|| Error::Internal("pullback without sections".into()))?;
    if sections.e1.then(&phi)?.map() != d.alpha.map() || sections.e2.then(&phi)?.map() != d.gamma.map() {
        return Err(Error::Internal("group formula does not extend α and γ".into()));
    }
    Ok(phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    #[serde(rename = "SH")]
    Sh,
    #[serde(rename = "SSH")]
    Ssh,
    #[serde(rename = "W")]
    W,
    #[serde(rename = "C")]
    C,
    #[serde(rename = "C-bar")]
    CBar,
    /// Reflection of centralisation along the basic fibration.
    #[serde(rename = "basic")]
    Basic,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::Sh => "(SH)",
            Condition::Ssh => "(SSH)",
            Condition::W => "(W)",
            Condition::C => "(C)",
            Condition::CBar => "(C̄)",
            Condition::Basic => "(basic)",
        };
        f.write_str(s)
    }
}

/// Outcome of checking `hypothesis ⇒ conclusion` on one instance. The
/// conclusion is `None` when it was not evaluated because the hypothesis
/// fails.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionVerdict {
    pub condition: Condition,
    pub hypothesis: bool,
    pub conclusion: Option<bool>,
    pub satisfied: bool,
    pub completeness: Completeness,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
}

impl ConditionVerdict {
    fn new(condition: Condition, hypothesis: bool, conclusion: Option<bool>, completeness: Completeness) -> Self {
        ConditionVerdict {
            condition,
            hypothesis,
            conclusion,
            satisfied: !hypothesis || conclusion == Some(true),
            completeness,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn summary(&self) -> String {
        let c = match self.conclusion {
            Some(true) => "conclusion true",
            Some(false) => "conclusion false",
            None => "conclusion not evaluated",
        };
        format!(
            "{}: hypothesis {}, {c}, instance {}",
            self.condition,
            self.hypothesis,
            if self.satisfied { "satisfied" } else { "violated" }
        )
    }
}

/// Smith centralisation follows from Huq commutation of normalisations.
pub fn check_sh_instance(d: &Arc<FinAlgebra>, r: &Congruence, s: &Congruence) -> Result<ConditionVerdict> {
    let (k, l) = (normalise(r), normalise(s));
    let huq = higgins_binary(d, &k, &l)?;
    let sm = smith(d, r, s)?;
    let mut v = ConditionVerdict::new(
        Condition::Sh,
        huq.is_trivial(),
        Some(sm.is_trivial()),
        Completeness::Exact,
    );
    v.witnesses.push(format!("[{k}, {l}] = {}", huq.result));
    v.witnesses.push(format!("[R, S] = {}", sm.result));
    v.notes.push("Smith commutator computed on the underlying algebra".into());
    Ok(v)
}

/// Huq commutation of the kernel images forces admissibility. The closure is
/// only run when the hypothesis holds.
pub fn check_ssh_instance(d: &AdmissibleDiagram) -> Result<ConditionVerdict> {
    let (kx, ky) = d.kernel_images()?;
    let coop = cooperator(d.d(), &kx, &ky)?;
    let hyp = coop.exists();
    let mut witnesses = vec![format!("Im(α∘ker f) = {kx}"), format!("Im(γ∘ker g) = {ky}")];
    if let Some((p, q)) = coop.conflict {
        let l = |t: [usize; 3]| t.map(|x| d.d().label(x)).join(",");
        witnesses.push(format!("traces ({}) and ({}) clash", l(p), l(q)));
    }
    let conclusion = if hyp {
        let adm = admissible(d)?;
        if let Some(c) = &adm.conflict {
            witnesses.push(format!(
                "φ({}) forced to {} by {} and to {} by {}",
                c.element, c.values[0], c.derivations[0], c.values[1], c.derivations[1]
            ));
        }
        Some(adm.phi.is_some())
    } else {
        None
    };
    let mut v = ConditionVerdict::new(Condition::Ssh, hyp, conclusion, Completeness::Exact);
    v.witnesses = witnesses;
    Ok(v)
}

/// Binary commutator trivial implies ternary commutator with the weight
/// trivial.
pub fn check_w_instance(c: &WeightedCospan, ternary: TernaryStrategy) -> Result<ConditionVerdict> {
    let d = c.target();
    let (ix, iy, iw) = (image_sub(&c.x), image_sub(&c.y), image_sub(&c.w));
    let bin = higgins_binary(d, &ix, &iy)?;
    let ter = higgins_ternary(d, &ix, &iy, &iw, ternary)?;
    let mut v = ConditionVerdict::new(Condition::W, bin.is_trivial(), Some(ter.is_trivial()), ter.completeness);
    v.witnesses.push(format!("[Im x, Im y] = {}", bin.result));
    v.witnesses.push(format!("[Im x, Im y, Im w] = {} via {}", ter.result, ter.strategy));
    v.witnesses
        .extend(ter.witnesses.iter().take(4).map(|w| format!("{}: {}", w.element, w.evidence)));
    if !ter.completeness.is_complete() && ter.is_trivial() {
        v.notes.push("ternary search is bounded; a trivial result may be incomplete".into());
    }
    Ok(v)
}

/// Which change-of-base functor a reflection check uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fibration {
    Points,
    Basic,
}

/// An object over `B`: a map `proj: X -> B`, with a section in the points
/// fibration.
#[derive(Debug, Clone)]
pub struct FibredObject {
    pub proj: Hom,
    pub sect: Option<Hom>,
}

impl FibredObject {
    pub fn point(pt: &PointObject) -> Self {
        FibredObject {
            proj: pt.proj.clone(),
            sect: Some(pt.sect.clone()),
        }
    }
}

fn check_fibre_relation(proj: &Hom, r: &Congruence, name: &str) -> Result<()> {
    same_parent(proj.dom(), r.parent())?;
    let k = kernel_pair(proj);
    if !r.refines(&k) {
        return Err(Error::Precondition(format!(
            "{name} relates elements with different images in `{}`",
            proj.cod().name()
        )));
    }
    Ok(())
}

/// Change of base of `obj` along `q: E -> B`.
fn change_of_base(mode: Fibration, q: &Hom, obj: &FibredObject) -> Result<(SpanWitness, Option<PointObject>)> {
    match mode {
        Fibration::Points => {
            let sect = obj
                .sect
                .clone()
                .ok_or_else(|| Error::Precondition("the points fibration needs a section".into()))?;
            let pt = PointObject::new(obj.proj.clone(), sect)?;
            let (pulled, w) = pullback_point(q, &pt)?;
            Ok((w, Some(pulled)))
        }
        Fibration::Basic => {
            same_parent(q.cod(), obj.proj.cod())
                .map_err(|_| Error::Mismatch("object and base change live over different bases".into()))?;
            Ok((pullback(&obj.proj, q)?, None))
        }
    }
}

/// `q*R` on `X ×_B E`: `(x, e) ~ (x', e')` iff `x R x'` and `e = e'`.
fn pull_relation(w: &SpanWitness, r: &Congruence) -> Result<Congruence> {
    let n = w.carrier.size();
    let labels: Vec<usize> = (0..n)
        .map(|i| {
            let (x, e) = w.pair(i);
            r.class_of(x) * w.legs[1].cod().size() + e
        })
        .collect();
    let c = Congruence::from_labels(w.carrier.clone(), &labels)?;
    c.validate()?;
    Ok(c)
}

/// Reflection of Smith centralisation along `q: E -> B`: if the pulled-back
/// relations centralise each other, so do `R` and `S`.
pub fn check_reflection_instance(
    mode: Fibration,
    q: &Hom,
    obj: &FibredObject,
    r: &Congruence,
    s: &Congruence,
) -> Result<ConditionVerdict> {
    check_fibre_relation(&obj.proj, r, "R")?;
    check_fibre_relation(&obj.proj, s, "S")?;
    let (w, _) = change_of_base(mode, q, obj)?;
    let (qr, qs) = (pull_relation(&w, r)?, pull_relation(&w, s)?);
    let down = smith(&w.carrier, &qr, &qs)?;
    let up = smith(obj.proj.dom(), r, s)?;
    let cond = match mode {
        Fibration::Points => Condition::CBar,
        Fibration::Basic => Condition::Basic,
    };
    let mut v = ConditionVerdict::new(cond, down.is_trivial(), Some(up.is_trivial()), Completeness::Exact);
    v.witnesses.push(format!("[q*R, q*S] = {}", down.result));
    v.witnesses.push(format!("[R, S] = {}", up.result));
    v.notes.push("Smith commutators computed on underlying algebras".into());
    Ok(v)
}

/// The subpoint `{x : x R s(p(x))}` of a point, as a diagram leg
/// `(f, r, inclusion)`.
fn normal_subpoint(pt: &PointObject, r: &Congruence) -> Result<(Hom, Hom, Hom)> {
    let total = &pt.total;
    let members = total.elements().filter(|&x| r.related(x, pt.sect.apply(pt.proj.apply(x))));
    let n = Subuniverse::new(total.clone(), members)?;
    let (alg, incl) = n.to_algebra();
    let f = incl.then(&pt.proj)?;
    let pos = |x: usize| n.members().binary_search(&x).expect("section lands in the subpoint");
    let r = Hom::new(pt.base.clone(), alg, pt.sect.map().iter().map(|&x| pos(x)).collect())?;
    Ok((f, r, incl))
}

/// Huq commutation, inside the fibre over the base, of the normal
/// subpoints determined by fibre relations `R` and `S`.
pub fn fibre_huq(pt: &PointObject, r: &Congruence, s: &Congruence) -> Result<Admissibility> {
    check_fibre_relation(&pt.proj, r, "R")?;
    check_fibre_relation(&pt.proj, s, "S")?;
    let (f, rr, alpha) = normal_subpoint(pt, r)?;
    let (g, ss, gamma) = normal_subpoint(pt, s)?;
    let d = AdmissibleDiagram::new(f, rr, g, ss, alpha, pt.sect.clone(), gamma)?;
    admissible(&d)
}

/// Reflection of commutation of normal subobjects along `q: E -> B` in the
/// points fibration.
pub fn check_c_instance(q: &Hom, pt: &PointObject, r: &Congruence, s: &Congruence) -> Result<ConditionVerdict> {
    check_fibre_relation(&pt.proj, r, "R")?;
    check_fibre_relation(&pt.proj, s, "S")?;
    let (pulled, w) = pullback_point(q, pt)?;
    let (qr, qs) = (pull_relation(&w, r)?, pull_relation(&w, s)?);
    let down = fibre_huq(&pulled, &qr, &qs)?;
    let up = fibre_huq(pt, r, s)?;
    let mut v = ConditionVerdict::new(
        Condition::C,
        down.phi.is_some(),
        Some(up.phi.is_some()),
        Completeness::Exact,
    );
    for (tag, a) in [("pulled back", &down), ("over the base", &up)] {
        if let Some(c) = &a.conflict {
            v.witnesses
                .push(format!("{tag}: φ({}) forced to both {} and {}", c.element, c.values[0], c.values[1]));
        }
    }
    Ok(v)
}

/// A named admissible diagram of groups.
#[derive(Debug, Clone)]
pub struct NamedDiagram {
    pub name: String,
    pub diagram: AdmissibleDiagram,
}

/// `A -> Z_m` with kernel `N` and section `i ↦ t^i`, where `t` generates a
/// complement of order `m = |A/N|`.
pub fn cyclic_split(a: &Arc<FinAlgebra>, kernel: &Subuniverse, t: usize) -> Result<(Hom, Hom)> {
    let m = a.size() / kernel.len();
    let b = library::algebra(&format!("Z{m}"))?;
    let mut powers = vec![a.basepoint()];
    for _ in 1..m {
        powers.push(a.mul(*powers.last().unwrap(), t));
    }
    let f = a
        .elements()
        .map(|x| {
            powers
                .iter()
                .position(|&p| kernel.contains(a.mul(a.inv(p), x)))
                .ok_or_else(|| Error::Precondition(format!("{} is not a complement generator", a.label(t))))
        })
        .collect::<Result<Vec<_>>>()?;
    let f = Hom::new(a.clone(), b.clone(), f)?;
    let r = Hom::new(b, a.clone(), powers)?;
    Ok((f, r))
}

fn split(group: &str, kernel: &[&str], t: &str) -> Result<(Hom, Hom)> {
    let a = library::algebra(group)?;
    let gens = kernel.iter().map(|x| a.element(x)).collect::<Result<Vec<_>>>()?;
    let n = generate_subuniverse(&a, gens)?;
    cyclic_split(&a, &n, a.element(t)?)
}

/// Diagram with `D = A = C`, `α = γ = 1`.
fn self_diagram(name: &str, group: &str, kernel: &[&str], t: &str) -> Result<NamedDiagram> {
    let (f, r) = split(group, kernel, t)?;
    let id = Hom::identity(f.dom().clone());
    let diagram = AdmissibleDiagram::new(f.clone(), r.clone(), f, r.clone(), id.clone(), r, id)?;
    Ok(NamedDiagram {
        name: name.into(),
        diagram,
    })
}

/// The shipped group diagrams. All groups involved have order at most 24.
pub fn group_diagrams() -> Result<Vec<NamedDiagram>> {
    let mut out = vec![
        self_diagram("s3-sign", "S3", &["(123)"], "(12)")?,
        self_diagram("d4-rotations", "D4", &["(1234)"], "(13)")?,
        self_diagram("a4-v4", "A4", &["(12)(34)", "(13)(24)"], "(123)")?,
        self_diagram("dic3-z3", "Dic3", &["a^2"], "x")?,
    ];

    // D4 split two ways over Z2, with a common section.
    let (f, r) = split("D4", &["(1234)"], "(12)(34)")?;
    let (g, s) = split("D4", &["(13)", "(24)"], "(12)(34)")?;
    let id = Hom::identity(f.dom().clone());
    out.push(NamedDiagram {
        name: "d4-mixed".into(),
        diagram: AdmissibleDiagram::new(f, r.clone(), g, s, id.clone(), r, id)?,
    });

    // S3 and D4 over Z2 mapped into their pullback.
    let (f, r) = split("S3", &["(123)"], "(12)")?;
    let (g, s) = split("D4", &["(1234)"], "(13)")?;
    let w = pullback_split(&f, &r, &g, &s)?;
    let sec = w.induced.clone().unwrap();
    let beta = r.then(&sec.e1)?;
    out.push(NamedDiagram {
        name: "s3-d4-pullback".into(),
        diagram: AdmissibleDiagram::new(f.clone(), r.clone(), g.clone(), s.clone(), sec.e1, beta, sec.e2)?,
    });

    // The same legs mapped onto the abelian base.
    let z2 = f.cod().clone();
    out.push(NamedDiagram {
        name: "s3-d4-abelian".into(),
        diagram: AdmissibleDiagram::new(f.clone(), r, g.clone(), s, f, Hom::identity(z2), g)?,
    });

    let z2 = library::algebra("Z2")?;
    let id = Hom::identity(z2);
    out.push(NamedDiagram {
        name: "z2-degenerate".into(),
        diagram: AdmissibleDiagram::new(id.clone(), id.clone(), id.clone(), id.clone(), id.clone(), id.clone(), id)?,
    });
    Ok(out)
}

/// The Heyting semilattice diagram built from the published tables. Fails
/// if any table is not a homomorphism.
pub fn hslat_counterexample() -> Result<AdmissibleDiagram> {
    let tables = library::hslat_counterexample_tables();
    let get = |n: &str| {
        let t = tables.iter().find(|t| t.name == n).expect("table present");
        t.to_hom().map_err(|e| Error::InvalidAlgebra {
            name: format!("{n}: {} -> {}", t.dom, t.cod),
            reason: e.to_string(),
        })
    };
    AdmissibleDiagram::new(
        get("f")?,
        get("r")?,
        get("g")?,
        get("s")?,
        get("alpha")?,
        get("beta")?,
        get("gamma")?,
    )
}

/// Named diagrams accepted by the checkers: the shipped group diagrams and
/// `cx/hslat-adm`.
pub fn builtin_diagram(name: &str) -> Result<AdmissibleDiagram> {
    if name == "cx/hslat-adm" {
        return hslat_counterexample();
    }
    group_diagrams()?
        .into_iter()
        .find(|d| d.name == name)
        .map(|d| d.diagram)
        .ok_or_else(|| Error::UnknownName(format!("diagram `{name}`")))
}

/// One expected-versus-observed line of a worked example.
#[derive(Debug, Clone, Serialize)]
pub struct ExampleCheck {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleReport {
    pub example: String,
    pub checks: Vec<ExampleCheck>,
    pub verdicts: Vec<ConditionVerdict>,
    /// Set when the fixture could not be built.
    pub error: Option<String>,
}

impl ExampleReport {
    fn new(example: &str) -> Self {
        ExampleReport {
            example: example.into(),
            checks: Vec::new(),
            verdicts: Vec::new(),
            error: None,
        }
    }

    fn check(&mut self, name: &str, expected: impl fmt::Display, observed: impl fmt::Display) {
        let (expected, observed) = (expected.to_string(), observed.to_string());
        self.checks.push(ExampleCheck {
            name: name.into(),
            ok: expected == observed,
            expected,
            observed,
        });
    }

    /// Every recorded outcome was reproduced.
    pub fn reproduced(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.ok)
    }

    /// Some verdict exhibits a counterexample.
    pub fn violation(&self) -> bool {
        self.verdicts.iter().any(|v| !v.satisfied)
    }
}

/// Heyting semilattice diagram: kernel images commute but no `φ` exists.
pub fn example_hslat_ssh() -> ExampleReport {
    let mut rep = ExampleReport::new("hslat-ssh");
    let d = match hslat_counterexample() {
        Ok(d) => d,
        Err(e) => {
            rep.error = Some(e.to_string());
            return rep;
        }
    };
    match (d.kernel_images(), check_ssh_instance(&d)) {
        (Ok((kx, ky)), Ok(v)) => {
            rep.check("Im(α∘ker f)", "{1/2, 1}", &kx);
            rep.check("Im(γ∘ker g)", "{1}", &ky);
            rep.check("hypothesis", true, v.hypothesis);
            rep.check("conclusion", "false", v.conclusion.map_or("-".into(), |c| c.to_string()));
            rep.verdicts.push(v);
        }
        (Err(e), _) | (_, Err(e)) => rep.error = Some(e.to_string()),
    }
    rep
}

/// `C2 ↪ S3` weighted by the identity: Huq-commutes with itself but not over
/// the weight.
pub fn example_s3_w(word_bound: usize) -> ExampleReport {
    let mut rep = ExampleReport::new("s3-w");
    let run = |rep: &mut ExampleReport| -> Result<()> {
        let x = library::c2_in_s3();
        let s3 = x.cod().clone();
        let id = Hom::identity(s3.clone());
        let c2 = image_sub(&x);
        let full = Subuniverse::full(s3.clone());
        rep.check("[C2, C2]", "{e}", higgins(&s3, &c2, &c2)?);
        rep.check("|w-normal closure of C2|", 6, w_normal_closure(&s3, &c2, &id)?.len());
        rep.check("[S3, S3]", "{e, (123), (132)}", higgins(&s3, &full, &full)?);
        let c = WeightedCospan::new(x.clone(), x, id)?;
        let v = check_w_instance(&c, TernaryStrategy::GroupFast)?;
        rep.check("(W) instance satisfied", false, v.satisfied);
        rep.verdicts.push(v);
        let oracle = higgins_ternary(&s3, &c2, &c2, &full, TernaryStrategy::WordOracle(word_bound))?;
        rep.check(
            &format!("word-oracle({word_bound}) ternary nontrivial"),
            true,
            !oracle.is_trivial(),
        );
        Ok(())
    };
    if let Err(e) = run(&mut rep) {
        rep.error = Some(e.to_string());
    }
    rep
}

/// The group formula for `φ` agrees with the closure on every shipped
/// diagram whose hypothesis holds.
pub fn example_groups_phi() -> ExampleReport {
    let mut rep = ExampleReport::new("groups-phi");
    let run = |rep: &mut ExampleReport| -> Result<()> {
        for nd in group_diagrams()? {
            let v = check_ssh_instance(&nd.diagram)?;
            if v.hypothesis {
                let formula = groups_phi(&nd.diagram)?;
                let closure = admissible(&nd.diagram)?.phi;
                let same = closure.as_ref().is_some_and(|c| c.map() == formula.map());
                rep.check(&format!("{}: formula φ = closure φ", nd.name), true, same);
            }
            rep.verdicts.push(v);
        }
        Ok(())
    };
    if let Err(e) = run(&mut rep) {
        rep.error = Some(e.to_string());
    }
    rep
}

/// All three worked examples.
pub fn run_worked_examples(word_bound: usize) -> Vec<ExampleReport> {
    vec![example_hslat_ssh(), example_s3_w(word_bound), example_groups_phi()]
}
