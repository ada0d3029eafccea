//! Huq cooperators, binary and ternary Higgins commutators, Smith
//! commutators, normalisation, w-normal closures and weighted commutation.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::FinAlgebra;
use crate::closure::{Certificate, TupleClosure};
use crate::congruence::{extend_congruence, Congruence};
use crate::construct::product;
use crate::error::{Error, Result};
use crate::freeprod::{kernel_images, FreeProduct, Word};
use crate::hom::{image_sub, Hom};
use crate::sub::{generate_subuniverse, same_parent, Subuniverse};
use crate::term::Term;
use crate::varieties::VarietyProfile;

/// Default length bound for the word oracle.
pub const DEFAULT_WORD_BOUND: usize = 12;
/// Default depth for bounded term search.
pub const DEFAULT_TERM_DEPTH: usize = 2;
/// Cap on the number of distinct terms kept by the bounded term search.
pub const TERM_CAP: usize = 60_000;

/// How a commutator was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Strategy {
    /// Trace subalgebra of `K×L×D` (binary Higgins).
    Closure,
    /// Term-condition fixpoint (Smith).
    Fixpoint,
    /// Normal closure of nested group commutators.
    GroupFast,
    WordOracle { max_len: usize },
    TermDepth { depth: usize },
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Closure => write!(f, "closure"),
            Strategy::Fixpoint => write!(f, "fixpoint"),
            Strategy::GroupFast => write!(f, "group-fast"),
            Strategy::WordOracle { max_len } => write!(f, "word-oracle({max_len})"),
            Strategy::TermDepth { depth } => write!(f, "term-depth({depth})"),
        }
    }
}

/// How much a result can be trusted as the exact commutator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    /// A sound lower bound from a bounded search.
    Bounded,
    /// Exact if the group formula is; validated against the word oracle.
    ConjecturedExact,
    Exact,
}

impl Completeness {
    pub fn is_complete(self) -> bool {
        self != Completeness::Bounded
    }
}

/// Evidence that an element lies in a commutator.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Evidence {
    /// Straight-line program over the generating traces.
    Trace { program: String },
    /// A co-smash kernel word in the free product of the arguments.
    Word { word: String, length: usize },
    /// A term over argument elements whose factor deletions all vanish.
    Term { term: String },
    /// A group commutator expression.
    Commutator { expr: String },
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Trace { program } => write!(f, "trace {program}"),
            Evidence::Word { word, length } => write!(f, "word of length {length}: {word}"),
            Evidence::Term { term } => write!(f, "term {term}"),
            Evidence::Commutator { expr } => write!(f, "{expr}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub element: String,
    #[serde(flatten)]
    pub evidence: Evidence,
}

#[derive(Debug, Clone)]
pub enum CommutatorValue {
    Sub(Subuniverse),
    Cong(Congruence),
}

impl CommutatorValue {
    pub fn is_trivial(&self) -> bool {
        match self {
            CommutatorValue::Sub(s) => s.is_trivial(),
            CommutatorValue::Cong(c) => c.is_identity(),
        }
    }
}

impl fmt::Display for CommutatorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommutatorValue::Sub(s) => write!(f, "{s}"),
            CommutatorValue::Cong(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CommutatorReport {
    pub result: CommutatorValue,
    pub strategy: Strategy,
    pub completeness: Completeness,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl CommutatorReport {
    pub fn sub(&self) -> Option<&Subuniverse> {
        match &self.result {
            CommutatorValue::Sub(s) => Some(s),
            CommutatorValue::Cong(_) => None,
        }
    }

    pub fn cong(&self) -> Option<&Congruence> {
        match &self.result {
            CommutatorValue::Cong(c) => Some(c),
            CommutatorValue::Sub(_) => None,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.result.is_trivial()
    }
}

/// A weighted cospan `(x, y, w)` into a common algebra `D`.
#[derive(Debug, Clone)]
pub struct WeightedCospan {
    pub x: Hom,
    pub y: Hom,
    pub w: Hom,
}

impl WeightedCospan {
    pub fn new(x: Hom, y: Hom, w: Hom) -> Result<Self> {
        same_parent(x.cod(), y.cod())
            .and_then(|_| same_parent(x.cod(), w.cod()))
            .map_err(|_| Error::Mismatch("weighted cospan arrows must share a codomain".into()))?;
        Ok(WeightedCospan { x, y, w })
    }

    pub fn target(&self) -> &Arc<FinAlgebra> {
        self.x.cod()
    }
}

fn check_sub_of(d: &Arc<FinAlgebra>, s: &Subuniverse, what: &str) -> Result<()> {
    same_parent(d, s.parent()).map_err(|_| Error::Mismatch(format!("{what} is not a subuniverse of `{}`", d.name())))
}

/// The trace subalgebra `S ≤ K×L×D` generated by `(k,0,k)` and `(0,l,l)`.
pub struct Traces<'a> {
    d: &'a Arc<FinAlgebra>,
    k: &'a Subuniverse,
    l: &'a Subuniverse,
    gens: Vec<Vec<usize>>,
    closure: TupleClosure<'a>,
}

impl<'a> Traces<'a> {
    pub fn new(d: &'a Arc<FinAlgebra>, k: &'a Subuniverse, l: &'a Subuniverse) -> Result<Self> {
        check_sub_of(d, k, "K")?;
        check_sub_of(d, l, "L")?;
        let z = d.basepoint();
        let mut gens: Vec<Vec<usize>> = k.members().iter().map(|&x| vec![x, z, x]).collect();
        gens.extend(l.members().iter().map(|&y| vec![z, y, y]));
        let closure = TupleClosure::generate(vec![d.as_ref(), d.as_ref(), d.as_ref()], &gens)?;
        Ok(Traces {
            d,
            k,
            l,
            gens,
            closure,
        })
    }

    pub fn closure(&self) -> &TupleClosure<'a> {
        &self.closure
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.gens
    }

    fn gen_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.k.members().iter().map(|&x| format!("k[{}]", self.d.label(x))).collect();
        names.extend(self.l.members().iter().map(|&y| format!("l[{}]", self.d.label(y))));
        names
    }

    /// Certificate for the trace at closure index `i`.
    pub fn certificate(&self, i: usize) -> Certificate {
        self.closure.certificate(i)
    }

    /// `{d : (0,0,d) ∈ S}` with a certificate for each non-basepoint member.
    pub fn commutator(&self) -> (Subuniverse, Vec<Witness>) {
        let z = self.d.basepoint();
        let names = self.gen_names();
        let mut members = Vec::new();
        let mut witnesses = Vec::new();
        for (i, t) in self.closure.iter().enumerate() {
            if t[0] == z && t[1] == z {
                members.push(t[2]);
                if t[2] != z {
                    witnesses.push(Witness {
                        element: self.d.label(t[2]),
                        evidence: Evidence::Trace {
                            program: self.certificate(i).render(self.d, &names),
                        },
                    });
                }
            }
        }
        members.sort_unstable();
        members.dedup();
        (Subuniverse::from_sorted_unchecked(self.d.clone(), members), witnesses)
    }
}

/// Outcome of the cooperator construction.
#[derive(Debug, Clone)]
pub struct CooperatorResult {
    /// The cooperator `K×L -> D`, when `S` is a functional graph.
    pub phi: Option<Hom>,
    /// Two traces over the same `(k, l)` with different values.
    pub conflict: Option<([usize; 3], [usize; 3])>,
}

impl CooperatorResult {
    pub fn exists(&self) -> bool {
        self.phi.is_some()
    }
}

/// Huq cooperator of `K, L ≤ D`, read off the trace subalgebra.
pub fn cooperator(d: &Arc<FinAlgebra>, k: &Subuniverse, l: &Subuniverse) -> Result<CooperatorResult> {
    let tr = Traces::new(d, k, l)?;
    let (ka, kin) = k.to_algebra();
    let (la, lin) = l.to_algebra();
    let mut kpos = vec![usize::MAX; d.size()];
    for (i, &x) in kin.map().iter().enumerate() {
        kpos[x] = i;
    }
    let mut lpos = vec![usize::MAX; d.size()];
    for (i, &y) in lin.map().iter().enumerate() {
        lpos[y] = i;
    }
    let nl = la.size();
    let mut graph = vec![usize::MAX; ka.size() * nl];
    let mut conflict = None;
    for t in tr.closure.iter() {
        let slot = kpos[t[0]] * nl + lpos[t[1]];
        if graph[slot] == usize::MAX {
            graph[slot] = t[2];
        } else if graph[slot] != t[2] && conflict.is_none() {
            conflict = Some(([t[0], t[1], graph[slot]], [t[0], t[1], t[2]]));
        }
    }
    if let Some(slot) = graph.iter().position(|&v| v == usize::MAX) {
        return Err(Error::NotMalcev(format!(
            "no trace over ({}, {})",
            d.label(kin.apply(slot / nl)),
            d.label(lin.apply(slot % nl))
        )));
    }
    if conflict.is_some() {
        return Ok(CooperatorResult { phi: None, conflict });
    }
    let kl = product(&ka, &la)?;
    let map: Vec<usize> = kl.pairs().iter().map(|&(a, b)| graph[a * nl + b]).collect();
    let phi = Hom::new(kl.carrier.clone(), d.clone(), map)
        .map_err(|e| Error::Internal(format!("functional trace graph is not a homomorphism: {e}")))?;
    Ok(CooperatorResult { phi: Some(phi), conflict: None })
}

/// Binary Higgins commutator `[K, L] ≤ D`.
pub fn higgins_binary(d: &Arc<FinAlgebra>, k: &Subuniverse, l: &Subuniverse) -> Result<CommutatorReport> {
    let tr = Traces::new(d, k, l)?;
    let (sub, witnesses) = tr.commutator();
    Ok(CommutatorReport {
        result: CommutatorValue::Sub(sub),
        strategy: Strategy::Closure,
        completeness: Completeness::Exact,
        witnesses,
        notes: Vec::new(),
    })
}

/// `[K, L]` as a bare subuniverse.
pub fn higgins(d: &Arc<FinAlgebra>, k: &Subuniverse, l: &Subuniverse) -> Result<Subuniverse> {
    Ok(Traces::new(d, k, l)?.commutator().0)
}

/// Requested ternary strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TernaryStrategy {
    GroupFast,
    WordOracle(usize),
    TermDepth(usize),
}

impl TernaryStrategy {
    /// Group-fast for groups, term-depth otherwise.
    pub fn default_for(d: &FinAlgebra) -> Self {
        if d.is_group() {
            TernaryStrategy::GroupFast
        } else {
            TernaryStrategy::TermDepth(DEFAULT_TERM_DEPTH)
        }
    }
}

/// Ternary Higgins commutator `[K, L, M] ≤ D`.
pub fn higgins_ternary(
    d: &Arc<FinAlgebra>,
    k: &Subuniverse,
    l: &Subuniverse,
    m: &Subuniverse,
    strategy: TernaryStrategy,
) -> Result<CommutatorReport> {
    for (s, n) in [(k, "K"), (l, "L"), (m, "M")] {
        check_sub_of(d, s, n)?;
    }
    match strategy {
        TernaryStrategy::GroupFast => ternary_group_fast(d, k, l, m),
        TernaryStrategy::WordOracle(n) => ternary_word_oracle(d, k, l, m, n),
        TernaryStrategy::TermDepth(depth) => ternary_term_depth(d, k, l, m, depth),
    }
}

fn require_group(d: &FinAlgebra, strategy: &str) -> Result<()> {
    if d.is_group() {
        Ok(())
    } else {
        Err(Error::Strategy {
            strategy: strategy.into(),
            reason: format!("`{}` is not a group", d.name()),
        })
    }
}

/// Normal closure of `gens` in the subgroup generated by `conj`.
pub fn normal_closure(d: &Arc<FinAlgebra>, gens: &[usize], conj: &[usize]) -> Result<Subuniverse> {
    let mut n = generate_subuniverse(d, gens.iter().copied())?;
    loop {
        let mut extra = Vec::new();
        let mask = n.mask();
        for &j in conj {
            let ji = d.inv(j);
            for &x in n.members() {
                let y = d.mul(d.mul(j, x), ji);
                if !mask[y] {
                    extra.push(y);
                }
            }
        }
        if extra.is_empty() {
            return Ok(n);
        }
        n = generate_subuniverse(d, n.members().iter().copied().chain(extra))?;
    }
}

fn ternary_group_fast(d: &Arc<FinAlgebra>, k: &Subuniverse, l: &Subuniverse, m: &Subuniverse) -> Result<CommutatorReport> {
    require_group(d, "group-fast")?;
    let z = d.basepoint();
    let mut seen = vec![false; d.size()];
    seen[z] = true;
    let mut gens = Vec::new();
    let mut witnesses = Vec::new();
    let triples = [(k, l, m, "k", "l", "m"), (l, m, k, "l", "m", "k"), (m, k, l, "m", "k", "l")];
    for (a, b, c, na, nb, nc) in triples {
        for &x in a.members() {
            for &y in b.members() {
                let xy = d.commutator(x, y);
                if xy == z {
                    continue;
                }
                for &w in c.members() {
                    let v = d.commutator(xy, w);
                    if !seen[v] {
                        seen[v] = true;
                        gens.push(v);
                        witnesses.push(Witness {
                            element: d.label(v),
                            evidence: Evidence::Commutator {
                                expr: format!(
                                    "[[{na}={},{nb}={}],{nc}={}]",
                                    d.label(x),
                                    d.label(y),
                                    d.label(w)
                                ),
                            },
                        });
                    }
                }
            }
        }
    }
    let conj: Vec<usize> = k.members().iter().chain(l.members()).chain(m.members()).copied().collect();
    let result = normal_closure(d, &gens, &conj)?;
    Ok(CommutatorReport {
        result: CommutatorValue::Sub(result),
        strategy: Strategy::GroupFast,
        completeness: Completeness::ConjecturedExact,
        witnesses,
        notes: vec!["normal closure in K∨L∨M of [[K,L],M], [[L,M],K], [[M,K],L]".into()],
    })
}

fn ternary_word_oracle(
    d: &Arc<FinAlgebra>,
    k: &Subuniverse,
    l: &Subuniverse,
    m: &Subuniverse,
    max_len: usize,
) -> Result<CommutatorReport> {
    require_group(d, "word-oracle")?;
    let (ka, kin) = k.to_algebra();
    let (la, lin) = l.to_algebra();
    let (ma, min) = m.to_algebra();
    let fp = FreeProduct::new(vec![ka, la, ma])?;
    let homs = [kin, lin, min];
    let ki = kernel_images(&fp, &homs, max_len, true)?;
    let result = generate_subuniverse(d, ki.images.iter().copied())?;
    let witnesses = ki
        .witnesses
        .iter()
        .map(|(x, w)| Witness {
            element: d.label(*x),
            evidence: Evidence::Word {
                word: render_word(&homs, w),
                length: w.len(),
            },
        })
        .collect();
    Ok(CommutatorReport {
        result: CommutatorValue::Sub(result),
        strategy: Strategy::WordOracle { max_len },
        completeness: Completeness::Bounded,
        witnesses,
        notes: vec![format!(
            "{} half words, {} deletion keys",
            ki.stats.half_words, ki.stats.key_groups
        )],
    })
}

fn render_word(homs: &[Hom], w: &Word) -> String {
    const NAMES: [&str; 3] = ["k", "l", "m"];
    let d = homs[0].cod();
    w.syllables()
        .iter()
        .map(|&(f, x)| format!("{}[{}]", NAMES[f], d.label(homs[f].apply(x))))
        .collect::<Vec<_>>()
        .join(" ")
}

/// A candidate term with its value and its three factor deletions in
/// normal form.
#[derive(Clone)]
struct Cand {
    term: Term,
    value: usize,
    dels: [Term; 3],
}

fn ternary_term_depth(
    d: &Arc<FinAlgebra>,
    k: &Subuniverse,
    l: &Subuniverse,
    m: &Subuniverse,
    depth: usize,
) -> Result<CommutatorReport> {
    let profile = VarietyProfile::detect(d).ok_or_else(|| Error::Strategy {
        strategy: "term-depth".into(),
        reason: format!("no variety profile matches the signature of `{}`", d.name()),
    })?;
    let sig = d.signature();
    let zero = Term::constant(sig.basepoint_name());
    let rules = &profile.simplifications;
    let z = d.basepoint();

    let mut all: Vec<Cand> = Vec::new();
    let mut keys: HashSet<(usize, [Term; 3])> = HashSet::new();
    let mut push = |c: Cand, all: &mut Vec<Cand>| {
        if keys.insert((c.value, c.dels.clone())) {
            all.push(c);
            true
        } else {
            false
        }
    };
    push(
        Cand {
            term: zero.clone(),
            value: z,
            dels: [zero.clone(), zero.clone(), zero.clone()],
        },
        &mut all,
    );
    for (f, (s, name)) in [(k, "k"), (l, "l"), (m, "m")].into_iter().enumerate() {
        for &x in s.members().iter().filter(|&&x| x != z) {
            let atom = Term::var(format!("{name}{x}"));
            let mut dels = [atom.clone(), atom.clone(), atom.clone()];
            dels[f] = zero.clone();
            push(
                Cand {
                    term: atom,
                    value: x,
                    dels,
                },
                &mut all,
            );
        }
    }

    let ops: Vec<(usize, String, usize)> = sig
        .ops()
        .iter()
        .enumerate()
        .filter(|(_, o)| o.arity > 0)
        .map(|(i, o)| (i, o.name.clone(), o.arity))
        .collect();
    let mut truncated = false;
    let mut level_start = 0;
    'levels: for _ in 0..depth {
        let level_end = all.len();
        for (op, name, arity) in &ops {
            let n = level_end;
            let total = crate::algebra::checked_pow(n, *arity).unwrap_or(usize::MAX);
            let mut args = Vec::new();
            for code in 0..total {
                crate::algebra::decode_tuple(code, n, *arity, &mut args);
                // At least one argument from the newest level.
                if args.iter().all(|&a| a < level_start) {
                    continue;
                }
                let vals: Vec<usize> = args.iter().map(|&a| all[a].value).collect();
                let value = d.apply(*op, &vals);
                let dels = std::array::from_fn(|f| {
                    Term::app(name.clone(), args.iter().map(|&a| all[a].dels[f].clone()).collect()).rewrite(rules)
                });
                let term = Term::app(name.clone(), args.iter().map(|&a| all[a].term.clone()).collect());
                push(Cand { term, value, dels }, &mut all);
                if all.len() >= TERM_CAP {
                    truncated = true;
                    break 'levels;
                }
            }
        }
        level_start = level_end;
    }

    let mut hits = Vec::new();
    let mut witnesses = Vec::new();
    let mut seen = vec![false; d.size()];
    for c in &all {
        if c.dels.iter().all(|t| *t == zero) {
            hits.push(c.value);
            if !seen[c.value] && c.value != z {
                seen[c.value] = true;
                witnesses.push(Witness {
                    element: d.label(c.value),
                    evidence: Evidence::Term { term: c.term.to_string() },
                });
            }
        }
    }
    let result = generate_subuniverse(d, hits)?;
    let mut notes = vec![format!(
        "{} terms; atoms k<i>, l<i>, m<i> name elements by index",
        all.len()
    )];
    if truncated {
        notes.push(format!("term enumeration truncated at {TERM_CAP} terms"));
    }
    Ok(CommutatorReport {
        result: CommutatorValue::Sub(result),
        strategy: Strategy::TermDepth { depth },
        completeness: Completeness::Bounded,
        witnesses,
        notes,
    })
}

/// Smith commutator `[R, S]` via the term-condition fixpoint on
/// `M(R,S) ≤ D⁴`, generated by `(a,a,b,b)` for `a R b` and `(u,v,u,v)` for
/// `u S v`. A tuple `(x,y,z,w)` forces `z δ w` once `x δ y`.
pub fn smith(d: &Arc<FinAlgebra>, r: &Congruence, s: &Congruence) -> Result<CommutatorReport> {
    same_parent(d, r.parent())?;
    same_parent(d, s.parent())?;
    let mut gens: Vec<Vec<usize>> = Vec::new();
    for a in d.elements() {
        for b in d.elements() {
            if r.related(a, b) {
                gens.push(vec![a, a, b, b]);
            }
        }
    }
    for u in d.elements() {
        for v in d.elements() {
            if s.related(u, v) {
                gens.push(vec![u, v, u, v]);
            }
        }
    }
    let m = TupleClosure::generate(vec![d.as_ref(); 4], &gens)?;
    let mut delta = Congruence::identity(d.clone());
    let mut rounds = 0;
    loop {
        rounds += 1;
        let forced: Vec<(usize, usize)> = m
            .iter()
            .filter(|t| delta.related(t[0], t[1]) && !delta.related(t[2], t[3]))
            .map(|t| (t[2], t[3]))
            .collect();
        if forced.is_empty() {
            break;
        }
        delta = extend_congruence(&delta, forced)?;
    }
    Ok(CommutatorReport {
        result: CommutatorValue::Cong(delta),
        strategy: Strategy::Fixpoint,
        completeness: Completeness::Exact,
        witnesses: Vec::new(),
        notes: vec![
            format!("|M(R,S)| = {}, {} rounds", m.len(), rounds),
            "computed on the underlying algebra".into(),
        ],
    })
}

/// The basepoint class of `θ`.
pub fn normalise(theta: &Congruence) -> Subuniverse {
    theta.zero_class()
}

/// `[Im w, X] ≤ X`.
pub fn is_w_normal(d: &Arc<FinAlgebra>, x: &Subuniverse, w: &Hom) -> Result<bool> {
    same_parent(d, w.cod())?;
    Ok(higgins(d, &image_sub(w), x)?.is_subset_of(x))
}

/// `[Im w, X] ∨ X`, checked to be w-normal.
pub fn w_normal_closure(d: &Arc<FinAlgebra>, x: &Subuniverse, w: &Hom) -> Result<Subuniverse> {
    same_parent(d, w.cod())?;
    check_sub_of(d, x, "X")?;
    let c = higgins(d, &image_sub(w), x)?;
    let out = c.join(x)?;
    if !is_w_normal(d, &out, w)? {
        return Err(Error::Internal(format!(
            "w-normal closure {out} is not w-normal"
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightedStrategy {
    ProperCommutators,
    SshKernel,
}

#[derive(Debug, Clone)]
pub struct WeightedVerdict {
    pub commute: bool,
    pub strategy: WeightedStrategy,
    pub completeness: Completeness,
    pub reports: Vec<(String, CommutatorReport)>,
}

/// Whether `x` and `y` commute over `w`.
pub fn commute_over(
    c: &WeightedCospan,
    strategy: WeightedStrategy,
    ternary: TernaryStrategy,
) -> Result<WeightedVerdict> {
    let d = c.target();
    let (ix, iy, iw) = (image_sub(&c.x), image_sub(&c.y), image_sub(&c.w));
    match strategy {
        WeightedStrategy::ProperCommutators => {
            for (s, n) in [(&ix, "Im x"), (&iy, "Im y")] {
                if !is_w_normal(d, s, &c.w)? {
                    return Err(Error::Precondition(format!("{n} = {s} is not w-normal; the cospan is not w-proper")));
                }
            }
            let bin = higgins_binary(d, &ix, &iy)?;
            let ter = higgins_ternary(d, &ix, &iy, &iw, ternary)?;
            let commute = bin.is_trivial() && ter.is_trivial();
            let completeness = ter.completeness.min(bin.completeness);
            Ok(WeightedVerdict {
                commute,
                strategy,
                completeness,
                reports: vec![("[Im x, Im y]".into(), bin), ("[Im x, Im y, Im w]".into(), ter)],
            })
        }
        WeightedStrategy::SshKernel => {
            let certified = VarietyProfile::detect(d).is_some_and(|p| p.ssh_certified);
            if !certified {
                return Err(Error::Precondition(format!(
                    "the variety of `{}` is not certified to satisfy strong Smith-is-Huq",
                    d.name()
                )));
            }
            let nx = w_normal_closure(d, &ix, &c.w)?;
            let ny = w_normal_closure(d, &iy, &c.w)?;
            let bin = higgins_binary(d, &nx, &ny)?;
            Ok(WeightedVerdict {
                commute: bin.is_trivial(),
                strategy,
                completeness: Completeness::Exact,
                reports: vec![("[w-closure Im x, w-closure Im y]".into(), bin)],
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::generate_congruence;
    use crate::enumerate::{all_congruences, all_subuniverses};
    use crate::library;

    fn s3_sub(gens: &[&str]) -> (Arc<FinAlgebra>, Subuniverse) {
        let s3 = library::algebra("S3").unwrap();
        let g: Vec<usize> = gens.iter().map(|x| s3.element(x).unwrap()).collect();
        let sub = generate_subuniverse(&s3, g).unwrap();
        (s3, sub)
    }

    #[test]
    fn cooperator_examples() {
        let (s3, c2) = s3_sub(&["(12)"]);
        assert!(cooperator(&s3, &c2, &c2).unwrap().exists());
        let (_, c2b) = s3_sub(&["(13)"]);
        let r = cooperator(&s3, &c2, &c2b).unwrap();
        assert!(!r.exists());
        let (a, b) = r.conflict.unwrap();
        assert_eq!((a[0], a[1]), (b[0], b[1]));
        assert_ne!(a[2], b[2]);

        let dd = library::algebra("cx/hslat-D").unwrap();
        let x = Subuniverse::new(dd.clone(), [1, 2]).unwrap();
        let y = Subuniverse::trivial(dd.clone());
        assert!(cooperator(&dd, &x, &y).unwrap().exists());
    }

    #[test]
    fn binary_examples() {
        let (s3, c2) = s3_sub(&["(12)"]);
        assert!(higgins_binary(&s3, &c2, &c2).unwrap().is_trivial());
        let (_, c2b) = s3_sub(&["(13)"]);
        let r = higgins_binary(&s3, &c2, &c2b).unwrap();
        assert_eq!(r.sub().unwrap().labels(), vec!["e", "(123)", "(132)"]);
        assert!(!r.witnesses.is_empty());
        let triv = Subuniverse::trivial(s3.clone());
        assert!(higgins_binary(&s3, &c2, &triv).unwrap().is_trivial());
    }

    #[test]
    fn trace_certificates_reevaluate() {
        let (s3, c2) = s3_sub(&["(12)"]);
        let (_, c3) = s3_sub(&["(123)"]);
        let tr = Traces::new(&s3, &c2, &c3).unwrap();
        let facs = [s3.as_ref(), s3.as_ref(), s3.as_ref()];
        for i in 0..tr.closure().len() {
            let v = tr.certificate(i).evaluate(&facs, tr.generators()).unwrap();
            assert_eq!(v, tr.closure().tuple(i));
        }
    }

    #[test]
    fn ternary_examples() {
        let (s3, c2) = s3_sub(&["(12)"]);
        let full = Subuniverse::full(s3.clone());
        let fast = higgins_ternary(&s3, &c2, &c2, &full, TernaryStrategy::GroupFast).unwrap();
        assert_eq!(fast.sub().unwrap().len(), 3);
        let oracle = higgins_ternary(&s3, &c2, &c2, &full, TernaryStrategy::WordOracle(10)).unwrap();
        assert_eq!(oracle.sub().unwrap(), fast.sub().unwrap());
        assert!(!oracle.witnesses.is_empty());
        let triv = Subuniverse::trivial(s3.clone());
        assert!(higgins_ternary(&s3, &c2, &full, &triv, TernaryStrategy::GroupFast).unwrap().is_trivial());

        let d4 = library::algebra("D4").unwrap();
        let all = Subuniverse::full(d4.clone());
        assert!(higgins_ternary(&d4, &all, &all, &all, TernaryStrategy::GroupFast).unwrap().is_trivial());
    }

    #[test]
    fn strategy_profile_mismatch() {
        let h = library::algebra("hslat/chain3").unwrap();
        let f = Subuniverse::full(h.clone());
        assert!(matches!(
            higgins_ternary(&h, &f, &f, &f, TernaryStrategy::GroupFast),
            Err(Error::Strategy { .. })
        ));
        let r = higgins_ternary(&h, &f, &f, &f, TernaryStrategy::TermDepth(2)).unwrap();
        assert_eq!(r.completeness, Completeness::Bounded);
    }

    #[test]
    fn smith_examples() {
        let z4 = library::algebra("Z4").unwrap();
        let n = Congruence::total(z4.clone());
        assert!(smith(&z4, &n, &n).unwrap().cong().unwrap().is_identity());
        let s3 = library::algebra("S3").unwrap();
        let n = Congruence::total(s3.clone());
        let c = smith(&s3, &n, &n).unwrap();
        let cosets = generate_congruence(&s3, [(0, s3.element("(123)").unwrap())]).unwrap();
        assert_eq!(c.cong().unwrap(), &cosets);
        let delta = Congruence::identity(s3.clone());
        assert!(smith(&s3, &delta, &n).unwrap().is_trivial());
    }

    #[test]
    fn normalise_examples() {
        let z4 = library::algebra("Z4").unwrap();
        let c = generate_congruence(&z4, [(0, 2)]).unwrap();
        assert_eq!(normalise(&c).members(), &[0, 2]);
        assert_eq!(normalise(&Congruence::total(z4.clone())).len(), 4);
    }

    #[test]
    fn w_normal_examples() {
        let (s3, c2) = s3_sub(&["(12)"]);
        let (_, a3) = s3_sub(&["(123)"]);
        let id = Hom::identity(s3.clone());
        let zero = Hom::zero(s3.clone(), s3.clone()).unwrap();
        assert!(is_w_normal(&s3, &a3, &id).unwrap());
        assert!(!is_w_normal(&s3, &c2, &id).unwrap());
        assert!(is_w_normal(&s3, &c2, &zero).unwrap());
        assert_eq!(w_normal_closure(&s3, &c2, &id).unwrap().len(), 6);
        assert_eq!(w_normal_closure(&s3, &c2, &zero).unwrap(), c2);
        assert_eq!(w_normal_closure(&s3, &a3, &id).unwrap(), a3);
    }

    #[test]
    fn weighted_examples() {
        let x = library::c2_in_s3();
        let s3 = x.cod().clone();
        let zero = Hom::zero(s3.clone(), s3.clone()).unwrap();
        let c = WeightedCospan::new(x.clone(), x.clone(), zero).unwrap();
        for st in [WeightedStrategy::ProperCommutators, WeightedStrategy::SshKernel] {
            assert!(commute_over(&c, st, TernaryStrategy::GroupFast).unwrap().commute);
        }
        let c = WeightedCospan::new(x.clone(), x.clone(), Hom::identity(s3.clone())).unwrap();
        assert!(!commute_over(&c, WeightedStrategy::SshKernel, TernaryStrategy::GroupFast).unwrap().commute);
        assert!(matches!(
            commute_over(&c, WeightedStrategy::ProperCommutators, TernaryStrategy::GroupFast),
            Err(Error::Precondition(_))
        ));

        let z6 = library::algebra("Z6").unwrap();
        let id = Hom::identity(z6.clone());
        let c = WeightedCospan::new(id.clone(), id.clone(), id).unwrap();
        for st in [WeightedStrategy::ProperCommutators, WeightedStrategy::SshKernel] {
            assert!(commute_over(&c, st, TernaryStrategy::GroupFast).unwrap().commute);
        }
    }

    #[test]
    fn binary_matches_group_normal_closure() {
        for g in library::groups_up_to(12) {
            let subs = all_subuniverses(&g).unwrap();
            for k in &subs {
                for l in &subs {
                    let c = higgins(&g, k, l).unwrap();
                    let mut comms = Vec::new();
                    for &x in k.members() {
                        for &y in l.members() {
                            comms.push(g.commutator(x, y));
                        }
                    }
                    let conj: Vec<usize> = k.members().iter().chain(l.members()).copied().collect();
                    let expect = normal_closure(&g, &comms, &conj).unwrap();
                    assert_eq!(c, expect, "{}: [{k}, {l}]", g.name());
                }
            }
        }
    }

    #[test]
    fn hslat_commutators_are_intersections() {
        for h in library::heyting_semilattices().into_iter().filter(|h| h.size() <= 5) {
            let congs = all_congruences(&h).unwrap();
            for r in &congs {
                for s in &congs {
                    let k = normalise(r);
                    let l = normalise(s);
                    assert_eq!(higgins(&h, &k, &l).unwrap(), k.intersection(&l).unwrap());
                    let sm = smith(&h, r, s).unwrap();
                    assert_eq!(sm.cong().unwrap(), &r.meet(s).unwrap());
                }
            }
        }
    }
}
