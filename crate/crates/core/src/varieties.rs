use serde::{Deserialize, Serialize};

use crate::algebra::{FinAlgebra, OpSpec, Signature};
use crate::error::{Error, Result};
use crate::term::Term;

/// Which known variety a profile describes. Drives strategy selection in
/// the commutator engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Group,
    Hslat,
    MeetSemilattice,
    Loop,
    Digroup,
    Other,
}

/// A variety of pointed algebras: signature, defining identities, optional
/// Mal'tsev term and a declared (not computed) certification flag.
#[derive(Debug, Clone)]
pub struct VarietyProfile {
    pub name: String,
    pub family: Family,
    pub signature: Signature,
    pub identities: Vec<(Term, Term)>,
    pub malcev_witness: Option<Term>,
    pub ssh_certified: bool,
    pub notes: String,
    /// Oriented consequences of the identities, used to recognise terms
    /// that equal the basepoint in every member of the variety.
    pub simplifications: Vec<(Term, Term)>,
}

fn parse_pairs(sig: &Signature, src: &[(&str, &str)]) -> Vec<(Term, Term)> {
    src.iter()
        .map(|(l, r)| (Term::parse(l, sig).expect("builtin term"), Term::parse(r, sig).expect("builtin term")))
        .collect()
}

impl VarietyProfile {
    pub fn group() -> Self {
        let sig = Signature::group();
        VarietyProfile {
            name: "group".into(),
            family: Family::Group,
            identities: parse_pairs(
                &sig,
                &[
                    ("mul(mul(x,y),z)", "mul(x,mul(y,z))"),
                    ("mul(e,x)", "x"),
                    ("mul(x,e)", "x"),
                    ("mul(x,inv(x))", "e"),
                    ("mul(inv(x),x)", "e"),
                ],
            ),
            simplifications: parse_pairs(
                &sig,
                &[
                    ("mul(e,x)", "x"),
                    ("mul(x,e)", "x"),
                    ("inv(e)", "e"),
                    ("inv(inv(x))", "x"),
                    ("mul(x,inv(x))", "e"),
                    ("mul(inv(x),x)", "e"),
                ],
            ),
            malcev_witness: Some(Term::parse("mul(mul(x0,inv(x1)),x2)", &sig).unwrap()),
            ssh_certified: true,
            notes: "groups are locally algebraically cartesian closed, hence strong Smith-is-Huq holds".into(),
            signature: sig,
        }
    }

    pub fn hslat() -> Self {
        let sig = Signature::heyting_semilattice();
        VarietyProfile {
            name: "hslat".into(),
            family: Family::Hslat,
            identities: parse_pairs(
                &sig,
                &[
                    ("meet(meet(x,y),z)", "meet(x,meet(y,z))"),
                    ("meet(x,y)", "meet(y,x)"),
                    ("meet(x,x)", "x"),
                    ("meet(x,top)", "x"),
                    ("imp(x,x)", "top"),
                    ("meet(x,imp(x,y))", "meet(x,y)"),
                    ("meet(y,imp(x,y))", "y"),
                    ("imp(x,meet(y,z))", "meet(imp(x,y),imp(x,z))"),
                ],
            ),
            simplifications: parse_pairs(
                &sig,
                &[
                    ("meet(x,top)", "x"),
                    ("meet(top,x)", "x"),
                    ("meet(x,x)", "x"),
                    ("imp(x,top)", "top"),
                    ("imp(top,x)", "x"),
                    ("imp(x,x)", "top"),
                ],
            ),
            malcev_witness: Some(Term::parse("meet(imp(imp(x0,x1),x2),imp(imp(x2,x1),x0))", &sig).unwrap()),
            ssh_certified: false,
            notes: "Heyting semilattices: arithmetical, Smith-is-Huq holds, strong Smith-is-Huq fails".into(),
            signature: sig,
        }
    }

    /// Meet-semilattices with top. Not Mal'tsev; included as a negative
    /// control for Mal'tsev checks.
    pub fn meet_semilattice() -> Self {
        let sig = Signature::new(vec![OpSpec::new("meet", 2), OpSpec::new("top", 0)], "top").unwrap();
        VarietyProfile {
            name: "meet-semilattice".into(),
            family: Family::MeetSemilattice,
            identities: parse_pairs(
                &sig,
                &[
                    ("meet(meet(x,y),z)", "meet(x,meet(y,z))"),
                    ("meet(x,y)", "meet(y,x)"),
                    ("meet(x,x)", "x"),
                    ("meet(x,top)", "x"),
                ],
            ),
            simplifications: parse_pairs(
                &sig,
                &[("meet(x,top)", "x"), ("meet(top,x)", "x"), ("meet(x,x)", "x")],
            ),
            malcev_witness: None,
            ssh_certified: false,
            notes: "not a Mal'tsev variety".into(),
            signature: sig,
        }
    }

    pub fn loops() -> Self {
        let sig = Signature::new(
            vec![
                OpSpec::new("mul", 2),
                OpSpec::new("ldiv", 2),
                OpSpec::new("rdiv", 2),
                OpSpec::new("e", 0),
            ],
            "e",
        )
        .unwrap();
        VarietyProfile {
            name: "loop".into(),
            family: Family::Loop,
            identities: parse_pairs(
                &sig,
                &[
                    ("mul(e,x)", "x"),
                    ("mul(x,e)", "x"),
                    ("ldiv(x,mul(x,y))", "y"),
                    ("mul(x,ldiv(x,y))", "y"),
                    ("rdiv(mul(y,x),x)", "y"),
                    ("mul(rdiv(y,x),x)", "y"),
                ],
            ),
            simplifications: parse_pairs(
                &sig,
                &[
                    ("mul(e,x)", "x"),
                    ("mul(x,e)", "x"),
                    ("ldiv(x,x)", "e"),
                    ("rdiv(x,x)", "e"),
                    ("ldiv(e,x)", "x"),
                    ("rdiv(x,e)", "x"),
                    ("ldiv(x,mul(x,y))", "y"),
                    ("mul(x,ldiv(x,y))", "y"),
                    ("rdiv(mul(y,x),x)", "y"),
                    ("mul(rdiv(y,x),x)", "y"),
                ],
            ),
            malcev_witness: Some(Term::parse("mul(x0,ldiv(x1,x2))", &sig).unwrap()),
            ssh_certified: false,
            notes: "loops: Smith-is-Huq fails in general".into(),
            signature: sig,
        }
    }

    /// Two group structures sharing their unit.
    pub fn digroup() -> Self {
        let sig = Signature::new(
            vec![
                OpSpec::new("mul", 2),
                OpSpec::new("inv", 1),
                OpSpec::new("mul2", 2),
                OpSpec::new("inv2", 1),
                OpSpec::new("e", 0),
            ],
            "e",
        )
        .unwrap();
        let mut ids = Vec::new();
        let mut simp = Vec::new();
        for (m, i) in [("mul", "inv"), ("mul2", "inv2")] {
            ids.extend([
                (format!("{m}({m}(x,y),z)"), format!("{m}(x,{m}(y,z))")),
                (format!("{m}(e,x)"), "x".into()),
                (format!("{m}(x,e)"), "x".into()),
                (format!("{m}(x,{i}(x))"), "e".into()),
                (format!("{m}({i}(x),x)"), "e".into()),
            ]);
            simp.extend([
                (format!("{m}(e,x)"), "x".to_string()),
                (format!("{m}(x,e)"), "x".into()),
                (format!("{i}(e)"), "e".into()),
                (format!("{i}({i}(x))"), "x".into()),
                (format!("{m}(x,{i}(x))"), "e".into()),
                (format!("{m}({i}(x),x)"), "e".into()),
            ]);
        }
        let to_pairs = |v: Vec<(String, String)>| {
            v.into_iter()
                .map(|(l, r)| (Term::parse(&l, &sig).unwrap(), Term::parse(&r, &sig).unwrap()))
                .collect()
        };
        VarietyProfile {
            name: "digroup".into(),
            family: Family::Digroup,
            identities: to_pairs(ids),
            simplifications: to_pairs(simp),
            malcev_witness: Some(Term::parse("mul(mul(x0,inv(x1)),x2)", &sig).unwrap()),
            ssh_certified: false,
            notes: "digroups: Smith-is-Huq fails in general; no curated examples".into(),
            signature: sig.clone(),
        }
    }

    pub fn builtin() -> Vec<VarietyProfile> {
        vec![
            Self::group(),
            Self::hslat(),
            Self::meet_semilattice(),
            Self::loops(),
            Self::digroup(),
        ]
    }

    pub fn by_name(name: &str) -> Result<VarietyProfile> {
        Self::builtin()
            .into_iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::UnknownName(format!("profile `{name}`")))
    }

    /// The builtin profile whose signature equals that of `a`, if any.
    pub fn detect(a: &FinAlgebra) -> Option<VarietyProfile> {
        Self::builtin().into_iter().find(|p| &p.signature == a.signature())
    }

    pub fn to_file(&self) -> ProfileFile {
        ProfileFile {
            name: self.name.clone(),
            signature: self.signature.ops().to_vec(),
            basepoint_op: self.signature.basepoint_name().to_string(),
            identities: self.identities.iter().map(|(l, r)| format!("{l} = {r}")).collect(),
            malcev_witness: self.malcev_witness.as_ref().map(Term::to_string),
            ssh_certified: self.ssh_certified,
            notes: Some(self.notes.clone()),
        }
    }

    pub fn from_file(f: &ProfileFile) -> Result<Self> {
        let sig = Signature::new(f.signature.clone(), &f.basepoint_op)?;
        let identities = f
            .identities
            .iter()
            .map(|s| {
                let (l, r) = s
                    .split_once('=')
                    .ok_or_else(|| Error::Malformed(format!("identity `{s}` lacks `=`")))?;
                Ok((Term::parse(l, &sig)?, Term::parse(r, &sig)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let malcev_witness = f.malcev_witness.as_deref().map(|s| Term::parse(s, &sig)).transpose()?;
        if let Some(w) = &malcev_witness {
            ternary_slots(w)?;
        }
        let known = Self::builtin().into_iter().find(|p| p.signature == sig);
        Ok(VarietyProfile {
            name: f.name.clone(),
            family: known.as_ref().map_or(Family::Other, |p| p.family),
            simplifications: known.map(|p| p.simplifications).unwrap_or_default(),
            signature: sig,
            identities,
            malcev_witness,
            ssh_certified: f.ssh_certified,
            notes: f.notes.clone().unwrap_or_default(),
        })
    }
}

/// Serialized form of a profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub name: String,
    pub signature: Vec<OpSpec>,
    pub basepoint_op: String,
    pub identities: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub malcev_witness: Option<String>,
    pub ssh_certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

/// First failing identity instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub identity: String,
    pub assignment: Vec<(String, String)>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub profile: String,
    pub algebra: String,
    pub identities_checked: usize,
    pub assignments_checked: u64,
    pub failure: Option<IdentityFailure>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Exhaustively evaluates every identity of `profile` on `a`.
pub fn verify_identities(a: &FinAlgebra, profile: &VarietyProfile) -> Result<IdentityReport> {
    if a.signature() != &profile.signature {
        return Err(Error::SignatureMismatch(format!(
            "`{}` does not have the signature of profile `{}`",
            a.name(),
            profile.name
        )));
    }
    let n = a.size();
    let mut report = IdentityReport {
        profile: profile.name.clone(),
        algebra: a.name().to_string(),
        identities_checked: 0,
        assignments_checked: 0,
        failure: None,
    };
    let mut env = Vec::new();
    let mut stack = Vec::new();
    for (lhs, rhs) in &profile.identities {
        let mut vars = lhs.vars();
        for v in rhs.vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let pl = lhs.compile(&profile.signature, &vars)?;
        let pr = rhs.compile(&profile.signature, &vars)?;
        let total = crate::algebra::checked_pow(n, vars.len())
            .ok_or_else(|| Error::Precondition("too many assignments to enumerate".into()))?;
        for code in 0..total {
            crate::algebra::decode_tuple(code, n, vars.len(), &mut env);
            let (u, v) = (pl.eval_with(a, &env, &mut stack), pr.eval_with(a, &env, &mut stack));
            report.assignments_checked += 1;
            if u != v {
                report.failure = Some(IdentityFailure {
                    identity: format!("{lhs} = {rhs}"),
                    assignment: vars.iter().cloned().zip(env.iter().map(|&x| a.label(x))).collect(),
                    lhs: a.label(u),
                    rhs: a.label(v),
                });
                return Ok(report);
            }
        }
        report.identities_checked += 1;
    }
    Ok(report)
}

/// Variable order for a ternary term: `x0,x1,x2` or `x,y,z`.
pub fn ternary_slots(t: &Term) -> Result<Vec<String>> {
    let vars = t.vars();
    for names in [["x0", "x1", "x2"], ["x", "y", "z"]] {
        if vars.iter().all(|v| names.contains(&v.as_str())) {
            return Ok(names.iter().map(|s| s.to_string()).collect());
        }
    }
    Err(Error::ArityMismatch {
        op: format!("Mal'tsev term {t}"),
        expected: 3,
        got: vars.len(),
    })
}

/// First pair `(x, y)` violating `p(x,y,y) = x` or `p(x,x,y) = y`.
pub fn malcev_violation(a: &FinAlgebra, term: &Term) -> Result<Option<(usize, usize)>> {
    let slots = ternary_slots(term)?;
    let prog = term.compile(a.signature(), &slots)?;
    let mut stack = Vec::new();
    for x in a.elements() {
        for y in a.elements() {
            if prog.eval_with(a, &[x, y, y], &mut stack) != x || prog.eval_with(a, &[x, x, y], &mut stack) != y {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

pub fn malcev_check(a: &FinAlgebra, term: &Term) -> Result<bool> {
    Ok(malcev_violation(a, term)?.is_none())
}
