use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use commwb_core::commutators::{CommutatorReport, CommutatorValue};
use commwb_core::conditions::ConditionVerdict;
use commwb_core::files::AlgebraFile;
use commwb_core::FinAlgebra;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Input {
    pub name: String,
    pub sha256: String,
}

impl Input {
    pub fn bytes(name: impl Into<String>, data: &[u8]) -> Self {
        Input {
            name: name.into(),
            sha256: hex::encode(Sha256::digest(data)),
        }
    }

    /// Hash of the canonical JSON form of a builtin algebra.
    pub fn algebra(a: &FinAlgebra) -> Self {
        let text = serde_json::to_string(&AlgebraFile::from_algebra(a)).expect("algebra serializes");
        Input::bytes(format!("builtin:{}", a.name()), text.as_bytes())
    }
}

/// The result of one command, before rendering.
#[derive(Debug, Default)]
pub struct Outcome {
    pub result: Value,
    pub text: Vec<String>,
    /// A counterexample was found.
    pub violated: bool,
    pub complete: bool,
    /// The run produced a report, but it deviates from a recorded outcome.
    pub fatal: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct RunReport<'a> {
    pub schema: u32,
    pub command: &'a [String],
    pub inputs: &'a [Input],
    pub status: &'static str,
    pub complete: bool,
    pub result: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fatal: Option<&'a str>,
    pub wall_time_ms: f64,
}

pub fn commutator_json(r: &CommutatorReport, d: &FinAlgebra) -> Value {
    let members: Vec<String> = match &r.result {
        CommutatorValue::Sub(s) => s.labels(),
        CommutatorValue::Cong(c) => c
            .blocks()
            .iter()
            .map(|b| {
                let l: Vec<String> = b.iter().map(|&x| d.label(x)).collect();
                format!("{{{}}}", l.join(","))
            })
            .collect(),
    };
    serde_json::json!({
        "value": members,
        "display": r.result.to_string(),
        "trivial": r.is_trivial(),
        "strategy": r.strategy.to_string(),
        "completeness": r.completeness,
        "witnesses": r.witnesses,
        "notes": r.notes,
    })
}

pub fn commutator_text(label: &str, r: &CommutatorReport) -> Vec<String> {
    let mut out = vec![format!(
        "{label} = {} ({}, {:?})",
        r.result,
        r.strategy,
        r.completeness
    )];
    for w in r.witnesses.iter().take(8) {
        out.push(format!("  {}: {}", w.element, w.evidence));
    }
    if r.witnesses.len() > 8 {
        out.push(format!("  ... {} more witnesses", r.witnesses.len() - 8));
    }
    out.extend(r.notes.iter().map(|n| format!("  note: {n}")));
    out
}

pub fn verdict_text(v: &ConditionVerdict) -> Vec<String> {
    let mut out = vec![v.summary()];
    out.extend(v.witnesses.iter().map(|w| format!("  {w}")));
    out.extend(v.notes.iter().map(|n| format!("  note: {n}")));
    out
}
