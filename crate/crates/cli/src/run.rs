use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use serde_json::json;

use commwb_core::commutators::{
    commute_over, cooperator, higgins_binary, higgins_ternary, is_w_normal, smith, w_normal_closure,
    TernaryStrategy, WeightedStrategy,
};
use commwb_core::conditions::{
    self, check_c_instance, check_reflection_instance, check_sh_instance, check_ssh_instance, check_w_instance,
    ExampleReport, Fibration,
};
use commwb_core::files::{self, located, parse_json, AlgebraFile, Diagram, DiagramFile};
use commwb_core::varieties::ProfileFile;
use commwb_core::{
    generate_congruence, generate_subuniverse, library, malcev_check, verify_identities, Congruence, Error,
    FinAlgebra, Hom, PointObject, Result, Subuniverse, VarietyProfile,
};

use crate::args::*;
use crate::report::{commutator_json, commutator_text, verdict_text, Input, Outcome, RunReport, SCHEMA};

/// Runs the command and writes the report. Returns the process exit code.
pub fn main(cli: &Cli, argv: Vec<String>) -> u8 {
    let start = Instant::now();
    let mut ctx = Ctx::default();
    let outcome = match dispatch(&mut ctx, &cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let code = if outcome.fatal.is_some() {
        2
    } else if outcome.violated {
        1
    } else {
        0
    };
    let status = match code {
        0 => "ok",
        1 => "violated",
        _ => "deviation",
    };
    let rendered = match cli.format {
        Format::Json => {
            let rep = RunReport {
                schema: SCHEMA,
                command: &argv,
                inputs: &ctx.inputs,
                status,
                complete: outcome.complete,
                result: &outcome.result,
                fatal: outcome.fatal.as_deref(),
                wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
            };
            serde_json::to_string_pretty(&rep).expect("report serializes") + "\n"
        }
        Format::Text => {
            let mut lines = outcome.text.clone();
            if !outcome.complete {
                lines.push("note: result comes from a bounded search".into());
            }
            if let Some(f) = &outcome.fatal {
                lines.push(format!("DEVIATION: {f}"));
            }
            lines.join("\n") + "\n"
        }
    };
    let written = match &cli.out {
        Some(p) => std::fs::write(p, rendered).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{rendered}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 2;
    }
    if let Some(f) = &outcome.fatal {
        eprintln!("error: {f}");
    }
    code
}

#[derive(Default)]
struct Ctx {
    inputs: Vec<Input>,
}

/// Prefixes an error with the file it came from.
impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String> {
        let data = std::fs::read(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
        self.inputs.push(Input::bytes(path.display().to_string(), &data));
        String::from_utf8(data).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
    }

    fn algebra(&mut self, src: &AlgebraSource) -> Result<Arc<FinAlgebra>> {
        if let Some(p) = &src.file {
            let text = self.read(p)?;
            let f: AlgebraFile = parse_json(&text, &p.display().to_string())?;
            let a = f.to_algebra().map_err(|e| located(p, e))?;
            return Ok(Arc::new(a));
        }
        let name = src.algebra.as_deref().expect("clap requires a source");
        let a = library::algebra(name)?;
        self.inputs.push(Input::algebra(&a));
        Ok(a)
    }

    fn diagram_file(&mut self, path: &Path) -> Result<(DiagramFile, Diagram)> {
        let text = self.read(path)?;
        let f: DiagramFile = parse_json(&text, &path.display().to_string())?;
        let d = f.resolve().map_err(|e| located(path, e))?;
        Ok((f, d))
    }
}

fn parse_sub(a: &Arc<FinAlgebra>, spec: &str) -> Result<Subuniverse> {
    match spec.trim() {
        "*" => Ok(Subuniverse::full(a.clone())),
        s => {
            let gens = s.split_whitespace().map(|x| a.element(x)).collect::<Result<Vec<_>>>()?;
            generate_subuniverse(a, gens)
        }
    }
}

fn parse_cong(a: &Arc<FinAlgebra>, spec: &str) -> Result<Congruence> {
    match spec.trim() {
        "*" => Ok(Congruence::total(a.clone())),
        s => {
            let pairs = s
                .split_whitespace()
                .map(|p| {
                    let (x, y) = p
                        .split_once('=')
                        .ok_or_else(|| Error::Malformed(format!("congruence pair `{p}` lacks `=`")))?;
                    Ok((a.element(x)?, a.element(y)?))
                })
                .collect::<Result<Vec<_>>>()?;
            generate_congruence(a, pairs)
        }
    }
}

fn exactly<'a>(items: &'a [String], n: usize, what: &str) -> Result<&'a [String]> {
    if items.len() != n {
        return Err(Error::Malformed(format!("expected {n} {what} arguments, got {}", items.len())));
    }
    Ok(items)
}

fn ternary_strategy(d: &FinAlgebra, b: &Bounds) -> Result<TernaryStrategy> {
    match b.strategy.as_deref() {
        None => Ok(match TernaryStrategy::default_for(d) {
            TernaryStrategy::TermDepth(_) => TernaryStrategy::TermDepth(b.term_depth),
            s => s,
        }),
        Some("group-fast") => Ok(TernaryStrategy::GroupFast),
        Some("word-oracle") => Ok(TernaryStrategy::WordOracle(b.word_bound)),
        Some("term-depth") => Ok(TernaryStrategy::TermDepth(b.term_depth)),
        Some(s) => Err(Error::Malformed(format!(
            "unknown strategy `{s}`; expected group-fast, word-oracle or term-depth"
        ))),
    }
}

fn dispatch(ctx: &mut Ctx, cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Algebra(c) => algebra_cmd(ctx, c),
        Command::Commutator(c) => commutator_cmd(ctx, c),
        Command::Closure(c) => closure_cmd(ctx, c),
        Command::Check(c) => check_cmd(ctx, c),
        Command::Examples(ExamplesCmd::Run { which, word_bound }) => Ok(examples(*which, *word_bound)),
    }
}

fn algebra_cmd(ctx: &mut Ctx, cmd: &AlgebraCmd) -> Result<Outcome> {
    match cmd {
        AlgebraCmd::List => {
            let names = library::names();
            Ok(Outcome {
                text: names.clone(),
                result: json!(names),
                complete: true,
                ..Default::default()
            })
        }
        AlgebraCmd::Verify {
            source,
            profile,
            profile_file,
        } => {
            let a = ctx.algebra(source)?;
            let prof = match (profile, profile_file) {
                (Some(n), _) => VarietyProfile::by_name(n)?,
                (None, Some(p)) => {
                    let text = ctx.read(p)?;
                    let f: ProfileFile = parse_json(&text, &p.display().to_string())?;
                    VarietyProfile::from_file(&f)?
                }
                (None, None) => VarietyProfile::detect(&a).ok_or_else(|| {
                    Error::UnknownName(format!("no builtin profile matches the signature of `{}`", a.name()))
                })?,
            };
            let rep = verify_identities(&a, &prof)?;
            let malcev = match (&prof.malcev_witness, rep.passed()) {
                (Some(t), true) => Some(malcev_check(&a, t)?),
                _ => None,
            };
            let mut text = vec![format!("{} ({} elements) against profile `{}`", a.name(), a.size(), prof.name)];
            match &rep.failure {
                None => text.push(format!(
                    "identities hold: {} identities, {} assignments",
                    rep.identities_checked, rep.assignments_checked
                )),
                Some(f) => {
                    let asg: Vec<String> = f.assignment.iter().map(|(v, x)| format!("{v}={x}")).collect();
                    text.push(format!(
                        "identity {} fails at {}: {} != {}",
                        f.identity,
                        asg.join(", "),
                        f.lhs,
                        f.rhs
                    ));
                }
            }
            if let Some(m) = malcev {
                text.push(format!("Mal'tsev witness {}", if m { "holds" } else { "fails" }));
            }
            Ok(Outcome {
                violated: !rep.passed() || malcev == Some(false),
                result: json!({ "report": rep, "malcev": malcev, "is_group": a.is_group() }),
                text,
                complete: true,
                fatal: None,
            })
        }
    }
}

fn commutator_cmd(ctx: &mut Ctx, cmd: &CommutatorCmd) -> Result<Outcome> {
    match cmd {
        CommutatorCmd::Huq { source, subs } => {
            let d = ctx.algebra(source)?;
            let s = exactly(subs, 2, "--sub")?;
            let (k, l) = (parse_sub(&d, &s[0])?, parse_sub(&d, &s[1])?);
            let coop = cooperator(&d, &k, &l)?;
            let c = higgins_binary(&d, &k, &l)?;
            let mut text = vec![format!(
                "K = {k}, L = {l}: {}",
                if coop.exists() { "Huq-commute" } else { "do not Huq-commute" }
            )];
            text.extend(commutator_text("[K, L]", &c));
            let conflict = coop.conflict.map(|(p, q)| [p.map(|x| d.label(x)), q.map(|x| d.label(x))]);
            Ok(Outcome {
                result: json!({
                    "K": k.labels(),
                    "L": l.labels(),
                    "cooperator": coop.phi.map(|p| p.map().to_vec()),
                    "conflict": conflict,
                    "commutator": commutator_json(&c, &d),
                }),
                text,
                complete: true,
                ..Default::default()
            })
        }
        CommutatorCmd::Higgins { source, subs } => {
            let d = ctx.algebra(source)?;
            let s = exactly(subs, 2, "--sub")?;
            let (k, l) = (parse_sub(&d, &s[0])?, parse_sub(&d, &s[1])?);
            let c = higgins_binary(&d, &k, &l)?;
            Ok(Outcome {
                text: commutator_text(&format!("[{k}, {l}]"), &c),
                result: json!({ "K": k.labels(), "L": l.labels(), "commutator": commutator_json(&c, &d) }),
                complete: true,
                ..Default::default()
            })
        }
        CommutatorCmd::Ternary { source, subs, bounds } => {
            let d = ctx.algebra(source)?;
            let s = exactly(subs, 3, "--sub")?;
            let (k, l, m) = (parse_sub(&d, &s[0])?, parse_sub(&d, &s[1])?, parse_sub(&d, &s[2])?);
            let c = higgins_ternary(&d, &k, &l, &m, ternary_strategy(&d, bounds)?)?;
            Ok(Outcome {
                text: commutator_text(&format!("[{k}, {l}, {m}]"), &c),
                result: json!({
                    "K": k.labels(), "L": l.labels(), "M": m.labels(),
                    "commutator": commutator_json(&c, &d),
                }),
                complete: c.completeness.is_complete(),
                ..Default::default()
            })
        }
        CommutatorCmd::Smith { source, congs } => {
            let d = ctx.algebra(source)?;
            let s = exactly(congs, 2, "--cong")?;
            let (r, t) = (parse_cong(&d, &s[0])?, parse_cong(&d, &s[1])?);
            let c = smith(&d, &r, &t)?;
            Ok(Outcome {
                text: commutator_text(&format!("[{r}, {t}]"), &c),
                result: json!({
                    "R": r.to_string(), "S": t.to_string(),
                    "commutator": commutator_json(&c, &d),
                }),
                complete: true,
                ..Default::default()
            })
        }
        CommutatorCmd::Weighted { diagram, mode, bounds } => {
            let (_, dg) = ctx.diagram_file(diagram)?;
            let Diagram::Weighted(c) = dg else {
                return Err(Error::Malformed(format!("{}: not a weighted diagram", diagram.display())));
            };
            let strategy = match mode.as_str() {
                "proper-commutators" => WeightedStrategy::ProperCommutators,
                "ssh-kernel" => WeightedStrategy::SshKernel,
                m => {
                    return Err(Error::Malformed(format!(
                        "unknown mode `{m}`; expected proper-commutators or ssh-kernel"
                    )))
                }
            };
            let d = c.target().clone();
            let v = commute_over(&c, strategy, ternary_strategy(&d, bounds)?)?;
            let mut text = vec![format!(
                "x and y {} over w ({mode})",
                if v.commute { "commute" } else { "do not commute" }
            )];
            let mut reports = Vec::new();
            for (label, r) in &v.reports {
                text.extend(commutator_text(label, r));
                reports.push(json!({ "label": label, "commutator": commutator_json(r, &d) }));
            }
            Ok(Outcome {
                result: json!({ "commute": v.commute, "mode": v.strategy, "reports": reports }),
                text,
                complete: v.completeness.is_complete(),
                ..Default::default()
            })
        }
    }
}

fn closure_cmd(ctx: &mut Ctx, cmd: &ClosureCmd) -> Result<Outcome> {
    match cmd {
        ClosureCmd::Sub { source, gens } => {
            let d = ctx.algebra(source)?;
            let s = parse_sub(&d, gens)?;
            Ok(Outcome {
                text: vec![format!("{s} ({} elements)", s.len())],
                result: json!({ "members": s.labels() }),
                complete: true,
                ..Default::default()
            })
        }
        ClosureCmd::Cong { source, pairs } => {
            let d = ctx.algebra(source)?;
            let c = parse_cong(&d, pairs)?;
            let blocks: Vec<Vec<String>> = c
                .blocks()
                .iter()
                .map(|b| b.iter().map(|&x| d.label(x)).collect())
                .collect();
            Ok(Outcome {
                text: vec![format!("{c} ({} blocks)", c.num_blocks()), format!("0-class {}", c.zero_class())],
                result: json!({ "blocks": blocks, "zero_class": c.zero_class().labels() }),
                complete: true,
                ..Default::default()
            })
        }
        ClosureCmd::Wnormal { source, sub, weight } => {
            let d = ctx.algebra(source)?;
            let x = parse_sub(&d, sub)?;
            let (_, w): (_, Hom) = parse_sub(&d, weight)?.to_algebra();
            let already = is_w_normal(&d, &x, &w)?;
            let c = w_normal_closure(&d, &x, &w)?;
            Ok(Outcome {
                text: vec![
                    format!("X = {x} is {}w-normal", if already { "" } else { "not " }),
                    format!("w-normal closure = {c} ({} elements)", c.len()),
                ],
                result: json!({ "X": x.labels(), "w_normal": already, "closure": c.labels() }),
                complete: true,
                ..Default::default()
            })
        }
    }
}

fn verdict_outcome(v: commwb_core::ConditionVerdict) -> Outcome {
    Outcome {
        text: verdict_text(&v),
        violated: !v.satisfied,
        complete: v.completeness.is_complete(),
        result: json!(v),
        fatal: None,
    }
}

fn check_cmd(ctx: &mut Ctx, cmd: &CheckCmd) -> Result<Outcome> {
    match cmd {
        CheckCmd::Sh { source, congs } => {
            let d = ctx.algebra(source)?;
            let s = exactly(congs, 2, "--cong")?;
            let v = check_sh_instance(&d, &parse_cong(&d, &s[0])?, &parse_cong(&d, &s[1])?)?;
            Ok(verdict_outcome(v))
        }
        CheckCmd::Ssh { diagram } => {
            let path = Path::new(diagram);
            let d = if path.exists() || diagram.ends_with(".json") {
                match ctx.diagram_file(path)?.1 {
                    Diagram::Admissible(d) => d,
                    _ => return Err(Error::Malformed(format!("{diagram}: not an admissible diagram"))),
                }
            } else {
                let f = files::hslat_counterexample_file();
                let text = serde_json::to_string(&f).expect("serializes");
                if diagram == &f.name {
                    ctx.inputs.push(Input::bytes(format!("builtin:{diagram}"), text.as_bytes()));
                } else {
                    ctx.inputs.push(Input::bytes(format!("builtin:{diagram}"), diagram.as_bytes()));
                }
                conditions::builtin_diagram(diagram)?
            };
            Ok(verdict_outcome(check_ssh_instance(&d)?))
        }
        CheckCmd::W { diagram, bounds } => {
            let (_, dg) = ctx.diagram_file(diagram)?;
            let Diagram::Weighted(c) = dg else {
                return Err(Error::Malformed(format!("{}: not a weighted diagram", diagram.display())));
            };
            let st = ternary_strategy(c.target(), bounds)?;
            Ok(verdict_outcome(check_w_instance(&c, st)?))
        }
        CheckCmd::Reflect { diagram, mode, congs } => {
            let (_, dg) = ctx.diagram_file(diagram)?;
            let Diagram::Fibred { object, q } = dg else {
                return Err(Error::Malformed(format!("{}: not a fibred diagram", diagram.display())));
            };
            let x = object.proj.dom().clone();
            let s = exactly(congs, 2, "--cong")?;
            let (r, t) = (parse_cong(&x, &s[0])?, parse_cong(&x, &s[1])?);
            let v = match mode {
                ReflectMode::Points => check_reflection_instance(Fibration::Points, &q, &object, &r, &t)?,
                ReflectMode::Basic => check_reflection_instance(Fibration::Basic, &q, &object, &r, &t)?,
                ReflectMode::Normal => {
                    let sect = object
                        .sect
                        .clone()
                        .ok_or_else(|| Error::Precondition("normal mode needs a section".into()))?;
                    check_c_instance(&q, &PointObject::new(object.proj.clone(), sect)?, &r, &t)?
                }
            };
            Ok(verdict_outcome(v))
        }
    }
}

fn example_text(rep: &ExampleReport) -> Vec<String> {
    let mut out = vec![format!("example {}", rep.example)];
    if let Some(e) = &rep.error {
        out.push(format!("  could not be built: {e}"));
    }
    for c in &rep.checks {
        out.push(format!(
            "  [{}] {}: expected {}, observed {}",
            if c.ok { "ok" } else { "MISMATCH" },
            c.name,
            c.expected,
            c.observed
        ));
    }
    for v in &rep.verdicts {
        out.extend(verdict_text(v).into_iter().map(|l| format!("  {l}")));
    }
    out
}

fn examples(which: Example, word_bound: usize) -> Outcome {
    let reps = match which {
        Example::HslatSsh => vec![conditions::example_hslat_ssh()],
        Example::S3W => vec![conditions::example_s3_w(word_bound)],
        Example::GroupsPhi => vec![conditions::example_groups_phi()],
        Example::All => conditions::run_worked_examples(word_bound),
    };
    let failed: Vec<&str> = reps.iter().filter(|r| !r.reproduced()).map(|r| r.example.as_str()).collect();
    let fatal = (!failed.is_empty()).then(|| format!("recorded outcome not reproduced: {}", failed.join(", ")));
    Outcome {
        text: reps.iter().flat_map(example_text).collect(),
        violated: reps.iter().any(ExampleReport::violation),
        complete: true,
        result: json!(reps),
        fatal,
    }
}
