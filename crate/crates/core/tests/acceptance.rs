//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use commwb_core::commutators::{commute_over, is_w_normal, TernaryStrategy, WeightedStrategy};
use commwb_core::conditions::{check_sh_instance, check_ssh_instance, check_w_instance, group_diagrams};
use commwb_core::enumerate::{all_congruences, all_subuniverses, principal_subuniverses};
use commwb_core::files::{load_diagram, Diagram};
use commwb_core::{
    admissible, groups_phi, higgins, higgins_ternary, image_sub, library, normalise, pullback_split, smith,
    w_normal_closure, FinAlgebra, Hom, Subuniverse, WeightedCospan,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{bf_commutator, properties, rel, run_property, set};

type Outcome = Result<Vec<String>, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn main() {
    let criteria = [
        Criterion { id: 1, title: "heyting semilattice counterexample to strong Smith-is-Huq", limit: secs(1), run: c1 },
        Criterion { id: 2, title: "C2 in S3 weighted by the identity", limit: secs(10), run: c2 },
        Criterion { id: 3, title: "group formula for the admissibility map", limit: secs(30), run: c3 },
        Criterion { id: 4, title: "arithmetical identities in Heyting semilattices", limit: secs(30), run: c4 },
        Criterion { id: 5, title: "Smith is Huq in groups of order <= 12", limit: secs(60), run: c5 },
        Criterion { id: 6, title: "decomposition formula on 100 random subgroup triples", limit: secs(120), run: c6 },
        Criterion { id: 7, title: "two-nilpotency of D4 and Q8", limit: secs(60), run: c7 },
        Criterion { id: 8, title: "weighted cross-strategy agreement", limit: secs(120), run: c8 },
        Criterion { id: 9, title: "core property suites, 1000 cases each", limit: secs(60), run: c9 },
    ];
    let mut passed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let (ok, lines) = match outcome {
            Ok(lines) if took <= c.limit => (true, lines),
            Ok(mut lines) => {
                lines.push(format!("took {:.2}s, limit {}s", took.as_secs_f64(), c.limit.as_secs()));
                (false, lines)
            }
            Err(e) => (false, vec![e]),
        };
        passed += ok as usize;
        println!(
            "criterion {}: {} {} ({:.2}s, limit {}s)",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            took.as_secs_f64(),
            c.limit.as_secs()
        );
        for l in lines {
            println!("    {l}");
        }
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed != criteria.len() {
        std::process::exit(1);
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn labels(a: &FinAlgebra, xs: &BTreeSet<usize>) -> BTreeSet<String> {
    xs.iter().map(|&x| a.label(x)).collect()
}

fn label_set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Loads the shipped Heyting semilattice tables and checks the recorded
/// verdict: kernel images `{1/2, 1}` and `{1}` commute, no fill-in exists,
/// and the conflict involves `(0,a)` and `(1/2,1)`.
fn c1() -> Outcome {
    let path = fixtures().join("diagrams/cx-hslat-adm.json");
    let (_, diagram) = load_diagram(&path).map_err(|e| format!("cannot load the shipped tables: {e}"))?;
    let Diagram::Admissible(d) = diagram else {
        return Err("fixture is not an admissible diagram".into());
    };
    let (kx, ky) = d.kernel_images().map_err(err)?;
    let dd = d.d();
    ensure(labels(dd, &set(&kx)) == label_set(&["1/2", "1"]), || format!("Im(α∘ker f) = {kx}"))?;
    ensure(labels(dd, &set(&ky)) == label_set(&["1"]), || format!("Im(γ∘ker g) = {ky}"))?;
    let v = check_ssh_instance(&d).map_err(err)?;
    ensure(v.hypothesis, || "kernel images do not Huq-commute".into())?;
    ensure(v.conclusion == Some(false), || format!("conclusion {:?}", v.conclusion))?;
    let w = v.witnesses.join(" ");
    ensure(w.contains("(0,a)") && w.contains("(1/2,1)"), || format!("conflict witness: {w}"))?;
    Ok(vec![v.summary()])
}

fn c2() -> Outcome {
    let x = library::c2_in_s3();
    let s3 = x.cod().clone();
    let id = Hom::identity(s3.clone());
    let c2 = image_sub(&x);
    let full = Subuniverse::full(s3.clone());
    // (description, holds, required by the criterion)
    let mut checks: Vec<(String, bool, bool)> = Vec::new();

    let bin = higgins(&s3, &c2, &c2).map_err(err)?;
    let oracle = bf_commutator(&s3, c2.members(), c2.members());
    checks.push((format!("[C2, C2] = {bin}, expected {{e}}"), bin.is_trivial() && oracle.len() == 1, true));
    let closure = w_normal_closure(&s3, &c2, &id).map_err(err)?;
    checks.push((format!("w-normal closure of C2 has {} elements, expected 6", closure.len()), closure.len() == 6, true));
    let ss = higgins(&s3, &full, &full).map_err(err)?;
    let oracle = bf_commutator(&s3, full.members(), full.members());
    let a3 = label_set(&["e", "(123)", "(132)"]);
    checks.push((format!("[S3, S3] = {ss}, expected A3"), labels(&s3, &set(&ss)) == a3 && set(&ss) == oracle, true));
    let c = WeightedCospan::new(x.clone(), x, id).map_err(err)?;
    let v = check_w_instance(&c, TernaryStrategy::GroupFast).map_err(err)?;
    let law = v.satisfied == (!v.hypothesis || v.conclusion == Some(true));
    checks.push((format!("(W) instance: {}", v.summary()), !v.satisfied && law, true));
    let fast = higgins_ternary(&s3, &c2, &c2, &full, TernaryStrategy::GroupFast).map_err(err)?;
    // The criterion fixes the bound at 8; bound 10 is reported for context.
    for (bound, required) in [(8, true), (10, false)] {
        let r = higgins_ternary(&s3, &c2, &c2, &full, TernaryStrategy::WordOracle(bound)).map_err(err)?;
        let sub = r.sub().unwrap();
        let ok = !sub.is_trivial() && sub.is_subset_of(fast.sub().unwrap());
        checks.push((format!("word-oracle({bound}) [C2, C2, S3] = {sub}, expected nontrivial"), ok, required));
    }

    let lines: Vec<String> = checks
        .iter()
        .map(|(d, ok, req)| format!("{} {d}{}", if *ok { "ok  " } else { "FAIL" }, if *req { "" } else { " (informational)" }))
        .collect();
    if checks.iter().all(|(_, ok, req)| *ok || !req) {
        Ok(lines)
    } else {
        Err(lines.join("\n    "))
    }
}

fn c3() -> Outcome {
    let diagrams = group_diagrams().map_err(err)?;
    ensure(diagrams.len() >= 5, || format!("only {} diagrams", diagrams.len()))?;
    let mut lines = Vec::new();
    let mut with_hyp = 0;
    for nd in &diagrams {
        let d = &nd.diagram;
        for g in [d.a(), d.b(), d.c(), d.d()] {
            ensure(g.is_group() && g.size() <= 24, || format!("{}: `{}` out of range", nd.name, g.name()))?;
        }
        let v = check_ssh_instance(d).map_err(err)?;
        if !v.hypothesis {
            lines.push(format!("{}: hypothesis false, skipped", nd.name));
            continue;
        }
        with_hyp += 1;
        let phi = groups_phi(d).map_err(|e| format!("{}: {e}", nd.name))?;
        Hom::new(phi.dom().clone(), phi.cod().clone(), phi.map().to_vec()).map_err(|e| format!("{}: {e}", nd.name))?;
        // Sections of the pullback, computed from the pairs directly.
        let w = pullback_split(&d.f, &d.r, &d.g, &d.s).map_err(err)?;
        ensure(w.pairs().len() == phi.dom().size(), || format!("{}: domain size", nd.name))?;
        for a in d.a().elements() {
            let i = w.index_of(a, d.s.apply(d.f.apply(a))).ok_or("e1 leaves the pullback")?;
            ensure(phi.apply(i) == d.alpha.apply(a), || format!("{}: φ∘e1 ≠ α at {}", nd.name, d.a().label(a)))?;
        }
        for c in d.c().elements() {
            let i = w.index_of(d.r.apply(d.g.apply(c)), c).ok_or("e2 leaves the pullback")?;
            ensure(phi.apply(i) == d.gamma.apply(c), || format!("{}: φ∘e2 ≠ γ at {}", nd.name, d.c().label(c)))?;
        }
        let closure = admissible(d).map_err(err)?.phi.ok_or_else(|| format!("{}: closure finds no φ", nd.name))?;
        ensure(closure.map() == phi.map(), || format!("{}: formula and closure disagree", nd.name))?;
        lines.push(format!("{}: |A×_B C| = {}, formula = closure", nd.name, phi.dom().size()));
    }
    ensure(with_hyp >= 5, || format!("only {with_hyp} diagrams satisfy the hypothesis"))?;
    Ok(lines)
}

fn c4() -> Outcome {
    let mut lines = Vec::new();
    let algs = library::heyting_semilattices();
    ensure(!algs.is_empty(), || "no builtin Heyting semilattices".into())?;
    for a in &algs {
        ensure(a.size() <= 9, || format!("`{}` has {} elements", a.name(), a.size()))?;
        let congs = all_congruences(a).map_err(err)?;
        let mut normals: Vec<Subuniverse> = Vec::new();
        for c in &congs {
            let n = normalise(c);
            if !normals.iter().any(|m| m.members() == n.members()) {
                normals.push(n);
            }
        }
        for k in &normals {
            for l in &normals {
                let h = higgins(a, k, l).map_err(err)?;
                let meet: BTreeSet<usize> = set(k).intersection(&set(l)).copied().collect();
                ensure(set(&h) == meet, || format!("{}: [{k}, {l}] = {h}", a.name()))?;
            }
        }
        for r in &congs {
            for s in &congs {
                let c = smith(a, r, s).map_err(err)?;
                let meet: BTreeSet<_> = rel(r).intersection(&rel(s)).copied().collect();
                ensure(rel(c.cong().unwrap()) == meet, || format!("{}: smith differs from the meet", a.name()))?;
                let v = check_sh_instance(a, r, s).map_err(err)?;
                ensure(v.satisfied == (!v.hypothesis || v.conclusion == Some(true)), || "verdict law".into())?;
            }
        }
        lines.push(format!(
            "{}: {} normal subobjects, {} congruences",
            a.name(),
            normals.len(),
            congs.len()
        ));
    }
    Ok(lines)
}

fn c5() -> Outcome {
    let mut pairs = 0;
    let groups = library::groups_up_to(12);
    for g in &groups {
        let congs = all_congruences(g).map_err(err)?;
        for r in &congs {
            for s in &congs {
                let sm = smith(g, r, s).map_err(err)?;
                let (kr, ks) = (normalise(r), normalise(s));
                let h = higgins(g, &kr, &ks).map_err(err)?;
                ensure(set(&h) == bf_commutator(g, kr.members(), ks.members()), || {
                    format!("{}: [{kr}, {ks}] = {h} disagrees with the brute-force commutator", g.name())
                })?;
                let centralise = sm.cong().unwrap().is_identity();
                ensure(centralise == h.is_trivial(), || {
                    format!("{}: smith trivial = {centralise}, [{kr}, {ks}] = {h}", g.name())
                })?;
                let v = check_sh_instance(g, r, s).map_err(err)?;
                ensure(v.satisfied, || format!("{}: {}", g.name(), v.summary()))?;
                pairs += 1;
            }
        }
    }
    Ok(vec![format!("{} groups, {pairs} congruence pairs", groups.len())])
}

fn c6() -> Outcome {
    let groups = library::groups_up_to(16);
    let subs: Vec<Vec<Subuniverse>> = groups.iter().map(all_subuniverses).collect::<Result<_, _>>().map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut nontrivial = 0;
    for i in 0..100 {
        let gi = rng.gen_range(0..groups.len());
        let (g, lattice) = (&groups[gi], &subs[gi]);
        let mut pick = || lattice[rng.gen_range(0..lattice.len())].clone();
        let (k, l, m) = (pick(), pick(), pick());
        let lm = l.join(&m).map_err(err)?;
        let lhs = higgins(g, &k, &lm).map_err(err)?;
        let ter = higgins_ternary(g, &k, &l, &m, TernaryStrategy::GroupFast).map_err(err)?;
        let ter = ter.sub().unwrap();
        let rhs = higgins(g, &k, &l)
            .and_then(|kl| kl.join(&higgins(g, &k, &m)?))
            .and_then(|x| x.join(ter))
            .map_err(err)?;
        let what = || format!("sample {i} in {}: K={k} L={l} M={m}", g.name());
        ensure(lhs.members() == rhs.members(), || format!("{}: [K, L∨M] = {lhs}, sum = {rhs}", what()))?;
        let oracle = higgins_ternary(g, &k, &l, &m, TernaryStrategy::WordOracle(10)).map_err(err)?;
        ensure(oracle.sub().unwrap().is_subset_of(ter), || {
            format!("{}: word-oracle(10) {} not within group-fast {ter}", what(), oracle.result)
        })?;
        nontrivial += !ter.is_trivial() as usize;
    }
    Ok(vec![format!("100 samples, {nontrivial} with a nontrivial ternary commutator")])
}

fn c7() -> Outcome {
    let mut lines = Vec::new();
    for name in ["D4", "Q8"] {
        let g = library::algebra(name).map_err(err)?;
        let subs = all_subuniverses(&g).map_err(err)?;
        let mut triples = 0;
        for k in &subs {
            for l in &subs {
                for m in &subs {
                    for strategy in [TernaryStrategy::GroupFast, TernaryStrategy::WordOracle(10)] {
                        let r = higgins_ternary(&g, k, l, m, strategy).map_err(err)?;
                        ensure(r.is_trivial(), || format!("{name}: [{k}, {l}, {m}] = {} under {}", r.result, r.strategy))?;
                    }
                    triples += 1;
                }
            }
        }
        lines.push(format!("{name}: {} subgroups, {triples} triples", subs.len()));
    }
    Ok(lines)
}

fn c8() -> Outcome {
    let mut proper = 0;
    let mut commuting = 0;
    let mut total = 0;
    for g in library::groups_up_to(12) {
        let cyclic = principal_subuniverses(&g).map_err(err)?;
        let incl: Vec<Hom> = cyclic.iter().map(|s| s.to_algebra().1).collect();
        let mut normal: HashMap<(usize, usize), bool> = HashMap::new();
        for (wi, w) in incl.iter().enumerate() {
            for (xi, s) in cyclic.iter().enumerate() {
                normal.insert((xi, wi), is_w_normal(&g, s, w).map_err(err)?);
            }
        }
        for (xi, x) in incl.iter().enumerate() {
            for (yi, y) in incl.iter().enumerate() {
                for (wi, w) in incl.iter().enumerate() {
                    total += 1;
                    if !(normal[&(xi, wi)] && normal[&(yi, wi)]) {
                        continue;
                    }
                    proper += 1;
                    let c = WeightedCospan::new(x.clone(), y.clone(), w.clone()).map_err(err)?;
                    let a = commute_over(&c, WeightedStrategy::ProperCommutators, TernaryStrategy::GroupFast).map_err(err)?;
                    let b = commute_over(&c, WeightedStrategy::SshKernel, TernaryStrategy::GroupFast).map_err(err)?;
                    ensure(a.commute == b.commute, || {
                        format!(
                            "{}: x={} y={} w={}: proper-commutators {}, ssh-kernel {}",
                            g.name(),
                            cyclic[xi],
                            cyclic[yi],
                            cyclic[wi],
                            a.commute,
                            b.commute
                        )
                    })?;
                    commuting += a.commute as usize;
                }
            }
        }
    }
    Ok(vec![format!("{total} cospans, {proper} w-proper, {commuting} commuting over w")])
}

fn c9() -> Outcome {
    let mut lines = Vec::new();
    for p in properties() {
        let start = Instant::now();
        run_property(&p, 1000).map_err(|e| format!("[{}] {e}", p.suite))?;
        lines.push(format!("[{}] {}: 1000 cases ({:.2}s)", p.suite, p.name, start.elapsed().as_secs_f64()));
    }
    Ok(lines)
}
