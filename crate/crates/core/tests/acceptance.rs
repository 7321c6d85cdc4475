//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines are always printed; exits
//! nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use common::{dag_corpus, random_relation, random_triplet, rng, z_separates};
use stabind::cli::{run, Report};
use stabind::closure::{classify_stability, sem_close, stab_close};
use stabind::graph::{chain_oracle, extract_models, terminal_saturated};
use stabind::io::{parse_dag, parse_relation, serialize_dag, serialize_relation};
use stabind::pmap::{
    check_conditions, check_stable_transitivity, find_pmap, saturation_tests, ConditionId, Outcome,
    Status, Witness,
};
use stabind::triplet::all_triplets;
use stabind::{
    combined_representation, sem_dominants, stab_dominants, Dag, Relation, SeparationVerdict,
    Triplet, Universe, VarSet,
};

type Verdict = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Corpus {
    relations: Vec<Relation>,
    small_dags: Vec<Dag>,
    large_dags: Vec<Dag>,
}

impl Corpus {
    fn new() -> Self {
        let mut r = rng(2024);
        Corpus {
            relations: (0..240).map(|_| random_relation(&mut r)).collect(),
            small_dags: dag_corpus(6, &[2, 3, 4, 5, 6], 120),
            large_dags: dag_corpus(7, &[7], 24),
        }
    }

    fn dags(&self) -> impl Iterator<Item = &Dag> {
        self.small_dags.iter().chain(&self.large_dags)
    }
}

fn closure_equivalence(c: &Corpus) -> Verdict {
    let start = Instant::now();
    for r in &c.relations {
        let n = r.universe().len();
        let sem: BTreeSet<Triplet> = sem_dominants(r).iter().flat_map(|t| t.o_cone()).collect();
        check(sem == sem_close(r).unwrap().triplets(), || {
            format!("sem mismatch on {r:?}")
        })?;
        let stab: BTreeSet<Triplet> = stab_dominants(r).iter().flat_map(|t| t.s_cone(n)).collect();
        check(stab == stab_close(r).unwrap().triplets(), || {
            format!("stab mismatch on {r:?}")
        })?;
    }
    let took = start.elapsed();
    check(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!(
        "{} relations, 0 mismatches, {took:.2?}",
        c.relations.len()
    ))
}

fn representation_equation(c: &Corpus) -> Verdict {
    let mut queries = 0;
    for r in &c.relations {
        let u = r.universe().clone();
        let stable = Relation::from_triplets(u.clone(), r.stable().iter().copied()).unwrap();
        let mut seed = Relation::from_triplets(u.clone(), r.unstable().iter().copied()).unwrap();
        for t in stab_close(&stable).unwrap().triplets() {
            seed.insert(t).unwrap();
        }
        let expected = sem_close(&seed).unwrap().triplets();
        let rep = combined_representation(r);
        for t in all_triplets(u.len()) {
            queries += 1;
            check(rep.contains(&t).unwrap() == expected.contains(&t), || {
                format!("{t:?} in {r:?}")
            })?;
        }
    }
    Ok(format!(
        "{} relations, {queries} membership queries exact",
        c.relations.len()
    ))
}

fn separation_oracle(c: &Corpus) -> Verdict {
    let mut queries = 0;
    for g in &c.small_dags {
        for t in all_triplets(g.len()) {
            queries += 1;
            let oracle = chain_oracle(g, t.x(), t.y(), t.z()).unwrap();
            check(g.separation_of(&t).unwrap() == oracle, || {
                format!("{t:?} in {:?}", g.arcs())
            })?;
        }
    }
    let mut r = rng(77);
    for g in &c.large_dags {
        for _ in 0..1000 {
            queries += 1;
            let t = random_triplet(&mut r, 7);
            let oracle = chain_oracle(g, t.x(), t.y(), t.z()).unwrap();
            check(g.separation_of(&t).unwrap() == oracle, || {
                format!("{t:?} in {:?}", g.arcs())
            })?;
        }
    }
    Ok(format!(
        "{} DAGs with |V| <= 6 exhaustive, {} with |V| = 7 x 1000 sampled, {queries} queries",
        c.small_dags.len(),
        c.large_dags.len()
    ))
}

fn strong_properties(c: &Corpus) -> Verdict {
    let mut checked = 0usize;
    for g in c.dags() {
        let n = g.len();
        let full = VarSet::full(n);
        let strong = |x, y, z| g.separation(x, y, z).unwrap() == SeparationVerdict::Strong;
        let arcs = || format!("{:?}", g.arcs());
        for x in full.nonempty_subsets() {
            for y in (full - x)
                .nonempty_subsets()
                .filter(|y| x.bits() <= y.bits())
            {
                for z in (full - x - y).subsets() {
                    if !strong(x, y, z) {
                        continue;
                    }
                    checked += 1;
                    let rest = full - x - y - z;
                    check(z_separates(g, x, y, z), || {
                        format!("separation: {x:?} {y:?} {z:?} {}", arcs())
                    })?;
                    for w in rest.nonempty_subsets() {
                        check(strong(x, y, z | w), || {
                            format!("strong union: {x:?} {y:?} {z:?} + {w:?} {}", arcs())
                        })?;
                        if strong(x, w, z) {
                            check(strong(x, y | w, z), || {
                                format!("composition: {x:?} {y:?} {w:?} {z:?} {}", arcs())
                            })?;
                        }
                    }
                    for gamma in rest {
                        let gs = VarSet::singleton(gamma);
                        check(strong(gs, x, z) || strong(gs, y, z), || {
                            format!("transitivity: {x:?} {y:?} {z:?} {gamma} {}", arcs())
                        })?;
                        check(strong(x | gs, y, z) || strong(x, y | gs, z), || {
                            format!("extension: {x:?} {y:?} {z:?} {gamma} {}", arcs())
                        })?;
                    }
                }
                // intersection, with ZW and ZY as conditioning sets
                for w in (full - x - y).nonempty_subsets() {
                    for z in (full - x - y - w).subsets() {
                        if strong(x, y, z | w) && strong(x, w, z | y) {
                            check(strong(x, y | w, z), || {
                                format!("intersection: {x:?} {y:?} {w:?} {z:?} {}", arcs())
                            })?;
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "{} DAGs, {checked} strong separations, 0 violations",
        c.dags().count()
    ))
}

fn model_coherence(c: &Corpus) -> Verdict {
    for g in c.dags() {
        let (model, strong) = extract_models(g).unwrap();
        let part = classify_stability(&model).map_err(|e| e.to_string())?;
        check(part.stable() == &strong.triplets(), || {
            format!("stable part differs for {:?}", g.arcs())
        })?;
        let report = check_conditions(&model).unwrap();
        check(!report.any_failed(), || {
            format!(
                "{:?} fails {:?}",
                g.arcs(),
                report.failures().collect::<Vec<_>>()
            )
        })?;
        let report = check_stable_transitivity(&part).unwrap();
        check(!report.any_failed(), || {
            format!("{:?} fails stable transitivity", g.arcs())
        })?;
    }
    Ok(format!("{} DAGs, 0 failures", c.dags().count()))
}

fn counterexample() -> Verdict {
    let start = Instant::now();
    let u = std::sync::Arc::new(Universe::alphabetic(4).unwrap());
    let t = |x: &[&str], y: &[&str], z: &[&str]| Triplet::from_names(&u, x, y, z).unwrap();
    let seed = Relation::from_triplets(
        u.clone(),
        [
            t(&["a"], &["b"], &["c", "d"]),
            t(&["c"], &["d"], &["a", "b"]),
        ],
    )
    .unwrap();
    let closed = sem_close(&seed).unwrap();
    check(closed.len() == 2, || {
        format!("closure has {} statements", closed.len())
    })?;

    let saturation = saturation_tests(&combined_representation(&closed)).report;
    check(!saturation.any_failed(), || {
        format!("saturation tests: {saturation:?}")
    })?;

    let verdict = find_pmap(&closed).unwrap();
    let c7 = verdict.report.get(ConditionId::C7).unwrap();
    let expected = Witness::Chordality {
        alpha: 0,
        beta: 1,
        gamma: 2,
        delta: 3,
    };
    check(
        c7.status == Status::Fail && c7.witness.as_ref() == Some(&expected),
        || format!("C7: {c7:?}"),
    )?;
    check(verdict.outcome == Outcome::NotIsomorphic, || {
        format!("{:?}", verdict.outcome)
    })?;
    check(verdict.examined == 543, || {
        format!("examined {}", verdict.examined)
    })?;
    let took = start.elapsed();
    check(took < Duration::from_secs(5), || format!("took {took:?}"))?;
    Ok(format!(
        "saturation tests pass, C7 fails at (a,b,c,d), 543 DAGs examined, {took:.2?}"
    ))
}

fn saturation_linearity(c: &Corpus) -> Verdict {
    let mut reps: Vec<_> = c.relations.iter().map(combined_representation).collect();
    for g in c.dags() {
        reps.push(combined_representation(&extract_models(g).unwrap().0));
    }
    for rep in &reps {
        let inspected = saturation_tests(rep).inspected;
        let size = rep.d_u().len() + rep.d_s().len();
        check(inspected == size, || {
            format!("inspected {inspected}, representation size {size}")
        })?;
    }
    Ok(format!(
        "{} representations, scan count = |d_u| + |d_s| in each",
        reps.len()
    ))
}

fn terminal_extraction(c: &Corpus) -> Verdict {
    let mut found = 0;
    for g in c.dags() {
        if let Some(t) = terminal_saturated(g) {
            found += 1;
            check(t.is_saturated(g.len()), || format!("{t:?} unsaturated"))?;
            check(g.separation_of(&t).unwrap().is_separated(), || {
                format!("{t:?} not in M_G of {:?}", g.arcs())
            })?;
        }
    }
    Ok(format!(
        "{found} of {} DAGs yield a statement, all saturated members of M_G",
        c.dags().count()
    ))
}

fn golden_files() -> Vec<std::path::PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files
}

fn round_trip_and_determinism() -> Verdict {
    let files = golden_files();
    let mut runs = 0;
    for path in &files {
        let text = std::fs::read_to_string(path).unwrap();
        let p = path.display().to_string();
        let owned = |args: &[&str]| args.iter().map(|a| a.to_string()).collect::<Vec<_>>();
        let commands: Vec<Vec<String>> = if p.ends_with(".ind") {
            let r = parse_relation(&text).map_err(|e| format!("{p}: {e}"))?;
            let s = serialize_relation(&r);
            check(parse_relation(&s).as_ref() == Ok(&r), || {
                format!("{p} does not round-trip")
            })?;
            check(
                serialize_relation(&parse_relation(&s).unwrap()) == s,
                || format!("{p} not a fixed point"),
            )?;
            let mut cmds: Vec<_> = ["closure", "dominants", "stability", "pmap"]
                .iter()
                .map(|c| owned(&[c, &p]))
                .collect();
            if r.universe().len() <= 4 {
                cmds.push(owned(&["pmap", "--exhaustive", &p]));
            }
            cmds
        } else {
            let g = parse_dag(&text).map_err(|e| format!("{p}: {e}"))?;
            let s = serialize_dag(&g);
            check(parse_dag(&s).as_ref() == Ok(&g), || {
                format!("{p} does not round-trip")
            })?;
            check(serialize_dag(&parse_dag(&s).unwrap()) == s, || {
                format!("{p} not a fixed point")
            })?;
            let u = g.universe();
            let (a, b) = (u.name(0), u.name(u.len() - 1));
            let mut cmds = vec![
                owned(&["model", &p]),
                owned(&["model", "--strong", &p]),
                owned(&["extract", &p]),
            ];
            if u.len() >= 2 {
                cmds.push(owned(&["dsep", &p, "--x", a, "--y", b]));
                cmds.push(owned(&["classify", &p, "--x", a, "--y", b]));
            }
            cmds
        };
        for cmd in commands {
            for json in [false, true] {
                let mut argv = vec!["stabind"];
                if json {
                    argv.push("--json");
                }
                argv.extend(cmd.iter().map(String::as_str));
                let first = invoke(&argv);
                let second = invoke(&argv);
                runs += 2;
                check(first == second, || format!("{argv:?} differs between runs"))?;
                check(first.0 != 2, || format!("{argv:?} failed: {}", first.2))?;
                if json {
                    let report: Report =
                        serde_json::from_str(&first.1).map_err(|e| format!("{argv:?}: {e}"))?;
                    check(report.to_json() == first.1, || {
                        format!("{argv:?} JSON does not round-trip")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{} golden files round-trip, {runs} CLI runs pairwise byte-identical",
        files.len()
    ))
}

fn invoke(argv: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv.iter().copied(), &mut out, &mut err).code();
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn main() {
    let corpus = Corpus::new();
    let criteria: [(&str, &dyn Fn() -> Verdict); 9] = [
        ("closure oracle equivalence", &|| {
            closure_equivalence(&corpus)
        }),
        ("representation equation", &|| {
            representation_equation(&corpus)
        }),
        ("separation oracle equivalence", &|| {
            separation_oracle(&corpus)
        }),
        ("strong separation properties", &|| {
            strong_properties(&corpus)
        }),
        ("model coherence", &|| model_coherence(&corpus)),
        ("counterexample end to end", &counterexample),
        ("linear saturation scans", &|| saturation_linearity(&corpus)),
        ("saturated statement at a sink", &|| {
            terminal_extraction(&corpus)
        }),
        ("round trip and determinism", &round_trip_and_determinism),
    ];
    let mut failed = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(criterion)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
