//! Acceptance gate: one line per criterion, then a single assertion.
//!
//! Run with `cargo test -p cohn-ibn --test acceptance -- --nocapture`.

mod common;

use std::process::Command;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use cohn_ibn::certificate::{companion_rank_check, gamma, verify_certificate, WeightCertificate};
use cohn_ibn::cli::fixtures::{self, corpus};
use cohn_ibn::constructions::{cohn_companion, family};
use cohn_ibn::decision::{audit, decide_ibn, try_certificate, AlgebraSpec, IbnStatus, ImnStatus};
use cohn_ibn::graph::Graph;
use cohn_ibn::monoid::{
    cohn_presentation, decide_equivalent, find_scalar_witness, monoid_presentation, normal_form, one_step,
    Equivalence, MonoidElement, Refutation, SearchBounds, DEFAULT_MAX_M,
};

use common::{oracle_companion_rows, oracle_gamma, oracle_normal_form, q, random_graph, random_walk, SEED};

const BIN: &str = env!("CARGO_BIN_EXE_cohn-ibn");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn el(v: &[u64]) -> MonoidElement {
    MonoidElement::new(v.to_vec())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

/// Every algebra the corpus can form: Cohn and Leavitt over each graph, and
/// the relative algebra when the fixture carries an X.
fn corpus_specs() -> Vec<(String, AlgebraSpec)> {
    let mut specs = Vec::new();
    for (name, fx) in corpus() {
        specs.push((format!("cohn/{name}"), AlgebraSpec::cohn(fx.graph.clone())));
        specs.push((format!("leavitt/{name}"), AlgebraSpec::leavitt(fx.graph.clone())));
        if let Some(x) = fx.x {
            let spec = AlgebraSpec::relative_cohn(fx.graph, x).expect("fixture X is valid");
            specs.push((format!("relative/{name}"), spec));
        }
    }
    specs
}

fn random_graphs(count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_graph(&mut rng, 6, 12, 3)).collect()
}

fn criterion_1() -> Outcome {
    let f = cohn_companion(&fixtures::r2()).graph;
    ensure(f.vertex_count() == 2 && f.edges().len() == 4, "F(R2) must have 2 vertices and 4 edges")?;
    ensure(f.incidence().rows() == [vec![2, 2], vec![0, 0]], format!("incidence {:?}", f.incidence().rows()))?;

    let (out, code) = cli(&["companion", "--example", "r2", "--format", "json"]);
    ensure(code == 0, format!("companion exited {code}"))?;
    let report: Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    ensure(
        report["result"]["incidence"]["rows"] == serde_json::json!([[2, 2], [0, 0]]),
        "CLI incidence differs",
    )?;
    Ok("F(R2) incidence [[2,2],[0,0]], 2 vertices, 4 edges".into())
}

fn criterion_2() -> Outcome {
    let spec = AlgebraSpec::cohn(fixtures::r2());
    let verdict = decide_ibn(&spec, &SearchBounds::default(), DEFAULT_MAX_M).map_err(|e| e.to_string())?;
    let IbnStatus::Certified { certificate } = &verdict.ibn else {
        return Err(format!("expected Certified, got {:?}", verdict.ibn));
    };

    // the serialized form round-trips and still verifies
    let json = serde_json::to_string(certificate).map_err(|e| e.to_string())?;
    let back: WeightCertificate = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    let rs = spec.presentation();
    ensure(verify_certificate(&back, &rs), "deserialized certificate fails verification")?;
    let sum = back.weights.iter().fold(q(0), |a, w| a + w);
    ensure(sum.is_one(), format!("sum of weights is {sum}"))?;

    // hand elimination on w_v + w_v' = 1, w_v = 2 w_v + 2 w_v'
    // (Cramer on [[1,1],[1,2]] (w) = (1,0))
    let det = q(1) * q(2) - q(1) * q(1);
    let oracle = [(q(1) * q(2) - q(1) * q(0)) / &det, (q(1) * q(0) - q(1) * q(1)) / &det];
    ensure(back.weights == oracle, format!("weights {:?}", back.weight_strings()))?;
    ensure(back.weight_strings() == ["2", "-1"], "weights must print as 2, -1")?;

    for m in 1..=10u64 {
        let g = gamma(&back, &rs.rho().checked_scale(m).unwrap()).map_err(|e| e.to_string())?;
        ensure(g == q(m as i64), format!("gamma({m} rho) = {g}"))?;
    }
    ensure(audit(&verdict, &spec), "audit failed")?;
    Ok("Cohn(R2) certified with weights (2,-1); gamma(m rho) = m for m = 1..10".into())
}

fn criterion_3() -> Outcome {
    let bounds = SearchBounds::default();
    let leavitt = AlgebraSpec::leavitt(fixtures::r2());
    let v = decide_ibn(&leavitt, &bounds, DEFAULT_MAX_M).map_err(|e| e.to_string())?;
    let w = v.witness().ok_or("Leavitt(R2) not refuted")?;
    ensure((w.m, w.m_prime) == (1, 2), format!("witness ({}, {})", w.m, w.m_prime))?;
    ensure(w.evidence.left.start == el(&[1]) && w.evidence.descendant == el(&[2]), "trace is not (1) ~ (2)")?;
    ensure(w.evidence.verify(&leavitt.presentation()), "trace does not replay")?;
    ensure(audit(&v, &leavitt), "Leavitt audit failed")?;

    let fam = family(2, 1).map_err(|e| e.to_string())?;
    let rel = AlgebraSpec::relative_cohn(fam.graph, fam.x).map_err(|e| e.to_string())?;
    let v = decide_ibn(&rel, &bounds, DEFAULT_MAX_M).map_err(|e| e.to_string())?;
    let w = v.witness().ok_or("relative family(2,1) not refuted")?;
    ensure((w.m, w.m_prime) == (1, 2), format!("witness ({}, {})", w.m, w.m_prime))?;
    ensure(audit(&v, &rel), "relative audit failed")?;
    Ok("Leavitt(R2) and relative family(2,1) both refuted with rho ~ 2 rho".into())
}

fn criterion_4() -> Outcome {
    let line = fixtures::line();
    let f = cohn_companion(&line).graph;
    let rs = monoid_presentation(&f.incidence());
    let nf = normal_form(&rs.rho(), &rs).map_err(|e| e.to_string())?;
    ensure(f.vertices()[2..] == ["w", "u'", "v'"], format!("order {:?}", f.vertices()))?;
    ensure(nf == el(&[0, 0, 3, 1, 2]), format!("F(line): rho -> {nf}"))?;
    ensure(nf == oracle_normal_form(&rs.rho(), &rs), "F(line) disagrees with naive rewriting")?;

    let rs = monoid_presentation(&line.incidence());
    let nf = normal_form(&rs.rho(), &rs).map_err(|e| e.to_string())?;
    ensure(nf == el(&[0, 0, 3]), format!("line: rho -> {nf}"))?;
    ensure(nf == oracle_normal_form(&rs.rho(), &rs), "line disagrees with naive rewriting")?;
    Ok("rho -> (3,1,2) on (w,u',v') in F(line); rho -> 3 in line".into())
}

fn criterion_5() -> Outcome {
    let spec = AlgebraSpec::cohn(fixtures::r2());
    let rs = spec.presentation();
    let cert = try_certificate(&spec).ok_or("no certificate for F(R2)")?;
    let bounds = SearchBounds::default();
    for m in 1..=10u64 {
        let other = if m % 2 == 0 { el(&[m / 2, 0]) } else { el(&[m.div_ceil(2), 1]) };
        let r = decide_equivalent(&el(&[m, m]), &other, &rs, &bounds, Some(&cert)).map_err(|e| e.to_string())?;
        match r {
            Equivalence::Equivalent(cd) if cd.verify(&rs) => {}
            other_r => return Err(format!("({m},{m}) vs {other}: {other_r:?}")),
        }
    }
    for m in 1..=5u64 {
        for mp in 1..=5u64 {
            if m == mp {
                continue;
            }
            let r = decide_equivalent(&el(&[m, 0]), &el(&[mp, 0]), &rs, &bounds, Some(&cert))
                .map_err(|e| e.to_string())?;
            match r {
                Equivalence::NotEquivalent(Refutation::Separated { left, right })
                    if left == q(m as i64 * 2) && right == q(mp as i64 * 2) => {}
                other => return Err(format!("({m},0) vs ({mp},0): {other:?}")),
            }
        }
    }
    Ok("parity reductions for m <= 10 hold; (m,0) and (m',0) separated by gamma".into())
}

fn criterion_6() -> Outcome {
    let spec = AlgebraSpec::cohn(fixtures::r2());
    let rs = spec.presentation();
    let r = decide_equivalent(&el(&[1, 2]), &el(&[2, 4]), &rs, &SearchBounds::default(), None)
        .map_err(|e| e.to_string())?;
    let Equivalence::Equivalent(cd) = r else {
        return Err(format!("(1,2) vs (2,4): {r:?}"));
    };
    ensure(cd.verify(&rs), "trace does not replay")?;
    ensure(cd.left.len() + cd.right.len() == 1, format!("trace has {} steps", cd.left.len() + cd.right.len()))?;
    let v = decide_ibn(&spec, &SearchBounds::default(), DEFAULT_MAX_M).map_err(|e| e.to_string())?;
    ensure(v.is_certified(), "Cohn(R2) no longer certified")?;
    Ok("(1,2) ~ (2,4) in one step while Cohn(R2) stays certified".into())
}

fn criterion_7() -> Outcome {
    let graphs = random_graphs(250, SEED);
    let bounds = SearchBounds::default();
    for (i, g) in graphs.iter().enumerate() {
        let v = decide_ibn(&AlgebraSpec::cohn(g.clone()), &bounds, DEFAULT_MAX_M)
            .map_err(|e| format!("graph {i}: {e}"))?;
        ensure(v.is_certified(), format!("graph {i} not certified: {g:?}"))?;
        ensure(companion_rank_check(&g.incidence()), format!("graph {i} fails the rank check"))?;
        let f = cohn_companion(g).graph;
        let m = g.incidence();
        ensure(
            f.incidence().rows() == oracle_companion_rows(m.rows(), m.regular_count()).as_slice(),
            format!("graph {i}: companion incidence differs from the block formula"),
        )?;
    }
    Ok(format!("{} random graphs: all Cohn algebras certified, rank t+1 everywhere", graphs.len()))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut specs: Vec<AlgebraSpec> = corpus_specs().into_iter().map(|(_, s)| s).collect();
    specs.extend(random_graphs(60, SEED ^ 80).into_iter().map(AlgebraSpec::cohn));
    let mut triples = 0;
    for spec in &specs {
        let Some(cert) = try_certificate(spec) else { continue };
        let rs = spec.presentation();
        for _ in 0..40 {
            let e = MonoidElement::new((0..rs.generator_count()).map(|_| rng.random_range(0..4)).collect());
            let ge = gamma(&cert, &e).map_err(|e| e.to_string())?;
            ensure(ge == oracle_gamma(&cert.weights, &e), "gamma disagrees with the oracle")?;
            for s in one_step(&e, &rs) {
                let gs = oracle_gamma(&cert.weights, &s.element);
                ensure(ge == gs, format!("gamma({e}) = {ge} but gamma({}) = {gs}", s.element))?;
                triples += 1;
            }
        }
    }
    ensure(triples >= 1000, format!("only {triples} triples"))?;
    Ok(format!("{triples} (certificate, element, successor) triples, gamma exactly invariant"))
}

fn criterion_9() -> Outcome {
    let bounds = SearchBounds::new(100_000, 64, 64).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let (mut certified, mut refuted, mut separated) = (0, 0, 0);
    for (name, spec) in corpus_specs() {
        let rs = spec.presentation();
        let rho = rs.rho();
        let cert = try_certificate(&spec);
        let witness = find_scalar_witness(&rho, &rs, DEFAULT_MAX_M, &bounds).map_err(|e| e.to_string())?;
        ensure(!(cert.is_some() && witness.is_some()), format!("{name}: certificate and witness coexist"))?;
        if let Some(w) = &witness {
            ensure(w.verify(&rho, &rs), format!("{name}: witness does not replay"))?;
            refuted += 1;
        }
        let Some(cert) = cert else { continue };
        certified += 1;
        for _ in 0..4 {
            let a = MonoidElement::new((0..rs.generator_count()).map(|_| rng.random_range(0..3)).collect());
            let b = MonoidElement::new((0..rs.generator_count()).map(|_| rng.random_range(0..3)).collect());
            if a.is_zero() || b.is_zero() || oracle_gamma(&cert.weights, &a) == oracle_gamma(&cert.weights, &b) {
                continue;
            }
            separated += 1;
            let r = decide_equivalent(&a, &b, &rs, &bounds, None).map_err(|e| e.to_string())?;
            ensure(!r.is_equivalent(), format!("{name}: {a} and {b} are separated but met"))?;
        }
    }
    Ok(format!(
        "{certified} certified, {refuted} refuted, none both; {separated} separated pairs never met"
    ))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let bounds = SearchBounds::new(20_000, 40, 40).map_err(|e| e.to_string())?;
    let (mut pairs, mut unresolved) = (0, 0);
    for (i, g) in random_graphs(40, SEED ^ 100).iter().enumerate() {
        let cp = cohn_presentation(g);
        let rs = &cp.system;
        let t = g.regular_count();
        for _ in 0..3 {
            let m = rng.random_range(1..=2u64);
            let start = cp.vertex_rho().checked_scale(m).unwrap();
            let (a, ka) = random_walk(&mut rng, &start, rs, 4);
            let (b, kb) = random_walk(&mut rng, &start, rs, 4);
            let r = decide_equivalent(&a, &b, rs, &bounds, None).map_err(|e| e.to_string())?;
            let Equivalence::Equivalent(cd) = r else {
                ensure(!r.is_not_equivalent(), format!("graph {i}: descendants of m rho_V refuted"))?;
                unresolved += 1;
                continue;
            };
            ensure(cd.verify(rs), format!("graph {i}: traces do not replay"))?;
            let left = cd.left.rule_counts(rs.generator_count());
            let right = cd.right.rule_counts(rs.generator_count());
            for j in 0..t {
                let k = ka[j] + left[j];
                ensure(k == kb[j] + right[j], format!("graph {i}: rule counts differ at {j}"))?;
                ensure(cd.descendant.get(cp.marker(j)) == k, format!("graph {i}: marker {j} != k"))?;
            }
            pairs += 1;
        }
        let w = find_scalar_witness(&cp.vertex_rho(), rs, 4, &bounds).map_err(|e| e.to_string())?;
        ensure(w.is_none(), format!("graph {i}: m rho_V ~ m' rho_V found"))?;
    }
    ensure(pairs > 0, "no pair resolved")?;
    Ok(format!("{pairs} equivalent pairs with matching rule counts ({unresolved} beyond bounds); no scalar witness up to m = 4"))
}

fn criterion_11() -> Outcome {
    let bounds = SearchBounds::new(5_000, 24, 24).map_err(|e| e.to_string())?;
    let mut specs = corpus_specs();
    for (i, g) in random_graphs(40, SEED ^ 11).into_iter().enumerate() {
        specs.push((format!("leavitt/random-{i}"), AlgebraSpec::leavitt(g)));
    }
    let mut seen = [0; 3];
    for (name, spec) in specs {
        let v = decide_ibn(&spec, &bounds, 4).map_err(|e| format!("{name}: {e}"))?;
        let (slot, want) = match v.ibn {
            IbnStatus::Certified { .. } => (0, ImnStatus::Holds),
            IbnStatus::Refuted { .. } => (1, ImnStatus::Unknown),
            IbnStatus::Unknown { .. } => (2, ImnStatus::Unknown),
        };
        seen[slot] += 1;
        ensure(v.imn == want, format!("{name}: IMN {:?}", v.imn))?;
        ensure(audit(&v, &spec), format!("{name}: audit failed"))?;
    }
    Ok(format!("IMN consistent on {} certified, {} refuted, {} unknown", seen[0], seen[1], seen[2]))
}

fn criterion_12() -> Outcome {
    let mut runs: Vec<Vec<String>> = Vec::new();
    for (name, fx) in corpus() {
        let mut algebras = vec!["cohn", "leavitt"];
        if fx.x.is_some() {
            algebras.push("relative");
        }
        for algebra in algebras {
            for format in ["text", "json"] {
                runs.push(
                    ["ibn-check", "--example", &name, "--algebra", algebra, "--format", format]
                        .map(String::from)
                        .to_vec(),
                );
            }
        }
        runs.push(["companion", "--example", &name, "--format", "json"].map(String::from).to_vec());
        runs.push(["examples", &name].map(String::from).to_vec());
    }
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = cli(&args);
        let second = cli(&args);
        ensure(first == second, format!("`{}` differs between runs", args.join(" ")))?;
        ensure(!first.0.is_empty(), format!("`{}` printed nothing", args.join(" ")))?;
    }
    Ok(format!("{} CLI invocations byte-identical across two runs", runs.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        ("companion of R2", criterion_1),
        ("Cohn(R2) certificate", criterion_2),
        ("non-IBN witnesses", criterion_3),
        ("normal forms", criterion_4),
        ("parity reductions in F(R2)", criterion_5),
        ("torsion without IBN failure", criterion_6),
        ("Cohn algebras at scale", criterion_7),
        ("gamma invariance", criterion_8),
        ("mutual exclusion", criterion_9),
        ("Cohn monoid bookkeeping", criterion_10),
        ("IMN inference", criterion_11),
        ("determinism", criterion_12),
    ];
    let mut failed = Vec::new();
    for (i, (title, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {:>2} {title}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL criterion {:>2} {title}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
