//! Acceptance criteria 1-8. Each test prints one line:
//! `criterion N: PASS|FAIL <summary>`.

use std::io::Write;
use std::time::Instant;

use sortal::chain::sweep;
use sortal::examples::{all, stlc_example};
use sortal::family::Context;
use sortal::signature::{Signature, Sort};
use sortal::subst::laws::{
    check_adjunctions, check_distlaws, check_interchange, check_monad_laws, check_oracle, check_strength_laws,
    LawConfig,
};
use sortal::subst::{Engine, Mutation};
use sortal::term::{count_terms, enumerate};
use sortal::verdict::Verdict;

const CFG: LawConfig = LawConfig { samples: 1000, seed: 0, max_height: 4 };

fn report(n: usize, started: Instant, failures: &[String], summary: String) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut text = format!("criterion {n}: {status} {summary} ({:.1?})\n", started.elapsed());
    for f in failures {
        text.push_str(&format!("criterion {n}:   {f}\n"));
    }
    // Written to the handle directly so the line shows up for passing tests too.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
}

fn run_suite(n: usize, what: &str, suite: impl Fn(&Engine<'_>, &LawConfig) -> Vec<Verdict>, min_samples: u64) {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut laws = 0;
    for (name, sig, _) in all() {
        for v in suite(&Engine::new(&sig), &CFG) {
            laws += 1;
            if !v.passed() || v.samples < min_samples {
                failures.push(format!("{name}: {}", v.to_json_line()));
            }
        }
    }
    report(n, started, &failures, format!("{what}: {laws} law checks over 3 signatures"));
}

#[test]
fn criterion_1_chain_oracle() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut cases = 0;
    for (name, sig, _) in all() {
        let checks = sweep(&sig, 2, 4);
        cases += checks.len();
        let bad: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
        if let Some(first) = bad.first() {
            failures.push(format!(
                "{name}: {} of {} (context, sort, level) cases fail; first at n={} ({}) {}: {}",
                bad.len(),
                checks.len(),
                first.n,
                first.context,
                first.sort,
                first.failure.as_deref().unwrap_or_default()
            ));
        }
    }
    report(1, started, &failures, format!("chain levels 0..4 against enumerate, {cases} cases"));
}

#[test]
fn criterion_2_monad_laws() {
    run_suite(2, "monad, join and bracket laws", check_monad_laws, CFG.samples as u64);
}

#[test]
fn criterion_3_strength_and_distributive_laws() {
    run_suite(
        3,
        "strength and distributive laws",
        |e, c| {
            let mut v = check_strength_laws(e, c);
            v.extend(check_distlaws(e, c));
            v
        },
        CFG.samples as u64,
    );
}

#[test]
fn criterion_4_adjunctions() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut cases = 0;
    for (name, sig, _) in all() {
        for v in check_adjunctions(&sig, 4, 3) {
            cases += v.samples;
            if !v.passed() {
                failures.push(format!("{name}: {}", v.to_json_line()));
            }
        }
    }
    report(4, started, &failures, format!("hat -| proj -| underline, carriers up to 4, {cases} cases"));
}

#[test]
fn criterion_5_oracle_substitution() {
    run_suite(5, "bind and subst against naive substitution", check_oracle, CFG.samples as u64);
}

#[test]
fn criterion_6_interchange() {
    run_suite(6, "interchange of disjoint substitutions", check_interchange, CFG.samples as u64);
}

fn every_suite(engine: &Engine<'_>) -> Vec<Verdict> {
    let mut v = check_monad_laws(engine, &CFG);
    v.extend(check_oracle(engine, &CFG));
    v.extend(check_strength_laws(engine, &CFG));
    v.extend(check_distlaws(engine, &CFG));
    v.extend(check_interchange(engine, &CFG));
    v
}

#[test]
fn criterion_7_mutation_sensitivity() {
    let started = Instant::now();
    let sig: Signature = stlc_example();
    let mut failures = Vec::new();
    let mut caught = Vec::new();
    for m in Mutation::ALL {
        let failing: Vec<Verdict> =
            every_suite(&Engine::with_mutation(&sig, Some(m))).into_iter().filter(|v| !v.passed()).collect();
        match failing.first() {
            Some(v) if v.counterexample.is_some() => caught.push(format!("{} by {}", m.name(), failing.len())),
            _ => failures.push(format!("{} is not detected", m.name())),
        }
    }
    report(7, started, &failures, format!("{} mutations caught ({})", caught.len(), caught.join(", ")));
}

#[test]
fn criterion_8_concrete_counts() {
    let started = Instant::now();
    let sig = stlc_example();
    let ctx = Context::new(vec![Sort::new("b")]);
    let mut failures = Vec::new();
    for (sort, expected) in [("b", 1u128), ("b->b", 2)] {
        let s = Sort::new(sort);
        let counted = count_terms(&sig, &ctx, &s, 2);
        let listed = enumerate(&sig, &ctx, &s, 2).map(|t| t.len() as u128);
        if counted != expected || listed != Ok(expected) {
            failures.push(format!("sort {sort}: count {counted}, enumerate {listed:?}, expected {expected}"));
        }
    }
    report(8, started, &failures, "STLC over [b] at height 2: b has 1 term, b->b has 2".into());
}
