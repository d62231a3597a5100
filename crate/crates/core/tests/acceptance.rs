//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use eap::acp::{traces, TraceSet};
use eap::dsl::{parse_document, parse_expr, serialize_document, serialize_expr};
use eap::laws::{
    equivalence_suite, lattice_suite, measures_suite, parallel_growth_suite, preservation_suite, translation_suite,
    ExprGen, ExprGenConfig, Gen, LawReport,
};
use eap::model::{r_parallel, Event};
use eap::{Rational, Result};

const SEED: u64 = 20_240_601;

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_report(r: &LawReport) -> Outcome {
    let checked: usize = r.outcomes.iter().map(|o| o.passed + o.failed).sum();
    let failed: usize = r.outcomes.iter().map(|o| o.failed).sum();
    let mut detail = format!(
        "{} laws, {checked} checks, {failed} failures, {} resampled",
        r.outcomes.len(),
        r.resampled
    );
    if let Some(o) = r.outcomes.iter().find(|o| o.failed > 0) {
        detail.push_str(&format!("; first failing: {}", o.name));
        if let Some(c) = &o.counterexample {
            detail.push_str(&format!(" [{}]", truncate(c)));
        }
    }
    Outcome {
        ok: r.all_passed(),
        detail,
    }
}

fn truncate(s: &str) -> String {
    if s.chars().count() > 300 {
        format!("{}...", s.chars().take(300).collect::<String>())
    } else {
        s.to_string()
    }
}

fn set(words: &[&str]) -> TraceSet {
    words
        .iter()
        .map(|w| w.chars().map(|c| c.to_string()).collect())
        .collect()
}

fn exact_traces(text: &str, expected: &[&str]) -> Result<Outcome> {
    let got = traces(&parse_expr(text)?)?;
    let want = set(expected);
    Ok(Outcome {
        ok: got == want,
        detail: format!("{} traces, exact set equality", got.len()),
    })
}

fn filter(r: &LawReport, keep: impl Fn(&str) -> bool) -> LawReport {
    LawReport {
        outcomes: r.outcomes.iter().filter(|o| keep(&o.name)).cloned().collect(),
        ..r.clone()
    }
}

fn round_trip() -> Result<Outcome> {
    let mut g = Gen::new(SEED);
    let mut failures = 0;
    for _ in 0..1000 {
        let d = g.document();
        if parse_document(&serialize_document(&d))? != d {
            failures += 1;
        }
    }
    let mut eg = ExprGen::new(SEED, ExprGenConfig::default());
    for _ in 0..1000 {
        let x = eg.expr();
        if parse_expr(&serialize_expr(&x))? != x {
            failures += 1;
        }
    }
    Ok(Outcome {
        ok: failures == 0,
        detail: format!("1000 documents, 1000 expressions, {failures} failures"),
    })
}

fn equivalence() -> Result<Outcome> {
    let mut out = from_report(&equivalence_suite(SEED, 10_000)?);
    let one = Rational::ONE;
    let e = |n: i64| Event::point("x", Rational::new(n, 5).expect("non-zero denominator"));
    let (a, b, c) = (e(0), e(3), e(6));
    let broken = r_parallel(&a, &b, one)? && r_parallel(&b, &c, one)? && !r_parallel(&a, &c, one)?;
    out.ok &= broken;
    out.detail
        .push_str(&format!("; r-parallel (0, 3/5, 6/5; r = 1) non-transitive: {broken}"));
    Ok(out)
}

type Check = Box<dyn FnOnce() -> Result<Outcome>>;

fn main() {
    let criteria: Vec<(&str, Option<u64>, Check)> = vec![
        (
            "merge trace set of (P.Q)||(R.V)",
            Some(1),
            Box::new(|| exact_traces("(P.Q) || (R.V)", &["PQRV", "RPQV", "RPVQ", "RVPQ", "PRQV", "PRVQ"])),
        ),
        (
            "left-merge trace set of (P.Q)|L(R.V)",
            Some(1),
            Box::new(|| exact_traces("(P.Q) |L (R.V)", &["PQRV", "PRQV", "PRVQ"])),
        ),
        (
            "abstraction tau{c}((a+b).c)",
            Some(1),
            Box::new(|| exact_traces("tau{c}((a+b).c)", &["a", "b"])),
        ),
        (
            "ACP axioms on 1000 random triples",
            Some(60),
            Box::new(|| Ok(from_report(&eap::acp::check_axioms(SEED, 1000)?))),
        ),
        (
            "closed-form measures equal the oracle on 1000 actions",
            Some(120),
            Box::new(|| {
                let r = measures_suite(SEED, 1000)?;
                Ok(from_report(&filter(&r, |n| {
                    n.contains("oracle") || n.contains("does not matter")
                })))
            }),
        ),
        (
            "measure inequalities and the sequential zero criterion",
            None,
            Box::new(|| {
                let r = measures_suite(SEED, 1000)?;
                Ok(from_report(&filter(&r, |n| {
                    !n.contains("oracle") && !n.contains("does not matter")
                })))
            }),
        ),
        (
            "free parallel composition raises both measures (500 action and 500 process pairs)",
            None,
            Box::new(|| Ok(from_report(&parallel_growth_suite(SEED, 500)?))),
        ),
        (
            "lattice and Boolean laws for actions and processes",
            Some(60),
            Box::new(|| Ok(from_report(&lattice_suite(SEED, 100_000)?))),
        ),
        (
            "translation faithfulness on 500 random expressions",
            Some(120),
            Box::new(|| Ok(from_report(&translation_suite(SEED, 500)?))),
        ),
        (
            "preservation properties, 500 instances each",
            None,
            Box::new(|| Ok(from_report(&preservation_suite(SEED, 500)?))),
        ),
        ("DSL round trip", None, Box::new(round_trip)),
        ("parallelism equivalence checks", None, Box::new(equivalence)),
    ];

    let mut failed = BTreeSet::new();
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|s| elapsed <= Duration::from_secs(s));
        let (ok, detail) = match result {
            Ok(o) => (o.ok && in_time, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let budget = limit.map_or(String::new(), |s| format!(" / limit {s}s"));
        println!(
            "{} [{:02}] {name}: {detail} ({:.2}s{budget})",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
        if !ok {
            failed.insert(i + 1);
        }
    }
    if failed.is_empty() {
        println!("all acceptance criteria passed");
    } else {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
