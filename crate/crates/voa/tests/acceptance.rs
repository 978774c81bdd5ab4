//! Prints one pass/fail line per acceptance criterion. Failures are reported, not panicked,
//! so the line for every criterion is always printed.

mod props;

use std::time::{Duration, Instant};

use voa::catalog::{run_suite, standard, Catalog, RunOptions, Status};

struct Line {
    ok: bool,
    detail: String,
    took: Duration,
}

fn suite(cat: &Catalog, name: &str, opts: RunOptions, limit: Duration) -> Line {
    let t = Instant::now();
    match run_suite(cat, name, &opts) {
        Ok(r) => {
            let took = t.elapsed();
            let bad: Vec<&str> = r.checks.iter().filter(|c| c.status != Status::Pass).map(|c| c.id.as_str()).collect();
            let mut detail = format!("{} passed, {} failed, {} skipped", r.passed, r.failed, r.skipped);
            if !bad.is_empty() {
                let shown: Vec<&str> = bad.iter().take(6).copied().collect();
                detail.push_str(&format!("; not passing: {}", shown.join(", ")));
                if bad.len() > shown.len() {
                    detail.push_str(&format!(" and {} more", bad.len() - shown.len()));
                }
            }
            if took > limit {
                detail.push_str(&format!("; over the {} s limit", limit.as_secs()));
            }
            Line { ok: r.all_passed() && took <= limit, detail, took }
        }
        Err(e) => Line { ok: false, detail: format!("error: {e}"), took: t.elapsed() },
    }
}

fn properties(limit: Duration) -> Line {
    let t = Instant::now();
    let results = props::all(props::CASES);
    let took = t.elapsed();
    let bad: Vec<String> = results.iter().filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}"))).collect();
    let mut detail = format!("{} properties, {} cases each", results.len(), props::CASES);
    if !bad.is_empty() {
        detail.push_str(&format!("; {}", bad.join("; ")));
    }
    Line { ok: bad.is_empty() && took <= limit, detail, took }
}

fn main() {
    let cat = standard();
    let secs = Duration::from_secs;
    let zhu = RunOptions { max_weight: Some(16), ..RunOptions::new(1) };
    let lines = [
        ("appendix replay at rank 4", suite(&cat, "appendix", RunOptions::new(4), secs(60))),
        ("reduction relations at rank 2", suite(&cat, "relations", RunOptions::new(2), secs(5))),
        ("eigenvalue tables", suite(&cat, "eigen", RunOptions::new(2), secs(5))),
        ("commutator formulas", suite(&cat, "commutators", RunOptions::new(3), secs(120))),
        ("boundary derivations", suite(&cat, "boundary", RunOptions::new(2), secs(30))),
        ("Zhu algebra relations", suite(&cat, "zhu", zhu, secs(300))),
        ("Verma kernel identities", suite(&cat, "verma", RunOptions::new(3), secs(10))),
        ("property suites", properties(secs(60))),
    ];
    let mut passed = 0;
    for (n, (name, line)) in lines.iter().enumerate() {
        let verdict = if line.ok { "pass" } else { "fail" };
        passed += line.ok as usize;
        println!("criterion {}: {verdict} - {name} ({:.1} s): {}", n + 1, line.took.as_secs_f64(), line.detail);
    }
    println!("{passed} of {} criteria pass", lines.len());
}
