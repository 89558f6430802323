//! One PASS/FAIL line per acceptance criterion, driven through the `alc`
//! binary. Exits nonzero when any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

const FAST: Duration = Duration::from_secs(1);
const SEARCH_LIMIT_SECS: f64 = 60.0;
const PR_LIMIT_SECS: f64 = 600.0;
const QUANTUM_TOL: f64 = 1e-12;
const SEESAW_MARGIN: f64 = 1e-3;
const MIN_RESTARTS: u64 = 50;
const PR_MIN_FAMILIES: u64 = 50_000_000;

struct Run {
    json: Value,
    code: i32,
    elapsed: Duration,
}

fn alc(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_alc"))
        .args(args)
        .env_remove("ALC_JOBS")
        .output()
        .expect("spawn alc");
    let elapsed = start.elapsed();
    let json = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("alc {args:?}: bad JSON ({e}); stderr: {}", String::from_utf8_lossy(&out.stderr))
    });
    Run {
        json,
        code: out.status.code().unwrap_or(-1),
        elapsed,
    }
}

fn s<'a>(v: &'a Value, path: &str) -> &'a Value {
    path.split('.').fold(v, |v, k| match k.parse::<usize>() {
        Ok(i) => &v[i],
        Err(_) => &v[k],
    })
}

fn b(v: &Value, path: &str) -> bool {
    s(v, path).as_bool().unwrap_or(false)
}

fn u(v: &Value, path: &str) -> u64 {
    s(v, path).as_u64().unwrap_or(u64::MAX)
}

struct Line {
    id: u8,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn criterion_1() -> Line {
    let r = alc(&["classical", "search", "--check"]);
    let j = &r.json;
    let passed = s(j, "optimum") == "13/16"
        && b(j, "reference_is_maximizer")
        && !b(j, "perfect_strategy_exists")
        && r.code == 0
        && r.elapsed < FAST;
    Line {
        id: 1,
        name: "classical optimum 13/16, no perfect strategy",
        passed,
        detail: format!(
            "optimum={} maximizers={} reference_is_maximizer={} {:.3}s",
            s(j, "optimum"),
            u(j, "maximizer_count"),
            b(j, "reference_is_maximizer"),
            r.elapsed.as_secs_f64()
        ),
    }
}

fn criterion_2() -> Line {
    let r = alc(&["squarebit", "table3", "--check"]);
    let j = &r.json;
    let passed = u(j, "matching") == 576
        && u(j, "invalid_count") == 16
        && b(j, "invalid_values_expected")
        && b(j, "invalid_cells_match_shaded")
        && r.code == 0
        && r.elapsed < FAST;
    Line {
        id: 2,
        name: "full probability table matches 576/576, 16 shaded cells",
        passed,
        detail: format!(
            "matching={}/576 invalid={} values_ok={} shaded_ok={} {:.3}s",
            u(j, "matching"),
            u(j, "invalid_count"),
            b(j, "invalid_values_expected"),
            b(j, "invalid_cells_match_shaded"),
            r.elapsed.as_secs_f64()
        ),
    }
}

fn criterion_3() -> Line {
    let r = alc(&["squarebit", "table5", "--check"]);
    let j = &r.json;
    let passed = u(j, "matching") == 64 && b(j, "sign_rule_holds") && r.code == 0 && r.elapsed < FAST;
    Line {
        id: 3,
        name: "Omega16 images under local D8 actions, sign-group rule",
        passed,
        detail: format!(
            "matching={}/64 sign_rule={} {:.3}s",
            u(j, "matching"),
            b(j, "sign_rule_holds"),
            r.elapsed.as_secs_f64()
        ),
    }
}

fn criterion_4() -> Line {
    let r = alc(&["quantum", "verify"]);
    let j = &r.json;
    let overall = s(j, "overall").as_f64().unwrap_or(f64::NAN);
    let pairs = s(j, "pairs").as_array().cloned().unwrap_or_default();
    let worst = pairs
        .iter()
        .map(|p| (p["success"].as_f64().unwrap_or(f64::NAN) - 1.0).abs())
        .fold(0.0, f64::max);
    let passed = (overall - 1.0).abs() <= QUANTUM_TOL
        && pairs.len() == 16
        && worst <= QUANTUM_TOL
        && r.code == 0
        && r.elapsed < FAST;
    Line {
        id: 4,
        name: "entangled qubit protocol succeeds on all 16 pairs",
        passed,
        detail: format!(
            "overall={overall} worst_pair_error={worst:e} tol={QUANTUM_TOL:e} {:.3}s",
            r.elapsed.as_secs_f64()
        ),
    }
}

fn no_go_ok(run: &Value, limit: f64) -> (bool, String) {
    let wall = s(run, "wall_time").as_f64().unwrap_or(f64::INFINITY);
    let ok = s(run, "perfect").is_null()
        && u(run, "farkas_certificates_verified") == u(run, "distinct_lps")
        && u(run, "audit.confirmed_infeasible") == u(run, "audit.distinct_lps")
        && b(run, "passed")
        && wall < limit;
    let detail = format!(
        "{}:{}fam/{}lp/{:.1}s",
        s(run, "model").as_str().unwrap_or("?"),
        u(run, "strategies_examined"),
        u(run, "distinct_lps"),
        wall
    );
    (ok, detail)
}

fn criterion_5(report: &Value) -> Line {
    let runs = s(report, "searches").as_array().cloned().unwrap_or_default();
    let mut passed = true;
    let mut details = Vec::new();
    let mut seen = 0;
    for run in runs.iter().filter(|r| u(r, "n_strings") == 4) {
        let is_pr = s(run, "model") == "PR";
        let (ok, d) = no_go_ok(run, if is_pr { PR_LIMIT_SECS } else { SEARCH_LIMIT_SECS });
        let ok = ok && (!is_pr || u(run, "strategies_examined") >= PR_MIN_FAMILIES);
        passed &= ok;
        seen += 1;
        details.push(d);
    }
    Line {
        id: 5,
        name: "no perfect strategy in HS, PR, Hybrid A/B, Frozen 16..23",
        passed: passed && seen == 12,
        detail: details.join(" "),
    }
}

fn criterion_6(report: &Value) -> Line {
    let runs = s(report, "searches").as_array().cloned().unwrap_or_default();
    let mut found = Vec::new();
    for run in runs.iter().filter(|r| u(r, "n_strings") == 2) {
        let ok = !s(run, "perfect").is_null() && s(run, "perfect.replay_success") == "1/1";
        found.push((s(run, "model").as_str().unwrap_or("?").to_string(), ok));
    }
    let passed = found.len() == 2 && found.iter().all(|(_, ok)| *ok);
    Line {
        id: 6,
        name: "1-bit game: perfect strategy on classical bit and HS product",
        passed,
        detail: found
            .iter()
            .map(|(m, ok)| format!("{m}:{}", if *ok { "perfect" } else { "none" }))
            .collect::<Vec<_>>()
            .join(" "),
    }
}

fn criterion_7() -> Line {
    let r = alc(&["spekkens", "verify"]);
    let j = &r.json;
    let passed = u(j, "composition_matches") == 16
        && s(j, "success_four_outcome") == "1/1"
        && s(j, "success_two_outcome") == "1/1"
        && r.code == 0
        && r.elapsed < FAST;
    Line {
        id: 7,
        name: "toy-bit composition table and protocol success",
        passed,
        detail: format!(
            "composition={}/16 M={} M'={} {:.3}s",
            u(j, "composition_matches"),
            s(j, "success_four_outcome"),
            s(j, "success_two_outcome"),
            r.elapsed.as_secs_f64()
        ),
    }
}

fn criterion_8(report: &Value) -> Line {
    let p = s(report, "properties");
    let group = |k: &str| b(p, &format!("{k}.closed")) && b(p, &format!("{k}.has_identity")) && b(p, &format!("{k}.has_inverses"));
    let best = s(p, "seesaw.best_value").as_f64().unwrap_or(f64::NAN);
    let checks = [
        ("lp", u(p, "lp_oracle.instances") >= 1000 && b(p, "lp_oracle.passed")),
        ("d8", group("d8")),
        ("klein", group("klein")),
        ("completeness", b(p, "elementary_completeness")),
        ("gauge", b(p, "gauge.passed")),
        ("convexity", b(p, "classical_convexity.passed") && s(p, "classical_convexity.max_value") != "1/1"),
        (
            "seesaw",
            u(p, "seesaw.restarts") >= MIN_RESTARTS
                && b(p, "seesaw.monotone")
                && best < 1.0 - SEESAW_MARGIN,
        ),
    ];
    Line {
        id: 8,
        name: "property suites",
        passed: checks.iter().all(|(_, ok)| *ok),
        detail: checks
            .iter()
            .map(|(k, ok)| format!("{k}={}", if *ok { "ok" } else { "FAIL" }))
            .chain([format!("seesaw_best={best:.6}")])
            .collect::<Vec<_>>()
            .join(" "),
    }
}

fn main() {
    let mut lines = vec![criterion_1(), criterion_2(), criterion_3(), criterion_4()];
    let report = alc(&["paper", "report", "--timing"]).json;
    lines.push(criterion_5(&report));
    lines.push(criterion_6(&report));
    lines.push(criterion_7());
    lines.push(criterion_8(&report));
    lines.sort_by_key(|l| l.id);
    println!();
    for l in &lines {
        println!(
            "acceptance {} {}: {} ({})",
            l.id,
            if l.passed { "PASS" } else { "FAIL" },
            l.name,
            l.detail
        );
    }
    let failed = lines.iter().filter(|l| !l.passed).count();
    println!("acceptance summary: {} passed, {failed} failed", lines.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
