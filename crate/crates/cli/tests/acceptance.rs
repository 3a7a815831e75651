//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value as Json;

#[path = "../../core/tests/suites/mod.rs"]
mod suites;

struct Run {
    code: i32,
    report: Json,
    wall: Duration,
}

fn qpbl(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qpbl")).args(args).env_remove("QPBL_SEED").output().expect("qpbl runs");
    let wall = start.elapsed();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Json::Null);
    Run { code: out.status.code().unwrap_or(-1), report, wall }
}

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn payload(r: &Run) -> &Json {
    &r.report["payload"]
}

/// Exact values come back as strings, sampled ones as numbers.
fn num(v: &Json) -> f64 {
    match v {
        Json::String(s) => match s.split_once('/') {
            Some((p, q)) => p.parse::<f64>().unwrap_or(f64::NAN) / q.parse::<f64>().unwrap_or(f64::NAN),
            None => s.parse().unwrap_or(f64::NAN),
        },
        other => other.as_f64().unwrap_or(f64::NAN),
    }
}

const FINITE_TABLES: [&str; 4] = ["sec2-counterexample", "remark1", "ex5.10", "ex3.14"];

fn criterion_1() -> Verdict {
    let ids = qpbl(&["catalog", "list"]);
    let spaces: Vec<String> = payload(&ids)["entries"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|e| e["kind"] == "space")
        .map(|e| e["id"].as_str().unwrap().to_string())
        .collect();
    ensure(spaces.len() >= 10, || format!("catalog lists {} spaces", spaces.len()))?;
    let mut slowest = 0;
    for id in &spaces {
        let r = qpbl(&["verify", "--space", id]);
        let axioms = payload(&r)["axioms"].as_array().cloned().unwrap_or_default();
        ensure(r.code == 0 && axioms.len() == 4 && axioms.iter().all(|a| a["passed"] == true), || {
            format!("{id}: exit {} report {}", r.code, r.report)
        })?;
        if FINITE_TABLES.contains(&id.as_str()) {
            ensure(axioms.iter().all(|a| a["exact"] == true), || format!("{id}: not exact"))?;
        } else {
            // 101 grid points plus 1000 seeded random points, all ordered pairs
            ensure(axioms.iter().all(|a| a["evidence"] == "sampled") && axioms[0]["checked"].as_u64() >= Some(1101 * 1100), || {
                format!("{id}: {}", axioms[0])
            })?;
        }
        let ms = r.report["elapsed_ms"].as_u64().unwrap_or(u64::MAX);
        ensure(ms < 1000, || format!("{id}: {ms} ms"))?;
        slowest = slowest.max(ms);
    }
    Ok(format!("{} spaces pass QPbl1-4 at their claimed s; slowest {slowest} ms", spaces.len()))
}

fn criterion_2() -> Verdict {
    let exact = |id: &str, want: &str| -> Result<(), String> {
        let r = qpbl(&["min-s", "--space", id]);
        let b = &payload(&r)["bound"];
        ensure(r.code == 0 && b["value"] == want && b["kind"] == "exact" && b["exact_arithmetic"] == true, || {
            format!("{id}: {b}")
        })
    };
    exact("ex5.10", "8/7")?;
    exact("sec2-counterexample", "1")?;
    exact("remark1", "1")?;
    let r = qpbl(&["min-s", "--space", "ex2.2", "--grid", "101", "--random", "0"]);
    let b = &payload(&r)["bound"];
    let v = num(&b["value"]);
    ensure(r.code == 0 && v > 1.9 && v <= 2.0 && b["kind"] == "lower-bound", || format!("ex2.2: {b}"))?;
    Ok(format!("8/7, 1, 1 exact; ex2.2 grid bound {v:.9}"))
}

fn members(id: &str, radius: &str, points: &[&str]) -> Result<Vec<bool>, String> {
    let mut args = vec!["ball", "--space", id, "--center", "0", "--radius", radius];
    for p in points {
        args.extend(["--point", p]);
    }
    let r = qpbl(&args);
    ensure(r.code == 0, || format!("{id}: {}", r.report))?;
    Ok(payload(&r)["membership"].as_array().unwrap().iter().map(|m| m["member"] == true).collect())
}

fn criterion_3() -> Verdict {
    let a = members("ex3.9", "1", &["0.499999", "0.5"])?;
    ensure(a == [true, false], || format!("ex3.9: {a:?}"))?;
    let b = members("ex3.10", "1/2", &["0.70710", "0.70711"])?;
    ensure(b == [true, false], || format!("ex3.10: {b:?}"))?;
    Ok("0.499999 in, 0.5 out; 0.70710 in, 0.70711 out".into())
}

fn criterion_4() -> Verdict {
    let t = qpbl(&["topology", "--space", "remark1"]);
    let sets = &payload(&t)["topology"]["open_sets"];
    let want: Json = serde_json::json!([[], ["0"], ["0", "1", "2"]]);
    ensure(t.code == 0 && *sets == want, || format!("open sets {sets}"))?;
    let s = qpbl(&["separation", "--space", "remark1"]);
    let sep = &payload(&s)["separation"];
    ensure(sep["class"] == "not-T0" && sep["witness"] == serde_json::json!(["1", "2"]), || format!("separation {sep}"))?;
    Ok("open sets {}, {0}, {0,1,2}; not-T0 with witness (1,2)".into())
}

fn criterion_5() -> Verdict {
    for target in ["1", "2"] {
        let r = qpbl(&["seq", "limit", "--space", "remark1", "--seq", "const:1", "--target", target, "--tol", "1e-12"]);
        ensure(r.code == 0 && payload(&r)["converged"] == true, || format!("target {target}: {}", r.report))?;
    }
    Ok("constant sequence 1 converges to 1 and to 2 at tol 1e-12".into())
}

fn criterion_6() -> Verdict {
    let phi = "linear:1/2";
    let psi = "capped-quadratic:1/4:1";
    let t = qpbl(&["fix", "table", "--space", "ex5.10", "--map", "map-ex5.10", "--phi", phi, "--psi", psi]);
    let rows = payload(&t)["rows"].as_array().cloned().unwrap_or_default();
    let want = ["0", "5/8", "19/8", "5/8", "3/16", "31/16", "31/16", "13/4", "5/8"];
    let got: Vec<&str> = rows.iter().map(|r| r["rhs"].as_str().unwrap_or("?")).collect();
    ensure(t.code == 0 && got == want && rows.iter().all(|r| r["holds"] == true), || format!("rows {got:?}"))?;
    let s = qpbl(&[
        "fix", "solve", "--theorem", "phi-psi", "--space", "ex5.10", "--map", "map-ex5.10", "--phi", phi, "--psi", psi, "--x0", "2",
    ]);
    let c = payload(&s);
    let iters = c["iterations"].as_u64().unwrap_or(u64::MAX);
    let hyp = c["hypothesis_report"].as_array().cloned().unwrap_or_default();
    let contraction = hyp.iter().find(|h| h["name"] == "contraction").cloned().unwrap_or(Json::Null);
    // phi and psi properties are sampled, so the run is evidence-only; the inequality itself is exhaustive
    ensure(contraction["passed"] == true && contraction["evidence"] == "exhaustive", || format!("contraction {contraction}"))?;
    ensure(s.code == 0 && s.report["status"] != "fail" && c["point"] == "0" && iters <= 3, || format!("solve {}", s.report))?;
    Ok(format!("9 exact RHS values match and hold; fixed point 0 after {iters} iterations ({})", s.report["status"].as_str().unwrap_or("?")))
}

fn criterion_7() -> Verdict {
    let mut worst: f64 = 0.0;
    for x in ["0.1", "0.5", "1.0"] {
        let r = qpbl(&["fix", "witness", "--space", "ex2.2", "--map", "map-half", "--x0", x, "--terms", "200"]);
        let v = payload(&r)["series_value"].as_f64().unwrap_or(f64::NAN);
        let x: f64 = x.parse().unwrap();
        let err = (v - 3.0 * x * x).abs();
        ensure(r.code == 0 && err <= 1e-9, || format!("x0 = {x}: series {v}"))?;
        worst = worst.max(err);
    }
    Ok(format!("series value 3x^2 at 0.1, 0.5, 1.0; max error {worst:.1e}"))
}

fn criterion_8() -> Verdict {
    let r = qpbl(&[
        "fix", "solve", "--theorem", "expansive-k", "--space", "ex2.2:upper=inf", "--map", "map-expansive", "--K", "9/2", "--x0", "1",
        "--grid", "50", "--random", "0",
    ]);
    let c = payload(&r);
    let hyp = c["hypothesis_report"].as_array().cloned().unwrap_or_default();
    let find = |name: &str| hyp.iter().find(|h| h["name"] == name).cloned().unwrap_or(Json::Null);
    let (k, exp) = (find("k-bound"), find("expansion"));
    ensure(k["passed"] == true, || format!("K bound {k}"))?;
    ensure(exp["passed"] == true && exp["checked"] == 2500, || format!("expansion {exp}"))?;
    let (rf, rb) = (num(&c["residual_forward"]), num(&c["residual_backward"]));
    let inv = c["inverse_evaluations"].as_u64().unwrap_or(u64::MAX);
    let point: f64 = c["point"].as_str().and_then(|p| p.parse().ok()).unwrap_or(f64::NAN);
    ensure(r.code == 0 && point.abs() < 1e-4 && rf < 1e-8 && rb < 1e-8 && inv < 200, || format!("certificate {}", r.report))?;
    Ok(format!("2500 sampled pairs pass K = 9/2 > 4; fixed point {point:.1e}, residuals {rf:.1e}/{rb:.1e}, {inv} inverse evaluations"))
}

fn criterion_9() -> Verdict {
    let mut parts = Vec::new();
    for s in suites::criterion_suites() {
        s.outcome.map_err(|e| format!("{}: {e}", s.name))?;
        parts.push(format!("{} ({} cases)", s.name, s.cases));
    }
    Ok(parts.join("; "))
}

fn criterion_10() -> Verdict {
    let r = qpbl(&["reproduce", "--all"]);
    let p = payload(&r);
    ensure(r.code == 0 && p["failed"] == 0, || format!("exit {} failed {}", r.code, p["failed"]))?;
    ensure(r.wall < Duration::from_secs(30), || format!("took {:?}", r.wall))?;
    Ok(format!("{} registry entries pass in {:.2} s", p["entries"], r.wall.as_secs_f64()))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("axiom verification", criterion_1),
        ("minimal coefficient", criterion_2),
        ("ball membership", criterion_3),
        ("finite topology", criterion_4),
        ("non-unique limits", criterion_5),
        ("(phi, psi) table and fixed point", criterion_6),
        ("weight function series", criterion_7),
        ("expansive fixed point", criterion_8),
        ("property suites", criterion_9),
        ("reproduce --all", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
