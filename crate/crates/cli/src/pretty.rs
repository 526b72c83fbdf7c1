//! Plain-text rendering of reports for terminals.

use std::fmt::Write;

use serde_json::Value;

use crate::report::Report;

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("({})", xs.iter().map(text).collect::<Vec<_>>().join(",")),
        other => other.to_string(),
    }
}

fn matrix(out: &mut String, rows: &[Value]) {
    for row in rows {
        let cells: Vec<String> = row.as_array().into_iter().flatten().map(|x| format!("{:>3}", text(x))).collect();
        let _ = writeln!(out, "    {}", cells.join(" "));
    }
}

fn algebras(out: &mut String, report: &Report) {
    for a in report.payload["algebras"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "algebra {} support {}", a["index"], text(&a["support"]));
        if let Some(e) = a.get("error") {
            let _ = writeln!(out, "  error: {}", text(e));
        }
        if let Some(z) = a.get("partition").and_then(Value::as_array) {
            matrix(out, z);
        }
        if let Some(l) = a.get("latex") {
            let _ = writeln!(out, "  Z = {}", text(l));
        }
        if let Some(orbits) = a.get("orbits").and_then(Value::as_array) {
            let _ = writeln!(out, "  {:<24} {:>10} {:>8}", "orbit", "stabilizer", "labels");
            for o in orbits {
                let _ = writeln!(
                    out,
                    "  {:<24} {:>10} {:>8}",
                    text(&o["orbit"]["members"]),
                    o["orbit"]["stabilizer"].as_array().map_or(0, Vec::len),
                    text(&o["count"])
                );
            }
            let _ = writeln!(out, "  total {} (trace {})", a["total"], a["chargeTrace"]);
        }
        if let Some(rank) = a.get("rank") {
            let _ = writeln!(
                out,
                "  rank {rank}, invertible {}, duality candidates {}",
                text(&a["picard"]["isoClassName"]),
                a.get("dualityCandidates").and_then(Value::as_array).map_or(0, Vec::len)
            );
        }
        if let Some(r) = a.get("report") {
            let _ = writeln!(out, "  conjecture checks pass: {}", r["pass"]);
        }
    }
}

pub fn render(report: &Report) -> String {
    let mut out = String::new();
    if let Some(i) = &report.input {
        let _ = writeln!(out, "{} {}{} level {}", report.command, i.series, i.rank, i.level);
    } else {
        let _ = writeln!(out, "{}", report.command);
    }
    let p = &report.payload;
    match report.command.as_str() {
        "modular-data" => {
            let d = &p["data"];
            let _ = writeln!(out, "c = {}", text(&d["centralCharge"]));
            let _ = writeln!(out, "{:<5} {:<16} {:>10} {:>12}", "index", "weight", "h", "qdim");
            for (i, w) in d["weights"].as_array().into_iter().flatten().enumerate() {
                let _ = writeln!(
                    out,
                    "{:<5} {:<16} {:>10} {:>12.6}",
                    i,
                    text(w),
                    text(&d["conformalWeights"][i]),
                    d["quantumDims"][i].as_f64().unwrap_or(f64::NAN)
                );
            }
        }
        "picard" => {
            let _ = writeln!(out, "group {}", text(&p["group"]));
            let _ = writeln!(out, "{:<8} {:<16} {:>6} {:>8}", "element", "weight", "order", "twist");
            for e in p["elements"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "{:<8} {:<16} {:>6} {:>8}", text(&e["element"]), text(&e["weight"]), text(&e["order"]), text(&e["twist"]));
            }
        }
        "invariants" | "boundaries" | "bimodules" | "verify-conjecture" => algebras(&mut out, report),
        "twining" => {
            for c in p["currents"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "current {} {}: fixed points {}", c["current"], text(&c["weight"]), text(&c["fixedPoints"]));
                if let Some(e) = c.get("error") {
                    let _ = writeln!(out, "  error: {}", text(e));
                }
            }
        }
        "selftest" => {
            for c in p["criteria"].as_array().into_iter().flatten() {
                let mark = if c["pass"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "[{mark}] {:>2} {}: {}", text(&c["id"]), text(&c["name"]), text(&c["detail"]));
            }
        }
        _ => {}
    }
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    let _ = writeln!(out, "checks: {} passed, {} failed", report.checks.len() - failed.len(), failed.len());
    for f in failed {
        let _ = writeln!(out, "  failed: {f}");
    }
    out
}
