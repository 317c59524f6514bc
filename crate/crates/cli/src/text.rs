//! Plain-text renderings for `--format text`.

use serde::Serialize;
use serde_json::Value;
use std::fmt::Write;

use hbspace::analyzers::{AnalysisReport, ScanResult};
use hbspace::scenarios::{CatalogEntry, ScenarioOutcome};

/// Snake-case tag of a unit enum variant.
pub fn tag<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => "?".into(),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) if a.len() > 8 => format!("[{} values]", a.len()),
        other => other.to_string(),
    }
}

/// `path = value` lines for every leaf of a JSON document.
pub fn flat(doc: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, x, out);
                }
            }
            other => {
                let _ = writeln!(out, "{prefix} = {}", scalar(other));
            }
        }
    }
    let mut out = String::new();
    walk("", doc, &mut out);
    out
}

pub fn report(rep: &AnalysisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}: {}", rep.analysis, tag(&rep.verdict));
    for (k, v) in &rep.subject {
        let _ = writeln!(s, "  {k}: {v}");
    }
    for (k, c) in &rep.conditions {
        let _ = writeln!(s, "  [{}] {k}: {}", tag(&c.verdict), c.statement);
        if let Some(n) = &c.note {
            let _ = writeln!(s, "      {n}");
        }
    }
    for (k, v) in &rep.constants {
        let _ = writeln!(s, "  {k} = {}", scalar(v));
    }
    s
}

pub fn norms(b: &str, kernels: &[([f64; 2], f64, f64)], monomials: &[(usize, f64, Option<f64>)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "b: {b}");
    let _ = writeln!(s, "{:>24} {:>22} {:>10}", "lambda", "||k_lambda||_b^2", "rel err");
    for (l, n, e) in kernels {
        let _ = writeln!(s, "{:>24} {:>22.12e} {:>10.2e}", format!("{:.6}{:+.6}i", l[0], l[1]), n, e);
    }
    let _ = writeln!(s, "{:>6} {:>22} {:>10}", "n", "||z^n||_b^2", "rel err");
    for (n, v, e) in monomials {
        let e = e.map_or("-".to_string(), |e| format!("{e:.2e}"));
        let _ = writeln!(s, "{n:>6} {v:>22.12e} {e:>10}");
    }
    s
}

pub fn catalog(entries: &[CatalogEntry]) -> String {
    let mut s = String::new();
    for e in entries {
        let _ = writeln!(s, "{}: {}", e.name, e.summary);
        for p in &e.params {
            let _ = writeln!(s, "  {} = {} in ({}, {}): {}", p.name, p.default, p.range.0, p.range.1, p.doc);
        }
    }
    s
}

pub fn scenario(o: &ScenarioOutcome) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}: {}", o.scenario, if o.passed { "all expectations met" } else { "mismatch" });
    let _ = writeln!(s, "  b: {}", o.b);
    if let Some(mu) = &o.mu {
        let _ = writeln!(s, "  mu: {mu}");
    }
    for c in &o.checks {
        let mark = if c.matched { "ok" } else { "MISMATCH" };
        let _ = writeln!(
            s,
            "  {:<18} expected {:<13} observed {:<13} {mark}",
            tag(&c.check),
            tag(&c.expected),
            tag(&c.observed)
        );
    }
    s
}

pub fn scan(label: &str, r: &ScanResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} scan of {label}: {}", tag(&r.kind), tag(&r.verdict));
    let _ = writeln!(s, "  value = {:.12e}, growth exponent = {:.4}", r.value, r.growth_exponent);
    for l in &r.levels {
        let _ = writeln!(s, "  level {:>2}: extreme {:.6e}, running {:.6e}", l.level, l.extreme, l.running);
    }
    s
}
