//! Verb implementations. Each returns the rendered artifact and its status.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::Path;
use std::sync::Arc;

use hbspace::analyzers::{
    a2_check, carleson_sup_scan, corona_check, direct_carleson_verdict, norm_equivalence_verdict, num,
    reverse_carleson_extreme, reverse_carleson_verdict, reverse_inf_scan, write_scan_csv, AnalysisConfig,
    AnalysisReport, Condition, Verdict,
};
use hbspace::boundary::functions::{BoundaryFunction, Constant, GridDensity, PowerWeight};
use hbspace::hb::{
    hb_norm, kernel_norm_closed_form, monomial_norm, pythagorean_mate, CauchyKernel, HbKernel, MateConfig, NormConfig,
    Polynomial, PythagoreanPair, SymbolB,
};
use hbspace::measure::{weight_measure, ComplementWeight, DiskWeight, MateWeight};
use hbspace::scenarios::{build_with_grid, catalog, default_grid_exponent, Outcome, Params};
use hbspace::HbError;

use crate::{io, text, Artifact, Format, Resolution, ScanSide, ScanWeight, Status};

const DEFAULT_GRID_EXPONENT: u32 = 14;

fn config(res: &Resolution) -> AnalysisConfig {
    AnalysisConfig { depth: res.depth, angles: res.angles as usize, seed: res.seed, ..AnalysisConfig::default() }
}

fn mate_of(b: &SymbolB, res: &Resolution) -> Result<PythagoreanPair, HbError> {
    pythagorean_mate(b, &MateConfig::with_grid_exponent(res.grid_exponent.unwrap_or(DEFAULT_GRID_EXPONENT))?)
}

fn json_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn no_csv(verb: &str) -> HbError {
    HbError::Config(format!("`{verb}` has no CSV form; use json or text"))
}

fn verdict_status(v: Verdict) -> Status {
    match v {
        Verdict::Undetermined => Status::Undetermined,
        _ => Status::Determinate,
    }
}

fn report_status(rep: &AnalysisReport) -> Status {
    if rep.inconsistent() {
        Status::Inconsistent
    } else {
        verdict_status(rep.verdict)
    }
}

fn cx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn mate(b: &Path, res: &Resolution, format: Format) -> Result<Artifact, HbError> {
    let symbol = io::load_symbol(b)?;
    let pair = mate_of(&symbol, res)?;
    let zero = Complex64::new(0.0, 0.0);
    let taylor = |c: Vec<Complex64>| c.into_iter().map(cx).collect::<Vec<_>>();
    let doc = json!({
        "b": symbol.label(),
        "extremeness": pair.extremeness(),
        "grid_size": pair.grid_size(),
        "a0": num(pair.a_fn().eval(zero).re),
        "b0": cx(pair.b_fn().eval(zero)),
        "a_taylor": taylor(pair.a_fn().taylor(16)),
        "b_taylor": taylor(pair.b_fn().taylor(16)),
        "a_bounded_below": pair.a_bounded_below().map(num),
        "diagnostics": pair.diagnostics(),
    });
    let body = match format {
        Format::Json => json_text(&doc),
        Format::Text => text::flat(&doc),
        Format::Csv => return Err(no_csv("mate")),
    };
    Ok(Artifact { body, status: Status::Determinate })
}

#[derive(Debug, Serialize)]
struct KernelRow {
    lambda: [f64; 2],
    norm_sq: f64,
    closed_form_sq: f64,
    rel_error: f64,
    reproducing_norm_sq: f64,
    reproducing_closed_form_sq: f64,
    reproducing_rel_error: f64,
    truncation: usize,
}

#[derive(Debug, Serialize)]
struct MonomialRow {
    n: usize,
    norm_sq: f64,
    formula_sq: Option<f64>,
    rel_error: Option<f64>,
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
}

pub fn norms(
    b: &Path,
    lambdas: &[Complex64],
    monomials: usize,
    res: &Resolution,
    format: Format,
) -> Result<Artifact, HbError> {
    let symbol = io::load_symbol(b)?;
    let pair = mate_of(&symbol, res)?;
    let cfg = NormConfig { start: res.truncation as usize, ..NormConfig::default() };
    let grid: Vec<Complex64> = if lambdas.is_empty() {
        (0..=8).map(|j| Complex64::new(1.0 - 0.5f64.powi(j), 0.0)).collect()
    } else {
        lambdas.to_vec()
    };
    let mut kernels = Vec::new();
    for &l in &grid {
        let closed = kernel_norm_closed_form(&pair, l)?;
        let k = hb_norm(&pair, &CauchyKernel(l), &cfg)?;
        let kb = hb_norm(&pair, &HbKernel::new(&pair, l)?, &cfg)?;
        kernels.push(KernelRow {
            lambda: [l.re, l.im],
            norm_sq: k.norm * k.norm,
            closed_form_sq: closed.norm_sq,
            rel_error: rel(k.norm * k.norm, closed.norm_sq),
            reproducing_norm_sq: kb.norm * kb.norm,
            reproducing_closed_form_sq: closed.reproducing_norm_sq,
            reproducing_rel_error: rel(kb.norm * kb.norm, closed.reproducing_norm_sq),
            truncation: k.truncation.max(kb.truncation),
        });
    }
    let mut rows = Vec::new();
    let mut formula_note = None;
    for n in 0..=monomials {
        let generic = hb_norm(&pair, &Polynomial::monomial(n), &cfg)?.norm.powi(2);
        let formula = match monomial_norm(&pair, n) {
            Ok(v) => Some(v),
            Err(e) => {
                formula_note.get_or_insert_with(|| e.to_string());
                None
            }
        };
        rows.push(MonomialRow {
            n,
            norm_sq: generic,
            formula_sq: formula,
            rel_error: formula.map(|f| rel(generic, f)),
        });
    }
    let body = match format {
        Format::Json => json_text(&json!({
            "b": symbol.label(),
            "kernels": kernels,
            "monomials": rows,
            "monomial_formula_note": formula_note,
        })),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["kind", "lambda_re", "lambda_im", "n", "norm_sq", "closed_form_sq", "rel_error"])
                .map_err(csv_err)?;
            for k in &kernels {
                let f = |x: f64| x.to_string();
                w.write_record([
                    "kernel",
                    &f(k.lambda[0]),
                    &f(k.lambda[1]),
                    "",
                    &f(k.norm_sq),
                    &f(k.closed_form_sq),
                    &f(k.rel_error),
                ])
                .map_err(csv_err)?;
                w.write_record([
                    "reproducing_kernel",
                    &f(k.lambda[0]),
                    &f(k.lambda[1]),
                    "",
                    &f(k.reproducing_norm_sq),
                    &f(k.reproducing_closed_form_sq),
                    &f(k.reproducing_rel_error),
                ])
                .map_err(csv_err)?;
            }
            for m in &rows {
                let o = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
                w.write_record([
                    "monomial",
                    "",
                    "",
                    &m.n.to_string(),
                    &m.norm_sq.to_string(),
                    &o(m.formula_sq),
                    &o(m.rel_error),
                ])
                .map_err(csv_err)?;
            }
            csv_string(w)?
        }
        Format::Text => text::norms(
            symbol.label(),
            &kernels.iter().map(|k| (k.lambda, k.norm_sq, k.rel_error)).collect::<Vec<_>>(),
            &rows.iter().map(|m| (m.n, m.norm_sq, m.rel_error)).collect::<Vec<_>>(),
        ),
    };
    Ok(Artifact { body, status: Status::Determinate })
}

fn csv_err(e: csv::Error) -> HbError {
    HbError::Config(format!("writing CSV: {e}"))
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String, HbError> {
    let bytes = w.into_inner().map_err(|e| HbError::Config(format!("writing CSV: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analysis {
    Direct,
    Reverse,
    Equivalence,
}

fn render_report(rep: &AnalysisReport, format: Format, verb: &str) -> Result<String, HbError> {
    Ok(match format {
        Format::Json => json_text(rep),
        Format::Text => text::report(rep),
        Format::Csv => return Err(no_csv(verb)),
    })
}

pub fn analyze(kind: Analysis, b: &Path, mu: &Path, res: &Resolution, format: Format) -> Result<Artifact, HbError> {
    let symbol = io::load_symbol(b)?;
    let measure = io::load_measure(mu)?;
    let cfg = config(res);
    match kind {
        Analysis::Direct => {
            let rep = direct_carleson_verdict(&mate_of(&symbol, res)?, &measure, &cfg)?;
            Ok(Artifact { body: render_report(&rep, format, "analyze-direct")?, status: report_status(&rep) })
        }
        Analysis::Reverse => {
            let rep = match mate_of(&symbol, res) {
                Ok(pair) => reverse_carleson_verdict(&pair, &measure, &cfg)?,
                Err(HbError::ExtremeDegenerate(_)) => reverse_carleson_extreme(&symbol, &measure)?,
                Err(e) => return Err(e),
            };
            Ok(Artifact { body: render_report(&rep, format, "analyze-reverse")?, status: report_status(&rep) })
        }
        Analysis::Equivalence => {
            let pair = mate_of(&symbol, res)?;
            let eq = norm_equivalence_verdict(&pair, &measure, &cfg)?;
            let direct = direct_carleson_verdict(&pair, &measure, &cfg)?;
            let reverse = reverse_carleson_verdict(&pair, &measure, &cfg)?;
            // Equivalent norms give both embeddings.
            let broken =
                eq.verdict == Verdict::Pass && (direct.verdict == Verdict::Fail || reverse.verdict == Verdict::Fail);
            let inconsistent = broken || eq.inconsistent() || reverse.inconsistent();
            let status = if inconsistent { Status::Inconsistent } else { verdict_status(eq.verdict) };
            let body = match format {
                Format::Json => json_text(&json!({
                    "analysis": "norm_equivalence_group",
                    "verdict": eq.verdict,
                    "inconsistent": inconsistent,
                    "equivalence": eq,
                    "direct": direct,
                    "reverse": reverse,
                })),
                Format::Text => {
                    let mut s = text::report(&eq);
                    s.push_str(&text::report(&direct));
                    s.push_str(&text::report(&reverse));
                    s.push_str(&format!("inconsistent: {inconsistent}\n"));
                    s
                }
                Format::Csv => return Err(no_csv("analyze-equivalence")),
            };
            Ok(Artifact { body, status })
        }
    }
}

/// Boundary weight for `a2`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum WeightSpec {
    /// `scale |e^{it} - e^{i angle}|^exponent`.
    Power {
        exponent: f64,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        angle: f64,
    },
    Grid(Vec<f64>),
    Constant(f64),
}

fn one() -> f64 {
    1.0
}

pub fn a2(weight: &Path, alpha: Option<f64>, res: &Resolution, format: Format) -> Result<Artifact, HbError> {
    let spec: WeightSpec = io::load_json(weight, "weight")?;
    let w: Arc<dyn BoundaryFunction> = match (spec, alpha) {
        (WeightSpec::Power { exponent, scale, angle }, a) => {
            let exponent = a.map_or(exponent, |a| 2.0 * a);
            if !exponent.is_finite() || scale <= 0.0 || !scale.is_finite() {
                return Err(HbError::Domain(format!(
                    "power weight needs finite exponent and positive scale, got {exponent}, {scale}"
                )));
            }
            Arc::new(PowerWeight::new(scale, exponent, angle))
        }
        (_, Some(_)) => return Err(HbError::Config("--alpha applies to power weights only".into())),
        (WeightSpec::Grid(v), None) => {
            if v.is_empty() || v.iter().any(|x| *x <= 0.0 || !x.is_finite()) {
                return Err(HbError::Domain("grid weight needs finite positive values".into()));
            }
            Arc::new(GridDensity::new(v))
        }
        (WeightSpec::Constant(c), None) => Arc::new(Constant(c)),
    };
    let r = a2_check(w.clone(), res.depth)?;
    let mut rep = AnalysisReport::new("a2").subject("weight", w.label());
    rep.constant("sup", r.sup);
    rep.constant("growth_exponent", r.growth_exponent);
    rep.witness("arc", json!(r.witness));
    rep.condition(
        "a2",
        Condition::new(r.verdict, "sup_I (avg_I w)(avg_I 1/w) < inf")
            .with("sup", num(r.sup))
            .with("growth_exponent", num(r.growth_exponent))
            .with("running", json!(r.levels.iter().map(|l| num(l.running)).collect::<Vec<_>>()))
            .with("non_integrable", json!(r.non_integrable))
            .with("resolution", json!([r.depth.saturating_sub(1), r.depth])),
    );
    rep.verdict = r.verdict;
    rep.diagnostic("depth", json!(res.depth));
    Ok(Artifact { body: render_report(&rep, format, "a2")?, status: verdict_status(rep.verdict) })
}

pub fn corona(b: &Path, res: &Resolution, format: Format) -> Result<Artifact, HbError> {
    let symbol = io::load_symbol(b)?;
    let pair = mate_of(&symbol, res)?;
    let c = corona_check(&pair, res.depth, res.angles as usize)?;
    let mut rep = AnalysisReport::new("corona").subject("b", symbol.label());
    rep.constant("inf", c.inf);
    rep.witness("point", cx(c.witness));
    rep.condition(
        "corona",
        Condition::new(c.verdict, "inf (|a| + |b|) > 0")
            .with("inf", num(c.inf))
            .with("level_minima", json!(c.levels.iter().map(|l| num(l.min)).collect::<Vec<_>>()))
            .with("unresolved_levels", json!(c.unresolved_levels)),
    );
    rep.verdict = c.verdict;
    rep.diagnostic("depth", json!(res.depth));
    Ok(Artifact { body: render_report(&rep, format, "corona")?, status: verdict_status(rep.verdict) })
}

pub fn scenario_list(format: Format) -> Result<Artifact, HbError> {
    let cat = catalog();
    let body = match format {
        Format::Json => json_text(&cat),
        Format::Text => text::catalog(&cat),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["scenario", "param", "default", "min", "max"]).map_err(csv_err)?;
            for e in &cat {
                if e.params.is_empty() {
                    w.write_record([e.name, "", "", "", ""]).map_err(csv_err)?;
                }
                for p in &e.params {
                    w.write_record([
                        e.name,
                        p.name,
                        &p.default.to_string(),
                        &p.range.0.to_string(),
                        &p.range.1.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
            csv_string(w)?
        }
    };
    Ok(Artifact { body, status: Status::Determinate })
}

pub fn scenario_run(
    name: &str,
    params: &[(String, f64)],
    res: &Resolution,
    format: Format,
) -> Result<Artifact, HbError> {
    let mut p = Params::new();
    for (k, v) in params {
        if p.insert(k.clone(), *v).is_some() {
            return Err(HbError::Config(format!("parameter `{k}` given twice")));
        }
    }
    let grid = res.grid_exponent.unwrap_or_else(|| default_grid_exponent(name, res.depth));
    let scenario = build_with_grid(name, &p, grid)?;
    let outcome = scenario.run(&config(res));
    let mismatched: Vec<_> = outcome.checks.iter().filter(|c| !c.matched).collect();
    let status = if mismatched.is_empty() {
        Status::Determinate
    } else if mismatched.iter().any(|c| c.observed == Outcome::Error) {
        Status::Error
    } else if mismatched.iter().all(|c| c.observed == Outcome::Undetermined) {
        Status::Undetermined
    } else {
        Status::Inconsistent
    };
    let body = match format {
        Format::Json => json_text(&outcome),
        Format::Text => text::scenario(&outcome),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["scenario", "check", "expected", "observed", "matched"]).map_err(csv_err)?;
            for c in &outcome.checks {
                w.write_record([
                    outcome.scenario.as_str(),
                    &text::tag(&c.check),
                    &text::tag(&c.expected),
                    &text::tag(&c.observed),
                    &c.matched.to_string(),
                ])
                .map_err(csv_err)?;
            }
            csv_string(w)?
        }
    };
    Ok(Artifact { body, status })
}

pub fn scan_dump(
    mu: &Path,
    b: Option<&Path>,
    weight: ScanWeight,
    side: ScanSide,
    res: &Resolution,
    format: Format,
) -> Result<Artifact, HbError> {
    let measure = io::load_measure(mu)?;
    let nu = match (weight, b) {
        (ScanWeight::None, _) => measure,
        (_, None) => return Err(HbError::Config("weighted scans need --b".into())),
        (w, Some(b)) => {
            let pair = mate_of(&io::load_symbol(b)?, res)?;
            let dw: Arc<dyn DiskWeight> = match w {
                ScanWeight::Mate => Arc::new(MateWeight::new(&pair)),
                _ => Arc::new(ComplementWeight::new(&pair)),
            };
            weight_measure(&measure, &dw)?
        }
    };
    let scan = match side {
        ScanSide::Sup => carleson_sup_scan(&nu, res.depth)?,
        ScanSide::Inf => reverse_inf_scan(&nu, res.depth)?,
    };
    let body = match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_scan_csv(&scan, &mut buf)?;
            String::from_utf8(buf).expect("CSV output is UTF-8")
        }
        Format::Json => json_text(&scan),
        Format::Text => text::scan(nu.label(), &scan),
    };
    Ok(Artifact { body, status: verdict_status(scan.verdict) })
}
