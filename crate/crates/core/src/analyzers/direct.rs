//! Direct Carleson embeddings and two-sided norm equivalence.

use serde_json::json;
use std::sync::Arc;

use super::a2::a2_check;
use super::corona::corona_check;
use super::scan::{carleson_sup_scan, reverse_inf_scan, ScanResult};
use super::{num, AnalysisConfig, AnalysisReport, Condition, Verdict};
use crate::boundary::modulus::{ModulusFn, ModulusKind};
use crate::error::{HbError, Result};
use crate::hb::{rational_falpha_decompose, Extremeness, PythagoreanPair};
use crate::measure::{weight_measure, DiskMeasure, DiskWeight, MateWeight};

fn scan_condition(statement: &str, s: &ScanResult) -> Condition {
    let n = s.levels.len();
    Condition::new(s.verdict, statement)
        .with("value", num(s.value))
        .with("growth_exponent", num(s.growth_exponent))
        .with("running", json!(s.levels.iter().map(|l| num(l.running)).collect::<Vec<_>>()))
        .with("witness", json!(s.witness))
        .with("resolution", json!([n.saturating_sub(1), n]))
}

/// Whether `mu` is a Carleson measure for `H(b)`, read as whether `|a|^2 mu`
/// is a Carleson measure for `H^2`. The reading is exact for rational `b`; for
/// other symbols the same scans run and the verdict is labelled heuristic.
pub fn direct_carleson_verdict(
    pair: &PythagoreanPair,
    mu: &DiskMeasure,
    cfg: &AnalysisConfig,
) -> Result<AnalysisReport> {
    if pair.extremeness().verdict == Extremeness::Extreme {
        return Err(HbError::Unsupported("direct embeddings are analyzed for non-extreme b".into()));
    }
    let mut rep = AnalysisReport::new("direct_carleson").subject("b", pair.b().label()).subject("mu", mu.label());
    let w: Arc<dyn DiskWeight> = Arc::new(MateWeight::new(pair));
    let nu = weight_measure(mu, &w)?;
    let s_nu = carleson_sup_scan(&nu, cfg.depth)?;
    let s_mu = carleson_sup_scan(mu, cfg.depth)?;
    rep.constant("nu_window_sup", s_nu.value);
    rep.constant("mu_window_sup", s_mu.value);
    rep.constant("mu_growth_exponent", s_mu.growth_exponent);
    rep.witness("nu_sup_arc", json!(s_nu.witness));
    rep.witness("mu_sup_arc", json!(s_mu.witness));
    let mut hb = scan_condition("|a|^2 mu is a Carleson measure for H^2", &s_nu);
    if pair.b().is_rational() {
        match rational_falpha_decompose(pair, None, cfg.seed) {
            Ok(split) => {
                rep.diagnostic("falpha_split", json!(split));
            }
            Err(e) => {
                rep.diagnostic("falpha_split_error", json!(e.to_string()));
            }
        }
    } else {
        hb = hb.with_note("heuristic: b is not rational, the equivalence with the H^2 window test is not guaranteed");
    }
    rep.condition("hb_carleson", hb);
    rep.condition("h2_carleson", scan_condition("mu is a Carleson measure for H^2", &s_mu));
    rep.verdict = s_nu.verdict;
    rep.diagnostic("depth", json!(cfg.depth));
    Ok(rep)
}

/// Whether `||f||_b` and `||f||_mu` are equivalent: admissibility, corona,
/// `|a|^2` in `A_2`, and `|a|^2 mu` both Carleson and reverse Carleson for
/// `H^2` in the window sense.
pub fn norm_equivalence_verdict(
    pair: &PythagoreanPair,
    mu: &DiskMeasure,
    cfg: &AnalysisConfig,
) -> Result<AnalysisReport> {
    if pair.extremeness().verdict == Extremeness::Extreme {
        return Err(HbError::Unsupported("norm equivalence needs a non-extreme b".into()));
    }
    if mu.has_boundary_part() && !pair.b().is_admissible_for(mu.label()) {
        return Err(HbError::Admissibility(format!("b = {} for mu = {}", pair.b().label(), mu.label())));
    }
    let mut rep = AnalysisReport::new("norm_equivalence").subject("b", pair.b().label()).subject("mu", mu.label());
    rep.condition("a_admissible", Condition::new(Verdict::Pass, "a and b are declared mu-admissible"));

    let c = corona_check(pair, cfg.depth, cfg.angles)?;
    rep.constant("corona_inf", c.inf);
    rep.witness("corona_point", json!(c.witness));
    rep.condition(
        "corona",
        Condition::new(c.verdict, "inf (|a| + |b|) > 0")
            .with("inf", num(c.inf))
            .with("level_minima", json!(c.levels.iter().map(|l| num(l.min)).collect::<Vec<_>>()))
            .with("unresolved_levels", json!(c.unresolved_levels)),
    );

    let a_sq = ModulusFn::shared(pair.b().modulus(), ModulusKind::ComplementSq);
    let a2 = a2_check(a_sq, cfg.depth)?;
    rep.constant("a2_sup", a2.sup);
    rep.witness("a2_arc", json!(a2.witness));
    rep.condition(
        "a2",
        Condition::new(a2.verdict, "|a|^2 is an A2 weight")
            .with("sup", num(a2.sup))
            .with("growth_exponent", num(a2.growth_exponent))
            .with("non_integrable", json!(a2.non_integrable)),
    );

    let w: Arc<dyn DiskWeight> = Arc::new(MateWeight::new(pair));
    let nu = weight_measure(mu, &w)?;
    let sup = carleson_sup_scan(&nu, cfg.depth)?;
    let inf = reverse_inf_scan(&nu, cfg.depth)?;
    rep.constant("nu_window_sup", sup.value);
    rep.constant("nu_window_inf", inf.value);
    rep.witness("nu_inf_arc", json!(inf.witness));
    rep.condition(
        "two_sided_window",
        Condition::new(Verdict::all([sup.verdict, inf.verdict]), "0 < nu(S(I)) / m(I) < C for nu = |a|^2 mu")
            .with("sup", num(sup.value))
            .with("inf", num(inf.value)),
    );
    rep.verdict = Verdict::all(rep.conditions.values().map(|c| c.verdict));
    rep.diagnostic("depth", json!(cfg.depth));
    Ok(rep)
}
