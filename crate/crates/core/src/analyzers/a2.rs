//! Paired-average scans: the `A_2` product of a weight and the two-weight
//! necessary condition.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;
use std::sync::Arc;

use super::scan::{growth_fit, level_trend, scan_arcs, ArcValue, LevelStat};
use super::{check_depth, Verdict};
use crate::boundary::functions::{BoundaryFunction, Reciprocal};
use crate::error::{HbError, Result};
use crate::measure::ArcWindow;
use crate::numeric::Trend;

/// Sup over arcs of `(avg_I f)(avg_I g)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedScan {
    pub depth: u32,
    pub sup: f64,
    pub witness: ArcWindow,
    pub levels: Vec<LevelStat>,
    /// Excision radius (radians) used at each level around points where
    /// `f` or `g` is not integrable.
    pub excision: Vec<f64>,
    /// Points where one of the factors is not locally integrable; any arc
    /// through them has an infinite product.
    pub non_integrable: Vec<f64>,
    pub growth_exponent: f64,
    pub trend: Trend,
    pub verdict: Verdict,
    #[serde(skip)]
    pub rows: Vec<ArcValue>,
}

pub type A2Result = PairedScan;

fn excision(level: u32) -> f64 {
    TAU * 0.5f64.powi(level as i32) / 64.0
}

fn product(f: &dyn BoundaryFunction, g: &dyn BoundaryFunction, w: &ArcWindow, eps: f64) -> f64 {
    let (a, b) = w.bounds();
    let fa = f.arc_integral_excised(a, b, eps) / w.length;
    let ga = g.arc_integral_excised(a, b, eps) / w.length;
    if fa == 0.0 || ga == 0.0 {
        0.0
    } else {
        fa * ga
    }
}

/// `(avg_I f)(avg_I g)` on the arcs `[a, b]` (radians, unwrapped), without
/// excision.
pub fn a2_products_on_arcs(f: &dyn BoundaryFunction, g: &dyn BoundaryFunction, arcs: &[(f64, f64)]) -> Vec<f64> {
    arcs.par_iter()
        .map(|&(a, b)| {
            let len = (b - a) / TAU;
            let fa = f.arc_integral(a, b) / len;
            let ga = g.arc_integral(a, b) / len;
            fa * ga
        })
        .collect()
}

fn check_nonnegative(f: &dyn BoundaryFunction, strict: bool) -> Result<()> {
    let n = 4096;
    for j in 0..n {
        let t = -std::f64::consts::PI + TAU * (j as f64 + 0.5) / n as f64;
        let v = f.value(t);
        let bad = if strict { !(v > 0.0) } else { !(v >= 0.0) };
        if bad {
            return Err(HbError::Domain(format!("{} is {v} at angle {t}", f.label())));
        }
    }
    Ok(())
}

fn paired_scan(f: Arc<dyn BoundaryFunction>, g: Arc<dyn BoundaryFunction>, depth: u32) -> Result<PairedScan> {
    check_depth(depth)?;
    let mut non_integrable: Vec<f64> =
        f.singularities().into_iter().chain(g.singularities()).filter(|s| !s.integrable()).map(|s| s.angle).collect();
    non_integrable.sort_by(|a, b| a.partial_cmp(b).unwrap());
    non_integrable.dedup();

    let all: Vec<(u32, ArcWindow)> = (1..=depth).flat_map(|l| scan_arcs(l).into_iter().map(move |a| (l, a))).collect();
    let base: Vec<f64> = all.par_iter().map(|(_, w)| product(f.as_ref(), g.as_ref(), w, 0.0)).collect();
    if let Some(i) = base.iter().position(|v| v.is_nan()) {
        return Err(HbError::Numerical { message: format!("A2 product NaN on {:?}", all[i].1), residual: f64::NAN });
    }
    let infinite: Vec<usize> = (0..all.len()).filter(|&i| base[i].is_infinite()).collect();

    let mut levels: Vec<LevelStat> = Vec::new();
    let mut rows = Vec::with_capacity(all.len());
    let mut excisions = Vec::new();
    let mut start = 0;
    let mut finite_best: Option<(f64, ArcWindow)> = None;
    for level in 1..=depth {
        let eps = excision(level);
        excisions.push(eps);
        let end = start + all[start..].iter().take_while(|(l, _)| *l == level).count();
        let mut level_best: Option<(f64, ArcWindow)> = None;
        let bump = |best: &mut Option<(f64, ArcWindow)>, v: f64, w: ArcWindow| {
            if best.is_none_or(|(b, _)| v > b) {
                *best = Some((v, w));
            }
        };
        let excised: Vec<(usize, f64)> = infinite
            .par_iter()
            .filter(|&&i| i < end)
            .map(|&i| (i, product(f.as_ref(), g.as_ref(), &all[i].1, eps)))
            .collect();
        for i in start..end {
            let v = match excised.iter().find(|(j, _)| *j == i) {
                Some(&(_, v)) => v,
                None => base[i],
            };
            bump(&mut level_best, v, all[i].1);
            if base[i].is_finite() {
                bump(&mut finite_best, v, all[i].1);
            }
            rows.push(ArcValue { level, arc_center: all[i].1.center, arc_length: all[i].1.length, value: v });
        }
        let mut running = finite_best;
        for &(i, v) in &excised {
            bump(&mut running, v, all[i].1);
        }
        let (extreme, _) = level_best.expect("nonempty level");
        let (run, witness) = running.expect("nonempty scan");
        levels.push(LevelStat { level, arc_length: all[start].1.length, extreme, running: run, witness });
        start = end;
    }
    let last = *levels.last().expect("depth >= 1");
    let trend = level_trend(&levels.iter().map(|l| l.running).collect::<Vec<_>>());
    let verdict = if !non_integrable.is_empty() {
        Verdict::Fail
    } else {
        match trend {
            Trend::Convergent => Verdict::Pass,
            Trend::Divergent => Verdict::Fail,
            Trend::Undetermined => Verdict::Undetermined,
        }
    };
    Ok(PairedScan {
        depth,
        sup: last.running,
        witness: last.witness,
        growth_exponent: growth_fit(&levels),
        levels,
        excision: excisions,
        non_integrable,
        trend,
        verdict,
        rows,
    })
}

/// `sup_I (avg_I w)(avg_I 1/w)`. A non-integrable `1/w` fails outright; the
/// growth exponent is then fitted on arcs with shrinking excisions.
pub fn a2_check(w: Arc<dyn BoundaryFunction>, depth: u32) -> Result<A2Result> {
    check_nonnegative(w.as_ref(), true)?;
    let inv: Arc<dyn BoundaryFunction> = Arc::new(Reciprocal(w.clone()));
    paired_scan(w, inv, depth)
}

/// `sup_I (avg_I h)(avg_I w)`. A bounded sup is necessary, not sufficient,
/// for the two-weight estimate.
pub fn two_weight_necessary(
    h: Arc<dyn BoundaryFunction>,
    w: Arc<dyn BoundaryFunction>,
    depth: u32,
) -> Result<PairedScan> {
    check_nonnegative(h.as_ref(), false)?;
    check_nonnegative(w.as_ref(), false)?;
    paired_scan(h, w, depth)
}
