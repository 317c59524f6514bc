//! Window scans `nu(S(I)) / m(I)` over dyadic and half-shifted dyadic arcs.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use std::io::Write;

use super::{check_depth, Verdict, STABLE_REL};
use crate::error::{HbError, Result};
use crate::measure::{ArcWindow, DiskMeasure};
use crate::numeric::{ls_slope, Trend, GROWTH_FACTOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanKind {
    Sup,
    Inf,
}

/// One scanned arc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcValue {
    pub level: u32,
    pub arc_center: f64,
    pub arc_length: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelStat {
    pub level: u32,
    pub arc_length: f64,
    /// Extreme over the arcs of this level.
    pub extreme: f64,
    /// Extreme over all levels up to this one.
    pub running: f64,
    pub witness: ArcWindow,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub kind: ScanKind,
    pub depth: u32,
    pub value: f64,
    pub witness: ArcWindow,
    pub levels: Vec<LevelStat>,
    /// Slope of `log(running extreme)` against `log m(I)` over the finer half
    /// of the levels.
    pub growth_exponent: f64,
    pub trend: Trend,
    pub verdict: Verdict,
    #[serde(skip)]
    pub rows: Vec<ArcValue>,
}

/// Dyadic arcs of normalized length `2^{-level}` and their half-shifted
/// copies.
pub fn scan_arcs(level: u32) -> Vec<ArcWindow> {
    let n = 1usize << level;
    let len = 1.0 / n as f64;
    let mut out = Vec::with_capacity(2 * n);
    for j in 0..n {
        let start = -PI + TAU * j as f64 * len;
        out.push(ArcWindow { center: crate::numeric::wrap_angle(start + PI * len), length: len });
        out.push(ArcWindow { center: crate::numeric::wrap_angle(start), length: len });
    }
    out
}

/// Trend of a running extreme, oriented so that growth means failure.
///
/// Divergent if a value is infinite or three consecutive level-to-level
/// factors are all at least [`GROWTH_FACTOR`]; convergent if the last relative change
/// is below [`STABLE_REL`].
pub fn level_trend(values: &[f64]) -> Trend {
    if values.iter().any(|v| v.is_infinite()) {
        return Trend::Divergent;
    }
    if values.iter().any(|v| v.is_nan()) || values.len() < 2 {
        return Trend::Undetermined;
    }
    let n = values.len();
    if values.windows(4).any(|r| r.windows(2).all(|w| w[0] > 0.0 && w[1] >= GROWTH_FACTOR * w[0])) {
        return Trend::Divergent;
    }
    let (prev, last) = (values[n - 2], values[n - 1]);
    if (last - prev).abs() <= STABLE_REL * prev.abs() {
        return Trend::Convergent;
    }
    Trend::Undetermined
}

pub(crate) fn growth_fit(levels: &[LevelStat]) -> f64 {
    let from = levels.len() / 2;
    let (xs, ys): (Vec<f64>, Vec<f64>) = levels[from..]
        .iter()
        .filter(|l| l.running > 0.0 && l.running.is_finite())
        .map(|l| (l.arc_length.ln(), l.running.ln()))
        .unzip();
    ls_slope(&xs, &ys)
}

/// Scan `f` over the arc family of levels `1..=depth`.
pub(crate) fn scan_with<F>(kind: ScanKind, depth: u32, f: F) -> Result<ScanResult>
where
    F: Fn(&ArcWindow) -> f64 + Sync,
{
    check_depth(depth)?;
    let better = |x: f64, y: f64| match kind {
        ScanKind::Sup => x > y,
        ScanKind::Inf => x < y,
    };
    let mut rows = Vec::new();
    let mut levels: Vec<LevelStat> = Vec::new();
    for level in 1..=depth {
        let arcs = scan_arcs(level);
        let vals: Vec<f64> = arcs.par_iter().map(&f).collect();
        let mut best = 0;
        for (i, v) in vals.iter().enumerate() {
            if v.is_nan() {
                return Err(HbError::Numerical {
                    message: format!("window value NaN on {:?}", arcs[i]),
                    residual: f64::NAN,
                });
            }
            if better(*v, vals[best]) {
                best = i;
            }
        }
        let extreme = vals[best];
        let (running, witness) = match levels.last() {
            Some(prev) if !better(extreme, prev.running) => (prev.running, prev.witness),
            _ => (extreme, arcs[best]),
        };
        levels.push(LevelStat { level, arc_length: arcs[0].length, extreme, running, witness });
        rows.extend(arcs.iter().zip(&vals).map(|(a, &v)| ArcValue {
            level,
            arc_center: a.center,
            arc_length: a.length,
            value: v,
        }));
    }
    let last = *levels.last().expect("depth >= 1");
    let oriented: Vec<f64> = levels
        .iter()
        .map(|l| match kind {
            ScanKind::Sup => l.running,
            ScanKind::Inf => 1.0 / l.running,
        })
        .collect();
    let trend = level_trend(&oriented);
    let verdict = match trend {
        Trend::Convergent => Verdict::Pass,
        Trend::Divergent => Verdict::Fail,
        Trend::Undetermined => Verdict::Undetermined,
    };
    Ok(ScanResult {
        kind,
        depth,
        value: last.running,
        witness: last.witness,
        growth_exponent: growth_fit(&levels),
        levels,
        trend,
        verdict,
        rows,
    })
}

/// `sup_I nu(S(I)) / m(I)`; passes when the running sup stabilizes.
pub fn carleson_sup_scan(nu: &DiskMeasure, depth: u32) -> Result<ScanResult> {
    scan_with(ScanKind::Sup, depth, |w| nu.window_mass(w) / w.length)
}

/// `inf_I nu(S(I)) / m(I)`; passes when the running inf stabilizes at a
/// positive value.
pub fn reverse_inf_scan(nu: &DiskMeasure, depth: u32) -> Result<ScanResult> {
    scan_with(ScanKind::Inf, depth, |w| nu.window_mass(w) / w.length)
}

/// CSV with columns `level,arc_center,arc_length,value`.
pub fn write_scan_csv<W: Write>(scan: &ScanResult, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    for r in &scan.rows {
        w.serialize(r).map_err(|e| HbError::Config(format!("writing CSV: {e}")))?;
    }
    w.flush().map_err(|e| HbError::Config(format!("writing CSV: {e}")))
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(true).from_writer(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn family_covers_the_circle() {
        let arcs = scan_arcs(3);
        assert_eq!(arcs.len(), 16);
        let total: f64 = arcs.iter().step_by(2).map(|a| a.length).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(arcs.iter().any(|a| a.center == 0.0));
    }

    #[test]
    fn lebesgue_is_flat() {
        let m = DiskMeasure::lebesgue();
        let s = carleson_sup_scan(&m, 8).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
        assert!(s.growth_exponent.abs() < 1e-9);
        assert_eq!(s.verdict, Verdict::Pass);
        let r = reverse_inf_scan(&m, 8).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn interior_atom_is_not_reverse_carleson() {
        let nu = DiskMeasure::zero().with_disk_atom(Complex64::new(0.3, 0.2), 1.0).unwrap();
        let r = reverse_inf_scan(&nu, 6).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn trend_rules() {
        assert_eq!(level_trend(&[1.0, 1.5, 2.0, 2.6, 3.3]), Trend::Divergent);
        assert_eq!(level_trend(&[1.0, 2.0, 2.01]), Trend::Convergent);
        assert_eq!(level_trend(&[1.0, 1.2, 1.4]), Trend::Undetermined);
        assert_eq!(level_trend(&[1.0, f64::INFINITY]), Trend::Divergent);
        assert_eq!(level_trend(&[1.0, 1.3, 1.7, 2.2, 2.7, 3.3]), Trend::Divergent);
    }

    #[test]
    fn csv_has_the_documented_columns() {
        let s = carleson_sup_scan(&DiskMeasure::lebesgue(), 2).unwrap();
        let mut buf = Vec::new();
        write_scan_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "level,arc_center,arc_length,value");
        assert_eq!(text.lines().count(), 1 + 4 + 8);
    }
}
