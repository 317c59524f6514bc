//! `inf_D (|a| + |b|)` on a log-radial grid.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

use super::scan::level_trend;
use super::{check_depth, Verdict};
use crate::boundary::analytic::AnalyticFn;
use crate::boundary::modulus::ModPart;
use crate::error::Result;
use crate::hb::PythagoreanPair;
use crate::numeric::{wrap_angle, Trend};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoronaLevel {
    pub level: u32,
    pub radius: f64,
    pub min: f64,
    pub witness: Complex64,
    pub running: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoronaResult {
    pub inf: f64,
    pub witness: Complex64,
    pub levels: Vec<CoronaLevel>,
    /// Levels skipped because their radius exceeds what the mate grid
    /// resolves.
    pub unresolved_levels: Vec<u32>,
    pub trend: Trend,
    pub verdict: Verdict,
}

fn critical_angles(pair: &PythagoreanPair) -> Vec<f64> {
    let mut out: Vec<f64> = pair.b().modulus().singularities(ModPart::ComplementSq).iter().map(|s| s.angle).collect();
    if let AnalyticFn::InnerOuter { inner, .. } = pair.b_fn() {
        out.extend(inner.zeros().iter().map(|z| z.0.arg()));
    }
    out
}

/// Minimum of `|a| + |b|` over radii `1 - 2^{-j}`, `j = 0..=depth`
/// (`j = 0` is the origin), on `angles` uniform angles plus the angles of
/// the zeros of `a` and of the inner factor of `b`. Fails when the running
/// minimum keeps shrinking.
pub fn corona_check(pair: &PythagoreanPair, depth: u32, angles: usize) -> Result<CoronaResult> {
    check_depth(depth)?;
    let mut ts: Vec<f64> = (0..angles.max(1)).map(|k| wrap_angle(TAU * k as f64 / angles.max(1) as f64)).collect();
    ts.extend(critical_angles(pair));
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let origin = pair.a_fn().eval(Complex64::new(0.0, 0.0)).norm() + pair.b_fn().eval(Complex64::new(0.0, 0.0)).norm();
    let mut running = (origin, Complex64::new(0.0, 0.0));
    let mut levels = Vec::new();
    let mut unresolved = Vec::new();
    for j in 1..=depth {
        let r = 1.0 - 0.5f64.powi(j as i32);
        if pair.check_resolved(Complex64::new(r, 0.0)).is_err() {
            unresolved.push(j);
            continue;
        }
        let vals: Vec<(f64, Complex64)> = ts
            .par_iter()
            .map(|&t| {
                let z = Complex64::from_polar(r, t);
                (pair.a_fn().eval(z).norm() + pair.b_fn().eval(z).norm(), z)
            })
            .collect();
        let (min, witness) =
            vals.iter().fold((f64::INFINITY, Complex64::new(0.0, 0.0)), |acc, &v| if v.0 < acc.0 { v } else { acc });
        if min < running.0 {
            running = (min, witness);
        }
        levels.push(CoronaLevel { level: j, radius: r, min, witness, running: running.0 });
    }
    let inv: Vec<f64> = levels.iter().map(|l| 1.0 / l.running).collect();
    let trend = level_trend(&inv);
    let verdict = match trend {
        Trend::Convergent if running.0 > 0.0 => Verdict::Pass,
        Trend::Divergent => Verdict::Fail,
        _ => Verdict::Undetermined,
    };
    Ok(CoronaResult { inf: running.0, witness: running.1, levels, unresolved_levels: unresolved, trend, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hb::{pythagorean_mate, MateConfig, SymbolB};

    #[test]
    fn half_sum_is_a_corona_pair() {
        let pair = pythagorean_mate(&SymbolB::half_sum(), &MateConfig::default()).unwrap();
        let c = corona_check(&pair, 12, 64).unwrap();
        assert!(c.inf >= 1.0 - 1e-12);
        assert!(c.inf <= 1.0 + 1e-9);
        assert_eq!(c.verdict, Verdict::Pass);
    }

    #[test]
    fn zero_symbol() {
        let pair = pythagorean_mate(&SymbolB::constant(0.0).unwrap(), &MateConfig::default()).unwrap();
        let c = corona_check(&pair, 6, 16).unwrap();
        assert!((c.inf - 1.0).abs() < 1e-12);
    }
}
