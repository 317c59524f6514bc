//! Refutations: isometric measures, sampling sequences, and the radial
//! Poisson limit of `|q|^2`.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;
use std::f64::consts::TAU;

use super::reverse::reverse_carleson_verdict;
use super::{AnalysisConfig, AnalysisReport, Verdict};
use crate::error::{HbError, Result};
use crate::hb::{taylor_b_over_a, H2Verdict, PythagoreanPair};
use crate::measure::DiskMeasure;
use crate::numeric::quad::compensated_sum;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum IsometryCertificate {
    /// `b = c`: `H(b) = H^2` with `||f||_b^2 = ||f||^2 / (1 - |c|^2)`, and the
    /// only isometric measure is `m / (1 - |c|^2)`.
    Constant { value: Complex64, lebesgue_scale: f64 },
    /// An isometric `mu` would force `sum_{j > n} |c_j|^2 = 0` for every `n`;
    /// `c_index` is a nonzero coefficient of `b/a` that contradicts this.
    Nonconstant { index: usize, coefficient: Complex64, modulus_sq: f64 },
}

/// Certificate that no measure is isometric for `H(b)` (or the constant
/// case, where only a multiple of `m` is).
pub fn isometry_refutation(pair: &PythagoreanPair, bound: usize) -> Result<IsometryCertificate> {
    let (b, _) = pair.series(64);
    if b[1..64].iter().all(|c| c.norm() < 1e-12) {
        let c = b[0];
        return Ok(IsometryCertificate::Constant { value: c, lebesgue_scale: 1.0 / (1.0 - c.norm_sqr()) });
    }
    let ba = taylor_b_over_a(pair, bound)?;
    if ba.verdict != H2Verdict::InH2 {
        return Err(HbError::Unsupported(format!("b/a in H^2 is {:?}", ba.verdict)));
    }
    for (n, c) in ba.coeffs.iter().enumerate().take(bound + 1) {
        if c.norm_sqr() > 1e-10 {
            return Ok(IsometryCertificate::Nonconstant { index: n, coefficient: *c, modulus_sq: c.norm_sqr() });
        }
    }
    Err(HbError::Resolution(format!("all coefficients of b/a up to {bound} are below 1e-5; raise the bound")))
}

/// `mu = sum ||k^b_{lambda_n}||_b^{-2} delta_{lambda_n}` must fail the
/// reverse Carleson test: it has no boundary density.
pub fn sampling_refutation(
    pair: &PythagoreanPair,
    sequence: &[Complex64],
    cfg: &AnalysisConfig,
) -> Result<AnalysisReport> {
    let m = pair.b().modulus();
    let n = 4096;
    let free = (0..n)
        .filter(|&j| {
            let t = -std::f64::consts::PI + TAU * (j as f64 + 0.5) / n as f64;
            m.modulus_sq(t, 0.0).sqrt() < 1.0 - 1e-6
        })
        .count();
    if free == 0 {
        return Err(HbError::Unsupported(
            "b looks inner on the boundary grid; the refutation needs a non-inner b".into(),
        ));
    }
    let mut mu = DiskMeasure::zero();
    let mut dropped = Vec::new();
    for &l in sequence {
        if !(l.norm() < 1.0 - 1e-12) {
            dropped.push(l);
            continue;
        }
        let b = pair.b_fn().eval(l);
        let k = (1.0 - b.norm_sqr()) / (1.0 - l.norm_sqr());
        if !(k > 0.0) {
            dropped.push(l);
            continue;
        }
        mu = mu.with_disk_atom(l, 1.0 / k)?;
    }
    let mu = mu.with_label("sampling measure");
    let mut rep = reverse_carleson_verdict(pair, &mu, cfg)?;
    rep.analysis = "sampling_refutation".into();
    rep.diagnostic("atoms", json!(mu.disk_atoms().len()));
    if !dropped.is_empty() {
        rep.diagnostic(
            "truncation_warning",
            json!(format!("{} points too close to the circle were dropped", dropped.len())),
        );
    }
    rep.diagnostic(
        "refutation",
        json!(if rep.conditions.get("MainThm.4").map(|c| c.verdict) == Some(Verdict::Fail) {
            "h = 0 on the circle, so the sequence is not sampling"
        } else {
            "no refutation"
        }),
    );
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonRow {
    pub r: f64,
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonTable {
    pub zeta: f64,
    pub target: f64,
    pub rows: Vec<PoissonRow>,
}

/// `int |q(r xi)|^2 P_{r zeta}(xi) dm(xi)` for each `r`, by the periodic
/// trapezoid rule on `n` points, against the target `|q(zeta)|^2`.
pub fn poisson_square_limit_check<F>(q: F, zeta: f64, radii: &[f64], n: usize) -> Result<PoissonTable>
where
    F: Fn(Complex64) -> Complex64,
{
    let target = q(Complex64::from_polar(1.0, zeta)).norm_sqr();
    let mut rows = Vec::new();
    for &r in radii {
        if !(0.0..1.0).contains(&r) {
            return Err(HbError::Domain(format!("radius {r} not in [0, 1)")));
        }
        if (1.0 - r) * (n as f64) < 8.0 {
            return Err(HbError::Resolution(format!("{n} points do not resolve the Poisson kernel at r = {r}")));
        }
        let w = Complex64::from_polar(r, zeta);
        let value = compensated_sum((0..n).map(|j| {
            let xi = Complex64::from_polar(1.0, zeta + TAU * j as f64 / n as f64);
            let p = (1.0 - r * r) / (xi - w).norm_sqr();
            q(xi * r).norm_sqr() * p
        })) / n as f64;
        rows.push(PoissonRow { r, value, error: (value - target).abs() });
    }
    Ok(PoissonTable { zeta, target, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hb::{pythagorean_mate, MateConfig, SymbolB};

    #[test]
    fn constant_branch() {
        let pair = pythagorean_mate(&SymbolB::constant(0.5).unwrap(), &MateConfig::default()).unwrap();
        match isometry_refutation(&pair, 16).unwrap() {
            IsometryCertificate::Constant { lebesgue_scale, .. } => assert!((lebesgue_scale - 4.0 / 3.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn poisson_of_identity() {
        let t = poisson_square_limit_check(|z| z, 0.0, &[0.9, 0.99, 0.999], 1 << 14).unwrap();
        for row in &t.rows {
            assert!((row.value - row.r * row.r).abs() < 1e-6);
        }
        let c = poisson_square_limit_check(|_| Complex64::new(0.3, 0.4), 1.0, &[0.5], 256).unwrap();
        assert!((c.rows[0].value - 0.25).abs() < 1e-14);
    }

    #[test]
    fn under_resolved_radius_is_an_error() {
        assert!(matches!(poisson_square_limit_check(|z| z, 0.0, &[0.9999], 1024), Err(HbError::Resolution(_))));
    }
}
