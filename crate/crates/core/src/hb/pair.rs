//! Pythagorean mates `a` with `|a|^2 + |b|^2 = 1` on the circle.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, RwLock};

use super::symbol::{SymbolB, SymbolForm};
use crate::boundary::analytic::AnalyticFn;
use crate::boundary::modulus::{BoundaryModulus, ModPart, ModulusFn, ModulusKind};
use crate::boundary::outer::OuterFunction;
use crate::boundary::rational::{series_quotient, RationalFn};
use crate::error::{HbError, Result};
use crate::numeric::fft::next_pow2;
use crate::numeric::quad::compensated_sum;
use crate::numeric::{classify_growth, wrap_angle, Trend};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremeness {
    NonExtreme,
    Extreme,
    Undetermined,
}

/// Verdict on `int log(1 - |b|) = -infinity` with the midpoint sums behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremenessReport {
    pub verdict: Extremeness,
    /// `(N, midpoint sum of log(1 - |b|) / N)`.
    pub log_integrals: Vec<(usize, f64)>,
    pub trend: Trend,
}

/// Midpoint sums of `log(1 - |b|)` on `N = 2^10 .. 2^16` points.
pub fn classify_extremeness(b: &SymbolB) -> ExtremenessReport {
    let m = b.modulus();
    let log_integrals: Vec<(usize, f64)> = (10..=16)
        .map(|k| {
            let n = 1usize << k;
            let h = TAU / n as f64;
            let s = compensated_sum((0..n).map(|j| m.log_one_minus(wrap_angle((j as f64 + 0.5) * h), 0.0)));
            (n, s / n as f64)
        })
        .collect();
    let mags: Vec<f64> = log_integrals.iter().map(|p| p.1.abs()).collect();
    let trend = classify_growth(&mags);
    let verdict = if let Some(sf) = b.as_rational().map(|_| b.spectral_factor()) {
        // rational symbols: extreme exactly when inner
        if sf.is_none() {
            Extremeness::Extreme
        } else {
            Extremeness::NonExtreme
        }
    } else if m.unimodular_measure().is_some_and(|u| u > 0.0) {
        Extremeness::Extreme
    } else {
        match trend {
            Trend::Divergent => Extremeness::Extreme,
            Trend::Convergent => Extremeness::NonExtreme,
            Trend::Undetermined => Extremeness::Undetermined,
        }
    };
    ExtremenessReport { verdict, log_integrals, trend }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MateConfig {
    /// Boundary grid size for outer constructions.
    pub grid_size: usize,
}

impl Default for MateConfig {
    fn default() -> Self {
        Self { grid_size: 1 << 14 }
    }
}

impl MateConfig {
    pub fn with_grid_exponent(k: u32) -> Result<Self> {
        if !(8..=18).contains(&k) {
            return Err(HbError::Config(format!("grid exponent {k} not in [8, 18]")));
        }
        Ok(Self { grid_size: 1 << k })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MateDiagnostics {
    /// Max of `| |a|^2 + |b|^2 - 1 |` on the boundary grid.
    pub identity_error: f64,
    /// Max deviation of the reconstructed `|a|^2` from `1 - |b|^2` on grid
    /// points away from the zeros of `1 - |b|^2`.
    pub reconstruction_error: f64,
}

#[derive(Default)]
struct SeriesCache {
    b: Arc<Vec<Complex64>>,
    inv_a: Arc<Vec<Complex64>>,
}

pub struct PythagoreanPair {
    b: SymbolB,
    b_fn: AnalyticFn,
    a_fn: AnalyticFn,
    extremeness: ExtremenessReport,
    diagnostics: MateDiagnostics,
    grid_size: usize,
    cache: RwLock<SeriesCache>,
}

impl fmt::Debug for PythagoreanPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PythagoreanPair")
            .field("b", &self.b.label())
            .field("extremeness", &self.extremeness.verdict)
            .field("grid_size", &self.grid_size)
            .finish()
    }
}

/// Build the outer mate `a` of `b` with `a(0) > 0`.
pub fn pythagorean_mate(b: &SymbolB, cfg: &MateConfig) -> Result<PythagoreanPair> {
    let extremeness = classify_extremeness(b);
    if extremeness.verdict == Extremeness::Extreme {
        return Err(HbError::ExtremeDegenerate(format!(
            "log(1 - |b|^2) is not integrable for {}; no outer mate exists",
            b.label()
        )));
    }
    let n = cfg.grid_size;
    let (b_fn, a_fn) = match b.form() {
        SymbolForm::Rational(r) => {
            let sf = b.spectral_factor().expect("non-extreme rational symbol has a factor");
            let r0 = r.den().eval(Complex64::new(0.0, 0.0));
            let a = RationalFn::new_unreduced(sf.q.scale(r0.conj() / r0.norm()), r.den().clone())?;
            (AnalyticFn::Rational(r.clone()), AnalyticFn::Rational(a))
        }
        SymbolForm::OuterModulus(m) => {
            let (bo, ao) = outer_pair(m, n)?;
            (AnalyticFn::Outer(bo), AnalyticFn::Outer(ao))
        }
        SymbolForm::InnerTimesOuter { inner, outer } => {
            let (bo, ao) = outer_pair(outer, n)?;
            (AnalyticFn::InnerOuter { inner: inner.clone(), outer: bo }, AnalyticFn::Outer(ao))
        }
    };
    let diagnostics = diagnose(b, &b_fn, &a_fn, n);
    if diagnostics.identity_error > 1e-7 {
        return Err(HbError::Numerical {
            message: "mate identity |a|^2 + |b|^2 = 1 fails".into(),
            residual: diagnostics.identity_error,
        });
    }
    Ok(PythagoreanPair {
        b: b.clone(),
        b_fn,
        a_fn,
        extremeness,
        diagnostics,
        grid_size: n,
        cache: RwLock::new(SeriesCache::default()),
    })
}

fn outer_pair(m: &Arc<dyn BoundaryModulus>, n: usize) -> Result<(OuterFunction, OuterFunction)> {
    let a = OuterFunction::from_log_boundary(&ModulusFn::new(m.clone(), ModulusKind::LogComplementSq), n)?;
    let b = OuterFunction::from_log_boundary(&ModulusFn::new(m.clone(), ModulusKind::LogModulusSq), n)?;
    Ok((b, a))
}

fn diagnose(b: &SymbolB, b_fn: &AnalyticFn, a_fn: &AnalyticFn, n: usize) -> MateDiagnostics {
    let m = b.modulus();
    let h = TAU / n as f64;
    if b.is_rational() {
        let bv = b_fn.values_on_circle(1.0, n);
        let av = a_fn.values_on_circle(1.0, n);
        let identity_error =
            bv.iter().zip(&av).map(|(x, y)| (x.norm_sqr() + y.norm_sqr() - 1.0).abs()).fold(0.0, f64::max);
        return MateDiagnostics { identity_error, reconstruction_error: identity_error };
    }
    // outer moduli are declared exactly; the truncated series is only a
    // reconstruction of them
    let identity_error = (0..n)
        .into_par_iter()
        .map(|j| {
            let t = wrap_angle(j as f64 * h);
            (m.modulus_sq(t, 0.0) + m.complement_sq(t, 0.0) - 1.0).abs()
        })
        .reduce(|| 0.0, f64::max);
    let sing = m.singularities(ModPart::ComplementSq);
    let guard = 32.0 * h;
    let av = a_fn.values_on_circle(1.0, n);
    let reconstruction_error = (0..n)
        .into_par_iter()
        .filter(|&j| {
            let t = j as f64 * h;
            sing.iter().all(|s| wrap_angle(t - s.angle).abs() > guard)
        })
        .map(|j| (av[j].norm_sqr() - m.complement_sq(wrap_angle(j as f64 * h), 0.0)).abs())
        .reduce(|| 0.0, f64::max);
    MateDiagnostics { identity_error, reconstruction_error }
}

impl PythagoreanPair {
    pub fn b(&self) -> &SymbolB {
        &self.b
    }

    pub fn b_fn(&self) -> &AnalyticFn {
        &self.b_fn
    }

    pub fn a_fn(&self) -> &AnalyticFn {
        &self.a_fn
    }

    pub fn extremeness(&self) -> &ExtremenessReport {
        &self.extremeness
    }

    pub fn diagnostics(&self) -> MateDiagnostics {
        self.diagnostics
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    /// Reject points beyond the resolved radius of an outer construction.
    pub fn check_resolved(&self, z: Complex64) -> Result<()> {
        match &self.a_fn {
            AnalyticFn::Outer(o) => o.check_resolved(z),
            _ => Ok(()),
        }
    }

    pub fn b_at(&self, z: Complex64) -> Result<Complex64> {
        self.check_resolved(z)?;
        Ok(self.b_fn.eval(z))
    }

    pub fn a_at(&self, z: Complex64) -> Result<Complex64> {
        self.check_resolved(z)?;
        Ok(self.a_fn.eval(z))
    }

    /// Taylor coefficients of `b` and `1/a`, at least `m` of each.
    pub fn series(&self, m: usize) -> (Arc<Vec<Complex64>>, Arc<Vec<Complex64>>) {
        {
            let c = self.cache.read().expect("cache lock");
            if c.b.len() >= m {
                return (c.b.clone(), c.inv_a.clone());
            }
        }
        let len = next_pow2(m.max(64));
        let b = Arc::new(self.b_fn.taylor(len));
        let inv_a = Arc::new(match &self.a_fn {
            AnalyticFn::Rational(r) => series_quotient(r.den().coeffs(), r.num().coeffs(), len),
            AnalyticFn::Outer(o) | AnalyticFn::InnerOuter { outer: o, .. } => o.reciprocal().taylor(len),
        });
        let mut c = self.cache.write().expect("cache lock");
        if c.b.len() < len {
            c.b = b;
            c.inv_a = inv_a;
        }
        (c.b.clone(), c.inv_a.clone())
    }

    /// `b/a` at `r e^{2 pi i j/p}`.
    pub fn b_over_a_values(&self, r: f64, p: usize) -> Vec<Complex64> {
        match (&self.b_fn, &self.a_fn) {
            (AnalyticFn::Rational(b), AnalyticFn::Rational(a)) => {
                // b/a = p / q with the common denominator cancelled
                (0..p)
                    .into_par_iter()
                    .map(|j| {
                        let z = Complex64::from_polar(r, TAU * j as f64 / p as f64);
                        b.num().eval(z) / a.num().eval(z)
                    })
                    .collect()
            }
            (AnalyticFn::Outer(bo), AnalyticFn::Outer(ao)) => bo.product(&ao.reciprocal()).values_on_circle(r, p),
            (AnalyticFn::InnerOuter { inner, outer }, AnalyticFn::Outer(ao)) => {
                let q = outer.product(&ao.reciprocal()).values_on_circle(r, p);
                inner.values_on_circle(r, p).into_iter().zip(q).map(|(x, y)| x * y).collect()
            }
            _ => unreachable!("mate forms are fixed by the symbol form"),
        }
    }

    /// Whether `a` is bounded away from zero on the boundary grid.
    pub fn a_bounded_below(&self) -> Option<f64> {
        if let AnalyticFn::Rational(_) = self.a_fn {
            if self.b.spectral_factor().is_none_or(|f| !f.boundary_roots.is_empty()) {
                return None;
            }
        } else if !self.b.modulus().singularities(ModPart::ComplementSq).is_empty() {
            return None;
        }
        let n = self.grid_size.max(1024);
        let min = self.a_fn.values_on_circle(1.0, n).iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        (min > 1e-3).then_some(min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::blaschke::BlaschkeProduct;
    use crate::boundary::modulus::ConstantModulus;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn half_sum_mate_is_half_difference() {
        let pair = pythagorean_mate(&SymbolB::half_sum(), &MateConfig::default()).unwrap();
        for z in [c(0.0, 0.0), c(0.3, 0.4), c(-0.7, 0.1)] {
            let want = (c(1.0, 0.0) - z) / 2.0;
            assert!((pair.a_at(z).unwrap() - want).norm() < 1e-12);
        }
        assert!(pair.diagnostics().identity_error < 1e-14);
        assert_eq!(pair.extremeness().verdict, Extremeness::NonExtreme);
    }

    #[test]
    fn inner_symbol_is_extreme() {
        let z = SymbolB::polynomial(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let rep = classify_extremeness(&z);
        assert_eq!(rep.verdict, Extremeness::Extreme);
        assert_eq!(rep.trend, Trend::Divergent);
        assert!(matches!(pythagorean_mate(&z, &MateConfig::default()), Err(HbError::ExtremeDegenerate(_))));
    }

    #[test]
    fn gauss_extreme_diverges() {
        let rep = classify_extremeness(&SymbolB::gauss_extreme());
        assert_eq!(rep.verdict, Extremeness::Extreme);
        assert_eq!(rep.trend, Trend::Divergent);
    }

    #[test]
    fn alpha_power_is_non_extreme_with_exact_mate() {
        let b = SymbolB::alpha_power(0.25).unwrap();
        let rep = classify_extremeness(&b);
        assert_eq!(rep.verdict, Extremeness::NonExtreme);
        let pair = pythagorean_mate(&b, &MateConfig::default()).unwrap();
        for z in [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.9)] {
            let want = (c(1.0, 0.0) - z).powf(0.25) * 2f64.powf(-0.25);
            assert!((pair.a_at(z).unwrap() - want).norm() < 1e-6);
        }
        assert!(pair.a_at(c(0.9999, 0.0)).is_err());
    }

    #[test]
    fn constant_symbol_has_constant_mate() {
        let b = SymbolB::outer(Arc::new(ConstantModulus(0.6)));
        let pair = pythagorean_mate(&b, &MateConfig::with_grid_exponent(10).unwrap()).unwrap();
        assert!((pair.a_at(c(0.2, 0.3)).unwrap() - c(0.8, 0.0)).norm() < 1e-12);
        assert!(pair.a_bounded_below().is_some());
    }

    #[test]
    fn blaschke_times_outer_keeps_zeros() {
        let inner = BlaschkeProduct::from_points(&[c(0.5, 0.0)]).unwrap();
        let b = SymbolB::inner_times_outer(inner, Arc::new(ConstantModulus(0.5)));
        let pair = pythagorean_mate(&b, &MateConfig::with_grid_exponent(10).unwrap()).unwrap();
        assert!(pair.b_at(c(0.5, 0.0)).unwrap().norm() < 1e-14);
        assert!((pair.a_at(c(0.0, 0.0)).unwrap().re - 0.75f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn series_cache_grows() {
        let pair = pythagorean_mate(&SymbolB::half_sum(), &MateConfig::default()).unwrap();
        let (b, inv_a) = pair.series(10);
        assert!(b.len() >= 10);
        // 1/a = 2/(1-z)
        assert!(inv_a.iter().take(10).all(|v| (v - c(2.0, 0.0)).norm() < 1e-12));
        let (b2, _) = pair.series(5000);
        assert!(b2.len() >= 5000);
    }

    #[test]
    fn config_bounds() {
        assert!(MateConfig::with_grid_exponent(7).is_err());
        assert!(MateConfig::with_grid_exponent(19).is_err());
    }
}
