//! Kernel ratios `||k_lambda||_b / ||k_lambda||_mu` over log-radial grids.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use super::scan::level_trend;
use super::{check_depth, Verdict};
use crate::boundary::analytic::AnalyticFn;
use crate::boundary::blaschke::BlaschkeProduct;
use crate::boundary::functions::{BoundaryFunction, QUAD_TOL};
use crate::boundary::modulus::ModPart;
use crate::boundary::rational::RationalFn;
use crate::error::{HbError, Result};
use crate::hb::PythagoreanPair;
use crate::measure::{l2mu_norm, DiskMeasure, Integrand};
use crate::numeric::{wrap_angle, Trend};

/// Quadrature tolerance when `b` on the circle comes from interpolated
/// grid values; the interpolant is only accurate to about this level.
const GRID_QUAD_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    /// `k^b_lambda = (1 - conj(b(lambda)) b) k_lambda`.
    Reproducing,
    /// `k_lambda = 1 / (1 - conj(lambda) z)`.
    Cauchy,
}

/// Points `(1 - 2^{-j}) e^{i t}`, `j = 1..=depth`, with `angles` uniform
/// angles and, around each critical angle `c`, the angles `c +- 2 pi 2^{-i}`
/// for `i <= j + 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaFamily {
    pub depth: u32,
    pub angles: usize,
    pub critical: Vec<f64>,
}

impl LambdaFamily {
    pub fn new(depth: u32, angles: usize) -> Result<Self> {
        check_depth(depth)?;
        if angles == 0 {
            return Err(HbError::Config("lambda family needs at least one angle".into()));
        }
        Ok(Self { depth, angles, critical: Vec::new() })
    }

    pub fn with_critical(mut self, mut points: Vec<f64>) -> Self {
        points.iter_mut().for_each(|p| *p = wrap_angle(*p));
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        points.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        self.critical = points;
        self
    }

    /// Angles where kernel ratios can degenerate: zeros of `1 - |b|^2`,
    /// singular points and breakpoints of the boundary density, boundary
    /// atoms and radial carriers.
    pub fn critical_points(pair: &PythagoreanPair, mu: &DiskMeasure) -> Vec<f64> {
        let mut out: Vec<f64> =
            pair.b().modulus().singularities(ModPart::ComplementSq).iter().map(|s| s.angle).collect();
        if let Some(h) = mu.ac() {
            out.extend(h.singularities().iter().map(|s| s.angle));
            let mut bp = h.breakpoints(-PI, PI);
            if bp.len() <= 64 {
                out.append(&mut bp);
            }
        }
        out.extend(mu.singular_atoms().iter().map(|a| a.0));
        out.extend(mu.radial().iter().map(|r| r.angle));
        out
    }

    pub fn points(&self) -> Vec<(u32, Complex64)> {
        let mut out = Vec::new();
        for j in 1..=self.depth {
            let r = 1.0 - 0.5f64.powi(j as i32);
            let mut ts: Vec<f64> = (0..self.angles).map(|k| wrap_angle(TAU * k as f64 / self.angles as f64)).collect();
            for &c in &self.critical {
                ts.push(c);
                for i in 1..=j + 2 {
                    let d = TAU * 0.5f64.powi(i as i32);
                    ts.push(wrap_angle(c + d));
                    ts.push(wrap_angle(c - d));
                }
            }
            ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            ts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
            out.extend(ts.into_iter().map(|t| (j, Complex64::from_polar(r, t))));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelRatio {
    pub level: u32,
    pub lambda: Complex64,
    /// `||k||_b^2` in closed form.
    pub b_norm_sq: f64,
    pub mu_norm_sq: f64,
    /// `||k||_b / ||k||_mu`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelScan {
    pub kind: KernelKind,
    pub max_ratio: f64,
    pub witness: KernelRatio,
    /// `(level, max ratio on the level, running max)`.
    pub levels: Vec<(u32, f64, f64)>,
    pub trend: Trend,
    pub verdict: Verdict,
    #[serde(skip)]
    pub points: Vec<KernelRatio>,
}

/// Boundary values of `b` usable inside quadratures.
#[derive(Debug, Clone)]
pub(crate) enum BoundaryB {
    Rational(RationalFn),
    /// Inner factor evaluated exactly, outer factor interpolated.
    Grid {
        inner: Option<BlaschkeProduct>,
        outer: Arc<Vec<Complex64>>,
    },
}

impl BoundaryB {
    fn new(pair: &PythagoreanPair) -> Self {
        match pair.b_fn() {
            AnalyticFn::Rational(r) => BoundaryB::Rational(r.clone()),
            AnalyticFn::Outer(o) => {
                BoundaryB::Grid { inner: None, outer: Arc::new(o.values_on_circle(1.0, o.grid_size().max(4096))) }
            }
            AnalyticFn::InnerOuter { inner, outer } => BoundaryB::Grid {
                inner: Some(inner.clone()),
                outer: Arc::new(outer.values_on_circle(1.0, outer.grid_size().max(4096))),
            },
        }
    }

    fn at(&self, t: f64) -> Complex64 {
        match self {
            BoundaryB::Rational(r) => r.eval(Complex64::from_polar(1.0, t)),
            BoundaryB::Grid { inner, outer } => {
                let n = outer.len();
                let u = t.rem_euclid(TAU) / TAU * n as f64;
                let k = u.floor();
                let x = u - k;
                let k = k as usize % n;
                // Catmull-Rom through the four nearest samples
                let p = |j: usize| outer[(k + n + j - 1) % n];
                let v = p(1)
                    + (p(2) - p(0)) * (0.5 * x)
                    + (p(0) * 2.0 - p(1) * 5.0 + p(2) * 4.0 - p(3)) * (0.5 * x * x)
                    + (p(1) * 3.0 - p(0) - p(2) * 3.0 + p(3)) * (0.5 * x * x * x);
                match inner {
                    Some(b) => b.eval(Complex64::from_polar(1.0, t)) * v,
                    None => v,
                }
            }
        }
    }
}

/// `|1 - coef b(e^{it})|^2 / |1 - conj(lambda) e^{it}|^2`.
#[derive(Debug, Clone)]
struct KernelBoundary {
    lambda: Complex64,
    coef: Complex64,
    b: Option<BoundaryB>,
}

fn peak_cuts(lambda: Complex64, a: f64, b: f64) -> Vec<f64> {
    let c = lambda.arg();
    let d = 1.0 - lambda.norm();
    let mut offs = vec![0.0];
    let mut s = d;
    while s < PI {
        offs.push(s);
        offs.push(-s);
        s *= 4.0;
    }
    let mut out = Vec::new();
    for o in offs {
        let p = c + o;
        let k0 = ((a - p) / TAU).ceil() as i64;
        let mut k = k0;
        loop {
            let x = p + TAU * k as f64;
            if x > b {
                break;
            }
            out.push(x);
            k += 1;
        }
    }
    out
}

impl BoundaryFunction for KernelBoundary {
    fn value_at(&self, base: f64, off: f64) -> f64 {
        let t = base + off;
        let xi = Complex64::from_polar(1.0, t);
        let num = match &self.b {
            Some(b) if self.coef != Complex64::new(0.0, 0.0) => {
                (Complex64::new(1.0, 0.0) - self.coef * b.at(t)).norm_sqr()
            }
            _ => 1.0,
        };
        num / (Complex64::new(1.0, 0.0) - self.lambda.conj() * xi).norm_sqr()
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        peak_cuts(self.lambda, a, b)
    }

    fn quad_tol(&self) -> f64 {
        match &self.b {
            Some(BoundaryB::Grid { .. }) if self.coef != Complex64::new(0.0, 0.0) => GRID_QUAD_TOL,
            _ => QUAD_TOL,
        }
    }

    fn label(&self) -> String {
        format!("|k_{}|^2", self.lambda)
    }
}

struct KernelIntegrand<'a> {
    b_fn: &'a AnalyticFn,
    boundary: Arc<KernelBoundary>,
}

impl Integrand for KernelIntegrand<'_> {
    fn interior_sq(&self, z: Complex64) -> f64 {
        let kb = &self.boundary;
        let num = if kb.coef == Complex64::new(0.0, 0.0) {
            1.0
        } else {
            (Complex64::new(1.0, 0.0) - kb.coef * self.b_fn.eval(z)).norm_sqr()
        };
        num / (Complex64::new(1.0, 0.0) - kb.lambda.conj() * z).norm_sqr()
    }

    fn boundary_sq(&self) -> Option<Arc<dyn BoundaryFunction>> {
        Some(self.boundary.clone())
    }

    fn radial_cuts(&self, angle: f64) -> Vec<f64> {
        let lam = self.boundary.lambda;
        if wrap_angle(angle - lam.arg()).abs() > 0.5 {
            return Vec::new();
        }
        let d = 1.0 - lam.norm();
        let mut out = Vec::new();
        let mut s = d;
        while s < 1.0 {
            out.push(1.0 - s);
            s *= 4.0;
        }
        out
    }
}

/// `||k_lambda||_mu^2` for one point. The symbol is evaluated without the
/// resolved-radius guard so that grids can approach the circle.
pub(crate) fn kernel_mu_norm_sq(
    pair: &PythagoreanPair,
    mu: &DiskMeasure,
    lambda: Complex64,
    kind: KernelKind,
    boundary_b: &Option<BoundaryB>,
) -> Result<(f64, f64)> {
    let b_l = pair.b_fn().eval(lambda);
    let w = 1.0 - lambda.norm_sqr();
    let (coef, b_norm_sq) = match kind {
        KernelKind::Reproducing => (b_l.conj(), (1.0 - b_l.norm_sqr()) / w),
        KernelKind::Cauchy => {
            let a_l = pair.a_fn().eval(lambda);
            (Complex64::new(0.0, 0.0), (1.0 + b_l.norm_sqr() / a_l.norm_sqr()) / w)
        }
    };
    let boundary = Arc::new(KernelBoundary { lambda, coef, b: boundary_b.clone() });
    let f = KernelIntegrand { b_fn: pair.b_fn(), boundary };
    let n = l2mu_norm(&f, mu)?;
    Ok((b_norm_sq, n * n))
}

/// Kernel norms at the given `(level, lambda)` points.
pub fn kernel_ratios_at(
    pair: &PythagoreanPair,
    mu: &DiskMeasure,
    pts: &[(u32, Complex64)],
    kind: KernelKind,
) -> Result<Vec<KernelRatio>> {
    let boundary_b = match kind {
        KernelKind::Reproducing if mu.has_boundary_part() => {
            if !pair.b().is_admissible_for(mu.label()) {
                return Err(HbError::Admissibility(format!(
                    "kernels of H({}) on the boundary part of {}",
                    pair.b().label(),
                    mu.label()
                )));
            }
            Some(BoundaryB::new(pair))
        }
        _ => None,
    };
    let results: Vec<Result<KernelRatio>> = pts
        .par_iter()
        .map(|&(level, lambda)| {
            let (b_norm_sq, mu_norm_sq) = kernel_mu_norm_sq(pair, mu, lambda, kind, &boundary_b)?;
            if !(mu_norm_sq > 0.0) {
                return Err(HbError::DegenerateMeasure(format!("||k_lambda||_mu = 0 at lambda = {lambda}")));
            }
            Ok(KernelRatio { level, lambda, b_norm_sq, mu_norm_sq, ratio: (b_norm_sq / mu_norm_sq).sqrt() })
        })
        .collect();
    results.into_iter().collect()
}

/// `max_lambda ||k_lambda||_b / ||k_lambda||_mu` over the family.
pub fn kernel_ratio_scan(
    pair: &PythagoreanPair,
    mu: &DiskMeasure,
    family: &LambdaFamily,
    kind: KernelKind,
) -> Result<KernelScan> {
    let points = kernel_ratios_at(pair, mu, &family.points(), kind)?;

    let mut levels = Vec::new();
    let mut best: Option<KernelRatio> = None;
    for level in 1..=family.depth {
        let mut lmax = f64::NEG_INFINITY;
        for p in points.iter().filter(|p| p.level == level) {
            lmax = lmax.max(p.ratio);
            if best.is_none_or(|b| p.ratio > b.ratio) {
                best = Some(*p);
            }
        }
        levels.push((level, lmax, best.map_or(f64::NAN, |b| b.ratio)));
    }
    let witness = best.ok_or_else(|| HbError::Config("empty lambda family".into()))?;
    let trend = level_trend(&levels.iter().map(|l| l.2).collect::<Vec<_>>());
    let verdict = match trend {
        Trend::Convergent => Verdict::Pass,
        Trend::Divergent => Verdict::Fail,
        Trend::Undetermined => Verdict::Undetermined,
    };
    Ok(KernelScan { kind, max_ratio: witness.ratio, witness, levels, trend, verdict, points })
}
