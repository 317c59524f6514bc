//! Reweighting `w mu` of disk measures.

use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

use super::{DiskMeasure, RadialComponent};
use crate::boundary::analytic::AnalyticFn;
use crate::boundary::functions::{BoundaryFunction, Constant, Product};
use crate::boundary::modulus::{BoundaryModulus, ModulusFn, ModulusKind};
use crate::error::{HbError, Result};
use crate::hb::PythagoreanPair;

/// Nonnegative weight on the closed disk.
pub trait DiskWeight: Send + Sync + fmt::Debug {
    /// Value at `z` in the open disk.
    fn interior(&self, z: Complex64) -> f64;

    /// Boundary values.
    fn boundary(&self) -> Arc<dyn BoundaryFunction>;

    /// `w(t e^{i angle})` as a polynomial in `s = 1 - t`, when it is one.
    fn radial_polynomial(&self, _angle: f64) -> Option<Vec<f64>> {
        None
    }

    fn label(&self) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstWeight(pub f64);

impl DiskWeight for ConstWeight {
    fn interior(&self, _z: Complex64) -> f64 {
        self.0
    }

    fn boundary(&self) -> Arc<dyn BoundaryFunction> {
        Arc::new(Constant(self.0))
    }

    fn radial_polynomial(&self, _angle: f64) -> Option<Vec<f64>> {
        Some(vec![self.0])
    }

    fn label(&self) -> String {
        format!("{}", self.0)
    }
}

/// Coefficients in `s` of `P((1 - s) e^{i angle})`.
fn shifted(p: &[Complex64], angle: f64) -> Vec<Complex64> {
    let n = p.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (k, &c) in p.iter().enumerate() {
        let ck = c * Complex64::from_polar(1.0, k as f64 * angle);
        let mut binom = 1.0;
        for (m, o) in out.iter_mut().enumerate().take(k + 1) {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            *o += ck * binom * sign;
            binom = binom * (k - m) as f64 / (m + 1) as f64;
        }
    }
    out
}

/// `|P((1 - s) e^{i angle})|^2` as a real polynomial in `s`.
fn abs_sq_in_s(p: &[Complex64], angle: f64) -> Vec<f64> {
    let q = shifted(p, angle);
    let n = q.len();
    let mut out = vec![0.0; (2 * n).saturating_sub(1).max(1)];
    for j in 0..n {
        for m in 0..n {
            out[j + m] += (q[j] * q[m].conj()).re;
        }
    }
    out
}

/// `|a|^2` for the mate `a` of a pair.
#[derive(Debug, Clone)]
pub struct MateWeight {
    a: AnalyticFn,
    modulus: Arc<dyn BoundaryModulus>,
}

impl MateWeight {
    pub fn new(pair: &PythagoreanPair) -> Self {
        Self { a: pair.a_fn().clone(), modulus: pair.b().modulus().clone() }
    }
}

impl DiskWeight for MateWeight {
    fn interior(&self, z: Complex64) -> f64 {
        self.a.eval(z).norm_sqr()
    }

    fn boundary(&self) -> Arc<dyn BoundaryFunction> {
        ModulusFn::shared(&self.modulus, ModulusKind::ComplementSq)
    }

    fn radial_polynomial(&self, angle: f64) -> Option<Vec<f64>> {
        let r = self.a.as_rational()?;
        if r.den().degree() != 0 {
            return None;
        }
        let d = r.den().coeffs()[0];
        let num: Vec<Complex64> = r.num().coeffs().iter().map(|c| c / d).collect();
        Some(abs_sq_in_s(&num, angle))
    }

    fn label(&self) -> String {
        "|a|^2".into()
    }
}

/// `1 - |b|^2`.
#[derive(Debug, Clone)]
pub struct ComplementWeight {
    b: AnalyticFn,
    modulus: Arc<dyn BoundaryModulus>,
}

impl ComplementWeight {
    pub fn new(pair: &PythagoreanPair) -> Self {
        Self { b: pair.b_fn().clone(), modulus: pair.b().modulus().clone() }
    }
}

impl DiskWeight for ComplementWeight {
    fn interior(&self, z: Complex64) -> f64 {
        (1.0 - self.b.eval(z).norm_sqr()).max(0.0)
    }

    fn boundary(&self) -> Arc<dyn BoundaryFunction> {
        ModulusFn::shared(&self.modulus, ModulusKind::ComplementSq)
    }

    fn radial_polynomial(&self, angle: f64) -> Option<Vec<f64>> {
        let r = self.b.as_rational()?;
        if r.den().degree() != 0 {
            return None;
        }
        let d = r.den().coeffs()[0];
        let num: Vec<Complex64> = r.num().coeffs().iter().map(|c| c / d).collect();
        let mut p: Vec<f64> = abs_sq_in_s(&num, angle).into_iter().map(|v| -v).collect();
        p[0] += 1.0;
        Some(p)
    }

    fn label(&self) -> String {
        "(1 - |b|^2)".into()
    }
}

#[derive(Debug, Clone)]
pub struct ProductWeight(pub Vec<Arc<dyn DiskWeight>>);

impl DiskWeight for ProductWeight {
    fn interior(&self, z: Complex64) -> f64 {
        self.0.iter().map(|w| w.interior(z)).product()
    }

    fn boundary(&self) -> Arc<dyn BoundaryFunction> {
        Arc::new(Product(self.0.iter().map(|w| w.boundary()).collect()))
    }

    fn radial_polynomial(&self, angle: f64) -> Option<Vec<f64>> {
        let mut acc = vec![1.0];
        for w in &self.0 {
            let p = w.radial_polynomial(angle)?;
            let mut next = vec![0.0; acc.len() + p.len() - 1];
            for (i, x) in acc.iter().enumerate() {
                for (j, y) in p.iter().enumerate() {
                    next[i + j] += x * y;
                }
            }
            acc = next;
        }
        Some(acc)
    }

    fn label(&self) -> String {
        self.0.iter().map(|w| w.label()).collect::<Vec<_>>().join(" * ")
    }
}

fn check_value(v: f64, what: &str) -> Result<f64> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(HbError::Weighting(format!("weight is {v} on {what}")));
    }
    Ok(v)
}

/// `w mu`, componentwise. Radial components stay in closed form when the
/// weight is a polynomial along the ray.
pub fn weight_measure(mu: &DiskMeasure, w: &Arc<dyn DiskWeight>) -> Result<DiskMeasure> {
    let mut out = DiskMeasure { label: format!("{} * {}", w.label(), mu.label), ..DiskMeasure::default() };
    for &(z, m) in &mu.disk_atoms {
        let v = check_value(w.interior(z), &format!("the atom at {z}"))?;
        if v * m > 0.0 {
            out.disk_atoms.push((z, v * m));
        }
    }
    let wb = w.boundary();
    if mu.has_boundary_part() {
        if let Some(s) = wb.singularities().iter().find(|s| s.exponent < 0.0) {
            return Err(HbError::Weighting(format!("{} is unbounded near angle {}", w.label(), s.angle)));
        }
    }
    for &(angle, m) in &mu.singular_atoms {
        let v = check_value(wb.value(angle), &format!("the boundary atom at angle {angle}"))?;
        if v * m > 0.0 {
            out.singular_atoms.push((angle, v * m));
        }
    }
    if let Some(h) = &mu.ac {
        out.ac = Some(Arc::new(Product(vec![h.clone(), wb.clone()])));
    }
    for r in &mu.radial {
        for j in 0..48 {
            let t = 1.0 - 0.5f64.powi(j);
            check_value(w.interior(Complex64::from_polar(t.max(r.density.r0), r.angle)), "a radial carrier")?;
        }
        let density = match w.radial_polynomial(r.angle) {
            Some(p) => r.density.times_polynomial(&p),
            None => {
                let label = w.label();
                let w = w.clone();
                let angle = r.angle;
                r.density.times_weight(Arc::new(move |t| w.interior(Complex64::from_polar(t, angle))), &label)
            }
        };
        out.radial.push(RadialComponent { angle: r.angle, density });
    }
    Ok(out)
}
