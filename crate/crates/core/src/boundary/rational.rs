//! Rational functions on the disk and their boundary moduli.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;

use super::fejer_riesz::{SpectralFactor, SNAP_TOL};
use super::functions::Singularity;
use super::modulus::{BoundaryModulus, ModPart};
use crate::error::{HbError, Result};
use crate::numeric::poly::{cluster_roots, Poly};
use crate::numeric::wrap_angle;

/// Roots split into those on the circle (snapped, with multiplicity) and the rest.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RootSplit {
    pub off_circle: Vec<Complex64>,
    pub boundary: Vec<(f64, usize)>,
}

/// Classify `roots` of `p`. With `cluster`, groups of nearby roots close to the
/// circle are refined to a single multiple root when `p` vanishes there to
/// working precision.
pub fn classify_roots(p: &Poly, roots: &[Complex64], cluster: bool) -> Result<RootSplit> {
    let l1 = p.l1_norm();
    let groups: Vec<Vec<Complex64>> =
        if cluster { cluster_roots(roots, 1e-3) } else { roots.iter().map(|&r| vec![r]).collect() };
    let mut split = RootSplit::default();
    let add_boundary = |split: &mut RootSplit, angle: f64, m: usize| match split
        .boundary
        .iter_mut()
        .find(|(a, _)| wrap_angle(a - angle).abs() < 1e-9)
    {
        Some(e) => e.1 += m,
        None => split.boundary.push((angle, m)),
    };
    for g in groups {
        if g.len() >= 2 {
            let m = g.len();
            let mut c: Complex64 = g.iter().sum::<Complex64>() / m as f64;
            if (c.norm() - 1.0).abs() < 1e-2 {
                let mut dp = p.clone();
                for _ in 1..m {
                    dp = dp.derivative();
                }
                for _ in 0..60 {
                    let (v, dv) = dp.eval_with_derivative(c);
                    if dv.norm() == 0.0 {
                        break;
                    }
                    let step = v / dv;
                    c -= step;
                    if step.norm() < 1e-17 {
                        break;
                    }
                }
                if p.eval(c).norm() <= 1e-12 * l1 {
                    if (c.norm() - 1.0).abs() <= SNAP_TOL {
                        add_boundary(&mut split, c.arg(), m);
                    } else {
                        split.off_circle.extend(std::iter::repeat_n(c, m));
                    }
                    continue;
                }
            }
        }
        for r in g {
            if (r.norm() - 1.0).abs() <= SNAP_TOL {
                add_boundary(&mut split, r.arg(), 1);
            } else {
                split.off_circle.push(r);
            }
        }
    }
    Ok(split)
}

/// Polynomial stored by its roots, so `|p(e^{it})|^2` keeps relative accuracy
/// next to boundary zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredPoly {
    lead: Complex64,
    off_circle: Vec<Complex64>,
    boundary: Vec<(f64, usize)>,
}

impl FactoredPoly {
    pub fn from_poly(p: &Poly) -> Result<Self> {
        if p.is_zero() {
            return Ok(Self { lead: Complex64::new(0.0, 0.0), off_circle: vec![], boundary: vec![] });
        }
        let lead = *p.coeffs().last().expect("non-empty");
        let roots = p.roots()?;
        let split = classify_roots(p, &roots, true)?;
        Ok(Self { lead, off_circle: split.off_circle, boundary: split.boundary })
    }

    pub fn from_factor(f: &SpectralFactor) -> Self {
        let lead = *f.q.coeffs().last().expect("non-empty");
        Self { lead, off_circle: f.outside_roots.clone(), boundary: f.boundary_roots.clone() }
    }

    pub fn boundary(&self) -> &[(f64, usize)] {
        &self.boundary
    }

    pub fn is_zero(&self) -> bool {
        self.lead.norm() == 0.0
    }

    /// `|p(e^{i(base+off)})|^2`.
    pub fn abs_sq(&self, base: f64, off: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let zeta = Complex64::from_polar(1.0, base + off);
        let mut v = self.lead.norm_sqr();
        for r in &self.off_circle {
            v *= (zeta - r).norm_sqr();
        }
        for &(s, m) in &self.boundary {
            let d = wrap_angle(base - s) + off;
            let chord = 2.0 * (0.5 * d).sin();
            v *= (chord * chord).powi(m as i32);
        }
        v
    }

    pub fn singularities(&self) -> Vec<Singularity> {
        self.boundary.iter().map(|&(s, m)| Singularity::new(s, 2.0 * m as f64)).collect()
    }
}

/// `num / den` with `den` zero-free on the closed disk.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

fn check_denominator(den: &Poly) -> Result<()> {
    if den.is_zero() {
        return Err(HbError::Domain("zero denominator".into()));
    }
    for r in den.roots()? {
        if r.norm() <= 1.0 + 1e-9 {
            return Err(HbError::Domain(format!("denominator root {r} lies in the closed unit disk")));
        }
    }
    Ok(())
}

impl RationalFn {
    /// Validated constructor: denominator zero-free on the closed disk and
    /// coprime to the numerator.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        check_denominator(&den)?;
        if !num.is_zero() && num.degree() > 0 && den.degree() > 0 {
            let nr = num.roots()?;
            let dr = den.roots()?;
            for a in &nr {
                for b in &dr {
                    if (a - b).norm() < 1e-8 * b.norm().max(1.0) {
                        return Err(HbError::Domain(format!("numerator and denominator share the root {b}")));
                    }
                }
            }
        }
        Ok(Self { num, den })
    }

    /// Constructor checking only the denominator.
    pub fn new_unreduced(num: Poly, den: Poly) -> Result<Self> {
        check_denominator(&den)?;
        Ok(Self { num, den })
    }

    pub fn polynomial(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Taylor coefficients `0..n` by the recursion `den * f = num`.
    pub fn taylor(&self, n: usize) -> Vec<Complex64> {
        series_quotient(self.num.coeffs(), self.den.coeffs(), n)
    }

    /// Values at `r e^{2 pi i j / m}`.
    pub fn values_on_circle(&self, r: f64, m: usize) -> Vec<Complex64> {
        (0..m).into_par_iter().map(|j| self.eval(Complex64::from_polar(r, TAU * j as f64 / m as f64))).collect()
    }
}

/// Taylor coefficients of `num / den` up to `n` terms (`den[0] != 0`).
pub fn series_quotient(num: &[Complex64], den: &[Complex64], n: usize) -> Vec<Complex64> {
    let d0 = den[0];
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let mut s = num.get(k).copied().unwrap_or_default();
        for j in 1..den.len().min(k + 1) {
            s -= den[j] * c[k - j];
        }
        c[k] = s / d0;
    }
    c
}

/// Boundary modulus of a rational symbol `b = p / r` with complement
/// `1 - |b|^2 = |q|^2 / |r|^2`.
#[derive(Debug, Clone)]
pub struct RationalModulus {
    num: FactoredPoly,
    comp: FactoredPoly,
    den: Poly,
}

impl RationalModulus {
    /// `factor` is the spectral factor of `|r|^2 - |p|^2`, absent when that
    /// vanishes identically (inner `b`).
    pub fn new(b: &RationalFn, factor: Option<&SpectralFactor>) -> Result<Self> {
        let num = FactoredPoly::from_poly(b.num())?;
        let comp = match factor {
            Some(f) => FactoredPoly::from_factor(f),
            None => FactoredPoly::from_poly(&Poly::new(vec![]))?,
        };
        Ok(Self { num, comp, den: b.den().clone() })
    }

    fn den_sq(&self, base: f64, off: f64) -> f64 {
        self.den.eval(Complex64::from_polar(1.0, base + off)).norm_sqr()
    }
}

impl BoundaryModulus for RationalModulus {
    fn modulus_sq(&self, base: f64, off: f64) -> f64 {
        self.num.abs_sq(base, off) / self.den_sq(base, off)
    }

    fn complement_sq(&self, base: f64, off: f64) -> f64 {
        self.comp.abs_sq(base, off) / self.den_sq(base, off)
    }

    fn singularities(&self, part: ModPart) -> Vec<Singularity> {
        match part {
            ModPart::ModulusSq => self.num.singularities(),
            ModPart::ComplementSq => self.comp.singularities(),
        }
    }

    fn unimodular_measure(&self) -> Option<f64> {
        Some(if self.comp.is_zero() { 1.0 } else { 0.0 })
    }

    fn label(&self) -> String {
        "rational".into()
    }
}
