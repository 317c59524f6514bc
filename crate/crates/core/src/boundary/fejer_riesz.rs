//! Fejér-Riesz factorization of nonnegative trigonometric polynomials.

use num_complex::Complex64;
use std::f64::consts::TAU;

use super::rational::{classify_roots, RootSplit};
use crate::error::{HbError, Result};
use crate::numeric::poly::Poly;

/// Real trigonometric polynomial `t(e^{it}) = sum_{|k| <= d} t_k e^{ikt}` with
/// `t_{-k} = conj(t_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    /// `t_0, ..., t_d`.
    coeffs: Vec<Complex64>,
}

impl TrigPoly {
    /// From the non-negative frequency coefficients; `t_0` is made real.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        coeffs[0] = Complex64::new(coeffs[0].re, 0.0);
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// `|p|^2` on the circle.
    pub fn autocorrelation(p: &Poly) -> Self {
        let c = p.coeffs();
        let n = c.len();
        let t = (0..n).map(|k| (0..n - k).map(|j| c[j + k] * c[j].conj()).sum()).collect();
        Self::new(t)
    }

    pub fn sub(&self, other: &TrigPoly) -> TrigPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or_default();
        Self::new((0..n).map(|k| get(&self.coeffs, k) - get(&other.coeffs, k)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.norm() <= tol)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut s = self.coeffs[0].re;
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            s += 2.0 * (c * Complex64::from_polar(1.0, k as f64 * theta)).re;
        }
        s
    }

    /// `z^d t(z)` as an ordinary polynomial of degree `2d`.
    pub fn to_poly(&self) -> Poly {
        let d = self.degree();
        let mut c = vec![Complex64::new(0.0, 0.0); 2 * d + 1];
        for k in 0..=d {
            c[d + k] = self.coeffs[k];
            c[d - k] = self.coeffs[k].conj();
        }
        Poly::new(c)
    }

    fn sup_and_inf(&self, n: usize) -> (f64, f64) {
        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        for j in 0..n {
            let v = self.eval(TAU * j as f64 / n as f64);
            hi = hi.max(v);
            lo = lo.min(v);
        }
        (hi, lo)
    }
}

/// Outer polynomial factor `q` with `|q|^2 = t` on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFactor {
    pub q: Poly,
    /// Roots of `q` strictly outside the closed disk.
    pub outside_roots: Vec<Complex64>,
    /// Roots of `q` on the circle as `(angle, multiplicity)`.
    pub boundary_roots: Vec<(f64, usize)>,
    /// Max of `| |q|^2 - t |` on the verification grid.
    pub max_error: f64,
}

/// Roots within this distance of the circle count as boundary zeros.
pub const SNAP_TOL: f64 = 1e-9;

/// Factor `t >= 0` as `|q|^2` with `q` free of zeros in the open disk and
/// `q(0) > 0`.
pub fn fejer_riesz(t: &TrigPoly) -> Result<SpectralFactor> {
    let d = t.degree();
    let grid = (64 * d).max(1024).next_power_of_two();
    let (sup, inf) = t.sup_and_inf(grid);
    let scale = sup.max(1.0);
    if inf < -1e-12 * scale {
        return Err(HbError::NotNonnegative { min: inf });
    }
    if d == 0 {
        let q = Poly::constant(Complex64::new(t.coeffs[0].re.max(0.0).sqrt(), 0.0));
        return Ok(SpectralFactor { q, outside_roots: vec![], boundary_roots: vec![], max_error: 0.0 });
    }
    if sup <= 0.0 {
        return Err(HbError::Domain("cannot factor the zero polynomial".into()));
    }
    let p = t.to_poly();
    let roots = p.roots()?;
    let mut last_err = None;
    for cluster in [true, false] {
        match attempt(t, &p, &roots, cluster, scale) {
            Ok(f) => return Ok(f),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn attempt(t: &TrigPoly, p: &Poly, roots: &[Complex64], cluster: bool, scale: f64) -> Result<SpectralFactor> {
    let d = t.degree();
    let RootSplit { off_circle, boundary } = classify_roots(p, roots, cluster)?;
    let outside: Vec<Complex64> = off_circle.iter().copied().filter(|r| r.norm() > 1.0).collect();
    let mut bnd = Vec::new();
    for &(angle, m) in &boundary {
        if m % 2 != 0 {
            return Err(HbError::Snapping { moduli: roots.iter().map(|r| r.norm()).collect() });
        }
        bnd.push((angle, m / 2));
    }
    let count = outside.len() + bnd.iter().map(|b| b.1).sum::<usize>();
    if count != d {
        return Err(HbError::Snapping { moduli: roots.iter().map(|r| r.norm()).collect() });
    }
    let mut all = outside.clone();
    for &(angle, m) in &bnd {
        all.extend(std::iter::repeat_n(Complex64::from_polar(1.0, angle), m));
    }
    let monic = Poly::from_roots(&all);

    let n = (16 * d).max(256).next_power_of_two();
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..n {
        let th = TAU * j as f64 / n as f64;
        num += t.eval(th);
        den += monic.eval(Complex64::from_polar(1.0, th)).norm_sqr();
    }
    let q0 = monic.eval(Complex64::new(0.0, 0.0));
    let c = (num / den).sqrt() * q0.conj() / q0.norm();
    let q = monic.scale(c);

    let fine = 4 * n;
    let mut max_error: f64 = 0.0;
    for j in 0..fine {
        let th = TAU * j as f64 / fine as f64;
        let e = (q.eval(Complex64::from_polar(1.0, th)).norm_sqr() - t.eval(th)).abs();
        max_error = max_error.max(e);
    }
    if max_error > 1e-8 * scale {
        return Err(HbError::Numerical { message: "spectral factor does not reproduce t".into(), residual: max_error });
    }
    Ok(SpectralFactor { q, outside_roots: outside, boundary_roots: bnd, max_error })
}
