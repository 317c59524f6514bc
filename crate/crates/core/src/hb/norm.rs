//! Norms, inner products and reproducing kernels of `H(b)`.

use num_complex::Complex64;
use serde::Serialize;

use super::pair::{Extremeness, PythagoreanPair};
use crate::boundary::grid::{CircleGrid, FourierSeries};
use crate::boundary::toeplitz::{toeplitz_apply, DEFAULT_PRODUCT_CAP};
use crate::error::{HbError, Result};
use crate::numeric::fft::{convolve, correlate_upper, next_pow2};

/// An element of `H^2` given by its Taylor coefficients.
pub trait HardyVector: Sync {
    /// Coefficients `0..m`.
    fn coeffs(&self, m: usize) -> Vec<Complex64>;

    /// Number of coefficients when the series is a polynomial.
    fn length(&self) -> Option<usize>;
}

/// A polynomial by its coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<Complex64>);

impl Polynomial {
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[n] = Complex64::new(1.0, 0.0);
        Self(c)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
}

impl HardyVector for Polynomial {
    fn coeffs(&self, m: usize) -> Vec<Complex64> {
        let mut c = self.0.clone();
        c.resize(m, Complex64::new(0.0, 0.0));
        c
    }

    fn length(&self) -> Option<usize> {
        Some(self.0.len())
    }
}

/// Analytic part of a Fourier series.
impl HardyVector for FourierSeries {
    fn coeffs(&self, m: usize) -> Vec<Complex64> {
        (0..m as i64).map(|k| self.get(k)).collect()
    }

    fn length(&self) -> Option<usize> {
        Some(self.bandwidth() + 1)
    }
}

/// Cauchy kernel `k_lambda(z) = 1/(1 - conj(lambda) z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyKernel(pub Complex64);

impl HardyVector for CauchyKernel {
    fn coeffs(&self, m: usize) -> Vec<Complex64> {
        let w = self.0.conj();
        let mut p = Complex64::new(1.0, 0.0);
        (0..m)
            .map(|_| {
                let v = p;
                p *= w;
                v
            })
            .collect()
    }

    fn length(&self) -> Option<usize> {
        (self.0.norm() == 0.0).then_some(1)
    }
}

/// Reproducing kernel `k^b_lambda = (1 - conj(b(lambda)) b) k_lambda`.
#[derive(Debug)]
pub struct HbKernel<'a> {
    pair: &'a PythagoreanPair,
    lambda: Complex64,
    b_lambda: Complex64,
}

impl<'a> HbKernel<'a> {
    pub fn new(pair: &'a PythagoreanPair, lambda: Complex64) -> Result<Self> {
        check_disk(lambda)?;
        Ok(Self { pair, lambda, b_lambda: pair.b_at(lambda)? })
    }
}

impl HardyVector for HbKernel<'_> {
    fn coeffs(&self, m: usize) -> Vec<Complex64> {
        let k = CauchyKernel(self.lambda).coeffs(m);
        let (b, _) = self.pair.series(m);
        let bk = convolve(&b[..m], &k, m);
        k.iter().zip(bk).map(|(x, y)| x - self.b_lambda.conj() * y).collect()
    }

    fn length(&self) -> Option<usize> {
        None
    }
}

/// Any Taylor-coefficient generator.
pub struct SeriesFn<F: Fn(usize) -> Vec<Complex64> + Sync>(pub F);

impl<F: Fn(usize) -> Vec<Complex64> + Sync> HardyVector for SeriesFn<F> {
    fn coeffs(&self, m: usize) -> Vec<Complex64> {
        (self.0)(m)
    }

    fn length(&self) -> Option<usize> {
        None
    }
}

/// `sum_i w_i f_i`.
pub struct Combination<'a>(pub Vec<(Complex64, &'a dyn HardyVector)>);

impl HardyVector for Combination<'_> {
    fn coeffs(&self, m: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        for (w, f) in &self.0 {
            for (o, c) in out.iter_mut().zip(f.coeffs(m)) {
                *o += w * c;
            }
        }
        out
    }

    fn length(&self) -> Option<usize> {
        self.0.iter().map(|(_, f)| f.length()).try_fold(0, |acc, l| l.map(|l| acc.max(l)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormConfig {
    /// First truncation degree for infinite series.
    pub start: usize,
    /// Largest truncation degree.
    pub cap: usize,
    /// Relative change of the norm that counts as stable.
    pub rel_tol: f64,
    /// Cross-check with `g = T_{conj(b/a)} f` when `a` is bounded below.
    pub cross_check: bool,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self { start: 2048, cap: 1 << 16, rel_tol: 1e-8, cross_check: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HbNorm {
    pub norm: f64,
    /// `||f||_2^2`.
    pub f_sq: f64,
    /// `||g||_2^2` with `T_{conj b} f = T_{conj a} g`.
    pub g_sq: f64,
    pub truncation: usize,
    /// Relative disagreement with the `T_{conj(b/a)}` route, when run.
    pub cross_check: Option<f64>,
}

fn l2_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// `g` on the first `m` coefficients: `v = T_{conj b} f`, then
/// `g = T_{conj a}^{-1} v`. The inverse of an upper-triangular Toeplitz
/// section is the section of `T_{conj(1/a)}`.
fn solve_g(pair: &PythagoreanPair, f: &[Complex64]) -> Vec<Complex64> {
    let m = f.len();
    let (b, inv_a) = pair.series(m);
    let v = correlate_upper(&b[..m], f);
    correlate_upper(&inv_a[..m], &v)
}

/// `||f||_b` by `||f||_b^2 = ||f||_2^2 + ||g||_2^2`.
pub fn hb_norm(pair: &PythagoreanPair, f: &dyn HardyVector, cfg: &NormConfig) -> Result<HbNorm> {
    if pair.extremeness().verdict == Extremeness::Extreme {
        return Err(HbError::Unsupported("H(b) norms need a non-extreme b".into()));
    }
    let (fc, g) = match f.length() {
        Some(len) => {
            let fc = f.coeffs(len.max(1));
            let g = solve_g(pair, &fc);
            (fc, g)
        }
        None => {
            let mut m = cfg.start.min(cfg.cap);
            let mut prev: Option<f64> = None;
            loop {
                let fc = f.coeffs(m);
                let g = solve_g(pair, &fc);
                let n = l2_sq(&fc) + l2_sq(&g);
                if let Some(p) = prev {
                    if (n - p).abs() <= cfg.rel_tol * n.max(f64::MIN_POSITIVE) {
                        break (fc, g);
                    }
                }
                if m >= cfg.cap {
                    return Err(HbError::Convergence { previous: prev.unwrap_or(f64::NAN).sqrt(), last: n.sqrt() });
                }
                prev = Some(n);
                m *= 2;
            }
        }
    };
    let f_sq = l2_sq(&fc);
    let g_sq = l2_sq(&g);
    let cross_check = if cfg.cross_check && pair.a_bounded_below().is_some() {
        let g2 = g_by_quotient(pair, &fc)?;
        let rel = (g2.sqrt() - g_sq.sqrt()).abs() / (f_sq + g_sq).sqrt().max(f64::MIN_POSITIVE);
        if rel > 1e-6 {
            return Err(HbError::Diagnostics(format!(
                "norm routes disagree: ||g||^2 = {g_sq} by back substitution, {g2} by T_(b/a)"
            )));
        }
        Some(rel)
    } else {
        None
    };
    Ok(HbNorm { norm: (f_sq + g_sq).sqrt(), f_sq, g_sq, truncation: fc.len(), cross_check })
}

/// `||T_{conj(b/a)} f||_2^2` with `b/a` sampled on the circle.
fn g_by_quotient(pair: &PythagoreanPair, f: &[Complex64]) -> Result<f64> {
    let p = next_pow2(4 * f.len()).max(4096);
    let sym: Vec<Complex64> = pair.b_over_a_values(1.0, p).into_iter().map(|v| v.conj()).collect();
    let g = toeplitz_apply(&CircleGrid::new(sym)?, &FourierSeries::from_taylor(f), DEFAULT_PRODUCT_CAP)?;
    Ok(g.l2_norm_sqr())
}

/// `<f, h>_b` by polarization, linear in `f`.
pub fn hb_inner(
    pair: &PythagoreanPair,
    f: &dyn HardyVector,
    h: &dyn HardyVector,
    cfg: &NormConfig,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut unit = Complex64::new(1.0, 0.0);
    for _ in 0..4 {
        let comb = Combination(vec![(Complex64::new(1.0, 0.0), f), (unit, h)]);
        let n = hb_norm(pair, &comb, cfg)?;
        acc += unit * (n.norm * n.norm);
        unit *= Complex64::new(0.0, 1.0);
    }
    Ok(acc / 4.0)
}

fn check_disk(lambda: Complex64) -> Result<()> {
    if !(lambda.norm() < 1.0) {
        return Err(HbError::Domain(format!("kernel point {lambda} is not in the open disk")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelPoint {
    pub lambda: Complex64,
    pub b: Complex64,
    pub a: Complex64,
    /// `||k_lambda||_b^2 = (1 + |b/a|^2) / (1 - |lambda|^2)`.
    pub norm_sq: f64,
    /// `||k^b_lambda||_b^2 = (1 - |b|^2) / (1 - |lambda|^2)`.
    pub reproducing_norm_sq: f64,
}

pub fn kernel_norm_closed_form(pair: &PythagoreanPair, lambda: Complex64) -> Result<KernelPoint> {
    check_disk(lambda)?;
    let b = pair.b_at(lambda)?;
    let a = pair.a_at(lambda)?;
    let w = 1.0 - lambda.norm_sqr();
    Ok(KernelPoint {
        lambda,
        b,
        a,
        norm_sq: (1.0 + b.norm_sqr() / a.norm_sqr()) / w,
        reproducing_norm_sq: (1.0 - b.norm_sqr()) / w,
    })
}

/// `k^b_lambda(z) = (1 - conj(b(lambda)) b(z)) / (1 - conj(lambda) z)`.
pub fn kernel_eval(pair: &PythagoreanPair, lambda: Complex64, z: Complex64) -> Result<Complex64> {
    check_disk(lambda)?;
    let d = Complex64::new(1.0, 0.0) - lambda.conj() * z;
    if d.norm() < 1e-14 {
        return Err(HbError::Domain(format!("z = {z} is the pole 1/conj(lambda)")));
    }
    let bz = if z.norm() < 1.0 {
        pair.b_at(z)?
    } else if (z.norm() - 1.0).abs() < 1e-15 && (pair.b().is_rational() || !pair.b().admissible_for().is_empty()) {
        pair.b_fn().eval(z)
    } else {
        return Err(HbError::Domain(format!("z = {z} is outside the closed disk or b has no boundary values there")));
    };
    Ok((Complex64::new(1.0, 0.0) - pair.b_at(lambda)?.conj() * bz) / d)
}
