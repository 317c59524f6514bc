//! Clark densities and the `F_alpha = p f` splitting for rational symbols.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

use super::pair::PythagoreanPair;
use crate::error::{HbError, Result};
use crate::numeric::poly::Poly;
use crate::numeric::wrap_angle;

/// Smallest admissible `|1 - conj(alpha) b|`.
pub const RESONANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClarkDensity {
    pub alpha: Complex64,
    /// `(1 - |b|^2) / |1 - conj(alpha) b|^2` at `2 pi j / n`.
    pub values: Vec<f64>,
    pub min_denominator: f64,
    /// Max relative mismatch between the Poisson extension of the density
    /// and `(1 - |b(z)|^2) / |1 - conj(alpha) b(z)|^2` at random interior points.
    pub poisson_error: f64,
}

fn check_unimodular(alpha: Complex64) -> Result<()> {
    if (alpha.norm() - 1.0).abs() > 1e-12 {
        return Err(HbError::Parameter {
            name: "alpha".into(),
            reason: format!("|alpha| = {} is not 1", alpha.norm()),
        });
    }
    Ok(())
}

pub fn clark_density(pair: &PythagoreanPair, alpha: Complex64, n: usize, seed: u64) -> Result<ClarkDensity> {
    check_unimodular(alpha)?;
    if n < 8 || !n.is_power_of_two() {
        return Err(HbError::Config(format!("grid size {n} is not a power of two >= 8")));
    }
    let m = pair.b().modulus();
    let bv = pair.b_fn().values_on_circle(1.0, n);
    let one = Complex64::new(1.0, 0.0);
    let denoms: Vec<f64> = bv.iter().map(|b| (one - alpha.conj() * b).norm()).collect();
    let min_denominator = denoms.iter().copied().fold(f64::INFINITY, f64::min);
    if min_denominator < RESONANCE_TOL {
        return Err(HbError::Resonance { min_modulus: min_denominator });
    }
    let values: Vec<f64> =
        (0..n).map(|j| m.complement_sq(wrap_angle(TAU * j as f64 / n as f64), 0.0) / (denoms[j] * denoms[j])).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Complex64> =
        (0..10).map(|_| Complex64::from_polar(0.7 * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>())).collect();
    let mut poisson_error: f64 = 0.0;
    for z in points {
        let w = 1.0 - z.norm_sqr();
        let ext: f64 = (0..n)
            .into_par_iter()
            .map(|j| values[j] * w / (Complex64::from_polar(1.0, TAU * j as f64 / n as f64) - z).norm_sqr())
            .sum::<f64>()
            / n as f64;
        let b = pair.b_at(z)?;
        let want = (1.0 - b.norm_sqr()) / (one - alpha.conj() * b).norm_sqr();
        poisson_error = poisson_error.max((ext - want).abs() / want.abs().max(1.0));
    }
    Ok(ClarkDensity { alpha, values, min_denominator, poisson_error })
}

/// `F_alpha = a / (1 - conj(alpha) b) = p f` with `p` collecting the boundary
/// zeros of `a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FAlphaSplit {
    pub alpha: Complex64,
    /// Monic polynomial with all roots on the circle.
    pub p: Vec<Complex64>,
    /// Degree of `p`.
    pub degree: usize,
    /// Boundary roots as `(angle, multiplicity)`.
    pub boundary_roots: Vec<(f64, usize)>,
    /// Numerator `q_2` of `f`.
    pub f_numerator: Vec<Complex64>,
    /// Denominator `r - conj(alpha) p_b` of `f`.
    pub f_denominator: Vec<Complex64>,
    /// Min of `|r (1 - conj(alpha) b)|` over a grid of the closed disk.
    pub inf_denominator: f64,
    pub sup_f: f64,
    pub sup_inv_f: f64,
    /// `sup |f|^2 * sup |f|^{-2}`, an upper bound for the `A_2` constant.
    pub a2_bound: f64,
    /// Max of `|F_alpha - p f|` at test points.
    pub factorization_error: f64,
}

/// Split `F_alpha`. Without `alpha`, unimodular values are drawn from a
/// seeded generator until the resonance guard passes.
pub fn rational_falpha_decompose(pair: &PythagoreanPair, alpha: Option<Complex64>, seed: u64) -> Result<FAlphaSplit> {
    let b =
        pair.b().as_rational().ok_or_else(|| HbError::Unsupported("F_alpha splitting needs a rational b".into()))?;
    let a = pair.a_fn().as_rational().expect("rational b has a rational mate");
    let sf = pair.b().spectral_factor().expect("non-extreme rational b has a spectral factor");
    let q = a.num();
    let lead = *q.coeffs().last().expect("nonzero q");
    let mut p = Poly::one();
    for &(angle, mult) in &sf.boundary_roots {
        for _ in 0..mult {
            p = p.mul(&Poly::from_roots(&[Complex64::from_polar(1.0, angle)]));
        }
    }
    let q2 = Poly::from_roots(&sf.outside_roots).scale(lead);
    let excluded: Vec<Complex64> =
        sf.boundary_roots.iter().map(|&(t, _)| b.eval(Complex64::from_polar(1.0, t))).collect();

    let try_alpha = |alpha: Complex64| -> Result<FAlphaSplit> {
        check_unimodular(alpha)?;
        let gap = excluded.iter().map(|v| (alpha - v).norm()).fold(f64::INFINITY, f64::min);
        if gap < 1e-6 {
            return Err(HbError::Resonance { min_modulus: gap });
        }
        let rc = b.den().coeffs();
        let pc = b.num().coeffs();
        let len = rc.len().max(pc.len());
        let get = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or_default();
        let den = Poly::new((0..len).map(|k| get(rc, k) - alpha.conj() * get(pc, k)).collect());
        let inf_denominator = (0..=32)
            .into_par_iter()
            .map(|i| {
                let rad = i as f64 / 32.0;
                (0..1024)
                    .map(|j| den.eval(Complex64::from_polar(rad, TAU * j as f64 / 1024.0)).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| f64::INFINITY, f64::min);
        if inf_denominator < RESONANCE_TOL {
            return Err(HbError::Resonance { min_modulus: inf_denominator });
        }
        let n = 4096;
        let (mut sup_f, mut sup_inv_f) = (0.0f64, 0.0f64);
        for j in 0..n {
            let z = Complex64::from_polar(1.0, TAU * j as f64 / n as f64);
            let f = (q2.eval(z) / den.eval(z)).norm();
            sup_f = sup_f.max(f);
            sup_inv_f = sup_inv_f.max(1.0 / f);
        }
        if !(sup_f.is_finite() && sup_inv_f.is_finite()) {
            return Err(HbError::Numerical { message: "f is not bounded above and below".into(), residual: sup_inv_f });
        }
        let mut factorization_error: f64 = 0.0;
        for z in [Complex64::new(0.0, 0.0), Complex64::new(0.3, 0.4), Complex64::new(-0.6, 0.2)] {
            let f_alpha = a.eval(z) / (Complex64::new(1.0, 0.0) - alpha.conj() * b.eval(z));
            let split = p.eval(z) * q2.eval(z) / den.eval(z);
            factorization_error = factorization_error.max((f_alpha - split).norm());
        }
        if factorization_error > 1e-8 * (1.0 + sup_f) {
            return Err(HbError::Numerical { message: "F_alpha != p f".into(), residual: factorization_error });
        }
        Ok(FAlphaSplit {
            alpha,
            p: p.coeffs().to_vec(),
            degree: p.degree(),
            boundary_roots: sf.boundary_roots.clone(),
            f_numerator: q2.coeffs().to_vec(),
            f_denominator: den.coeffs().to_vec(),
            inf_denominator,
            sup_f,
            sup_inv_f,
            a2_bound: sup_f * sup_f * sup_inv_f * sup_inv_f,
            factorization_error,
        })
    };

    if let Some(alpha) = alpha {
        return try_alpha(alpha);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..64 {
        match try_alpha(Complex64::from_polar(1.0, TAU * rng.random::<f64>())) {
            Ok(s) => return Ok(s),
            Err(e @ HbError::Resonance { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::rational::RationalFn;
    use crate::hb::pair::{pythagorean_mate, MateConfig};
    use crate::hb::symbol::SymbolB;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn clark_density_of_zero_symbol_is_one() {
        let pair = pythagorean_mate(&SymbolB::constant(0.0).unwrap(), &MateConfig::default()).unwrap();
        let d = clark_density(&pair, c(1.0, 0.0), 64, 1).unwrap();
        assert!(d.values.iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn half_sum_clark_density() {
        let pair = pythagorean_mate(&SymbolB::half_sum(), &MateConfig::default()).unwrap();
        let d = clark_density(&pair, c(-1.0, 0.0), 1024, 7).unwrap();
        assert!((d.values[512] - 1.0).abs() < 1e-12);
        assert!(d.values[0] < 1e-12);
        assert!(d.poisson_error < 1e-8, "{}", d.poisson_error);
        // alpha = 1 touches b(1) = 1
        assert!(matches!(clark_density(&pair, c(1.0, 0.0), 1024, 7), Err(HbError::Resonance { .. })));
    }

    #[test]
    fn half_sum_split_has_one_boundary_root() {
        let pair = pythagorean_mate(&SymbolB::half_sum(), &MateConfig::default()).unwrap();
        let s = rational_falpha_decompose(&pair, None, 11).unwrap();
        assert_eq!(s.degree, 1);
        assert!((s.p[0] - c(-1.0, 0.0)).norm() < 1e-9);
        assert!(s.a2_bound.is_finite());
        assert!(matches!(rational_falpha_decompose(&pair, Some(c(1.0, 0.0)), 0), Err(HbError::Resonance { .. })));
    }

    #[test]
    fn zero_symbol_split_is_trivial() {
        let pair = pythagorean_mate(&SymbolB::constant(0.0).unwrap(), &MateConfig::default()).unwrap();
        let s = rational_falpha_decompose(&pair, Some(c(0.0, 1.0)), 0).unwrap();
        assert_eq!(s.degree, 0);
        assert!((s.sup_f - 1.0).abs() < 1e-12 && (s.sup_inv_f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn double_boundary_root_is_recovered() {
        // a = (1-z)^2/4 * (3+z)/4 built first, b from |b|^2 = 1 - |a|^2
        let q =
            Poly::new(vec![c(0.25, 0.0), c(-0.5, 0.0), c(0.25, 0.0)]).mul(&Poly::new(vec![c(0.75, 0.0), c(0.25, 0.0)]));
        let t = crate::boundary::fejer_riesz::TrigPoly::new(vec![c(1.0, 0.0)])
            .sub(&crate::boundary::fejer_riesz::TrigPoly::autocorrelation(&q));
        let bp = crate::boundary::fejer_riesz::fejer_riesz(&t).unwrap().q;
        let b = SymbolB::rational(RationalFn::new(bp, Poly::one()).unwrap()).unwrap();
        let pair = pythagorean_mate(&b, &MateConfig::default()).unwrap();
        let s = rational_falpha_decompose(&pair, None, 3).unwrap();
        assert_eq!(s.degree, 2);
        assert_eq!(s.boundary_roots.len(), 1);
        assert!(s.boundary_roots[0].0.abs() < 1e-9);
    }
}
