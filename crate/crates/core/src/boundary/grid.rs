//! Uniform grids on the circle and their discrete Fourier data.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{HbError, Result};
use crate::numeric::fft;

/// Samples of a function on the `N` points `e^{2 pi i k / N}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleGrid {
    values: Vec<Complex64>,
}

fn check_size(n: usize) -> Result<()> {
    if n < 8 || !n.is_power_of_two() {
        return Err(HbError::Config(format!("grid size {n} is not a power of two >= 8")));
    }
    Ok(())
}

impl CircleGrid {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        check_size(values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(HbError::Domain("grid samples must be finite".into()));
        }
        Ok(Self { values })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(n: usize, f: F) -> Result<Self> {
        check_size(n)?;
        Self::new((0..n).map(|k| f(TAU * k as f64 / n as f64)).collect())
    }

    pub fn from_real(values: Vec<f64>) -> Result<Self> {
        Self::new(values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn angle(&self, k: usize) -> f64 {
        TAU * k as f64 / self.size() as f64
    }

    /// Trapezoid-rule mean of `|values|^2`.
    pub fn mean_square(&self) -> f64 {
        crate::numeric::quad::compensated_sum(self.values.iter().map(|v| v.norm_sqr())) / self.size() as f64
    }
}

/// Fourier coefficients `c_k`, `k in [-N/2, N/2)`, of a grid function, with
/// `c_k` multiplying `e^{ikt}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSeries {
    /// `coeffs[k + N/2]` holds `c_k`.
    coeffs: Vec<Complex64>,
}

impl FourierSeries {
    pub fn zeros(n: usize) -> Result<Self> {
        check_size(n)?;
        Ok(Self { coeffs: vec![Complex64::new(0.0, 0.0); n] })
    }

    /// Analytic series from Taylor coefficients, placed on the smallest grid
    /// holding them at non-negative frequencies.
    pub fn from_taylor(taylor: &[Complex64]) -> Self {
        let n = fft::next_pow2(2 * taylor.len()).max(8);
        let mut s = Self::zeros(n).expect("valid size");
        for (k, &c) in taylor.iter().enumerate() {
            s.set(k as i64, c);
        }
        s
    }

    pub fn size(&self) -> usize {
        self.coeffs.len()
    }

    fn half(&self) -> i64 {
        (self.coeffs.len() / 2) as i64
    }

    pub fn get(&self, k: i64) -> Complex64 {
        let h = self.half();
        if k < -h || k >= h {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(k + h) as usize]
    }

    pub fn set(&mut self, k: i64, c: Complex64) {
        let h = self.half();
        assert!(k >= -h && k < h, "frequency {k} outside grid");
        self.coeffs[(k + h) as usize] = c;
    }

    pub fn frequencies(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let h = self.half();
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - h, c))
    }

    /// Coefficients at frequencies `0..N/2`.
    pub fn taylor(&self) -> Vec<Complex64> {
        let h = self.half() as usize;
        self.coeffs[h..].to_vec()
    }

    /// Highest frequency with a non-zero coefficient (0 when identically zero).
    pub fn bandwidth(&self) -> usize {
        self.frequencies().filter(|(_, c)| c.norm() > 0.0).map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn has_negative_frequencies(&self) -> bool {
        self.frequencies().any(|(k, c)| k < 0 && c.norm() > 0.0)
    }

    pub fn l2_norm_sqr(&self) -> f64 {
        crate::numeric::quad::compensated_sum(self.coeffs.iter().map(|c| c.norm_sqr()))
    }

    /// Evaluate the trigonometric sum on its grid.
    pub fn synthesize(&self) -> CircleGrid {
        let n = self.size();
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (k, c) in self.frequencies() {
            buf[k.rem_euclid(n as i64) as usize] = c;
        }
        fft::inverse(&mut buf);
        CircleGrid { values: buf }
    }
}

/// Discrete Fourier analysis of a grid function.
pub fn fourier_analyze(g: &CircleGrid) -> FourierSeries {
    let n = g.size();
    let mut buf = g.values.clone();
    fft::forward(&mut buf);
    let scale = 1.0 / n as f64;
    let h = (n / 2) as i64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for k in -h..h {
        coeffs[(k + h) as usize] = buf[k.rem_euclid(n as i64) as usize] * scale;
    }
    FourierSeries { coeffs }
}

/// Orthogonal projection onto non-negative frequencies.
pub fn riesz_project(f: &FourierSeries) -> FourierSeries {
    let mut out = f.clone();
    let h = out.half() as usize;
    for c in &mut out.coeffs[..h] {
        *c = Complex64::new(0.0, 0.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_grid_has_only_mean() {
        let g = CircleGrid::from_fn(16, |_| c(1.0, 0.0)).unwrap();
        let f = fourier_analyze(&g);
        for (k, ck) in f.frequencies() {
            let want = if k == 0 { 1.0 } else { 0.0 };
            assert!((ck - c(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn identity_is_first_harmonic() {
        let g = CircleGrid::from_fn(32, |t| Complex64::from_polar(1.0, t)).unwrap();
        let f = fourier_analyze(&g);
        assert!((f.get(1) - c(1.0, 0.0)).norm() < 1e-14);
        assert!(f.frequencies().filter(|(k, _)| *k != 1).all(|(_, v)| v.norm() < 1e-14));
    }

    #[test]
    fn half_sum_coefficients() {
        let g = CircleGrid::from_fn(8, |t| (c(1.0, 0.0) + Complex64::from_polar(1.0, t)) * 0.5).unwrap();
        let f = fourier_analyze(&g);
        assert!((f.get(0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((f.get(1) - c(0.5, 0.0)).norm() < 1e-15);
        assert!(f.frequencies().filter(|(k, _)| *k > 1 || *k < 0).all(|(_, v)| v.norm() < 1e-15));
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(CircleGrid::new(vec![c(0.0, 0.0); 12]).is_err());
        assert!(CircleGrid::new(vec![c(0.0, 0.0); 4]).is_err());
    }

    #[test]
    fn riesz_projection_examples() {
        let mut f = FourierSeries::zeros(16).unwrap();
        f.set(-1, c(1.0, 0.0));
        f.set(1, c(1.0, 0.0));
        let p = riesz_project(&f);
        assert_eq!(p.get(-1), c(0.0, 0.0));
        assert_eq!(p.get(1), c(1.0, 0.0));

        // conj(b) for b = (1+z)/2 projects to the constant 1/2
        let g = CircleGrid::from_fn(16, |t| ((c(1.0, 0.0) + Complex64::from_polar(1.0, t)) * 0.5).conj()).unwrap();
        let p = riesz_project(&fourier_analyze(&g));
        for (k, ck) in p.frequencies() {
            let want = if k == 0 { 0.5 } else { 0.0 };
            assert!((ck - c(want, 0.0)).norm() < 1e-15);
        }

        let analytic = FourierSeries::from_taylor(&[c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0)]);
        assert_eq!(riesz_project(&analytic), analytic);
    }

    proptest! {
        #[test]
        fn round_trip_and_parseval(exp in 3usize..9, seed in 0u64..1000) {
            let n = 1usize << exp;
            let vals: Vec<Complex64> = (0..n)
                .map(|k| {
                    let x = ((k as u64 * 2654435761 + seed * 97) % 1000) as f64 / 500.0 - 1.0;
                    let y = ((k as u64 * 40503 + seed * 13) % 997) as f64 / 498.5 - 1.0;
                    c(x, y)
                })
                .collect();
            let g = CircleGrid::new(vals.clone()).unwrap();
            let f = fourier_analyze(&g);
            let back = f.synthesize();
            let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
            for (a, b) in back.values().iter().zip(&vals) {
                prop_assert!((a - b).norm() <= 1e-10 * scale);
            }
            let lhs = g.mean_square();
            let rhs = f.l2_norm_sqr();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.max(1e-300));
        }
    }
}
