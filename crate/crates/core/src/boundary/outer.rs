//! Outer functions from boundary log-moduli.
//!
//! An outer function is stored through the Taylor coefficients `L_k` of its
//! logarithm, `log F(z) = L_0 + sum_{k >= 1} L_k z^k`, where `2 L_0` and `L_k`
//! are the Fourier coefficients of `log |F|^2` on the circle.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::functions::BoundaryFunction;
use super::grid::CircleGrid;
use crate::error::{HbError, Result};
use crate::numeric::{classify_growth, fft, Trend};

#[derive(Debug, Clone, PartialEq)]
pub struct OuterFunction {
    log_coeffs: Vec<Complex64>,
    grid_size: usize,
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

fn check_grid(n: usize) -> Result<()> {
    if n < 8 || !n.is_power_of_two() {
        return Err(HbError::Config(format!("grid size {n} is not a power of two >= 8")));
    }
    Ok(())
}

impl OuterFunction {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(HbError::Domain(format!("outer constant {c} must be positive")));
        }
        Ok(Self { log_coeffs: vec![Complex64::new(c.ln(), 0.0)], grid_size: 8 })
    }

    pub fn from_log_coeffs(log_coeffs: Vec<Complex64>, grid_size: usize) -> Self {
        Self { log_coeffs, grid_size }
    }

    /// From point samples `w = |F|^2 > 0` on a uniform grid (trapezoid rule).
    pub fn from_modulus_sq_grid(w: &CircleGrid) -> Result<Self> {
        let n = w.size();
        let mut logs = Vec::with_capacity(n);
        for (k, v) in w.values().iter().enumerate() {
            if v.im != 0.0 || !(v.re > 0.0) {
                return Err(HbError::Domain(format!("sample {k} of the squared modulus is not positive: {v}")));
            }
            logs.push(v.re.ln());
        }
        // trapezoid sums on nested subgrids expose a divergent log integral
        let mut sums = Vec::new();
        let mut step = n / 8;
        while step >= 1 {
            let s: f64 = logs.iter().step_by(step).sum::<f64>() / (n / step) as f64;
            sums.push(s);
            step /= 2;
        }
        if classify_growth(&sums) == Trend::Divergent {
            return Err(HbError::LogIntegrability(format!("log-modulus means {sums:?} diverge under refinement")));
        }
        let mut buf: Vec<Complex64> = logs.iter().map(|&l| Complex64::new(l, 0.0)).collect();
        fft::forward(&mut buf);
        let scale = 1.0 / n as f64;
        let mut coeffs: Vec<Complex64> = buf[..n / 2].iter().map(|c| c * scale).collect();
        coeffs[0] *= 0.5;
        Ok(Self { log_coeffs: coeffs, grid_size: n })
    }

    /// From exact cell averages of `log |F|^2` over the cells centred at the
    /// grid points. The averaging is undone frequency by frequency.
    pub fn from_log_cell_averages(avgs: &[f64]) -> Result<Self> {
        let n = avgs.len();
        check_grid(n)?;
        if let Some(k) = avgs.iter().position(|v| !v.is_finite()) {
            return Err(HbError::LogIntegrability(format!("cell {k} has a non-finite log average")));
        }
        let mut buf: Vec<Complex64> = avgs.iter().map(|&l| Complex64::new(l, 0.0)).collect();
        fft::forward(&mut buf);
        let scale = 1.0 / n as f64;
        let mut coeffs = Vec::with_capacity(n / 2);
        coeffs.push(buf[0] * scale * 0.5);
        for (k, v) in buf.iter().enumerate().take(n / 2).skip(1) {
            coeffs.push(v * scale / sinc(PI * k as f64 / n as f64));
        }
        Ok(Self { log_coeffs: coeffs, grid_size: n })
    }

    /// From a boundary function equal to `log |F|^2`.
    pub fn from_log_boundary(f: &dyn BoundaryFunction, n: usize) -> Result<Self> {
        check_grid(n)?;
        let avgs: Vec<f64> = f.cell_integrals(n).into_iter().map(|v| v * n as f64).collect();
        Self::from_log_cell_averages(&avgs)
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn log_coeffs(&self) -> &[Complex64] {
        &self.log_coeffs
    }

    /// Largest radius at which the discretized Herglotz kernel is resolved.
    pub fn resolved_radius(&self) -> f64 {
        1.0 - 4.0 * PI / self.grid_size as f64
    }

    pub fn check_resolved(&self, z: Complex64) -> Result<()> {
        if z.norm() > self.resolved_radius() {
            return Err(HbError::Resolution(format!(
                "|z| = {} exceeds the resolved radius {} of a 2^{} grid",
                z.norm(),
                self.resolved_radius(),
                self.grid_size.trailing_zeros()
            )));
        }
        Ok(())
    }

    pub fn log_eval(&self, z: Complex64) -> Complex64 {
        self.log_coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.log_eval(z).exp()
    }

    pub fn value_at_zero(&self) -> f64 {
        self.log_coeffs[0].re.exp()
    }

    pub fn reciprocal(&self) -> Self {
        Self { log_coeffs: self.log_coeffs.iter().map(|c| -c).collect(), grid_size: self.grid_size }
    }

    pub fn product(&self, other: &OuterFunction) -> Self {
        let n = self.log_coeffs.len().max(other.log_coeffs.len());
        let get = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or_default();
        Self {
            log_coeffs: (0..n).map(|k| get(&self.log_coeffs, k) + get(&other.log_coeffs, k)).collect(),
            grid_size: self.grid_size.max(other.grid_size),
        }
    }

    /// `log F(r e^{2 pi i j/m})`, `j < m`, folding frequencies modulo `m`.
    pub fn log_values_on_circle(&self, r: f64, m: usize) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        let mut rk = 1.0;
        for (k, c) in self.log_coeffs.iter().enumerate() {
            buf[k % m] += c * rk;
            rk *= r;
        }
        fft::inverse(&mut buf);
        buf
    }

    pub fn values_on_circle(&self, r: f64, m: usize) -> Vec<Complex64> {
        self.log_values_on_circle(r, m).into_iter().map(|v| v.exp()).collect()
    }

    /// Taylor coefficients `0..n` of `F`, by an FFT on the circle of radius
    /// `1 - 2/n` with enough points to make aliasing negligible.
    pub fn taylor(&self, n: usize) -> Vec<Complex64> {
        taylor_on_radius(|r, p| self.values_on_circle(r, p), n)
    }
}

/// Taylor coefficients `0..n` of a function sampled on circles, using radius
/// `1 - 2/n` and `16 n` points (aliasing below `e^{-32}`).
pub fn taylor_on_radius<F: Fn(f64, usize) -> Vec<Complex64>>(values: F, n: usize) -> Vec<Complex64> {
    let m = n.max(8);
    let r = 1.0 - 2.0 / m as f64;
    let p = (16 * m).next_power_of_two();
    let mut buf = values(r, p);
    fft::forward(&mut buf);
    let scale = 1.0 / p as f64;
    let mut out = Vec::with_capacity(n);
    let mut rk = 1.0;
    for c in buf.iter().take(n) {
        out.push(c * scale / rk);
        rk *= r;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::functions::PowerWeight;
    use crate::boundary::modulus::{BoundaryModulus, ModulusFn, ModulusKind, PowerComplement};
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_modulus_gives_one() {
        let w = CircleGrid::from_fn(64, |_| c(1.0, 0.0)).unwrap();
        let f = OuterFunction::from_modulus_sq_grid(&w).unwrap();
        for z in [c(0.0, 0.0), c(0.5, 0.3), c(-0.9, 0.0)] {
            assert!((f.eval(z) - c(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn nonpositive_sample_is_rejected() {
        let mut v = vec![c(1.0, 0.0); 16];
        v[3] = c(0.0, 0.0);
        let w = CircleGrid::new(v).unwrap();
        assert!(matches!(OuterFunction::from_modulus_sq_grid(&w), Err(HbError::Domain(_))));
    }

    #[test]
    fn smooth_rational_modulus_is_reproduced() {
        // |a|^2 for a = (1-z)/2 has a boundary zero, use (2 - z)/2 on a point grid
        let w = CircleGrid::from_fn(1024, |t| c((c(2.0, 0.0) - Complex64::from_polar(1.0, t)).norm_sqr() / 4.0, 0.0))
            .unwrap();
        let f = OuterFunction::from_modulus_sq_grid(&w).unwrap();
        for z in [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.9), c(-0.6, 0.6)] {
            let want = (c(2.0, 0.0) - z) / 2.0;
            assert!((f.eval(z) - want).norm() < 1e-12);
        }
    }

    #[test]
    fn half_sum_mate_from_cell_averages() {
        // |a|^2 = |(1-z)/2|^2 = sin^2(t/2) = |1 - e^{it}|^2 / 4
        let w = PowerWeight::new(1.0, 2.0, 0.0);
        let log_w = LogOf(Arc::new(w), -4f64.ln());
        let f = OuterFunction::from_log_boundary(&log_w, 1 << 14).unwrap();
        for z in [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.9), c(0.9, 0.0), c(-0.6, 0.6)] {
            let want = (c(1.0, 0.0) - z) / 2.0;
            assert!((f.eval(z) - want).norm() < 1e-8, "{z}: {} vs {want}", f.eval(z));
        }
    }

    #[test]
    fn fractional_power_mate() {
        let m: Arc<dyn BoundaryModulus> = Arc::new(PowerComplement { alpha: 0.25 });
        let log_w = ModulusFn::new(m, ModulusKind::LogComplementSq);
        let f = OuterFunction::from_log_boundary(&log_w, 1 << 14).unwrap();
        let cst = 2f64.powf(-0.25);
        for z in [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.9)] {
            let want = cst * (c(1.0, 0.0) - z).powf(0.25);
            assert!((f.eval(z) - want).norm() < 1e-6, "{z}: {} vs {want}", f.eval(z));
        }
    }

    #[test]
    fn taylor_coefficients_of_binomial() {
        let m: Arc<dyn BoundaryModulus> = Arc::new(PowerComplement { alpha: 0.25 });
        let f = OuterFunction::from_log_boundary(&ModulusFn::new(m, ModulusKind::LogComplementSq), 1 << 14).unwrap();
        let t = f.taylor(64);
        // 2^{-1/4} (1-z)^{1/4}: c_k = c_{k-1} (k - 1 - 1/4)/k
        let mut want = 2f64.powf(-0.25);
        for (k, v) in t.iter().enumerate() {
            if k > 0 {
                want *= (k as f64 - 1.25) / k as f64;
            }
            assert!((v - c(want, 0.0)).norm() < 1e-6, "k={k}: {v} vs {want}");
        }
    }

    #[test]
    fn resolved_radius_guard() {
        let f = OuterFunction::from_log_coeffs(vec![c(0.0, 0.0)], 1 << 10);
        assert!(f.check_resolved(c(0.9, 0.0)).is_ok());
        assert!(f.check_resolved(c(0.999, 0.0)).is_err());
    }

    #[derive(Debug)]
    struct LogOf(Arc<dyn BoundaryFunction>, f64);

    impl BoundaryFunction for LogOf {
        fn value_at(&self, base: f64, off: f64) -> f64 {
            self.0.value_at(base, off).ln() + self.1
        }
        fn singularities(&self) -> Vec<crate::boundary::Singularity> {
            self.0
                .singularities()
                .into_iter()
                .map(|s| crate::boundary::Singularity { angle: s.angle, exponent: 0.0 })
                .collect()
        }
        fn label(&self) -> String {
            "log".into()
        }
    }
}
