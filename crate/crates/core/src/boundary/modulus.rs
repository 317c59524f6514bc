//! Boundary moduli `|b|` of symbols, with `1 - |b|^2` computed without
//! cancellation, and adapters turning them into [`BoundaryFunction`]s.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use super::functions::{BoundaryFunction, Singularity};
use crate::numeric::wrap_angle;

/// Which of `|b|^2` and `1 - |b|^2` a singularity list refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModPart {
    ModulusSq,
    ComplementSq,
}

/// Singularity exponent used for a complement that vanishes to infinite order.
pub const FLAT_ZERO: f64 = f64::INFINITY;

pub trait BoundaryModulus: Send + Sync + fmt::Debug {
    /// `|b|^2` at `base + off`.
    fn modulus_sq(&self, base: f64, off: f64) -> f64;

    /// `1 - |b|^2` at `base + off`.
    fn complement_sq(&self, base: f64, off: f64) -> f64;

    fn log_modulus_sq(&self, base: f64, off: f64) -> f64 {
        self.modulus_sq(base, off).ln()
    }

    fn log_complement_sq(&self, base: f64, off: f64) -> f64 {
        self.complement_sq(base, off).ln()
    }

    /// `log(1 - |b|)`.
    fn log_one_minus(&self, base: f64, off: f64) -> f64 {
        (self.complement_sq(base, off) / (1.0 + self.modulus_sq(base, off).sqrt())).ln()
    }

    /// Zeros of `|b|^2` or of `1 - |b|^2` with their local power exponents.
    fn singularities(&self, part: ModPart) -> Vec<Singularity>;

    fn breakpoints(&self, _a: f64, _b: f64) -> Vec<f64> {
        Vec::new()
    }

    /// Normalized measure of `{|b| = 1}` when it is known exactly.
    fn unimodular_measure(&self) -> Option<f64> {
        None
    }

    fn label(&self) -> String;
}

/// `|b| = c` on the whole circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantModulus(pub f64);

impl BoundaryModulus for ConstantModulus {
    fn modulus_sq(&self, _base: f64, _off: f64) -> f64 {
        self.0 * self.0
    }

    fn complement_sq(&self, _base: f64, _off: f64) -> f64 {
        (1.0 - self.0) * (1.0 + self.0)
    }

    fn singularities(&self, _part: ModPart) -> Vec<Singularity> {
        Vec::new()
    }

    fn unimodular_measure(&self) -> Option<f64> {
        Some(if self.0 >= 1.0 { 1.0 } else { 0.0 })
    }

    fn label(&self) -> String {
        format!("|b| = {}", self.0)
    }
}

/// Inner symbols: `|b| = 1` almost everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Unimodular;

impl BoundaryModulus for Unimodular {
    fn modulus_sq(&self, _base: f64, _off: f64) -> f64 {
        1.0
    }

    fn complement_sq(&self, _base: f64, _off: f64) -> f64 {
        0.0
    }

    fn singularities(&self, _part: ModPart) -> Vec<Singularity> {
        Vec::new()
    }

    fn unimodular_measure(&self) -> Option<f64> {
        Some(1.0)
    }

    fn label(&self) -> String {
        "inner".into()
    }
}

/// Symbol with `1 - |b|^2 = |sin(t/2)|^{2 alpha}`, i.e. the mate is
/// `2^{-alpha} (1 - z)^alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerComplement {
    pub alpha: f64,
}

impl BoundaryModulus for PowerComplement {
    fn modulus_sq(&self, base: f64, off: f64) -> f64 {
        // 1 - cos^{2 alpha}(e/2) with e the distance to pi
        let e = wrap_angle(base - PI) + off;
        let s = (0.5 * e).sin();
        -(self.alpha * (-s * s).ln_1p()).exp_m1()
    }

    fn complement_sq(&self, base: f64, off: f64) -> f64 {
        let d = wrap_angle(base) + off;
        (0.5 * d).sin().abs().powf(2.0 * self.alpha)
    }

    fn log_complement_sq(&self, base: f64, off: f64) -> f64 {
        let d = wrap_angle(base) + off;
        2.0 * self.alpha * (0.5 * d).sin().abs().ln()
    }

    fn singularities(&self, part: ModPart) -> Vec<Singularity> {
        match part {
            ModPart::ModulusSq => vec![Singularity::new(PI, 2.0)],
            ModPart::ComplementSq => vec![Singularity::new(0.0, 2.0 * self.alpha)],
        }
    }

    fn unimodular_measure(&self) -> Option<f64> {
        Some(0.0)
    }

    fn label(&self) -> String {
        format!("1-|b|^2 = |sin(t/2)|^{}", 2.0 * self.alpha)
    }
}

/// `|b| = 1 - exp(-1/t^2)` for `t` in `[-pi, pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GaussExtreme;

impl GaussExtreme {
    fn gap(base: f64, off: f64) -> f64 {
        let t = wrap_angle(base) + off;
        (-1.0 / (t * t)).exp()
    }
}

impl BoundaryModulus for GaussExtreme {
    fn modulus_sq(&self, base: f64, off: f64) -> f64 {
        let g = Self::gap(base, off);
        (1.0 - g) * (1.0 - g)
    }

    fn complement_sq(&self, base: f64, off: f64) -> f64 {
        let g = Self::gap(base, off);
        g * (2.0 - g)
    }

    fn log_complement_sq(&self, base: f64, off: f64) -> f64 {
        let t = wrap_angle(base) + off;
        let g = Self::gap(base, off);
        -1.0 / (t * t) + (2.0 - g).ln()
    }

    fn log_one_minus(&self, base: f64, off: f64) -> f64 {
        // analytic, so the underflow of exp(-1/t^2) near 0 is harmless
        let t = wrap_angle(base) + off;
        -1.0 / (t * t)
    }

    fn singularities(&self, part: ModPart) -> Vec<Singularity> {
        match part {
            ModPart::ModulusSq => Vec::new(),
            ModPart::ComplementSq => vec![Singularity::new(0.0, FLAT_ZERO)],
        }
    }

    fn unimodular_measure(&self) -> Option<f64> {
        Some(0.0)
    }

    fn label(&self) -> String {
        "|b| = 1 - exp(-1/t^2)".into()
    }
}

/// `|b|` given by samples, constant on the cell around each grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct GridModulus {
    samples: Vec<f64>,
}

impl GridModulus {
    pub fn new(samples: Vec<f64>) -> Self {
        Self { samples }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    fn at(&self, t: f64) -> f64 {
        let n = self.samples.len();
        let k = (t * n as f64 / TAU).round() as i64;
        self.samples[k.rem_euclid(n as i64) as usize]
    }
}

impl BoundaryModulus for GridModulus {
    fn modulus_sq(&self, base: f64, off: f64) -> f64 {
        let m = self.at(base + off);
        m * m
    }

    fn complement_sq(&self, base: f64, off: f64) -> f64 {
        let m = self.at(base + off);
        (1.0 - m) * (1.0 + m)
    }

    fn singularities(&self, _part: ModPart) -> Vec<Singularity> {
        Vec::new()
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let n = self.samples.len();
        let h = TAU / n as f64;
        let first = ((a + 0.5 * h) / h).ceil() as i64;
        let last = ((b + 0.5 * h) / h).floor() as i64;
        (first..=last).map(|k| k as f64 * h - 0.5 * h).collect()
    }

    fn unimodular_measure(&self) -> Option<f64> {
        let hits = self.samples.iter().filter(|&&s| s >= 1.0).count();
        Some(hits as f64 / self.samples.len() as f64)
    }

    fn label(&self) -> String {
        format!("|b| samples[{}]", self.samples.len())
    }
}

/// Scalar functions of a boundary modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusKind {
    ModulusSq,
    ComplementSq,
    InvComplementSq,
    OneMinusModulus,
    InvOneMinusModulus,
    LogModulusSq,
    LogComplementSq,
    LogOneMinusModulus,
}

/// A [`BoundaryModulus`] viewed through one of the [`ModulusKind`] maps.
#[derive(Debug, Clone)]
pub struct ModulusFn {
    pub modulus: Arc<dyn BoundaryModulus>,
    pub kind: ModulusKind,
}

impl ModulusFn {
    pub fn new(modulus: Arc<dyn BoundaryModulus>, kind: ModulusKind) -> Self {
        Self { modulus, kind }
    }

    pub fn shared(modulus: &Arc<dyn BoundaryModulus>, kind: ModulusKind) -> Arc<dyn BoundaryFunction> {
        Arc::new(Self::new(modulus.clone(), kind))
    }
}

fn log_exponent(e: f64) -> f64 {
    if e.is_infinite() {
        -2.0
    } else {
        0.0
    }
}

impl BoundaryFunction for ModulusFn {
    fn value_at(&self, base: f64, off: f64) -> f64 {
        let m = &self.modulus;
        match self.kind {
            ModulusKind::ModulusSq => m.modulus_sq(base, off),
            ModulusKind::ComplementSq => m.complement_sq(base, off),
            ModulusKind::InvComplementSq => 1.0 / m.complement_sq(base, off),
            ModulusKind::OneMinusModulus => m.complement_sq(base, off) / (1.0 + m.modulus_sq(base, off).sqrt()),
            ModulusKind::InvOneMinusModulus => (1.0 + m.modulus_sq(base, off).sqrt()) / m.complement_sq(base, off),
            ModulusKind::LogModulusSq => m.log_modulus_sq(base, off),
            ModulusKind::LogComplementSq => m.log_complement_sq(base, off),
            ModulusKind::LogOneMinusModulus => m.log_one_minus(base, off),
        }
    }

    fn singularities(&self) -> Vec<Singularity> {
        let m = &self.modulus;
        let map = |part: ModPart, f: &dyn Fn(f64) -> f64| -> Vec<Singularity> {
            m.singularities(part).into_iter().map(|s| Singularity { angle: s.angle, exponent: f(s.exponent) }).collect()
        };
        match self.kind {
            ModulusKind::ModulusSq => map(ModPart::ModulusSq, &|e| e),
            ModulusKind::ComplementSq | ModulusKind::OneMinusModulus => {
                map(ModPart::ComplementSq, &|e| if e.is_infinite() { 0.0 } else { e })
            }
            ModulusKind::InvComplementSq | ModulusKind::InvOneMinusModulus => map(ModPart::ComplementSq, &|e| -e),
            ModulusKind::LogModulusSq => map(ModPart::ModulusSq, &log_exponent),
            ModulusKind::LogComplementSq | ModulusKind::LogOneMinusModulus => map(ModPart::ComplementSq, &log_exponent),
        }
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        self.modulus.breakpoints(a, b)
    }

    fn label(&self) -> String {
        format!("{:?}[{}]", self.kind, self.modulus.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_complement_is_consistent() {
        let m = PowerComplement { alpha: 0.25 };
        for &t in &[0.1, 1.0, 2.0, 3.0, -2.5] {
            let s = m.modulus_sq(t, 0.0) + m.complement_sq(t, 0.0);
            assert!((s - 1.0).abs() < 1e-14);
        }
        // |b|^2 vanishes quadratically at pi and the offset form resolves it
        let v = m.modulus_sq(-PI, 1e-8);
        assert!((v - 0.25 * 0.25e-16).abs() < 1e-30, "{v}");
    }

    #[test]
    fn gauss_extreme_log_is_analytic() {
        let g = GaussExtreme;
        assert_eq!(g.log_one_minus(0.0, 1e-3), -1e6);
        assert!(g.complement_sq(0.0, 1e-3) == 0.0);
        let t: f64 = 1.0;
        let want = (1.0 - (-1.0f64).exp()).powi(2);
        assert!((g.modulus_sq(t, 0.0) - want).abs() < 1e-15);
    }

    #[test]
    fn modulus_fn_integrates_complement() {
        // mean of |sin(t/2)| = 2/pi
        let m: Arc<dyn BoundaryModulus> = Arc::new(PowerComplement { alpha: 0.5 });
        let f = ModulusFn::new(m, ModulusKind::ComplementSq);
        assert!((f.arc_integral(-PI, PI) - 2.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn inverse_complement_of_half_power_is_integrable() {
        let m: Arc<dyn BoundaryModulus> = Arc::new(PowerComplement { alpha: 0.25 });
        let f = ModulusFn::new(m, ModulusKind::InvComplementSq);
        let v = f.arc_integral(-PI, PI);
        // int_0^pi sin(x)^{-1/2} dx / pi = B(1/4, 1/2)/pi
        let want = 5.244_115_108_584_24 / PI;
        assert!((v - want).abs() < 1e-11, "{v} vs {want}");
    }
}
