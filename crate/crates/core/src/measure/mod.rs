//! Finite positive measures on the closed disk.
//!
//! A [`DiskMeasure`] is a sum of point masses in the open disk, an absolutely
//! continuous part `h dm` on the circle, point masses on the circle and
//! measures carried by radii. Window masses `mu(S(I))` are exact for closed
//! forms and use quadrature elsewhere.

mod integrand;
mod spec;
mod weight;

pub use integrand::{l2mu_norm, Integrand, UnitIntegrand};
pub use spec::{AcSpec, MeasureSpec, PowerSpec, RadialSpec};
pub use weight::{weight_measure, ComplementWeight, ConstWeight, DiskWeight, MateWeight, ProductWeight};

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use crate::boundary::functions::{BoundaryFunction, Constant, PowerWeight};
use crate::error::{HbError, Result};
use crate::numeric::quad::{adaptive, compensated_sum};
use crate::numeric::wrap_angle;

/// Carleson window `S(I)` over the arc `I` with centre `center` and
/// normalized length `length`: points `z` with `z/|z|` in `I` and
/// `1 - |z| <= length / 2`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ArcWindow {
    pub center: f64,
    pub length: f64,
}

impl ArcWindow {
    pub fn new(center: f64, length: f64) -> Result<Self> {
        if !(length > 0.0 && length <= 1.0) {
            return Err(HbError::Domain(format!("arc length {length} not in (0, 1]")));
        }
        Ok(Self { center: wrap_angle(center), length })
    }

    /// The arc `(e^{-i theta}, e^{i theta})`.
    pub fn symmetric(theta: f64) -> Result<Self> {
        Self::new(0.0, theta / PI)
    }

    /// Unwrapped bounds `[c - pi L, c + pi L)`.
    pub fn bounds(&self) -> (f64, f64) {
        (self.center - PI * self.length, self.center + PI * self.length)
    }

    /// Whether the angle lies in the half-open arc.
    pub fn contains_angle(&self, t: f64) -> bool {
        if self.length >= 1.0 {
            return true;
        }
        let (a, _) = self.bounds();
        (t - a).rem_euclid(TAU) < TAU * self.length
    }

    pub fn contains(&self, z: Complex64) -> bool {
        1.0 - z.norm() <= 0.5 * self.length && self.contains_angle(z.arg())
    }
}

/// Density `sum_j c_j (1 - t)^{e_j}` on `[r0, 1)`, optionally times a bounded
/// weight evaluated by quadrature.
#[derive(Clone)]
pub struct RadialDensity {
    r0: f64,
    terms: Vec<(f64, f64)>,
    weight: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    label: String,
}

impl fmt::Debug for RadialDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialDensity")
            .field("r0", &self.r0)
            .field("terms", &self.terms)
            .field("weighted", &self.weight.is_some())
            .field("label", &self.label)
            .finish()
    }
}

impl RadialDensity {
    /// `scale (1 - t)^{-beta}` on `[0, 1)`; `beta < 1` keeps the mass finite.
    pub fn power(beta: f64, scale: f64) -> Result<Self> {
        if !(beta < 1.0) || !beta.is_finite() {
            return Err(HbError::Parameter {
                name: "beta".into(),
                reason: format!("{beta} >= 1 gives a radial measure of infinite mass"),
            });
        }
        if !(scale >= 0.0) || !scale.is_finite() {
            return Err(HbError::Parameter {
                name: "scale".into(),
                reason: format!("{scale} is not a finite nonnegative number"),
            });
        }
        Ok(Self { r0: 0.0, terms: vec![(scale, -beta)], weight: None, label: format!("{scale}(1-t)^-{beta}") })
    }

    /// General sum of powers on `[r0, 1)`.
    pub fn powers(r0: f64, terms: Vec<(f64, f64)>) -> Result<Self> {
        if !(0.0..1.0).contains(&r0) {
            return Err(HbError::Domain(format!("radial start {r0} not in [0, 1)")));
        }
        for &(c, e) in &terms {
            if !(e > -1.0) || !c.is_finite() {
                return Err(HbError::Parameter {
                    name: "exponent".into(),
                    reason: format!("term {c}(1-t)^{e} is not integrable"),
                });
            }
        }
        let label = terms.iter().map(|(c, e)| format!("{c}(1-t)^{e}")).collect::<Vec<_>>().join(" + ");
        Ok(Self { r0, terms, weight: None, label })
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn is_exact(&self) -> bool {
        self.weight.is_none()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn base_at(&self, s: f64) -> f64 {
        self.terms.iter().map(|&(c, e)| if c == 0.0 { 0.0 } else { c * s.powf(e) }).sum()
    }

    /// Density at `t`, given `s = 1 - t` exactly.
    pub fn density(&self, t: f64, s: f64) -> f64 {
        let base = self.base_at(s);
        match &self.weight {
            Some(w) if base != 0.0 => base * w(t),
            _ => base,
        }
    }

    /// Mass of `[1 - depth, 1)`. Taking the depth rather than the start
    /// keeps thin layers accurate.
    pub fn mass_within(&self, depth: f64) -> f64 {
        let depth = depth.min(1.0 - self.r0);
        if !(depth > 0.0) {
            return 0.0;
        }
        if self.weight.is_none() {
            return compensated_sum(self.terms.iter().map(|&(c, e)| c * depth.powf(e + 1.0) / (e + 1.0)));
        }
        self.mass_within_quadrature(depth)
    }

    /// As [`mass_within`](Self::mass_within) by tanh-sinh in `s = 1 - t`.
    pub fn mass_within_quadrature(&self, depth: f64) -> f64 {
        let depth = depth.min(1.0 - self.r0);
        if !(depth > 0.0) {
            return 0.0;
        }
        let f = |base: f64, off: f64| {
            let s = base + off;
            self.density(1.0 - s, s)
        };
        adaptive(&f, 0.0, depth, 1e-13)
    }

    /// `integral over [r0, 1) of density(t) g(t) dt`, splitting at `cuts`.
    pub fn integrate_against(&self, g: &dyn Fn(f64) -> f64, cuts: &[f64]) -> f64 {
        let mut pts = vec![self.r0];
        pts.extend(cuts.iter().copied().filter(|&c| c > self.r0 && c < 1.0));
        pts.push(1.0);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        let f = |base: f64, off: f64| {
            let s = if base == 1.0 { -off } else { (1.0 - base) - off };
            let t = base + off;
            let d = self.density(t, s);
            if d == 0.0 {
                0.0
            } else {
                d * g(t)
            }
        };
        compensated_sum(pts.windows(2).map(|w| adaptive(&f, w[0], w[1], 1e-12)))
    }

    /// Multiply by a polynomial in `s = 1 - t` exactly.
    fn times_polynomial(&self, poly: &[f64]) -> Self {
        let mut terms = Vec::new();
        for &(c, e) in &self.terms {
            for (m, &p) in poly.iter().enumerate() {
                if p != 0.0 && c != 0.0 {
                    terms.push((c * p, e + m as f64));
                }
            }
        }
        Self { r0: self.r0, terms, weight: self.weight.clone(), label: format!("({}) * poly", self.label) }
    }

    fn times_weight(&self, w: Arc<dyn Fn(f64) -> f64 + Send + Sync>, label: &str) -> Self {
        let weight: Arc<dyn Fn(f64) -> f64 + Send + Sync> = match &self.weight {
            Some(old) => {
                let old = old.clone();
                Arc::new(move |t| old(t) * w(t))
            }
            None => w,
        };
        Self {
            r0: self.r0,
            terms: self.terms.clone(),
            weight: Some(weight),
            label: format!("({}) * {label}", self.label),
        }
    }

    fn scaled(&self, k: f64) -> Self {
        Self {
            r0: self.r0,
            terms: self.terms.iter().map(|&(c, e)| (c * k, e)).collect(),
            weight: self.weight.clone(),
            label: format!("{k} * ({})", self.label),
        }
    }
}

/// Radial measure on the segment `{t e^{i angle}}`.
#[derive(Debug, Clone)]
pub struct RadialComponent {
    pub angle: f64,
    pub density: RadialDensity,
}

#[derive(Debug, Clone, Default)]
pub struct DiskMeasure {
    disk_atoms: Vec<(Complex64, f64)>,
    ac: Option<Arc<dyn BoundaryFunction>>,
    singular_atoms: Vec<(f64, f64)>,
    radial: Vec<RadialComponent>,
    label: String,
}

fn check_weight(w: f64, what: &str) -> Result<()> {
    if !(w >= 0.0) || !w.is_finite() {
        return Err(HbError::Domain(format!("{what} weight {w} is not a finite nonnegative number")));
    }
    Ok(())
}

impl DiskMeasure {
    pub fn zero() -> Self {
        Self { label: "0".into(), ..Default::default() }
    }

    /// Normalized Lebesgue measure `m` on the circle.
    pub fn lebesgue() -> Self {
        Self::zero().with_ac(Arc::new(Constant(1.0))).expect("valid density").with_label("m")
    }

    /// `scale (1 - t)^{-beta} dt` on `[0, 1)`.
    pub fn mu_beta(beta: f64, scale: f64) -> Result<Self> {
        Ok(Self::zero().with_radial(0.0, RadialDensity::power(beta, scale)?).with_label(format!("mu_beta({beta})")))
    }

    /// `scale |1 - z|^{-beta} dm` (rotated to `angle`).
    pub fn boundary_power(beta: f64, scale: f64, angle: f64) -> Result<Self> {
        if !(beta < 1.0) || !beta.is_finite() {
            return Err(HbError::Parameter { name: "beta".into(), reason: format!("{beta} >= 1 gives infinite mass") });
        }
        check_weight(scale, "density scale")?;
        Ok(Self::zero()
            .with_ac(Arc::new(PowerWeight::new(scale, -beta, angle)))?
            .with_label(format!("|1-z|^-{beta} dm")))
    }

    pub fn with_disk_atom(mut self, z: Complex64, w: f64) -> Result<Self> {
        if !(z.norm() < 1.0) {
            return Err(HbError::Domain(format!("disk atom {z} is not in the open disk")));
        }
        check_weight(w, "atom")?;
        self.disk_atoms.push((z, w));
        Ok(self)
    }

    pub fn with_singular_atom(mut self, angle: f64, w: f64) -> Result<Self> {
        check_weight(w, "atom")?;
        self.singular_atoms.push((wrap_angle(angle), w));
        Ok(self)
    }

    /// Adds `h dm`; `h` must be nonnegative with finite integral.
    pub fn with_ac(mut self, h: Arc<dyn BoundaryFunction>) -> Result<Self> {
        if h.singularities().iter().any(|s| !s.integrable()) {
            return Err(HbError::Domain(format!("density {} is not integrable", h.label())));
        }
        self.ac = Some(match self.ac.take() {
            None => h,
            Some(old) => Arc::new(Sum(vec![old, h])),
        });
        Ok(self)
    }

    pub fn with_radial(mut self, angle: f64, density: RadialDensity) -> Self {
        self.radial.push(RadialComponent { angle: wrap_angle(angle), density });
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn disk_atoms(&self) -> &[(Complex64, f64)] {
        &self.disk_atoms
    }

    pub fn ac(&self) -> Option<&Arc<dyn BoundaryFunction>> {
        self.ac.as_ref()
    }

    pub fn singular_atoms(&self) -> &[(f64, f64)] {
        &self.singular_atoms
    }

    pub fn radial(&self) -> &[RadialComponent] {
        &self.radial
    }

    /// Whether any mass sits on the circle.
    pub fn has_boundary_part(&self) -> bool {
        self.ac.is_some() || !self.singular_atoms.is_empty()
    }

    /// `t mu`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        check_weight(t, "scale")?;
        Ok(Self {
            disk_atoms: self.disk_atoms.iter().map(|&(z, w)| (z, w * t)).collect(),
            ac: self.ac.as_ref().map(|h| Arc::new(Scaled(t, h.clone())) as Arc<dyn BoundaryFunction>),
            singular_atoms: self.singular_atoms.iter().map(|&(a, w)| (a, w * t)).collect(),
            radial: self
                .radial
                .iter()
                .map(|r| RadialComponent { angle: r.angle, density: r.density.scaled(t) })
                .collect(),
            label: format!("{t} * {}", self.label),
        })
    }

    pub fn total_mass(&self) -> f64 {
        let mut parts = vec![];
        parts.extend(self.disk_atoms.iter().map(|a| a.1));
        parts.extend(self.singular_atoms.iter().map(|a| a.1));
        if let Some(h) = &self.ac {
            parts.push(h.arc_integral(-PI, PI));
        }
        parts.extend(self.radial.iter().map(|r| r.density.mass_within(1.0)));
        compensated_sum(parts)
    }

    /// `mu(S(I))`.
    pub fn window_mass(&self, w: &ArcWindow) -> f64 {
        let mut parts = Vec::new();
        for &(z, m) in &self.disk_atoms {
            if w.contains(z) {
                parts.push(m);
            }
        }
        for &(a, m) in &self.singular_atoms {
            if w.contains_angle(a) {
                parts.push(m);
            }
        }
        if let Some(h) = &self.ac {
            let (a, b) = w.bounds();
            parts.push(h.arc_integral(a, b));
        }
        for r in &self.radial {
            if w.contains_angle(r.angle) {
                parts.push(r.density.mass_within(0.5 * w.length));
            }
        }
        compensated_sum(parts)
    }

    /// As [`window_mass`](Self::window_mass) with radial masses by quadrature.
    pub fn window_mass_quadrature(&self, w: &ArcWindow) -> f64 {
        let exact: f64 = self
            .radial
            .iter()
            .filter(|r| w.contains_angle(r.angle))
            .map(|r| r.density.mass_within(0.5 * w.length))
            .sum();
        let quad: f64 = self
            .radial
            .iter()
            .filter(|r| w.contains_angle(r.angle))
            .map(|r| r.density.mass_within_quadrature(0.5 * w.length))
            .sum();
        self.window_mass(w) - exact + quad
    }
}

/// Sum of boundary densities.
#[derive(Debug, Clone)]
struct Sum(Vec<Arc<dyn BoundaryFunction>>);

impl BoundaryFunction for Sum {
    fn value_at(&self, base: f64, off: f64) -> f64 {
        self.0.iter().map(|f| f.value_at(base, off)).sum()
    }

    fn singularities(&self) -> Vec<crate::boundary::functions::Singularity> {
        // the most singular exponent at each point governs integrability
        let mut out: Vec<crate::boundary::functions::Singularity> = Vec::new();
        for s in self.0.iter().flat_map(|f| f.singularities()) {
            match out.iter_mut().find(|o| wrap_angle(o.angle - s.angle).abs() < 1e-14) {
                Some(o) => o.exponent = o.exponent.min(s.exponent),
                None => out.push(s),
            }
        }
        out
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        self.0.iter().flat_map(|f| f.breakpoints(a, b)).collect()
    }

    fn quad_tol(&self) -> f64 {
        self.0.iter().map(|f| f.quad_tol()).fold(0.0, f64::max)
    }

    fn arc_integral(&self, a: f64, b: f64) -> f64 {
        self.0.iter().map(|f| f.arc_integral(a, b)).sum()
    }

    fn arc_integral_excised(&self, a: f64, b: f64, eps: f64) -> f64 {
        self.0.iter().map(|f| f.arc_integral_excised(a, b, eps)).sum()
    }

    fn label(&self) -> String {
        self.0.iter().map(|f| f.label()).collect::<Vec<_>>().join(" + ")
    }
}

/// `k f`.
#[derive(Debug, Clone)]
struct Scaled(f64, Arc<dyn BoundaryFunction>);

impl BoundaryFunction for Scaled {
    fn value_at(&self, base: f64, off: f64) -> f64 {
        self.0 * self.1.value_at(base, off)
    }

    fn singularities(&self) -> Vec<crate::boundary::functions::Singularity> {
        self.1.singularities()
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        self.1.breakpoints(a, b)
    }

    fn quad_tol(&self) -> f64 {
        self.1.quad_tol()
    }

    fn arc_integral(&self, a: f64, b: f64) -> f64 {
        self.0 * self.1.arc_integral(a, b)
    }

    fn arc_integral_excised(&self, a: f64, b: f64, eps: f64) -> f64 {
        self.0 * self.1.arc_integral_excised(a, b, eps)
    }

    fn label(&self) -> String {
        format!("{} * {}", self.0, self.1.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lebesgue_window() {
        let m = DiskMeasure::lebesgue();
        let w = ArcWindow::new(1.0, 0.25).unwrap();
        assert!((m.window_mass(&w) - 0.25).abs() < 1e-14);
        assert!((m.total_mass() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mu_beta_closed_form() {
        let mu = DiskMeasure::mu_beta(0.5, 1.0).unwrap();
        for theta in [1e-6, 0.01, 0.1, 1.0, 3.0] {
            let w = ArcWindow::symmetric(theta).unwrap();
            let want = (theta / TAU).powf(0.5) / 0.5;
            assert!((mu.window_mass(&w) - want).abs() <= 1e-15 * want.max(1.0));
            assert!((mu.window_mass_quadrature(&w) - want).abs() <= 1e-9 * want);
        }
    }

    #[test]
    fn disk_atom_outside_window() {
        let mu = DiskMeasure::zero().with_disk_atom(Complex64::new(0.5, 0.0), 2.0).unwrap();
        assert_eq!(mu.window_mass(&ArcWindow::new(0.0, 0.5).unwrap()), 0.0);
        assert_eq!(mu.window_mass(&ArcWindow::new(0.0, 1.0).unwrap()), 2.0);
    }

    #[test]
    fn rejects_infinite_mass() {
        assert!(DiskMeasure::mu_beta(1.0, 1.0).is_err());
        assert!(DiskMeasure::boundary_power(1.5, 1.0, 0.0).is_err());
        assert!(DiskMeasure::zero().with_disk_atom(Complex64::new(1.0, 0.0), 1.0).is_err());
        assert!(DiskMeasure::zero().with_singular_atom(0.0, -1.0).is_err());
    }

    #[test]
    fn half_open_arcs_split_atoms_once() {
        let mu = DiskMeasure::zero().with_singular_atom(0.0, 1.0).unwrap();
        let left = ArcWindow::new(-PI / 4.0, 0.25).unwrap();
        let right = ArcWindow::new(PI / 4.0, 0.25).unwrap();
        assert_eq!(mu.window_mass(&left) + mu.window_mass(&right), 1.0);
    }
}
