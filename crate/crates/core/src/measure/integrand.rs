//! `L^2(mu)` norms of analytic functions.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

use super::DiskMeasure;
use crate::boundary::functions::{integrate_arc, BoundaryFunction, Constant, Product};
use crate::error::{HbError, Result};
use crate::numeric::quad::compensated_sum;

/// `|f|^2` for an analytic `f` on the disk, with boundary values when they
/// are declared.
pub trait Integrand: Sync {
    fn interior_sq(&self, z: Complex64) -> f64;

    /// `|f|^2` on the circle; `None` when `f` has no declared boundary values.
    fn boundary_sq(&self) -> Option<Arc<dyn BoundaryFunction>>;

    /// Points of `[0, 1)` where `t -> |f(t e^{i angle})|^2` varies quickly.
    fn radial_cuts(&self, _angle: f64) -> Vec<f64> {
        Vec::new()
    }
}

/// `f = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitIntegrand;

impl Integrand for UnitIntegrand {
    fn interior_sq(&self, _z: Complex64) -> f64 {
        1.0
    }

    fn boundary_sq(&self) -> Option<Arc<dyn BoundaryFunction>> {
        Some(Arc::new(Constant(1.0)))
    }
}

/// `||f||_mu`, possibly infinite.
pub fn l2mu_norm(f: &dyn Integrand, mu: &DiskMeasure) -> Result<f64> {
    let mut parts = Vec::new();
    for &(z, w) in &mu.disk_atoms {
        parts.push(w * f.interior_sq(z));
    }
    if mu.has_boundary_part() {
        let b = f.boundary_sq().ok_or_else(|| {
            HbError::Admissibility(format!(
                "the integrand has no declared boundary values on the carrier of {}",
                mu.label
            ))
        })?;
        for &(angle, w) in &mu.singular_atoms {
            parts.push(w * b.value(angle));
        }
        if let Some(h) = &mu.ac {
            let prod = Product(vec![h.clone(), b]);
            parts.push(integrate_arc(&prod, -PI, PI, 0.0));
        }
    }
    for r in &mu.radial {
        let angle = r.angle;
        let g = |t: f64| f.interior_sq(Complex64::from_polar(t, angle));
        parts.push(r.density.integrate_against(&g, &f.radial_cuts(angle)));
    }
    Ok(compensated_sum(parts).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_norm_is_root_of_mass() {
        let mu = DiskMeasure::mu_beta(0.5, 1.0)
            .unwrap()
            .with_disk_atom(Complex64::new(0.2, 0.1), 0.5)
            .unwrap()
            .with_singular_atom(1.0, 0.25)
            .unwrap()
            .with_ac(Arc::new(Constant(1.0)))
            .unwrap();
        let n = l2mu_norm(&UnitIntegrand, &mu).unwrap();
        assert!((n * n - (2.0 + 0.5 + 0.25 + 1.0)).abs() < 1e-12);
        assert!((mu.total_mass() - 3.75).abs() < 1e-12);
    }

    #[test]
    fn interior_only_integrand_needs_no_boundary() {
        struct Interior;
        impl Integrand for Interior {
            fn interior_sq(&self, _z: Complex64) -> f64 {
                4.0
            }
            fn boundary_sq(&self) -> Option<Arc<dyn BoundaryFunction>> {
                None
            }
        }
        let atoms = DiskMeasure::zero().with_disk_atom(Complex64::new(0.5, 0.0), 2.0).unwrap();
        assert!((l2mu_norm(&Interior, &atoms).unwrap() - 8f64.sqrt()).abs() < 1e-15);
        assert!(matches!(l2mu_norm(&Interior, &DiskMeasure::lebesgue()), Err(HbError::Admissibility(_))));
    }
}
