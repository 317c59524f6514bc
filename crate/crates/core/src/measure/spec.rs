//! JSON description of disk measures.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use super::{DiskMeasure, RadialDensity};
use crate::boundary::functions::{BoundaryFunction, Constant, GridDensity};
use crate::error::{HbError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSpec {
    pub beta: f64,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub singularity_angle: f64,
}

/// Boundary density `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcSpec {
    /// Cell values on a uniform grid of the circle.
    Grid(Vec<f64>),
    /// `scale |1 - e^{-i angle} z|^{-beta}`.
    Power(PowerSpec),
    Constant(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialSpec {
    #[serde(default)]
    pub angle: f64,
    pub power_beta: f64,
    #[serde(default = "one")]
    pub scale: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub disk_atoms: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ac_density: Option<AcSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub singular_atoms: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub radial: Vec<RadialSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MeasureSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| HbError::Parse(format!("measure JSON at line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn build(&self) -> Result<DiskMeasure> {
        let mut mu = DiskMeasure::zero();
        for &[re, im, w] in &self.disk_atoms {
            mu = mu.with_disk_atom(Complex64::new(re, im), w)?;
        }
        if let Some(ac) = &self.ac_density {
            let h: Arc<dyn BoundaryFunction> = match ac {
                AcSpec::Grid(v) => {
                    if v.is_empty() || v.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
                        return Err(HbError::Domain("grid density needs finite nonnegative values".into()));
                    }
                    Arc::new(GridDensity::new(v.clone()))
                }
                AcSpec::Power(p) => {
                    let m = DiskMeasure::boundary_power(p.beta, p.scale, p.singularity_angle)?;
                    m.ac.expect("power density")
                }
                AcSpec::Constant(c) => {
                    if !(*c >= 0.0) || !c.is_finite() {
                        return Err(HbError::Domain(format!("constant density {c}")));
                    }
                    Arc::new(Constant(*c))
                }
            };
            mu = mu.with_ac(h)?;
        }
        for &[angle, w] in &self.singular_atoms {
            mu = mu.with_singular_atom(angle, w)?;
        }
        for r in &self.radial {
            mu = mu.with_radial(r.angle, RadialDensity::power(r.power_beta, r.scale)?);
        }
        let label = match &self.label {
            Some(l) => l.clone(),
            None => describe(self),
        };
        Ok(mu.with_label(label))
    }
}

fn describe(s: &MeasureSpec) -> String {
    let mut parts = Vec::new();
    if !s.disk_atoms.is_empty() {
        parts.push(format!("{} disk atoms", s.disk_atoms.len()));
    }
    match &s.ac_density {
        Some(AcSpec::Constant(c)) if *c == 1.0 => parts.push("m".into()),
        Some(AcSpec::Constant(c)) => parts.push(format!("{c} dm")),
        Some(AcSpec::Power(p)) => parts.push(format!("|1-z|^-{} dm", p.beta)),
        Some(AcSpec::Grid(v)) => parts.push(format!("grid density ({} cells)", v.len())),
        None => {}
    }
    if !s.singular_atoms.is_empty() {
        parts.push(format!("{} boundary atoms", s.singular_atoms.len()));
    }
    for r in &s.radial {
        parts.push(format!("mu_beta({})", r.power_beta));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::ArcWindow;

    #[test]
    fn parses_all_components() {
        let text = r#"{
            "disk_atoms": [[0.5, 0.0, 2.0]],
            "ac_density": {"power": {"beta": 0.5, "scale": 1.0, "singularity_angle": 0.0}},
            "singular_atoms": [[1.0, 0.25]],
            "radial": [{"angle": 0.0, "power_beta": 0.5, "scale": 1.0}]
        }"#;
        let mu = MeasureSpec::from_json(text).unwrap().build().unwrap();
        assert_eq!(mu.disk_atoms().len(), 1);
        assert_eq!(mu.singular_atoms().len(), 1);
        assert_eq!(mu.radial().len(), 1);
        assert!(mu.ac().is_some());
        let w = ArcWindow::symmetric(0.1).unwrap();
        assert!(mu.window_mass(&w) > 0.0);
    }

    #[test]
    fn lebesgue_from_constant() {
        let mu = MeasureSpec::from_json(r#"{"ac_density": {"constant": 1.0}}"#).unwrap().build().unwrap();
        assert_eq!(mu.label(), "m");
        assert!((mu.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        match MeasureSpec::from_json("{\n \"radial\": 3}") {
            Err(HbError::Parse(m)) => assert!(m.contains("line 2")),
            other => panic!("unexpected {other:?}"),
        }
        let s = MeasureSpec::from_json(r#"{"radial": [{"power_beta": 1.5}]}"#).unwrap();
        assert!(s.build().is_err());
        let s = MeasureSpec::from_json(r#"{"disk_atoms": [[1.0, 0.0, 1.0]]}"#).unwrap();
        assert!(matches!(s.build(), Err(HbError::Domain(_))));
    }
}
