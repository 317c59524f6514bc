//! Symbols `b` in the unit ball of `H^infinity` and their JSON form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::sync::Arc;

use crate::boundary::blaschke::BlaschkeProduct;
use crate::boundary::fejer_riesz::{fejer_riesz, SpectralFactor, TrigPoly};
use crate::boundary::modulus::{BoundaryModulus, ConstantModulus, GaussExtreme, GridModulus, PowerComplement};
use crate::boundary::rational::{RationalFn, RationalModulus};
use crate::error::{HbError, Result};
use crate::numeric::poly::Poly;

#[derive(Debug, Clone)]
pub enum SymbolForm {
    Rational(RationalFn),
    /// Outer function with the given boundary modulus.
    OuterModulus(Arc<dyn BoundaryModulus>),
    /// Blaschke product times the outer function with the given modulus.
    InnerTimesOuter {
        inner: BlaschkeProduct,
        outer: Arc<dyn BoundaryModulus>,
    },
}

#[derive(Debug, Clone)]
pub struct SymbolB {
    form: SymbolForm,
    modulus: Arc<dyn BoundaryModulus>,
    factor: Option<SpectralFactor>,
    admissible_for: Vec<String>,
    label: String,
}

impl SymbolB {
    pub fn rational(b: RationalFn) -> Result<Self> {
        let t = TrigPoly::autocorrelation(b.den()).sub(&TrigPoly::autocorrelation(b.num()));
        let scale = b.den().l1_norm().powi(2);
        let factor = if t.is_zero(1e-14 * scale) {
            None
        } else {
            match fejer_riesz(&t) {
                Ok(f) => Some(f),
                Err(HbError::NotNonnegative { min }) => {
                    return Err(HbError::Domain(format!(
                        "symbol leaves the unit ball: 1 - |b|^2 reaches {min:e} (times |den|^2)"
                    )))
                }
                Err(e) => return Err(e),
            }
        };
        let modulus: Arc<dyn BoundaryModulus> = Arc::new(RationalModulus::new(&b, factor.as_ref())?);
        let label = format!("rational(num={:?}, den={:?})", pretty(b.num()), pretty(b.den()));
        let s = Self { form: SymbolForm::Rational(b), modulus, factor, admissible_for: vec![], label };
        s.check_unit_ball()?;
        Ok(s)
    }

    pub fn polynomial(coeffs: &[Complex64]) -> Result<Self> {
        Self::rational(RationalFn::polynomial(Poly::new(coeffs.to_vec())))
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !(c.abs() <= 1.0) {
            return Err(HbError::Domain(format!("constant symbol {c} leaves the unit ball")));
        }
        let mut s = Self::polynomial(&[Complex64::new(c, 0.0)])?;
        s.modulus = Arc::new(ConstantModulus(c.abs()));
        s.label = format!("constant {c}");
        Ok(s)
    }

    /// `b = (1 + z)/2`.
    pub fn half_sum() -> Self {
        let mut s = Self::polynomial(&[Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)]).expect("valid symbol");
        s.label = "(1+z)/2".into();
        s
    }

    pub fn outer(modulus: Arc<dyn BoundaryModulus>) -> Self {
        let label = format!("outer[{}]", modulus.label());
        Self { form: SymbolForm::OuterModulus(modulus.clone()), modulus, factor: None, admissible_for: vec![], label }
    }

    pub fn inner_times_outer(inner: BlaschkeProduct, outer: Arc<dyn BoundaryModulus>) -> Self {
        let label = format!("blaschke[{}] * outer[{}]", inner.zeros().len(), outer.label());
        Self {
            form: SymbolForm::InnerTimesOuter { inner, outer: outer.clone() },
            modulus: outer,
            factor: None,
            admissible_for: vec![],
            label,
        }
    }

    /// Outer symbol whose mate is `2^{-alpha} (1 - z)^alpha`.
    pub fn alpha_power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(HbError::Parameter { name: "alpha".into(), reason: format!("{alpha} not in (0, 1)") });
        }
        let mut s = Self::outer(Arc::new(PowerComplement { alpha }));
        s.label = format!("alpha-power({alpha})");
        Ok(s)
    }

    pub fn gauss_extreme() -> Self {
        let mut s = Self::outer(Arc::new(GaussExtreme));
        s.label = "gauss-extreme".into();
        s
    }

    pub fn with_admissibility(mut self, measures: Vec<String>) -> Self {
        self.admissible_for = measures;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn form(&self) -> &SymbolForm {
        &self.form
    }

    pub fn modulus(&self) -> &Arc<dyn BoundaryModulus> {
        &self.modulus
    }

    pub fn spectral_factor(&self) -> Option<&SpectralFactor> {
        self.factor.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn admissible_for(&self) -> &[String] {
        &self.admissible_for
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.form, SymbolForm::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&RationalFn> {
        match &self.form {
            SymbolForm::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Whether `b` is declared admissible for the measure with this label.
    /// Rational symbols extend continuously to the circle and are always
    /// admissible; `"*"` declares every measure.
    pub fn is_admissible_for(&self, measure_label: &str) -> bool {
        self.is_rational() || self.admissible_for.iter().any(|m| m == "*" || m == measure_label)
    }

    fn check_unit_ball(&self) -> Result<()> {
        if let SymbolForm::Rational(r) = &self.form {
            let n = 1 << 12;
            let mut sup: f64 = 0.0;
            for j in 0..n {
                let z = Complex64::from_polar(0.999, TAU * j as f64 / n as f64);
                sup = sup.max(r.eval(z).norm());
            }
            if sup > 1.0 + 1e-9 {
                return Err(HbError::Domain(format!("sup |b| on radius 0.999 is {sup}")));
            }
        }
        Ok(())
    }

    pub fn to_spec(&self) -> SymbolSpec {
        let c2 = |v: &[Complex64]| v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>();
        let mut spec = SymbolSpec { admissible_for: self.admissible_for.clone(), ..Default::default() };
        match &self.form {
            SymbolForm::Rational(r) => {
                spec.form = "rational".into();
                spec.numerator = c2(r.num().coeffs());
                spec.denominator = c2(r.den().coeffs());
            }
            SymbolForm::OuterModulus(m) => {
                spec.form = "outer_modulus".into();
                spec.closed_form = closed_form_of(m.as_ref());
            }
            SymbolForm::InnerTimesOuter { inner, outer } => {
                spec.form = "inner_times_outer".into();
                spec.closed_form = closed_form_of(outer.as_ref());
                for (z, m) in inner.zeros() {
                    for _ in 0..*m {
                        spec.blaschke_zeros.push([z.re, z.im]);
                    }
                }
            }
        }
        spec
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SymbolSpec = serde_json::from_str(text)
            .map_err(|e| HbError::Parse(format!("symbol JSON at line {} column {}: {e}", e.line(), e.column())))?;
        spec.build()
    }
}

fn pretty(p: &Poly) -> Vec<(f64, f64)> {
    p.coeffs().iter().map(|c| (c.re, c.im)).collect()
}

fn closed_form_of(_m: &dyn BoundaryModulus) -> Option<ClosedForm> {
    None
}

/// Closed-form boundary moduli accepted in JSON besides raw samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `1 - |b|^2 = |sin(t/2)|^{2 alpha}`.
    PowerComplement { alpha: f64 },
    /// `|b| = 1 - exp(-1/t^2)`.
    GaussExtreme,
    /// `|b| = c`.
    Constant { value: f64 },
}

/// JSON schema of a symbol. Complex numbers are `[re, im]` pairs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SymbolSpec {
    pub form: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub numerator: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub denominator: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modulus_samples: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blaschke_zeros: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedForm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub admissible_for: Vec<String>,
}

impl SymbolSpec {
    fn outer_modulus(&self) -> Result<Arc<dyn BoundaryModulus>> {
        if let Some(cf) = &self.closed_form {
            return Ok(match cf {
                ClosedForm::PowerComplement { alpha } => {
                    if !(*alpha > 0.0 && *alpha < 1.0) {
                        return Err(HbError::Parameter {
                            name: "alpha".into(),
                            reason: format!("{alpha} not in (0, 1)"),
                        });
                    }
                    Arc::new(PowerComplement { alpha: *alpha })
                }
                ClosedForm::GaussExtreme => Arc::new(GaussExtreme),
                ClosedForm::Constant { value } => {
                    if !(*value > 0.0 && *value <= 1.0) {
                        return Err(HbError::Domain(format!("constant modulus {value} not in (0, 1]")));
                    }
                    Arc::new(ConstantModulus(*value))
                }
            });
        }
        let n = self.modulus_samples.len();
        if n < 8 || !n.is_power_of_two() {
            return Err(HbError::Config(format!("modulus_samples has length {n}; need a power of two >= 8")));
        }
        if let Some(v) = self.modulus_samples.iter().find(|v| !(**v > 0.0 && **v <= 1.0)) {
            return Err(HbError::Domain(format!("modulus sample {v} not in (0, 1]")));
        }
        Ok(Arc::new(GridModulus::new(self.modulus_samples.clone())))
    }

    pub fn build(&self) -> Result<SymbolB> {
        let cx = |v: &[[f64; 2]]| v.iter().map(|p| Complex64::new(p[0], p[1])).collect::<Vec<_>>();
        let s = match self.form.as_str() {
            "rational" => {
                if self.numerator.is_empty() {
                    return Err(HbError::Parse("rational symbol needs a numerator".into()));
                }
                let den =
                    if self.denominator.is_empty() { vec![Complex64::new(1.0, 0.0)] } else { cx(&self.denominator) };
                SymbolB::rational(RationalFn::new(Poly::new(cx(&self.numerator)), Poly::new(den))?)?
            }
            "outer_modulus" => SymbolB::outer(self.outer_modulus()?),
            "inner_times_outer" => {
                let inner = BlaschkeProduct::from_points(&cx(&self.blaschke_zeros))?;
                SymbolB::inner_times_outer(inner, self.outer_modulus()?)
            }
            other => return Err(HbError::Parse(format!("unknown symbol form `{other}`"))),
        };
        Ok(s.with_admissibility(self.admissible_for.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_json_round_trip() {
        let text = r#"{"form": "rational", "numerator": [[0.5, 0], [0.5, 0]], "denominator": [[1, 0]]}"#;
        let b = SymbolB::from_json(text).unwrap();
        assert!(b.is_rational());
        let spec = b.to_spec();
        let again: SymbolSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(spec, again);
        assert_eq!(b.spectral_factor().unwrap().boundary_roots.len(), 1);
    }

    #[test]
    fn symbols_outside_unit_ball_are_rejected() {
        assert!(SymbolB::polynomial(&[Complex64::new(0.6, 0.0), Complex64::new(0.6, 0.0)]).is_err());
        assert!(SymbolB::constant(1.5).is_err());
    }

    #[test]
    fn malformed_json_reports_position() {
        match SymbolB::from_json("{\"form\": \"rational\", ") {
            Err(HbError::Parse(msg)) => assert!(msg.contains("line 1")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(SymbolB::from_json(r#"{"form": "weird"}"#), Err(HbError::Parse(_))));
    }

    #[test]
    fn outer_forms_from_json() {
        let b = SymbolB::from_json(
            r#"{"form": "outer_modulus", "closed_form": {"kind": "power_complement", "alpha": 0.25}}"#,
        )
        .unwrap();
        assert!(!b.is_rational());
        let samples = vec![0.5; 16];
        let text = serde_json::json!({"form": "inner_times_outer", "modulus_samples": samples, "blaschke_zeros": [[0.5, 0.0]]});
        let b = SymbolB::from_json(&text.to_string()).unwrap();
        assert!(matches!(b.form(), SymbolForm::InnerTimesOuter { .. }));
        let zeros = vec![0.0; 16];
        let bad = serde_json::json!({"form": "outer_modulus", "modulus_samples": zeros});
        assert!(SymbolB::from_json(&bad.to_string()).is_err());
    }

    #[test]
    fn admissibility_metadata() {
        let b = SymbolB::alpha_power(0.25).unwrap();
        assert!(!b.is_admissible_for("lebesgue"));
        let b = b.with_admissibility(vec!["*".into()]);
        assert!(b.is_admissible_for("lebesgue"));
        assert!(SymbolB::half_sum().is_admissible_for("anything"));
    }
}
