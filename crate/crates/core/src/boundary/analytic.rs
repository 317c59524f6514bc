//! Analytic functions on the disk in one of the supported representations.

use num_complex::Complex64;

use super::blaschke::BlaschkeProduct;
use super::outer::OuterFunction;
use super::rational::RationalFn;
use crate::numeric::fft::convolve;

#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticFn {
    Rational(RationalFn),
    Outer(OuterFunction),
    InnerOuter { inner: BlaschkeProduct, outer: OuterFunction },
}

impl AnalyticFn {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Rational(r) => r.eval(z),
            Self::Outer(o) => o.eval(z),
            Self::InnerOuter { inner, outer } => inner.eval(z) * outer.eval(z),
        }
    }

    /// Values at `r e^{2 pi i j / m}`, `m` a power of two.
    pub fn values_on_circle(&self, r: f64, m: usize) -> Vec<Complex64> {
        match self {
            Self::Rational(f) => f.values_on_circle(r, m),
            Self::Outer(o) => o.values_on_circle(r, m),
            Self::InnerOuter { inner, outer } => {
                inner.values_on_circle(r, m).into_iter().zip(outer.values_on_circle(r, m)).map(|(a, b)| a * b).collect()
            }
        }
    }

    /// Taylor coefficients `0..n`.
    pub fn taylor(&self, n: usize) -> Vec<Complex64> {
        match self {
            Self::Rational(f) => f.taylor(n),
            Self::Outer(o) => o.taylor(n),
            Self::InnerOuter { inner, outer } => convolve(&inner.taylor(n), &outer.taylor(n), n),
        }
    }

    pub fn as_rational(&self) -> Option<&RationalFn> {
        match self {
            Self::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Grid size of the outer part, if any.
    pub fn grid_size(&self) -> Option<usize> {
        match self {
            Self::Rational(_) => None,
            Self::Outer(o) | Self::InnerOuter { outer: o, .. } => Some(o.grid_size()),
        }
    }
}
