//! Finite Blaschke products.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;

use super::rational::RationalFn;
use crate::error::{HbError, Result};
use crate::numeric::fft::convolve;
use crate::numeric::poly::Poly;

#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<(Complex64, usize)>,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<(Complex64, usize)>) -> Result<Self> {
        for (z, _) in &zeros {
            if !(z.norm() < 1.0) {
                return Err(HbError::Domain(format!("Blaschke zero {z} is not inside the disk")));
            }
        }
        Ok(Self { zeros: zeros.into_iter().filter(|(_, m)| *m > 0).collect() })
    }

    /// Simple zeros, merging exact repeats into multiplicities.
    pub fn from_points(points: &[Complex64]) -> Result<Self> {
        let mut zeros: Vec<(Complex64, usize)> = Vec::new();
        for &p in points {
            match zeros.iter_mut().find(|(z, _)| *z == p) {
                Some(e) => e.1 += 1,
                None => zeros.push((p, 1)),
            }
        }
        Self::new(zeros)
    }

    pub fn zeros(&self) -> &[(Complex64, usize)] {
        &self.zeros
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    fn factor(lambda: Complex64, z: Complex64) -> Complex64 {
        if lambda.norm() == 0.0 {
            return z;
        }
        let unit = lambda.conj() / lambda.norm();
        // |lambda|/lambda = conj(lambda)/|lambda|
        unit * (lambda - z) / (Complex64::new(1.0, 0.0) - lambda.conj() * z)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut v = Complex64::new(1.0, 0.0);
        for &(l, m) in &self.zeros {
            let f = Self::factor(l, z);
            for _ in 0..m {
                v *= f;
            }
        }
        v
    }

    pub fn values_on_circle(&self, r: f64, m: usize) -> Vec<Complex64> {
        (0..m).into_par_iter().map(|j| self.eval(Complex64::from_polar(r, TAU * j as f64 / m as f64))).collect()
    }

    /// Taylor coefficients `0..n`, convolving the factor series.
    pub fn taylor(&self, n: usize) -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); n];
        if n == 0 {
            return acc;
        }
        acc[0] = Complex64::new(1.0, 0.0);
        for &(l, m) in &self.zeros {
            let series: Vec<Complex64> = if l.norm() == 0.0 {
                let mut s = vec![Complex64::new(0.0, 0.0); n.min(2)];
                if n > 1 {
                    s[1] = Complex64::new(1.0, 0.0);
                }
                s
            } else {
                // (|l|/l)(l - z)/(1 - conj(l) z)
                let unit = l.conj() / l.norm();
                let w = 1.0 - l.norm_sqr();
                let mut s = Vec::with_capacity(n);
                s.push(unit * l);
                let mut p = Complex64::new(1.0, 0.0);
                for _ in 1..n {
                    s.push(-unit * w * p);
                    p *= l.conj();
                    if p.norm() < 1e-300 {
                        break;
                    }
                }
                s
            };
            for _ in 0..m {
                acc = convolve(&acc, &series, n);
            }
        }
        acc
    }

    pub fn to_rational(&self) -> Result<RationalFn> {
        let mut num = Poly::one();
        let mut den = Poly::one();
        for &(l, m) in &self.zeros {
            for _ in 0..m {
                if l.norm() == 0.0 {
                    num = num.mul(&Poly::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]));
                } else {
                    let unit = l.conj() / l.norm();
                    num = num.mul(&Poly::new(vec![unit * l, -unit]));
                    den = den.mul(&Poly::new(vec![Complex64::new(1.0, 0.0), -l.conj()]));
                }
            }
        }
        RationalFn::new_unreduced(num, den)
    }
}
