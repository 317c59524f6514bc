//! Dense complex polynomials (ascending coefficients) and simultaneous root
//! finding.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{HbError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= r * ck;
            }
            c = next;
        }
        Self::new(c)
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].norm() == 0.0
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![]);
        }
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Sum of coefficient moduli, used as a scale for residual tests.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// All complex roots by Aberth-Ehrlich iteration followed by Newton polishing.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let n = self.degree();
        if n == 0 {
            return Ok(vec![]);
        }
        // strip roots at the origin
        let lead_zero = self.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
        if lead_zero > 0 {
            let reduced = Poly::new(self.coeffs[lead_zero..].to_vec());
            let mut r = reduced.roots()?;
            r.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), lead_zero));
            return Ok(r);
        }
        if n == 1 {
            return Ok(vec![-self.coeffs[0] / self.coeffs[1]]);
        }
        let lead = self.coeffs[n];
        let monic: Vec<Complex64> = self.coeffs.iter().map(|&c| c / lead).collect();
        let monic = Poly { coeffs: monic };

        // initial guesses on a circle of radius from the Cauchy bound heuristic
        let radius = {
            let mut r: f64 = 0.0;
            for k in 0..n {
                let v = monic.coeffs[k].norm().powf(1.0 / (n - k) as f64);
                r = r.max(v);
            }
            r.max(1e-3)
        };
        let mut z: Vec<Complex64> =
            (0..n).map(|k| Complex64::from_polar(radius, TAU * k as f64 / n as f64 + 0.4)).collect();

        let mut converged = false;
        for _iter in 0..2000 {
            let mut max_step: f64 = 0.0;
            for i in 0..n {
                let (p, dp) = monic.eval_with_derivative(z[i]);
                if p.norm() == 0.0 {
                    continue;
                }
                let ratio = p / dp;
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    if j != i {
                        let d = z[i] - z[j];
                        if d.norm() > 0.0 {
                            s += 1.0 / d;
                        }
                    }
                }
                let denom = Complex64::new(1.0, 0.0) - ratio * s;
                let step = if denom.norm() > 0.0 { ratio / denom } else { ratio };
                if step.is_finite() {
                    z[i] -= step;
                    max_step = max_step.max(step.norm() / z[i].norm().max(1e-300));
                }
            }
            if max_step < 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            let residual = z.iter().map(|&r| monic.eval(r).norm()).fold(0.0, f64::max);
            // Clustered roots stall the correction but leave a small residual.
            if residual > 1e-6 * monic.l1_norm() {
                return Err(HbError::Numerical { message: "Aberth iteration did not converge".into(), residual });
            }
        }
        Ok(z)
    }
}

/// Group roots whose mutual distance is below `tol` (single linkage).
pub fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<Vec<Complex64>> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut k = i;
        while p[k] != r {
            let next = p[k];
            p[k] = r;
            k = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (roots[i] - roots[j]).norm() < tol * roots[i].norm().max(1.0) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for (i, &root) in roots.iter().enumerate() {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(k, _)| *k == r) {
            Some((_, g)) => g.push(root),
            None => groups.push((r, vec![root])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn roots_of_product_are_recovered() {
        let want = [c(2.0, 0.0), c(-1.5, 0.5), c(0.0, 3.0), c(1.1, -1.1)];
        let p = Poly::from_roots(&want);
        let got = p.roots().unwrap();
        for w in want {
            let best = got.iter().map(|g| (g - w).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12, "missing root {w}");
        }
    }

    #[test]
    fn zero_roots_are_stripped() {
        let p = Poly::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)]);
        let mut r: Vec<f64> = p.roots().unwrap().iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(r.len(), 3);
        assert!(r[0].abs() < 1e-15 && r[1].abs() < 1e-15 && (r[2] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn derivative_and_eval_agree() {
        let p = Poly::from_real(&[1.0, -2.0, 0.5, 3.0]);
        let z = c(0.3, -0.7);
        let (v, d) = p.eval_with_derivative(z);
        assert!((v - p.eval(z)).norm() < 1e-15);
        assert!((d - p.derivative().eval(z)).norm() < 1e-14);
    }

    #[test]
    fn clustering_groups_nearby_roots() {
        let r = [c(1.0, 0.0), c(1.0 + 1e-6, 0.0), c(-1.0, 0.0)];
        let g = cluster_roots(&r, 1e-4);
        assert_eq!(g.len(), 2);
        assert!(g.iter().any(|x| x.len() == 2));
    }
}
