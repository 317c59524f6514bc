//! Symmetric weight `u` that is `1/2` on `J_n` and `beta_n` on `I_n`, used as
//! `|a|^2` with `|b|^2 = 1 - u`.

use std::f64::consts::{PI, TAU};

use crate::boundary::functions::Singularity;
use crate::boundary::modulus::{BoundaryModulus, ModPart};
use crate::error::{HbError, Result};
use crate::numeric::wrap_angle;

/// First index whose intervals are nonempty.
pub const FIRST_BLOCK: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub n: u32,
    pub beta: f64,
    /// Start of the join from `1/2` down to `beta`.
    pub join_start: f64,
    /// `I_n = [i0, i1)`.
    pub i: (f64, f64),
    /// `J_n = [j0, j1)`.
    pub j: (f64, f64),
}

impl Block {
    fn new(n: u32, beta: f64) -> Self {
        let p = |k: i32| 2f64.powi(-k);
        let n = n as i32;
        Self {
            n: n as u32,
            beta,
            join_start: p(2 * n + 1) - p(3 * n + 3),
            i: (p(2 * n + 1) + p(3 * n), p(2 * n) - p(3 * n)),
            j: (p(2 * n) + p(3 * n), p(2 * n - 1) - p(3 * n)),
        }
    }

    /// `K_n`, which contains `I_n` and `J_n`.
    pub fn k(&self) -> (f64, f64) {
        (self.i.0, self.j.1)
    }
}

fn smoothstep(x: f64) -> f64 {
    x * x * (3.0 - 2.0 * x)
}

/// `u = 1/2` on `J_n`, `beta_n = 2^{-s n}` on `I_n` for
/// `n = 3..=n_max`, cubic smoothstep joins in the gaps, `1/2` elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatingWeight {
    pub s: f64,
    pub blocks: Vec<Block>,
}

impl OscillatingWeight {
    pub fn new(s: f64, n_max: u32) -> Result<Self> {
        if !(s > 0.0 && s < 2.0) {
            return Err(HbError::Parameter { name: "s".into(), reason: format!("{s} not in (0, 2)") });
        }
        if !(FIRST_BLOCK..=16).contains(&n_max) {
            return Err(HbError::Parameter { name: "n_max".into(), reason: format!("{n_max} not in [3, 16]") });
        }
        check_summability(s)?;
        let blocks = (FIRST_BLOCK..=n_max).map(|n| Block::new(n, 2f64.powf(-s * n as f64))).collect();
        Ok(Self { s, blocks })
    }

    pub fn u(&self, t: f64) -> f64 {
        let x = wrap_angle(t).abs();
        for b in &self.blocks {
            if x < b.join_start || x >= b.j.1 {
                continue;
            }
            let v = if x < b.i.0 {
                0.5 + (b.beta - 0.5) * smoothstep((x - b.join_start) / (b.i.0 - b.join_start))
            } else if x < b.i.1 {
                b.beta
            } else if x < b.j.0 {
                b.beta + (0.5 - b.beta) * smoothstep((x - b.i.1) / (b.j.0 - b.i.1))
            } else {
                0.5
            };
            return v;
        }
        0.5
    }

    fn knots(&self) -> Vec<f64> {
        let mut k: Vec<f64> = self.blocks.iter().flat_map(|b| [b.join_start, b.i.0, b.i.1, b.j.0]).collect();
        k.extend(k.clone().into_iter().map(|x| -x));
        k
    }
}

/// Partial sums of `sum 2^{-2n} log(1/beta_n)` and `sum 2^{-2n} / beta_n`
/// must settle: their terms must decay geometrically.
fn check_summability(s: f64) -> Result<()> {
    let terms = |n: f64| (4f64.powf(-n) * s * n * 2f64.ln(), 4f64.powf(-n) * 2f64.powf(s * n));
    let (mut s1, mut s2) = (0.0, 0.0);
    for n in 1..=400 {
        let (a, b) = terms(n as f64);
        s1 += a;
        s2 += b;
    }
    let (a, b) = terms(400.0);
    if !(s1.is_finite() && s2.is_finite()) || a > 1e-9 * s1 || b > 1e-9 * s2 {
        return Err(HbError::Parameter {
            name: "s".into(),
            reason: format!("sums 2^-2n log(1/beta_n) = {s1:e}, 2^-2n/beta_n = {s2:e} do not settle by n = 400"),
        });
    }
    Ok(())
}

impl BoundaryModulus for OscillatingWeight {
    fn modulus_sq(&self, base: f64, off: f64) -> f64 {
        1.0 - self.u(base + off)
    }

    fn complement_sq(&self, base: f64, off: f64) -> f64 {
        self.u(base + off)
    }

    fn singularities(&self, _part: ModPart) -> Vec<Singularity> {
        Vec::new()
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let lo = ((a + PI) / TAU).floor() as i64 - 1;
        let hi = ((b + PI) / TAU).ceil() as i64 + 1;
        for k in lo..=hi {
            for &p in &self.knots() {
                let x = p + k as f64 * TAU;
                if x >= a && x <= b {
                    out.push(x);
                }
            }
        }
        out.sort_by(|x, y| x.partial_cmp(y).unwrap());
        out
    }

    fn unimodular_measure(&self) -> Option<f64> {
        Some(0.0)
    }

    fn label(&self) -> String {
        format!("1-|b|^2 = u, beta_n = 2^-{}n, n <= {}", self.s, self.blocks.last().map_or(0, |b| b.n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_inside_the_intervals() {
        let w = OscillatingWeight::new(1.2, 10).unwrap();
        for b in &w.blocks {
            for f in [0.01, 0.5, 0.99] {
                let x = b.i.0 + f * (b.i.1 - b.i.0);
                assert_eq!(w.u(x), b.beta);
                assert_eq!(w.u(-x), b.beta);
                let y = b.j.0 + f * (b.j.1 - b.j.0);
                assert_eq!(w.u(y), 0.5);
            }
        }
        assert_eq!(w.u(1.0), 0.5);
        assert_eq!(w.u(1e-9), 0.5);
    }

    #[test]
    fn joins_are_monotone_and_continuous() {
        let w = OscillatingWeight::new(1.2, 6).unwrap();
        let b = w.blocks[1];
        let mut prev = w.u(b.i.1);
        for k in 1..=100 {
            let x = b.i.1 + (b.j.0 - b.i.1) * k as f64 / 100.0;
            let v = w.u(x);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
        assert!((prev - 0.5).abs() < 1e-12);
        assert!((w.u(b.join_start) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn summability_fails_at_two() {
        assert!(OscillatingWeight::new(2.0, 8).is_err());
        assert!(OscillatingWeight::new(1.99, 8).is_err());
    }
}
