//! Taylor data of `b/a` and the monomial norms built from it.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

use super::norm::{hb_norm, NormConfig, Polynomial};
use super::pair::{Extremeness, PythagoreanPair};
use crate::boundary::modulus::BoundaryModulus;
use crate::error::{HbError, Result};
use crate::numeric::fft::{self, next_pow2};
use crate::numeric::quad::compensated_sum;
use crate::numeric::{classify_growth, wrap_angle, Trend};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum H2Verdict {
    InH2,
    NotInH2,
    Undetermined,
}

impl From<Trend> for H2Verdict {
    fn from(t: Trend) -> Self {
        match t {
            Trend::Convergent => H2Verdict::InH2,
            Trend::Divergent => H2Verdict::NotInH2,
            Trend::Undetermined => H2Verdict::Undetermined,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BOverA {
    /// `c_0 .. c_n`.
    pub coeffs: Vec<Complex64>,
    /// `(n, sum_{j<n} |c_j|^2)` on dyadic `n`.
    pub partial_sums: Vec<(usize, f64)>,
    pub partial_sum_verdict: H2Verdict,
    /// `(N, midpoint sum of (1 - |b|)^{-1} / N)`.
    pub l1_integrals: Vec<(usize, f64)>,
    pub l1_verdict: H2Verdict,
    pub verdict: H2Verdict,
    /// Max coefficient change between the two finest radii, relative to
    /// `max(1, max |c_j|)`.
    pub stabilization: f64,
}

/// Largest coefficient index used for the partial-sum test.
const PARTIAL_SUM_DEPTH: u32 = 12;

/// Taylor coefficients of `b/a` up to index `n` with an `H^2` verdict.
pub fn taylor_b_over_a(pair: &PythagoreanPair, n: usize) -> Result<BOverA> {
    if pair.extremeness().verdict == Extremeness::Extreme {
        return Err(HbError::Unsupported("b/a needs a non-extreme b".into()));
    }
    let count = (n + 1).max(1 << PARTIAL_SUM_DEPTH);
    let k = next_pow2(2 * count).trailing_zeros();
    let coarse = on_radius(pair, k, count);
    let fine = on_radius(pair, k + 1, count);
    let scale = fine.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let stabilization = coarse.iter().zip(&fine).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale;

    let mut partial_sums = Vec::new();
    let mut acc = 0.0;
    let mut next = 1usize << 4;
    for (j, c) in fine.iter().enumerate() {
        acc += c.norm_sqr();
        if j + 1 == next {
            partial_sums.push((next, acc));
            next *= 2;
        }
    }
    let partial_sum_verdict = H2Verdict::from(classify_growth(&partial_sums.iter().map(|p| p.1).collect::<Vec<_>>()));

    let l1_integrals = inverse_gap_integrals(pair.b().modulus().as_ref());
    let l1_verdict = H2Verdict::from(classify_growth(&l1_integrals.iter().map(|p| p.1).collect::<Vec<_>>()));

    use H2Verdict::*;
    let verdict = match (partial_sum_verdict, l1_verdict) {
        (InH2, NotInH2) | (NotInH2, InH2) => {
            return Err(HbError::Diagnostics(format!(
                "b/a in H^2: partial sums say {partial_sum_verdict:?}, the L1 test of (1-|b|)^-1 says {l1_verdict:?}"
            )))
        }
        (Undetermined, v) | (v, Undetermined) => v,
        (v, _) => v,
    };
    let mut coeffs = fine;
    coeffs.truncate(n + 1);
    Ok(BOverA { coeffs, partial_sums, partial_sum_verdict, l1_integrals, l1_verdict, verdict, stabilization })
}

/// Midpoint sums `(N, (1/N) sum (1 - |b|)^{-1})` for `N = 2^10 .. 2^16`.
pub fn inverse_gap_integrals(m: &dyn BoundaryModulus) -> Vec<(usize, f64)> {
    (10..=16)
        .map(|e| {
            let big = 1usize << e;
            let h = TAU / big as f64;
            let s = compensated_sum((0..big).map(|j| (-m.log_one_minus(wrap_angle((j as f64 + 0.5) * h), 0.0)).exp()));
            (big, s / big as f64)
        })
        .collect()
}

/// Coefficients from an FFT on radius `1 - 2^{-k}` with `32 * 2^k` points.
fn on_radius(pair: &PythagoreanPair, k: u32, count: usize) -> Vec<Complex64> {
    let r = 1.0 - 0.5f64.powi(k as i32);
    let p = 32 << k;
    let mut buf = pair.b_over_a_values(r, p);
    fft::forward(&mut buf);
    let scale = 1.0 / p as f64;
    let mut rj = 1.0;
    buf.iter()
        .take(count)
        .map(|c| {
            let v = c * scale / rj;
            rj *= r;
            v
        })
        .collect()
}

/// `||z^n||_b^2 = 1 + sum_{j<=n} |c_j|^2`, cross-checked against the
/// Toeplitz norm.
pub fn monomial_norm(pair: &PythagoreanPair, n: usize) -> Result<f64> {
    let ba = taylor_b_over_a(pair, n)?;
    monomial_norm_from(pair, &ba, n)
}

/// As [`monomial_norm`] with precomputed `b/a` data.
pub fn monomial_norm_from(pair: &PythagoreanPair, ba: &BOverA, n: usize) -> Result<f64> {
    if ba.verdict != H2Verdict::InH2 {
        return Err(HbError::Unsupported(format!(
            "b/a in H^2 is {:?}; the monomial formula does not apply",
            ba.verdict
        )));
    }
    if ba.coeffs.len() <= n {
        return Err(HbError::Config(format!("b/a data has {} coefficients, need {}", ba.coeffs.len(), n + 1)));
    }
    let value = 1.0 + ba.coeffs[..=n].iter().map(|c| c.norm_sqr()).sum::<f64>();
    let direct = hb_norm(pair, &Polynomial::monomial(n), &NormConfig::default())?;
    let direct_sq = direct.norm * direct.norm;
    if (direct_sq - value).abs() > 1e-6 * value {
        return Err(HbError::Diagnostics(format!("||z^{n}||_b^2: formula {value}, Toeplitz route {direct_sq}")));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hb::pair::{pythagorean_mate, MateConfig};
    use crate::hb::symbol::SymbolB;

    #[test]
    fn half_sum_quotient_is_not_in_h2() {
        let pair = pythagorean_mate(&SymbolB::half_sum(), &MateConfig::default()).unwrap();
        let ba = taylor_b_over_a(&pair, 20).unwrap();
        assert!((ba.coeffs[0] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        for c in &ba.coeffs[1..] {
            assert!((c - Complex64::new(2.0, 0.0)).norm() < 1e-9, "{c}");
        }
        assert_eq!(ba.partial_sum_verdict, H2Verdict::NotInH2);
        assert_eq!(ba.l1_verdict, H2Verdict::NotInH2);
        assert!(matches!(monomial_norm_from(&pair, &ba, 3), Err(HbError::Unsupported(_))));
    }

    #[test]
    fn zero_symbol() {
        let pair = pythagorean_mate(&SymbolB::constant(0.0).unwrap(), &MateConfig::default()).unwrap();
        let ba = taylor_b_over_a(&pair, 8).unwrap();
        assert!(ba.coeffs.iter().all(|c| c.norm() < 1e-15));
        assert_eq!(ba.verdict, H2Verdict::InH2);
        assert_eq!(monomial_norm_from(&pair, &ba, 5).unwrap(), 1.0);
    }

    #[test]
    fn scaled_identity_has_exact_monomial_norms() {
        // b = z/2, a = sqrt(3)/2, b/a = z/sqrt(3)
        let b = SymbolB::polynomial(&[Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)]).unwrap();
        let pair = pythagorean_mate(&b, &MateConfig::default()).unwrap();
        let ba = taylor_b_over_a(&pair, 4).unwrap();
        assert_eq!(ba.verdict, H2Verdict::InH2);
        assert!((monomial_norm_from(&pair, &ba, 0).unwrap() - 1.0).abs() < 1e-12);
        assert!((monomial_norm_from(&pair, &ba, 3).unwrap() - 4.0 / 3.0).abs() < 1e-12);
    }
}
