//! Toeplitz operators `T_phi f = P_+(phi f)` on truncated Hardy-space data.

use num_complex::Complex64;

use super::grid::{fourier_analyze, riesz_project, CircleGrid, FourierSeries};
use crate::error::{HbError, Result};
use crate::numeric::fft;

/// Largest grid the zero-padded product may use.
pub const DEFAULT_PRODUCT_CAP: usize = 1 << 22;

/// `P_+(phi f)` for a grid symbol and an analytic series.
///
/// The symbol is resampled by zero padding onto a grid of at least twice the
/// combined bandwidth, so the product is alias free.
pub fn toeplitz_apply(symbol: &CircleGrid, f: &FourierSeries, cap: usize) -> Result<FourierSeries> {
    if f.has_negative_frequencies() {
        return Err(HbError::Domain("toeplitz_apply expects an analytic series".into()));
    }
    let sym = fourier_analyze(symbol);
    let sym_band = symbol.size() / 2;
    let f_band = f.bandwidth();
    let size = fft::next_pow2(2 * (sym_band + f_band + 1)).max(8);
    if size > cap {
        return Err(HbError::TruncationOverflow { requested: size, cap });
    }
    let mut s_buf = vec![Complex64::new(0.0, 0.0); size];
    for (k, c) in sym.frequencies() {
        s_buf[k.rem_euclid(size as i64) as usize] += c;
    }
    let mut f_buf = vec![Complex64::new(0.0, 0.0); size];
    for (k, c) in f.frequencies() {
        if k >= 0 {
            f_buf[k as usize] = c;
        }
    }
    fft::inverse(&mut s_buf);
    fft::inverse(&mut f_buf);
    let prod: Vec<Complex64> = s_buf.iter().zip(&f_buf).map(|(a, b)| a * b).collect();
    let grid = CircleGrid::new(prod)?;
    Ok(riesz_project(&fourier_analyze(&grid)))
}

/// Solve `T_{conj(a)} g = v` on polynomials of degree `< v.len()` by back
/// substitution. The matrix is upper triangular with diagonal `conj(a_0)`.
pub fn solve_upper_toeplitz(a: &[Complex64], v: &[Complex64]) -> Result<Vec<Complex64>> {
    let m = v.len();
    let diag = a.first().copied().unwrap_or_default().conj();
    if diag.norm() == 0.0 {
        return Err(HbError::Domain("upper Toeplitz system has zero diagonal".into()));
    }
    let mut g = vec![Complex64::new(0.0, 0.0); m];
    for i in (0..m).rev() {
        let mut s = v[i];
        for k in 1..(m - i).min(a.len()) {
            s -= a[k].conj() * g[i + k];
        }
        g[i] = s / diag;
    }
    Ok(g)
}

/// Taylor coefficients of `1/a` up to `len` terms by the triangular recursion.
pub fn reciprocal_series(a: &[Complex64], len: usize) -> Result<Vec<Complex64>> {
    let a0 = a.first().copied().unwrap_or_default();
    if a0.norm() == 0.0 {
        return Err(HbError::Domain("series with zero constant term has no reciprocal".into()));
    }
    let mut d = vec![Complex64::new(0.0, 0.0); len];
    if len == 0 {
        return Ok(d);
    }
    d[0] = 1.0 / a0;
    for n in 1..len {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 1..=n.min(a.len() - 1) {
            s += a[k] * d[n - k];
        }
        d[n] = -s / a0;
    }
    Ok(d)
}
