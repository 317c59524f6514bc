//! Thin wrappers over `rustfft` with a per-thread planner cache.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place forward DFT, `X_k = sum_j x_j e^{-2 pi i jk/n}` (unnormalized).
pub fn forward(buf: &mut [Complex64]) {
    let n = buf.len();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n));
    fft.process(buf);
}

/// In-place inverse DFT, `x_j = sum_k X_k e^{2 pi i jk/n}` (unnormalized).
pub fn inverse(buf: &mut [Complex64]) {
    let n = buf.len();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n));
    fft.process(buf);
}

pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// Linear convolution truncated to `out_len` terms.
pub fn convolve(a: &[Complex64], b: &[Complex64], out_len: usize) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() || out_len == 0 {
        return vec![Complex64::new(0.0, 0.0); out_len];
    }
    if a.len().min(b.len()) <= 32 {
        let mut out = vec![Complex64::new(0.0, 0.0); out_len];
        for (i, &x) in a.iter().enumerate().take(out_len) {
            for (j, &y) in b.iter().enumerate() {
                if i + j >= out_len {
                    break;
                }
                out[i + j] += x * y;
            }
        }
        return out;
    }
    let n = next_pow2(a.len() + b.len());
    let mut fa = vec![Complex64::new(0.0, 0.0); n];
    let mut fb = vec![Complex64::new(0.0, 0.0); n];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    forward(&mut fa);
    forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inverse(&mut fa);
    let scale = 1.0 / n as f64;
    let mut out: Vec<Complex64> = fa.into_iter().take(out_len).map(|x| x * scale).collect();
    out.resize(out_len, Complex64::new(0.0, 0.0));
    out
}

/// Upper-triangular Toeplitz product `v_i = sum_{k>=0} conj(sym_k) f_{i+k}`,
/// i.e. the compression of `T_{conj(s)}` to polynomials of degree `< f.len()`.
pub fn correlate_upper(sym: &[Complex64], f: &[Complex64]) -> Vec<Complex64> {
    let m = f.len();
    if m == 0 {
        return vec![];
    }
    let reversed: Vec<Complex64> = f.iter().rev().copied().collect();
    let conj_sym: Vec<Complex64> = sym.iter().take(m).map(|c| c.conj()).collect();
    let conv = convolve(&reversed, &conj_sym, m);
    (0..m).map(|i| conv[m - 1 - i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correlate_matches_direct_sum() {
        let sym: Vec<Complex64> = (0..50).map(|k| Complex64::new(1.0 / (k as f64 + 1.0), 0.3 * k as f64)).collect();
        let f: Vec<Complex64> = (0..80).map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.7).cos())).collect();
        let fast = correlate_upper(&sym, &f);
        for i in 0..f.len() {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..sym.len() {
                if i + k < f.len() {
                    s += sym[k].conj() * f[i + k];
                }
            }
            assert!((s - fast[i]).norm() < 1e-10 * (1.0 + s.norm()));
        }
    }
}
