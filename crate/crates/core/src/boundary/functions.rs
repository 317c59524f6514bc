//! Real functions on the circle with singularity-aware arc integrals.
//!
//! Angles are radians. Arc integrals are normalized by `2 pi`, so the
//! integral of `1` over the whole circle is `1`.

use rayon::prelude::*;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use crate::numeric::quad::{adaptive, compensated_sum, GaussLegendre};
use crate::numeric::wrap_angle;

/// Default relative tolerance of [`integrate_arc`].
pub const QUAD_TOL: f64 = 1e-13;

/// Isolated point where a function behaves like `|t - angle|^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub angle: f64,
    pub exponent: f64,
}

impl Singularity {
    pub fn new(angle: f64, exponent: f64) -> Self {
        Self { angle: wrap_angle(angle), exponent }
    }

    pub fn integrable(&self) -> bool {
        self.exponent > -1.0
    }
}

pub trait BoundaryFunction: Send + Sync + fmt::Debug {
    /// Value at the angle `base + off`. Implementations measure distances to
    /// their singular points as `wrap(base - s) + off`, so passing the exact
    /// singular angle as `base` keeps small offsets accurate.
    fn value_at(&self, base: f64, off: f64) -> f64;

    fn value(&self, t: f64) -> f64 {
        self.value_at(t, 0.0)
    }

    fn singularities(&self) -> Vec<Singularity> {
        Vec::new()
    }

    /// Kinks or jumps in `[a, b]` (unwrapped coordinates).
    fn breakpoints(&self, _a: f64, _b: f64) -> Vec<f64> {
        Vec::new()
    }

    /// Relative tolerance for generic quadrature. Functions built from
    /// interpolated samples relax it.
    fn quad_tol(&self) -> f64 {
        QUAD_TOL
    }

    /// `(1/2 pi) int_a^b`, infinite when a non-integrable singularity lies in
    /// the closed arc.
    fn arc_integral(&self, a: f64, b: f64) -> f64 {
        integrate_arc(self, a, b, 0.0)
    }

    /// As [`arc_integral`](Self::arc_integral) with `eps`-neighbourhoods of
    /// non-integrable singular points removed.
    fn arc_integral_excised(&self, a: f64, b: f64, eps: f64) -> f64 {
        integrate_arc(self, a, b, eps)
    }

    /// Normalized integrals over the `n` cells centred at `2 pi j / n`.
    fn cell_integrals(&self, n: usize) -> Vec<f64> {
        default_cell_integrals(self, n)
    }

    fn label(&self) -> String;
}

/// Unwrapped copies of the singular points lying in `[a, b]`.
fn singular_positions(sing: &[Singularity], a: f64, b: f64) -> Vec<(f64, Singularity)> {
    let mut out = Vec::new();
    for s in sing {
        let k0 = ((a - s.angle) / TAU).ceil() as i64;
        let mut k = k0 - 1;
        loop {
            let pos = s.angle + TAU * k as f64;
            if pos > b + 1e-15 {
                break;
            }
            if pos >= a - 1e-15 {
                out.push((pos.clamp(a, b), *s));
            }
            k += 1;
        }
    }
    out
}

#[derive(Clone, Copy)]
struct Cut {
    pos: f64,
    /// Canonical angle to pass as `base` when this cut is a singular point.
    canonical: Option<f64>,
}

/// Generic arc integration: split at singular points and breakpoints, then
/// tanh-sinh on each piece.
pub fn integrate_arc<F: BoundaryFunction + ?Sized>(f: &F, a: f64, b: f64, eps: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let b = b.min(a + TAU);
    let tol = f.quad_tol();
    let sing = f.singularities();
    let located = singular_positions(&sing, a, b);
    let mut cuts = vec![Cut { pos: a, canonical: None }, Cut { pos: b, canonical: None }];
    let mut excised: Vec<(f64, f64)> = Vec::new();
    for (pos, s) in &located {
        if !s.integrable() {
            if eps <= 0.0 {
                return f64::INFINITY;
            }
            excised.push((pos - eps, pos + eps));
            for p in [pos - eps, pos + eps] {
                if p > a && p < b {
                    cuts.push(Cut { pos: p, canonical: None });
                }
            }
        } else {
            cuts.push(Cut { pos: *pos, canonical: Some(s.angle) });
        }
    }
    for p in f.breakpoints(a, b) {
        if p > a && p < b {
            cuts.push(Cut { pos: p, canonical: None });
        }
    }
    cuts.sort_by(|x, y| x.pos.partial_cmp(&y.pos).unwrap());
    // a singular point at an arc endpoint keeps its canonical base
    let mut merged: Vec<Cut> = Vec::with_capacity(cuts.len());
    for c in cuts {
        match merged.last_mut() {
            Some(last) if (c.pos - last.pos).abs() <= 1e-15 * (1.0 + c.pos.abs()) => {
                if c.canonical.is_some() {
                    last.canonical = c.canonical;
                }
            }
            _ => merged.push(c),
        }
    }
    let mut total = Vec::with_capacity(merged.len());
    for w in merged.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo.pos + hi.pos);
        if excised.iter().any(|&(x, y)| mid > x && mid < y) {
            continue;
        }
        let g = |base: f64, off: f64| -> f64 {
            if base == lo.pos {
                f.value_at(lo.canonical.unwrap_or(lo.pos), off)
            } else if base == hi.pos {
                f.value_at(hi.canonical.unwrap_or(hi.pos), off)
            } else {
                f.value_at(base, off)
            }
        };
        total.push(adaptive(&g, lo.pos, hi.pos, tol));
    }
    compensated_sum(total) / TAU
}

/// Cell integrals by 16-point Gauss-Legendre away from singular points and
/// breakpoints, and by [`integrate_arc`] near them.
pub fn default_cell_integrals<F: BoundaryFunction + ?Sized>(f: &F, n: usize) -> Vec<f64> {
    let h = TAU / n as f64;
    let sing = f.singularities();
    let gl = GaussLegendre::sixteen();
    (0..n)
        .into_par_iter()
        .map(|j| {
            let c = h * j as f64;
            let (a, b) = (c - 0.5 * h, c + 0.5 * h);
            let near = sing.iter().any(|s| wrap_angle(c - s.angle).abs() < 3.0 * h) || !f.breakpoints(a, b).is_empty();
            if near {
                integrate_arc(f, a, b, 0.0)
            } else {
                gl.integrate(|t| f.value_at(t, 0.0), a, b) / TAU
            }
        })
        .collect()
}

/// Constant function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl BoundaryFunction for Constant {
    fn value_at(&self, _base: f64, _off: f64) -> f64 {
        self.0
    }

    fn arc_integral(&self, a: f64, b: f64) -> f64 {
        if b > a {
            self.0 * (b - a).min(TAU) / TAU
        } else {
            0.0
        }
    }

    fn arc_integral_excised(&self, a: f64, b: f64, _eps: f64) -> f64 {
        self.arc_integral(a, b)
    }

    fn cell_integrals(&self, n: usize) -> Vec<f64> {
        vec![self.0 / n as f64; n]
    }

    fn label(&self) -> String {
        format!("{}", self.0)
    }
}

/// `scale * |e^{it} - e^{i angle}|^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerWeight {
    pub scale: f64,
    pub exponent: f64,
    pub angle: f64,
}

impl PowerWeight {
    pub fn new(scale: f64, exponent: f64, angle: f64) -> Self {
        Self { scale, exponent, angle: wrap_angle(angle) }
    }
}

impl BoundaryFunction for PowerWeight {
    fn value_at(&self, base: f64, off: f64) -> f64 {
        let d = wrap_angle(base - self.angle) + off;
        self.scale * (2.0 * (0.5 * d).sin()).abs().powf(self.exponent)
    }

    fn singularities(&self) -> Vec<Singularity> {
        if self.exponent == 0.0 {
            Vec::new()
        } else {
            vec![Singularity::new(self.angle, self.exponent)]
        }
    }

    fn label(&self) -> String {
        format!("{}*|z-e^(i{})|^{}", self.scale, self.angle, self.exponent)
    }
}

/// Piecewise constant density: `values[j]` on the cell centred at `2 pi j / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    values: Vec<f64>,
    prefix: Vec<f64>,
}

impl GridDensity {
    pub fn new(values: Vec<f64>) -> Self {
        let h = TAU / values.len() as f64;
        let mut prefix = Vec::with_capacity(values.len() + 1);
        let mut acc = crate::numeric::quad::CompensatedSum::new();
        prefix.push(0.0);
        for v in &values {
            acc.add(v * h);
            prefix.push(acc.value());
        }
        Self { values, prefix }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn index(&self, t: f64) -> usize {
        let n = self.values.len();
        let k = (t * n as f64 / TAU).round() as i64;
        k.rem_euclid(n as i64) as usize
    }

    /// Unnormalized integral from `-h/2` to `x`, extended periodically.
    fn primitive(&self, x: f64) -> f64 {
        let n = self.values.len();
        let h = TAU / n as f64;
        let u = (x + 0.5 * h) / h;
        let k = u.floor();
        let frac = u - k;
        let k = k as i64;
        let cycles = k.div_euclid(n as i64) as f64;
        let idx = k.rem_euclid(n as i64) as usize;
        cycles * self.prefix[n] + self.prefix[idx] + frac * h * self.values[idx]
    }
}

impl BoundaryFunction for GridDensity {
    fn value_at(&self, base: f64, off: f64) -> f64 {
        self.values[self.index(base + off)]
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let n = self.values.len();
        let h = TAU / n as f64;
        let first = ((a + 0.5 * h) / h).ceil() as i64;
        let last = ((b + 0.5 * h) / h).floor() as i64;
        (first..=last).map(|k| k as f64 * h - 0.5 * h).collect()
    }

    fn arc_integral(&self, a: f64, b: f64) -> f64 {
        if !(b > a) {
            return 0.0;
        }
        let b = b.min(a + TAU);
        (self.primitive(b) - self.primitive(a)) / TAU
    }

    fn arc_integral_excised(&self, a: f64, b: f64, _eps: f64) -> f64 {
        self.arc_integral(a, b)
    }

    fn cell_integrals(&self, n: usize) -> Vec<f64> {
        let h = TAU / n as f64;
        (0..n)
            .map(|j| {
                let c = h * j as f64;
                self.arc_integral(c - 0.5 * h, c + 0.5 * h)
            })
            .collect()
    }

    fn label(&self) -> String {
        format!("grid[{}]", self.values.len())
    }
}

fn merge_singularities(list: impl IntoIterator<Item = Singularity>) -> Vec<Singularity> {
    let mut out: Vec<Singularity> = Vec::new();
    for s in list {
        match out.iter_mut().find(|o| wrap_angle(o.angle - s.angle).abs() < 1e-14) {
            Some(o) => o.exponent += s.exponent,
            None => out.push(s),
        }
    }
    out.retain(|s| s.exponent != 0.0);
    out
}

/// Pointwise product of boundary functions.
#[derive(Debug, Clone)]
pub struct Product(pub Vec<Arc<dyn BoundaryFunction>>);

impl BoundaryFunction for Product {
    fn value_at(&self, base: f64, off: f64) -> f64 {
        let mut p = 1.0;
        for f in &self.0 {
            let v = f.value_at(base, off);
            if v == 0.0 {
                return 0.0;
            }
            p *= v;
        }
        p
    }

    fn singularities(&self) -> Vec<Singularity> {
        merge_singularities(self.0.iter().flat_map(|f| f.singularities()))
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        self.0.iter().flat_map(|f| f.breakpoints(a, b)).collect()
    }

    fn quad_tol(&self) -> f64 {
        self.0.iter().map(|f| f.quad_tol()).fold(QUAD_TOL, f64::max)
    }

    fn label(&self) -> String {
        self.0.iter().map(|f| f.label()).collect::<Vec<_>>().join(" * ")
    }
}

/// `1 / f`, infinite where `f` vanishes.
#[derive(Debug, Clone)]
pub struct Reciprocal(pub Arc<dyn BoundaryFunction>);

impl BoundaryFunction for Reciprocal {
    fn value_at(&self, base: f64, off: f64) -> f64 {
        1.0 / self.0.value_at(base, off)
    }

    fn singularities(&self) -> Vec<Singularity> {
        self.0.singularities().into_iter().map(|s| Singularity { angle: s.angle, exponent: -s.exponent }).collect()
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        self.0.breakpoints(a, b)
    }

    fn quad_tol(&self) -> f64 {
        self.0.quad_tol()
    }

    fn label(&self) -> String {
        format!("1/({})", self.0.label())
    }
}

/// `f` set to zero on a union of arcs `(start, start + length)`.
#[derive(Debug, Clone)]
pub struct Masked {
    pub inner: Arc<dyn BoundaryFunction>,
    pub zero_arcs: Vec<(f64, f64)>,
}

impl Masked {
    fn masked(&self, t: f64) -> bool {
        self.zero_arcs.iter().any(|&(s, len)| (t - s).rem_euclid(TAU) < len)
    }
}

impl BoundaryFunction for Masked {
    fn value_at(&self, base: f64, off: f64) -> f64 {
        if self.masked(base + off) {
            0.0
        } else {
            self.inner.value_at(base, off)
        }
    }

    fn singularities(&self) -> Vec<Singularity> {
        // a singular point strictly inside a zeroed arc is harmless
        self.inner
            .singularities()
            .into_iter()
            .filter(|s| {
                !self.zero_arcs.iter().any(|&(st, len)| {
                    let d = (s.angle - st).rem_euclid(TAU);
                    d > 1e-12 && d < len - 1e-12
                })
            })
            .collect()
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out = self.inner.breakpoints(a, b);
        for &(s, len) in &self.zero_arcs {
            for e in [s, s + len] {
                let k0 = ((a - e) / TAU).ceil() as i64;
                let mut k = k0;
                loop {
                    let p = e + TAU * k as f64;
                    if p > b {
                        break;
                    }
                    out.push(p);
                    k += 1;
                }
            }
        }
        out
    }

    fn quad_tol(&self) -> f64 {
        self.inner.quad_tol()
    }

    fn label(&self) -> String {
        format!("({}) masked on {:?}", self.inner.label(), self.zero_arcs)
    }
}

/// Closed arc `[center - pi L, center + pi L]` for a normalized length `L`.
pub fn arc_bounds(center: f64, length: f64) -> (f64, f64) {
    (center - PI * length, center + PI * length)
}
