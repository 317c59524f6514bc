//! One-dimensional quadrature used by the boundary and measure code.
//!
//! Integrands are written in *offset form* `f(base, off)` with the abscissa
//! `base + off`. Near an endpoint the node is passed as `(endpoint, distance)`
//! so that functions with a power or log singularity at that endpoint can
//! compute the distance without cancellation.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if !t.is_finite() {
            self.sum = t;
            return;
        }
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        if !self.sum.is_finite() {
            return self.sum;
        }
        self.sum + self.comp
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = CompensatedSum::new();
    for x in it {
        s.add(x);
    }
    s.value()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

const TS_MAX_LEVEL: usize = 9;
const TS_U_MAX: f64 = 6.5;

/// Tanh-sinh (double exponential) rule on `[a, b]`.
///
/// Handles integrable algebraic and logarithmic endpoint singularities.
/// Returns the estimate from the finest level reached together with the
/// difference between the last two levels as an error estimate.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, rel_tol: f64) -> QuadResult
where
    F: Fn(f64, f64) -> f64,
{
    if b == a {
        return QuadResult { value: 0.0, error: 0.0, converged: true };
    }
    let half = 0.5 * (b - a);
    // Contribution of the symmetric node pair at parameter u.
    let pair = |u: f64| -> f64 {
        let s = FRAC_PI_2 * u.sinh();
        let e = (-2.0 * s).exp();
        // 1 - tanh(s) without cancellation
        let dist = (b - a) * e / (1.0 + e);
        let cosh_s = s.cosh();
        let w = FRAC_PI_2 * u.cosh() / (cosh_s * cosh_s);
        if !(dist > 0.0) || !w.is_finite() || w == 0.0 {
            return 0.0;
        }
        let left = f(a, dist);
        let right = f(b, -dist);
        let mut acc = 0.0;
        if left.is_finite() {
            acc += left;
        }
        if right.is_finite() {
            acc += right;
        }
        w * acc
    };

    let mut h = 1.0;
    let mut sum = CompensatedSum::new();
    let mid = f(a, half);
    if mid.is_finite() {
        sum.add(FRAC_PI_2 * mid);
    }
    let mut u = h;
    while u <= TS_U_MAX {
        sum.add(pair(u));
        u += h;
    }
    let mut estimate = half * h * sum.value();
    let mut error = f64::INFINITY;
    for _level in 1..=TS_MAX_LEVEL {
        h *= 0.5;
        let mut u = h;
        while u <= TS_U_MAX {
            sum.add(pair(u));
            u += 2.0 * h;
        }
        let next = half * h * sum.value();
        error = (next - estimate).abs();
        estimate = next;
        if error <= rel_tol * estimate.abs() || error < 1e-300 {
            return QuadResult { value: estimate, error, converged: true };
        }
    }
    QuadResult { value: estimate, error, converged: false }
}

/// Tanh-sinh with recursive bisection when a single panel does not converge.
pub fn adaptive<F>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    adaptive_inner(f, a, b, rel_tol, 0)
}

fn adaptive_inner<F>(f: &F, a: f64, b: f64, rel_tol: f64, depth: usize) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let r = tanh_sinh(f, a, b, rel_tol);
    if r.converged || depth >= 14 {
        return r.value;
    }
    let m = 0.5 * (a + b);
    adaptive_inner(f, a, m, rel_tol, depth + 1) + adaptive_inner(f, m, b, rel_tol, depth + 1)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Shared 16-point rule.
    pub fn sixteen() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(16))
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        h * s
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
