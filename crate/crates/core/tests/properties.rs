use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

use hbspace::analyzers::{carleson_sup_scan, reverse_inf_scan, Verdict};
use hbspace::boundary::BlaschkeProduct;
use hbspace::hb::{
    hb_inner, hb_norm, monomial_norm, pythagorean_mate, HbKernel, MateConfig, NormConfig, Polynomial, PythagoreanPair,
    SymbolB,
};
use hbspace::measure::{
    weight_measure, ArcWindow, ComplementWeight, DiskMeasure, DiskWeight, MateWeight, ProductWeight, RadialDensity,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(x, y)| c(x, y)), len)
}

/// Polynomial symbol with `sup |b| <= radius` by the coefficient bound.
fn poly_pair(raw: &[Complex64], radius: f64) -> PythagoreanPair {
    let l1: f64 = raw.iter().map(|z| z.norm()).sum::<f64>().max(1e-3);
    let scaled: Vec<Complex64> = raw.iter().map(|z| z * (radius / l1)).collect();
    let b = SymbolB::polynomial(&scaled).unwrap();
    pythagorean_mate(&b, &MateConfig::with_grid_exponent(10).unwrap()).unwrap()
}

fn l2_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Boundary density, boundary atoms, a radial component and a disk atom.
fn mixed_measure(beta: f64, angle: f64, atom: f64, z: Complex64) -> DiskMeasure {
    DiskMeasure::boundary_power(beta, 1.0, angle)
        .unwrap()
        .with_singular_atom(atom, 0.3)
        .unwrap()
        .with_radial(angle + 1.0, RadialDensity::power(beta, 0.5).unwrap())
        .with_disk_atom(z, 0.2)
        .unwrap()
}

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn boundary_window_mass_is_additive(
        beta in 0.0f64..0.9, angle in -PI..PI, atom in -PI..PI,
        center in -PI..PI, len in 1e-4f64..1.0,
    ) {
        let mu = DiskMeasure::boundary_power(beta, 1.0, angle).unwrap().with_singular_atom(atom, 0.3).unwrap();
        let whole = ArcWindow::new(center, len).unwrap();
        let left = ArcWindow::new(center - 0.5 * PI * len, 0.5 * len).unwrap();
        let right = ArcWindow::new(center + 0.5 * PI * len, 0.5 * len).unwrap();
        let sum = mu.window_mass(&left) + mu.window_mass(&right);
        prop_assert!(rel(mu.window_mass(&whole), sum) <= 1e-10, "{} vs {sum}", mu.window_mass(&whole));
    }

    #[test]
    fn window_mass_is_monotone(
        beta in 0.0f64..0.9, angle in -PI..PI, atom in -PI..PI,
        zr in 0.0f64..0.999, zt in -PI..PI,
        center in -PI..PI, len in 1e-4f64..0.5, grow in 1.0f64..2.0, shift in -1.0f64..1.0,
    ) {
        let mu = mixed_measure(beta, angle, atom, Complex64::from_polar(zr, zt));
        let inner = ArcWindow::new(center, len).unwrap();
        let outer_len = len * grow;
        let outer = ArcWindow::new(center + shift * PI * (outer_len - len), outer_len).unwrap();
        prop_assert!(mu.window_mass(&inner) <= mu.window_mass(&outer) * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn radial_quadrature_matches_closed_form(k in 0usize..3, theta in 1e-6f64..PI) {
        let beta = [0.25, 0.5, 0.75][k];
        let mu = DiskMeasure::mu_beta(beta, 1.0).unwrap();
        let w = ArcWindow::symmetric(theta).unwrap();
        let want = (theta / (2.0 * PI)).powf(1.0 - beta) / (1.0 - beta);
        prop_assert!(rel(mu.window_mass(&w), want) <= 1e-12);
        prop_assert!(rel(mu.window_mass_quadrature(&w), want) <= 1e-9);
    }
}

proptest! {
    #![proptest_config(cases(12))]

    #[test]
    fn weighting_composes(raw in coeffs(3), beta in 0.0f64..0.9, angle in -PI..PI, seed in 0u64..1000) {
        let pair = poly_pair(&raw, 0.9);
        let mu = mixed_measure(beta, angle, angle - 2.0, c(0.3, -0.4));
        let w1: Arc<dyn DiskWeight> = Arc::new(MateWeight::new(&pair));
        let w2: Arc<dyn DiskWeight> = Arc::new(ComplementWeight::new(&pair));
        let both: Arc<dyn DiskWeight> = Arc::new(ProductWeight(vec![w1.clone(), w2.clone()]));
        let once = weight_measure(&mu, &both).unwrap();
        let twice = weight_measure(&weight_measure(&mu, &w1).unwrap(), &w2).unwrap();
        for j in 0..50u64 {
            let h = (seed * 50 + j).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let center = (h % 10_000) as f64 / 10_000.0 * 2.0 * PI - PI;
            let len = 0.5f64.powi(((h >> 20) % 12) as i32);
            let w = ArcWindow::new(center, len).unwrap();
            let (x, y) = (once.window_mass(&w), twice.window_mass(&w));
            prop_assert!((x - y).abs() <= 1e-10 * x.abs().max(y.abs()).max(1e-12), "{x} vs {y} on {w:?}");
        }
    }

    #[test]
    fn scaling_is_equivariant(t in 1e-3f64..1e3, beta in 0.1f64..0.9, angle in -PI..PI) {
        let mu = mixed_measure(beta, angle, angle + 2.0, c(0.0, 0.5));
        let tmu = mu.scaled(t).unwrap();
        prop_assert!(rel(tmu.total_mass(), t * mu.total_mass()) <= 1e-12);
        for level in [0u32, 3, 7] {
            for w in hbspace::analyzers::scan_arcs(level) {
                prop_assert!(rel(tmu.window_mass(&w), t * mu.window_mass(&w)) <= 1e-12);
            }
        }
        for scan in [carleson_sup_scan, reverse_inf_scan] {
            let (a, b) = (scan(&mu, 8).unwrap(), scan(&tmu, 8).unwrap());
            prop_assert_eq!(a.verdict, b.verdict);
            prop_assert!(rel(b.value, t * a.value) <= 1e-12);
        }
    }

    #[test]
    fn scan_evidence_is_monotone(beta in 0.0f64..0.9, angle in -PI..PI, atom in -PI..PI, depth in 4u32..9) {
        let mu = mixed_measure(beta, angle, atom, c(0.5, 0.5));
        let sup = carleson_sup_scan(&mu, depth).unwrap();
        let inf = reverse_inf_scan(&mu, depth).unwrap();
        for w in sup.levels.windows(2) {
            prop_assert!(w[1].running >= w[0].running);
        }
        for w in inf.levels.windows(2) {
            prop_assert!(w[1].running <= w[0].running);
        }
        prop_assert!(carleson_sup_scan(&mu, depth + 1).unwrap().value >= sup.value);
        prop_assert!(reverse_inf_scan(&mu, depth + 1).unwrap().value <= inf.value);
    }

    #[test]
    fn mate_identity_holds(raw in coeffs(4), radius in 0.1f64..1.0) {
        let pair = poly_pair(&raw, radius);
        prop_assert!(pair.diagnostics().identity_error <= 1e-7);
        prop_assert!(pair.a_at(c(0.0, 0.0)).unwrap().re > 0.0);
    }

    #[test]
    fn hb_norm_dominates_hardy_norm(raw in coeffs(3), f in coeffs(12)) {
        let pair = poly_pair(&raw, 0.95);
        let n = hb_norm(&pair, &Polynomial(f.clone()), &NormConfig::default()).unwrap();
        prop_assert!(n.norm + 1e-9 >= l2_sq(&f).sqrt());
    }

    #[test]
    fn multiplication_by_mate_is_contractive(raw in coeffs(3), g in coeffs(10)) {
        let pair = poly_pair(&raw, 0.95);
        let a = pair.a_fn().taylor(4);
        let mut ag = vec![c(0.0, 0.0); g.len() + a.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in g.iter().enumerate() {
                ag[i + j] += x * y;
            }
        }
        let n = hb_norm(&pair, &Polynomial(ag), &NormConfig::default()).unwrap();
        prop_assert!(n.norm <= l2_sq(&g).sqrt() + 1e-9, "{} > {}", n.norm, l2_sq(&g).sqrt());
    }

    #[test]
    fn kernels_reproduce(raw in coeffs(3), f in coeffs(6), r in 0.0f64..0.95, t in -PI..PI) {
        let pair = poly_pair(&raw, 0.9);
        let lambda = Complex64::from_polar(r, t);
        let p = Polynomial(f);
        let k = HbKernel::new(&pair, lambda).unwrap();
        let cfg = NormConfig::default();
        let ip = hb_inner(&pair, &p, &k, &cfg).unwrap();
        let bound = 1e-6 * hb_norm(&pair, &p, &cfg).unwrap().norm * hb_norm(&pair, &k, &cfg).unwrap().norm;
        prop_assert!((ip - p.eval(lambda)).norm() <= bound, "{ip} vs {}", p.eval(lambda));
    }

    #[test]
    fn monomial_norms_are_nondecreasing(raw in coeffs(3), radius in 0.1f64..1.0) {
        let pair = poly_pair(&raw, radius);
        let norms: Vec<f64> = (0..24).map(|n| monomial_norm(&pair, n).unwrap()).collect();
        for w in norms.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn blaschke_products_are_contractive(
        zeros in prop::collection::vec((0.0f64..0.99, -PI..PI), 1..6),
        points in prop::collection::vec((0.0f64..1.0, -PI..PI), 500),
    ) {
        let zs: Vec<Complex64> = zeros.iter().map(|&(r, t)| Complex64::from_polar(r, t)).collect();
        let b = BlaschkeProduct::from_points(&zs).unwrap();
        for &(r, t) in &points {
            prop_assert!(b.eval(Complex64::from_polar(r.sqrt() * (1.0 - 1e-12), t)).norm() <= 1.0 + 1e-12);
        }
        for v in b.values_on_circle(1.0, 256) {
            prop_assert!((v.norm() - 1.0).abs() <= 1e-10);
        }
    }
}

#[test]
fn direct_scan_verdicts_survive_scaling() {
    let mu = DiskMeasure::mu_beta(0.5, 1.0).unwrap();
    for t in [1e-3, 1.0, 1e3] {
        assert_eq!(carleson_sup_scan(&mu.scaled(t).unwrap(), 10).unwrap().verdict, Verdict::Fail);
    }
}
