//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any FAIL.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use hbspace::analyzers::{
    a2_check, carleson_sup_scan, corona_check, isometry_refutation, kernel_ratio_scan, reverse_carleson_verdict,
    AnalysisConfig, AnalysisReport, IsometryCertificate, KernelKind, LambdaFamily, Verdict,
};
use hbspace::boundary::{fejer_riesz, Masked, ModulusFn, ModulusKind, PowerWeight, TrigPoly};
use hbspace::hb::{
    classify_extremeness, hb_norm, kernel_norm_closed_form, pythagorean_mate, taylor_b_over_a, CauchyKernel,
    Extremeness, MateConfig, NormConfig, Polynomial, PythagoreanPair, SymbolB,
};
use hbspace::measure::{weight_measure, ArcWindow, DiskMeasure, DiskWeight, MateWeight};
use hbspace::numeric::poly::Poly;
use hbspace::numeric::{classify_growth, Trend};
use hbspace::scenarios::{build, kernel_growth, kn_products, OscillatingWeight, Params};

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn lift<T>(r: hbspace::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn mate(b: &SymbolB) -> Result<PythagoreanPair, String> {
    lift(pythagorean_mate(b, &MateConfig::default()))
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

fn last_two_rel(running: &[f64]) -> f64 {
    let n = running.len();
    rel(running[n - 1], running[n - 2])
}

fn scenario_pair(name: &str, depth: u32) -> Result<(PythagoreanPair, Option<DiskMeasure>), String> {
    let s = lift(build(name, &Params::new(), depth))?;
    let pair = s.pair.ok_or_else(|| format!("{name} has no mate"))?;
    Ok((pair, s.measure))
}

fn kernel_norms() -> Outcome {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for b in [SymbolB::half_sum(), lift(SymbolB::alpha_power(0.25))?] {
        let pair = mate(&b)?;
        for j in 0..40 {
            let r = 1.0 - 2f64.powf(-8.0 * (j + 1) as f64 / 40.0);
            let lambda = Complex64::from_polar(r, 2.399963 * j as f64);
            let generic = lift(hb_norm(&pair, &CauchyKernel(lambda), &NormConfig::default()))?.norm.powi(2);
            let closed = lift(kernel_norm_closed_form(&pair, lambda))?.norm_sq;
            worst = worst.max(rel(generic, closed));
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    ensure(worst <= 1e-6 && secs <= 60.0, format!("max rel error {worst:.2e} over 80 points, {secs:.1} s"))
}

fn monomial_norms() -> Outcome {
    let pair = mate(&lift(SymbolB::alpha_power(0.25))?)?;
    let ba = lift(taylor_b_over_a(&pair, 64))?;
    let mut worst: f64 = 0.0;
    let mut prev = 0.0;
    let mut monotone = true;
    for n in 0..=64 {
        let formula = 1.0 + ba.coeffs[..=n].iter().map(|c| c.norm_sqr()).sum::<f64>();
        let generic = lift(hb_norm(&pair, &Polynomial::monomial(n), &NormConfig::default()))?.norm.powi(2);
        worst = worst.max(rel(generic, formula));
        monotone &= generic >= prev;
        prev = generic;
    }
    ensure(worst <= 1e-6 && monotone, format!("max rel error {worst:.2e}, nondecreasing {monotone}"))
}

fn window_masses() -> Outcome {
    let mu = lift(DiskMeasure::mu_beta(0.5, 1.0))?;
    let (mut exact, mut quad): (f64, f64) = (0.0, 0.0);
    for k in 0..20 {
        let theta = PI * 2f64.powf(-(k as f64) * 0.75);
        let w = lift(ArcWindow::symmetric(theta))?;
        let want = (theta / TAU).powf(0.5) / 0.5;
        exact = exact.max(rel(mu.window_mass(&w), want));
        quad = quad.max(rel(mu.window_mass_quadrature(&w), want));
    }
    ensure(
        exact <= 4.0 * f64::EPSILON && quad <= 1e-9,
        format!("analytic rel error {exact:.1e}, quadrature {quad:.1e}, 20 arcs"),
    )
}

fn carleson_dichotomy() -> Outcome {
    let t0 = Instant::now();
    let pair = mate(&SymbolB::half_sum())?;
    let mu = lift(DiskMeasure::mu_beta(0.5, 1.0))?;
    let s_mu = lift(carleson_sup_scan(&mu, 14))?;
    let w: Arc<dyn DiskWeight> = Arc::new(MateWeight::new(&pair));
    let nu = lift(weight_measure(&mu, &w))?;
    let s_nu = lift(carleson_sup_scan(&nu, 14))?;
    let change = last_two_rel(&s_nu.levels.iter().map(|l| l.running).collect::<Vec<_>>());
    let secs = t0.elapsed().as_secs_f64();
    ensure(
        (s_mu.growth_exponent + 0.5).abs() <= 0.05 && change <= 0.05 && secs <= 30.0,
        format!(
            "mu growth exponent {:.4}, |a|^2 mu sup {:.4} (last change {:.1e}), {secs:.1} s",
            s_mu.growth_exponent, s_nu.value, change
        ),
    )
}

fn a2_dichotomy() -> Outcome {
    let good = lift(a2_check(Arc::new(PowerWeight::new(1.0, 0.5, 0.0)), 14))?;
    let bad = lift(a2_check(Arc::new(PowerWeight::new(1.0, 1.5, 0.0)), 14))?;
    let change = last_two_rel(&good.levels.iter().map(|l| l.running).collect::<Vec<_>>());
    ensure(
        good.verdict == Verdict::Pass
            && change <= 0.05
            && bad.verdict == Verdict::Fail
            && (bad.growth_exponent + 0.5).abs() <= 0.05,
        format!(
            "|1-z|^0.5: {:?} sup {:.4}; |1-z|^1.5: {:?} growth exponent {:.4}",
            good.verdict, good.sup, bad.verdict, bad.growth_exponent
        ),
    )
}

fn condition(rep: &AnalysisReport, key: &str) -> Verdict {
    rep.conditions.get(key).map_or(Verdict::Undetermined, |c| c.verdict)
}

fn constant(rep: &AnalysisReport, key: &str) -> f64 {
    rep.constants.get(key).and_then(|v| v.as_f64()).unwrap_or(f64::NAN)
}

fn reverse_equivalence() -> Outcome {
    let cfg = lift(AnalysisConfig::default().with_depth(12))?;
    let (pair, mu) = scenario_pair("reverse-canonical", 12)?;
    let mu = mu.ok_or("reverse-canonical has no measure")?;
    let rep = lift(reverse_carleson_verdict(&pair, &mu, &cfg))?;
    let all_pass = ["MainThm.2", "MainThm.3", "MainThm.4"].iter().all(|k| condition(&rep, k) == Verdict::Pass);
    let (ess, rinf) = (constant(&rep, "ess_inf"), constant(&rep, "reverse_inf"));

    let h = ModulusFn::shared(pair.b().modulus(), ModulusKind::InvComplementSq);
    let killed =
        lift(DiskMeasure::zero().with_ac(Arc::new(Masked { inner: h, zero_arcs: vec![(FRAC_PI_4, FRAC_PI_2)] })))?
            .with_label("(1 - |b|^2)^-1 dm off a quarter arc");
    let rk = lift(reverse_carleson_verdict(&pair, &killed, &cfg))?;
    let family = lift(LambdaFamily::new(12, cfg.angles))?.with_critical(LambdaFamily::critical_points(&pair, &killed));
    let scan = lift(kernel_ratio_scan(&pair, &killed, &family, KernelKind::Reproducing))?;
    let ess_killed = constant(&rk, "ess_inf");
    ensure(
        all_pass && (ess - 1.0).abs() <= 1e-9 && rinf >= 0.99 && ess_killed == 0.0 && condition(&rk, "MainThm.4") == Verdict::Fail && scan.max_ratio > 10.0,
        format!(
            "canonical: (2)(3)(4) pass {all_pass}, ess inf {ess:.12}, reverse inf {rinf:.6}; killed: ess inf {ess_killed}, kernel ratio {:.2} at lambda {:.6}",
            scan.max_ratio, scan.witness.lambda
        ),
    )
}

fn blaschke_example() -> Outcome {
    let (pair, mu) = scenario_pair("blaschke-corona", 12)?;
    let mu = mu.ok_or("blaschke-corona has no measure")?;
    let g = lift(kernel_growth(&pair, &mu, 4..=12, 0.6))?;
    let slope_err = (g.slope / g.predicted - 1.0).abs();
    let b_err = g.b_norm.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let c = lift(corona_check(&pair, 12, 64))?;
    let mins: Vec<f64> = c.levels.iter().map(|l| l.min).collect();
    let decreasing = mins.windows(2).all(|w| w[1] < w[0]);
    let last = *mins.last().ok_or("no corona levels")?;
    ensure(
        slope_err <= 0.1 && b_err <= 1e-6 && decreasing && last < 0.05 && c.unresolved_levels.is_empty(),
        format!(
            "slope {:.4} vs {:.4} ({:.1}%), max |b-norm - 1| {b_err:.1e}, corona minima decreasing {decreasing} to {last:.4}",
            g.slope,
            g.predicted,
            100.0 * slope_err
        ),
    )
}

fn oscillating_example() -> Outcome {
    let (pair, _) = scenario_pair("oscillating-a2", 12)?;
    let c = lift(corona_check(&pair, 12, 64))?;
    let w = Arc::new(lift(OscillatingWeight::new(1.2, 12))?);
    let k = kn_products(&w, 8);
    let growing = k.products.windows(2).all(|p| p[1] > p[0]);
    ensure(
        c.verdict == Verdict::Pass
            && k.n.first() == Some(&3)
            && k.n.last() == Some(&8)
            && k.max_deviation <= 0.25
            && growing,
        format!(
            "corona {:?} (inf {:.4}); K_n products times beta_n within {:.1}% of {:.4} for n = 3..8",
            c.verdict,
            c.inf,
            100.0 * k.max_deviation,
            k.constant
        ),
    )
}

fn extremeness() -> Outcome {
    let gauss = classify_extremeness(&SymbolB::gauss_extreme());
    let by_2_16: Vec<f64> = gauss.log_integrals.iter().filter(|(n, _)| *n <= 1 << 16).map(|g| g.1).collect();
    let half = classify_extremeness(&SymbolB::half_sum());
    let n = half.log_integrals.len();
    let settle = rel(half.log_integrals[n - 1].1, half.log_integrals[n - 2].1);
    let z = classify_extremeness(&lift(SymbolB::polynomial(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]))?);
    ensure(
        gauss.verdict == Extremeness::Extreme
            && classify_growth(&by_2_16) == Trend::Divergent
            && half.verdict == Extremeness::NonExtreme
            && settle < 1e-3
            && z.verdict == Extremeness::Extreme,
        format!(
            "gauss-extreme {:?}, half-sum {:?} (last change {settle:.1e}), b = z {:?}",
            gauss.verdict, half.verdict, z.verdict
        ),
    )
}

fn isometry() -> Outcome {
    let pair = mate(&lift(SymbolB::alpha_power(0.25))?)?;
    let cert = lift(isometry_refutation(&pair, 16))?;
    let ok_alpha =
        matches!(cert, IsometryCertificate::Nonconstant { index, modulus_sq, .. } if index <= 16 && modulus_sq > 1e-10);
    let cpair = mate(&lift(SymbolB::constant(0.5))?)?;
    let ccert = lift(isometry_refutation(&cpair, 16))?;
    let ok_const = matches!(ccert, IsometryCertificate::Constant { lebesgue_scale, .. } if (lebesgue_scale - 4.0 / 3.0).abs() < 1e-12);
    ensure(ok_alpha && ok_const, format!("alpha-power: {cert:?}; constant 0.5: {ccert:?}"))
}

fn fejer_riesz_factors() -> Outcome {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let (mut worst, mut min_root, mut min_q0) = (0.0f64, f64::INFINITY, f64::INFINITY);
    for k in 0..25 {
        let degree = 1 + k % 12;
        let roots: Vec<Complex64> = (0..degree)
            .map(|_| {
                let r = if rng.random::<f64>() < 0.25 { 1.0 } else { 1.05 + 2.0 * rng.random::<f64>() };
                Complex64::from_polar(r, TAU * rng.random::<f64>())
            })
            .collect();
        let raw =
            Poly::from_roots(&roots).scale(Complex64::from_polar(0.5 + rng.random::<f64>(), TAU * rng.random::<f64>()));
        let n = 4096;
        let sup =
            (0..n).map(|j| raw.eval(Complex64::from_polar(1.0, TAU * j as f64 / n as f64)).norm()).fold(0.0, f64::max);
        let q = raw.scale(Complex64::new(1.0 / sup, 0.0));
        let t = TrigPoly::autocorrelation(&q);
        let f = lift(fejer_riesz(&t))?;
        for j in 0..n {
            let z = Complex64::from_polar(1.0, TAU * (j as f64 + 0.37) / n as f64);
            worst = worst.max((f.q.eval(z).norm_sqr() - q.eval(z).norm_sqr()).abs());
        }
        let q0 = f.q.eval(Complex64::new(0.0, 0.0));
        min_q0 = min_q0.min(if q0.im.abs() <= 1e-12 * q0.re.abs() { q0.re } else { f64::NEG_INFINITY });
        for r in lift(f.q.roots())? {
            min_root = min_root.min(r.norm());
        }
    }
    ensure(
        worst <= 1e-8 && min_q0 > 0.0 && min_root >= 1.0 - 1e-9,
        format!("25 factors: max boundary error {worst:.1e}, min q(0) {min_q0:.3e}, min root modulus {min_root:.12}"),
    )
}

fn determinism() -> Outcome {
    let run = |name: &str, threads: &str| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_hbspace"))
            .args(["scenario", "run", name, "--seed", "5", "--depth", "8"])
            .env("HB_THREADS", threads)
            .output()
            .map_err(|e| e.to_string())?;
        if out.status.code() != Some(0) {
            return Err(format!(
                "{name} exited with {:?}: {}",
                out.status.code(),
                String::from_utf8_lossy(&out.stderr)
            ));
        }
        Ok(out.stdout)
    };
    let mut bytes = 0;
    for name in ["alpha-power", "blaschke-corona", "reverse-canonical"] {
        let first = run(name, "1")?;
        if first != run(name, "1")? || first != run(name, "3")? {
            return Err(format!("{name}: reports differ between runs"));
        }
        bytes += first.len();
    }
    Ok(format!("3 scenarios x 3 runs byte-identical ({bytes} bytes each round)"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("kernel-norm agreement", kernel_norms),
        ("monomial-norm agreement", monomial_norms),
        ("window-mass closed form", window_masses),
        ("Carleson dichotomy", carleson_dichotomy),
        ("A2 dichotomy", a2_dichotomy),
        ("reverse Carleson equivalence", reverse_equivalence),
        ("Blaschke example", blaschke_example),
        ("oscillating weight", oscillating_example),
        ("extremeness classification", extremeness),
        ("isometry refutation", isometry),
        ("Fejer-Riesz correctness", fejer_riesz_factors),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail} [{secs:.1} s]", i + 1);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
