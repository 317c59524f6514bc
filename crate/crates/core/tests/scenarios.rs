use hbspace::scenarios::{build, catalog, run_all, Params};

#[test]
fn default_catalog_meets_expectations_at_depth_12() {
    let s = run_all(12).unwrap();
    for sc in &s.scenarios {
        for c in &sc.checks {
            println!(
                "{:<18} {:<18} expected {:?} observed {:?} {}",
                sc.scenario,
                format!("{:?}", c.check),
                c.expected,
                c.observed,
                c.evidence
            );
        }
    }
    assert_eq!(s.total, catalog().len());
    assert!(s.failed.is_empty(), "{:?}", s.failed);
}

#[test]
fn builds_are_deterministic() {
    let cfg = hbspace::analyzers::AnalysisConfig::default().with_depth(8).unwrap();
    let a = build("alpha-power", &Params::new(), 8).unwrap().run(&cfg);
    let b = build("alpha-power", &Params::new(), 8).unwrap().run(&cfg);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
