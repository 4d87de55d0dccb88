use e3real::verify::*;
use e3real::Error;

#[test]
fn suite_names_round_trip() {
    for s in Suite::ALL_SUITES.iter().chain([Suite::All].iter()) {
        assert_eq!(Suite::from_name(s.name()).unwrap(), *s);
    }
    assert!(matches!(Suite::from_name("nope"), Err(Error::Usage(_))));
}

#[test]
fn config_validation() {
    let ok = SuiteConfig::new(Suite::Brackets, 10, 1);
    assert!(ok.validate().is_ok());
    assert!(SuiteConfig::new(Suite::Brackets, 0, 1).validate().is_err());
    let mut c = ok.clone();
    c.tol = Some(0.0);
    assert!(matches!(run_suite(&c), Err(Error::Usage(_))));
    let mut c = ok.clone();
    c.bounds.y = (0.0, 1.0);
    assert!(c.validate().is_err());
}

#[test]
fn brackets_pass_and_are_deterministic() {
    let cfg = SuiteConfig::new(Suite::Brackets, 50, 42);
    let a = run_suite(&cfg).unwrap();
    let b = run_suite(&cfg).unwrap();
    assert!(a.pass, "{:?}", a.failures());
    assert_eq!(a, b);
    assert_eq!(a.suite, "brackets");
    assert_eq!((a.seed, a.samples), (42, 50));
    assert!(!a.checks.is_empty());
    assert!(a.regression.is_empty());
    for c in &a.checks {
        assert_eq!(c.threshold, 1e-10);
        assert_eq!(c.seed, 42);
    }
    // sorted by name
    assert!(a.checks.windows(2).all(|w| w[0].check <= w[1].check));
}

#[test]
fn different_seeds_sample_different_states() {
    let a = run_suite(&SuiteConfig::new(Suite::Gradients, 20, 1)).unwrap();
    let b = run_suite(&SuiteConfig::new(Suite::Gradients, 20, 2)).unwrap();
    assert!(a.pass && b.pass);
    assert!(a.checks.iter().zip(&b.checks).any(|(x, y)| x.residual != y.residual));
}

#[test]
fn tol_overrides_every_threshold() {
    let mut cfg = SuiteConfig::new(Suite::Gradients, 10, 3);
    cfg.tol = Some(1e-30);
    let r = run_suite(&cfg).unwrap();
    assert!(r.checks.iter().all(|c| c.threshold == 1e-30));
    // finite differences never hit 1e-30
    assert!(!r.pass);
    assert!(!r.failures().is_empty());
    cfg.tol = Some(1.0);
    assert!(run_suite(&cfg).unwrap().pass);
}

#[test]
fn check_result_semantics() {
    let c = CheckResult::new("x", 1e-3, 1e-4, 5, 9);
    assert!(!c.pass && c.gating);
    assert!(!CheckResult::new("x", f64::NAN, 1.0, 5, 9).pass);
    let cfg = SuiteConfig::new(Suite::Brackets, 5, 9);
    let r = VerifyReport::from_parts(&cfg, vec![c.clone().informational()], Vec::new());
    assert!(r.pass);
    assert!(r.failures().is_empty());
    let r = VerifyReport::from_parts(&cfg, vec![c], Vec::new());
    assert!(!r.pass);
}

#[test]
fn regression_table() {
    let r = run_suite(&SuiteConfig::new(Suite::Regression, 50, 7)).unwrap();
    assert!(r.pass);
    assert!(r.checks.is_empty());
    assert!(r.regression.len() >= 20);
    for row in &r.regression {
        assert!(!row.citation.is_empty() && !row.reading.is_empty());
        assert!(row.matches_allowlist, "{}", row.formula);
        assert_eq!(row.status == row.expected, row.matches_allowlist);
        assert_eq!(row.samples, 50);
    }
    let find = |f: &str| r.regression.iter().find(|x| x.formula == f).unwrap();
    for f in ["real_gamma0", "monopole_zhukovskii", "ab_zhukovskii", "moser_j"] {
        let row = find(f);
        assert_eq!(row.status, RegressionStatus::Agree);
        assert!(row.rel_dev < regression::AGREE_TOL);
    }
    assert_eq!(find("real_gamma").status, RegressionStatus::Deviate);
}

#[test]
fn allowlist_mismatch_fails_the_report() {
    let cfg = SuiteConfig::new(Suite::Regression, 10, 7);
    let mut rows = run_suite(&cfg).unwrap().regression;
    rows[0].expected = match rows[0].status {
        RegressionStatus::Agree => RegressionStatus::Deviate,
        RegressionStatus::Deviate => RegressionStatus::Agree,
    };
    rows[0].matches_allowlist = false;
    assert!(!VerifyReport::from_parts(&cfg, Vec::new(), rows).pass);
}

#[test]
fn json_report_shape() {
    let r = run_suite(&SuiteConfig::new(Suite::Equivariance, 10, 5)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["suite"], "equivariance");
    assert_eq!(v["pass"], true);
    let c = &v["checks"][0];
    for k in ["check", "residual", "threshold", "pass", "samples", "seed"] {
        assert!(!c[k].is_null(), "{k}");
    }
    let back: VerifyReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn residual_model() {
    assert_eq!(rel_residual(3.0, 1.0), 1.0);
    assert_eq!(rel_residual(0.0, 0.0), 0.0);
}
