use klrvv::report::{Status, VerificationReport};
use klrvv::suite::{run_suite, NuSpec, SuiteConfig, SuiteName};

fn config(case: &str, nu: &str) -> SuiteConfig {
    SuiteConfig::new(case, nu)
}

#[test]
fn same_seed_same_report() {
    let cfg = config("A1", "l + p2*l");
    for suite in ["relations", "dims", "fullness", "morita:psi_plus_minus"] {
        let a = run_suite(&cfg, suite).unwrap().to_json();
        let b = run_suite(&cfg, suite).unwrap().to_json();
        assert_eq!(a, b, "{suite}");
    }
}

#[test]
fn json_reports_parse_back() {
    let r = run_suite(&config("A3", "2*p"), "all").unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["suite"], "all");
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), r.checks.len());
    assert!(checks.iter().all(|c| ["pass", "fail", "skipped(hypothesis)"].contains(&c["status"].as_str().unwrap())));
    assert!(r.overall(), "{}", r.to_text());
}

#[test]
fn empty_and_skipped_reports_pass() {
    assert!(VerificationReport::new("nothing").overall());
    let mut r = VerificationReport::new("s");
    r.skip("row", "needs mult(q) = 1");
    assert!(r.overall());
    r.check("c", false, "");
    assert!(!r.overall());
    assert_eq!(r.failures().len(), 1);
    assert_eq!(r.checks[0].status, Status::Skipped("needs mult(q) = 1".into()));
}

#[test]
fn unmet_hypotheses_are_skipped_not_failed() {
    let r = run_suite(&config("separated(A2,A3)", "q + p"), "all").unwrap();
    assert!(r.overall());
    assert!(r.checks.iter().all(|c| matches!(c.status, Status::Skipped(_))));
    let r = run_suite(&config("A2", "2*q"), "fullness").unwrap();
    assert!(r.checks.iter().any(|c| matches!(c.status, Status::Skipped(_))));
}

#[test]
fn suite_names() {
    for s in ["relations", "morita:phi_kz_p", "fullness", "heredity", "dims", "all"] {
        assert_eq!(s.parse::<SuiteName>().unwrap().to_string(), s);
    }
    assert!("morita:nope".parse::<SuiteName>().is_err());
    assert!(run_suite(&config("A1", "l"), "bogus").is_err());
}

#[test]
fn config_forms() {
    let cfg: SuiteConfig =
        serde_json::from_str(r#"{"case": "A1", "nu": [["l", 2], ["p2*l", 1]], "seed": 3}"#).unwrap();
    assert!(matches!(cfg.nu, NuSpec::List(_)));
    let (_, nu, _) = cfg.resolve().unwrap();
    assert_eq!(nu.total(), 6);
    assert!(serde_json::from_str::<SuiteConfig>(r#"{"case": "A1", "nu": "l", "colour": 1}"#).is_err());
    assert!(config("A4", "l").resolve().is_err());
    assert!(config("A1", "l + q").resolve().is_err());
    let gf = SuiteConfig { field: "GF(7)".into(), ..config("A2", "q + p2*q") };
    assert!(run_suite(&gf, "morita:phi_mult_one").unwrap().overall());
}
