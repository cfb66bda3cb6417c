use permdyn::corpus;
use permdyn::lab::{
    check_commutativity, check_functional_equation, check_iterate_identity,
    geometric_sum_bound_check, pair_suite, sample_square, write_reports_json,
};
use permdyn::{parse, Complex64};

#[test]
fn corpus_identities_hold_on_seeded_samples() {
    let samples = sample_square(42, 200, 2.0);
    for entry in corpus::pairs() {
        for report in pair_suite(&entry.pair, 4, &samples, 1e-8).unwrap() {
            assert!(report.passed(), "{}: {}", entry.name, report.identity);
            assert!(report.max_relative_error <= 1e-8);
            assert_eq!(
                report.passes() + report.failures.len() + report.skipped_overflow,
                report.samples_checked
            );
        }
    }
}

#[test]
fn mismatched_pairs_are_caught() {
    let samples = sample_square(42, 200, 2.0);
    let exp = parse("exp(z)").unwrap();
    let neg_exp = parse("-exp(z)").unwrap();
    let r = check_functional_equation(
        &exp,
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 0.0),
        &samples,
        1e-8,
    )
    .unwrap();
    assert!(!r.failures.is_empty());
    let r = check_commutativity(&exp, &neg_exp, &samples, 1e-8).unwrap();
    assert!(!r.failures.is_empty());
    assert!(r.failures.windows(2).all(|w| w[0].index < w[1].index));

    // claimed partner with the wrong translation
    let wrong = permdyn::CommutingPair::new(
        parse("1+sin(z-1)").unwrap(),
        Complex64::new(-1.0, 0.0),
        Complex64::new(3.0, 0.0),
        1,
    )
    .unwrap();
    let r = check_functional_equation(wrong.f(), wrong.a(), wrong.b(), &samples, 1e-8).unwrap();
    assert!(!r.failures.is_empty());
    // beyond n = 1 the iterate identity relies on the functional equation
    let r = check_iterate_identity(&wrong, 4, &samples, 1e-8).unwrap();
    assert!(!r.passed());
}

#[test]
fn geometric_bound_holds_around_the_circle() {
    for k in 0..20 {
        let theta = 0.05 + k as f64 * (std::f64::consts::TAU - 0.1) / 19.0;
        assert!(
            geometric_sum_bound_check(Complex64::from_polar(1.0, theta), 200).unwrap(),
            "θ = {theta}"
        );
    }
}

#[test]
fn report_file_is_a_json_array() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let samples = sample_square(1, 20, 2.0);
    let reports: Vec<_> = pair_suite(&corpus::pairs()[0].pair, 3, &samples, 1e-8)
        .unwrap()
        .into_iter()
        .map(|r| r.with_seed(1))
        .collect();
    write_reports_json(&reports, &path).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 3);
    for r in arr {
        assert_eq!(r["seed"], 1);
        assert_eq!(r["tolerance"], 1e-8);
        assert_eq!(r["samples_checked"], 20);
    }
}
