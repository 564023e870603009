use rust_decimal::Decimal;
use sigma_closure::verify::*;
use sigma_closure::Error;

#[test]
fn registry_lists_all_checks() {
    let registry = CheckRegistry::default();
    let names: Vec<_> = registry.names().collect();
    assert_eq!(
        names,
        [
            "bounds",
            "mainlower",
            "no-four",
            "oracle",
            "sandwich",
            "threenotf"
        ]
    );
    assert!(registry.get("no-four").unwrap().description().contains("4"));
    assert!(matches!(
        registry.run("nope", &CheckParams::default()),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn small_runs_pass() {
    let registry = CheckRegistry::default();
    let params = CheckParams {
        r: vec!["2.0".into()],
        n_max: 2000,
        p_max: 200,
        cases: 20,
        from: Decimal::new(195, 2),
        to: Decimal::new(205, 2),
        ..CheckParams::default()
    };
    for name in ["oracle", "sandwich", "threenotf", "no-four", "bounds"] {
        let outcome = registry.run(name, &params).unwrap();
        assert!(outcome.passed, "{name}: {:?}", outcome.lines);
    }
    let params = CheckParams {
        r: vec!["3.5".into()],
        ..CheckParams::default()
    };
    assert!(registry.run("mainlower", &params).unwrap().passed);
}

#[test]
fn mainlower_below_two_is_vacuous() {
    let params = CheckParams {
        r: vec!["2".into()],
        ..CheckParams::default()
    };
    let outcome = MainLower.run(&params).unwrap();
    assert!(outcome.passed);
    assert_eq!(outcome.lines.len(), 1, "{:?}", outcome.lines);
}
