use sigma_closure::certified::{compare, CertOrder, Enclosure, Precision};
use sigma_closure::mighty::*;
use sigma_closure::Error;

fn dec(s: &str) -> Enclosure {
    Enclosure::from_decimal(s, 128).unwrap()
}

fn verdict(p: u64, r: &str) -> Verdict {
    is_mighty(p, &dec(r), Precision::default()).unwrap().verdict
}

#[test]
fn verdict_examples() {
    assert_eq!(verdict(2, "2"), Verdict::Mighty);
    assert_eq!(verdict(2, "1.5"), Verdict::NotMighty);
    assert_eq!(verdict(29, "3"), Verdict::NotMighty);
    // 1 + 7^-3 = 1.0029155 against u_4(3) = 1.0018122 (independent 30-digit evaluation)
    assert_eq!(verdict(7, "3"), Verdict::Mighty);
    assert_eq!(verdict(11, "3"), Verdict::NotMighty);
    assert_eq!(verdict(13, "3"), Verdict::NotMighty);
    assert_eq!(verdict(5, "3"), Verdict::Mighty);
    assert!(is_mighty(4, &dec("2"), Precision::default()).is_err());
    assert!(matches!(
        is_mighty(2, &dec("1"), Precision::default()),
        Err(Error::DivergentInput(_))
    ));
}

#[test]
fn verdict_carries_certifying_pair() {
    let v = is_mighty(3, &dec("2"), Precision::default()).unwrap();
    assert_eq!(v.index, 2);
    assert_eq!(compare(&v.lhs, &v.rhs), CertOrder::Greater);
    assert_eq!(v.precision_used, Precision::default());
}

#[test]
fn scanner_agrees_with_direct_decisions() {
    for r in ["1.9", "2.25", "3", "3.5"] {
        let r = dec(r);
        let mut scanner = MightyScanner::new(&r, Precision::default()).unwrap();
        for v in scanner.scan_to(200).unwrap() {
            let direct = is_mighty(v.prime, &r, Precision::default()).unwrap();
            assert_eq!(v.verdict, direct.verdict, "p = {} r = {r}", v.prime);
            assert!(v.rhs.overlaps(&direct.rhs));
        }
    }
}

#[test]
fn enumeration_examples() {
    let s = enumerate_mighty(&dec("3"), Precision::default(), None).unwrap();
    assert_eq!(s.mighty_primes, vec![2, 3, 5, 7]);
    assert!(s.enumeration_complete);
    assert_eq!((s.largest, s.count, s.largest_index), (7, 4, 4));
    assert_eq!(s.scan_bound, 23);

    let s = enumerate_mighty(&dec("2.35"), Precision::default(), None).unwrap();
    assert_eq!(s.mighty_primes, vec![2, 3, 5]);

    let s = enumerate_mighty(&dec("1.5"), Precision::default(), None).unwrap();
    assert!(s.mighty_primes.is_empty());
    assert_eq!((s.largest, s.count, s.largest_index), (0, 0, 0));
    assert!(s.enumeration_complete);

    let s = enumerate_mighty(&dec("2"), Precision::default(), None).unwrap();
    assert_eq!(s.mighty_primes, vec![2, 3]);
    assert_eq!(s.largest_index, 2);
}

#[test]
fn certificate_only_below_log2_over_log_six_fifths() {
    assert!(nagura_certificate(&dec("1.01"), 128));
    assert!(nagura_certificate(&dec("3.8"), 128));
    assert!(!nagura_certificate(&dec("3.81"), 128));
    let s = enumerate_mighty(&dec("4.5"), Precision::default(), Some(60)).unwrap();
    assert!(!s.enumeration_complete);
    assert_eq!(s.scan_bound, 59);
}

#[test]
fn default_cap_covers_nagura_start() {
    assert_eq!(default_scan_cap(&dec("2")), NAGURA_START);
    assert!(default_scan_cap(&dec("50")) > 50);
}

#[test]
fn eta_balance_signs() {
    let f = eta_balance(&dec("1.5"), Precision::default()).unwrap();
    assert!(*f.hi() < 0);
    let f = eta_balance(&dec("2"), Precision::default()).unwrap();
    assert!(*f.lo() > 0);
}

#[test]
fn eta_matches_threshold_of_three() {
    // eta = 1.887790926708118927... (independent 30-digit root)
    let e = eta(1e-7, Precision::default()).unwrap();
    assert!(e.contains_f64(1.887790926708119));
    assert!(e.width_f64() <= 1e-7);
    let t = threshold(3, 1e-7, Precision::default()).unwrap();
    assert!(t.overlaps(&e));
    // the balancing identity: 3 is mighty exactly where the balance is positive
    for (s, expect) in [
        ("1.88778", Verdict::NotMighty),
        ("1.88780", Verdict::Mighty),
    ] {
        assert_eq!(verdict(3, s), expect);
        let f = eta_balance(&dec(s), Precision::default()).unwrap();
        assert_eq!(*f.lo() > 0, expect == Verdict::Mighty);
    }
}

#[test]
fn threshold_rejects_bad_input() {
    assert!(threshold(4, 1e-3, Precision::default()).is_err());
    assert!(threshold(3, 0.0, Precision::default()).is_err());
    assert!(eta(-1.0, Precision::default()).is_err());
}

#[test]
fn threshold_width_contract() {
    let t = threshold(5, 1e-3, Precision::default()).unwrap();
    assert!(t.width_f64() <= 1e-3);
    assert!(*t.lo() >= 2.2 && *t.hi() <= 2.3, "{t}");
    assert!(t.contains_f64(2.286731681360405));
}

#[test]
fn threshold_ordering() {
    // independent references: r_3 1.8877909267, r_2 1.9401016837,
    // r_5 2.2867316814, r_7 2.4202313095, r_13 3.5135479094, r_11 3.7743449320
    let refs = [
        (3, 1.887790926708119),
        (2, 1.940101683743625),
        (5, 2.286731681360405),
        (7, 2.420231309520699),
        (13, 3.513547909357757),
        (11, 3.774344931998623),
    ];
    let mut previous = None::<Enclosure>;
    for (p, value) in refs {
        let t = threshold(p, 1e-8, Precision::default()).unwrap();
        assert!(t.contains_f64(value), "r_{p} = {t}");
        if let Some(prev) = &previous {
            assert_eq!(compare(prev, &t), CertOrder::Less);
        }
        previous = Some(t);
    }
}
