use sigma_closure::certified::{Enclosure, Precision};
use sigma_closure::mighty::{is_mighty, Verdict};
use sigma_closure::oracle::*;
use sigma_closure::primes;

#[test]
fn trivial_samples() {
    let s = sample_values(2.0, 1).unwrap();
    assert_eq!(s.values, vec![(1, 1.0)]);
    assert!(empirical_gaps(&s, 1e-3).unwrap().is_empty());
    let s = sample_values(1.0, 6).unwrap();
    let six = s.values.iter().find(|v| v.0 == 6).unwrap().1;
    assert!((six - 2.0).abs() < 1e-15);
    assert!(sample_values(0.0, 10).is_err());
    assert!(sample_values(2.0, 0).is_err());
}

#[test]
fn sample_is_sorted_and_bounded() {
    let s = sample_values(2.0, 10_000).unwrap();
    assert_eq!(s.len(), 10_000);
    assert_eq!(s.values[0], (1, 1.0));
    assert!(s.values.windows(2).all(|w| w[0].1 <= w[1].1));
    assert!(s.max() < std::f64::consts::PI.powi(2) / 6.0);
}

#[test]
fn matches_divisor_sums() {
    let r = 2.3;
    let s = sample_values(r, 2000).unwrap();
    for &(n, v) in &s.values {
        let direct: f64 = (1..=n)
            .filter(|d| n % d == 0)
            .map(|d| (d as f64).powf(-r))
            .sum();
        assert!((v - direct).abs() < 1e-13, "n = {n}");
    }
}

#[test]
fn gap_below_five_quarters_at_two() {
    let s = sample_values(2.0, 100_000).unwrap();
    let gaps = empirical_gaps(&s, 1e-3).unwrap();
    // u_1 = pi^2/8 = 1.2337..., 1 + 2^-2 = 1.25
    let u1 = std::f64::consts::PI.powi(2) / 8.0;
    assert!(gaps.iter().any(|&(a, b)| a <= u1 && b >= 1.25));
    assert!(default_min_width(&s) > 0.0);
}

#[test]
fn brute_examples() {
    assert!(brute_mighty(1, 2.0, 1_000_000).unwrap());
    // 7 is 3-mighty: 1.0029155 against u_4 = 1.0018122
    assert!(brute_mighty(4, 3.0, 1_000_000).unwrap());
    assert!(!brute_mighty(5, 3.0, 1_000_000).unwrap());
    assert!(brute_mighty(3, 1.0, 2).is_err());
}

#[test]
fn agrees_with_certified_verdicts() {
    let table = primes::covering(100);
    for r in ["1.5", "2", "2.3", "3", "3.5"] {
        let re = Enclosure::from_decimal(r, 128).unwrap();
        let rf: f64 = r.parse().unwrap();
        for (i, &p) in table
            .primes()
            .iter()
            .enumerate()
            .take_while(|(_, &p)| p <= 97)
        {
            let certified = is_mighty(p, &re, Precision::default()).unwrap().verdict;
            let brute = brute_mighty(i + 1, rf, 1_000_000).unwrap();
            match certified {
                Verdict::Mighty => assert!(brute, "p = {p}, r = {r}"),
                Verdict::NotMighty => assert!(!brute, "p = {p}, r = {r}"),
                Verdict::Undecided => {}
            }
        }
    }
}

#[test]
fn csv_export() {
    let s = sample_values(2.0, 3).unwrap();
    let mut buf = Vec::new();
    s.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,sigma");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1,1.0"));
}
