use sigma_closure::primes::*;
use sigma_closure::Error;

fn trial_division_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[test]
fn small_sieves() {
    assert_eq!(PrimeTable::sieve(10).unwrap().primes(), &[2, 3, 5, 7]);
    assert_eq!(PrimeTable::sieve(2).unwrap().primes(), &[2]);
    assert_eq!(PrimeTable::sieve(3).unwrap().primes(), &[2, 3]);
    assert!(matches!(
        PrimeTable::sieve(1),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn million_matches_trial_division() {
    let t = PrimeTable::sieve(1_000_000).unwrap();
    let oracle = (0..=1_000_000u64)
        .filter(|&n| trial_division_is_prime(n))
        .count();
    assert_eq!(oracle, 78498);
    assert_eq!(t.len(), oracle);
}

#[test]
fn every_listed_number_is_prime_and_none_missing() {
    let t = PrimeTable::sieve(5000).unwrap();
    let oracle: Vec<u64> = (0..=5000).filter(|&n| trial_division_is_prime(n)).collect();
    assert_eq!(t.primes(), oracle.as_slice());
}

#[test]
fn nth_prime_queries() {
    let t = PrimeTable::sieve(100).unwrap();
    assert_eq!(t.nth_prime(1).unwrap(), 2);
    assert_eq!(t.nth_prime(3).unwrap(), 5);
    assert_eq!(t.nth_prime(25).unwrap(), 97);
    match t.nth_prime(26) {
        Err(Error::NeedsLargerSieve { required }) => assert!(required >= 101),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn prime_count_queries() {
    let t = PrimeTable::sieve(100).unwrap();
    assert_eq!(t.prime_count(10.0).unwrap(), 4);
    assert_eq!(t.prime_count(1.9).unwrap(), 0);
    assert_eq!(t.prime_count(100.0).unwrap(), 25);
    assert!(matches!(
        t.prime_count(100.5),
        Err(Error::NeedsLargerSieve { .. })
    ));
}

#[test]
fn pi_at_and_below_each_prime() {
    let t = PrimeTable::sieve(20_000).unwrap();
    for (i, &p) in t.primes().iter().enumerate() {
        let m = i + 1;
        assert_eq!(t.prime_count(p as f64).unwrap(), m);
        assert_eq!(t.prime_count(p as f64 - 0.5).unwrap(), m - 1);
    }
}

#[test]
fn growth_path_matches_fresh_sieve() {
    let small = PrimeTable::sieve(1000).unwrap();
    let grown = PrimeTable::sieve(small.bound() * 2).unwrap();
    let fresh = PrimeTable::sieve(2000).unwrap();
    assert_eq!(grown, fresh);
    let shared = covering(3000);
    assert!(shared.bound() >= 3000);
    assert_eq!(shared.range(0, 2000), fresh.primes());
}

#[test]
fn rosser_estimate_is_an_upper_bound() {
    let t = PrimeTable::sieve(200_000).unwrap();
    for m in 1..t.len() {
        assert!(t.nth_prime(m).unwrap() <= nth_prime_upper_estimate(m));
    }
}
