use proptest::prelude::*;
use rug::Float;

use sigma_closure::certified::*;
use sigma_closure::Error;

const BITS: u32 = 128;

fn dec(s: &str) -> Enclosure {
    Enclosure::from_decimal(s, BITS).unwrap()
}

fn int(n: i64) -> Enclosure {
    Enclosure::from_int(n, BITS)
}

/// A 40-digit reference value widened by `1e-30`.
fn reference(s: &str) -> Enclosure {
    dec(s).inflate(&Float::with_val(BITS, Float::parse("1e-30").unwrap()))
}

fn quick() -> Precision {
    Precision::new(BITS, 20_000).unwrap()
}

#[test]
fn arithmetic_examples() {
    let sum = &int(1) + &int(2);
    assert!(sum.contains_f64(3.0));
    assert!(sum.width_f64() <= 2.0 * f64::EPSILON * 3.0);

    let prod = &int(2) * &dec("0.5");
    assert!(prod.contains_f64(1.0));

    let a = Enclosure::new(Float::with_val(BITS, 1), Float::with_val(BITS, 2)).unwrap();
    let b = Enclosure::new(Float::with_val(BITS, 2), Float::with_val(BITS, 4)).unwrap();
    let q = a.div(&b).unwrap();
    assert!(q.contains_f64(0.25) && q.contains_f64(1.0));
    assert!(q.lo_f64() >= 0.25 - 1e-30 && q.hi_f64() <= 1.0 + 1e-30);

    let z = Enclosure::new(Float::with_val(BITS, -1), Float::with_val(BITS, 1)).unwrap();
    assert_eq!(a.div(&z), Err(Error::IndeterminateDivision));
}

#[test]
fn subtraction_and_mixed_sign_products() {
    let a = Enclosure::new(Float::with_val(BITS, -2), Float::with_val(BITS, 3)).unwrap();
    let b = Enclosure::new(Float::with_val(BITS, -5), Float::with_val(BITS, 1)).unwrap();
    let p = &a * &b;
    assert_eq!(p.lo_f64(), -15.0);
    assert_eq!(p.hi_f64(), 10.0);
    let d = &a - &b;
    assert_eq!((d.lo_f64(), d.hi_f64()), (-3.0, 8.0));
    assert_eq!(a.square().lo_f64(), 0.0);
    assert_eq!(a.square().hi_f64(), 9.0);
}

#[test]
fn pow_examples() {
    let two = int(2);
    assert!(two.pow(&int(1)).unwrap().contains_f64(2.0));
    assert!(two.pow(&int(-2)).unwrap().contains_f64(0.25));
    let v = int(3).pow(&dec("-1.8877909")).unwrap();
    assert!(v.overlaps(&reference("0.1256882956387607457246080315050245254219")));
    assert!(v.width_f64() < 1e-35);
    assert!(int(0).pow(&int(2)).is_err());
}

#[test]
fn decimal_parsing_is_exact_or_bracketing() {
    let half = dec("0.5");
    assert!(half.is_point());
    let tenth = dec("0.1");
    assert!(!tenth.is_point());
    assert!(
        tenth.lo() < &Float::with_val(BITS, 0.1f64) || tenth.hi() > &Float::with_val(BITS, 0.1f64)
    );
    assert!(Enclosure::from_decimal("abc", BITS).is_err());
}

#[test]
fn compare_examples() {
    let iv = |a: i64, b: i64| {
        Enclosure::new(Float::with_val(BITS, a), Float::with_val(BITS, b)).unwrap()
    };
    assert_eq!(compare(&iv(1, 2), &iv(3, 4)), CertOrder::Less);
    assert_eq!(compare(&iv(1, 3), &iv(2, 4)), CertOrder::Overlapping);
    assert_eq!(compare(&iv(5, 5), &iv(1, 1)), CertOrder::Greater);
}

#[test]
fn zeta_known_values() {
    let prec = Precision::default();
    let z2 = zeta_enclosure(&int(2), prec).unwrap();
    assert!(z2.overlaps(&reference("1.644934066848226436472415166646025189219")));
    assert!(z2.width_f64() < 1e-33, "width {}", z2.width_f64());
    let z15 = zeta_enclosure(&dec("1.5"), prec).unwrap();
    assert!(z15.overlaps(&reference("2.612375348685488343348567567924071630571")));
    let z3 = zeta_enclosure(&int(3), prec).unwrap();
    assert!(z3.overlaps(&reference("1.202056903159594285399738161511449990765")));
    let z12 = zeta_enclosure(&dec("1.2"), prec).unwrap();
    assert!(z12.overlaps(&reference("5.59158244117775077653656319342314327763")));
}

#[test]
fn zeta_rejects_divergent_exponents() {
    assert!(matches!(
        zeta_enclosure(&int(1), Precision::default()),
        Err(Error::DivergentInput(_))
    ));
    assert!(matches!(
        tail_sum(0, &dec("0.5"), Precision::default()),
        Err(Error::DivergentInput(_))
    ));
}

#[test]
fn zeta_routes_agree() {
    for r in ["1.5", "1.8877909", "2", "2.3", "3.75"] {
        let r = dec(r);
        let em = zeta_enclosure(&r, Precision::default()).unwrap();
        let direct = zeta_enclosure_direct(&r, quick()).unwrap();
        assert!(em.overlaps(&direct), "r = {r}");
        assert!(direct.encloses(&em) || direct.width_f64() > em.width_f64());
        assert!(*em.lo() >= 1);
    }
}

#[test]
fn prime_zeta_at_two() {
    let s = tail_sum(0, &int(2), Precision::default()).unwrap();
    assert!(s.overlaps(&reference("0.4522474200410654985065433648322479341732")));
    assert!(*s.hi() < 1);
}

#[test]
fn tail_sum_upper_bound_decreases_with_m() {
    let r = dec("2.5");
    let mut previous = None::<Enclosure>;
    for m in 0..15 {
        let s = tail_sum(m, &r, quick()).unwrap();
        assert!(*s.hi() < 1);
        if let Some(p) = &previous {
            assert!(s.hi() < p.hi());
        }
        previous = Some(s);
    }
}

#[test]
fn euler_product_matches_zeta() {
    for r in ["1.5", "2", "3"] {
        let r = dec(r);
        let u0 = tail_product(0, &r, quick()).unwrap();
        let z = zeta_enclosure(&r, Precision::default()).unwrap();
        assert!(u0.overlaps(&z), "r = {r}: {u0} vs {z}");
    }
}

#[test]
fn u1_at_two_is_pi_squared_over_eight() {
    let target = reference("1.233700550136169827354311374984518891914");
    let direct = tail_product(1, &int(2), Precision::default()).unwrap();
    let euler = tail_product_euler(1, &int(2), Precision::default()).unwrap();
    assert!(direct.overlaps(&target));
    assert!(euler.overlaps(&target));
    assert!(euler.width_f64() < 1e-30);
}

#[test]
fn tail_products_exceed_one() {
    for m in [0, 1, 5, 30] {
        let u = tail_product(m, &dec("2.2"), quick()).unwrap();
        assert!(*u.lo() > 1);
        let v = tail_product_euler(m, &dec("2.2"), Precision::default()).unwrap();
        assert!(*v.lo() > 1);
        assert!(u.overlaps(&v));
    }
}

#[test]
fn refinement_never_widens_truncated_routes() {
    let r = dec("1.9");
    let coarse = Precision::new(BITS, 5_000).unwrap();
    let fine = Precision::new(BITS, 10_000).unwrap();
    for m in [0, 2, 7] {
        let a = tail_sum(m, &r, coarse).unwrap();
        let b = tail_sum(m, &r, fine).unwrap();
        assert!(a.encloses(&b), "sum m={m}: {a} vs {b}");
        let a = tail_product(m, &r, coarse).unwrap();
        let b = tail_product(m, &r, fine).unwrap();
        assert!(a.encloses(&b), "product m={m}: {a} vs {b}");
    }
    let a = zeta_enclosure_direct(&r, coarse).unwrap();
    let b = zeta_enclosure_direct(&r, fine).unwrap();
    assert!(a.encloses(&b));
}

#[test]
fn precision_validation() {
    assert!(Precision::new(52, 100).is_err());
    assert!(Precision::new(53, 9).is_err());
    let p = Precision::default().refined();
    assert_eq!(p.bits(), 256);
    assert_eq!(p.truncation(), 200_000);
    assert_eq!(Precision::default().ladder().count(), 5);
}

#[test]
fn json_form_rounds_outward() {
    let x = dec("0.1");
    let json = serde_json::to_value(&x).unwrap();
    let lo: f64 = json["lo"].as_str().unwrap().parse().unwrap();
    let hi: f64 = json["hi"].as_str().unwrap().parse().unwrap();
    assert!(lo <= 0.1 && 0.1 <= hi);
    let back: Enclosure = serde_json::from_value(json).unwrap();
    assert!(back.encloses(&x));
    let digits = |s: &str| s.chars().filter(|c| c.is_ascii_digit()).count();
    assert!(digits(x.lo_decimal().split('e').next().unwrap()) <= 26);
}

/// Composite expression used by the containment property.
fn composite(x: &Enclosure, y: &Enclosure) -> Enclosure {
    let a = y.pow(x).unwrap();
    let b = x.div(y).unwrap();
    let c = (x - y).square();
    &(&a + &b) - &(&c * &x.exp())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn higher_precision_nests_inside_lower(
        xn in -400i64..400, xd in 1u64..97,
        yn in 1i64..900, yd in 1u64..89,
    ) {
        let x = rug::Rational::from((xn, xd));
        let y = rug::Rational::from((yn, yd));
        let coarse = composite(&Enclosure::from_rational(&x, 64), &Enclosure::from_rational(&y, 64));
        let fine = composite(&Enclosure::from_rational(&x, 256), &Enclosure::from_rational(&y, 256));
        prop_assert!(coarse.encloses(&fine), "{} vs {}", coarse, fine);
    }

    #[test]
    fn sandwich_never_violated(m in 0usize..=20, r_milli in 1500u32..=4000) {
        let r = Enclosure::from_ratio(i64::from(r_milli), 1000, BITS).unwrap();
        let prec = Precision::new(BITS, 5_000).unwrap();
        let s = tail_sum(m, &r, prec).unwrap();
        let u = tail_product_euler(m, &r, Precision::default()).unwrap();
        let one = int(1);
        let defect = &one - &u.recip().unwrap();
        let lower = &s - &s.square().div_u64(2).unwrap();
        prop_assert!(compare(&lower, &defect) != CertOrder::Greater);
        prop_assert!(compare(&defect, &s) != CertOrder::Greater);
    }
}
