use rust_decimal::Decimal;
use sigma_closure::sweep::*;
use sigma_closure::Precision;
use std::str::FromStr;

fn d(s: &str) -> Decimal {
    Decimal::from_str(s).unwrap()
}

#[test]
fn grid_is_exact() {
    let g = grid(d("1.9"), d("3.0"), d("0.01")).unwrap();
    assert_eq!(g.len(), 111);
    assert_eq!(g[0], d("1.9"));
    assert_eq!(g[110], d("3"));
    assert_eq!(g[37].to_string(), "2.27");
    assert!(grid(d("1"), d("2"), d("0.1")).is_err());
    assert!(grid(d("1.5"), d("2"), d("0")).is_err());
    assert!(grid(d("2"), d("1.5"), d("0.1")).is_err());
}

#[test]
fn small_exponents_give_one_component() {
    let g = grid(d("1.5"), d("1.8"), d("0.1")).unwrap();
    let rows = sweep(&g, Precision::default(), 1).unwrap();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert_eq!(row.exact_count(), Some(1));
        assert!(row.bounds_hold());
    }
}

#[test]
fn parallel_matches_sequential() {
    let g = grid(d("1.85"), d("2.45"), d("0.05")).unwrap();
    let seq = sweep(&g, Precision::default(), 1).unwrap();
    let par = sweep(&g, Precision::default(), 4).unwrap();
    assert_eq!(seq, par);
    let mut a = Vec::new();
    let mut b = Vec::new();
    write_csv(&seq, &mut a).unwrap();
    write_csv(&par, &mut b).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    assert!(text.contains("\n2,2,3,3,3,6,true\n"));
}

#[test]
fn straddle_detection() {
    let mut row = sweep_row(d("2"), Precision::default()).unwrap();
    assert!(!row.straddles_four());
    row.components_max = 5;
    assert!(row.straddles_four());
}
