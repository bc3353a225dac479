//! Airy and Bessel values against the arbitrary-precision reference tables.

use rydberg_core::specfun::{airy_ai, bessel_j};

fn rows(text: &str) -> impl Iterator<Item = Vec<f64>> + '_ {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
}

#[test]
fn airy_matches_reference_table() {
    let mut worst = (0.0, 0.0);
    let mut count = 0;
    for row in rows(include_str!("data/airy_ai.txt")) {
        let (x, want, tol) = (row[0], row[1], row[2]);
        let got = airy_ai(x).unwrap();
        let err = (got - want).abs();
        assert!(err <= tol, "Ai({x}) = {got}, want {want} (err {err:e} > {tol:e})");
        if err / tol > worst.1 {
            worst = (x, err / tol);
        }
        count += 1;
    }
    assert_eq!(count, 500);
    println!("Ai: worst error/bound {:.3} at x = {}", worst.1, worst.0);
}

#[test]
fn bessel_matches_reference_table() {
    let mut count = 0;
    for row in rows(include_str!("data/bessel_j.txt")) {
        let (n, x, want, tol) = (row[0] as u32, row[1], row[2], row[3]);
        let got = bessel_j(n, x).unwrap();
        let err = (got - want).abs();
        assert!(err <= tol, "J_{n}({x}) = {got}, want {want} (err {err:e} > {tol:e})");
        count += 1;
    }
    assert_eq!(count, 500);
}
