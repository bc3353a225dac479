use core::f64::consts::PI;

use libm::{cos, sin, sqrt};

use super::{BESSEL_MAX_ARG, BESSEL_MAX_ORDER};
use crate::error::{Error, Result};

/// Arguments up to this use the power series.
const SERIES_MAX: f64 = 1.0;
/// Below this (or when the order exceeds the argument) Miller's downward
/// recurrence is used; above it the Hankel expansion plus upward recurrence.
const MILLER_MAX: f64 = 25.0;
const RESCALE: f64 = 1e250;

/// Bessel function of the first kind `J_n(x)` for integer `0 <= n <= 41`
/// and `0 <= x <= 1e4`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if order > BESSEL_MAX_ORDER {
        return Err(Error::domain(alloc::format!(
            "J_n supports n <= {BESSEL_MAX_ORDER}, got {order}"
        )));
    }
    if !(0.0..=BESSEL_MAX_ARG).contains(&x) {
        return Err(Error::domain(alloc::format!(
            "J_n supports 0 <= x <= {BESSEL_MAX_ARG}, got {x}"
        )));
    }
    Ok(if x == 0.0 {
        if order == 0 {
            1.0
        } else {
            0.0
        }
    } else if x <= SERIES_MAX {
        series(order, x)
    } else if x < MILLER_MAX || f64::from(order) > x {
        miller(order, x)
    } else {
        upward(order, x)
    })
}

fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for j in 1..=n {
        lead *= half / f64::from(j);
    }
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    for k in 1..40u32 {
        term *= q / (f64::from(k) * f64::from(n + k));
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Downward recurrence normalized by `J_0 + 2 sum_k J_2k = 1`.
fn miller(n: u32, x: f64) -> f64 {
    let top = (n as usize).max(x as usize);
    let m = 2 * ((top + sqrt(160.0 * top as f64) as usize + 20) / 2);
    let tox = 2.0 / x;
    let (mut bjp, mut bj, mut ans, mut sum) = (0.0, 1.0, 0.0, 0.0);
    let mut jsum = false;
    for j in (1..=m).rev() {
        let bjm = j as f64 * tox * bj - bjp;
        bjp = bj;
        bj = bjm;
        if bj.abs() > RESCALE {
            bj /= RESCALE;
            bjp /= RESCALE;
            ans /= RESCALE;
            sum /= RESCALE;
        }
        if jsum {
            sum += bj;
        }
        jsum = !jsum;
        if j == n as usize {
            ans = bjp;
        }
    }
    if n == 0 {
        ans = bj;
    }
    ans / (2.0 * sum - bj)
}

/// Hankel asymptotic expansion for `J_0` or `J_1`.
fn hankel(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(nu) * f64::from(nu);
    let (mut p, mut q) = (1.0, 0.0);
    let mut term: f64 = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = f64::from(2 * k - 1);
        term *= (mu - odd * odd) / (f64::from(k) * 8.0 * x);
        if term.abs() >= prev || term == 0.0 {
            break;
        }
        prev = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * f64::from(nu) + 0.25) * PI;
    sqrt(2.0 / (PI * x)) * (p * cos(chi) - q * sin(chi))
}

fn upward(n: u32, x: f64) -> f64 {
    let j0 = hankel(0, x);
    if n == 0 {
        return j0;
    }
    let mut jm = j0;
    let mut j = hankel(1, x);
    for k in 1..n {
        let next = 2.0 * f64::from(k) / x * j - jm;
        jm = j;
        j = next;
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        for l in 0..20 {
            assert_eq!(bessel_j(2 * l + 1, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn domain() {
        assert!(bessel_j(42, 1.0).is_err());
        assert!(bessel_j(1, -1.0).is_err());
        assert!(bessel_j(1, 1.0e4 + 1.0).is_err());
    }

    #[test]
    fn small_argument_limit() {
        let z = 1e-6;
        let v = bessel_j(1, z).unwrap() / z;
        assert!((v / 0.5 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn large_argument_asymptote() {
        let z: f64 = 50.0;
        let crude = sqrt(2.0 / (PI * z)) * cos(z - 0.75 * PI);
        let v = bessel_j(1, z).unwrap();
        assert!(((v - crude) / v).abs() < 1e-2);
    }

    #[test]
    fn methods_agree_at_crossovers() {
        for n in 0..6 {
            let a = miller(n, 25.0);
            let b = upward(n, 25.0);
            assert!((a - b).abs() < 1e-13, "n={n}: {a} {b}");
            let c = series(n, 1.0);
            let d = miller(n, 1.0);
            assert!((c - d).abs() < 1e-15 * c.abs().max(1e-3), "n={n}: {c} {d}");
        }
    }
}
