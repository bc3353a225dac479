use core::f64::consts::{FRAC_PI_4, PI};

use libm::{cos, exp, sin, sqrt};

use super::AIRY_MAX_ARG;
use crate::error::{Error, Result};

/// `Ai(0)`.
const AI0: f64 = 0.355_028_053_887_817_2;
/// `Ai'(0)`.
const AIP0: f64 = -0.258_819_403_792_806_8;

/// Beyond this `|x|` the asymptotic expansions are used directly.
const ASYMPTOTIC_FROM: f64 = 9.0;
/// Taylor steps between anchor points never exceed this length.
const MAX_STEP: f64 = 0.5;

/// Airy function `Ai(x)` for real `|x| <= 1e3`.
pub fn airy_ai(x: f64) -> Result<f64> {
    Ok(airy_ai_with_derivative(x)?.0)
}

/// `(Ai(x), Ai'(x))`.
///
/// For `|x| >= 9` the standard asymptotic series are summed to their
/// smallest term. Inside, the Maclaurin data at `0` (for `x < 2`) or the
/// asymptotic data at `9` (for `x >= 2`) are carried to `x` by Taylor steps
/// of the Airy equation `y'' = x y`.
pub fn airy_ai_with_derivative(x: f64) -> Result<(f64, f64)> {
    if x.is_nan() || x.abs() > AIRY_MAX_ARG {
        return Err(Error::domain(alloc::format!(
            "Ai(x) supports |x| <= {AIRY_MAX_ARG}, got {x}"
        )));
    }
    Ok(if x >= ASYMPTOTIC_FROM {
        asymptotic_positive(x)
    } else if x <= -ASYMPTOTIC_FROM {
        asymptotic_negative(-x)
    } else if x >= 2.0 {
        let start = asymptotic_positive(ASYMPTOTIC_FROM);
        propagate(ASYMPTOTIC_FROM, start, x)
    } else {
        propagate(0.0, (AI0, AIP0), x)
    })
}

/// Carries `(y, y')` at `x0` to `x` with steps no longer than `MAX_STEP`.
fn propagate(x0: f64, mut y: (f64, f64), x: f64) -> (f64, f64) {
    let dist = x - x0;
    let steps = libm::ceil(dist.abs() / MAX_STEP).max(1.0) as usize;
    let h = dist / steps as f64;
    let mut at = x0;
    for i in 0..steps {
        y = taylor_step(at, y, h);
        at = if i + 1 == steps { x } else { x0 + h * (i + 1) as f64 };
    }
    y
}

/// One Taylor step of `y'' = x y` from `x0` by `h`.
///
/// Coefficients obey `(k+2)(k+1) c_{k+2} = x0 c_k + c_{k-1}`.
fn taylor_step(x0: f64, (y0, dy0): (f64, f64), h: f64) -> (f64, f64) {
    let mut c_km1 = 0.0;
    let mut c_k = y0;
    let mut c_k1 = dy0;
    // value and derivative sums, starting with the k = 0, 1 terms
    let mut val = y0 + dy0 * h;
    let mut der = dy0;
    let mut hp = h; // h^(k+1) for the upcoming c_{k+2}
                    // with x0 = 0 two of every three coefficients vanish, so require a run
    let mut small_run = 0;
    for k in 0..300usize {
        let kf = k as f64;
        let c_k2 = (x0 * c_k + c_km1) / ((kf + 2.0) * (kf + 1.0));
        let dterm = (kf + 2.0) * c_k2 * hp;
        hp *= h;
        let vterm = c_k2 * hp;
        val += vterm;
        der += dterm;
        c_km1 = c_k;
        c_k = c_k1;
        c_k1 = c_k2;
        if vterm.abs() + dterm.abs() <= 1e-18 * (val.abs() + der.abs()) {
            small_run += 1;
            if small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    (val, der)
}

/// `u_k` coefficients of the Airy asymptotic series; `u_0 = 1`.
fn u_coeff(k: usize, prev: f64) -> f64 {
    let kf = k as f64;
    prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf)
}

fn asymptotic_positive(x: f64) -> (f64, f64) {
    let sx = sqrt(x);
    let zeta = 2.0 / 3.0 * x * sx;
    let q = sqrt(sx); // x^(1/4)
    let (mut su, mut sv) = (1.0, 1.0);
    let mut u = 1.0;
    let mut term_prev = f64::INFINITY;
    let mut zp = 1.0;
    for k in 1..60 {
        u = u_coeff(k, u);
        let v = -(6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) * u;
        zp *= -zeta;
        let tu = u / zp;
        if tu.abs() >= term_prev {
            break;
        }
        term_prev = tu.abs();
        su += tu;
        sv += v / zp;
        if tu.abs() < 1e-17 {
            break;
        }
    }
    let e = exp(-zeta);
    let pre = 0.5 / sqrt(PI);
    (pre * e * su / q, -pre * e * q * sv)
}

fn asymptotic_negative(z: f64) -> (f64, f64) {
    let sz = sqrt(z);
    let zeta = 2.0 / 3.0 * z * sz;
    let q = sqrt(sz);
    // even/odd partial sums for u_k and v_k
    let (mut ue, mut uo, mut ve, mut vo) = (1.0, 0.0, 1.0, 0.0);
    let mut u = 1.0;
    let mut zp = 1.0;
    let mut term_prev = f64::INFINITY;
    for k in 1..80 {
        u = u_coeff(k, u);
        let v = -(6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) * u;
        zp *= zeta;
        let tu = u / zp;
        if tu.abs() >= term_prev {
            break;
        }
        term_prev = tu.abs();
        // sign pattern (-1)^floor(k/2)
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            ue += sign * tu;
            ve += sign * v / zp;
        } else {
            uo += sign * tu;
            vo += sign * v / zp;
        }
        if tu.abs() < 1e-17 {
            break;
        }
    }
    let phase = zeta - FRAC_PI_4;
    let (s, c) = (sin(phase), cos(phase));
    let pre = 1.0 / sqrt(PI);
    let ai = pre / q * (c * ue + s * uo);
    let aip = pre * q * (s * ve - c * vo);
    (ai, aip)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_zero() {
        assert_eq!(airy_ai(0.0).unwrap(), 0.355_028_053_887_817_2);
    }

    #[test]
    fn domain() {
        assert!(airy_ai(1000.0).is_ok());
        assert!(airy_ai(-1000.0).is_ok());
        assert!(airy_ai(1000.5).is_err());
        assert!(airy_ai(f64::NAN).is_err());
    }

    #[test]
    fn branches_agree_at_crossover() {
        // forward propagation toward +x is unstable, so only check x <= 2
        for &x in &[-ASYMPTOTIC_FROM, 2.0] {
            let a = airy_ai_with_derivative(x).unwrap();
            let b = propagate(0.0, (AI0, AIP0), x);
            assert!((a.0 - b.0).abs() <= 1e-11 * a.0.abs().max(1e-3), "{x}: {a:?} {b:?}");
        }
    }

    #[test]
    fn negative_asymptote() {
        // the leading term alone is only good to the first correction, u_1 / zeta ~ 3e-3
        let z: f64 = 10.0;
        let crude = cos(2.0 / 3.0 * z * sqrt(z) - FRAC_PI_4) / (sqrt(PI) * sqrt(sqrt(z)));
        let v = airy_ai(-z).unwrap();
        assert!(((v - crude) / v).abs() < 3e-2);
        assert!((v - 0.040_241_238_486_443_2).abs() < 1e-13);
    }

    #[test]
    fn positive_anchor() {
        let (v, d) = airy_ai_with_derivative(9.0).unwrap();
        assert!((v / 2.471_168_430_872_49e-9 - 1.0).abs() < 1e-12);
        assert!((d / -7.480_641_389_658_95e-9 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn positive_decay() {
        let v = airy_ai(10.0).unwrap();
        assert!(v > 0.0 && v < 1e-9);
    }
}
