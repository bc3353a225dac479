use std::f64::consts::PI;

use nalgebra::DVector;
use proptest::prelude::*;
use rydberg_core::chebyshev::RadialGrid;
use rydberg_core::eigensolver::{solve_state, SolverConfig};
use rydberg_core::quasiclassics::{fock_uniform, langer_uniform, QcOptions};
use rydberg_core::specfun::{airy_ai, airy_ai_with_derivative, bessel_j};
use rydberg_core::{PotentialParams, StateLabel};

fn horner(c: &[f64], r: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * r + a)
}

fn poly_derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &a)| k as f64 * a).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chebyshev_reproduces_polynomials(
        k_max in 4usize..40,
        r_max in 0.5f64..50.0,
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..5),
        t in 0.0f64..1.0,
    ) {
        prop_assume!(coeffs.len() <= k_max);
        // scaled so every term is O(1) on [0, r_max]
        let c: Vec<f64> = coeffs.iter().enumerate().map(|(k, a)| a / r_max.powi(k as i32)).collect();
        let grid = RadialGrid::new(r_max, k_max).unwrap();
        let values: Vec<f64> = grid.nodes().iter().map(|&r| horner(&c, r)).collect();
        let r = t * r_max;
        let got = grid.interpolate(&values, r).unwrap();
        prop_assert!((got - horner(&c, r)).abs() < 1e-11);

        // Clenshaw-Curtis is exact up to degree k_max
        let exact: f64 = c.iter().enumerate().map(|(k, a)| a * r_max.powi(k as i32 + 1) / (k as f64 + 1.0)).sum();
        prop_assert!((grid.integrate(&values) - exact).abs() < 1e-11 * r_max);
    }

    #[test]
    fn differentiation_identities(
        k_max in 4usize..60,
        r_max in 0.5f64..50.0,
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..4),
    ) {
        let c: Vec<f64> = coeffs.iter().enumerate().map(|(k, a)| a / r_max.powi(k as i32)).collect();
        let grid = RadialGrid::new(r_max, k_max).unwrap();
        let d = grid.diff_matrix();
        let n = k_max + 1;
        let ones = DVector::from_element(n, 1.0);
        prop_assert!((&d * &ones).amax() < 1e-9 / r_max);
        let p = DVector::from_iterator(n, grid.nodes().iter().map(|&r| horner(&c, r)));
        let dc = poly_derivative(&c);
        let dp = DVector::from_iterator(n, grid.nodes().iter().map(|&r| horner(&dc, r)));
        let scale = (k_max * k_max) as f64 / r_max;
        prop_assert!((&d * &p - dp).amax() < 1e-12 * scale);
    }

    #[test]
    fn bessel_three_term_recurrence(order in 1u32..40, x in 0.1f64..200.0) {
        let lo = bessel_j(order - 1, x).unwrap();
        let mid = bessel_j(order, x).unwrap();
        let hi = bessel_j(order + 1, x).unwrap();
        let lhs = lo + hi;
        let rhs = 2.0 * f64::from(order) / x * mid;
        let scale = lo.abs().max(hi.abs()).max(mid.abs()).max(1e-300);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale.max(1e-6), "{lhs} {rhs}");
    }

    #[test]
    fn airy_ode_residual(x in -30.0f64..12.0) {
        // Ai'' = x Ai, with Ai'' from a central difference of Ai'
        let h = 1e-4;
        let (_, dp) = airy_ai_with_derivative(x + h).unwrap();
        let (_, dm) = airy_ai_with_derivative(x - h).unwrap();
        let second = (dp - dm) / (2.0 * h);
        let ai = airy_ai(x).unwrap();
        // oscillation envelope on the left, the function itself on the right
        let size = if x < 0.0 { (-x).powf(-0.25).min(1.0) } else { ai.abs() };
        prop_assert!((second - x * ai).abs() < 1e-6 * (1.0 + x.abs()) * size, "x={x}");
    }

    #[test]
    fn bessel_small_argument(order in 0u32..10, x in 1e-8f64..1e-3) {
        // leading term (x/2)^n / n!
        let lead = (0.5 * x).powi(order as i32) / (1..=order).map(f64::from).product::<f64>();
        prop_assert!((bessel_j(order, x).unwrap() / lead - 1.0).abs() < 1e-5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn patching_phase_consistency(n in 8u32..25) {
        // hydrogen: the quantized energy is -1/n^2 and S^F + S^L = n pi
        let h = PotentialParams::hydrogen();
        let st = StateLabel::upper(n, 0).unwrap();
        let e = -1.0 / f64::from(n * n);
        let opts = QcOptions::default();
        let wl = langer_uniform(&st, e, &h, &opts).unwrap();
        let wf = fock_uniform(&st, e, &h, &opts).unwrap();
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        prop_assert!((wf.norm - sign * wl.norm / 2f64.sqrt()).abs() < 1e-15);
        let r_plus = wl.action.r_plus();
        for i in 1..100 {
            let r = r_plus * f64::from(i) / 100.0;
            let sl = wl.action.langer(r).unwrap();
            let sf = wf.action.eval(r).unwrap();
            prop_assert!((sl + sf - f64::from(n) * PI).abs() < 1e-9);
            if sl > 20.0 && sf > 20.0 {
                // deep forms coincide once the phases agree
                let a = wl.langer_cosine(r).unwrap();
                let b = wf.fock_cosine(r).unwrap();
                prop_assert!((a - b).abs() < 1e-9 * wl.norm.abs());
            }
        }
    }

    #[test]
    fn node_count_law(n in 1u32..9, l in 0u32..3) {
        prop_assume!(l < n);
        let nf = f64::from(n);
        let cfg = SolverConfig {
            k_max: 300,
            r_max: Some(4.0 * nf * nf + 30.0),
            ..SolverConfig::default()
        };
        let st = StateLabel::upper(n, l).unwrap();
        let bs = solve_state(&st, &PotentialParams::hydrogen(), &cfg, 0.0).unwrap();
        prop_assert_eq!(bs.node_count, n - l - 1);
        prop_assert_eq!(bs.label.n, n);
    }
}
