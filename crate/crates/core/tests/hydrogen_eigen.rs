use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rydberg_core::chebyshev::RadialGrid;
use rydberg_core::eigensolver::{physicality_filter, solve_state, window_states, SolverConfig};
use rydberg_core::{Error, PotentialParams, StateLabel};

fn config(k_max: usize, r_max: f64) -> SolverConfig {
    SolverConfig {
        k_max,
        r_max: Some(r_max),
        ..SolverConfig::default()
    }
}

fn relative_error(e: f64, n: u32) -> f64 {
    let exact = -1.0 / f64::from(n * n);
    (e / exact - 1.0).abs()
}

#[test]
fn spectrum_and_node_law() {
    let h = PotentialParams::hydrogen();
    for n in 1..=10u32 {
        let nf = f64::from(n);
        // low n needs more room than 1.8 r+ to push the box shift below 1e-6
        let r_max = (3.6 * nf * nf).max(6.0 * nf * nf + 20.0);
        for l in 0..3u32.min(n) {
            let st = StateLabel::upper(n, l).unwrap();
            let bs = solve_state(&st, &h, &config(600, r_max), 0.0).unwrap();
            assert!(relative_error(bs.energy, n) < 1e-6, "n={n} l={l} E={}", bs.energy);
            assert_eq!(bs.node_count, n - l - 1);
            assert_eq!(bs.label.n, n);
            assert!((bs.norm_squared() - 1.0).abs() < 1e-8);
            assert_eq!(bs.u_values[0], 0.0);
            assert_eq!(*bs.u_values.last().unwrap(), 0.0);
            assert!(bs.residual < 1e-8);
            assert!(bs.sampling_margin > 1.0);
            assert!(bs.quantum_defect.abs() < 1e-5);
        }
    }
}

#[test]
fn window_spectrum_s_states() {
    let h = PotentialParams::hydrogen();
    let grid = RadialGrid::new(300.0, 600).unwrap();
    let cfg = SolverConfig {
        energy_window: (-1.1, -0.001),
        ..SolverConfig::default()
    };
    let st = StateLabel::upper(1, 0).unwrap();
    let states = window_states(&grid, &st, &h, &cfg).unwrap();
    let energies: Vec<f64> = states.iter().map(|s| s.energy).collect();
    assert!(energies.len() >= 9, "{energies:?}");
    for (k, s) in states.iter().take(9).enumerate() {
        let n = k as u32 + 1;
        assert_eq!(s.label.n, n);
        assert!(relative_error(s.energy, n) < 1e-6, "n={n} E={}", s.energy);
    }
    assert!(energies.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn p_states_start_at_n2() {
    let h = PotentialParams::hydrogen();
    let grid = RadialGrid::new(120.0, 300).unwrap();
    let cfg = SolverConfig {
        energy_window: (-1.1, -0.02),
        ..SolverConfig::default()
    };
    let st = StateLabel::upper(2, 1).unwrap();
    let states = window_states(&grid, &st, &h, &cfg).unwrap();
    assert!((states[0].energy + 0.25).abs() < 1e-9, "{}", states[0].energy);
    assert_eq!(states[0].label.n, 2);
}

#[test]
fn grid_refinement_is_stable() {
    let h = PotentialParams::hydrogen();
    let st = StateLabel::upper(6, 1).unwrap();
    let coarse = solve_state(&st, &h, &config(350, 240.0), 0.0).unwrap();
    let fine = solve_state(&st, &h, &config(700, 240.0), 0.0).unwrap();
    assert!((coarse.energy - fine.energy).abs() < 1e-8);
}

#[test]
fn origin_density_matches_closed_form() {
    let h = PotentialParams::hydrogen();
    for n in 5..=10u32 {
        let nf = f64::from(n);
        let st = StateLabel::upper(n, 0).unwrap();
        let bs = solve_state(&st, &h, &config(600, 3.6 * nf * nf + 40.0), 0.0).unwrap();
        let exact = 1.0 / (std::f64::consts::PI * nf * nf * nf);
        assert!((bs.origin_density() / exact - 1.0).abs() < 1e-6, "n={n}");
    }
}

#[test]
fn filter_accepts_bound_state_rejects_noise() {
    let h = PotentialParams::hydrogen();
    let st = StateLabel::upper(5, 0).unwrap();
    let bs = solve_state(&st, &h, &config(400, 150.0), 0.0).unwrap();
    assert!(physicality_filter(&bs.u_values, &bs.grid, bs.r_plus, 1e-6).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut accepted = 0;
    for _ in 0..100 {
        let mut u: Vec<f64> = (0..=400).map(|_| rng.gen_range(-1.0..1.0)).collect();
        u[0] = 0.0;
        u[400] = 0.0;
        if physicality_filter(&u, &bs.grid, bs.r_plus, 1e-6).unwrap() {
            accepted += 1;
        }
    }
    assert_eq!(accepted, 0);

    match physicality_filter(&bs.u_values, &bs.grid, 140.0, 1e-6) {
        Err(Error::InsufficientDomain { .. }) => {}
        other => panic!("expected InsufficientDomain, got {other:?}"),
    }
}

#[test]
fn analytic_wavefunction() {
    // U_{2,0} = r (1 - r/2) exp(-r/2) / sqrt(2)
    let h = PotentialParams::hydrogen();
    let st = StateLabel::upper(2, 0).unwrap();
    let bs = solve_state(&st, &h, &config(300, 60.0), 0.0).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let r = 30.0 * (i as f64 + 0.5) / 200.0;
        let exact = r * (1.0 - 0.5 * r) * (-0.5 * r).exp() / 2f64.sqrt();
        worst = worst.max((bs.eval(r).unwrap() - exact).abs());
    }
    assert!(worst < 1e-8, "{worst}");
}
