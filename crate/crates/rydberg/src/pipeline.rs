//! State sweeps behind the CLI commands: defect tables, wavefunction
//! comparisons, hyperfine tables and the hydrogen validation suite.

use std::f64::consts::PI;

use rayon::prelude::*;
use rydberg_core::chebyshev::RadialGrid;
use rydberg_core::eigensolver::{sampling_margin, solve_state, BoundState, SolverConfig};
use rydberg_core::hyperfine::HyperfineResult;
use rydberg_core::potential::detect_second_region;
use rydberg_core::quasiclassics::{
    defect_slope, fermi_segre_density, fock_uniform, fock_wavefunction, langer_uniform, langer_wavefunction,
    quantize_langer, total_action, QcOptions,
};
use rydberg_core::units::UnitSystem;
use rydberg_core::{IsotopeData, PotentialParams, StateLabel};
use serde::Serialize;
use thiserror::Error;

use crate::output::{Cell, Table};

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
}

impl From<rydberg_core::Error> for Failure {
    fn from(e: rydberg_core::Error) -> Self {
        Failure::Numerical(e.to_string())
    }
}

/// Solver controls shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Fixed `k_max`; by default it scales with `n`.
    pub k_max: Option<usize>,
    pub r_max_factor: f64,
    /// Explicit outer radius in a_B.
    pub r_max: Option<f64>,
    pub tail_tol: f64,
    pub force_two_turning_points: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            k_max: None,
            r_max_factor: 1.5,
            r_max: None,
            tail_tol: 1e-6,
            force_two_turning_points: false,
        }
    }
}

impl SolveOptions {
    pub fn solver(&self, n: u32) -> SolverConfig {
        let base = SolverConfig::for_principal(n);
        SolverConfig {
            k_max: self.k_max.unwrap_or(base.k_max),
            r_max_factor: self.r_max_factor,
            r_max: self.r_max,
            tail_tol: self.tail_tol,
            ..base
        }
    }
}

pub fn j_label(state: &StateLabel) -> String {
    format!("{}/2", state.twice_j)
}

/// Every `(n, l, j)` for `n` in `ns` and `l` in `ls` (skipping `l >= n`),
/// ordered by `(n, l, j)`.
pub fn expand_states(ns: &[u32], ls: &[u32], twice_j: Option<u32>) -> Result<Vec<StateLabel>, Failure> {
    let mut out = Vec::new();
    for &n in ns {
        for &l in ls {
            if l >= n {
                continue;
            }
            let js: Vec<u32> = match twice_j {
                Some(tj) => vec![tj],
                None if l == 0 => vec![1],
                None => vec![2 * l - 1, 2 * l + 1],
            };
            for tj in js {
                out.push(StateLabel::new(n, l, tj).map_err(|e| Failure::Usage(e.to_string()))?);
            }
        }
    }
    if out.is_empty() {
        return Err(Failure::Usage("the state selection is empty".into()));
    }
    Ok(out)
}

/// One row of the defects table.
#[derive(Debug, Clone, Serialize)]
pub struct DefectRow {
    pub n: u32,
    pub l: u32,
    pub twice_j: u32,
    pub energy: Option<f64>,
    pub delta_numeric: Option<f64>,
    pub delta_quasiclassical: Option<f64>,
    pub fine_splitting: Option<f64>,
    pub anomaly: bool,
    pub sampling_margin: Option<f64>,
    pub residual: Option<f64>,
    pub error: Option<String>,
}

fn defect_row(state: &StateLabel, params: &PotentialParams, opts: &SolveOptions) -> DefectRow {
    let mut row = DefectRow {
        n: state.n,
        l: state.l,
        twice_j: state.twice_j,
        energy: None,
        delta_numeric: None,
        delta_quasiclassical: None,
        fine_splitting: None,
        anomaly: false,
        sampling_margin: None,
        residual: None,
        error: None,
    };
    let mut errors = Vec::new();
    // the comparison column uses the two-turning-point treatment; the flag marks it
    match quantize_langer(state, params, true) {
        Ok((_, d)) => row.delta_quasiclassical = Some(d),
        Err(e) => errors.push(format!("quasiclassical: {e}")),
    }
    let guess = row.delta_quasiclassical.unwrap_or(0.0);
    match solve_state(state, params, &opts.solver(state.n), guess) {
        Ok(bs) => {
            row.energy = Some(bs.energy);
            row.delta_numeric = Some(bs.quantum_defect);
            row.sampling_margin = Some(bs.sampling_margin);
            row.residual = Some(bs.residual);
        }
        Err(e) => errors.push(format!("numerical: {e}")),
    }
    let nu = f64::from(state.n) - row.delta_numeric.or(row.delta_quasiclassical).unwrap_or(0.0);
    match detect_second_region(state, -1.0 / (nu * nu), params) {
        Ok(sr) => row.anomaly = sr.is_some(),
        Err(e) => errors.push(format!("classical regions: {e}")),
    }
    if !errors.is_empty() {
        row.error = Some(errors.join("; "));
    }
    row
}

/// Computes every state concurrently; rows keep the order of `states`.
pub fn compute_defects(states: &[StateLabel], params: &PotentialParams, opts: &SolveOptions) -> Vec<DefectRow> {
    let mut rows: Vec<DefectRow> = states.par_iter().map(|s| defect_row(s, params, opts)).collect();
    for i in 0..rows.len() {
        for k in 0..rows.len() {
            let (a, b) = (&rows[i], &rows[k]);
            if a.n == b.n && a.l == b.l && a.l > 0 && a.twice_j + 2 == b.twice_j {
                if let (Some(x), Some(y)) = (a.delta_numeric, b.delta_numeric) {
                    let split = (x - y).abs();
                    rows[i].fine_splitting = Some(split);
                    rows[k].fine_splitting = Some(split);
                }
            }
        }
    }
    rows
}

pub fn defects_table(rows: &[DefectRow]) -> Table {
    let mut t = Table::new(vec![
        "n",
        "l",
        "j",
        "energy_ry",
        "energy_ghz",
        "delta_numeric",
        "delta_quasiclassical",
        "fine_splitting",
        "anomaly",
        "sampling_margin",
        "residual",
        "error",
    ]);
    for r in rows {
        t.push(vec![
            r.n.into(),
            r.l.into(),
            format!("{}/2", r.twice_j).into(),
            Cell::opt(r.energy),
            Cell::opt(r.energy.map(UnitSystem::rydberg_to_ghz)),
            Cell::opt(r.delta_numeric),
            Cell::opt(r.delta_quasiclassical),
            Cell::opt(r.fine_splitting),
            r.anomaly.into(),
            Cell::opt(r.sampling_margin),
            Cell::opt(r.residual),
            r.error.clone().map_or(Cell::Empty, Cell::Text),
        ]);
    }
    t
}

/// Numerical, Langer and Fock wavefunctions of one state on common radii.
#[derive(Debug)]
pub struct WavefunctionReport {
    pub state: BoundState,
    pub table: Table,
    /// `max |U_num - U_L|` over rows with `r > 1` a_B.
    pub max_langer_error: Option<f64>,
    /// `max |U_num - U_F|` over rows with `r < 3` a_B.
    pub max_fock_error: Option<f64>,
}

/// Builds the comparison at the numerical eigenvalue. Rows sit at the
/// interior grid nodes, or at `points` equidistant radii in `(0, r_max)`.
pub fn wavefunction_report(
    state: &StateLabel,
    params: &PotentialParams,
    opts: &SolveOptions,
    points: Option<usize>,
    fock: bool,
) -> Result<WavefunctionReport, Failure> {
    if fock && state.l != 0 {
        return Err(Failure::Usage(format!(
            "the Fock wavefunction is normalized through the s-wave patching only; l = {} has none",
            state.l
        )));
    }
    let guess = quantize_langer(state, params, true).map(|(_, d)| d).unwrap_or(0.0);
    let cfg = opts.solver(state.n);
    let bs = solve_state(state, params, &cfg, guess)?;
    let r_max = bs.grid.r_max();
    let qc = QcOptions {
        k_max: cfg.k_max,
        r_max: Some(r_max),
        allow_anomaly: opts.force_two_turning_points,
    };
    let langer = langer_uniform(state, bs.energy, params, &qc).map_err(|e| match e {
        rydberg_core::Error::Anomaly { .. } => Failure::Numerical(format!("{e} (--force-two-turning-points)")),
        e => e.into(),
    })?;
    let fock = if state.l == 0 {
        Some(fock_uniform(state, bs.energy, params, &qc)?)
    } else {
        None
    };
    let radii: Vec<f64> = match points {
        Some(m) if m > 0 => (1..=m).map(|i| r_max * i as f64 / (m + 1) as f64).collect(),
        _ => bs.grid.nodes()[1..bs.grid.nodes().len() - 1].to_vec(),
    };
    let mut table = Table::new(vec![
        "r_bohr",
        "u_numeric",
        "u_langer",
        "u_fock",
        "abs_err_langer",
        "abs_err_fock",
    ]);
    let (mut max_l, mut max_f) = (None::<f64>, None::<f64>);
    for r in radii {
        let u = bs.eval(r)?;
        let ul = langer_wavefunction(&langer, r).ok();
        let uf = fock.as_ref().and_then(|w| fock_wavefunction(w, r).ok());
        let el = ul.map(|v| (u - v).abs());
        let ef = uf.map(|v| (u - v).abs());
        if r > 1.0 {
            if let Some(e) = el {
                max_l = Some(max_l.map_or(e, |m| m.max(e)));
            }
        }
        if r < 3.0 {
            if let Some(e) = ef {
                max_f = Some(max_f.map_or(e, |m| m.max(e)));
            }
        }
        table.push(vec![
            r.into(),
            u.into(),
            Cell::opt(ul),
            Cell::opt(uf),
            Cell::opt(el),
            Cell::opt(ef),
        ]);
    }
    Ok(WavefunctionReport {
        state: bs,
        table,
        max_langer_error: max_l,
        max_fock_error: max_f,
    })
}

/// One row of the hyperfine table.
#[derive(Debug, Clone, Serialize)]
pub struct HyperfineRow {
    pub n: u32,
    pub delta0: f64,
    pub d_delta_dn: f64,
    /// Fermi-Segrè `|psi(0)|^2`, a_B^-3.
    pub psi0_sq: f64,
    /// `U'(0)^2 / 4 pi` of the collocation eigenvector, a_B^-3.
    pub psi0_sq_numeric: f64,
    pub a_over_h: f64,
    pub scaled_ghz: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HyperfineSummary {
    pub isotope: String,
    pub mean_scaled_ghz: f64,
    /// `(max - min) / mean` of the scaled constant.
    pub spread: f64,
}

/// s-state hyperfine constants over `ns`, with the numerical `delta_0` and the
/// quasiclassical `d delta_0 / dn` (or zero).
pub fn hyperfine_rows(
    isotope: &IsotopeData,
    ns: &[u32],
    params: &PotentialParams,
    opts: &SolveOptions,
    zero_slope: bool,
) -> Result<(Vec<HyperfineRow>, HyperfineSummary), Failure> {
    let rows: Result<Vec<HyperfineRow>, Failure> = ns
        .par_iter()
        .map(|&n| {
            let st = StateLabel::upper(n, 0).map_err(|e| Failure::Usage(e.to_string()))?;
            let guess = quantize_langer(&st, params, false).map(|(_, d)| d).unwrap_or(0.0);
            let bs = solve_state(&st, params, &opts.solver(n), guess)?;
            let slope = if zero_slope { 0.0 } else { defect_slope(n, params)? };
            let psi0 = fermi_segre_density(n, bs.quantum_defect, slope, params.z);
            let hf = HyperfineResult::new(isotope, n, bs.quantum_defect, psi0);
            Ok(HyperfineRow {
                n,
                delta0: bs.quantum_defect,
                d_delta_dn: slope,
                psi0_sq: psi0,
                psi0_sq_numeric: bs.origin_density(),
                a_over_h: hf.a_over_h,
                scaled_ghz: hf.scaled_ghz(),
            })
        })
        .collect();
    let rows = rows?;
    if rows.is_empty() {
        return Err(Failure::Usage("empty n range".into()));
    }
    let scaled: Vec<f64> = rows.iter().map(|r| r.scaled_ghz).collect();
    let mean = scaled.iter().sum::<f64>() / scaled.len() as f64;
    let (lo, hi) = scaled
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    Ok((
        rows,
        HyperfineSummary {
            isotope: isotope.label.to_owned(),
            mean_scaled_ghz: mean,
            spread: (hi - lo) / mean,
        },
    ))
}

pub fn hyperfine_table(rows: &[HyperfineRow]) -> Table {
    let mut t = Table::new(vec![
        "n",
        "delta0",
        "d_delta_dn",
        "psi0_sq_bohr3",
        "psi0_sq_numeric_bohr3",
        "a_over_h_hz",
        "scaled_ghz",
    ]);
    for r in rows {
        t.push(vec![
            r.n.into(),
            r.delta0.into(),
            r.d_delta_dn.into(),
            r.psi0_sq.into(),
            r.psi0_sq_numeric.into(),
            r.a_over_h.into(),
            r.scaled_ghz.into(),
        ]);
    }
    t
}

/// Outcome of one hydrogen check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub message: String,
}

impl Check {
    fn below(name: String, value: f64, tolerance: f64) -> Self {
        Self {
            passed: value < tolerance,
            message: format!("{value:.3e} < {tolerance:.1e}"),
            name,
            value,
            tolerance,
        }
    }

    fn failed(name: String, tolerance: f64, message: String) -> Self {
        Self {
            name,
            passed: false,
            value: f64::NAN,
            tolerance,
            message,
        }
    }
}

/// Box radius of the validation runs; large enough that the Dirichlet wall
/// moves every level by less than 1e-8 relative.
fn validation_r_max(n: u32) -> f64 {
    let nf = f64::from(n);
    6.0 * nf * nf + 20.0
}

/// Generalized Laguerre polynomial `L_k^alpha(x)`.
fn laguerre(k: u32, alpha: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - x);
    if k == 0 {
        return prev;
    }
    for m in 1..k {
        let mf = f64::from(m);
        let next = ((2.0 * mf + 1.0 + alpha - x) * cur - (mf + alpha) * prev) / (mf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Hydrogen `U_{nl}(r) = r R_{nl}(r)`, positive near the origin.
pub fn hydrogen_u(n: u32, l: u32, r: f64) -> f64 {
    let nf = f64::from(n);
    let fact = |m: u32| (1..=m).map(f64::from).product::<f64>();
    let norm = ((2.0 / nf).powi(3) * fact(n - l - 1) / (2.0 * nf * fact(n + l))).sqrt();
    let rho = 2.0 * r / nf;
    r * norm * (-rho / 2.0).exp() * rho.powi(l as i32) * laguerre(n - l - 1, f64::from(2 * l + 1), rho)
}

/// Hydrogen suite: spectrum, node counts, sampling adequacy, origin
/// densities, action integrals and an analytic eigenfunction.
pub fn validate_hydrogen(k_max: usize) -> Vec<Check> {
    let h = PotentialParams::hydrogen();
    let states: Vec<(u32, u32)> = (1..=10u32)
        .flat_map(|n| (0..3u32.min(n)).map(move |l| (n, l)))
        .collect();
    let mut checks: Vec<Check> = states
        .par_iter()
        .flat_map_iter(|&(n, l)| {
            let st = StateLabel::upper(n, l).expect("valid label");
            let cfg = SolverConfig {
                k_max,
                r_max: Some(validation_r_max(n)),
                ..SolverConfig::default()
            };
            let mut out = Vec::new();
            let name = |what: &str| format!("{what}_n{n}_l{l}");
            let exact = UnitSystem::hydrogen_energy(n);
            match RadialGrid::new(validation_r_max(n), k_max) {
                Ok(grid) => {
                    let margin = sampling_margin(&grid, st.channel(&h), exact);
                    let mut c = Check::below(name("sampling"), 1.0 / margin, 1.0);
                    if !c.passed {
                        let needed = (k_max as f64 / margin * 1.2).ceil();
                        c.message = format!(
                            "grid under-resolved: margin {margin:.3} < 1 (half the local de Broglie wavelength); \
                             increase --kmax to at least {needed}"
                        );
                    }
                    out.push(c);
                }
                Err(e) => out.push(Check::failed(name("sampling"), 1.0, e.to_string())),
            }
            match solve_state(&st, &h, &cfg, 0.0) {
                Ok(bs) => {
                    out.push(Check::below(name("spectrum"), (bs.energy / exact - 1.0).abs(), 1e-6));
                    let expected = n - l - 1;
                    out.push(Check {
                        name: name("nodes"),
                        passed: bs.node_count == expected,
                        value: f64::from(bs.node_count),
                        tolerance: 0.0,
                        message: format!("{} nodes, expected {expected}", bs.node_count),
                    });
                }
                Err(e) => {
                    out.push(Check::failed(name("spectrum"), 1e-6, e.to_string()));
                    out.push(Check::failed(name("nodes"), 0.0, e.to_string()));
                }
            }
            out
        })
        .collect();

    let density: Vec<Check> = (5..=10u32)
        .into_par_iter()
        .map(|n| {
            let name = format!("origin_density_n{n}");
            let st = StateLabel::upper(n, 0).expect("valid label");
            let cfg = SolverConfig {
                k_max,
                r_max: Some(validation_r_max(n)),
                ..SolverConfig::default()
            };
            match solve_state(&st, &h, &cfg, 0.0) {
                Ok(bs) => {
                    let exact = fermi_segre_density(n, 0.0, 0.0, 1);
                    Check::below(name, (bs.origin_density() / exact - 1.0).abs(), 1e-4)
                }
                Err(e) => Check::failed(name, 1e-4, e.to_string()),
            }
        })
        .collect();
    checks.extend(density);

    for n in 8..=12u32 {
        let name = format!("action_n{n}");
        let st = StateLabel::upper(n, 0).expect("valid label");
        match total_action(&st, UnitSystem::hydrogen_energy(n), &h, false) {
            Ok(s) => checks.push(Check::below(name, (s / PI - f64::from(n)).abs(), 1e-10)),
            Err(e) => checks.push(Check::failed(name, 1e-10, e.to_string())),
        }
    }

    let name = "eigenfunction_n5_l0".to_owned();
    let st = StateLabel::upper(5, 0).expect("valid label");
    let cfg = SolverConfig {
        k_max,
        r_max: Some(validation_r_max(5)),
        ..SolverConfig::default()
    };
    match solve_state(&st, &h, &cfg, 0.0) {
        Ok(bs) => {
            let worst = bs
                .grid
                .nodes()
                .iter()
                .zip(&bs.u_values)
                .map(|(&r, &u)| (u - hydrogen_u(5, 0, r)).abs())
                .fold(0.0, f64::max);
            checks.push(Check::below(name, worst, 1e-6));
        }
        Err(e) => checks.push(Check::failed(name, 1e-6, e.to_string())),
    }
    checks
}

pub fn checks_table(checks: &[Check]) -> Table {
    let mut t = Table::new(vec!["check", "verdict", "value", "tolerance", "message"]);
    for c in checks {
        t.push(vec![
            c.name.clone().into(),
            if c.passed { "PASS" } else { "FAIL" }.into(),
            c.value.into(),
            c.tolerance.into(),
            c.message.clone().into(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_values() {
        assert_eq!(laguerre(0, 3.0, 0.7), 1.0);
        assert!((laguerre(2, 1.0, 0.5) - (0.5 * 0.25 - 3.0 * 0.5 + 3.0)).abs() < 1e-15);
    }

    #[test]
    fn hydrogen_u_is_normalized() {
        let g = rydberg_core::num::gauss::GaussLegendre::new(200);
        for (n, l) in [(1u32, 0u32), (3, 1), (5, 0), (6, 2)] {
            let norm = g.integrate(0.0, 40.0 * f64::from(n * n), |r| hydrogen_u(n, l, r).powi(2));
            assert!((norm - 1.0).abs() < 1e-10, "n={n} l={l}: {norm}");
        }
        assert!(hydrogen_u(2, 0, 0.1) > 0.0);
    }

    #[test]
    fn state_expansion() {
        let s = expand_states(&[3], &[0, 1, 2, 3], None).unwrap();
        let tj: Vec<(u32, u32)> = s.iter().map(|s| (s.l, s.twice_j)).collect();
        assert_eq!(tj, [(0, 1), (1, 1), (1, 3), (2, 3), (2, 5)]);
        assert!(expand_states(&[2], &[2, 3], None).is_err());
        assert!(expand_states(&[5], &[2], Some(1)).is_err());
    }
}
