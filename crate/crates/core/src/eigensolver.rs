//! Collocation Hamiltonian, shift-invert eigen-extraction and bound-state
//! post-processing (normalization, node count, physicality, sampling).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::sqrt;
use nalgebra::{DMatrix, DVector};

use crate::chebyshev::RadialGrid;
use crate::error::{Error, Result};
use crate::params::PotentialParams;
use crate::potential::{Channel, StateLabel};

/// Controls for the collocation solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub k_max: usize,
    /// `r_max = r_max_factor * r_plus` unless `r_max` is given.
    pub r_max_factor: f64,
    /// Explicit outer radius overriding `r_max_factor`.
    pub r_max: Option<f64>,
    /// Energy window (Ry) for [`solve_window`].
    pub energy_window: (f64, f64),
    /// Noise floor of the tail test, relative to `max |U|`.
    pub tail_tol: f64,
    /// Tail nodes are those beyond `tail_start * r_plus`.
    pub tail_start: f64,
    /// Maximum number of eigenpairs returned by [`solve_window`] (0 for all).
    pub target_count: usize,
    pub max_iterations: usize,
    /// Bound on `||(H - E) v|| / ||v||`.
    pub residual_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            k_max: 700,
            r_max_factor: 1.5,
            r_max: None,
            energy_window: (-1.0, 0.0),
            tail_tol: 1e-6,
            tail_start: 1.2,
            target_count: 0,
            max_iterations: 500,
            residual_tol: 1e-8,
        }
    }
}

impl SolverConfig {
    /// Default configuration with `k_max` scaled linearly from 700 at `n = 15`.
    pub fn for_principal(n: u32) -> Self {
        let k = libm::round(700.0 * f64::from(n) / 15.0) as usize;
        Self {
            k_max: k.max(200),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max < 4 {
            return Err(Error::schema("k_max", "must be at least 4"));
        }
        if !(self.r_max_factor > 1.0 && self.r_max_factor <= 3.0) {
            return Err(Error::schema("r_max_factor", "must lie in (1, 3]"));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1e-2) {
            return Err(Error::schema("tail_tol", "must lie in (0, 1e-2)"));
        }
        if let Some(r) = self.r_max {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::schema("r_max", "must be positive"));
            }
        }
        let (lo, hi) = self.energy_window;
        if !(lo < hi) {
            return Err(Error::schema("energy_window", "lower bound must be below upper"));
        }
        Ok(())
    }
}

/// `(K-1) x (K-1)` Dirichlet-stripped collocation matrix of
/// `-d^2/dr^2 + l(l+1)/r^2 + V_mod(r)`.
pub fn assemble(grid: &RadialGrid, state: &StateLabel, params: &PotentialParams) -> Result<DMatrix<f64>> {
    assemble_with_d2(grid, &grid.second_diff_matrix(), state.channel(params))
}

fn assemble_with_d2(grid: &RadialGrid, d2: &DMatrix<f64>, channel: Channel<'_>) -> Result<DMatrix<f64>> {
    let k = grid.k_max();
    let m = k - 1;
    let nodes = grid.nodes();
    let cent = channel.centrifugal(false);
    let mut h = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            h[(i, j)] = -d2[(i + 1, j + 1)];
        }
        let r = nodes[i + 1];
        let diag = cent / (r * r) + channel.modified(r);
        if !diag.is_finite() {
            return Err(Error::domain(format!("potential not finite at node r = {r}")));
        }
        h[(i, i)] += diag;
    }
    Ok(h)
}

/// Eigenvalue with its right eigenvector on the interior nodes.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub energy: f64,
    pub vector: DVector<f64>,
    /// `||(H - E) v|| / ||v||`.
    pub residual: f64,
    pub iterations: usize,
}

/// Shifted inverse iteration with one LU factorization of `H - shift`.
pub fn inverse_iteration(h: &DMatrix<f64>, shift: f64, max_iter: usize, tol: f64) -> Result<Eigenpair> {
    let n = h.nrows();
    let mut a = h.clone();
    for i in 0..n {
        a[(i, i)] -= shift;
    }
    let lu = a.lu();
    // deterministic, non-special start vector
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut v = DVector::from_fn(n, |_, _| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    });
    v /= v.norm();
    let mut best: Option<Eigenpair> = None;
    for it in 1..=max_iter {
        let Some(mut w) = lu.solve(&v) else {
            return Err(Error::Convergence {
                what: String::from("inverse iteration (singular shift)"),
                iterations: it,
                best_residual: f64::INFINITY,
            });
        };
        let norm = w.norm();
        if !(norm.is_finite() && norm > 0.0) {
            break;
        }
        w /= norm;
        let hw = h * &w;
        let energy = w.dot(&hw);
        let residual = (hw - &w * energy).norm();
        let better = best.as_ref().is_none_or(|b| residual < b.residual);
        if better {
            best = Some(Eigenpair {
                energy,
                vector: w.clone(),
                residual,
                iterations: it,
            });
        }
        if residual < tol {
            return Ok(best.unwrap());
        }
        v = w;
    }
    Err(Error::Convergence {
        what: format!("inverse iteration at shift {shift}"),
        iterations: max_iter,
        best_residual: best.map_or(f64::INFINITY, |b| b.residual),
    })
}

/// All eigenpairs with real energy inside `config.energy_window`, ascending.
///
/// Eigenvalue locations come from a dense real Schur decomposition; each one
/// is then refined (and its eigenvector obtained) by inverse iteration.
pub fn solve_window(h: &DMatrix<f64>, config: &SolverConfig) -> Result<Vec<Eigenpair>> {
    let (lo, hi) = config.energy_window;
    let mut located: Vec<f64> = h
        .clone()
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.re > lo && z.re < hi && z.im.abs() <= 1e-9 * z.re.abs().max(1e-3))
        .map(|z| z.re)
        .collect();
    located.sort_by(f64::total_cmp);
    if config.target_count > 0 {
        located.truncate(config.target_count);
    }
    let mut out = Vec::with_capacity(located.len());
    for e in located {
        // step off the eigenvalue so the factorization stays regular
        let shift = e + 1e-10 * e.abs().max(1e-6);
        let pair = inverse_iteration(h, shift, config.max_iterations, config.residual_tol)?;
        out.push(pair);
    }
    out.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(out)
}

/// `-1 < E < 0`, with room for rounding at the hydrogen ground state `E = -1`.
fn in_bound_window(energy: f64) -> bool {
    energy > -1.0 - 1e-9 && energy < 0.0
}

/// `Δ = n - 1/sqrt(-E)`.
pub fn extract_defect(energy: f64, n: u32) -> f64 {
    f64::from(n) - 1.0 / sqrt(-energy)
}

/// Decay test for a candidate eigenvector (full nodal values incl. endpoints).
///
/// The tail consists of nodes beyond `1.2 r_plus` (configurable through
/// [`tail_verdict`]). A state passes when, ignoring values below
/// `tau * max|U|`, its tail has no sign change and `|U|` does not increase
/// outward by more than `tau * max|U|` between neighbouring nodes.
pub fn physicality_filter(u: &[f64], grid: &RadialGrid, r_plus: f64, tau: f64) -> Result<bool> {
    tail_verdict(u, grid, r_plus, tau, 1.2)
}

pub fn tail_verdict(u: &[f64], grid: &RadialGrid, r_plus: f64, tau: f64, tail_start: f64) -> Result<bool> {
    let start = tail_start * r_plus;
    if grid.r_max() <= start {
        return Err(Error::InsufficientDomain {
            r_max: grid.r_max(),
            tail_start: start,
        });
    }
    let max = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return Ok(false);
    }
    let floor = tau * max;
    let mut prev: Option<f64> = None;
    let mut sign = 0.0;
    for (&r, &x) in grid.nodes().iter().zip(u) {
        if r <= start {
            continue;
        }
        if x.abs() > floor {
            if sign != 0.0 && x.signum() != sign {
                return Ok(false);
            }
            sign = x.signum();
        }
        if let Some(p) = prev {
            if x.abs() > p + floor {
                return Ok(false);
            }
        } else if x.abs() >= max {
            return Ok(false);
        }
        prev = Some(x.abs());
    }
    Ok(true)
}

/// Sign changes of `U` on nodes below `r_plus`, skipping values below
/// `1e-12 max|U|`.
pub fn count_nodes(u: &[f64], nodes: &[f64], r_plus: f64) -> u32 {
    let max = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = 1e-12 * max;
    let mut sign = 0.0;
    let mut count = 0;
    for (&r, &x) in nodes.iter().zip(u) {
        if r <= 0.0 || r >= r_plus {
            continue;
        }
        if x.abs() > floor {
            if sign != 0.0 && x.signum() != sign {
                count += 1;
            }
            sign = x.signum();
        }
    }
    count
}

/// Local sampling margin `min lambda(r) / (2 h)` over grid intervals whose
/// midpoint is classically allowed, with `lambda = 2 pi / sqrt(-Q)`.
/// A margin of at least 1 means every interval is shorter than half the
/// local de Broglie wavelength.
pub fn sampling_margin(grid: &RadialGrid, channel: Channel<'_>, energy: f64) -> f64 {
    let mut margin = f64::INFINITY;
    for w in grid.nodes().windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let q = channel.q(mid, energy, false);
        if q < 0.0 {
            let lambda = 2.0 * PI / sqrt(-q);
            margin = margin.min(lambda / (2.0 * (b - a)));
        }
    }
    margin
}

/// A normalized bound state of the collocation problem.
#[derive(Debug, Clone)]
pub struct BoundState {
    pub label: StateLabel,
    pub energy: f64,
    pub quantum_defect: f64,
    pub grid: RadialGrid,
    /// `U(r_k) = r_k R(r_k)` at every node, endpoints included, `\int U^2 = 1`.
    pub u_values: Vec<f64>,
    pub node_count: u32,
    /// Outer turning point of the plain `Q` at `energy`.
    pub r_plus: f64,
    pub residual: f64,
    pub sampling_margin: f64,
    pub iterations: usize,
}

impl BoundState {
    /// `U'(0)` from the first row of the collocation derivative.
    pub fn origin_slope(&self) -> f64 {
        let nodes = self.grid.nodes();
        let w = self.grid.bary_weights();
        let mut s = 0.0;
        for j in 1..nodes.len() {
            s += (w[j] / w[0]) / (nodes[0] - nodes[j]) * self.u_values[j];
        }
        // diagonal entry times U(0) vanishes
        s
    }

    /// `|psi(0)|^2 = U'(0)^2 / (4 pi)` (meaningful for `l = 0`).
    pub fn origin_density(&self) -> f64 {
        let d = self.origin_slope();
        d * d / (4.0 * PI)
    }

    /// Barycentric interpolation of `U` at `r`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        self.grid.interpolate(&self.u_values, r)
    }

    /// `\int U^2 dr` by Clenshaw-Curtis.
    pub fn norm_squared(&self) -> f64 {
        let sq: Vec<f64> = self.u_values.iter().map(|u| u * u).collect();
        self.grid.integrate(&sq)
    }
}

/// Extends an interior eigenvector by the Dirichlet zeros, normalizes
/// `\int U^2 = 1` and fixes the sign to be positive on the first antinode.
pub fn normalize_eigenvector(grid: &RadialGrid, interior: &DVector<f64>) -> Vec<f64> {
    let mut u = Vec::with_capacity(interior.len() + 2);
    u.push(0.0);
    u.extend(interior.iter().copied());
    u.push(0.0);
    let sq: Vec<f64> = u.iter().map(|x| x * x).collect();
    let norm = sqrt(grid.integrate(&sq));
    let max = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let first = u.iter().copied().find(|x| x.abs() > 1e-6 * max).unwrap_or(1.0);
    let scale = if first < 0.0 { -1.0 / norm } else { 1.0 / norm };
    for x in &mut u {
        *x *= scale;
    }
    u
}

/// Solves for one bound state `state` starting from the defect guess `delta_guess`.
///
/// The grid extends to `r_max_factor * r_plus(E_guess)`. The principal quantum
/// number of the converged eigenvector is read off its node count; on a
/// mismatch the shift is moved by the missing number of levels and the
/// iteration repeated. After a few failed attempts a dense scan around the
/// guess picks the eigenvector with the right node count.
pub fn solve_state(
    state: &StateLabel,
    params: &PotentialParams,
    config: &SolverConfig,
    delta_guess: f64,
) -> Result<BoundState> {
    config.validate()?;
    let n = state.n;
    let nu_guess = f64::from(n) - delta_guess;
    if !(nu_guess >= 1.0) {
        return Err(Error::domain(format!(
            "defect guess {delta_guess} leaves no bound state for n = {n}"
        )));
    }
    // the hydrogen ground state sits at E = -1, just outside the open window
    let e_guess = (-1.0 / (nu_guess * nu_guess)).max(-1.0 + 1e-9);
    let channel = state.channel(params);
    let tp = channel.turning_points(e_guess, false)?;
    let r_max = config.r_max.unwrap_or(config.r_max_factor * tp.r_plus);
    let grid = RadialGrid::new(r_max, config.k_max)?;
    let h = assemble_with_d2(&grid, &grid.second_diff_matrix(), channel)?;

    let mut shift = e_guess;
    let mut last_err: Option<Error> = None;
    for _ in 0..6 {
        match inverse_iteration(&h, shift, config.max_iterations, config.residual_tol) {
            Ok(pair) => {
                if !in_bound_window(pair.energy) {
                    last_err = Some(Error::StateNotFound {
                        n,
                        l: state.l,
                        reason: format!("shift {shift} converged to E = {}", pair.energy),
                    });
                    break;
                }
                let bs = finish(state, channel, &grid, &pair)?;
                let n_found = bs.node_count + state.l + 1;
                if n_found == n {
                    return accept(bs, config);
                }
                let nu_found = 1.0 / sqrt(-pair.energy);
                let nu_next = nu_found + f64::from(n) - f64::from(n_found);
                if nu_next <= 1.0 {
                    break;
                }
                shift = -1.0 / (nu_next * nu_next);
            }
            Err(e) => {
                last_err = Some(e);
                break;
            }
        }
    }

    // dense fallback: bracket the neighbouring levels around the guess
    let nu_lo = (nu_guess - 1.5).max(1.0 + 1e-10);
    let nu_hi = nu_guess + 1.5;
    let window_cfg = SolverConfig {
        energy_window: (-1.0 / (nu_lo * nu_lo), -1.0 / (nu_hi * nu_hi)),
        target_count: 0,
        ..config.clone()
    };
    let pairs = match solve_window(&h, &window_cfg) {
        Ok(p) => p,
        Err(e) => return Err(last_err.unwrap_or(e)),
    };
    for pair in &pairs {
        let bs = finish(state, channel, &grid, pair)?;
        if bs.node_count + state.l + 1 == n {
            return accept(bs, config);
        }
    }
    Err(last_err.unwrap_or(Error::StateNotFound {
        n,
        l: state.l,
        reason: format!(
            "no eigenvector with {} nodes among {} candidates near E = {e_guess}",
            n - state.l - 1,
            pairs.len()
        ),
    }))
}

/// Physical bound states among the window eigenpairs on `grid`.
///
/// Pairs outside `(-1, 0)`, or whose tail test fails or cannot be made
/// because `r_max` does not reach the tail, are dropped.
pub fn window_states(
    grid: &RadialGrid,
    state: &StateLabel,
    params: &PotentialParams,
    config: &SolverConfig,
) -> Result<Vec<BoundState>> {
    config.validate()?;
    let channel = state.channel(params);
    let h = assemble_with_d2(grid, &grid.second_diff_matrix(), channel)?;
    let mut out = Vec::new();
    for pair in solve_window(&h, config)? {
        if !in_bound_window(pair.energy) {
            continue;
        }
        let bs = finish(state, channel, grid, &pair)?;
        if let Ok(true) = tail_verdict(&bs.u_values, grid, bs.r_plus, config.tail_tol, config.tail_start) {
            out.push(bs);
        }
    }
    Ok(out)
}

fn finish(state: &StateLabel, channel: Channel<'_>, grid: &RadialGrid, pair: &Eigenpair) -> Result<BoundState> {
    let u = normalize_eigenvector(grid, &pair.vector);
    let tp = channel.turning_points(pair.energy, false)?;
    let node_count = count_nodes(&u, grid.nodes(), tp.r_plus);
    let n_found = node_count + state.l + 1;
    let label = StateLabel { n: n_found, ..*state };
    Ok(BoundState {
        label,
        energy: pair.energy,
        quantum_defect: extract_defect(pair.energy, n_found),
        grid: grid.clone(),
        u_values: u,
        node_count,
        r_plus: tp.r_plus,
        residual: pair.residual,
        sampling_margin: sampling_margin(grid, channel, pair.energy),
        iterations: pair.iterations,
    })
}

fn accept(bs: BoundState, config: &SolverConfig) -> Result<BoundState> {
    if tail_verdict(&bs.u_values, &bs.grid, bs.r_plus, config.tail_tol, config.tail_start)? {
        Ok(bs)
    } else {
        Err(Error::StateNotFound {
            n: bs.label.n,
            l: bs.label.l,
            reason: String::from("eigenvector does not decay beyond the outer turning point"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::exp;

    #[test]
    fn defect_inversion() {
        let e = -1.0 / ((15.0 - 3.132) * (15.0 - 3.132));
        assert!((extract_defect(e, 15) - 3.132).abs() < 1e-12);
        assert!(extract_defect(-1.0 / 49.0, 7).abs() < 1e-14);
    }

    #[test]
    fn hydrogen_ground_state_residual() {
        let grid = RadialGrid::new(40.0, 400).unwrap();
        let st = StateLabel::upper(1, 0).unwrap();
        let h = assemble(&grid, &st, &PotentialParams::hydrogen()).unwrap();
        assert_eq!(h.nrows(), 399);
        let u = DVector::from_fn(399, |i, _| {
            let r = grid.nodes()[i + 1];
            r * exp(-r)
        });
        let res = &h * &u + &u;
        assert!(res.amax() < 1e-6, "{}", res.amax());
    }

    #[test]
    fn assembly_is_deterministic() {
        let grid = RadialGrid::new(30.0, 40).unwrap();
        let st = StateLabel::upper(3, 1).unwrap();
        let p = PotentialParams::hydrogen();
        assert_eq!(assemble(&grid, &st, &p).unwrap(), assemble(&grid, &st, &p).unwrap());
    }

    #[test]
    fn config_ranges() {
        let mut c = SolverConfig::default();
        c.validate().unwrap();
        c.r_max_factor = 3.5;
        assert!(c.validate().is_err());
        c.r_max_factor = 1.5;
        c.tail_tol = 0.1;
        assert!(c.validate().is_err());
        assert_eq!(SolverConfig::for_principal(30).k_max, 1400);
    }
}
