//! Model potential, Q-functions and the classical-region geometry.
//!
//! The effective single-electron potential (Rydberg units) is
//!
//! ```text
//! V_eff(r) = -2 Z_eff(r) / r - alpha_c (1 - exp(-(r/r_c)^6)) / r^4
//! Z_eff(r) = 1 + (Z - 1) exp(-a1 r) - r exp(-a2 r) (a3 s3 + a4 r)
//! ```
//!
//! and for `l = 1, 2, 3` a Pauli spin-orbit term is added beyond `r_so`.

use alloc::format;
use alloc::vec::Vec;

use libm::{exp, expm1, log, pow};

use crate::error::{Error, Result};
use crate::num::roots::bisect;
use crate::params::{ChannelParams, PotentialParams};
use crate::units::FINE_STRUCTURE;

/// Quantum numbers `(n, l, j)`; `j` is stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateLabel {
    pub n: u32,
    pub l: u32,
    pub twice_j: u32,
}

impl StateLabel {
    pub fn new(n: u32, l: u32, twice_j: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("n must be at least 1"));
        }
        if l >= n {
            return Err(Error::domain(format!("l = {l} requires n > l, got n = {n}")));
        }
        if twice_j.abs_diff(2 * l) != 1 {
            return Err(Error::domain(format!("j = {twice_j}/2 is not l +- 1/2 for l = {l}")));
        }
        Ok(Self { n, l, twice_j })
    }

    /// `j = l + 1/2`.
    pub fn upper(n: u32, l: u32) -> Result<Self> {
        Self::new(n, l, 2 * l + 1)
    }

    /// `j = l - 1/2`; for `l = 0` this is the same as [`StateLabel::upper`].
    pub fn lower(n: u32, l: u32) -> Result<Self> {
        if l == 0 {
            Self::upper(n, 0)
        } else {
            Self::new(n, l, 2 * l - 1)
        }
    }

    pub fn j(&self) -> f64 {
        f64::from(self.twice_j) / 2.0
    }

    pub fn channel<'a>(&self, params: &'a PotentialParams) -> Channel<'a> {
        Channel::new(params, self.l, self.twice_j)
    }
}

impl core::fmt::Display for StateLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "n={} l={} j={}/2", self.n, self.l, self.twice_j)
    }
}

/// Potential of one `(l, j)` channel. Cheap to construct; borrows the parameters.
#[derive(Debug, Clone, Copy)]
pub struct Channel<'a> {
    params: &'a PotentialParams,
    coeffs: &'a ChannelParams,
    l: u32,
    twice_j: u32,
}

impl<'a> Channel<'a> {
    pub fn new(params: &'a PotentialParams, l: u32, twice_j: u32) -> Self {
        Self {
            params,
            coeffs: params.channel(l),
            l,
            twice_j,
        }
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn params(&self) -> &'a PotentialParams {
        self.params
    }

    /// `Z_eff` and its first two radial derivatives.
    pub fn effective_charge_derivs(&self, r: f64) -> [f64; 3] {
        let c = self.coeffs;
        let zm1 = f64::from(self.params.z) - 1.0;
        let a3 = c.a3 * c.a3_scale;
        let e1 = exp(-c.a1 * r);
        let e2 = exp(-c.a2 * r);
        let h = a3 * r + c.a4 * r * r;
        let dh = a3 + 2.0 * c.a4 * r;
        let d2h = 2.0 * c.a4;
        let z = 1.0 + zm1 * e1 - e2 * h;
        let dz = -zm1 * c.a1 * e1 - e2 * (dh - c.a2 * h);
        let d2z = zm1 * c.a1 * c.a1 * e1 - e2 * (d2h - 2.0 * c.a2 * dh + c.a2 * c.a2 * h);
        [z, dz, d2z]
    }

    pub fn effective_charge(&self, r: f64) -> f64 {
        self.effective_charge_derivs(r)[0]
    }

    /// `V_eff` with first and second derivatives. Requires `r > 0`.
    pub fn effective_derivs(&self, r: f64) -> [f64; 3] {
        let [z, dz, d2z] = self.effective_charge_derivs(r);
        let inv = 1.0 / r;
        let coul = -2.0 * z * inv;
        let dcoul = -2.0 * (dz * inv - z * inv * inv);
        let d2coul = -2.0 * (d2z * inv - 2.0 * dz * inv * inv + 2.0 * z * inv * inv * inv);

        let alpha = self.params.alpha_c;
        if alpha == 0.0 {
            return [coul, dcoul, d2coul];
        }
        let x = pow(r / self.coeffs.r_c, 6.0);
        let ex = exp(-x);
        let f = -expm1(-x);
        let df = ex * 6.0 * x * inv;
        let d2f = ex * x * (30.0 - 36.0 * x) * inv * inv;
        let inv4 = inv * inv * inv * inv;
        let pol = -alpha * f * inv4;
        let dpol = -alpha * (df * inv4 - 4.0 * f * inv4 * inv);
        let d2pol = -alpha * (d2f * inv4 - 8.0 * df * inv4 * inv + 20.0 * f * inv4 * inv * inv);
        [coul + pol, dcoul + dpol, d2coul + d2pol]
    }

    pub fn effective(&self, r: f64) -> f64 {
        self.effective_derivs(r)[0]
    }

    /// `[j(j+1) - l(l+1) - 3/4] / 2`.
    pub fn spin_orbit_factor(&self) -> f64 {
        let j = f64::from(self.twice_j) / 2.0;
        let l = f64::from(self.l);
        0.5 * (j * (j + 1.0) - l * (l + 1.0) - 0.75)
    }

    fn spin_orbit_active(&self, r: f64) -> bool {
        (1..=3).contains(&self.l) && r > self.coeffs.r_so
    }

    fn spin_orbit_prefactor(&self) -> f64 {
        self.params.spin_orbit_scale * 0.5 * FINE_STRUCTURE * FINE_STRUCTURE * self.spin_orbit_factor()
    }

    /// `V_SO` and its derivative, ignoring the cutoff.
    fn spin_orbit_terms(&self, r: f64, veff: &[f64; 3]) -> [f64; 2] {
        let k = self.spin_orbit_prefactor();
        [k * veff[1] / r, k * (veff[2] / r - veff[1] / (r * r))]
    }

    /// Spin-orbit-modified potential and its radial derivative.
    pub fn modified_derivs(&self, r: f64) -> [f64; 2] {
        let v = self.effective_derivs(r);
        if self.spin_orbit_active(r) {
            let so = self.spin_orbit_terms(r, &v);
            [v[0] + so[0], v[1] + so[1]]
        } else {
            [v[0], v[1]]
        }
    }

    pub fn modified(&self, r: f64) -> f64 {
        self.modified_derivs(r)[0]
    }

    /// Size of the discontinuity of `V_mod` at `r_so` (zero when no spin-orbit term applies).
    pub fn spin_orbit_jump(&self) -> f64 {
        let r = self.coeffs.r_so;
        if !(1..=3).contains(&self.l) || r <= 0.0 {
            return 0.0;
        }
        let v = self.effective_derivs(r);
        self.spin_orbit_terms(r, &v)[0]
    }

    /// Centrifugal numerator: `l(l+1)`, or `(l+1/2)^2` with the Langer correction.
    pub fn centrifugal(&self, langer: bool) -> f64 {
        let l = f64::from(self.l);
        if langer {
            (l + 0.5) * (l + 0.5)
        } else {
            l * (l + 1.0)
        }
    }

    /// `Q(r) = L/r^2 + V_mod(r) - E`.
    pub fn q(&self, r: f64, energy: f64, langer: bool) -> f64 {
        self.centrifugal(langer) / (r * r) + self.modified(r) - energy
    }

    /// `Q` and `dQ/dr`.
    pub fn q_derivs(&self, r: f64, energy: f64, langer: bool) -> [f64; 2] {
        let lc = self.centrifugal(langer);
        let [v, dv] = self.modified_derivs(r);
        let r2 = r * r;
        [lc / r2 + v - energy, -2.0 * lc / (r2 * r) + dv]
    }

    /// Turning points and the optional inner classical region.
    pub fn turning_points(&self, energy: f64, langer: bool) -> Result<TurningPointReport> {
        if !(energy.is_finite() && energy < 0.0) {
            return Err(Error::domain(format!("turning points need E < 0, got {energy}")));
        }
        let q = |r: f64| self.q(r, energy, langer);

        let mut r_hi = 4.0 / -energy + 10.0;
        while q(r_hi) <= 0.0 {
            r_hi *= 2.0;
        }
        let outer = classical_intervals(&q, SCAN_R_MIN, r_hi, SCAN_POINTS)
            .last()
            .copied()
            .ok_or(Error::NoBoundRegion { energy })?;
        let (lo, r_plus) = outer;
        let r_minus = lo.unwrap_or(0.0);

        let second_region = if r_minus > SECOND_REGION_R_MIN {
            self.second_region(energy, langer, r_minus)
        } else {
            None
        };

        Ok(TurningPointReport {
            r_minus,
            r_plus,
            second_region,
        })
    }

    fn second_region(&self, energy: f64, langer: bool, r_minus: f64) -> Option<SecondRegion> {
        let q = |r: f64| self.q(r, energy, langer);
        // stop just short of r_minus so the outer region is not picked up again
        let top = r_minus * (1.0 - 1e-9);
        let (lo, r_b) = classical_intervals(&q, SECOND_REGION_R_MIN, top, SECOND_REGION_POINTS)
            .first()
            .copied()?;
        let r_a = lo.unwrap_or(SECOND_REGION_R_MIN);
        if r_b >= top {
            return None;
        }
        let mid = 0.5 * (r_a + r_b);
        Some(SecondRegion {
            r_a,
            r_b,
            q_mid: q(mid),
            q_mid_alt: self.q(mid, energy / 10.0, langer),
        })
    }
}

const SCAN_R_MIN: f64 = 1e-6;
const SCAN_POINTS: usize = 4000;
const SECOND_REGION_R_MIN: f64 = 1e-4;
const SECOND_REGION_POINTS: usize = 2000;
const ROOT_REL_TOL: f64 = 1e-13;

/// Intervals with `q < 0` found on a log-spaced scan of `[a, b]`.
///
/// Each entry is `(lower, upper)`; `lower` is `None` when `q < 0` already at `a`.
fn classical_intervals<F: Fn(f64) -> f64>(q: &F, a: f64, b: f64, points: usize) -> Vec<(Option<f64>, f64)> {
    let mut out = Vec::new();
    let step = log(b / a) / (points - 1) as f64;
    let mut prev_r = a;
    let mut prev_q = q(a);
    let mut open: Option<Option<f64>> = if prev_q < 0.0 { Some(None) } else { None };
    for i in 1..points {
        let r = if i == points - 1 { b } else { a * exp(step * i as f64) };
        let qr = q(r);
        if (prev_q < 0.0) != (qr < 0.0) {
            let root = bisect(q, prev_r, r, ROOT_REL_TOL);
            if qr < 0.0 {
                open = Some(Some(root));
            } else if let Some(lo) = open.take() {
                out.push((lo, root));
            }
        }
        prev_r = r;
        prev_q = qr;
    }
    out
}

/// Inner classical region `(r_a, r_b)` separated from the outer one by a barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondRegion {
    pub r_a: f64,
    pub r_b: f64,
    /// `Q` at the midpoint for the requested energy.
    pub q_mid: f64,
    /// `Q` at the midpoint for a tenfold smaller binding energy.
    pub q_mid_alt: f64,
}

impl SecondRegion {
    /// Relative change of the midpoint `Q` between the two probe energies.
    pub fn energy_sensitivity(&self) -> f64 {
        ((self.q_mid_alt - self.q_mid) / self.q_mid).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPointReport {
    /// Inner turning point (0 when the classical region reaches the origin).
    pub r_minus: f64,
    pub r_plus: f64,
    pub second_region: Option<SecondRegion>,
}

pub fn effective_charge(r: f64, l: u32, params: &PotentialParams) -> f64 {
    Channel::new(params, l, 2 * l + 1).effective_charge(r)
}

pub fn eval_effective(r: f64, l: u32, params: &PotentialParams) -> Result<f64> {
    check_radius(r)?;
    Ok(Channel::new(params, l, 2 * l + 1).effective(r))
}

pub fn eval_modified(r: f64, state: &StateLabel, params: &PotentialParams) -> Result<f64> {
    check_radius(r)?;
    Ok(state.channel(params).modified(r))
}

pub fn q_function(r: f64, state: &StateLabel, energy: f64, langer: bool, params: &PotentialParams) -> Result<f64> {
    check_radius(r)?;
    Ok(state.channel(params).q(r, energy, langer))
}

pub fn find_turning_points(
    state: &StateLabel,
    energy: f64,
    params: &PotentialParams,
    langer: bool,
) -> Result<TurningPointReport> {
    state.channel(params).turning_points(energy, langer)
}

/// Inner classical region of the plain `Q`, if any. Always absent for `l = 0`.
pub fn detect_second_region(state: &StateLabel, energy: f64, params: &PotentialParams) -> Result<Option<SecondRegion>> {
    if state.l == 0 {
        return Ok(None);
    }
    Ok(find_turning_points(state, energy, params, false)?.second_region)
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("radius must be positive, got {r}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn toy() -> PotentialParams {
        let mut p = PotentialParams::hydrogen();
        p.element_symbol = "X".into();
        p.z = 11;
        p.alpha_c = 1.0;
        p.spin_orbit_scale = 1.0;
        p.channels = vec![
            ChannelParams {
                a1: 2.0,
                a2: 1.5,
                a3: -3.0,
                a4: 0.3,
                r_c: 1.2,
                r_so: 0.0,
                a3_scale: 1.0,
            };
            5
        ];
        p.channels[1].r_so = 0.05;
        p
    }

    #[test]
    fn hydrogen_values() {
        let h = PotentialParams::hydrogen();
        assert_eq!(effective_charge(3.7, 2, &h), 1.0);
        assert_eq!(eval_effective(2.0, 0, &h).unwrap(), -1.0);
        assert!(eval_effective(0.0, 0, &h).is_err());
    }

    #[test]
    fn charge_limits() {
        let p = toy();
        assert_eq!(effective_charge(0.0, 0, &p), 11.0);
        assert!((effective_charge(1e3, 0, &p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = toy();
        let ch = Channel::new(&p, 1, 3);
        for &r in &[0.03, 0.2, 0.9, 1.3, 4.0, 20.0] {
            let h = 1e-5 * r;
            let [_, d, d2] = ch.effective_derivs(r);
            let fd = (ch.effective(r + h) - ch.effective(r - h)) / (2.0 * h);
            assert!((d - fd).abs() <= 1e-6 * d.abs().max(1.0), "r={r}: {d} vs {fd}");
            let [_, dp, _] = ch.effective_derivs(r + h);
            let [_, dm, _] = ch.effective_derivs(r - h);
            let fd2 = (dp - dm) / (2.0 * h);
            assert!((d2 - fd2).abs() <= 1e-6 * d2.abs().max(1.0), "r={r}: {d2} vs {fd2}");
            let [_, dmod] = ch.modified_derivs(r);
            let fdm = (ch.modified(r + h) - ch.modified(r - h)) / (2.0 * h);
            assert!((dmod - fdm).abs() <= 1e-6 * dmod.abs().max(1.0));
        }
    }

    #[test]
    fn spin_orbit_factor_values() {
        let p = toy();
        assert_eq!(Channel::new(&p, 1, 3).spin_orbit_factor(), 0.5);
        assert_eq!(Channel::new(&p, 1, 1).spin_orbit_factor(), -1.0);
        assert_eq!(Channel::new(&p, 0, 1).spin_orbit_factor(), 0.0);
    }

    #[test]
    fn spin_orbit_switched_by_cutoff() {
        let p = toy();
        let ch = Channel::new(&p, 1, 3);
        assert_eq!(ch.modified(0.02), ch.effective(0.02));
        assert_ne!(ch.modified(1.0), ch.effective(1.0));
        let s = Channel::new(&p, 0, 1);
        assert_eq!(s.modified(1.0), s.effective(1.0));
        let g = Channel::new(&p, 4, 9);
        assert_eq!(g.modified(1.0), g.effective(1.0));
        assert!(ch.spin_orbit_jump() != 0.0);
        assert_eq!(s.spin_orbit_jump(), 0.0);
    }

    #[test]
    fn coulomb_langer_roots_closed_form() {
        let h = PotentialParams::hydrogen();
        for l in 1..4u32 {
            let st = StateLabel::upper(10, l).unwrap();
            let e = -0.01;
            let tp = find_turning_points(&st, e, &h, true).unwrap();
            let lam = (f64::from(l) + 0.5) * (f64::from(l) + 0.5);
            let disc = libm::sqrt(1.0 + lam * e);
            let rm = (1.0 - disc) / -e;
            let rp = (1.0 + disc) / -e;
            assert!(((tp.r_minus - rm) / rm).abs() < 1e-10);
            assert!(((tp.r_plus - rp) / rp).abs() < 1e-10);
            assert!(tp.second_region.is_none());
        }
    }

    #[test]
    fn s_state_reaches_origin() {
        let h = PotentialParams::hydrogen();
        let st = StateLabel::upper(12, 0).unwrap();
        let tp = find_turning_points(&st, -1.0 / 144.0, &h, false).unwrap();
        assert_eq!(tp.r_minus, 0.0);
        assert!((tp.r_plus - 288.0).abs() < 1e-9);
    }

    #[test]
    fn label_validation() {
        assert!(StateLabel::new(3, 3, 7).is_err());
        assert!(StateLabel::new(3, 1, 5).is_err());
        assert!(StateLabel::new(3, 0, 1).is_ok());
        assert_eq!(StateLabel::lower(5, 0).unwrap().twice_j, 1);
    }
}
