//! Contact (Fermi) hyperfine constants of s-states from the origin density.

use alloc::format;
use alloc::string::String;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::IsotopeData;
use crate::quasiclassics::fermi_segre_density;

/// Vacuum permeability, `4 pi 1e-7` N/A^2.
pub const MU_0: f64 = 4.0 * PI * 1e-7;
/// Bohr magneton, J/T.
pub const BOHR_MAGNETON: f64 = 9.2740100783e-24;
/// Planck constant, J s.
pub const PLANCK: f64 = 6.62607015e-34;
/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.29177210903e-11;

/// Hyperfine data of one s-state.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperfineResult {
    pub isotope: String,
    pub n: u32,
    pub delta0: f64,
    /// `|psi(0)|^2`, a_B^-3.
    pub psi0_sq: f64,
    /// Signed `A / h`, Hz.
    pub a_over_h: f64,
}

impl HyperfineResult {
    pub fn new(isotope: &IsotopeData, n: u32, delta0: f64, psi0_sq: f64) -> Self {
        Self {
            isotope: String::from(isotope.label),
            n,
            delta0,
            psi0_sq,
            a_over_h: hyperfine_a(isotope, psi0_sq),
        }
    }

    /// Builds the result from the Fermi-Segrè density.
    pub fn from_defect(isotope: &IsotopeData, n: u32, delta0: f64, d_delta_dn: f64, z: u32) -> Self {
        Self::new(isotope, n, delta0, fermi_segre_density(n, delta0, d_delta_dn, z))
    }

    /// `|A/h| (n - delta0)^3`, GHz.
    pub fn scaled_ghz(&self) -> f64 {
        scaled_constant(self)
    }
}

/// `A/h = (2/3) mu_0 g_s g_I mu_B^2 |psi(0)|^2 / (a_B^3 h)` in Hz.
pub fn hyperfine_a(isotope: &IsotopeData, psi0_sq: f64) -> f64 {
    let a3 = BOHR_RADIUS * BOHR_RADIUS * BOHR_RADIUS;
    2.0 / 3.0 * MU_0 * isotope.g_s * isotope.g_tilde_i * BOHR_MAGNETON * BOHR_MAGNETON * psi0_sq / (a3 * PLANCK)
}

/// `|A/h| (n - delta0)^3` in GHz.
pub fn scaled_constant(result: &HyperfineResult) -> f64 {
    let nu = f64::from(result.n) - result.delta0;
    result.a_over_h.abs() * nu * nu * nu * 1e-9
}

/// Level shift `(A/h) [F(F+1) - I(I+1) - j(j+1)] / 2` in Hz. Angular
/// momenta are passed doubled so half-integers stay exact.
pub fn doublet_splitting(a_over_h: f64, twice_i: u32, twice_j: u32, twice_f: u32) -> Result<f64> {
    let lo = twice_i.abs_diff(twice_j);
    let hi = twice_i + twice_j;
    if twice_f < lo || twice_f > hi || (twice_f - lo) % 2 != 0 {
        return Err(Error::domain(format!(
            "F = {}/2 not in |I - j|..=I + j for I = {twice_i}/2, j = {twice_j}/2",
            twice_f
        )));
    }
    let c = |t: u32| {
        let x = f64::from(t) / 2.0;
        x * (x + 1.0)
    };
    Ok(0.5 * a_over_h * (c(twice_f) - c(twice_i) - c(twice_j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::find_isotope;

    #[test]
    fn rb87_scaled_constant() {
        let iso = find_isotope("87Rb").unwrap();
        let r = HyperfineResult::from_defect(iso, 15, 3.132, 0.0, 37);
        assert!((r.scaled_ghz() / 17.223 - 1.0).abs() < 1e-3, "{}", r.scaled_ghz());
        assert!(r.a_over_h < 0.0);
    }

    #[test]
    fn rb85_ratio() {
        let a = HyperfineResult::from_defect(find_isotope("85Rb").unwrap(), 22, 3.13, 0.0, 37);
        let b = HyperfineResult::from_defect(find_isotope("87Rb").unwrap(), 22, 3.13, 0.0, 37);
        assert!((a.a_over_h / b.a_over_h - 0.00029364 / 0.0009951414).abs() < 1e-12);
        assert!((a.scaled_ghz() / 5.082 - 1.0).abs() < 1e-3, "{}", a.scaled_ghz());
    }

    #[test]
    fn hydrogen_like_scaling() {
        let iso = find_isotope("87Rb").unwrap();
        let a10 = HyperfineResult::from_defect(iso, 10, 0.0, 0.0, 1).a_over_h;
        let a20 = HyperfineResult::from_defect(iso, 20, 0.0, 0.0, 1).a_over_h;
        assert!((a10 / a20 - 8.0).abs() < 1e-12);
    }

    #[test]
    fn splitting() {
        let a = 1.5e6;
        let up = doublet_splitting(a, 3, 1, 4).unwrap();
        let down = doublet_splitting(a, 3, 1, 2).unwrap();
        assert!((up - down - 2.0 * a).abs() < 1e-6);
        // centre of gravity
        assert!((5.0 * up + 3.0 * down).abs() < 1e-6);
        assert_eq!(doublet_splitting(0.0, 5, 1, 6).unwrap(), 0.0);
        assert!(doublet_splitting(a, 3, 1, 6).is_err());
        assert!(doublet_splitting(a, 3, 1, 3).is_err());
    }
}
