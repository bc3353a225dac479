//! Unit conventions and pinned physical constants.
//!
//! Lengths are measured in Bohr radii `a_B`, energies in Rydberg units
//! (`E_n = -1/n^2` for hydrogen) and densities per `a_B^3`. In these units
//! the radial equation reads `-U'' + [l(l+1)/r^2 + V(r)] U = E U` and the
//! hydrogen potential is `V(r) = -2/r`.

/// Fine-structure constant (CODATA 2018).
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

/// One Rydberg expressed as a frequency, `R_inf c`, in Hz (CODATA 2018).
pub const RYDBERG_HZ: f64 = 3.289_841_960_250_8e15;

/// One Rydberg in GHz.
pub const RYDBERG_GHZ: f64 = RYDBERG_HZ * 1e-9;

/// Marker for the fixed unit convention used throughout the crate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UnitSystem;

impl UnitSystem {
    pub const LENGTH: &'static str = "a_B";
    pub const ENERGY: &'static str = "Ry";
    pub const DENSITY: &'static str = "a_B^-3";

    /// Hydrogen level `n` in these units.
    pub fn hydrogen_energy(n: u32) -> f64 {
        let n = f64::from(n);
        -1.0 / (n * n)
    }

    pub fn rydberg_to_ghz(energy: f64) -> f64 {
        energy * RYDBERG_GHZ
    }
}
