//! Parameter records: the per-element model potential and the isotope table.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Model-potential coefficients for one orbital angular momentum channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    /// Polarization cutoff radius, a_B.
    pub r_c: f64,
    /// Spin-orbit cutoff radius, a_B. Zero for `l = 0` and `l >= 4`.
    pub r_so: f64,
    /// Multiplier applied to `a3`.
    pub a3_scale: f64,
}

impl ChannelParams {
    /// Pure Coulomb channel: every screening coefficient zero.
    pub fn coulomb() -> Self {
        Self {
            a1: 0.0,
            a2: 0.0,
            a3: 0.0,
            a4: 0.0,
            r_c: 1.0,
            r_so: 0.0,
            a3_scale: 1.0,
        }
    }
}

/// Validated model-potential parameter set for one element.
///
/// `channels[l]` holds the coefficients for orbital momentum `l`; states with
/// `l` beyond the last entry reuse the last entry.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialParams {
    pub element_symbol: String,
    pub z: u32,
    /// Static dipole polarizability of the ionic core, a_B^3 (enters as `alpha_c / r^4` in Ry).
    pub alpha_c: f64,
    /// Overall multiplier on the spin-orbit term (1 for the textbook Pauli form).
    pub spin_orbit_scale: f64,
    pub channels: Vec<ChannelParams>,
}

impl PotentialParams {
    /// Hydrogen: `Z = 1`, no polarization, no screening, channels `l = 0..=4`.
    /// The spin-orbit term is switched off so the spectrum is exactly `-1/n^2`.
    pub fn hydrogen() -> Self {
        Self {
            element_symbol: String::from("H"),
            z: 1,
            alpha_c: 0.0,
            spin_orbit_scale: 0.0,
            channels: (0..5).map(|_| ChannelParams::coulomb()).collect(),
        }
    }

    /// Coefficients used for orbital momentum `l`.
    pub fn channel(&self, l: u32) -> &ChannelParams {
        let idx = (l as usize).min(self.channels.len() - 1);
        &self.channels[idx]
    }

    /// Checks every record invariant and names the first failing field.
    pub fn validate(&self) -> Result<()> {
        if self.z < 1 {
            return Err(Error::schema("z", "proton number must be at least 1"));
        }
        if !(self.alpha_c.is_finite() && self.alpha_c >= 0.0) {
            return Err(Error::schema("alpha_c", "must be finite and non-negative"));
        }
        if !(self.spin_orbit_scale.is_finite() && self.spin_orbit_scale >= 0.0) {
            return Err(Error::schema("spin_orbit_scale", "must be finite and non-negative"));
        }
        if self.channels.len() < 4 {
            return Err(Error::schema(
                format!("channel[{}]", self.channels.len()),
                "entries for l = 0..=3 are required",
            ));
        }
        for (l, ch) in self.channels.iter().enumerate() {
            let field = |name: &str| format!("channel[{l}].{name}");
            for (name, v) in [("a1", ch.a1), ("a2", ch.a2), ("a3", ch.a3), ("a4", ch.a4)] {
                if !v.is_finite() {
                    return Err(Error::schema(field(name), "must be finite"));
                }
            }
            if !(ch.r_c.is_finite() && ch.r_c > 0.0) {
                return Err(Error::schema(field("r_c"), "must be positive"));
            }
            if !(ch.a3_scale.is_finite() && ch.a3_scale > 0.0) {
                return Err(Error::schema(field("a3_scale"), "must be positive"));
            }
            if !(ch.r_so.is_finite() && ch.r_so >= 0.0) {
                return Err(Error::schema(field("r_so"), "must be non-negative"));
            }
            if (l == 0 || l >= 4) && ch.r_so != 0.0 {
                return Err(Error::schema(
                    field("r_so"),
                    "spin-orbit cutoff must be 0 for l = 0 and l >= 4",
                ));
            }
        }
        Ok(())
    }
}

/// Nuclear data entering the contact hyperfine interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotopeData {
    pub label: &'static str,
    /// Twice the nuclear spin, so `I = twice_spin / 2`.
    pub twice_spin: u32,
    /// Nuclear g-factor in units of the Bohr magneton.
    pub g_tilde_i: f64,
    pub g_s: f64,
}

impl IsotopeData {
    pub fn nuclear_spin(&self) -> f64 {
        f64::from(self.twice_spin) / 2.0
    }
}

const ELECTRON_G: f64 = 2.002_319_304_362_2;

static ISOTOPES: [IsotopeData; 2] = [
    IsotopeData {
        label: "87Rb",
        twice_spin: 3,
        g_tilde_i: -0.000_995_141_4,
        g_s: ELECTRON_G,
    },
    IsotopeData {
        label: "85Rb",
        twice_spin: 5,
        g_tilde_i: -0.000_293_640_00,
        g_s: ELECTRON_G,
    },
];

pub fn builtin_isotopes() -> &'static [IsotopeData] {
    &ISOTOPES
}

pub fn find_isotope(label: &str) -> Option<&'static IsotopeData> {
    ISOTOPES.iter().find(|iso| iso.label == label)
}
