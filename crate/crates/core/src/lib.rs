//! Bound-state spectra, quantum defects, radial wavefunctions and hyperfine
//! constants for Rydberg states of alkali atoms.
//!
//! The crate is `no_std` and only needs `alloc`. It contains the numerical
//! kernels: the Marinescu-type model potential, a Chebyshev collocation
//! eigensolver, uniform Langer/Fock quasiclassical wavefunctions, and the
//! Fermi-Segrè hyperfine pipeline. File formats, the CLI and everything else
//! touching the operating system live in the `rydberg` crate.
//!
//! Units follow [`units`]: lengths in Bohr radii, energies in Rydberg
//! (hydrogen ground state at `-1`).

#![no_std]
#![warn(missing_debug_implementations)]
// `!(a < b)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod chebyshev;
pub mod eigensolver;
pub mod error;
pub mod hyperfine;
pub mod num;
pub mod params;
pub mod potential;
pub mod quasiclassics;
pub mod specfun;
pub mod units;

pub use error::{Error, Result};
pub use params::{builtin_isotopes, find_isotope, ChannelParams, IsotopeData, PotentialParams};
pub use potential::{Channel, StateLabel, TurningPointReport};
