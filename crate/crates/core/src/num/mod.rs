//! Small numerical building blocks: root bracketing and Gauss-Legendre rules.

pub mod gauss;
pub mod roots;
