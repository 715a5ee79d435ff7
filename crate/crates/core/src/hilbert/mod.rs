//! Representations, quadrature-based inner products on the polarized Hilbert spaces,
//! prequantum and spectral operators, and the coherent state transforms.

mod irrep;
pub mod quadrature;
mod sections;

pub use irrep::Irrep;
pub use sections::*;
