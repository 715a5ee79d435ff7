#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical toolkit for commuting Hamiltonian flows on the cotangent bundle of a
//! compact Lie group, the Kähler and mixed polarizations they generate, half-form
//! densities, and the generalized coherent-state transform between the resulting
//! quantizations.
//!
//! The default group is `SU(2)` with the torus generated by `T_3`; other compact
//! groups can be loaded from a JSON definition (see [`config`]).

pub mod complexifier;
pub mod config;
pub mod error;
pub mod flows;
pub mod halfform;
pub mod hilbert;
pub mod lie;
mod par;
pub mod polarization;
pub mod report;
pub mod sampling;
pub mod suites;
pub mod tolerances;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
pub type RVec = nalgebra::DVector<f64>;
pub type RMat = nalgebra::DMatrix<f64>;
pub type CVec = nalgebra::DVector<C64>;
pub type CMat = nalgebra::DMatrix<C64>;

pub(crate) const I: C64 = C64::new(0.0, 1.0);

pub fn complexify(m: &RMat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

pub fn complexify_vec(v: &RVec) -> CVec {
    v.map(|x| C64::new(x, 0.0))
}

/// Complex time parameters `(tau, sigma)` with `Im tau > 0` and `Im sigma >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TimeParams {
    pub tau: C64,
    pub sigma: C64,
}

impl TimeParams {
    pub fn new(tau: C64, sigma: C64) -> Result<Self> {
        if !(tau.im > 0.0) {
            return error::domain(format!("Im tau must be positive, got {tau}"));
        }
        if !(sigma.im >= 0.0) {
            return error::domain(format!("Im sigma must be non-negative, got {sigma}"));
        }
        Ok(Self { tau, sigma })
    }
}

impl TimeParams {
    /// Parameters of the mixed polarization `P_{0,sigma}`; requires `Im sigma > 0`.
    pub fn mixed(sigma: C64) -> Result<Self> {
        if !(sigma.im > 0.0) {
            return error::domain(format!("Im sigma must be positive, got {sigma}"));
        }
        Ok(Self { tau: C64::new(0.0, 0.0), sigma })
    }
}
