//! Acceptance tolerances shared by the verification suites and the tests.

pub const FLOW_COMMUTATION: f64 = 1e-9;
pub const FLOW_RK4: f64 = 1e-6;
pub const TANGENT_FD: f64 = 1e-5;
pub const CHAIN_RULE: f64 = 1e-9;
pub const APPENDIX_FD: f64 = 1e-5;
pub const ISOTROPY: f64 = 1e-9;
pub const HERMITIAN: f64 = 1e-10;
pub const METRIC_MATCH: f64 = 1e-9;
pub const POTENTIAL_FD: f64 = 1e-5;
pub const DENSITY_RELATIVE: f64 = 1e-8;
pub const MIXED_INVARIANT: f64 = 1e-8;
pub const LEAF_VOLUME: f64 = 1e-9;
pub const LEAF_EIGEN: f64 = 1e-9;
pub const UNITARITY: f64 = 5e-7;
pub const GAUSSIAN: f64 = 1e-10;
pub const NORM_CONVERGENCE: f64 = 1e-6;
pub const CONSERVATION: f64 = 1e-12;
pub const HAAR_EXACT: f64 = 1e-12;
pub const COVARIANT: f64 = 1e-6;
pub const STRUCTURE: f64 = 1e-12;

/// Per-run tolerance overrides; unspecified keys keep the defaults above.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub flow_commutation: f64,
    pub flow_rk4: f64,
    pub tangent_fd: f64,
    pub chain_rule: f64,
    pub appendix_fd: f64,
    pub isotropy: f64,
    pub hermitian: f64,
    pub metric_match: f64,
    pub potential_fd: f64,
    pub density_relative: f64,
    pub mixed_invariant: f64,
    pub leaf_volume: f64,
    pub leaf_eigen: f64,
    pub unitarity: f64,
    pub gaussian: f64,
    pub norm_convergence: f64,
    pub covariant: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            flow_commutation: FLOW_COMMUTATION,
            flow_rk4: FLOW_RK4,
            tangent_fd: TANGENT_FD,
            chain_rule: CHAIN_RULE,
            appendix_fd: APPENDIX_FD,
            isotropy: ISOTROPY,
            hermitian: HERMITIAN,
            metric_match: METRIC_MATCH,
            potential_fd: POTENTIAL_FD,
            density_relative: DENSITY_RELATIVE,
            mixed_invariant: MIXED_INVARIANT,
            leaf_volume: LEAF_VOLUME,
            leaf_eigen: LEAF_EIGEN,
            unitarity: UNITARITY,
            gaussian: GAUSSIAN,
            norm_convergence: NORM_CONVERGENCE,
            covariant: COVARIANT,
        }
    }
}
