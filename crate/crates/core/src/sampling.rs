//! Seeded random sampling of group elements, algebra vectors and phase points.

use crate::lie::{GroupPoint, LieAlgebra, PhasePoint};
use crate::{CMat, RVec, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut SampleRng, n: usize) -> RVec {
    RVec::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Uniform point in the ball of radius `r`.
pub fn ball(rng: &mut SampleRng, n: usize, r: f64) -> RVec {
    let g = gaussian_vec(rng, n);
    let radius = r * rng.gen::<f64>().powf(1.0 / n as f64);
    g.normalize() * radius
}

pub fn uniform(rng: &mut SampleRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

/// Haar-distributed element for `su(2)`-sized algebras, otherwise `exp` of a wide Gaussian.
pub fn group_element(rng: &mut SampleRng, alg: &LieAlgebra) -> GroupPoint {
    if alg.matrix_size() == 2 && alg.dim() == 3 {
        let q = gaussian_vec(rng, 4).normalize();
        let a = C64::new(q[0], q[1]);
        let b = C64::new(q[2], q[3]);
        GroupPoint(CMat::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()]))
    } else {
        alg.exp(&(gaussian_vec(rng, alg.dim()) * 2.0))
    }
}

pub fn phase_point(rng: &mut SampleRng, alg: &LieAlgebra, radius: f64) -> PhasePoint {
    let x = group_element(rng, alg);
    PhasePoint::new(x, ball(rng, alg.dim(), radius))
}
