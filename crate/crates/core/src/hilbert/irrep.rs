use crate::error::{domain, Result};
use crate::{CMat, RVec, C64};

/// Irreducible representation of `SU(2)` of spin `twice_spin / 2`, extended holomorphically
/// to `SL(2, C)` as the symmetric power of the defining representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Irrep {
    pub twice_spin: u32,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl Irrep {
    pub fn new(twice_spin: u32) -> Self {
        Self { twice_spin }
    }

    pub fn spin(&self) -> f64 {
        self.twice_spin as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.twice_spin as usize + 1
    }

    /// All irreps of spin at most `max_spin`.
    pub fn up_to(max_spin: f64) -> Vec<Self> {
        (0..=(2.0 * max_spin).round() as u32).map(Self::new).collect()
    }

    /// Weight `lambda_k = (k - j) e_3` of the `k`th basis vector; `lambda_0` is the highest.
    pub fn weight(&self, k: usize) -> RVec {
        RVec::from_column_slice(&[0.0, 0.0, k as f64 - self.spin()])
    }

    pub fn highest_weight(&self) -> RVec {
        self.weight(0)
    }

    /// `pi(g)` on the orthonormal monomials `sqrt(C(2j,k)) x^{2j-k} y^k`.
    pub fn matrix(&self, g: &CMat) -> Result<CMat> {
        if g.nrows() != 2 || g.ncols() != 2 {
            return domain("spin representations act on 2x2 matrices");
        }
        if g.determinant().norm() < 1e-14 {
            return domain("singular group matrix");
        }
        let n = self.twice_spin;
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        let expand = |a: C64, b: C64, p: u32| -> Vec<C64> {
            (0..=p).map(|q| a.powu(p - q) * b.powu(q) * binomial(p, q)).collect()
        };
        for k in 0..d {
            let left = expand(g[(0, 0)], g[(1, 0)], n - k as u32);
            let right = expand(g[(0, 1)], g[(1, 1)], k as u32);
            let mut poly = vec![C64::new(0.0, 0.0); d];
            for (a, la) in left.iter().enumerate() {
                for (b, rb) in right.iter().enumerate() {
                    poly[a + b] += la * rb;
                }
            }
            let norm_k = binomial(n, k as u32).sqrt();
            for (row, c) in poly.iter().enumerate() {
                m[(row, k)] = c * norm_k / binomial(n, row as u32).sqrt();
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;
    use crate::sampling;

    #[test]
    fn spin_half_is_defining() {
        let alg = LieAlgebra::su2();
        let mut rng = sampling::rng(1);
        let g = sampling::group_element(&mut rng, &alg).0;
        assert!((Irrep::new(1).matrix(&g).unwrap() - &g).norm() < 1e-15);
        assert!((Irrep::new(4).matrix(&CMat::identity(2, 2)).unwrap() - CMat::identity(5, 5)).norm() < 1e-15);
    }

    #[test]
    fn unitary_homomorphism() {
        let alg = LieAlgebra::su2();
        let mut rng = sampling::rng(2);
        for ts in 0..6 {
            let pi = Irrep::new(ts);
            let a = sampling::group_element(&mut rng, &alg).0;
            let b = sampling::group_element(&mut rng, &alg).0;
            let pa = pi.matrix(&a).unwrap();
            assert!((&pa * pa.adjoint() - CMat::identity(pi.dim(), pi.dim())).norm() < 1e-10);
            let pab = pi.matrix(&(&a * &b)).unwrap();
            assert!((pab - pa * pi.matrix(&b).unwrap()).norm() < 1e-9);
            let z = alg.exp_complex(&crate::CVec::from_column_slice(&[C64::new(0.3, 0.8), C64::new(-0.2, 0.1), C64::new(0.5, -0.6)]));
            let pz = pi.matrix(&(&a * &z)).unwrap();
            assert!((pz - pi.matrix(&a).unwrap() * pi.matrix(&z).unwrap()).norm() < 1e-9);
        }
    }

    #[test]
    fn torus_is_diagonal_in_weights() {
        let alg = LieAlgebra::su2();
        let a = RVec::from_column_slice(&[0.0, 0.0, 0.83]);
        for ts in 0..5 {
            let pi = Irrep::new(ts);
            let m = pi.matrix(&alg.exp(&a).0).unwrap();
            for k in 0..pi.dim() {
                let want = C64::from_polar(1.0, pi.weight(k).dot(&a));
                assert!((m[(k, k)] - want).norm() < 1e-13);
            }
            assert!((m.clone() - CMat::from_diagonal(&m.diagonal())).norm() < 1e-13);
        }
        let th: f64 = 0.7;
        let g = CMat::from_diagonal(&crate::CVec::from_column_slice(&[C64::from_polar(1.0, th / 2.0), C64::from_polar(1.0, -th / 2.0)]));
        let m = Irrep::new(2).matrix(&g).unwrap();
        assert!((m[(0, 0)] - C64::from_polar(1.0, th)).norm() < 1e-14);
        assert!((m[(1, 1)] - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((m[(2, 2)] - C64::from_polar(1.0, -th)).norm() < 1e-14);
    }

    #[test]
    fn cauchy_riemann() {
        let g = CMat::from_row_slice(2, 2, &[C64::new(1.2, 0.3), C64::new(-0.4, 0.9), C64::new(0.1, -0.5), C64::new(0.7, 0.2)]);
        let e = CMat::from_row_slice(2, 2, &[C64::new(0.3, 0.0), C64::new(-1.0, 0.0), C64::new(0.5, 0.0), C64::new(0.2, 0.0)]);
        let pi = Irrep::new(3);
        let h = 1e-6;
        let d = |dir: C64| (pi.matrix(&(&g + &e * (dir * h))).unwrap() - pi.matrix(&(&g - &e * (dir * h))).unwrap()) / C64::new(2.0 * h, 0.0);
        let (dr, di) = (d(C64::new(1.0, 0.0)), d(C64::new(0.0, 1.0)));
        assert!((di - dr * C64::new(0.0, 1.0)).norm() < 1e-7);
        assert!(pi.matrix(&CMat::zeros(2, 2)).is_err());
    }
}
