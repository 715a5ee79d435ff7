//! Compact Lie algebras in an orthonormal basis, their groups in the defining
//! representation, and functions of `ad`.

mod matfun;
mod series;

pub use matfun::{function_of_ad, AdSpectrum, ScalarFunction, TAYLOR_RADIUS};
pub use series::PowerSeries;

use crate::error::{Error, Result};
use crate::{complexify, CMat, CVec, RMat, RVec, C64, I};

/// A point `x` of the group, stored in the defining representation.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPoint(pub CMat);

/// A point `(x, y)` of `T*K = K x k` in left trivialization.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub x: GroupPoint,
    pub y: RVec,
}

impl PhasePoint {
    pub fn new(x: GroupPoint, y: RVec) -> Self {
        Self { x, y }
    }
}

/// Residuals of the structural identities of a [`LieAlgebra`].
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct AlgebraResiduals {
    pub closure: f64,
    pub antisymmetry: f64,
    pub jacobi: f64,
    pub invariance: f64,
    pub orthonormality: f64,
    pub cartan_abelian: f64,
}

impl AlgebraResiduals {
    pub fn max(&self) -> f64 {
        [
            self.closure,
            self.antisymmetry,
            self.jacobi,
            self.invariance,
            self.orthonormality,
            self.cartan_abelian,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    name: String,
    basis: Vec<CMat>,
    structure: Vec<f64>,
    trace_scale: f64,
    cartan: Vec<usize>,
    positive_roots: Vec<RVec>,
    rho: RVec,
}

impl LieAlgebra {
    /// `su(2)` with `T_j = -(i/2) sigma_j`, `<A,B> = -2 tr(AB)` and torus generated by `T_3`.
    ///
    /// `[T_1, T_2] = T_3` cyclically. The positive root is `-e_3`, the one whose root
    /// vector is the raising operator `sigma_+`.
    pub fn su2() -> Self {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let pauli = [
            CMat::from_row_slice(2, 2, &[z, one, one, z]),
            CMat::from_row_slice(2, 2, &[z, -I, I, z]),
            CMat::from_row_slice(2, 2, &[one, z, z, -one]),
        ];
        let basis = pauli.iter().map(|p| p * C64::new(0.0, -0.5)).collect();
        let mut alg = Self::assemble("su2".into(), basis, 2.0, vec![2]);
        alg.positive_roots = vec![RVec::from_column_slice(&[0.0, 0.0, -1.0])];
        alg.rho = RVec::from_column_slice(&[0.0, 0.0, -0.5]);
        alg
    }

    /// Builds an algebra from anti-Hermitian basis matrices, validating every structural identity.
    pub fn from_basis(
        name: &str,
        basis: Vec<CMat>,
        cartan: Vec<usize>,
        trace_scale: Option<f64>,
    ) -> Result<Self> {
        let n = basis.len();
        if n == 0 {
            return Err(Error::Config("empty basis".into()));
        }
        let size = basis[0].nrows();
        for (j, b) in basis.iter().enumerate() {
            if b.nrows() != size || b.ncols() != size {
                return Err(Error::Config(format!("basis element {j} is not {size}x{size}")));
            }
            if (b + b.adjoint()).norm() > 1e-10 {
                return Err(Error::Config(format!("basis element {j} is not anti-Hermitian")));
            }
        }
        if cartan.is_empty() || cartan.iter().any(|&c| c >= n) {
            return Err(Error::Config("cartan indices out of range".into()));
        }
        let scale = match trace_scale {
            Some(s) => s,
            None => {
                let t = (&basis[0] * &basis[0]).trace().re;
                if t >= 0.0 {
                    return Err(Error::Config("basis element 0 has non-negative trace square".into()));
                }
                -1.0 / t
            }
        };
        let mut alg = Self::assemble(name.into(), basis, scale, cartan);
        let res = alg.residuals();
        if res.max() > 1e-9 {
            return Err(Error::Config(format!("algebra fails structural checks: {res:?}")));
        }
        alg.check_cartan_maximal()?;
        alg.compute_roots()?;
        Ok(alg)
    }

    fn assemble(name: String, basis: Vec<CMat>, trace_scale: f64, cartan: Vec<usize>) -> Self {
        let n = basis.len();
        let mut alg = Self {
            name,
            basis,
            structure: vec![0.0; n * n * n],
            trace_scale,
            cartan,
            positive_roots: Vec::new(),
            rho: RVec::zeros(n),
        };
        for j in 0..n {
            for k in 0..n {
                let c = &alg.basis[j] * &alg.basis[k] - &alg.basis[k] * &alg.basis[j];
                for l in 0..n {
                    alg.structure[(j * n + k) * n + l] = alg.pairing(&c, &alg.basis[l]).re;
                }
            }
        }
        alg
    }

    fn check_cartan_maximal(&self) -> Result<()> {
        let n = self.dim();
        let h = self.generic_cartan();
        let ad = self.ad(&h);
        let rank = ad.clone().svd(false, false).singular_values.iter().filter(|s| **s > 1e-8).count();
        if n - rank != self.rank() {
            return Err(Error::Config(format!(
                "cartan subalgebra is not maximal: centralizer dimension {} vs rank {}",
                n - rank,
                self.rank()
            )));
        }
        Ok(())
    }

    fn generic_cartan(&self) -> RVec {
        let mut h = RVec::zeros(self.dim());
        for (i, &c) in self.cartan.iter().enumerate() {
            h[c] = 1.0 + (i as f64 + 1.0) * std::f64::consts::SQRT_2 * 0.371;
        }
        h
    }

    fn compute_roots(&mut self) -> Result<()> {
        let h = self.generic_cartan();
        let spec = AdSpectrum::new(&self.ad(&h))?;
        let mut roots = Vec::new();
        for (idx, lam) in spec.eigenvalues().iter().enumerate() {
            if lam.norm() < 1e-8 {
                continue;
            }
            let v = spec.eigenvectors().column(idx).into_owned();
            let mut alpha = RVec::zeros(self.dim());
            for &c in &self.cartan {
                let mut e = RVec::zeros(self.dim());
                e[c] = 1.0;
                let adv = complexify(&self.ad(&e)) * &v;
                alpha[c] = (-I * v.dotc(&adv) / v.dotc(&v)).re;
            }
            if alpha.dot(&h) > 0.0 {
                roots.push(alpha);
            }
        }
        self.rho = roots.iter().fold(RVec::zeros(self.dim()), |acc, a| acc + a) * 0.5;
        self.positive_roots = roots;
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn matrix_size(&self) -> usize {
        self.basis[0].nrows()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn cartan(&self) -> &[usize] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[RVec] {
        &self.positive_roots
    }

    pub fn weyl_vector(&self) -> &RVec {
        &self.rho
    }

    /// `c[j][k][l]` with `[T_j, T_k] = sum_l c[j][k][l] T_l`.
    pub fn structure_constant(&self, j: usize, k: usize, l: usize) -> f64 {
        let n = self.dim();
        self.structure[(j * n + k) * n + l]
    }

    /// Invariant inner product extended complex-bilinearly to matrices.
    pub fn pairing(&self, a: &CMat, b: &CMat) -> C64 {
        -(a * b).trace() * self.trace_scale
    }

    pub fn gram(&self) -> RMat {
        let n = self.dim();
        RMat::from_fn(n, n, |j, k| self.pairing(&self.basis[j], &self.basis[k]).re)
    }

    /// `ad_y` with `(ad_y)_{lk} = sum_j y^j c[j][k][l]`.
    pub fn ad(&self, y: &RVec) -> RMat {
        let n = self.dim();
        let mut m = RMat::zeros(n, n);
        for j in 0..n {
            if y[j] == 0.0 {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    m[(l, k)] += y[j] * self.structure_constant(j, k, l);
                }
            }
        }
        m
    }

    pub fn ad_complex(&self, y: &CVec) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    m[(l, k)] += y[j] * self.structure_constant(j, k, l);
                }
            }
        }
        m
    }

    pub fn bracket(&self, a: &RVec, b: &RVec) -> RVec {
        self.ad(a) * b
    }

    pub fn to_matrix(&self, y: &RVec) -> CMat {
        let s = self.matrix_size();
        self.basis.iter().zip(y.iter()).fold(CMat::zeros(s, s), |acc, (b, c)| acc + b * C64::new(*c, 0.0))
    }

    pub fn to_matrix_complex(&self, z: &CVec) -> CMat {
        let s = self.matrix_size();
        self.basis.iter().zip(z.iter()).fold(CMat::zeros(s, s), |acc, (b, c)| acc + b * *c)
    }

    /// Complex coordinates of a matrix in the complexified algebra.
    pub fn coords_complex(&self, a: &CMat) -> CVec {
        CVec::from_iterator(self.dim(), self.basis.iter().map(|b| self.pairing(a, b)))
    }

    pub fn coords(&self, a: &CMat) -> RVec {
        self.coords_complex(a).map(|z| z.re)
    }

    pub fn exp(&self, y: &RVec) -> GroupPoint {
        GroupPoint(self.to_matrix(y).exp())
    }

    pub fn exp_complex(&self, z: &CVec) -> CMat {
        self.to_matrix_complex(z).exp()
    }

    /// `Ad_g` with `(Ad_g)_{lk} = <g T_k g^{-1}, T_l>`, for any invertible `g`.
    pub fn big_ad(&self, g: &CMat) -> Result<CMat> {
        let inv = g
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Domain("group element is singular".into()))?;
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for k in 0..n {
            let c = self.coords_complex(&(g * &self.basis[k] * &inv));
            m.set_column(k, &c);
        }
        Ok(m)
    }

    pub fn big_ad_real(&self, g: &GroupPoint) -> RMat {
        let n = self.dim();
        let inv = g.0.adjoint();
        let mut m = RMat::zeros(n, n);
        for k in 0..n {
            m.set_column(k, &self.coords(&(&g.0 * &self.basis[k] * &inv)));
        }
        m
    }

    pub fn in_cartan(&self, y: &RVec, tol: f64) -> bool {
        (0..self.dim()).filter(|j| !self.cartan.contains(j)).all(|j| y[j].abs() <= tol)
    }

    pub fn project_cartan(&self, y: &RVec) -> RVec {
        RVec::from_fn(self.dim(), |j, _| if self.cartan.contains(&j) { y[j] } else { 0.0 })
    }

    /// `k`th Cartan basis direction as a full vector.
    pub fn cartan_direction(&self, k: usize) -> RVec {
        let mut e = RVec::zeros(self.dim());
        e[self.cartan[k]] = 1.0;
        e
    }

    pub fn residuals(&self) -> AlgebraResiduals {
        let n = self.dim();
        let mut r = AlgebraResiduals::default();
        for j in 0..n {
            for k in 0..n {
                let comm = &self.basis[j] * &self.basis[k] - &self.basis[k] * &self.basis[j];
                let rebuilt = (0..n).fold(CMat::zeros(comm.nrows(), comm.ncols()), |acc, l| {
                    acc + &self.basis[l] * C64::new(self.structure_constant(j, k, l), 0.0)
                });
                r.closure = r.closure.max((comm - rebuilt).norm());
                for l in 0..n {
                    let c = self.structure_constant(j, k, l);
                    r.antisymmetry = r.antisymmetry.max((c + self.structure_constant(k, j, l)).abs());
                    r.invariance = r.invariance.max((c - self.structure_constant(k, l, j)).abs());
                }
                let g = self.pairing(&self.basis[j], &self.basis[k]);
                let target = if j == k { 1.0 } else { 0.0 };
                r.orthonormality = r.orthonormality.max((g - C64::new(target, 0.0)).norm());
            }
        }
        let e = |i: usize| {
            let mut v = RVec::zeros(n);
            v[i] = 1.0;
            v
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (ea, eb, ec) = (e(a), e(b), e(c));
                    let jac = self.bracket(&ea, &self.bracket(&eb, &ec))
                        + self.bracket(&eb, &self.bracket(&ec, &ea))
                        + self.bracket(&ec, &self.bracket(&ea, &eb));
                    r.jacobi = r.jacobi.max(jac.amax());
                }
            }
        }
        for &a in &self.cartan {
            for &b in &self.cartan {
                r.cartan_abelian = r.cartan_abelian.max(self.bracket(&e(a), &e(b)).amax());
            }
        }
        r
    }

    pub fn identity(&self) -> GroupPoint {
        GroupPoint(CMat::identity(self.matrix_size(), self.matrix_size()))
    }

    /// Distance from `i alpha(a)` to the nearest eigenvalue of `ad_a`.
    pub fn root_residual(&self, alpha: &RVec, a: &RVec) -> Result<f64> {
        let spec = AdSpectrum::new(&self.ad(a))?;
        let target = I * alpha.dot(a);
        let best = spec
            .eigenvalues()
            .iter()
            .map(|l| (l - target).norm())
            .fold(f64::INFINITY, f64::min);
        Ok(best)
    }
}

/// Left-trivialized tangent vector `d/de g(e)` at `g(0)`, central difference.
pub fn left_derivative(alg: &LieAlgebra, g0: &CMat, gp: &CMat, gm: &CMat, eps: f64) -> CVec {
    let inv = g0.clone().try_inverse().expect("invertible base point");
    alg.coords_complex(&(inv * (gp - gm) / C64::new(2.0 * eps, 0.0)))
}
