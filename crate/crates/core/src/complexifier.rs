//! Ad-invariant strictly convex complexifiers `h` on the Lie algebra and
//! `Ad_T`-invariant quadratic forms `f` on the Cartan subalgebra.

use crate::error::{domain, Error, Result};
use crate::lie::LieAlgebra;
use crate::sampling;
use crate::{RMat, RVec};
use std::sync::Arc;

type ValueFn = Arc<dyn Fn(&RVec) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&RVec) -> RVec + Send + Sync>;
type HessFn = Arc<dyn Fn(&RVec) -> RMat + Send + Sync>;

/// Function `h` with gradient `u = dh` and Hessian `H`.
#[derive(Clone)]
pub struct Complexifier {
    name: String,
    quadratic: bool,
    value: ValueFn,
    gradient: GradFn,
    hessian: HessFn,
}

impl std::fmt::Debug for Complexifier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Complexifier({})", self.name)
    }
}

#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct ComplexifierResiduals {
    pub gradient_fd: f64,
    pub hessian_fd: f64,
    pub invariance: f64,
    pub equivariance: f64,
    pub commutation: f64,
    pub min_hessian_eigenvalue: f64,
    pub min_hessian_norm: f64,
}

impl Complexifier {
    /// `h(y) = |y|^2 / 2`.
    pub fn quadratic() -> Self {
        Self {
            name: "quadratic".into(),
            quadratic: true,
            value: Arc::new(|y| 0.5 * y.norm_squared()),
            gradient: Arc::new(|y| y.clone()),
            hessian: Arc::new(|y| RMat::identity(y.len(), y.len())),
        }
    }

    /// Registers a user-supplied complexifier after checking it on random samples.
    pub fn custom(
        alg: &LieAlgebra,
        name: &str,
        value: impl Fn(&RVec) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&RVec) -> RVec + Send + Sync + 'static,
        hessian: impl Fn(&RVec) -> RMat + Send + Sync + 'static,
    ) -> Result<Self> {
        let h = Self {
            name: name.into(),
            quadratic: false,
            value: Arc::new(value),
            gradient: Arc::new(gradient),
            hessian: Arc::new(hessian),
        };
        let r = h.validate(alg, 40, 0x5eed)?;
        if r.gradient_fd > 1e-6
            || r.hessian_fd > 1e-6
            || r.invariance > 1e-10
            || r.equivariance > 1e-10
            || r.commutation > 1e-9
            || r.min_hessian_eigenvalue <= 0.0
        {
            return Err(Error::Config(format!("complexifier '{name}' fails validation: {r:?}")));
        }
        Ok(h)
    }

    /// Radial example `h = psi(|y|^2/2)` with `psi(s) = s + sqrt(1 + 2s)`; its Hessian is bounded below by 1.
    pub fn softened(alg: &LieAlgebra) -> Result<Self> {
        Self::custom(
            alg,
            "softened",
            |y| {
                let s = 0.5 * y.norm_squared();
                s + (1.0 + 2.0 * s).sqrt()
            },
            |y| y * (1.0 + 1.0 / (1.0 + y.norm_squared()).sqrt()),
            |y| {
                let q = (1.0 + y.norm_squared()).sqrt();
                let n = y.len();
                RMat::identity(n, n) * (1.0 + 1.0 / q) - y * y.transpose() / (q * q * q)
            },
        )
    }

    pub fn by_name(alg: &LieAlgebra, name: &str) -> Result<Self> {
        match name {
            "quadratic" => Ok(Self::quadratic()),
            "softened" => Self::softened(alg),
            other => Err(Error::Config(format!("unknown complexifier '{other}'"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_quadratic(&self) -> bool {
        self.quadratic
    }

    pub fn value(&self, y: &RVec) -> f64 {
        (self.value)(y)
    }

    /// `u(y) = dh(y)` read as an algebra vector.
    pub fn gradient(&self, y: &RVec) -> RVec {
        (self.gradient)(y)
    }

    pub fn hessian(&self, y: &RVec) -> RMat {
        (self.hessian)(y)
    }

    /// `<y, u(y)> - h(y)`.
    pub fn legendre_dual(&self, y: &RVec) -> f64 {
        y.dot(&self.gradient(y)) - self.value(y)
    }

    pub fn validate(&self, alg: &LieAlgebra, samples: usize, seed: u64) -> Result<ComplexifierResiduals> {
        let mut rng = sampling::rng(seed);
        let n = alg.dim();
        let mut r = ComplexifierResiduals {
            min_hessian_eigenvalue: f64::INFINITY,
            min_hessian_norm: f64::INFINITY,
            ..Default::default()
        };
        let eps = 1e-5;
        for _ in 0..samples {
            let y = sampling::ball(&mut rng, n, 4.0);
            let u = self.gradient(&y);
            let hess = self.hessian(&y);
            if u.len() != n || hess.nrows() != n || hess.ncols() != n {
                return domain("complexifier returned wrong dimensions");
            }
            for k in 0..n {
                let mut e = RVec::zeros(n);
                e[k] = eps;
                let fd = (self.value(&(&y + &e)) - self.value(&(&y - &e))) / (2.0 * eps);
                r.gradient_fd = r.gradient_fd.max((fd - u[k]).abs() / (1.0 + u[k].abs()));
                let col = (self.gradient(&(&y + &e)) - self.gradient(&(&y - &e))) / (2.0 * eps);
                r.hessian_fd = r.hessian_fd.max((col - hess.column(k)).amax() / (1.0 + hess.amax()));
            }
            let g = sampling::group_element(&mut rng, alg);
            let ad = alg.big_ad_real(&g);
            let gy = &ad * &y;
            r.invariance = r.invariance.max((self.value(&gy) - self.value(&y)).abs() / (1.0 + self.value(&y).abs()));
            r.equivariance = r.equivariance.max((self.gradient(&gy) - &ad * &u).amax());
            r.equivariance =
                r.equivariance.max((self.hessian(&gy) - &ad * &hess * ad.transpose()).amax());
            r.commutation = r.commutation.max(alg.bracket(&y, &u).amax());
            r.commutation = r.commutation.max((alg.ad(&y) * &hess - alg.ad(&u)).amax());
            let eig = hess.clone().symmetric_eigenvalues();
            r.min_hessian_eigenvalue = r.min_hessian_eigenvalue.min(eig.min());
            r.min_hessian_norm = r.min_hessian_norm.min(eig.amax());
        }
        Ok(r)
    }
}

/// `f(y) = <y, F y>/2` with `F` symmetric positive definite on the Cartan subalgebra and zero on its complement.
#[derive(Clone, Debug)]
pub struct TorusForm {
    ft: RMat,
    full: RMat,
}

impl TorusForm {
    pub fn new(alg: &LieAlgebra, ft: RMat) -> Result<Self> {
        let r = alg.rank();
        if ft.nrows() != r || ft.ncols() != r {
            return Err(Error::Config(format!("torus form must be {r}x{r}")));
        }
        if (&ft - ft.transpose()).amax() > 1e-12 {
            return Err(Error::Config("torus form is not symmetric".into()));
        }
        if ft.clone().symmetric_eigenvalues().min() <= 0.0 {
            return Err(Error::Config("torus form is not positive definite".into()));
        }
        let n = alg.dim();
        let mut full = RMat::zeros(n, n);
        for (a, &ca) in alg.cartan().iter().enumerate() {
            for (b, &cb) in alg.cartan().iter().enumerate() {
                full[(ca, cb)] = ft[(a, b)];
            }
        }
        Ok(Self { ft, full })
    }

    /// `F = f0 I` on the Cartan subalgebra.
    pub fn scalar(alg: &LieAlgebra, f0: f64) -> Result<Self> {
        Self::new(alg, RMat::identity(alg.rank(), alg.rank()) * f0)
    }

    pub fn torus_matrix(&self) -> &RMat {
        &self.ft
    }

    /// `F` as an `n x n` operator on the whole algebra.
    pub fn matrix(&self) -> &RMat {
        &self.full
    }

    pub fn apply(&self, y: &RVec) -> RVec {
        &self.full * y
    }

    pub fn value(&self, y: &RVec) -> f64 {
        0.5 * y.dot(&(&self.full * y))
    }

    pub fn det(&self) -> f64 {
        self.ft.determinant()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_passes_validation() {
        let alg = LieAlgebra::su2();
        let r = Complexifier::quadratic().validate(&alg, 20, 3).unwrap();
        assert!(r.gradient_fd < 1e-8 && r.hessian_fd < 1e-8);
        assert!(r.invariance < 1e-12 && r.equivariance < 1e-12 && r.commutation < 1e-12);
        assert!((r.min_hessian_eigenvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn softened_is_accepted() {
        let alg = LieAlgebra::su2();
        let h = Complexifier::softened(&alg).unwrap();
        let y = RVec::from_column_slice(&[0.1, 2.0, -0.4]);
        assert!(h.hessian(&y).symmetric_eigenvalues().min() > 1.0);
    }

    #[test]
    fn rejects_non_invariant_function() {
        let alg = LieAlgebra::su2();
        let bad = Complexifier::custom(
            &alg,
            "aniso",
            |y| 0.5 * y.norm_squared() + 0.5 * y[0] * y[0],
            |y| {
                let mut g = y.clone();
                g[0] *= 2.0;
                g
            },
            |_| RMat::from_diagonal(&RVec::from_column_slice(&[2.0, 1.0, 1.0])),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn torus_form_rejects_indefinite() {
        let alg = LieAlgebra::su2();
        assert!(TorusForm::scalar(&alg, -1.0).is_err());
        let f = TorusForm::scalar(&alg, 2.0).unwrap();
        let y = RVec::from_column_slice(&[1.0, 1.0, 3.0]);
        assert!((f.value(&y) - 9.0).abs() < 1e-15);
        assert!(alg.bracket(&f.apply(&y), &f.apply(&RVec::from_column_slice(&[0.2, 0.0, -1.0]))).norm() < 1e-15);
    }
}
