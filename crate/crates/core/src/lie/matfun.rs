use super::series::PowerSeries;
use crate::error::{Error, Result};
use crate::{CMat, RMat, C64, I};
use nalgebra::SymmetricEigen;
use std::sync::Arc;

/// Below this modulus eigenvalues are evaluated through the Taylor series.
pub const TAYLOR_RADIUS: f64 = 1e-3;

type Eval = Arc<dyn Fn(C64) -> C64 + Send + Sync>;
type Pole = Arc<dyn Fn(C64) -> bool + Send + Sync>;

/// An entire (or locally analytic) function with a removable singularity at 0,
/// carried with its Taylor expansion there.
#[derive(Clone)]
pub struct ScalarFunction {
    eval: Eval,
    series: PowerSeries,
    pole: Option<Pole>,
}

impl std::fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarFunction").field("series", &self.series.0[..3].to_vec()).finish()
    }
}

impl ScalarFunction {
    pub fn new(
        eval: impl Fn(C64) -> C64 + Send + Sync + 'static,
        series: PowerSeries,
    ) -> Self {
        Self { eval: Arc::new(eval), series, pole: None }
    }

    /// `e^{cz}`.
    pub fn exp(c: C64) -> Self {
        Self::new(move |z| (c * z).exp(), PowerSeries::exp(c))
    }

    /// `(1 - e^{cz}) / z`.
    pub fn one_minus_exp_over_z(c: C64) -> Self {
        Self::new(move |z| (C64::new(1.0, 0.0) - (c * z).exp()) / z, PowerSeries::one_minus_exp_over_z(c))
    }

    /// `sin(z) / z`.
    pub fn sinc() -> Self {
        Self::new(|z| z.sin() / z, PowerSeries::sin_over_z(C64::new(1.0, 0.0)))
    }

    /// `z e^{iaz} / sin(az)`; singular where `sin(az) = 0` away from the origin.
    pub fn z_exp_over_sin(a: f64) -> Self {
        let ac = C64::new(a, 0.0);
        let series = PowerSeries::sin_over_z(ac)
            .reciprocal()
            .expect("a != 0")
            .mul(&PowerSeries::exp(I * ac));
        let mut f = Self::new(move |z| z * (I * ac * z).exp() / (ac * z).sin(), series);
        f.pole = Some(Arc::new(move |z| (ac * z).sin().norm() < 1e-12));
        f
    }

    pub fn scale(&self, c: C64) -> Self {
        let e = self.eval.clone();
        Self { eval: Arc::new(move |z| c * e(z)), series: self.series.scale(c), pole: self.pole.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        let pole = match (&self.pole, &other.pole) {
            (None, None) => None,
            (p, q) => {
                let (p, q) = (p.clone(), q.clone());
                Some(Arc::new(move |z| p.as_ref().is_some_and(|f| f(z)) || q.as_ref().is_some_and(|f| f(z))) as Pole)
            }
        };
        Self { eval: Arc::new(move |z| a(z) * b(z)), series: self.series.mul(&other.series), pole }
    }

    pub fn at(&self, z: C64) -> Result<C64> {
        if z.norm() < TAYLOR_RADIUS {
            return Ok(self.series.eval(z));
        }
        if self.pole.as_ref().is_some_and(|p| p(z)) {
            return Err(Error::Singular(z));
        }
        Ok((self.eval)(z))
    }
}

/// Spectral decomposition `ad = V diag(lambda) V^H` of a real antisymmetric matrix.
#[derive(Clone, Debug)]
pub struct AdSpectrum {
    vectors: CMat,
    values: Vec<C64>,
}

impl AdSpectrum {
    pub fn new(ad: &RMat) -> Result<Self> {
        let n = ad.nrows();
        if (ad + ad.transpose()).amax() > 1e-10 * (1.0 + ad.amax()) {
            return Err(Error::Domain("ad matrix is not antisymmetric".into()));
        }
        let herm = CMat::from_fn(n, n, |i, j| I * ad[(i, j)]);
        let eig = SymmetricEigen::try_new(herm, 1e-15, 10_000)
            .ok_or_else(|| Error::Numeric("Hermitian eigensolver did not converge".into()))?;
        let values = eig.eigenvalues.iter().map(|mu| -I * *mu).collect();
        Ok(Self { vectors: eig.eigenvectors, values })
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.values
    }

    pub fn eigenvectors(&self) -> &CMat {
        &self.vectors
    }

    pub fn apply(&self, f: &ScalarFunction) -> Result<CMat> {
        let mut scaled = self.vectors.clone();
        for (j, lam) in self.values.iter().enumerate() {
            let v = f.at(*lam)?;
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= v;
            }
        }
        Ok(scaled * self.vectors.adjoint())
    }
}

pub fn function_of_ad(ad: &RMat, f: &ScalarFunction) -> Result<CMat> {
    AdSpectrum::new(ad)?.apply(f)
}
