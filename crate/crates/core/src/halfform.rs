//! Half-form densities `|sqrt(Omega_{tau,sigma})|^2` relative to the Liouville form,
//! in closed form and through an independent holomorphic-frame construction.

use crate::complexifier::{Complexifier, TorusForm};
use crate::error::{domain, Error, Result};
use crate::lie::{function_of_ad, LieAlgebra, ScalarFunction};
use crate::polarization::{build_frame, span_residual};
use crate::{complexify, CMat, RMat, RVec, TimeParams, C64};

/// `eta(y) = det(sinh(i ad_y)/(i ad_y))^{1/2} = det(sin(ad_y)/ad_y)^{1/2}`.
pub fn eta(alg: &LieAlgebra, y: &RVec) -> Result<f64> {
    let d = function_of_ad(&alg.ad(y), &ScalarFunction::sinc())?.determinant();
    if d.re <= 0.0 || d.im.abs() > 1e-9 * d.re {
        return Err(Error::Numeric(format!("eta determinant not positive: {d}")));
    }
    Ok(d.re.sqrt())
}

/// `prod_{alpha > 0} sinh(alpha(y))/alpha(y)` for `y` in the Cartan subalgebra.
pub fn eta_roots(alg: &LieAlgebra, y: &RVec) -> Result<f64> {
    if !alg.in_cartan(y, 1e-12) {
        return domain("root product form needs y in the Cartan subalgebra");
    }
    Ok(alg
        .positive_roots()
        .iter()
        .map(|a| {
            let t = a.dot(y);
            if t.abs() < 1e-8 { 1.0 + t * t / 6.0 } else { t.sinh() / t }
        })
        .product())
}

/// `tau_2^{n/2} eta(tau_2 u(y)) det(H(y))^{1/2}`.
pub fn density_tau_zero(alg: &LieAlgebra, h: &Complexifier, tau: C64, y: &RVec) -> Result<f64> {
    if !(tau.im > 0.0) {
        return domain("density needs Im tau > 0");
    }
    let n = alg.dim() as f64;
    let t2 = tau.im;
    let e = eta(alg, &(h.gradient(y) * t2))?;
    Ok(t2.powf(n / 2.0) * e * h.hessian(y).determinant().sqrt())
}

/// `det(1 + sigma_2 g(ad_u) F H^{-1})^{-1/2}` with `g(z) = z e^{i tau_2 z}/sin(tau_2 z)`.
pub fn density_ratio(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    y: &RVec,
) -> Result<f64> {
    let s2 = params.sigma.im;
    if s2 == 0.0 {
        return Ok(1.0);
    }
    let n = alg.dim();
    let g = function_of_ad(&alg.ad(&h.gradient(y)), &ScalarFunction::z_exp_over_sin(params.tau.im))?;
    let hinv = h
        .hessian(y)
        .try_inverse()
        .ok_or_else(|| Error::Numeric("Hessian singular".into()))?;
    let m = CMat::identity(n, n) + g * complexify(&(f.matrix() * hinv)) * C64::new(s2, 0.0);
    let d = m.determinant();
    if d.re <= 0.0 || d.im.abs() > 1e-8 * d.re {
        return Err(Error::Numeric(format!("density ratio determinant not positive: {d}")));
    }
    Ok(d.re.powf(-0.5))
}

/// Closed-form density `|sqrt(Omega_{tau,sigma})|^2 / (omega^n/n!)`.
pub fn density(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    y: &RVec,
) -> Result<f64> {
    Ok(density_tau_zero(alg, h, params.tau, y)? * density_ratio(alg, h, f, params, y)?)
}

/// Real Jacobian of `(x, y) -> x e^{tau u(y)}` in left trivializations, stacked `[Re; Im]`.
pub fn complexifier_jacobian(alg: &LieAlgebra, h: &Complexifier, tau: C64, y: &RVec) -> Result<RMat> {
    let n = alg.dim();
    let u = h.gradient(y);
    let ad = alg.ad(&u);
    let k1 = function_of_ad(&ad, &ScalarFunction::exp(-tau))?;
    let k2 = function_of_ad(&ad, &ScalarFunction::one_minus_exp_over_z(-tau))? * complexify(&h.hessian(y));
    let mut j = RMat::zeros(2 * n, 2 * n);
    for a in 0..n {
        for b in 0..n {
            j[(a, b)] = k1[(a, b)].re;
            j[(n + a, b)] = k1[(a, b)].im;
            j[(a, n + b)] = k2[(a, b)].re;
            j[(n + a, n + b)] = k2[(a, b)].im;
        }
    }
    Ok(j)
}

/// Frame `Z = R^{-1} (1/2)[I; -iI]` where `R` is the real Jacobian of `psi_tau o alpha_h o phi_f^s`
/// continued from real `s` to `conj(sigma)`; its columns span `P_{tau,sigma}` and `Omega(Z) = 1`.
pub fn holomorphic_frame(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    y: &RVec,
) -> Result<CMat> {
    let n = alg.dim();
    let sb = params.sigma.conj();
    let jh = complexify(&complexifier_jacobian(alg, h, params.tau, y)?);
    let e = function_of_ad(&alg.ad(&f.apply(y)), &ScalarFunction::exp(-sb))?;
    let fm = complexify(f.matrix());
    let mut left = CMat::zeros(2 * n, 2 * n);
    left.view_mut((0, 0), (n, n)).copy_from(&e);
    left.view_mut((n, n), (n, n)).copy_from(&e);
    let mut right = CMat::identity(2 * n, 2 * n);
    right.view_mut((0, n), (n, n)).copy_from(&(&fm * sb));
    right
        .view_mut((n, n), (n, n))
        .copy_from(&(CMat::identity(n, n) + complexify(&alg.ad(y)) * &fm * sb));
    let r = left * jh * right;
    let mut rhs = CMat::zeros(2 * n, n);
    for k in 0..n {
        rhs[(k, k)] = C64::new(0.5, 0.0);
        rhs[(n + k, k)] = C64::new(0.0, -0.5);
    }
    r.lu().solve(&rhs).ok_or_else(|| Error::Numeric("continued Jacobian is singular".into()))
}

/// Density `(1 / ((2i)^n det[conj(Z), Z]))^{1/2}` from the holomorphic frame.
pub fn density_frame_oracle(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    y: &RVec,
) -> Result<C64> {
    let n = alg.dim();
    let z = holomorphic_frame(alg, h, f, params, y)?;
    let mut m = CMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (2 * n, n)).copy_from(&z.map(|c| c.conj()));
    m.view_mut((0, n), (2 * n, n)).copy_from(&z);
    Ok((C64::new(0.0, 2.0).powu(n as u32) * m.determinant()).inv().sqrt())
}

/// Largest distance of a holomorphic-frame column from the span of the polarization frame.
pub fn holomorphic_frame_span_residual(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    y: &RVec,
) -> Result<f64> {
    let z = holomorphic_frame(alg, h, f, params, y)?;
    let e = build_frame(alg, h, f, params, y)?.stacked();
    Ok((0..z.ncols())
        .map(|k| {
            let c = z.column(k).into_owned();
            span_residual(&e, &c) / c.norm()
        })
        .fold(0.0, f64::max))
}

/// `pi^{-r/2} sigma_2^{r/2} (det F)^{1/2}`, the torus-fiber density of the mixed half-form.
pub fn partial_density(alg: &LieAlgebra, f: &TorusForm, sigma: C64) -> Result<f64> {
    if !(sigma.im > 0.0) {
        return domain("partial density needs Im sigma > 0");
    }
    let r = alg.rank() as f64;
    Ok(std::f64::consts::PI.powf(-r / 2.0) * sigma.im.powf(r / 2.0) * f.det().sqrt())
}

/// Exponential envelope `log d <= c0 + c1 |y|`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GrowthFit {
    pub c0: f64,
    pub c1: f64,
    /// Largest excess of `log d - c0 - c1|y|` over all samples; non-positive by construction.
    pub excess: f64,
}

/// Fits the envelope to `(|y|, log d)` samples: `c1` is the slope of the binned maxima over the
/// outer half of the radial range and `c0` the smallest intercept bounding every sample.
pub fn growth_fit(samples: &[(f64, f64)], bins: usize) -> Result<GrowthFit> {
    let rmax = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    if samples.len() < 2 * bins || bins < 4 || rmax <= 0.0 {
        return domain("not enough samples for the growth fit");
    }
    let mut top = vec![(0.0, f64::NEG_INFINITY); bins];
    for &(r, l) in samples {
        let b = ((r / rmax * bins as f64) as usize).min(bins - 1);
        if l > top[b].1 {
            top[b] = (r, l);
        }
    }
    let outer: Vec<(f64, f64)> = top[bins / 2..].iter().copied().filter(|t| t.1.is_finite()).collect();
    let m = outer.len() as f64;
    let (mr, ml) = (outer.iter().map(|t| t.0).sum::<f64>() / m, outer.iter().map(|t| t.1).sum::<f64>() / m);
    let cov: f64 = outer.iter().map(|t| (t.0 - mr) * (t.1 - ml)).sum();
    let var: f64 = outer.iter().map(|t| (t.0 - mr).powi(2)).sum();
    let c1 = (cov / var).max(1e-6);
    let c0 = samples.iter().map(|(r, l)| l - c1 * r).fold(f64::NEG_INFINITY, f64::max).max(1e-12);
    let excess = samples.iter().map(|(r, l)| l - c0 - c1 * r).fold(f64::NEG_INFINITY, f64::max);
    Ok(GrowthFit { c0, c1, excess })
}
