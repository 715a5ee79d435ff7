//! Quadrature rules: Haar measure on `SU(2)`, Gauss–Hermite on the Cartan subalgebra with
//! the mixed Gaussian absorbed, and a spherical product rule on `su(2)`.

use crate::complexifier::TorusForm;
use crate::error::{domain, Result};
use crate::lie::{GroupPoint, LieAlgebra};
use crate::{RMat, RVec};
use nalgebra::SymmetricEigen;
use std::f64::consts::PI;

/// Golub–Welsch nodes for a symmetric Jacobi matrix with `mu0 = int w`, refined by Newton
/// steps on the recurrence; weights from the Christoffel sum, rescaled to avoid overflow.
fn golub_welsch(diag: &[f64], off: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut j = RMat::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = diag[i];
        if i + 1 < n {
            j[(i, i + 1)] = off[i];
            j[(i + 1, i)] = off[i];
        }
    }
    let mut x: Vec<f64> = SymmetricEigen::new(j).eigenvalues.iter().copied().collect();
    x.sort_by(f64::total_cmp);
    // orthonormal recurrence: b_{k+1} p_{k+1} = (x - a_k) p_k - b_k p_{k-1}, b_n = 1
    let b = |k: usize| if k == 0 { 0.0 } else if k < n { off[k - 1] } else { 1.0 };
    let eval = |t: f64| -> (f64, f64, f64) {
        let (mut p0, mut p1) = (0.0, 1.0);
        let (mut d0, mut d1) = (0.0, 0.0);
        let mut sum = 1.0;
        let mut log_scale = 0.0;
        for (k, &a) in diag.iter().enumerate() {
            let p2 = ((t - a) * p1 - b(k) * p0) / b(k + 1);
            let d2 = (p1 + (t - a) * d1 - b(k) * d0) / b(k + 1);
            if k + 1 < n {
                sum += p2 * p2;
            }
            p0 = p1;
            p1 = p2;
            d0 = d1;
            d1 = d2;
            if p1.abs() > 1e100 {
                p0 *= 1e-100;
                p1 *= 1e-100;
                d0 *= 1e-100;
                d1 *= 1e-100;
                sum *= 1e-200;
                log_scale += 200.0 * std::f64::consts::LN_10;
            }
        }
        (p1 / d1, sum, log_scale)
    };
    let mut w = vec![0.0; n];
    for i in 0..n {
        for _ in 0..3 {
            let (step, _, _) = eval(x[i]);
            if step.is_finite() {
                x[i] -= step;
            }
        }
        let (_, sum, log_scale) = eval(x[i]);
        w[i] = mu0 * (-(sum.ln() + log_scale)).exp();
    }
    (x, w)
}

/// Gauss–Legendre on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let off: Vec<f64> = (1..n).map(|k| k as f64 / ((4 * k * k - 1) as f64).sqrt()).collect();
    golub_welsch(&vec![0.0; n], &off, 2.0)
}

/// Gauss–Hermite for the weight `e^{-u^2}` on the real line.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    golub_welsch(&vec![0.0; n], &off, PI.sqrt())
}

/// Weighted nodes on the group.
#[derive(Clone, Debug)]
pub struct GroupRule {
    pub nodes: Vec<(GroupPoint, f64)>,
}

/// Euler-angle product rule for normalized Haar measure on `SU(2)` that integrates every
/// matrix element of spin at most `band` exactly.
pub fn haar_su2(alg: &LieAlgebra, band: f64) -> GroupRule {
    let j = band.floor() as usize;
    let na = j + 2;
    let ng = (2.0 * band).floor() as usize + 2;
    let nb = (j + 1).div_ceil(2) + 1;
    let (cb, wb) = gauss_legendre(nb);
    let e3 = RVec::from_column_slice(&[0.0, 0.0, 1.0]);
    let e2 = RVec::from_column_slice(&[0.0, 1.0, 0.0]);
    let mut nodes = Vec::with_capacity(na * nb * ng);
    for ia in 0..na {
        let a = 2.0 * PI * ia as f64 / na as f64;
        let ga = alg.exp(&(&e3 * a)).0;
        for ib in 0..nb {
            let gb = &ga * alg.exp(&(&e2 * cb[ib].acos())).0;
            for ig in 0..ng {
                let g = 4.0 * PI * ig as f64 / ng as f64;
                let w = wb[ib] / (2.0 * na as f64 * ng as f64);
                nodes.push((GroupPoint(&gb * alg.exp(&(&e3 * g)).0), w));
            }
        }
    }
    GroupRule { nodes }
}

/// Nodes `y` in the Cartan subalgebra and weights with `sum w g(y) ~ int g(y) e^{-s2 <y,Fy>} dy`.
#[derive(Clone, Debug)]
pub struct TorusGaussRule {
    pub nodes: Vec<(RVec, f64)>,
}

pub fn gauss_on_torus(alg: &LieAlgebra, f: &TorusForm, sigma2: f64, order: usize) -> Result<TorusGaussRule> {
    if !(sigma2 > 0.0) {
        return domain("Gaussian rule needs sigma_2 > 0");
    }
    let r = alg.rank();
    let eig = SymmetricEigen::new(f.torus_matrix().clone());
    let scale = RMat::from_fn(r, r, |a, b| eig.eigenvectors[(a, b)] / (eig.eigenvalues[b] * sigma2).sqrt());
    let jac = scale.determinant().abs();
    let (u, w) = gauss_hermite(order);
    let mut nodes = Vec::with_capacity(order.pow(r as u32));
    let mut idx = vec![0usize; r];
    loop {
        let uu = RVec::from_fn(r, |k, _| u[idx[k]]);
        let yt = &scale * uu;
        let mut y = RVec::zeros(alg.dim());
        for k in 0..r {
            y[alg.cartan()[k]] = yt[k];
        }
        let wt: f64 = idx.iter().map(|&i| w[i]).product();
        nodes.push((y, wt * jac));
        let mut k = 0;
        while k < r {
            idx[k] += 1;
            if idx[k] < order {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == r {
            break;
        }
    }
    Ok(TorusGaussRule { nodes })
}

/// Product rule for Lebesgue measure on the ball of radius `radius` in `R^3`.
#[derive(Clone, Debug)]
pub struct SphericalRule {
    pub nodes: Vec<(RVec, f64)>,
}

pub fn spherical(radius: f64, radial: usize, polar: usize, azimuth: usize) -> SphericalRule {
    let (xr, wr) = gauss_legendre(radial);
    let (xc, wc) = gauss_legendre(polar);
    let mut nodes = Vec::with_capacity(radial * polar * azimuth);
    for (r0, w0) in xr.iter().zip(&wr) {
        let r = 0.5 * radius * (r0 + 1.0);
        let wrad = 0.5 * radius * w0 * r * r;
        for (c, w1) in xc.iter().zip(&wc) {
            let s = (1.0 - c * c).sqrt();
            for k in 0..azimuth {
                let phi = 2.0 * PI * k as f64 / azimuth as f64;
                let y = RVec::from_column_slice(&[r * s * phi.cos(), r * s * phi.sin(), r * c]);
                nodes.push((y, wrad * w1 * 2.0 * PI / azimuth as f64));
            }
        }
    }
    SphericalRule { nodes }
}
