//! Symplectic structure of `T*K`, the Kähler polarizations `P_{tau,sigma}` with their
//! metric and potential, and the mixed polarizations `P_{0,sigma}` with their leaves.

use crate::complexifier::{Complexifier, TorusForm};
use crate::error::{domain, Error, Result};
use crate::flows::{Component, LeftInvariantField, left_invariant_bracket};
use crate::lie::{function_of_ad, GroupPoint, LieAlgebra, PhasePoint, ScalarFunction};
use crate::{complexify, CMat, CVec, RMat, RVec, TimeParams, C64, I};

/// Matrix of `omega((U,V),(W,Z)) = <U,Z> - <V,W> + <y,[U,W]>` in left trivialization.
pub fn omega_matrix(alg: &LieAlgebra, y: &RVec) -> RMat {
    let n = alg.dim();
    let mut m = RMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&(-alg.ad(y)));
    m.view_mut((0, n), (n, n)).copy_from(&RMat::identity(n, n));
    m.view_mut((n, 0), (n, n)).copy_from(&(-RMat::identity(n, n)));
    m
}

/// `omega` extended complex-bilinearly.
pub fn symplectic_form(alg: &LieAlgebra, y: &RVec, v1: &CVec, v2: &CVec) -> C64 {
    (v1.transpose() * complexify(&omega_matrix(alg, y)) * v2)[(0, 0)]
}

/// `theta(U, V) = <y, U>`.
pub fn theta_form(y: &RVec, v: &CVec) -> C64 {
    (0..y.len()).map(|i| v[i] * y[i]).sum()
}

/// `-d theta(a, b)` at `(x, y)` computed in the chart `(xi, eta) -> (x e^xi, y + eta)` by nested
/// central differences of the pulled-back one-form.
pub fn minus_dtheta_chart(alg: &LieAlgebra, p: &PhasePoint, a: &RVec, b: &RVec) -> f64 {
    let n = alg.dim();
    let pulled = |q: &RVec, w: &RVec| -> f64 {
        let xi = q.rows(0, n).into_owned();
        let eta = q.rows(n, n).into_owned();
        let wx = w.rows(0, n).into_owned();
        let e = 1e-6;
        let g0 = &p.x.0 * alg.exp(&xi).0;
        let gp = &p.x.0 * alg.exp(&(&xi + &wx * e)).0;
        let gm = &p.x.0 * alg.exp(&(&xi - &wx * e)).0;
        let u = crate::lie::left_derivative(alg, &g0, &gp, &gm, e).map(|z| z.re);
        (&p.y + eta).dot(&u)
    };
    let h = 1e-4;
    let deriv = |dir: &RVec, w: &RVec| (pulled(&(dir * h), w) - pulled(&(dir * -h), w)) / (2.0 * h);
    -(deriv(a, b) - deriv(b, a))
}

/// Solves `omega(X, .) = dg` for the Hamiltonian field of a left-invariant `g` given its gradient in `y`.
pub fn hamiltonian_field_oracle(alg: &LieAlgebra, y: &RVec, grad: &RVec) -> Result<RVec> {
    let n = alg.dim();
    let rhs = RVec::from_fn(2 * n, |i, _| if i < n { 0.0 } else { grad[i - n] });
    omega_matrix(alg, y)
        .transpose()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numeric("symplectic matrix singular".into()))
}

/// Complex frame `E_j = (M T_j, N T_j)` of `P_{tau,sigma}` at `(x, y)`.
#[derive(Clone, Debug)]
pub struct PolarizationFrame {
    pub m: CMat,
    pub n: CMat,
}

impl PolarizationFrame {
    /// Columns `E_j` stacked as a `2n x n` matrix.
    pub fn stacked(&self) -> CMat {
        let n = self.m.nrows();
        let mut s = CMat::zeros(2 * n, self.m.ncols());
        s.view_mut((0, 0), (n, self.m.ncols())).copy_from(&self.m);
        s.view_mut((n, 0), (n, self.m.ncols())).copy_from(&self.n);
        s
    }

    pub fn column(&self, j: usize) -> CVec {
        self.stacked().column(j).into_owned()
    }
}

fn exp_ad(alg: &LieAlgebra, a: &RVec, c: C64) -> Result<CMat> {
    function_of_ad(&alg.ad(a), &ScalarFunction::exp(c))
}

/// `M = (1 - e^{conj(tau) ad_u})/ad_u H e^{conj(sigma) ad_{Fy}} - conj(sigma) F`,
/// `N = e^{conj(sigma) ad_{Fy}} - conj(sigma) ad_y F`.
pub fn build_frame(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    y: &RVec,
) -> Result<PolarizationFrame> {
    let (tb, sb) = (params.tau.conj(), params.sigma.conj());
    let u = h.gradient(y);
    let es = exp_ad(alg, &f.apply(y), sb)?;
    let phi = function_of_ad(&alg.ad(&u), &ScalarFunction::one_minus_exp_over_z(tb))?;
    let fm = complexify(f.matrix());
    let m = phi * complexify(&h.hessian(y)) * &es - &fm * sb;
    let n = es - complexify(&alg.ad(y)) * fm * sb;
    Ok(PolarizationFrame { m, n })
}

/// `max |omega(E_j, E_k)|`, divided by `max(1, max |E|^2)`.
pub fn isotropy_residual(alg: &LieAlgebra, y: &RVec, frame: &CMat) -> f64 {
    let scale = frame.camax().powi(2).max(1.0);
    (frame.transpose() * complexify(&omega_matrix(alg, y)) * frame).map(|z| z.norm()).max() / scale
}

pub fn numerical_rank(m: &CMat, tol: f64) -> usize {
    let sv = m.clone().singular_values();
    let top = sv.max();
    sv.iter().filter(|s| **s > tol * top.max(1e-300)).count()
}

/// Distance of `v` from the column span of `frame`.
pub fn span_residual(frame: &CMat, v: &CVec) -> f64 {
    let svd = frame.clone().svd(true, false);
    let u = svd.u.expect("u computed");
    let top = svd.singular_values.max();
    let mut r = v.clone();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s > 1e-12 * top {
            let col = u.column(k);
            let c = col.dotc(v);
            r -= col * c;
        }
    }
    r.norm()
}

/// Closed form `W = e^{-conj(sigma) ad_{Fy}} (i (1 - e^{2 i tau_2 ad_u})/ad_u H) e^{sigma ad_{Fy}} + 2 sigma_2 F`.
pub fn kahler_metric_w(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    y: &RVec,
) -> Result<CMat> {
    let (t2, s2) = (params.tau.im, params.sigma.im);
    let fy = f.apply(y);
    let u = h.gradient(y);
    let core = function_of_ad(
        &alg.ad(&u),
        &ScalarFunction::one_minus_exp_over_z(C64::new(0.0, 2.0 * t2)).scale(I),
    )? * complexify(&h.hessian(y));
    Ok(exp_ad(alg, &fy, -params.sigma.conj())? * core * exp_ad(alg, &fy, params.sigma)?
        + complexify(f.matrix()) * C64::new(2.0 * s2, 0.0))
}

/// `W[j][k] = i omega(conj(E_k), E_j)` assembled from a frame.
pub fn metric_from_frame(alg: &LieAlgebra, y: &RVec, frame: &CMat) -> CMat {
    (frame.adjoint() * complexify(&omega_matrix(alg, y)) * frame * I).transpose()
}

/// `max |W - W^H|`, divided by `max(1, max |W|)`.
pub fn hermitian_residual(w: &CMat) -> f64 {
    (w - w.adjoint()).camax() / w.camax().max(1.0)
}

pub fn min_eigenvalue(w: &CMat) -> f64 {
    let herm = (w + w.adjoint()) * C64::new(0.5, 0.0);
    herm.symmetric_eigenvalues().min()
}

/// `kappa = 2 tau_2 (<y,u> - h) + 2 sigma_2 f`.
pub fn kahler_potential(h: &Complexifier, f: &TorusForm, params: &TimeParams, y: &RVec) -> f64 {
    2.0 * params.tau.im * h.legendre_dual(y) + 2.0 * params.sigma.im * f.value(y)
}

/// `lambda_{tau,sigma} = -tau (<y,u> - h) - sigma f`; `theta = d conj(lambda)` on the frame.
pub fn lambda(h: &Complexifier, f: &TorusForm, params: &TimeParams, y: &RVec) -> C64 {
    -params.tau * h.legendre_dual(y) - params.sigma * f.value(y)
}

/// `max_j |theta(E_j) - d conj(lambda)(E_j)|` with the derivative by central differences.
pub fn potential_residual(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    y: &RVec,
) -> Result<f64> {
    let frame = build_frame(alg, h, f, params, y)?.stacked();
    let n = alg.dim();
    let eps = 1e-5;
    let grad = RVec::from_fn(n, |k, _| {
        let mut e = RVec::zeros(n);
        e[k] = eps;
        let lb = |z: &RVec| lambda(h, f, params, z).conj();
        ((lb(&(y + &e)) - lb(&(y - &e))) / (2.0 * eps)).re
    });
    let grad_im = RVec::from_fn(n, |k, _| {
        let mut e = RVec::zeros(n);
        e[k] = eps;
        let lb = |z: &RVec| lambda(h, f, params, z).conj();
        ((lb(&(y + &e)) - lb(&(y - &e))) / (2.0 * eps)).im
    });
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let e = frame.column(j).into_owned();
        let theta = theta_form(y, &e);
        let dl: C64 = (0..n).map(|k| e[n + k] * C64::new(grad[k], grad_im[k])).sum();
        worst = worst.max((theta - dl).norm());
    }
    Ok(worst)
}

/// Frame columns of `P_{tau,sigma}` as `y`-dependent left-invariant fields.
pub fn frame_fields(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
) -> Vec<LeftInvariantField> {
    (0..alg.dim())
        .map(|j| {
            let (a1, h1, f1, p1) = (alg.clone(), h.clone(), f.clone(), *params);
            let (a2, h2, f2, p2) = (alg.clone(), h.clone(), f.clone(), *params);
            LeftInvariantField::new(
                Component::function(move |y| build_frame(&a1, &h1, &f1, &p1, y).expect("frame").m.column(j).into_owned()),
                Component::function(move |y| build_frame(&a2, &h2, &f2, &p2, y).expect("frame").n.column(j).into_owned()),
            )
        })
        .collect()
}

/// Largest distance of `[E_j, E_k]` from the span of the frame at `y`.
pub fn involutivity_residual(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    y: &RVec,
) -> Result<f64> {
    let fields = frame_fields(alg, h, f, params);
    let frame = build_frame(alg, h, f, params, y)?.stacked();
    let mut worst: f64 = 0.0;
    for j in 0..fields.len() {
        for k in j + 1..fields.len() {
            let (u, v) = left_invariant_bracket(alg, &fields[j], &fields[k], y);
            let w = CVec::from_fn(2 * alg.dim(), |i, _| if i < alg.dim() { u[i] } else { v[i - alg.dim()] });
            worst = worst.max(span_residual(&frame, &w));
        }
    }
    Ok(worst)
}

/// Columns `(-conj(sigma) F T_c, T_c)` spanning `P^t` for each Cartan direction.
pub fn torus_frame(alg: &LieAlgebra, f: &TorusForm, sigma: C64) -> CMat {
    let n = alg.dim();
    let mut m = CMat::zeros(2 * n, alg.rank());
    for k in 0..alg.rank() {
        let e = alg.cartan_direction(k);
        let fe = f.apply(&e);
        for i in 0..n {
            m[(i, k)] = -sigma.conj() * fe[i];
            m[(n + i, k)] = C64::new(e[i], 0.0);
        }
    }
    m
}

/// Columns `(0, T_j)` for the basis directions orthogonal to the Cartan subalgebra.
pub fn perp_frame(alg: &LieAlgebra) -> CMat {
    let n = alg.dim();
    let idx: Vec<usize> = (0..n).filter(|j| !alg.cartan().contains(j)).collect();
    let mut m = CMat::zeros(2 * n, idx.len());
    for (c, &j) in idx.iter().enumerate() {
        m[(n + j, c)] = C64::new(1.0, 0.0);
    }
    m
}

/// Invariants of the mixed polarization `P_{0,sigma} = P^t + (t_perp)_C`.
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct MixedReport {
    pub torus_transversality: f64,
    pub real_part_dimension: usize,
    pub real_part_residual: f64,
    pub leaf_tangency: f64,
    pub leaf_isotropy: f64,
    pub leaf_positivity: f64,
    pub leaf_potential: f64,
    pub frame_isotropy: f64,
    pub frame_match: f64,
    pub involutivity: f64,
}

pub fn mixed_report(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    sigma: C64,
    y: &RVec,
) -> Result<MixedReport> {
    if !(sigma.im > 0.0) {
        return domain("mixed polarization needs Im sigma > 0");
    }
    let n = alg.dim();
    let r = alg.rank();
    let pt = torus_frame(alg, f, sigma);
    let perp = perp_frame(alg);
    let mut p = CMat::zeros(2 * n, n);
    p.view_mut((0, 0), (2 * n, r)).copy_from(&pt);
    p.view_mut((0, r), (2 * n, n - r)).copy_from(&perp);
    let mut both = CMat::zeros(2 * n, 2 * r);
    both.view_mut((0, 0), (2 * n, r)).copy_from(&pt);
    both.view_mut((0, r), (2 * n, r)).copy_from(&pt.map(|z| z.conj()));
    let sv = both.clone().singular_values();
    let mut rep = MixedReport { torus_transversality: sv.min(), ..Default::default() };

    let mut pp = CMat::zeros(2 * n, 2 * n);
    pp.view_mut((0, 0), (2 * n, n)).copy_from(&p);
    pp.view_mut((0, n), (2 * n, n)).copy_from(&p.map(|z| z.conj()));
    rep.real_part_dimension = 2 * n - numerical_rank(&pp, 1e-10);
    rep.real_part_residual = (0..perp.ncols())
        .map(|j| {
            let v = perp.column(j).into_owned();
            span_residual(&p, &v).max(span_residual(&p.map(|z| z.conj()), &v))
        })
        .fold(0.0, f64::max);

    let mut leaf = CMat::zeros(2 * n, 2 * r);
    for k in 0..r {
        let e = alg.cartan_direction(k);
        for i in 0..n {
            leaf[(i, k)] = C64::new(e[i], 0.0);
            leaf[(n + i, r + k)] = C64::new(e[i], 0.0);
        }
    }
    rep.leaf_tangency = (0..r)
        .flat_map(|k| {
            let c = pt.column(k).into_owned();
            [c.map(|z| C64::new(z.re, 0.0)), c.map(|z| C64::new(z.im, 0.0))]
        })
        .map(|v| span_residual(&leaf, &v))
        .fold(0.0, f64::max);
    rep.leaf_isotropy = isotropy_residual(alg, y, &pt);
    let w = metric_from_frame(alg, y, &pt);
    rep.leaf_positivity = min_eigenvalue(&w);
    rep.leaf_potential = (0..r)
        .map(|k| {
            let e = pt.column(k).into_owned();
            let fy = f.apply(y);
            let dl: C64 = (0..n).map(|i| e[n + i] * (-sigma.conj() * fy[i])).sum();
            (theta_form(y, &e) - dl).norm()
        })
        .fold(0.0, f64::max);
    let params = TimeParams::mixed(sigma)?;
    let frame = build_frame(alg, h, f, &params, y)?.stacked();
    rep.frame_isotropy = isotropy_residual(alg, y, &frame);
    rep.frame_match = (0..n)
        .map(|j| span_residual(&p, &frame.column(j).into_owned()))
        .fold(0.0, f64::max);
    rep.involutivity = involutivity_residual(alg, h, f, &params, y)?;
    Ok(rep)
}

/// Leaf `{x0 t} x {y0 + t}` of the real torus-orbit foliation through `(x0, y0)`.
#[derive(Clone, Debug)]
pub struct Leaf {
    pub x0: GroupPoint,
    pub y0: RVec,
}

/// Coordinates `theta` of a torus element `t = exp(sum theta_c T_c)`, principal branch.
pub fn torus_log(alg: &LieAlgebra, t: &CMat) -> Result<RVec> {
    let s = alg.matrix_size();
    let mut gen = CMat::zeros(s, s);
    for k in 0..alg.rank() {
        gen += &alg.basis()[alg.cartan()[k]] * C64::new(1.0 + 0.618 * k as f64, 0.0);
    }
    let herm = &gen * I;
    let eig = nalgebra::SymmetricEigen::new(herm);
    let v = eig.eigenvectors;
    let d = v.adjoint() * t * &v;
    let offdiag = (0..s).flat_map(|i| (0..s).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| d[(i, j)].norm()).fold(0.0, f64::max);
    if offdiag > 1e-8 {
        return domain("element is not in the maximal torus");
    }
    let logd = CMat::from_diagonal(&CVec::from_fn(s, |i, _| I * d[(i, i)].arg()));
    let x = &v * logd * v.adjoint();
    let coords = alg.coords(&x);
    let theta = RVec::from_fn(alg.rank(), |k, _| coords[alg.cartan()[k]]);
    let mut full = RVec::zeros(alg.dim());
    for k in 0..alg.rank() {
        full[alg.cartan()[k]] = theta[k];
    }
    if (alg.exp(&full).0 - t).norm() > 1e-8 {
        return Err(Error::Numeric("torus logarithm left the Cartan subalgebra".into()));
    }
    Ok(theta)
}

/// Holomorphic leaf coordinates `z = theta + sigma F a` of `(x0 e^theta, y0 + a)`.
pub fn leaf_coordinates(alg: &LieAlgebra, f: &TorusForm, sigma: C64, leaf: &Leaf, p: &PhasePoint) -> Result<CVec> {
    let a = &p.y - &leaf.y0;
    if !alg.in_cartan(&a, 1e-10) {
        return domain("point is not on the leaf: fiber offset leaves the Cartan subalgebra");
    }
    let inv = leaf.x0.0.adjoint();
    let theta = torus_log(alg, &(inv * &p.x.0))?;
    let fa = f.apply(&a);
    Ok(CVec::from_fn(alg.rank(), |k, _| C64::new(theta[k], 0.0) + sigma * fa[alg.cartan()[k]]))
}

/// Real Jacobian of the leaf coordinates with respect to `(theta, a)`, by central differences.
pub fn leaf_jacobian_fd(alg: &LieAlgebra, f: &TorusForm, sigma: C64, leaf: &Leaf, p: &PhasePoint) -> Result<RMat> {
    let r = alg.rank();
    let eps = 1e-4;
    let mut m = RMat::zeros(2 * r, 2 * r);
    for k in 0..2 * r {
        let e = alg.cartan_direction(k % r) * eps;
        let shift = |sgn: f64| {
            if k < r {
                PhasePoint::new(GroupPoint(&p.x.0 * alg.exp(&(&e * sgn)).0), p.y.clone())
            } else {
                PhasePoint::new(p.x.clone(), &p.y + &e * sgn)
            }
        };
        let d = (leaf_coordinates(alg, f, sigma, leaf, &shift(1.0))? - leaf_coordinates(alg, f, sigma, leaf, &shift(-1.0))?)
            / C64::new(2.0 * eps, 0.0);
        for i in 0..r {
            m[(i, k)] = d[i].re;
            m[(r + i, k)] = d[i].im;
        }
    }
    Ok(m)
}

/// `max_j |J D beta(E_j) - i D beta(E_j)|` for the torus frame, `J` the standard structure in `(Re z, Im z)`.
pub fn leaf_eigen_residual(alg: &LieAlgebra, f: &TorusForm, sigma: C64, leaf: &Leaf, p: &PhasePoint) -> Result<f64> {
    let r = alg.rank();
    let db = complexify(&leaf_jacobian_fd(alg, f, sigma, leaf, p)?);
    let mut j = CMat::zeros(2 * r, 2 * r);
    for k in 0..r {
        j[(r + k, k)] = C64::new(1.0, 0.0);
        j[(k, r + k)] = C64::new(-1.0, 0.0);
    }
    let pt = torus_frame(alg, f, sigma);
    let n = alg.dim();
    let mut worst: f64 = 0.0;
    for k in 0..r {
        let v = CVec::from_fn(2 * r, |i, _| {
            let c = alg.cartan()[i % r];
            if i < r { pt[(c, k)] } else { pt[(n + c, k)] }
        });
        let w = &db * v;
        worst = worst.max((&j * &w - &w * I).norm() / w.norm());
    }
    Ok(worst)
}

fn pfaffian(m: &CMat) -> C64 {
    let n = m.nrows();
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    let mut acc = C64::new(0.0, 0.0);
    for j in 1..n {
        let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
        let sub = CMat::from_fn(n - 2, n - 2, |a, b| m[(keep[a], keep[b])]);
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        acc += m[(0, j)] * pfaffian(&sub) * sign;
    }
    acc
}

/// Checks of the restricted symplectic form on a torus leaf against its holomorphic expression.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LeafVolume {
    pub pair_residual: f64,
    pub top_residual: f64,
    pub top_value: C64,
    /// Coefficient matrix `(i / 2 sigma_2) F^{-1}` of `dz^j ^ dz-bar^k`.
    pub coefficient: Vec<C64>,
}

pub fn leaf_volume_check(alg: &LieAlgebra, f: &TorusForm, sigma: C64, y: &RVec) -> Result<LeafVolume> {
    if !(sigma.im > 0.0) {
        return domain("leaf volume needs Im sigma > 0");
    }
    let n = alg.dim();
    let r = alg.rank();
    let finv = f.torus_matrix().clone().try_inverse().ok_or_else(|| Error::Numeric("F singular".into()))?;
    let coef = complexify(&finv) * (I / (2.0 * sigma.im));
    let basis: Vec<CVec> = (0..2 * r)
        .map(|k| {
            let e = alg.cartan_direction(k % r);
            CVec::from_fn(2 * n, |i, _| {
                let in_top = i < n;
                let val = if in_top { e[i] } else { e[i - n] };
                if (k < r) == in_top { C64::new(val, 0.0) } else { C64::new(0.0, 0.0) }
            })
        })
        .collect();
    let ft = complexify(f.torus_matrix());
    let dz = |v: &CVec| -> CVec {
        let ut = CVec::from_fn(r, |k, _| v[alg.cartan()[k]]);
        let vt = CVec::from_fn(r, |k, _| v[n + alg.cartan()[k]]);
        ut + &ft * vt * sigma
    };
    let dzb = |v: &CVec| -> CVec {
        let ut = CVec::from_fn(r, |k, _| v[alg.cartan()[k]]);
        let vt = CVec::from_fn(r, |k, _| v[n + alg.cartan()[k]]);
        ut + &ft * vt * sigma.conj()
    };
    let mut restricted = CMat::zeros(2 * r, 2 * r);
    let mut pair_residual: f64 = 0.0;
    for a in 0..2 * r {
        for b in 0..2 * r {
            let om = symplectic_form(alg, y, &basis[a], &basis[b]);
            restricted[(a, b)] = om;
            let (za, zb, wa, wb) = (dz(&basis[a]), dz(&basis[b]), dzb(&basis[a]), dzb(&basis[b]));
            let mut rhs = C64::new(0.0, 0.0);
            for j in 0..r {
                for k in 0..r {
                    rhs += coef[(j, k)] * (za[j] * wb[k] - zb[j] * wa[k]);
                }
            }
            pair_residual = pair_residual.max((om - rhs).norm());
        }
    }
    let top = pfaffian(&restricted);
    let mut forms = CMat::zeros(2 * r, 2 * r);
    for (c, v) in basis.iter().enumerate() {
        let (z, w) = (dz(v), dzb(v));
        for j in 0..r {
            forms[(j, c)] = z[j];
            forms[(r + j, c)] = w[j];
        }
    }
    let sign = if (r * r.saturating_sub(1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let rhs_top = (I / (2.0 * sigma.im)).powu(r as u32) / f.det() * forms.determinant() * sign;
    Ok(LeafVolume {
        pair_residual,
        top_residual: (top - rhs_top).norm(),
        top_value: top,
        coefficient: coef.iter().copied().collect(),
    })
}
