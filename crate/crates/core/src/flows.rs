//! The commuting Hamiltonian flows of `h(y)` and `f(y)` on `T*K`, their tangent
//! maps, the Lie bracket of left-invariantly written vector fields and the
//! Lie-series pushforwards.

use crate::complexifier::{Complexifier, TorusForm};
use crate::error::{domain, Error, Result};
use crate::lie::{function_of_ad, left_derivative, GroupPoint, LieAlgebra, PhasePoint, ScalarFunction};
use crate::{complexify, sampling, CMat, CVec, RMat, RVec, TimeParams, C64};
use std::sync::Arc;

/// Left-trivialized tangent vector `(U, V)` at `(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub u: RVec,
    pub v: RVec,
}

impl TangentVector {
    pub fn stacked(&self) -> RVec {
        let n = self.u.len();
        RVec::from_fn(2 * n, |i, _| if i < n { self.u[i] } else { self.v[i - n] })
    }

    pub fn from_stacked(w: &RVec) -> Self {
        let n = w.len() / 2;
        Self { u: w.rows(0, n).into_owned(), v: w.rows(n, n).into_owned() }
    }
}

/// `X_g = (u_g(y), [y, u_g(y)])` for a left-invariant function with gradient `u_g`.
pub fn hamiltonian_field(alg: &LieAlgebra, y: &RVec, u: &RVec) -> TangentVector {
    TangentVector { u: u.clone(), v: alg.bracket(y, u) }
}

/// `phi_h^t(x, y) = (x e^{t u(y)}, y)`.
pub fn flow_h(alg: &LieAlgebra, h: &Complexifier, t: f64, p: &PhasePoint) -> PhasePoint {
    let u = h.gradient(&p.y);
    PhasePoint::new(GroupPoint(&p.x.0 * alg.exp(&(u * t)).0), p.y.clone())
}

/// `phi_f^s(x, y) = (x e^{s F y}, e^{-s ad_{Fy}} y)`.
pub fn flow_f(alg: &LieAlgebra, f: &TorusForm, s: f64, p: &PhasePoint) -> PhasePoint {
    let fy = f.apply(&p.y);
    let y = (alg.ad(&fy) * -s).exp() * &p.y;
    PhasePoint::new(GroupPoint(&p.x.0 * alg.exp(&(fy * s)).0), y)
}

/// Classical RK4 integration of the Hamiltonian flow of a function with gradient `grad`.
pub fn flow_rk4(
    alg: &LieAlgebra,
    grad: &dyn Fn(&RVec) -> RVec,
    time: f64,
    p: &PhasePoint,
    steps: usize,
) -> PhasePoint {
    let dt = time / steps as f64;
    let rhs = |x: &CMat, y: &RVec| -> (CMat, RVec) {
        let u = grad(y);
        (x * alg.to_matrix(&u), alg.bracket(y, &u))
    };
    let (mut x, mut y) = (p.x.0.clone(), p.y.clone());
    let h = C64::new(dt, 0.0);
    for _ in 0..steps {
        let (k1x, k1y) = rhs(&x, &y);
        let (k2x, k2y) = rhs(&(&x + &k1x * (h * 0.5)), &(&y + &k1y * (dt * 0.5)));
        let (k3x, k3y) = rhs(&(&x + &k2x * (h * 0.5)), &(&y + &k2y * (dt * 0.5)));
        let (k4x, k4y) = rhs(&(&x + &k3x * h), &(&y + &k3y * dt));
        x += (k1x + k2x * C64::new(2.0, 0.0) + k3x * C64::new(2.0, 0.0) + k4x) * (h / 6.0);
        y += (k1y + k2y * 2.0 + k3y * 2.0 + k4y) * (dt / 6.0);
    }
    PhasePoint::new(GroupPoint(x), y)
}

pub fn phase_distance(a: &PhasePoint, b: &PhasePoint) -> f64 {
    (&a.x.0 - &b.x.0).norm() + (&a.y - &b.y).norm()
}

fn block(a: &RMat, b: &RMat, c: &RMat, d: &RMat) -> RMat {
    let n = a.nrows();
    let mut m = RMat::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(c);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

fn real_part(m: &CMat, what: &str) -> Result<RMat> {
    if m.map(|z| z.im).amax() > 1e-10 * (1.0 + m.map(|z| z.re).amax()) {
        return Err(Error::Numeric(format!("{what} has a spurious imaginary part")));
    }
    Ok(m.map(|z| z.re))
}

/// `(1 - e^{c ad_a}) / ad_a` for real `c`.
fn phi_real(alg: &LieAlgebra, a: &RVec, c: f64) -> Result<RMat> {
    real_part(
        &function_of_ad(&alg.ad(a), &ScalarFunction::one_minus_exp_over_z(C64::new(c, 0.0)))?,
        "(1-e^{c ad})/ad",
    )
}

/// `D phi_h^t` from `T_(x,y)` to `T_{phi_h^t(x,y)}` in left trivializations.
pub fn tangent_flow_h(alg: &LieAlgebra, h: &Complexifier, t: f64, p: &PhasePoint) -> Result<RMat> {
    let u = h.gradient(&p.y);
    let n = alg.dim();
    let e = (alg.ad(&u) * -t).exp();
    let b = phi_real(alg, &u, -t)? * h.hessian(&p.y);
    Ok(block(&e, &b, &RMat::zeros(n, n), &RMat::identity(n, n)))
}

/// `D phi_f^s` from `T_(x,y)` to `T_{phi_f^s(x,y)}` in left trivializations.
pub fn tangent_flow_f(alg: &LieAlgebra, f: &TorusForm, s: f64, p: &PhasePoint) -> RMat {
    let n = alg.dim();
    let e = (alg.ad(&f.apply(&p.y)) * -s).exp();
    let d = &e * (alg.ad(&p.y) * f.matrix() * s + RMat::identity(n, n));
    block(&e, &(f.matrix() * s), &RMat::zeros(n, n), &d)
}

/// Derivative of `phi_h^{-t} o phi_f^{-s}` at `(phi_h^t o phi_f^s)(x, y)`, with blocks written in terms of `y`.
pub fn composed_inverse_derivative(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    t: f64,
    s: f64,
    p: &PhasePoint,
) -> Result<RMat> {
    let n = alg.dim();
    let u = h.gradient(&p.y);
    let et = (alg.ad(&u) * t).exp();
    let es = (alg.ad(&f.apply(&p.y)) * s).exp();
    let ul = &et * &es;
    let ur = phi_real(alg, &u, t)? * h.hessian(&p.y) * &es - f.matrix() * s;
    let lr = &es - alg.ad(&p.y) * f.matrix() * s;
    Ok(block(&ul, &ur, &RMat::zeros(n, n), &lr))
}

/// Central-difference Jacobian of a phase-space map in left trivializations.
pub fn tangent_map_fd(
    alg: &LieAlgebra,
    map: &dyn Fn(&PhasePoint) -> PhasePoint,
    p: &PhasePoint,
    eps: f64,
) -> RMat {
    let n = alg.dim();
    let base = map(p);
    let mut m = RMat::zeros(2 * n, 2 * n);
    for k in 0..2 * n {
        let mut w = RVec::zeros(2 * n);
        w[k] = 1.0;
        let tv = TangentVector::from_stacked(&w);
        let shifted = |e: f64| {
            map(&PhasePoint::new(
                GroupPoint(&p.x.0 * alg.exp(&(&tv.u * e)).0),
                &p.y + &tv.v * e,
            ))
        };
        let (a, b) = (shifted(eps), shifted(-eps));
        let du = left_derivative(alg, &base.x.0, &a.x.0, &b.x.0, eps).map(|z| z.re);
        let dv = (&a.y - &b.y) / (2.0 * eps);
        m.view_mut((0, k), (n, 1)).copy_from(&du);
        m.view_mut((n, k), (n, 1)).copy_from(&dv);
    }
    m
}

/// Smallest singular value of `e^{s ad_{Fy}} - s ad_y F`.
pub fn min_singular_value(alg: &LieAlgebra, f: &TorusForm, s: f64, y: &RVec) -> f64 {
    let m = (alg.ad(&f.apply(y)) * s).exp() - alg.ad(y) * f.matrix() * s;
    m.singular_values().min()
}

type FieldFn = Arc<dyn Fn(&RVec) -> CVec + Send + Sync>;

/// One component of a left-invariantly written field `X^{S,T}`: a function of `y` only.
#[derive(Clone)]
pub enum Component {
    Constant(CVec),
    Function(FieldFn),
}

impl Component {
    pub fn constant(v: &RVec) -> Self {
        Self::Constant(crate::complexify_vec(v))
    }

    pub fn function(f: impl Fn(&RVec) -> CVec + Send + Sync + 'static) -> Self {
        Self::Function(Arc::new(f))
    }

    pub fn at(&self, y: &RVec) -> CVec {
        match self {
            Self::Constant(c) => c.clone(),
            Self::Function(f) => f(y),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant(_))
    }

    /// Directional derivative `dC(B)` at `y` by central differences, extended complex-linearly in `B`.
    pub fn derivative(&self, y: &RVec, dir: &CVec, eps: f64) -> CVec {
        match self {
            Self::Constant(c) => CVec::zeros(c.len()),
            Self::Function(f) => {
                let re = dir.map(|z| z.re);
                let im = dir.map(|z| z.im);
                let d = |w: &RVec| (f(&(y + w * eps)) - f(&(y - w * eps))) / C64::new(2.0 * eps, 0.0);
                d(&re) + d(&im) * C64::new(0.0, 1.0)
            }
        }
    }
}

/// Vector field `X^{S,T}(x, y) = (S(y), T(y))`, possibly complex.
#[derive(Clone)]
pub struct LeftInvariantField {
    pub s: Component,
    pub t: Component,
}

impl LeftInvariantField {
    pub fn new(s: Component, t: Component) -> Self {
        Self { s, t }
    }

    pub fn at(&self, y: &RVec) -> (CVec, CVec) {
        (self.s.at(y), self.t.at(y))
    }
}

const FIELD_EPS: f64 = 1e-5;

/// `[X^{A,B}, X^{C,D}] = ([A,C] + dC(B) - dA(D), dD(B) - dB(D))`.
pub fn left_invariant_bracket(
    alg: &LieAlgebra,
    x1: &LeftInvariantField,
    x2: &LeftInvariantField,
    y: &RVec,
) -> (CVec, CVec) {
    let (a, b) = x1.at(y);
    let (c, d) = x2.at(y);
    let u = alg.ad_complex(&a) * &c + x2.s.derivative(y, &b, FIELD_EPS) - x1.s.derivative(y, &d, FIELD_EPS);
    let v = x2.t.derivative(y, &b, FIELD_EPS) - x1.t.derivative(y, &d, FIELD_EPS);
    (u, v)
}

/// Coordinate bracket in the chart `(xi, eta) -> (x e^xi, y + eta)`, with Jacobians by finite differences.
pub fn bracket_chart_oracle(
    alg: &LieAlgebra,
    x1: &LeftInvariantField,
    x2: &LeftInvariantField,
    y: &RVec,
) -> Result<(CVec, CVec)> {
    let n = alg.dim();
    let chart_field = |fld: &LeftInvariantField, w: &RVec| -> Result<CVec> {
        let xi = w.rows(0, n).into_owned();
        let yy = y + w.rows(n, n);
        let (s, t) = fld.at(&yy);
        let dexp = phi_real(alg, &xi, -1.0)?;
        let inv = complexify(&dexp.try_inverse().ok_or_else(|| Error::Numeric("dexp singular".into()))?);
        let top = inv * s;
        Ok(CVec::from_fn(2 * n, |i, _| if i < n { top[i] } else { t[i - n] }))
    };
    let eps = 1e-5;
    let jac = |fld: &LeftInvariantField| -> Result<CMat> {
        let mut m = CMat::zeros(2 * n, 2 * n);
        for k in 0..2 * n {
            let mut w = RVec::zeros(2 * n);
            w[k] = eps;
            let col = (chart_field(fld, &w)? - chart_field(fld, &(-&w))?) / C64::new(2.0 * eps, 0.0);
            m.set_column(k, &col);
        }
        Ok(m)
    };
    let zero = RVec::zeros(2 * n);
    let (v1, v2) = (chart_field(x1, &zero)?, chart_field(x2, &zero)?);
    let br = jac(x2)? * v1 - jac(x1)? * v2;
    Ok((br.rows(0, n).into_owned(), br.rows(n, n).into_owned()))
}

/// `e^{t L_{X_h}} X^{S,T}` at `(x, y)`; `S, T` may depend on `y`.
pub fn pushforward_h(
    alg: &LieAlgebra,
    h: &Complexifier,
    t: f64,
    field: &LeftInvariantField,
    p: &PhasePoint,
) -> Result<(CVec, CVec)> {
    let (s, tt) = field.at(&p.y);
    let u = h.gradient(&p.y);
    let e = complexify(&(alg.ad(&u) * t).exp());
    let b = complexify(&(phi_real(alg, &u, t)? * h.hessian(&p.y)));
    Ok((e * s + b * &tt, tt))
}

/// `e^{s L_{X_f}} X^{S,T}` for constant `S, T`.
pub fn pushforward_f(
    alg: &LieAlgebra,
    f: &TorusForm,
    s: f64,
    field: &LeftInvariantField,
    p: &PhasePoint,
) -> Result<(CVec, CVec)> {
    pushforward_combined(alg, &Complexifier::quadratic(), f, 0.0, s, field, p)
}

/// `e^{t L_{X_h} + s L_{X_f}} X^{S,T}` for constant `S, T`.
pub fn pushforward_combined(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    t: f64,
    s: f64,
    field: &LeftInvariantField,
    p: &PhasePoint,
) -> Result<(CVec, CVec)> {
    if !field.s.is_constant() || !field.t.is_constant() {
        return Err(Error::Contract("the f-pushforward series requires constant components".into()));
    }
    let m = complexify(&composed_inverse_derivative(alg, h, f, t, s, p)?);
    let (a, b) = field.at(&p.y);
    let n = alg.dim();
    let w = CVec::from_fn(2 * n, |i, _| if i < n { a[i] } else { b[i - n] });
    let r = m * w;
    Ok((r.rows(0, n).into_owned(), r.rows(n, n).into_owned()))
}

/// Geometric pushforward `D(phi^{-1})_{phi(p)} X(phi(p))` of a field by a flow map, using
/// a finite-difference derivative of the inverse map.
pub fn pushforward_oracle(
    alg: &LieAlgebra,
    forward: &dyn Fn(&PhasePoint) -> PhasePoint,
    inverse: &dyn Fn(&PhasePoint) -> PhasePoint,
    field: &LeftInvariantField,
    p: &PhasePoint,
) -> (CVec, CVec) {
    let q = forward(p);
    let d = complexify(&tangent_map_fd(alg, inverse, &q, 1e-5));
    let (a, b) = field.at(&q.y);
    let n = alg.dim();
    let w = CVec::from_fn(2 * n, |i, _| if i < n { a[i] } else { b[i - n] });
    let r = d * w;
    (r.rows(0, n).into_owned(), r.rows(n, n).into_owned())
}

/// `A_{tau,sigma}(x, y) = x e^{tau u(y)} e^{sigma F y}` in the complexified group.
pub fn map_a(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    p: &PhasePoint,
) -> CMat {
    let u = crate::complexify_vec(&h.gradient(&p.y));
    let fy = crate::complexify_vec(&f.apply(&p.y));
    &p.x.0 * alg.exp_complex(&(u * params.tau)) * alg.exp_complex(&(fy * params.sigma))
}

/// Real `2n x 2n` Jacobian of `A_{tau,sigma}` in left trivializations, by central differences.
pub fn map_a_jacobian_fd(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    p: &PhasePoint,
    eps: f64,
) -> RMat {
    let n = alg.dim();
    let base = map_a(alg, h, f, params, p);
    let mut m = RMat::zeros(2 * n, 2 * n);
    for k in 0..2 * n {
        let mut w = RVec::zeros(2 * n);
        w[k] = 1.0;
        let tv = TangentVector::from_stacked(&w);
        let at = |e: f64| {
            map_a(
                alg,
                h,
                f,
                params,
                &PhasePoint::new(GroupPoint(&p.x.0 * alg.exp(&(&tv.u * e)).0), &p.y + &tv.v * e),
            )
        };
        let d = left_derivative(alg, &base, &at(eps), &at(-eps), eps);
        for i in 0..n {
            m[(i, k)] = d[i].re;
            m[(n + i, k)] = d[i].im;
        }
    }
    m
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct DiffeoReport {
    pub samples: usize,
    pub min_abs_jacobian_det: f64,
    pub collisions: usize,
}

/// Samples `A_{tau,sigma}` on random points with `|y| <= radius`, recording the smallest
/// Jacobian determinant and the number of image collisions between distinct inputs.
pub fn diffeo_sample(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    samples: usize,
    radius: f64,
    seed: u64,
) -> Result<DiffeoReport> {
    if !(params.tau.im > 0.0) || params.sigma.im < 0.0 {
        return domain("diffeomorphism check needs Im tau > 0 and Im sigma >= 0");
    }
    let mut rng = sampling::rng(seed);
    let mut pts = Vec::with_capacity(samples);
    let mut min_det = f64::INFINITY;
    for _ in 0..samples {
        let p = sampling::phase_point(&mut rng, alg, radius);
        let j = map_a_jacobian_fd(alg, h, f, params, &p, 1e-6);
        min_det = min_det.min(j.determinant().abs());
        let img = map_a(alg, h, f, params, &p);
        pts.push((p, img));
    }
    let cell = 1e-8;
    let mut grid: std::collections::HashMap<(i64, i64), Vec<usize>> = std::collections::HashMap::new();
    let key = |m: &CMat, dx: i64, dy: i64| ((m[(0, 0)].re / cell).floor() as i64 + dx, (m[(0, 0)].im / cell).floor() as i64 + dy);
    let mut collisions = 0;
    for (i, (p, img)) in pts.iter().enumerate() {
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = grid.get(&key(img, dx, dy)) {
                    for &j in list {
                        let (q, other) = &pts[j];
                        if (img - other).norm() < cell && phase_distance(p, q) > 1e-4 {
                            collisions += 1;
                        }
                    }
                }
            }
        }
        grid.entry(key(img, 0, 0)).or_default().push(i);
    }
    Ok(DiffeoReport { samples, min_abs_jacobian_det: min_det, collisions })
}
