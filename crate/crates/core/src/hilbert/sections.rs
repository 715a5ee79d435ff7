use super::quadrature::{gauss_on_torus, haar_su2, spherical, GroupRule};
use super::Irrep;
use crate::complexifier::{Complexifier, TorusForm};
use crate::error::{domain, Error, Result};
use crate::flows::{flow_f, flow_h, map_a};
use crate::halfform::{density, partial_density};
use crate::lie::{GroupPoint, LieAlgebra, PhasePoint};
use crate::polarization::{build_frame, lambda, kahler_potential, theta_form};
use crate::{CMat, CVec, RVec, TimeParams, C64, I};

/// Coefficient matrix `a^lambda` of one irrep in a Peter–Weyl sum.
#[derive(Clone, Debug, PartialEq)]
pub struct PwTerm {
    pub irrep: Irrep,
    pub coeffs: CMat,
}

/// Finite Peter–Weyl combination `psi(g) = sum_lambda sum_{jk} a^lambda_{jk} pi^lambda_{jk}(g)`,
/// evaluated on `G` or, holomorphically, on `G_C`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerticalSection {
    pub terms: Vec<PwTerm>,
}

impl VerticalSection {
    pub fn matrix_element(irrep: Irrep, j: usize, k: usize) -> Self {
        let mut coeffs = CMat::zeros(irrep.dim(), irrep.dim());
        coeffs[(j, k)] = C64::new(1.0, 0.0);
        Self { terms: vec![PwTerm { irrep, coeffs }] }
    }

    pub fn constant() -> Self {
        Self::matrix_element(Irrep::new(0), 0, 0)
    }

    pub fn eval_at(&self, g: &CMat) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for t in &self.terms {
            acc += t.coeffs.component_mul(&t.irrep.matrix(g)?).sum();
        }
        Ok(acc)
    }

    /// Evaluation given precomputed representation matrices indexed by twice the spin.
    pub fn eval_with(&self, mats: &[CMat]) -> C64 {
        self.terms.iter().map(|t| t.coeffs.component_mul(&mats[t.irrep.twice_spin as usize]).sum()).sum()
    }

    pub fn max_twice_spin(&self) -> u32 {
        self.terms.iter().map(|t| t.irrep.twice_spin).max().unwrap_or(0)
    }

    /// `(x', t) . psi (x) = psi(x' x t)` on coefficient matrices: `a -> pi(x')^T a pi(t)^T`.
    pub fn acted(&self, xprime: &CMat, t: &CMat) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let px = term.irrep.matrix(xprime)?;
            let pt = term.irrep.matrix(t)?;
            terms.push(PwTerm { irrep: term.irrep, coeffs: px.transpose() * &term.coeffs * pt.transpose() });
        }
        Ok(Self { terms })
    }
}

/// Peter–Weyl coefficients `a_jk = dim * int conj(pi_jk) psi dx` of a pointwise function, by Haar quadrature.
pub fn project_vertical(rule: &GroupRule, irreps: &[Irrep], psi: &dyn Fn(&CMat) -> Result<C64>) -> Result<VerticalSection> {
    let mut terms: Vec<PwTerm> = irreps.iter().map(|&irrep| PwTerm { irrep, coeffs: CMat::zeros(irrep.dim(), irrep.dim()) }).collect();
    for (g, w) in &rule.nodes {
        let v = psi(&g.0)? * *w;
        for t in terms.iter_mut() {
            let m = t.irrep.matrix(&g.0)?;
            t.coeffs += m.map(|z| z.conj()) * (v * t.irrep.dim() as f64);
        }
    }
    Ok(VerticalSection { terms })
}

pub fn inner_product_vertical(rule: &GroupRule, s1: &VerticalSection, s2: &VerticalSection) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for (g, w) in &rule.nodes {
        acc += s1.eval_at(&g.0)?.conj() * s2.eval_at(&g.0)? * *w;
    }
    Ok(acc)
}

/// `Q(h) = h(-(lambda + rho))` on the isotypic component of `irrep`.
pub fn spectral_qh(alg: &LieAlgebra, h: &Complexifier, irrep: Irrep) -> f64 {
    h.value(&-(irrep.highest_weight() + alg.weyl_vector()))
}

/// `Q(f) = f(-lambda_k)` on the weight column `k`.
pub fn spectral_qf(f: &TorusForm, irrep: Irrep, k: usize) -> f64 {
    f.value(&-irrep.weight(k))
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub enum SectionKind {
    Vertical,
    Kahler,
    Mixed,
}

/// Polarized section `Phi(A_{tau,sigma}(x,y)) e^{-i lambda_{tau,sigma}} (x) sqrt(Omega_{tau,sigma})`.
#[derive(Clone, Debug)]
pub struct PolarizedSection {
    pub kind: SectionKind,
    pub params: TimeParams,
    pub h: Complexifier,
    pub f: TorusForm,
    /// `Phi` as a holomorphic Peter–Weyl sum.
    pub holomorphic: VerticalSection,
}

impl PolarizedSection {
    fn base_point(&self, alg: &LieAlgebra, p: &PhasePoint) -> CMat {
        map_a(alg, &self.h, &self.f, &self.params, p)
    }

    /// Coefficient of the trivializing section `e^{-i lambda} (x) sqrt(Omega)`.
    pub fn coefficient(&self, alg: &LieAlgebra, p: &PhasePoint) -> Result<C64> {
        self.holomorphic.eval_at(&self.base_point(alg, p))
    }

    /// Coefficient times `e^{-i lambda_{tau,sigma}(y)}`.
    pub fn value(&self, alg: &LieAlgebra, p: &PhasePoint) -> Result<C64> {
        Ok(self.coefficient(alg, p)? * (-I * lambda(&self.h, &self.f, &self.params, &p.y)).exp())
    }

    /// Coefficient of `(x', t) . s`, i.e. `Phi(x' A(x,y) t)`.
    pub fn coefficient_acted(&self, alg: &LieAlgebra, p: &PhasePoint, xprime: &CMat, t: &CMat) -> Result<C64> {
        self.holomorphic.eval_at(&(xprime * self.base_point(alg, p) * t))
    }
}

/// `U_{tau,sigma} = e^{-i tau h_pq} e^{-i sigma f_pq} e^{i tau Q(h)} e^{i sigma Q(f)}` on a finite Peter–Weyl sum.
pub fn apply_cst(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    psi: &VerticalSection,
) -> Result<PolarizedSection> {
    if params.tau.im < 0.0 || params.sigma.im < 0.0 {
        return domain("transform needs Im tau >= 0 and Im sigma >= 0");
    }
    let zero = C64::new(0.0, 0.0);
    let kind = if params.tau == zero && params.sigma == zero {
        SectionKind::Vertical
    } else if params.tau == zero {
        SectionKind::Mixed
    } else if params.tau.im > 0.0 {
        SectionKind::Kahler
    } else {
        return domain("Kähler transform needs Im tau > 0");
    };
    let mut terms = Vec::with_capacity(psi.terms.len());
    for t in &psi.terms {
        let qh = (I * params.tau * spectral_qh(alg, h, t.irrep)).exp();
        let mut coeffs = t.coeffs.clone() * qh;
        for k in 0..t.irrep.dim() {
            let qf = (I * params.sigma * spectral_qf(f, t.irrep, k)).exp();
            for j in 0..t.irrep.dim() {
                coeffs[(j, k)] *= qf;
            }
        }
        terms.push(PwTerm { irrep: t.irrep, coeffs });
    }
    Ok(PolarizedSection {
        kind,
        params: *params,
        h: h.clone(),
        f: f.clone(),
        holomorphic: VerticalSection { terms },
    })
}

fn directional(alg: &LieAlgebra, s: &dyn Fn(&PhasePoint) -> Result<C64>, p: &PhasePoint, u: &RVec, v: &RVec) -> Result<C64> {
    let eps = 1e-5;
    let at = |e: f64| s(&PhasePoint::new(GroupPoint(&p.x.0 * alg.exp(&(u * e)).0), &p.y + v * e));
    Ok((at(eps)? - at(-eps)?) / (2.0 * eps))
}

/// `max_j |conj(E_j)(s) + i theta(conj(E_j)) s| / |s|` for the full section `s = value`.
pub fn covariant_residual(alg: &LieAlgebra, section: &PolarizedSection, p: &PhasePoint) -> Result<f64> {
    let frame = build_frame(alg, &section.h, &section.f, &section.params, &p.y)?.stacked();
    let n = alg.dim();
    let eval = |q: &PhasePoint| section.value(alg, q);
    let s0 = eval(p)?;
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let e = frame.column(j).map(|z| z.conj());
        let part = |f: fn(C64) -> f64| RVec::from_fn(2 * n, |i, _| f(e[i]));
        let (re, im) = (part(|z| z.re), part(|z| z.im));
        let d = directional(alg, &eval, p, &re.rows(0, n).into_owned(), &re.rows(n, n).into_owned())?
            + I * directional(alg, &eval, p, &im.rows(0, n).into_owned(), &im.rows(n, n).into_owned())?;
        let th = theta_form(&p.y, &e.rows(0, 2 * n).into_owned());
        worst = worst.max((d + I * th * s0).norm() / s0.norm().max(1e-300));
    }
    Ok(worst)
}

pub type SectionFn<'a> = Box<dyn Fn(&PhasePoint) -> Result<C64> + Sync + 'a>;

const FLOW_EPS: f64 = 1e-4;

/// `h_pq = i X_h + (h - <y, u>)`, with `X_h` differentiated along the flow of `h`.
pub fn prequantum_h<'a>(alg: &'a LieAlgebra, h: &'a Complexifier, s: SectionFn<'a>) -> SectionFn<'a> {
    Box::new(move |p| {
        let d = (s(&flow_h(alg, h, FLOW_EPS, p))? - s(&flow_h(alg, h, -FLOW_EPS, p))?) / (2.0 * FLOW_EPS);
        Ok(I * d - s(p)? * h.legendre_dual(&p.y))
    })
}

/// `f_pq = i X_f - f`.
pub fn prequantum_f<'a>(alg: &'a LieAlgebra, f: &'a TorusForm, s: SectionFn<'a>) -> SectionFn<'a> {
    Box::new(move |p| {
        let d = (s(&flow_f(alg, f, FLOW_EPS, p))? - s(&flow_f(alg, f, -FLOW_EPS, p))?) / (2.0 * FLOW_EPS);
        Ok(I * d - s(p)? * f.value(&p.y))
    })
}

/// Quadrature orders and refinement policy for the polarized inner products.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureOptions {
    pub gh_order: usize,
    pub max_gh_order: usize,
    pub radial: usize,
    pub polar: usize,
    pub azimuth: usize,
    pub max_refinements: usize,
    /// Target change of the Gram matrix under refinement, relative to its largest diagonal entry.
    pub tolerance: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { gh_order: 64, max_gh_order: 512, radial: 24, polar: 12, azimuth: 12, max_refinements: 3, tolerance: 1e-9 }
    }
}

/// Gram matrix of a family of sections together with its refinement estimate.
#[derive(Clone, Debug)]
pub struct Gram {
    pub matrix: CMat,
    pub estimate: f64,
    pub nodes: usize,
}

fn check_family(sections: &[PolarizedSection], kind: SectionKind) -> Result<&PolarizedSection> {
    let first = sections.first().ok_or_else(|| Error::Domain("empty section family".into()))?;
    for s in sections {
        if s.kind != kind || s.params != first.params {
            return domain(format!("sections must all be {kind:?} with equal parameters"));
        }
    }
    Ok(first)
}

/// `sum_y w_y sum_x w_x conj(v(x A_y)) v(x A_y)^T` with `A_y` the base point at `(e, y)`.
fn gram_over(
    alg: &LieAlgebra,
    sections: &[PolarizedSection],
    ynodes: &[(RVec, f64)],
    weight: &(dyn Fn(&RVec) -> Result<f64> + Sync),
) -> Result<CMat> {
    let top = sections.iter().map(|s| s.holomorphic.max_twice_spin()).max().unwrap_or(0);
    let irreps: Vec<Irrep> = (0..=top).map(Irrep::new).collect();
    let xrule = haar_su2(alg, top as f64);
    let xmats: Vec<Vec<CMat>> = xrule
        .nodes
        .iter()
        .map(|(g, _)| irreps.iter().map(|r| r.matrix(&g.0)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let first = &sections[0];
    let e = GroupPoint(CMat::identity(2, 2));
    let m = sections.len();
    let partial = crate::par::map_chunks(ynodes.len(), |range| -> Result<CMat> {
        let mut acc = CMat::zeros(m, m);
        for (y, wy) in &ynodes[range] {
            let wy = wy * weight(y)?;
            if wy == 0.0 {
                continue;
            }
            let a0 = map_a(alg, &first.h, &first.f, &first.params, &PhasePoint::new(e.clone(), y.clone()));
            let amats: Vec<CMat> = irreps.iter().map(|r| r.matrix(&a0)).collect::<Result<_>>()?;
            for ((_, wx), xm) in xrule.nodes.iter().zip(&xmats) {
                let prod: Vec<CMat> = xm.iter().zip(&amats).map(|(a, b)| a * b).collect();
                let v = CVec::from_iterator(m, sections.iter().map(|s| s.holomorphic.eval_with(&prod)));
                acc += v.conjugate() * v.transpose() * C64::new(wy * wx, 0.0);
            }
        }
        Ok(acc)
    });
    let mut total = CMat::zeros(m, m);
    for c in partial {
        total += c?;
    }
    Ok(total)
}

fn relative_change(a: &CMat, b: &CMat) -> f64 {
    let scale = (0..b.nrows()).map(|i| b[(i, i)].norm()).fold(f64::MIN_POSITIVE, f64::max);
    (a - b).camax() / scale
}

/// Gram matrix in `H_{P_{0,sigma}}`: Haar on `G` times Gauss–Hermite on the Cartan subalgebra,
/// with the Gaussian factor `|e^{-i lambda_{0,sigma}}|^2` absorbed in the rule. Orders double
/// until the change drops below the tolerance.
pub fn gram_mixed(alg: &LieAlgebra, sections: &[PolarizedSection], opts: &QuadratureOptions) -> Result<Gram> {
    let first = check_family(sections, SectionKind::Mixed)?;
    let sigma = first.params.sigma;
    let dens = partial_density(alg, &first.f, sigma)?;
    let weight = |_: &RVec| Ok(dens);
    let mut order = opts.gh_order.max(1);
    let mut prev = gram_over(alg, sections, &gauss_on_torus(alg, &first.f, sigma.im, order)?.nodes, &weight)?;
    let mut estimate = f64::INFINITY;
    while order * 2 <= opts.max_gh_order {
        order *= 2;
        let rule = gauss_on_torus(alg, &first.f, sigma.im, order)?;
        let next = gram_over(alg, sections, &rule.nodes, &weight)?;
        estimate = relative_change(&prev, &next);
        prev = next;
        if estimate < opts.tolerance {
            return Ok(Gram { matrix: prev, estimate, nodes: rule.nodes.len() });
        }
    }
    Err(Error::Quadrature { message: format!("mixed Gram not converged at Gauss–Hermite order {order}"), estimate })
}

/// `int_{t} e^{2 sigma_2 <lambda, F y> - sigma_2 <y, F y>} dy` by the Gaussian rule on the Cartan subalgebra.
pub fn torus_gaussian_integral(alg: &LieAlgebra, f: &TorusForm, sigma2: f64, weight: &RVec, order: usize) -> Result<f64> {
    let fl = f.apply(weight);
    Ok(gauss_on_torus(alg, f, sigma2, order)?.nodes.iter().map(|(y, w)| w * (2.0 * sigma2 * fl.dot(y)).exp()).sum())
}

fn kahler_integrand_weight(alg: &LieAlgebra, s: &PolarizedSection, y: &RVec) -> Result<f64> {
    Ok((-kahler_potential(&s.h, &s.f, &s.params, y)).exp() * density(alg, &s.h, &s.f, &s.params, y)?)
}

/// Smallest radius beyond the peak where the top-spin envelope falls below `1e-16` of its peak,
/// probed along the coordinate axes and diagonals.
pub fn kahler_cutoff(alg: &LieAlgebra, sections: &[PolarizedSection]) -> Result<f64> {
    let first = check_family(sections, SectionKind::Kahler)?;
    let top = Irrep::new(sections.iter().map(|s| s.holomorphic.max_twice_spin()).max().unwrap_or(0));
    let mut dirs = Vec::new();
    for a in -1i32..=1 {
        for b in -1i32..=1 {
            for c in -1i32..=1 {
                if (a, b, c) != (0, 0, 0) {
                    let v = RVec::from_column_slice(&[a as f64, b as f64, c as f64]);
                    dirs.push(v.normalize());
                }
            }
        }
    }
    let e = GroupPoint(CMat::identity(2, 2));
    let envelope = |r: f64| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for d in &dirs {
            let y = d * r;
            let a0 = map_a(alg, &first.h, &first.f, &first.params, &PhasePoint::new(e.clone(), y.clone()));
            let norm2 = top.matrix(&a0)?.norm_squared() + 1.0;
            worst = worst.max(norm2 * kahler_integrand_weight(alg, first, &y)?);
        }
        Ok(worst)
    };
    let mut peak: f64 = 0.0;
    let mut r = 0.0;
    while r < 200.0 {
        let v = envelope(r)?;
        peak = peak.max(v);
        if r > 0.0 && v < 1e-16 * peak {
            return Ok(r);
        }
        r += 0.25;
    }
    Err(Error::Quadrature { message: "Kähler integrand does not decay within |y| < 200".into(), estimate: f64::INFINITY })
}

/// Gram matrix in `H_{P_{tau,sigma}}` over `G x g` with the Liouville measure `dx dy`.
pub fn gram_kahler(alg: &LieAlgebra, sections: &[PolarizedSection], opts: &QuadratureOptions) -> Result<Gram> {
    let first = check_family(sections, SectionKind::Kahler)?;
    if alg.dim() != 3 {
        return domain("the Kähler inner product uses a three-dimensional spherical rule");
    }
    let radius = kahler_cutoff(alg, sections)?;
    let weight = |y: &RVec| kahler_integrand_weight(alg, first, y);
    let (mut nr, mut np, mut na) = (opts.radial, opts.polar, opts.azimuth);
    let mut prev = gram_over(alg, sections, &spherical(radius, nr, np, na).nodes, &weight)?;
    let mut estimate = f64::INFINITY;
    for _ in 0..opts.max_refinements {
        (nr, np, na) = (2 * nr, 2 * np, 2 * na);
        let rule = spherical(radius, nr, np, na);
        let next = gram_over(alg, sections, &rule.nodes, &weight)?;
        estimate = relative_change(&prev, &next);
        prev = next;
        if estimate < opts.tolerance {
            return Ok(Gram { matrix: prev, estimate, nodes: rule.nodes.len() });
        }
    }
    Err(Error::Quadrature { message: format!("Kähler Gram not converged with {nr}x{np}x{na} nodes"), estimate })
}

/// All matrix elements `pi^lambda_{jk}` with spin at most `max_spin`, in (spin, row, column) order.
pub fn matrix_element_basis(max_spin: f64) -> Vec<(Irrep, usize, usize, VerticalSection)> {
    let mut out = Vec::new();
    for irrep in Irrep::up_to(max_spin) {
        for j in 0..irrep.dim() {
            for k in 0..irrep.dim() {
                out.push((irrep, j, k, VerticalSection::matrix_element(irrep, j, k)));
            }
        }
    }
    out
}

/// `|<U s, U s'>_{0,sigma} - <s, s'>|` over all matrix elements of spin at most `max_spin`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct UnitarityReport {
    pub max_deviation: f64,
    pub max_diagonal_deviation: f64,
    pub max_off_diagonal: f64,
    pub estimate: f64,
    pub sections: usize,
}

pub fn unitarity_mixed(
    alg: &LieAlgebra,
    f: &TorusForm,
    sigma: C64,
    max_spin: f64,
    opts: &QuadratureOptions,
) -> Result<UnitarityReport> {
    let params = TimeParams::mixed(sigma)?;
    let h = Complexifier::quadratic();
    let basis = matrix_element_basis(max_spin);
    let sections: Vec<PolarizedSection> =
        basis.iter().map(|(_, _, _, v)| apply_cst(alg, &h, f, &params, v)).collect::<Result<_>>()?;
    let gram = gram_mixed(alg, &sections, opts)?;
    let mut rep = UnitarityReport {
        max_deviation: 0.0,
        max_diagonal_deviation: 0.0,
        max_off_diagonal: 0.0,
        estimate: gram.estimate,
        sections: sections.len(),
    };
    for (a, (ra, ..)) in basis.iter().enumerate() {
        for b in 0..basis.len() {
            let exact = if a == b { 1.0 / ra.dim() as f64 } else { 0.0 };
            let dev = (gram.matrix[(a, b)] - exact).norm();
            rep.max_deviation = rep.max_deviation.max(dev);
            if a == b {
                rep.max_diagonal_deviation = rep.max_diagonal_deviation.max(dev);
            } else {
                rep.max_off_diagonal = rep.max_off_diagonal.max(dev);
            }
        }
    }
    Ok(rep)
}

/// One row of the Kähler norm table `||U_{tau,sigma} pi^lambda_{jk}||^2`.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NormRow {
    pub tau: [f64; 2],
    pub sigma: [f64; 2],
    pub twice_spin: u32,
    pub row: usize,
    pub column: usize,
    pub norm_squared: f64,
    pub times_dim: f64,
    /// Relative change of the Gram matrix at the last refinement.
    pub estimate: f64,
}

pub fn kahler_norm_table(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    max_spin: f64,
    opts: &QuadratureOptions,
) -> Result<(Vec<NormRow>, Gram)> {
    let basis = matrix_element_basis(max_spin);
    let sections: Vec<PolarizedSection> =
        basis.iter().map(|(_, _, _, v)| apply_cst(alg, h, f, params, v)).collect::<Result<_>>()?;
    let gram = gram_kahler(alg, &sections, opts)?;
    let rows = basis
        .iter()
        .enumerate()
        .map(|(a, (irrep, j, k, _))| {
            let n = gram.matrix[(a, a)].re;
            NormRow {
                tau: [params.tau.re, params.tau.im],
                sigma: [params.sigma.re, params.sigma.im],
                twice_spin: irrep.twice_spin,
                row: *j,
                column: *k,
                norm_squared: n,
                times_dim: n * irrep.dim() as f64,
                estimate: gram.estimate,
            }
        })
        .collect();
    Ok((rows, gram))
}

/// `max_p |U((x', t) . psi)(p) - ((x', t) . U psi)(p)|` relative to `max_p |U psi(p)|`.
#[allow(clippy::too_many_arguments)]
pub fn intertwiner_residual(
    alg: &LieAlgebra,
    h: &Complexifier,
    f: &TorusForm,
    params: &TimeParams,
    psi: &VerticalSection,
    xprime: &CMat,
    t: &CMat,
    points: &[PhasePoint],
) -> Result<f64> {
    let direct = apply_cst(alg, h, f, params, psi)?;
    let moved = apply_cst(alg, h, f, params, &psi.acted(xprime, t)?)?;
    let (mut worst, mut scale) = (0.0f64, f64::MIN_POSITIVE);
    for p in points {
        let a = direct.coefficient_acted(alg, p, xprime, t)?;
        worst = worst.max((moved.coefficient(alg, p)? - a).norm());
        scale = scale.max(a.norm());
    }
    Ok(worst / scale)
}

/// Columns `k` of each irrep block carrying a coefficient above `tol`; the finer decomposition
/// by weight columns is preserved when this set is unchanged.
pub fn column_support(psi: &VerticalSection, tol: f64) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    for t in &psi.terms {
        for k in 0..t.irrep.dim() {
            if t.coeffs.column(k).iter().any(|z| z.norm() > tol) {
                out.push((t.irrep.twice_spin, k));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

