use super::{cplx, max_over, Ctx, Outcome};
use crate::error::{Error, Result};
use crate::hilbert::quadrature::haar_su2;
use crate::hilbert::*;
use crate::lie::{LieAlgebra, PhasePoint};
use crate::report::Provenance::{Derived, Theorem, Trivial};
use crate::{sampling, CMat, RVec, TimeParams, C64, I};
use serde_json::json;

fn require_su2(alg: &LieAlgebra, suite: &str) -> Result<()> {
    if alg.name() != "su2" || alg.matrix_size() != 2 {
        return Err(Error::Config(format!("suite {suite} needs the su2 group (irreducible representations are built for SU(2) only)")));
    }
    Ok(())
}

fn random_section(rng: &mut sampling::SampleRng, twice: &[u32]) -> VerticalSection {
    let terms = twice
        .iter()
        .map(|&t| {
            let irrep = Irrep::new(t);
            let d = irrep.dim();
            PwTerm { irrep, coeffs: CMat::from_fn(d, d, |_, _| C64::new(sampling::uniform(rng, -1.0, 1.0), sampling::uniform(rng, -1.0, 1.0))) }
        })
        .collect();
    VerticalSection { terms }
}

pub(super) fn unitarity(ctx: &mut Ctx, alg: &LieAlgebra) -> Result<()> {
    require_su2(alg, "cst-unitarity")?;
    let tol = ctx.cfg.tolerances.clone();
    let lmax = ctx.cfg.lambda_max;
    let h = ctx.cfg.complexifier(alg)?;
    let opts = ctx.cfg.quadrature.clone();

    ctx.check("vertical-schur-orthogonality", json!({"lambda_max": lmax}), Derived, crate::tolerances::HAAR_EXACT, |_| {
        let rule = haar_su2(alg, 2.0 * lmax);
        let basis = matrix_element_basis(lmax);
        let mut worst: f64 = 0.0;
        for (a, (ra, _, _, sa)) in basis.iter().enumerate() {
            for (b, (_, _, _, sb)) in basis.iter().enumerate() {
                let want = if a == b { 1.0 / ra.dim() as f64 } else { 0.0 };
                worst = worst.max((inner_product_vertical(&rule, sa, sb)? - want).norm());
            }
        }
        Ok(Outcome::Residual(worst))
    });
    ctx.check("haar-normalized", json!({}), Trivial, crate::tolerances::HAAR_EXACT, |_| {
        let rule = haar_su2(alg, 0.0);
        let one = VerticalSection::constant();
        Ok(Outcome::Compare(inner_product_vertical(&rule, &one, &one)?, C64::new(1.0, 0.0)))
    });
    if h.is_quadratic() {
        for twice in 0..=(2.0 * lmax) as u32 {
            let j = twice as f64 / 2.0;
            ctx.check("spectral-qh", json!({"spin": j}), Derived, 1e-13, |_| {
                Ok(Outcome::Compare(C64::new(spectral_qh(alg, &h, Irrep::new(twice)), 0.0), C64::new(0.5 * (j + 0.5).powi(2), 0.0)))
            });
        }
    }

    let forms = ctx.cfg.torus_forms(alg)?;
    let (f0, f) = forms[0].clone();
    ctx.check("spectral-qf-zero-weight", json!({"f0": f0}), Trivial, 0.0, |_| Ok(Outcome::Residual(spectral_qf(&f, Irrep::new(2), 1).abs())));
    ctx.check("prequantum-commutator", json!({"f0": f0, "h": h.name()}), Theorem, 1e-6, |rng| {
        Ok(Outcome::Residual(max_over(6, rng, |rng| {
            let psi = random_section(rng, &[1, 2]);
            let p = sampling::phase_point(rng, alg, 1.5);
            let w = sampling::gaussian_vec(rng, 3);
            let make = || -> SectionFn {
                let psi = psi.clone();
                let w = w.clone();
                Box::new(move |q: &PhasePoint| Ok(psi.eval_at(&q.x.0)? * (-q.y.norm_squared() + q.y.dot(&w)).exp()))
            };
            let hf = prequantum_h(alg, &h, prequantum_f(alg, &f, make()));
            let fh = prequantum_f(alg, &f, prequantum_h(alg, &h, make()));
            Ok((hf(&p)? - fh(&p)?).norm())
        })?))
    });
    ctx.check("prequantum-f-gaussian-closed-form", json!({"f0": f0}), Derived, 1e-7, |rng| {
        let gauss: SectionFn = Box::new(|q: &PhasePoint| Ok(q.x.0[(0, 0)] * (-q.y[2] * q.y[2]).exp()));
        let fg = prequantum_f(alg, &f, gauss);
        Ok(Outcome::Residual(max_over(10, rng, |rng| {
            let x = sampling::group_element(rng, alg);
            let b = sampling::uniform(rng, -2.0, 2.0);
            let s = x.0[(0, 0)] * (-b * b).exp();
            let want = s * (f0 * b / 2.0 - f0 * b * b / 2.0);
            Ok((fg(&PhasePoint::new(x, RVec::from_column_slice(&[0.0, 0.0, b])))? - want).norm())
        })?))
    });
    ctx.check("transform-at-zero-is-identity", json!({}), Trivial, 1e-13, |rng| {
        let zero = TimeParams { tau: C64::new(0.0, 0.0), sigma: C64::new(0.0, 0.0) };
        Ok(Outcome::Residual(max_over(10, rng, |rng| {
            let psi = random_section(rng, &[0, 1, 3]);
            let s = apply_cst(alg, &h, &f, &zero, &psi)?;
            let p = sampling::phase_point(rng, alg, 2.0);
            Ok((s.value(alg, &p)? - psi.eval_at(&p.x.0)?).norm())
        })?))
    });
    for tau in ctx.cfg.taus() {
        for sigma in ctx.cfg.sigmas() {
            let p = json!({"tau": cplx(tau), "sigma": cplx(sigma), "f0": f0, "h": h.name()});
            let params = TimeParams::new(tau, sigma)?;
            ctx.check("transform-evolution-equations", p.clone(), Derived, 1e-6, |rng| {
                Ok(Outcome::Residual(max_over(3, rng, |rng| {
                    let irrep = Irrep::new(1 + sampling::uniform(rng, 0.0, 3.0) as u32);
                    let (j, k) = (sampling::uniform(rng, 0.0, irrep.dim() as f64) as usize, sampling::uniform(rng, 0.0, irrep.dim() as f64) as usize);
                    let el = VerticalSection::matrix_element(irrep, j, k);
                    let q = sampling::phase_point(rng, alg, 1.2);
                    let at = |t: C64, s: C64| apply_cst(alg, &h, &f, &TimeParams { tau: t, sigma: s }, &el)?.value(alg, &q);
                    let eps = 1e-4;
                    let u0 = at(tau, sigma)?;
                    let dtau = (at(tau + eps, sigma)? - at(tau - eps, sigma)?) / (2.0 * eps);
                    let dsig = (at(tau, sigma + eps)? - at(tau, sigma - eps)?) / (2.0 * eps);
                    let sec = || -> Result<SectionFn> {
                        let s = apply_cst(alg, &h, &f, &params, &el)?;
                        Ok(Box::new(move |z: &PhasePoint| s.value(alg, z)))
                    };
                    let hu = prequantum_h(alg, &h, sec()?)(&q)?;
                    let fu = prequantum_f(alg, &f, sec()?)(&q)?;
                    let scale = u0.norm().max(1e-3);
                    let rh = (dtau - (-I * hu + I * spectral_qh(alg, &h, irrep) * u0)).norm() / scale;
                    let rf = (dsig - (-I * fu + I * spectral_qf(&f, irrep, k) * u0)).norm() / scale;
                    Ok(rh.max(rf))
                })?))
            });
            ctx.check("kahler-sections-covariantly-constant", p.clone(), Derived, tol.covariant, |rng| {
                Ok(Outcome::Residual(max_over(4, rng, |rng| {
                    let s = apply_cst(alg, &h, &f, &params, &random_section(rng, &[1, 2]))?;
                    covariant_residual(alg, &s, &sampling::phase_point(rng, alg, 1.0))
                })?))
            });
            ctx.check("intertwines-g-times-t", p.clone(), Theorem, 1e-8, |rng| {
                Ok(Outcome::Residual(max_over(4, rng, |rng| {
                    let psi = random_section(rng, &[1, 2, 3]);
                    let xp = sampling::group_element(rng, alg).0;
                    let t = alg.exp(&RVec::from_column_slice(&[0.0, 0.0, sampling::uniform(rng, -6.0, 6.0)])).0;
                    let pts: Vec<PhasePoint> = (0..4).map(|_| sampling::phase_point(rng, alg, 1.5)).collect();
                    intertwiner_residual(alg, &h, &f, &params, &psi, &xp, &t, &pts)
                })?))
            });
            if sigma == C64::new(0.0, 0.0) {
                ctx.check("intertwines-g-times-g", p.clone(), Derived, 1e-8, |rng| {
                    Ok(Outcome::Residual(max_over(4, rng, |rng| {
                        let psi = random_section(rng, &[1, 2]);
                        let xp = sampling::group_element(rng, alg).0;
                        let g = sampling::group_element(rng, alg).0;
                        let pts: Vec<PhasePoint> = (0..4).map(|_| sampling::phase_point(rng, alg, 1.5)).collect();
                        intertwiner_residual(alg, &h, &f, &params, &psi, &xp, &g, &pts)
                    })?))
                });
            }
        }
    }
    ctx.check("torus-action-column-phases", json!({}), Theorem, 1e-13, |rng| {
        Ok(Outcome::Residual(max_over(10, rng, |rng| {
            let psi = random_section(rng, &[1, 2, 4]);
            let a = sampling::uniform(rng, -6.0, 6.0);
            let e3 = RVec::from_column_slice(&[0.0, 0.0, a]);
            let moved = psi.acted(&CMat::identity(2, 2), &alg.exp(&e3).0)?;
            let mut worst: f64 = 0.0;
            for (b, m) in psi.terms.iter().zip(&moved.terms) {
                for k in 0..b.irrep.dim() {
                    let phase = (I * b.irrep.weight(k).dot(&e3)).exp();
                    worst = worst.max((m.coeffs.column(k) - b.coeffs.column(k) * phase).camax());
                }
            }
            Ok(worst)
        })?))
    });
    ctx.check("finer-decomposition-preserved", json!({}), Theorem, 0.0, |rng| {
        Ok(Outcome::Residual(max_over(10, rng, |rng| {
            let irrep = Irrep::new(1 + sampling::uniform(rng, 0.0, 4.0) as u32);
            let k = sampling::uniform(rng, 0.0, irrep.dim() as f64) as usize;
            let mut coeffs = CMat::zeros(irrep.dim(), irrep.dim());
            for j in 0..irrep.dim() {
                coeffs[(j, k)] = C64::new(sampling::uniform(rng, -1.0, 1.0), sampling::uniform(rng, -1.0, 1.0));
            }
            let psi = VerticalSection { terms: vec![PwTerm { irrep, coeffs }] };
            let xp = sampling::group_element(rng, alg).0;
            let t = alg.exp(&RVec::from_column_slice(&[0.0, 0.0, sampling::uniform(rng, -6.0, 6.0)])).0;
            let before = column_support(&psi, 1e-12);
            let after = column_support(&psi.acted(&xp, &t)?, 1e-12);
            Ok(if before == after { 0.0 } else { 1.0 })
        })?))
    });

    for (f0, f) in &forms {
        for sigma in ctx.cfg.mixed_sigmas() {
            let p = json!({"sigma": cplx(sigma), "f0": f0, "lambda_max": lmax});
            let mut rep = None;
            ctx.check("unitarity-mixed", p.clone(), Theorem, tol.unitarity, |_| {
                let r = unitarity_mixed(alg, f, sigma, lmax, &opts)?;
                let v = r.max_deviation;
                rep = Some(r);
                Ok(Outcome::Residual(v))
            });
            if let Some(r) = rep {
                ctx.check("unitarity-off-diagonal", p.clone(), Theorem, tol.unitarity, |_| Ok(Outcome::Residual(r.max_off_diagonal)));
            }
            ctx.check("torus-gaussian-integral", p.clone(), Derived, tol.gaussian, |_| {
                let r = alg.rank() as f64;
                let mut worst: f64 = 0.0;
                for irrep in Irrep::up_to(lmax) {
                    for k in 0..irrep.dim() {
                        let w = irrep.weight(k);
                        let got = torus_gaussian_integral(alg, f, sigma.im, &w, opts.gh_order)?;
                        let want = (std::f64::consts::PI / sigma.im).powf(r / 2.0) / f.det().sqrt() * (sigma.im * w.dot(&f.apply(&w))).exp();
                        worst = worst.max((got / want - 1.0).abs());
                    }
                }
                Ok(Outcome::Residual(worst))
            });
        }
    }
    Ok(())
}

pub(super) fn norm_experiment(ctx: &mut Ctx, alg: &LieAlgebra) -> Result<()> {
    require_su2(alg, "cst-norm-experiment")?;
    let tol = ctx.cfg.tolerances.clone();
    let h = ctx.cfg.complexifier(alg)?;
    let opts = ctx.cfg.quadrature.clone();
    let lmax = ctx.cfg.norm_lambda_max;
    let forms = ctx.cfg.torus_forms(alg)?;
    let (f0, f) = forms.iter().find(|(f0, _)| *f0 == 1.0).unwrap_or(&forms[0]).clone();
    ctx.check("kahler-l2-finite-spin-half", json!({"tau": [0, 1], "sigma": [0, 1], "f0": f0, "h": h.name()}), Theorem, tol.norm_convergence, |_| {
        let params = TimeParams::new(C64::new(0.0, 1.0), C64::new(0.0, 1.0))?;
        let (rows, gram) = kahler_norm_table(alg, &h, &f, &params, 0.5, &crate::hilbert::QuadratureOptions { tolerance: tol.norm_convergence, ..opts.clone() })?;
        if rows.iter().any(|r| !(r.norm_squared.is_finite() && r.norm_squared > 0.0)) {
            return Err(Error::Numeric("non-finite or non-positive norm".into()));
        }
        Ok(Outcome::Residual(gram.estimate))
    });
    let mut table = Vec::new();
    for tau in ctx.cfg.taus() {
        for sigma in ctx.cfg.sigmas() {
            let p = json!({"tau": cplx(tau), "sigma": cplx(sigma), "f0": f0, "h": h.name(), "lambda_max": ctx.cfg.norm_lambda_max});
            let mut gram_off = None;
            ctx.check("norm-table-converged", p.clone(), Derived, tol.norm_convergence, |_| {
                let params = TimeParams::new(tau, sigma)?;
                let (rows, gram) = kahler_norm_table(alg, &h, &f, &params, lmax, &crate::hilbert::QuadratureOptions { tolerance: tol.norm_convergence, ..opts.clone() })?;
                if rows.iter().any(|r| !r.norm_squared.is_finite()) {
                    return Err(Error::Numeric("non-finite norm".into()));
                }
                let scale = rows.iter().map(|r| r.norm_squared).fold(0.0, f64::max);
                let mut off: f64 = 0.0;
                for (a, ra) in rows.iter().enumerate() {
                    for (b, rb) in rows.iter().enumerate() {
                        if ra.twice_spin != rb.twice_spin && a != b {
                            off = off.max(gram.matrix[(a, b)].norm() / scale);
                        }
                    }
                }
                gram_off = Some(off);
                table.extend(rows);
                Ok(Outcome::Residual(gram.estimate))
            });
            if let Some(off) = gram_off {
                ctx.check("kahler-cross-irrep-orthogonality", p.clone(), Derived, 1e-10, |_| Ok(Outcome::Residual(off)));
            }
        }
    }
    ctx.report.norm_table = Some(table);
    Ok(())
}
