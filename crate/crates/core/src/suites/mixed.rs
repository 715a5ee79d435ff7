use super::{cplx, max_over, Ctx, Outcome};
use crate::error::Result;
use crate::hilbert::{apply_cst, covariant_residual, Irrep, PwTerm, VerticalSection};
use crate::lie::{GroupPoint, LieAlgebra, PhasePoint};
use crate::polarization::*;
use crate::report::Provenance::{Derived, Theorem, Trivial};
use crate::{sampling, CMat, RVec, TimeParams, C64};
use serde_json::json;

fn cartan_vector(alg: &LieAlgebra, rng: &mut sampling::SampleRng, scale: f64) -> RVec {
    let mut v = RVec::zeros(alg.dim());
    for &c in alg.cartan() {
        v[c] = sampling::uniform(rng, -scale, scale);
    }
    v
}

pub(super) fn run(ctx: &mut Ctx, alg: &LieAlgebra) -> Result<()> {
    let tol = ctx.cfg.tolerances.clone();
    let n = alg.dim();
    let r = alg.rank();
    let h = ctx.cfg.complexifier(alg)?;
    for (f0, f) in ctx.cfg.torus_forms(alg)? {
        let fmin = f.torus_matrix().clone().symmetric_eigenvalues().min();
        for sigma in ctx.cfg.mixed_sigmas() {
            let p = json!({"sigma": cplx(sigma), "f0": f0, "h": h.name()});
            let mut rng = ctx.rng("points", &p);
            let reports: Result<Vec<MixedReport>> = (0..20).map(|_| mixed_report(alg, &h, &f, sigma, &sampling::ball(&mut rng, n, 3.0))).collect();
            let reports = match reports {
                Ok(v) => v,
                Err(e) => {
                    ctx.check("mixed-report", p.clone(), Theorem, tol.mixed_invariant, |_| Err(e));
                    continue;
                }
            };
            let worst = |g: fn(&MixedReport) -> f64| reports.iter().map(g).fold(0.0, f64::max);
            let least = |g: fn(&MixedReport) -> f64| reports.iter().map(g).fold(f64::INFINITY, f64::min);
            ctx.check("torus-part-transversal", p.clone(), Theorem, 0.0, |_| Ok(Outcome::Positive(least(|m| m.torus_transversality))));
            ctx.check("real-part-dimension", p.clone(), Trivial, 0.0, |_| {
                Ok(Outcome::Compare(C64::new(worst(|m| m.real_part_dimension as f64), 0.0), C64::new((n - r) as f64, 0.0)))
            });
            ctx.check("real-part-is-perp-complement", p.clone(), Theorem, tol.mixed_invariant, |_| Ok(Outcome::Residual(worst(|m| m.real_part_residual))));
            ctx.check("leaf-tangency", p.clone(), Theorem, tol.mixed_invariant, |_| Ok(Outcome::Residual(worst(|m| m.leaf_tangency))));
            ctx.check("leaf-isotropy", p.clone(), Theorem, tol.mixed_invariant, |_| Ok(Outcome::Residual(worst(|m| m.leaf_isotropy))));
            ctx.check("leaf-positivity", p.clone(), Derived, tol.mixed_invariant, |_| {
                Ok(Outcome::Compare(C64::new(least(|m| m.leaf_positivity), 0.0), C64::new(2.0 * sigma.im * fmin, 0.0)))
            });
            ctx.check("leaf-potential", p.clone(), Theorem, tol.mixed_invariant, |_| Ok(Outcome::Residual(worst(|m| m.leaf_potential))));
            ctx.check("frame-isotropy", p.clone(), Theorem, tol.mixed_invariant, |_| Ok(Outcome::Residual(worst(|m| m.frame_isotropy))));
            ctx.check("frame-spans-mixed-polarization", p.clone(), Theorem, tol.mixed_invariant, |_| Ok(Outcome::Residual(worst(|m| m.frame_match))));
            ctx.check("involutivity", p.clone(), Theorem, tol.mixed_invariant, |_| Ok(Outcome::Residual(worst(|m| m.involutivity))));
            ctx.check("leaf-volume-pairing", p.clone(), Theorem, tol.leaf_volume, |rng| {
                Ok(Outcome::Residual(max_over(10, rng, |rng| {
                    let lv = leaf_volume_check(alg, &f, sigma, &sampling::ball(rng, n, 3.0))?;
                    Ok(lv.pair_residual.max(lv.top_residual))
                })?))
            });
            ctx.check("leaf-coordinates-holomorphic", p.clone(), Theorem, tol.leaf_eigen, |rng| {
                Ok(Outcome::Residual(max_over(10, rng, |rng| {
                    let x0 = sampling::group_element(rng, alg);
                    let y0 = sampling::ball(rng, n, 2.0);
                    let leaf = Leaf { x0: x0.clone(), y0: y0.clone() };
                    let q = PhasePoint::new(GroupPoint(&x0.0 * alg.exp(&cartan_vector(alg, rng, 1.0)).0), &y0 + cartan_vector(alg, rng, 1.0));
                    leaf_eigen_residual(alg, &f, sigma, &leaf, &q)
                })?))
            });
            if alg.name() == "su2" {
                ctx.check("mixed-sections-covariantly-constant", p.clone(), Derived, tol.covariant, |rng| {
                    let params = TimeParams::mixed(sigma)?;
                    Ok(Outcome::Residual(max_over(6, rng, |rng| {
                        let irrep = Irrep::new(1 + (sampling::uniform(rng, 0.0, 3.0) as u32));
                        let d = irrep.dim();
                        let coeffs = CMat::from_fn(d, d, |_, _| C64::new(sampling::uniform(rng, -1.0, 1.0), sampling::uniform(rng, -1.0, 1.0)));
                        let s = apply_cst(alg, &h, &f, &params, &VerticalSection { terms: vec![PwTerm { irrep, coeffs }] })?;
                        covariant_residual(alg, &s, &sampling::phase_point(rng, alg, 1.5))
                    })?))
                });
            }
        }
    }
    Ok(())
}
