use super::{cplx, max_over, Ctx, Outcome};
use crate::complexifier::Complexifier;
use crate::error::Result;
use crate::flows::map_a_jacobian_fd;
use crate::halfform::*;
use crate::lie::{LieAlgebra, PhasePoint};
use crate::report::Provenance::{Derived, Theorem, Trivial};
use crate::{sampling, RVec, TimeParams, C64};
use serde_json::json;

pub(super) fn run(ctx: &mut Ctx, alg: &LieAlgebra) -> Result<()> {
    let tol = ctx.cfg.tolerances.clone();
    let n = alg.dim();
    let h = ctx.cfg.complexifier(alg)?;
    ctx.check("eta-class-function-vs-roots", json!({}), Derived, 1e-12, |rng| {
        Ok(Outcome::Residual(max_over(20, rng, |rng| {
            let mut y = RVec::zeros(n);
            for (k, &c) in alg.cartan().iter().enumerate() {
                y[c] = sampling::uniform(rng, -4.0, 4.0) * (k + 1) as f64;
            }
            let e = eta(alg, &y)?;
            Ok((e - eta_roots(alg, &y)?).abs() / e)
        })?))
    });
    if h.is_quadratic() && alg.name() == "su2" {
        ctx.check("density-at-origin", json!({"tau": [0, 1], "sigma": [0, 1], "f0": 1.0}), Derived, 1e-14, |_| {
            let f = crate::complexifier::TorusForm::scalar(alg, 1.0)?;
            let params = TimeParams::new(C64::new(0.0, 1.0), C64::new(0.0, 1.0))?;
            Ok(Outcome::Compare(C64::new(density(alg, &h, &f, &params, &RVec::zeros(n))?, 0.0), C64::new(0.5f64.sqrt(), 0.0)))
        });
    }
    let soft;
    let jac_h = if h.is_quadratic() && n == 3 {
        soft = Complexifier::softened(alg)?;
        &soft
    } else {
        &h
    };
    for tau in ctx.cfg.taus() {
        let p = json!({"tau": cplx(tau), "h": jac_h.name()});
        ctx.check("complexifier-jacobian-vs-fd", p, Derived, 1e-7, |rng| {
            let f = crate::complexifier::TorusForm::scalar(alg, 1.0)?;
            let params = TimeParams::new(tau, C64::new(0.0, 0.0))?;
            Ok(Outcome::Residual(max_over(10, rng, |rng| {
                let y = sampling::ball(rng, n, 2.0);
                let q = PhasePoint::new(alg.identity(), y.clone());
                Ok((complexifier_jacobian(alg, jac_h, tau, &y)? - map_a_jacobian_fd(alg, jac_h, &f, &params, &q, 1e-5)).amax())
            })?))
        });
    }
    for (f0, f) in ctx.cfg.torus_forms(alg)? {
        for tau in ctx.cfg.taus() {
            for sigma in ctx.cfg.sigmas() {
                let params = TimeParams::new(tau, sigma)?;
                let p = json!({"tau": cplx(tau), "sigma": cplx(sigma), "f0": f0, "h": h.name()});
                ctx.check("density-closed-form-vs-frame-oracle", p.clone(), Theorem, tol.density_relative, |rng| {
                    Ok(Outcome::Residual(max_over(12, rng, |rng| {
                        let y = sampling::ball(rng, n, 3.0);
                        let d = density(alg, &h, &f, &params, &y)?;
                        Ok((density_frame_oracle(alg, &h, &f, &params, &y)? - d).norm() / d)
                    })?))
                });
                ctx.check("holomorphic-frame-span", p.clone(), Derived, 1e-9, |rng| {
                    Ok(Outcome::Residual(max_over(12, rng, |rng| holomorphic_frame_span_residual(alg, &h, &f, &params, &sampling::ball(rng, n, 3.0)))?))
                });
                if sigma.im == 0.0 {
                    ctx.check("density-ratio-at-real-sigma", p.clone(), Trivial, 0.0, |rng| {
                        Ok(Outcome::Residual(max_over(12, rng, |rng| Ok((density_ratio(alg, &h, &f, &params, &sampling::ball(rng, n, 5.0))? - 1.0).abs()))?))
                    });
                }
                let mut fit = None;
                ctx.check("growth-bound", p.clone(), Theorem, 0.0, |rng| {
                    let samples: Vec<(f64, f64)> = (0..400)
                        .map(|_| {
                            let y = sampling::ball(rng, n, 10.0);
                            Ok((y.norm(), density(alg, &h, &f, &params, &y)?.ln()))
                        })
                        .collect::<Result<_>>()?;
                    let g = growth_fit(&samples, 10)?;
                    let bad = if g.c0 > 0.0 && g.c1 > 0.0 && g.c1.is_finite() { g.excess.max(0.0) } else { f64::INFINITY };
                    fit = Some(g);
                    Ok(Outcome::Residual(bad))
                });
                if let Some(g) = fit {
                    ctx.report.fits.insert(format!("growth {p}"), json!({"c0": g.c0, "c1": g.c1}));
                }
            }
        }
    }
    Ok(())
}
