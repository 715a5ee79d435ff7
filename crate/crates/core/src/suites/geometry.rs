use super::{cplx, max_over, Ctx, Outcome};
use crate::complexifier::Complexifier;
use crate::error::Result;
use crate::flows::*;
use crate::lie::LieAlgebra;
use crate::polarization::*;
use crate::report::Provenance::{Derived, Theorem, Trivial};
use crate::{complexify, complexify_vec, sampling, RVec, TimeParams, C64};
use serde_json::json;

fn complexifiers(ctx: &Ctx, alg: &LieAlgebra) -> Result<Vec<Complexifier>> {
    let main = ctx.cfg.complexifier(alg)?;
    let mut out = vec![main.clone()];
    if main.is_quadratic() && alg.dim() == 3 {
        out.push(Complexifier::softened(alg)?);
    }
    Ok(out)
}

pub(super) fn flows(ctx: &mut Ctx, alg: &LieAlgebra) -> Result<()> {
    let tol = ctx.cfg.tolerances.clone();
    let n = alg.dim();
    let hs = complexifiers(ctx, alg)?;
    for (f0, f) in ctx.cfg.torus_forms(alg)? {
        for h in &hs {
            let p = json!({"h": h.name(), "f0": f0});
            let seed = ctx.cfg.seed;
            ctx.check("complexifier-derivatives", p.clone(), Derived, 1e-6, |_| {
                let v = h.validate(alg, 50, seed)?;
                Ok(Outcome::Residual(v.gradient_fd.max(v.hessian_fd)))
            });
            ctx.check("complexifier-invariance", p.clone(), Trivial, 1e-10, |_| {
                let v = h.validate(alg, 50, seed)?;
                Ok(Outcome::Residual(v.invariance.max(v.equivariance).max(v.commutation)))
            });
            ctx.check("flows-commute", p.clone(), Theorem, tol.flow_commutation, |rng| {
                Ok(Outcome::Residual(max_over(1000, rng, |rng| {
                    let q = sampling::phase_point(rng, alg, 3.0);
                    let (t, s) = (sampling::uniform(rng, -2.0, 2.0), sampling::uniform(rng, -2.0, 2.0));
                    let a = flow_h(alg, h, t, &flow_f(alg, &f, s, &q));
                    let b = flow_f(alg, &f, s, &flow_h(alg, h, t, &q));
                    Ok(phase_distance(&a, &b))
                })?))
            });
            ctx.check("flow-h-vs-rk4", p.clone(), Derived, tol.flow_rk4, |rng| {
                Ok(Outcome::Residual(max_over(50, rng, |rng| {
                    let q = sampling::phase_point(rng, alg, 3.0);
                    let t = sampling::uniform(rng, -2.0, 2.0);
                    Ok(phase_distance(&flow_rk4(alg, &|y| h.gradient(y), t, &q, 400), &flow_h(alg, h, t, &q)))
                })?))
            });
            ctx.check("flow-f-vs-rk4", p.clone(), Derived, tol.flow_rk4, |rng| {
                Ok(Outcome::Residual(max_over(50, rng, |rng| {
                    let q = sampling::phase_point(rng, alg, 3.0);
                    let s = sampling::uniform(rng, -2.0, 2.0);
                    Ok(phase_distance(&flow_rk4(alg, &|y| f.apply(y), s, &q, 400), &flow_f(alg, &f, s, &q)))
                })?))
            });
            ctx.check("tangent-h-vs-fd", p.clone(), Theorem, tol.tangent_fd, |rng| {
                Ok(Outcome::Residual(max_over(100, rng, |rng| {
                    let q = sampling::phase_point(rng, alg, 3.0);
                    let t = sampling::uniform(rng, -2.0, 2.0);
                    let fd = tangent_map_fd(alg, &|z| flow_h(alg, h, t, z), &q, 1e-5);
                    Ok((tangent_flow_h(alg, h, t, &q)? - fd).amax())
                })?))
            });
            ctx.check("tangent-f-vs-fd", p.clone(), Theorem, tol.tangent_fd, |rng| {
                Ok(Outcome::Residual(max_over(100, rng, |rng| {
                    let q = sampling::phase_point(rng, alg, 3.0);
                    let s = sampling::uniform(rng, -2.0, 2.0);
                    let fd = tangent_map_fd(alg, &|z| flow_f(alg, &f, s, z), &q, 1e-5);
                    Ok((tangent_flow_f(alg, &f, s, &q) - fd).amax())
                })?))
            });
            ctx.check("tangent-chain-rule", p.clone(), Derived, tol.chain_rule, |rng| {
                Ok(Outcome::Residual(max_over(100, rng, |rng| {
                    let q = sampling::phase_point(rng, alg, 3.0);
                    let (t, s) = (sampling::uniform(rng, -2.0, 2.0), sampling::uniform(rng, -2.0, 2.0));
                    let z = flow_h(alg, h, t, &flow_f(alg, &f, s, &q));
                    let chain = tangent_flow_f(alg, &f, -s, &flow_f(alg, &f, s, &q)) * tangent_flow_h(alg, h, -t, &z)?;
                    Ok((chain - composed_inverse_derivative(alg, h, &f, t, s, &q)?).amax())
                })?))
            });
            ctx.check("flows-symplectic", p.clone(), Derived, 1e-11, |rng| {
                Ok(Outcome::Residual(max_over(50, rng, |rng| {
                    let q = sampling::phase_point(rng, alg, 3.0);
                    let (t, s) = (sampling::uniform(rng, -2.0, 2.0), sampling::uniform(rng, -2.0, 2.0));
                    let z = flow_f(alg, &f, s, &q);
                    let d = tangent_flow_f(alg, &f, s, &q);
                    let r1 = (d.transpose() * omega_matrix(alg, &z.y) * &d - omega_matrix(alg, &q.y)).amax();
                    let z = flow_h(alg, h, t, &q);
                    let d = tangent_flow_h(alg, h, t, &q)?;
                    let r2 = (d.transpose() * omega_matrix(alg, &z.y) * &d - omega_matrix(alg, &q.y)).amax();
                    Ok(r1.max(r2))
                })?))
            });
            ctx.check("hamiltonian-field-vs-omega", p.clone(), Derived, 1e-11, |rng| {
                Ok(Outcome::Residual(max_over(50, rng, |rng| {
                    let y = sampling::ball(rng, n, 3.0);
                    let mut worst: f64 = 0.0;
                    for u in [h.gradient(&y), f.apply(&y)] {
                        worst = worst.max((hamiltonian_field(alg, &y, &u).stacked() - hamiltonian_field_oracle(alg, &y, &u)?).amax());
                    }
                    Ok(worst)
                })?))
            });
        }
        let p = json!({"f0": f0});
        ctx.check("automorphism-min-singular-value", p.clone(), Theorem, 0.0, |_| {
            let mut dirs = Vec::new();
            for k in 0..n {
                for sgn in [1.0, -1.0] {
                    let mut e = RVec::zeros(n);
                    e[k] = sgn;
                    dirs.push(e);
                }
            }
            let mut diag = RVec::from_element(n, 1.0);
            dirs.push(diag.clone().normalize());
            diag[0] = -1.0;
            dirs.push(diag.normalize());
            let mut best = f64::INFINITY;
            for r in 0..=10 {
                for d in &dirs {
                    let y = d * (0.5 * r as f64);
                    for k in -10..=10 {
                        best = best.min(min_singular_value(alg, &f, 0.5 * k as f64, &y));
                    }
                }
            }
            Ok(Outcome::Positive(best))
        });
        ctx.check("bracket-vs-chart", p.clone(), Theorem, tol.appendix_fd, |rng| {
            let a2 = alg.clone();
            let w = sampling::gaussian_vec(rng, n);
            let x1 = LeftInvariantField::new(
                Component::function(move |y| complexify_vec(&a2.bracket(y, &w))),
                Component::function(|y| complexify_vec(&RVec::from_fn(y.len(), |i, _| (y[i] * (i + 1) as f64).sin() + y[0] * y[i]))),
            );
            let x2 = LeftInvariantField::new(
                Component::constant(&sampling::gaussian_vec(rng, n)),
                Component::function(|y| complexify_vec(&(y * y.norm()))),
            );
            Ok(Outcome::Residual(max_over(50, rng, |rng| {
                let y = sampling::ball(rng, n, 2.0);
                let (u, v) = left_invariant_bracket(alg, &x1, &x2, &y);
                let (uo, vo) = bracket_chart_oracle(alg, &x1, &x2, &y)?;
                Ok((u - uo).camax().max((v - vo).camax()))
            })?))
        });
        let h = &hs[0];
        for which in ["h", "f", "combined"] {
            ctx.check(&format!("pushforward-{which}-vs-oracle"), json!({"f0": f0, "h": h.name()}), Theorem, tol.appendix_fd, |rng| {
                let c = LeftInvariantField::new(
                    Component::constant(&sampling::gaussian_vec(rng, n)),
                    Component::constant(&sampling::gaussian_vec(rng, n)),
                );
                let nc = LeftInvariantField::new(
                    Component::function(|y| complexify_vec(&(y * 2.0))),
                    Component::function(|y| complexify_vec(&RVec::from_fn(y.len(), |i, _| y[(i + 1) % y.len()] * y[i] + 1.0))),
                );
                Ok(Outcome::Residual(max_over(50, rng, |rng| {
                    let q = sampling::phase_point(rng, alg, 2.0);
                    let (t, s) = (sampling::uniform(rng, -1.5, 1.5), sampling::uniform(rng, -1.5, 1.5));
                    let ((a, b), (ao, bo)) = match which {
                        "h" => (pushforward_h(alg, h, t, &nc, &q)?, pushforward_oracle(alg, &|z| flow_h(alg, h, t, z), &|z| flow_h(alg, h, -t, z), &nc, &q)),
                        "f" => (pushforward_f(alg, &f, s, &c, &q)?, pushforward_oracle(alg, &|z| flow_f(alg, &f, s, z), &|z| flow_f(alg, &f, -s, z), &c, &q)),
                        _ => (
                            pushforward_combined(alg, h, &f, t, s, &c, &q)?,
                            pushforward_oracle(
                                alg,
                                &|z| flow_h(alg, h, t, &flow_f(alg, &f, s, z)),
                                &|z| flow_f(alg, &f, -s, &flow_h(alg, h, -t, z)),
                                &c,
                                &q,
                            ),
                        ),
                    };
                    Ok((a - ao).camax().max((b - bo).camax()))
                })?))
            });
        }
    }
    Ok(())
}

pub(super) fn polarization(ctx: &mut Ctx, alg: &LieAlgebra) -> Result<()> {
    let n = alg.dim();
    let h = ctx.cfg.complexifier(alg)?;
    ctx.check("omega-equals-minus-dtheta", json!({}), Derived, 1e-5, |rng| {
        Ok(Outcome::Residual(max_over(20, rng, |rng| {
            let p = sampling::phase_point(rng, alg, 2.0);
            let a = sampling::gaussian_vec(rng, 2 * n);
            let b = sampling::gaussian_vec(rng, 2 * n);
            Ok(((a.transpose() * omega_matrix(alg, &p.y) * &b)[(0, 0)] - minus_dtheta_chart(alg, &p, &a, &b)).abs())
        })?))
    });
    for (f0, f) in ctx.cfg.torus_forms(alg)? {
        if h.is_quadratic() && alg.name() == "su2" && f0 == 1.0 {
            ctx.check("metric-at-origin-spectrum", json!({"tau": [0, 1], "sigma": [0, 1], "f0": f0}), Derived, 1e-12, |_| {
                let params = TimeParams::new(C64::new(0.0, 1.0), C64::new(0.0, 1.0))?;
                let w = kahler_metric_w(alg, &h, &f, &params, &RVec::zeros(3))?;
                let mut e: Vec<f64> = w.map(|z| z.re).symmetric_eigenvalues().iter().copied().collect();
                e.sort_by(f64::total_cmp);
                Ok(Outcome::Residual((e[0] - 2.0).abs().max((e[1] - 2.0).abs()).max((e[2] - 4.0).abs())))
            });
        }
        for tau in ctx.cfg.taus() {
            let p = json!({"tau": cplx(tau), "f0": f0, "h": h.name()});
            ctx.check("real-sigma-frame-is-pushforward", p.clone(), Theorem, 1e-9, |rng| {
                Ok(Outcome::Residual(max_over(20, rng, |rng| {
                    let q = sampling::phase_point(rng, alg, 2.0);
                    let s = sampling::uniform(rng, -2.0, 2.0);
                    let z = flow_f(alg, &f, s, &q);
                    let fr0 = build_frame(alg, &h, &f, &TimeParams::new(tau, C64::new(0.0, 0.0))?, &z.y)?.stacked();
                    let pushed = complexify(&tangent_flow_f(alg, &f, -s, &z)) * fr0;
                    let direct = build_frame(alg, &h, &f, &TimeParams { tau, sigma: C64::new(s, 0.0) }, &q.y)?.stacked();
                    Ok((pushed - direct).camax())
                })?))
            });
            for sigma in ctx.cfg.sigmas() {
                let params = TimeParams::new(tau, sigma)?;
                let p = json!({"tau": cplx(tau), "sigma": cplx(sigma), "f0": f0, "h": h.name()});
                ctx.check("frame-rank", p.clone(), Theorem, 0.0, |rng| {
                    Ok(Outcome::Residual(max_over(20, rng, |rng| {
                        let y = sampling::ball(rng, n, 3.0);
                        Ok((n as f64 - numerical_rank(&build_frame(alg, &h, &f, &params, &y)?.stacked(), 1e-10) as f64).abs())
                    })?))
                });
                ctx.check("involutivity", p.clone(), Theorem, 1e-5, |rng| {
                    Ok(Outcome::Residual(max_over(10, rng, |rng| involutivity_residual(alg, &h, &f, &params, &sampling::ball(rng, n, 2.0)))?))
                });
                ctx.check("map-a-diffeo-min-jacobian", p.clone(), Theorem, 0.0, |_| {
                    let rep = diffeo_sample(alg, &h, &f, &params, 100, 3.0, ctx_seed(&p))?;
                    Ok(Outcome::Positive(if rep.collisions == 0 { rep.min_abs_jacobian_det } else { -(rep.collisions as f64) }))
                });
            }
        }
    }
    Ok(())
}

fn ctx_seed(p: &serde_json::Value) -> u64 {
    p.to_string().bytes().fold(17u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64))
}

pub(super) fn kahler(ctx: &mut Ctx, alg: &LieAlgebra) -> Result<()> {
    let tol = ctx.cfg.tolerances.clone();
    let n = alg.dim();
    let h = ctx.cfg.complexifier(alg)?;
    for (f0, f) in ctx.cfg.torus_forms(alg)? {
        for tau in ctx.cfg.taus() {
            for sigma in ctx.cfg.sigmas() {
                let params = TimeParams::new(tau, sigma)?;
                let p = json!({"tau": cplx(tau), "sigma": cplx(sigma), "f0": f0, "h": h.name(), "points": 100});
                let mut rng = ctx.rng("points", &p);
                let ys: Vec<RVec> = (0..100).map(|_| sampling::ball(&mut rng, n, 3.0)).collect();
                let per_point = |g: &dyn Fn(&RVec) -> Result<f64>| -> Result<Vec<f64>> { ys.iter().map(g).collect() };
                let frames = |y: &RVec| build_frame(alg, &h, &f, &params, y).map(|fr| fr.stacked());
                ctx.check("isotropy", p.clone(), Theorem, tol.isotropy, |_| {
                    Ok(Outcome::Residual(per_point(&|y| Ok(isotropy_residual(alg, y, &frames(y)?)))?.into_iter().fold(0.0, f64::max)))
                });
                ctx.check("metric-hermitian", p.clone(), Theorem, tol.hermitian, |_| {
                    Ok(Outcome::Residual(
                        per_point(&|y| Ok(hermitian_residual(&kahler_metric_w(alg, &h, &f, &params, y)?)))?.into_iter().fold(0.0, f64::max),
                    ))
                });
                ctx.check("metric-positive", p.clone(), Theorem, 0.0, |_| {
                    Ok(Outcome::Positive(
                        per_point(&|y| Ok(min_eigenvalue(&kahler_metric_w(alg, &h, &f, &params, y)?)))?.into_iter().fold(f64::INFINITY, f64::min),
                    ))
                });
                ctx.check("metric-vs-frame-assembly", p.clone(), Derived, tol.metric_match, |_| {
                    Ok(Outcome::Residual(
                        per_point(&|y| {
                            let w = kahler_metric_w(alg, &h, &f, &params, y)?;
                            Ok((metric_from_frame(alg, y, &frames(y)?) - &w).camax() / (1.0 + w.camax()))
                        })?
                        .into_iter()
                        .fold(0.0, f64::max),
                    ))
                });
                ctx.check("potential-theta-vs-dlambda", p.clone(), Theorem, tol.potential_fd, |_| {
                    Ok(Outcome::Residual(per_point(&|y| potential_residual(alg, &h, &f, &params, y))?.into_iter().fold(0.0, f64::max)))
                });
            }
        }
    }
    Ok(())
}
