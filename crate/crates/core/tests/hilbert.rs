use kahlerflow::complexifier::{Complexifier, TorusForm};
use kahlerflow::hilbert::quadrature::haar_su2;
use kahlerflow::hilbert::*;
use kahlerflow::lie::{LieAlgebra, PhasePoint};
use kahlerflow::{sampling, CMat, RVec, TimeParams, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn e3(b: f64) -> RVec {
    RVec::from_column_slice(&[0.0, 0.0, b])
}

#[test]
fn vertical_schur_orthogonality() {
    let alg = LieAlgebra::su2();
    let rule = haar_su2(&alg, 2.0);
    let half = Irrep::new(1);
    let a = VerticalSection::matrix_element(half, 0, 0);
    assert!((inner_product_vertical(&rule, &a, &a).unwrap() - 0.5).norm() < 1e-12);
    let one = VerticalSection::constant();
    assert!((inner_product_vertical(&rule, &one, &one).unwrap() - 1.0).norm() < 1e-12);
    let b = VerticalSection::matrix_element(Irrep::new(2), 1, 2);
    assert!(inner_product_vertical(&rule, &a, &b).unwrap().norm() < 1e-10);
    let rule = haar_su2(&alg, 4.0);
    let basis = matrix_element_basis(2.0);
    for (ra, ja, ka, sa) in &basis {
        for (rb, jb, kb, sb) in &basis {
            let want = if (ra, ja, ka) == (rb, jb, kb) { 1.0 / ra.dim() as f64 } else { 0.0 };
            assert!((inner_product_vertical(&rule, sa, sb).unwrap() - want).norm() < 1e-12);
        }
    }
}

#[test]
fn spectral_values() {
    let alg = LieAlgebra::su2();
    let h = Complexifier::quadratic();
    let rho = alg.weyl_vector();
    assert!((spectral_qh(&alg, &h, Irrep::new(0)) - 0.5 * rho.norm_squared()).abs() < 1e-15);
    for n in 0..6u32 {
        let j = n as f64 / 2.0;
        assert!((spectral_qh(&alg, &h, Irrep::new(n)) - 0.5 * (j + 0.5).powi(2)).abs() < 1e-13);
    }
    let f = TorusForm::scalar(&alg, 1.7).unwrap();
    assert_eq!(spectral_qf(&f, Irrep::new(2), 1), 0.0);
    assert!((spectral_qf(&f, Irrep::new(3), 0) - 0.5 * 1.7 * 2.25).abs() < 1e-14);
}

#[test]
fn prequantum_operators() {
    let alg = LieAlgebra::su2();
    let h = Complexifier::quadratic();
    let f = TorusForm::scalar(&alg, 1.3).unwrap();
    let constant: SectionFn = Box::new(|_| Ok(c(1.0, 0.0)));
    let hc = prequantum_h(&alg, &h, constant);
    assert!(hc(&PhasePoint::new(alg.identity(), RVec::zeros(3))).unwrap().norm() < 1e-12);

    let gauss: SectionFn = Box::new(|p: &PhasePoint| Ok(p.x.0[(0, 0)] * (-p.y[2] * p.y[2]).exp()));
    let fg = prequantum_f(&alg, &f, gauss);
    let mut rng = sampling::rng(4);
    for _ in 0..5 {
        let x = sampling::group_element(&mut rng, &alg);
        let y3 = sampling::uniform(&mut rng, -2.0, 2.0);
        let p = PhasePoint::new(x.clone(), e3(y3));
        let s = x.0[(0, 0)] * (-y3 * y3).exp();
        let want = s * (1.3 * y3 / 2.0 - 1.3 * y3 * y3 / 2.0);
        assert!((fg(&p).unwrap() - want).norm() < 1e-7);
    }

    let soft = Complexifier::softened(&alg).unwrap();
    for hh in [&h, &soft] {
        for _ in 0..4 {
            let p = sampling::phase_point(&mut rng, &alg, 1.5);
            let make = || -> SectionFn {
                Box::new(|q: &PhasePoint| {
                    let m = Irrep::new(2).matrix(&q.x.0)?;
                    Ok(m[(0, 1)] * (-q.y.norm_squared()).exp() + q.y[0] * m[(2, 2)])
                })
            };
            let hf = prequantum_h(&alg, hh, prequantum_f(&alg, &f, make()));
            let fh = prequantum_f(&alg, &f, prequantum_h(&alg, hh, make()));
            let r = (hf(&p).unwrap() - fh(&p).unwrap()).norm();
            assert!(r < 1e-6, "{}: {r:e}", hh.name());
        }
    }
}

#[test]
fn transform_closed_form_and_evolution() {
    let alg = LieAlgebra::su2();
    let f = TorusForm::scalar(&alg, 0.8).unwrap();
    let mut rng = sampling::rng(9);
    let psi = {
        let mut s = VerticalSection::matrix_element(Irrep::new(2), 0, 1);
        s.terms.extend(VerticalSection::matrix_element(Irrep::new(1), 1, 0).terms);
        s
    };
    let zero = TimeParams { tau: c(0.0, 0.0), sigma: c(0.0, 0.0) };
    for hh in [Complexifier::quadratic(), Complexifier::softened(&alg).unwrap()] {
        let id = apply_cst(&alg, &hh, &f, &zero, &psi).unwrap();
        assert_eq!(id.kind, SectionKind::Vertical);
        for _ in 0..3 {
            let p = sampling::phase_point(&mut rng, &alg, 2.0);
            assert!((id.value(&alg, &p).unwrap() - psi.eval_at(&p.x.0).unwrap()).norm() < 1e-13);
        }

        let sigma = c(0.4, 0.9);
        let mixed = apply_cst(&alg, &hh, &f, &TimeParams::mixed(sigma).unwrap(), &VerticalSection::matrix_element(Irrep::new(2), 2, 0)).unwrap();
        for _ in 0..3 {
            let p = sampling::phase_point(&mut rng, &alg, 2.0);
            let g = alg.exp_complex(&(kahlerflow::complexify_vec(&f.apply(&p.y)) * sigma));
            let lam = -sigma * f.value(&p.y);
            let q = (C64::i() * sigma * f.value(&-Irrep::new(2).weight(0))).exp();
            let want = q * (-C64::i() * lam).exp() * Irrep::new(2).matrix(&(&p.x.0 * g)).unwrap()[(2, 0)];
            assert!((mixed.value(&alg, &p).unwrap() - want).norm() < 1e-12 * want.norm().max(1.0));
        }

        // d/dtau U = (-i h_pq + i Q(h)) U and d/dsigma U = (-i f_pq + i Q(f)) U on a single matrix element.
        let irrep = Irrep::new(2);
        let el = VerticalSection::matrix_element(irrep, 1, 2);
        let qh = spectral_qh(&alg, &hh, irrep);
        let qf = spectral_qf(&f, irrep, 2);
        for (tau, sigma) in [(c(0.3, 1.0), c(0.2, 0.5)), (c(0.0, 0.7), c(-0.5, 1.0))] {
            let p = sampling::phase_point(&mut rng, &alg, 1.2);
            let at = |t: C64, s: C64| apply_cst(&alg, &hh, &f, &TimeParams { tau: t, sigma: s }, &el).unwrap().value(&alg, &p).unwrap();
            let eps = 1e-4;
            let u0 = at(tau, sigma);
            let dtau = (at(tau + eps, sigma) - at(tau - eps, sigma)) / (2.0 * eps);
            let dsig = (at(tau, sigma + eps) - at(tau, sigma - eps)) / (2.0 * eps);
            let sec = || -> SectionFn {
                let s = apply_cst(&alg, &hh, &f, &TimeParams { tau, sigma }, &el).unwrap();
                let a = alg.clone();
                Box::new(move |q: &PhasePoint| s.value(&a, q))
            };
            let hu = prequantum_h(&alg, &hh, sec())(&p).unwrap();
            let fu = prequantum_f(&alg, &f, sec())(&p).unwrap();
            let rh = (dtau - (-C64::i() * hu + C64::i() * qh * u0)).norm() / u0.norm().max(1e-3);
            let rf = (dsig - (-C64::i() * fu + C64::i() * qf * u0)).norm() / u0.norm().max(1e-3);
            assert!(rh < 1e-6 && rf < 1e-6, "{} {rh:e} {rf:e}", hh.name());
        }
    }
}

#[test]
fn transformed_sections_are_polarized() {
    let alg = LieAlgebra::su2();
    let f = TorusForm::scalar(&alg, 1.0).unwrap();
    let mut rng = sampling::rng(17);
    let mut psi = VerticalSection::matrix_element(Irrep::new(2), 0, 2);
    psi.terms.extend(VerticalSection::matrix_element(Irrep::new(3), 1, 3).terms);
    for hh in [Complexifier::quadratic(), Complexifier::softened(&alg).unwrap()] {
        for params in [TimeParams::new(c(0.0, 1.0), c(0.0, 1.0)).unwrap(), TimeParams::new(c(0.5, 1.5), c(1.0, 0.5)).unwrap(), TimeParams::mixed(c(0.3, 1.0)).unwrap()] {
            let s = apply_cst(&alg, &hh, &f, &params, &psi).unwrap();
            for _ in 0..4 {
                let p = sampling::phase_point(&mut rng, &alg, 1.0);
                let r = covariant_residual(&alg, &s, &p).unwrap();
                assert!(r < 1e-6, "{} {params:?}: {r:e}", hh.name());
            }
        }
    }
}

#[test]
fn mixed_unitarity_and_gaussian_integral() {
    let alg = LieAlgebra::su2();
    for (f0, sigma) in [(1.0, c(0.0, 1.0)), (0.7, c(0.5, 0.4))] {
        let f = TorusForm::scalar(&alg, f0).unwrap();
        let rep = unitarity_mixed(&alg, &f, sigma, 1.0, &QuadratureOptions::default()).unwrap();
        assert!(rep.max_deviation < 5e-7, "{rep:?}");
        let s2 = sigma.im;
        for irrep in Irrep::up_to(2.0) {
            for k in 0..irrep.dim() {
                let w = irrep.weight(k);
                let got = torus_gaussian_integral(&alg, &f, s2, &w, 64).unwrap();
                let want = (PI / s2).sqrt() / f0.sqrt() * (s2 * w.dot(&f.apply(&w))).exp();
                assert!((got / want - 1.0).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn mixed_gram_requires_mixed_sections() {
    let alg = LieAlgebra::su2();
    let f = TorusForm::scalar(&alg, 1.0).unwrap();
    let h = Complexifier::quadratic();
    let s = apply_cst(&alg, &h, &f, &TimeParams::new(c(0.0, 1.0), c(0.0, 1.0)).unwrap(), &VerticalSection::constant()).unwrap();
    assert!(gram_mixed(&alg, &[s], &QuadratureOptions::default()).is_err());
    let tight = QuadratureOptions { gh_order: 2, max_gh_order: 4, tolerance: 1e-15, ..Default::default() };
    let m = apply_cst(&alg, &h, &f, &TimeParams::mixed(c(0.0, 3.0)).unwrap(), &VerticalSection::matrix_element(Irrep::new(4), 0, 0)).unwrap();
    assert!(matches!(gram_mixed(&alg, &[m], &tight), Err(kahlerflow::Error::Quadrature { .. })));
}

#[test]
fn kahler_norms_finite_and_orthogonal() {
    let alg = LieAlgebra::su2();
    let f = TorusForm::scalar(&alg, 1.0).unwrap();
    let h = Complexifier::quadratic();
    let params = TimeParams::new(c(0.0, 1.0), c(0.0, 1.0)).unwrap();
    let (rows, gram) = kahler_norm_table(&alg, &h, &f, &params, 0.5, &QuadratureOptions { tolerance: 1e-8, ..Default::default() }).unwrap();
    assert!(gram.estimate < 1e-8);
    for r in &rows {
        assert!(r.norm_squared.is_finite() && r.norm_squared > 0.0);
    }
    let scale = rows.iter().map(|r| r.norm_squared).fold(0.0, f64::max);
    for a in 0..rows.len() {
        for b in 0..rows.len() {
            if a != b {
                assert!(gram.matrix[(a, b)].norm() < 1e-10 * scale);
            }
        }
    }
}

#[test]
fn group_actions() {
    let alg = LieAlgebra::su2();
    let f = TorusForm::scalar(&alg, 1.0).unwrap();
    let h = Complexifier::quadratic();
    let mut rng = sampling::rng(33);
    let mut psi = VerticalSection::matrix_element(Irrep::new(2), 0, 1);
    psi.terms.extend(VerticalSection::matrix_element(Irrep::new(3), 2, 3).terms);
    let e = CMat::identity(2, 2);
    assert_eq!(psi.acted(&e, &e).unwrap(), psi);

    let a = 0.83;
    let t = alg.exp(&e3(a)).0;
    let moved = psi.acted(&e, &t).unwrap();
    for (before, after) in psi.terms.iter().zip(&moved.terms) {
        for k in 0..before.irrep.dim() {
            let phase = (C64::i() * before.irrep.weight(k).dot(&e3(a))).exp();
            for j in 0..before.irrep.dim() {
                assert!((after.coeffs[(j, k)] - before.coeffs[(j, k)] * phase).norm() < 1e-13);
            }
        }
    }
    assert_eq!(column_support(&moved, 1e-12), column_support(&psi, 1e-12));

    let rule = haar_su2(&alg, 3.0);
    let xp = sampling::group_element(&mut rng, &alg).0;
    let g = sampling::group_element(&mut rng, &alg).0;
    let projected = project_vertical(&rule, &[Irrep::new(2), Irrep::new(3)], &|x: &CMat| psi.eval_at(&(&xp * x * &g))).unwrap();
    let direct = psi.acted(&xp, &g).unwrap();
    for (p, d) in projected.terms.iter().zip(&direct.terms) {
        assert!((&p.coeffs - &d.coeffs).camax() < 1e-12);
    }

    let points: Vec<PhasePoint> = (0..6).map(|_| sampling::phase_point(&mut rng, &alg, 1.5)).collect();
    for params in [TimeParams::new(c(0.0, 1.0), c(0.5, 1.0)).unwrap(), TimeParams::mixed(c(0.0, 1.0)).unwrap()] {
        let r = intertwiner_residual(&alg, &h, &f, &params, &psi, &xp, &t, &points).unwrap();
        assert!(r < 1e-8, "{r:e}");
    }
    let kahler_only = TimeParams::new(c(0.0, 1.0), c(0.0, 0.0)).unwrap();
    assert!(intertwiner_residual(&alg, &h, &f, &kahler_only, &psi, &xp, &g, &points).unwrap() < 1e-8);
    let with_sigma = TimeParams::new(c(0.0, 1.0), c(0.0, 1.0)).unwrap();
    assert!(intertwiner_residual(&alg, &h, &f, &with_sigma, &psi, &xp, &g, &points).unwrap() > 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn intertwining_for_random_torus_elements(seed in 0u64..10_000, a in -PI..PI, twice in 1u32..5) {
        let alg = LieAlgebra::su2();
        let f = TorusForm::scalar(&alg, 1.0).unwrap();
        let h = Complexifier::quadratic();
        let mut rng = sampling::rng(seed);
        let irrep = Irrep::new(twice);
        let d = irrep.dim();
        let coeffs = CMat::from_fn(d, d, |_, _| c(sampling::uniform(&mut rng, -1.0, 1.0), sampling::uniform(&mut rng, -1.0, 1.0)));
        let psi = VerticalSection { terms: vec![PwTerm { irrep, coeffs }] };
        let xp = sampling::group_element(&mut rng, &alg).0;
        let t = alg.exp(&e3(a)).0;
        let points: Vec<PhasePoint> = (0..3).map(|_| sampling::phase_point(&mut rng, &alg, 1.0)).collect();
        let params = TimeParams::new(c(0.2, 1.0), c(0.3, 0.6)).unwrap();
        prop_assert!(intertwiner_residual(&alg, &h, &f, &params, &psi, &xp, &t, &points).unwrap() < 1e-8);
    }

    #[test]
    fn irrep_homomorphism_on_complex_group(seed in 0u64..10_000, twice in 0u32..6) {
        let alg = LieAlgebra::su2();
        let mut rng = sampling::rng(seed);
        let z1 = sampling::gaussian_vec(&mut rng, 3).map(|v| c(v, 0.5 * v));
        let z2 = sampling::gaussian_vec(&mut rng, 3).map(|v| c(-0.3 * v, v));
        let (g1, g2) = (alg.exp_complex(&z1), alg.exp_complex(&z2));
        let r = Irrep::new(twice);
        let lhs = r.matrix(&(&g1 * &g2)).unwrap();
        let rhs = r.matrix(&g1).unwrap() * r.matrix(&g2).unwrap();
        prop_assert!((&lhs - &rhs).camax() < 1e-9 * (1.0 + rhs.camax()));
    }

    #[test]
    fn projection_round_trip(seed in 0u64..10_000) {
        let alg = LieAlgebra::su2();
        let mut rng = sampling::rng(seed);
        let irreps = Irrep::up_to(1.5);
        let terms: Vec<PwTerm> = irreps.iter().map(|&irrep| PwTerm {
            irrep,
            coeffs: CMat::from_fn(irrep.dim(), irrep.dim(), |_, _| c(sampling::uniform(&mut rng, -1.0, 1.0), sampling::uniform(&mut rng, -1.0, 1.0))),
        }).collect();
        let psi = VerticalSection { terms };
        let rule = haar_su2(&alg, 3.0);
        let back = project_vertical(&rule, &irreps, &|x: &CMat| psi.eval_at(x)).unwrap();
        for (a, b) in psi.terms.iter().zip(&back.terms) {
            prop_assert!((&a.coeffs - &b.coeffs).camax() < 1e-12);
        }
    }
}
