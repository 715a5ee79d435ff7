use kahlerflow::complexifier::{Complexifier, TorusForm};
use kahlerflow::flows::map_a_jacobian_fd;
use kahlerflow::halfform::*;
use kahlerflow::lie::{GroupPoint, LieAlgebra, PhasePoint};
use kahlerflow::{sampling, RVec, TimeParams, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn eta_on_torus_directions() {
    let alg = LieAlgebra::su2();
    for b in [0.0, 1e-7, 0.3, 2.0, 5.0] {
        let y = RVec::from_column_slice(&[0.0, 0.0, b]);
        let want = if b == 0.0 { 1.0 } else { b.sinh() / b };
        assert!((eta(&alg, &y).unwrap() - want).abs() < 1e-12 * want);
        assert!((eta_roots(&alg, &y).unwrap() - want).abs() < 1e-12 * want);
    }
    let generic = RVec::from_column_slice(&[0.3, -1.1, 0.4]);
    assert!(eta_roots(&alg, &generic).is_err());
    let g = alg.exp(&RVec::from_column_slice(&[0.2, 0.5, -0.1]));
    let rotated = alg.big_ad_real(&g) * &generic;
    assert!((eta(&alg, &rotated).unwrap() - eta(&alg, &generic).unwrap()).abs() < 1e-12);
}

#[test]
fn closed_form_matches_frame_oracle() {
    let alg = LieAlgebra::su2();
    let soft = Complexifier::softened(&alg).unwrap();
    let mut rng = sampling::rng(21);
    for h in [Complexifier::quadratic(), soft] {
        for (tau, sigma, f0) in [(c(0.0, 1.0), c(0.0, 1.0), 1.0), (c(1.0, 1.0), c(0.5, 1.0), 0.5), (c(0.0, 2.0), c(1.0, 1.0), 1.0), (c(0.0, 1.0), c(0.0, 0.5), 2.0)] {
            let f = TorusForm::scalar(&alg, f0).unwrap();
            let params = TimeParams::new(tau, sigma).unwrap();
            for _ in 0..10 {
                let y = sampling::ball(&mut rng, 3, 3.0);
                let d = density(&alg, &h, &f, &params, &y).unwrap();
                let o = density_frame_oracle(&alg, &h, &f, &params, &y).unwrap();
                assert!((o - C64::new(d, 0.0)).norm() < 1e-8 * d, "{} {tau} {sigma} {y}: {d} vs {o}", h.name());
                assert!(holomorphic_frame_span_residual(&alg, &h, &f, &params, &y).unwrap() < 1e-9);
            }
        }
    }
}

#[test]
fn origin_values() {
    let alg = LieAlgebra::su2();
    let h = Complexifier::quadratic();
    let f = TorusForm::scalar(&alg, 1.0).unwrap();
    let params = TimeParams::new(c(0.0, 1.0), c(0.0, 1.0)).unwrap();
    let d = density(&alg, &h, &f, &params, &RVec::zeros(3)).unwrap();
    assert!((d - 0.5f64.sqrt()).abs() < 1e-14);
    let p0 = TimeParams::new(c(0.3, 1.0), c(0.0, 0.0)).unwrap();
    assert_eq!(density_ratio(&alg, &h, &f, &p0, &RVec::from_column_slice(&[1.0, 2.0, 3.0])).unwrap(), 1.0);
    assert!((partial_density(&alg, &f, c(0.0, 1.0)).unwrap() - std::f64::consts::PI.powf(-0.5)).abs() < 1e-15);
}

#[test]
fn complexifier_jacobian_matches_finite_differences() {
    let alg = LieAlgebra::su2();
    let h = Complexifier::softened(&alg).unwrap();
    let f = TorusForm::scalar(&alg, 1.0).unwrap();
    let tau = c(0.4, 1.3);
    let params = TimeParams::new(tau, c(0.0, 0.0)).unwrap();
    let y = RVec::from_column_slice(&[0.7, -0.2, 1.1]);
    let p = PhasePoint::new(GroupPoint(alg.identity().0), y.clone());
    let fd = map_a_jacobian_fd(&alg, &h, &f, &params, &p, 1e-5);
    assert!((complexifier_jacobian(&alg, &h, tau, &y).unwrap() - fd).amax() < 1e-8);
}

#[test]
fn growth_bound_exists() {
    let alg = LieAlgebra::su2();
    let h = Complexifier::quadratic();
    let f = TorusForm::scalar(&alg, 1.0).unwrap();
    let params = TimeParams::new(c(0.0, 1.0), c(0.0, 1.0)).unwrap();
    let mut rng = sampling::rng(5);
    let samples: Vec<(f64, f64)> = (0..400)
        .map(|_| {
            let y = sampling::ball(&mut rng, 3, 10.0);
            (y.norm(), density(&alg, &h, &f, &params, &y).unwrap().ln())
        })
        .collect();
    let fit = growth_fit(&samples, 10).unwrap();
    assert!(fit.c0 > 0.0 && fit.c1 > 0.0 && fit.c1.is_finite() && fit.excess <= 0.0);
}
