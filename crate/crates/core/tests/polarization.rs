use kahlerflow::complexifier::{Complexifier, TorusForm};
use kahlerflow::flows::{flow_f, tangent_flow_f};
use kahlerflow::lie::{GroupPoint, LieAlgebra, PhasePoint};
use kahlerflow::polarization::*;
use kahlerflow::{complexify, sampling, RVec, TimeParams, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn setup() -> (LieAlgebra, Complexifier, TorusForm) {
    let alg = LieAlgebra::su2();
    let f = TorusForm::scalar(&alg, 1.0).unwrap();
    (alg, Complexifier::quadratic(), f)
}

#[test]
fn omega_is_minus_dtheta() {
    let (alg, _, _) = setup();
    let mut rng = sampling::rng(1);
    for _ in 0..5 {
        let p = sampling::phase_point(&mut rng, &alg, 2.0);
        let a = sampling::gaussian_vec(&mut rng, 6);
        let b = sampling::gaussian_vec(&mut rng, 6);
        let om = (a.transpose() * omega_matrix(&alg, &p.y) * &b)[(0, 0)];
        assert!((om - minus_dtheta_chart(&alg, &p, &a, &b)).abs() < 1e-5);
    }
}

#[test]
fn frame_at_origin() {
    let (alg, h, f) = setup();
    let params = TimeParams::new(c(0.0, 1.0), c(0.0, 1.0)).unwrap();
    let fr = build_frame(&alg, &h, &f, &params, &RVec::zeros(3)).unwrap();
    assert!((fr.n.clone() - complexify(&nalgebra::DMatrix::identity(3, 3))).camax() < 1e-14);
    let w = kahler_metric_w(&alg, &h, &f, &params, &RVec::zeros(3)).unwrap();
    let eig = w.map(|z| z.re).symmetric_eigenvalues();
    let mut e: Vec<f64> = eig.iter().copied().collect();
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!((e[0] - 2.0).abs() < 1e-12 && (e[1] - 2.0).abs() < 1e-12 && (e[2] - 4.0).abs() < 1e-12);
}

#[test]
fn kahler_grid_invariants() {
    let (alg, h, f) = setup();
    let soft = Complexifier::softened(&alg).unwrap();
    let mut rng = sampling::rng(2);
    for hh in [&h, &soft] {
        for tau in [c(0.0, 1.0), c(1.0, 1.0), c(0.0, 2.0)] {
            for sigma in [c(0.0, 0.0), c(0.0, 1.0), c(1.0, 1.0)] {
                let params = TimeParams::new(tau, sigma).unwrap();
                for _ in 0..5 {
                    let y = sampling::ball(&mut rng, 3, 2.0);
                    let fr = build_frame(&alg, hh, &f, &params, &y).unwrap().stacked();
                    assert!(isotropy_residual(&alg, &y, &fr) < 1e-9);
                    assert_eq!(numerical_rank(&fr, 1e-10), 3);
                    let w = kahler_metric_w(&alg, hh, &f, &params, &y).unwrap();
                    assert!(hermitian_residual(&w) < 1e-10);
                    assert!(min_eigenvalue(&w) > 0.0);
                    assert!((metric_from_frame(&alg, &y, &fr) - &w).camax() < 1e-9 * (1.0 + w.camax()));
                    assert!(potential_residual(&alg, hh, &f, &params, &y).unwrap() < 1e-5);
                    assert!(involutivity_residual(&alg, hh, &f, &params, &y).unwrap() < 1e-5);
                }
            }
        }
    }
}

#[test]
fn real_sigma_frame_is_pushforward_of_sigma_zero_frame() {
    let (alg, h, f) = setup();
    let mut rng = sampling::rng(3);
    for _ in 0..10 {
        let p = sampling::phase_point(&mut rng, &alg, 2.0);
        let s = sampling::uniform(&mut rng, -2.0, 2.0);
        let tau = c(0.3, 1.2);
        let q = flow_f(&alg, &f, s, &p);
        let fr0 = build_frame(&alg, &h, &f, &TimeParams::new(tau, c(0.0, 0.0)).unwrap(), &q.y).unwrap().stacked();
        let pushed = complexify(&tangent_flow_f(&alg, &f, -s, &q)) * fr0;
        let direct = build_frame(&alg, &h, &f, &TimeParams { tau, sigma: c(s, 0.0) }, &p.y).unwrap().stacked();
        assert!((pushed - direct).camax() < 1e-9);
    }
}

#[test]
fn mixed_polarization_invariants() {
    let (alg, h, _) = setup();
    let mut rng = sampling::rng(4);
    for f0 in [0.5, 1.0, 2.0] {
        let f = TorusForm::scalar(&alg, f0).unwrap();
        for sigma in [c(0.0, 1.0), c(0.5, 1.0), c(0.0, 2.0)] {
            let y = sampling::ball(&mut rng, 3, 2.0);
            let r = mixed_report(&alg, &h, &f, sigma, &y).unwrap();
            assert!(r.torus_transversality > 1e-3);
            assert_eq!(r.real_part_dimension, 2);
            assert!(r.real_part_residual < 1e-12);
            assert!(r.leaf_tangency < 1e-12 && r.leaf_isotropy < 1e-12 && r.leaf_potential < 1e-12);
            assert!((r.leaf_positivity - 2.0 * sigma.im * f0).abs() < 1e-12);
            assert!(r.frame_isotropy < 1e-9 && r.involutivity < 1e-8);
            let lv = leaf_volume_check(&alg, &f, sigma, &y).unwrap();
            assert!(lv.pair_residual < 1e-9 && lv.top_residual < 1e-9);
        }
    }
    let f = TorusForm::scalar(&alg, 1.0).unwrap();
    assert!(mixed_report(&alg, &h, &f, c(1.0, 0.0), &RVec::zeros(3)).is_err());
    let lv = leaf_volume_check(&alg, &f, c(0.0, 1.0), &RVec::zeros(3)).unwrap();
    assert!((lv.coefficient[0] - c(0.0, 0.5)).norm() < 1e-15);
}

#[test]
fn leaf_coordinates_are_holomorphic() {
    let (alg, _, f) = setup();
    let mut rng = sampling::rng(5);
    let x0 = sampling::group_element(&mut rng, &alg);
    let y0 = RVec::from_column_slice(&[0.4, -0.3, 0.2]);
    let leaf = Leaf { x0: x0.clone(), y0: y0.clone() };
    let sigma = c(0.5, 1.5);
    let p = PhasePoint::new(
        GroupPoint(&x0.0 * alg.exp(&RVec::from_column_slice(&[0.0, 0.0, 0.7])).0),
        &y0 + RVec::from_column_slice(&[0.0, 0.0, 0.4]),
    );
    let z = leaf_coordinates(&alg, &f, sigma, &leaf, &p).unwrap();
    assert!((z[0] - (c(0.7, 0.0) + sigma * 0.4)).norm() < 1e-12);
    assert!(leaf_eigen_residual(&alg, &f, sigma, &leaf, &p).unwrap() < 1e-9);
    let shift = RVec::from_column_slice(&[0.0, 0.0, 0.25]);
    let moved = Leaf { x0: GroupPoint(&x0.0 * alg.exp(&shift).0), y0 };
    let z2 = leaf_coordinates(&alg, &f, sigma, &moved, &p).unwrap();
    assert!((z2[0] - (z[0] - 0.25)).norm() < 1e-12);
    let off = PhasePoint::new(p.x.clone(), &p.y + RVec::from_column_slice(&[0.1, 0.0, 0.0]));
    assert!(leaf_coordinates(&alg, &f, sigma, &leaf, &off).is_err());
}
