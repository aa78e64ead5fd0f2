//! Implementation versus independent oracles.

mod common;

use std::f64::consts::SQRT_2;

use nearfield_core::{coupling_value, phi, psi, Complex64, CouplingModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn lu_matches_cofactor_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=4 {
        for _ in 0..50 {
            let rows = common::random_rows(&mut rng, n);
            let lu = common::matrix_from_rows(&rows).determinant();
            let oracle = common::cofactor_determinant(&rows);
            assert!((lu - oracle).norm() <= 1e-12 * oracle.norm(), "n={n}: {lu} vs {oracle}");
        }
    }
}

#[test]
fn hertzian_split_matches_psi_phi() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let x = 10f64.powf(rng.gen_range(-3.0..4.0));
        let f = coupling_value(CouplingModel::Hertzian, x).unwrap();
        let scale = 1.5 * (1.0 / x + 1.0 / (x * x) + 1.0 / (x * x * x));
        assert!((f.re - psi(x).unwrap()).abs() <= 8.0 * f64::EPSILON * scale);
        assert!((f.im - phi(x).unwrap()).abs() <= 8.0 * f64::EPSILON * scale);
    }
}

#[test]
fn psi_matches_real_part_of_complex_form() {
    // evaluate the exponential form with std complex arithmetic
    let x = 5.1373;
    let j = Complex64::new(0.0, 1.0);
    let e = (-j * x).exp();
    let f = 1.5 * (j * e / x + e / (x * x) - j * e / (x * x * x));
    assert!((psi(x).unwrap() - f.re).abs() < 1e-15);
    assert!((phi(x).unwrap() - f.im).abs() < 1e-15);
}

#[test]
fn envelope_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let x = rng.gen_range(1.0..1e3);
        assert!(coupling_value(CouplingModel::Hertzian, x).unwrap().norm() <= 1.5 / x);
        assert!(coupling_value(CouplingModel::Mid, x).unwrap().norm() <= SQRT_2 * 1.5 / x);
        let far = coupling_value(CouplingModel::Far, x).unwrap().norm();
        assert!((far - 1.5 / x).abs() <= 4.0 * f64::EPSILON * far);
    }
}

#[test]
fn couplings_vanish_at_large_distance() {
    let eps = 1e-6;
    for model in CouplingModel::ALL {
        for x in [1.5 / eps * 1.01, 1e7, 1e9] {
            assert!(coupling_value(model, x).unwrap().norm() < eps);
        }
    }
}

#[test]
fn finite_differences_match_analytic_derivative() {
    let h = 1e-6;
    for x in [0.5, 1.0, 1.59932, 4.1, 5.1373, 30.0] {
        let fd = (coupling_value(CouplingModel::Hertzian, x + h).unwrap()
            - coupling_value(CouplingModel::Hertzian, x - h).unwrap())
            / (2.0 * h);
        let exact = common::hertzian_derivative(x);
        assert!((fd - exact).norm() <= 1e-6 * (1.0 + exact.norm()), "x={x}: {fd} vs {exact}");
    }
}
