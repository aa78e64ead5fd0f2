//! Test-only oracles and generators shared by the integration suites.
#![allow(dead_code)]

use nearfield_core::{Complex64, ComplexMatrix, ElectricalLayout};
use rand::Rng;

/// Laplace (cofactor) expansion along the first row.
pub fn cofactor_determinant(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    match n {
        0 => Complex64::new(1.0, 0.0),
        1 => m[0][0],
        _ => {
            let mut total = Complex64::new(0.0, 0.0);
            for col in 0..n {
                let minor: Vec<Vec<Complex64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != col).map(|(_, z)| *z).collect())
                    .collect();
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                total += m[0][col] * cofactor_determinant(&minor) * sign;
            }
            total
        }
    }
}

pub fn random_rows<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<Complex64>> {
    (0..n)
        .map(|_| (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
        .collect()
}

pub fn matrix_from_rows(rows: &[Vec<Complex64>]) -> ComplexMatrix {
    ComplexMatrix::from_rows(rows)
}

/// Analytic derivative of the exact Hertzian coupling,
/// `f = 1.5 e^{-jx} g`, `g = j/x + 1/x² - j/x³`.
pub fn hertzian_derivative(x: f64) -> Complex64 {
    let j = Complex64::new(0.0, 1.0);
    let g = j / x + 1.0 / (x * x) - j / (x * x * x);
    let dg = -j / (x * x) - 2.0 / (x * x * x) + 3.0 * j / (x * x * x * x);
    1.5 * (-j * x).exp() * (-j * g + dg)
}

/// Random layout of `n` antennas whose pairwise distances all exceed `min_distance`.
pub fn random_separated_layout<R: Rng>(rng: &mut R, n: usize, min_distance: f64) -> ElectricalLayout {
    let side = min_distance * (n as f64 + 1.0) * 1.5;
    let mut positions: Vec<[f64; 2]> = Vec::with_capacity(n);
    while positions.len() < n {
        let p = [rng.gen_range(0.0..side), rng.gen_range(0.0..side)];
        if positions.iter().all(|q| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt() > min_distance * 1.000_001) {
            positions.push(p);
        }
    }
    ElectricalLayout::new(positions).unwrap()
}
