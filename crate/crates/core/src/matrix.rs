//! Normalized impedance matrices and their determinants.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::coupling::{coupling_unchecked, CouplingModel, MIN_ELECTRICAL_DISTANCE};
use crate::error::Error;

/// A planar position in electrical units.
pub type Point = [f64; 2];

/// Converts a physical distance in meters to electrical units, `x = 2πd/λ`.
pub fn electrical_distance(meters: f64, wavelength: f64) -> f64 {
    2.0 * PI * meters / wavelength
}

/// Antenna positions in electrical units with no two antennas coinciding.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectricalLayout {
    positions: Vec<Point>,
}

impl ElectricalLayout {
    pub fn new(positions: Vec<Point>) -> Result<Self, Error> {
        if positions.is_empty() {
            return Err(Error::EmptyLayout);
        }
        for (index, p) in positions.iter().enumerate() {
            if !(p[0].is_finite() && p[1].is_finite()) {
                return Err(Error::NonFinitePosition { index });
            }
        }
        for i in 0..positions.len() {
            for k in i + 1..positions.len() {
                let distance = distance(positions[i], positions[k]);
                if distance < MIN_ELECTRICAL_DISTANCE {
                    return Err(Error::CoincidentAntennas {
                        first: i,
                        second: k,
                        distance,
                    });
                }
            }
        }
        Ok(Self { positions })
    }

    /// Builds a layout from positions in meters.
    pub fn from_meters(positions: &[Point], wavelength: f64) -> Result<Self, Error> {
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::Domain {
                what: "wavelength",
                value: wavelength,
                min: 0.0,
            });
        }
        Self::new(
            positions
                .iter()
                .map(|p| [electrical_distance(p[0], wavelength), electrical_distance(p[1], wavelength)])
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn into_positions(self) -> Vec<Point> {
        self.positions
    }

    pub fn distance(&self, i: usize, k: usize) -> f64 {
        distance(self.positions[i], self.positions[k])
    }

    /// All pairwise distances `(i, k, x_ik)` with `i < k`.
    pub fn pairwise_distances(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |k| (i, k, self.distance(i, k))))
    }

    /// Smallest pairwise distance, `None` for a single antenna.
    pub fn min_distance(&self) -> Option<f64> {
        self.pairwise_distances().map(|(_, _, d)| d).reduce(f64::min)
    }
}

pub(crate) fn distance(a: Point, b: Point) -> f64 {
    libm::hypot(a[0] - b[0], a[1] - b[1])
}

/// Circuit load expressed as `ζ = Z_L / Z_nn`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams {
    load_ratio: Complex64,
}

impl CircuitParams {
    pub fn new(load_ratio: Complex64) -> Result<Self, Error> {
        if !(load_ratio.re.is_finite() && load_ratio.im.is_finite()) {
            return Err(Error::InvalidSpec("load ratio must be finite"));
        }
        if load_ratio + 1.0 == Complex64::new(0.0, 0.0) {
            return Err(Error::DegenerateLoad);
        }
        Ok(Self { load_ratio })
    }

    /// Load ratio from physical impedances `Z_L` and `Z_nn` (ohms).
    pub fn from_impedances(load: Complex64, self_impedance: Complex64) -> Result<Self, Error> {
        if self_impedance.norm() == 0.0 {
            return Err(Error::InvalidSpec("self impedance must be nonzero"));
        }
        Self::new(load / self_impedance)
    }

    pub fn load_ratio(&self) -> Complex64 {
        self.load_ratio
    }
}

impl Default for CircuitParams {
    fn default() -> Self {
        Self {
            load_ratio: Complex64::new(0.0, 0.0),
        }
    }
}

/// Dense square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    /// Panics unless `entries.len() == n * n`.
    pub fn from_row_major(n: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), n * n, "expected {n}x{n} entries");
        Self { n, entries }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            entries.extend_from_slice(row);
        }
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, k: usize) -> Complex64 {
        self.entries[i * self.n + k]
    }

    pub fn set(&mut self, i: usize, k: usize, value: Complex64) {
        self.entries[i * self.n + k] = value;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Determinant by LU factorization with partial pivoting on the
    /// largest-modulus entry of each column. A singular matrix yields zero.
    pub fn determinant(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r, &s| a[r * n + col].norm_sqr().total_cmp(&a[s * n + col].norm_sqr()))
                .unwrap_or(col);
            let pivot = a[pivot_row * n + col];
            if pivot.norm_sqr() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                }
                det = -det;
            }
            det *= pivot;
            let inv = pivot.inv();
            for r in col + 1..n {
                let factor = a[r * n + col] * inv;
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                for j in col + 1..n {
                    let upper = a[col * n + j];
                    a[r * n + j] -= factor * upper;
                }
            }
        }
        det
    }

    /// Strict row diagonal dominance, `|A_ii| > Σ_{k≠i} |A_ik|` for every row.
    pub fn is_diagonally_dominant(&self) -> bool {
        (0..self.n).all(|i| {
            let off: f64 = self
                .row(i)
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, z)| z.norm())
                .sum();
            self.get(i, i).norm() > off
        })
    }
}

/// Normalized impedance matrix `M = (Z_L I + Z) / (Z_nn + Z_L)`: unit
/// diagonal, symmetric off-diagonal entries `f(x_ik) / (1 + ζ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedMatrix(ComplexMatrix);

impl NormalizedMatrix {
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, i: usize, k: usize) -> Complex64 {
        self.0.get(i, k)
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.determinant()
    }

    pub fn is_diagonally_dominant(&self) -> bool {
        self.0.is_diagonally_dominant()
    }
}

/// Builds the normalized impedance matrix of `layout`.
pub fn build_matrix(
    layout: &ElectricalLayout,
    model: CouplingModel,
    circuit: CircuitParams,
) -> Result<NormalizedMatrix, Error> {
    // Layout and circuit invariants were checked on construction.
    let scale = (circuit.load_ratio + 1.0).inv();
    let n = layout.len();
    let mut m = ComplexMatrix::identity(n);
    for (i, k, x) in layout.pairwise_distances() {
        let value = coupling_unchecked(model, x) * scale;
        m.set(i, k, value);
        m.set(k, i, value);
    }
    Ok(NormalizedMatrix(m))
}

/// Electrical distance above which every pairwise separation guarantees a
/// diagonally dominant (hence nonsingular) matrix for `n` antennas.
///
/// For `x >= 1`, `|f(x)| <= |f_far(x)| = 1.5/x` and `|f_mid(x)| <= √2 · 1.5/x`.
/// A row is dominant once each of its `n - 1` couplings is below `1/(n-1)`,
/// i.e. `x > 1.5 (n-1)` (times `√2` for the mid model). The bound is always
/// at least 1.5, so the envelope inequalities apply.
pub fn safe_distance_bound(n: usize, model: CouplingModel) -> Result<f64, Error> {
    if n < 2 {
        return Err(Error::InvalidSpec("safe distance bound needs at least two antennas"));
    }
    let base = 1.5 * (n - 1) as f64;
    Ok(match model {
        CouplingModel::Hertzian | CouplingModel::Far => base,
        CouplingModel::Mid => SQRT_2 * base,
    })
}
