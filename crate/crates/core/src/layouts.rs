//! Named antenna configurations, two-parameter layout families and the
//! closed trajectories used for winding-number certification.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::Error;
use crate::matrix::{distance, ElectricalLayout, Point};

/// Gaps of the three-antenna line with a (near) singular far-model matrix.
pub const LINE_GAPS: [f64; 2] = [5.1373, 1.59932];
/// Phase lag of the second gap along the published line trajectory.
pub const LINE_PHASE_OFFSET: f64 = 0.029;
/// Perturbation radius of the published line trajectory.
pub const LINE_RADIUS: f64 = 5e-5;
/// Base and height of the isosceles triangle with a far-model zero nearby.
pub const ISOSCELES_PARAMS: [f64; 2] = [2.35477, 1.25534];
/// Legs of the right triangle with a far-model zero nearby.
pub const RIGHT_TRIANGLE_PARAMS: [f64; 2] = [2.07905, 1.59907];
/// Circle radius of the 15-antenna lattice trajectory.
pub const LATTICE_RADIUS: f64 = 0.27;
/// Neighbor spacing of the 15-antenna lattice.
pub const LATTICE_SPACING: f64 = 4.76;

/// Centers `(x, y)` and phases of the 15-antenna triangular lattice.
pub const TABLE1: [(f64, f64, f64); 15] = [
    (0.0, 0.0, 0.135353),
    (2.38, 4.12228, 1.24221),
    (4.76, 8.24456, 0.249188),
    (7.14, 12.3668, 0.464789),
    (9.52, 16.4891, 0.581601),
    (4.76, 0.0, 0.754519),
    (7.14, 4.12228, 1.28072),
    (9.52, 8.24456, 1.33471),
    (11.9, 12.3668, 0.517862),
    (9.52, 0.0, 1.32011),
    (11.9, 4.12228, 0.32972),
    (14.28, 8.24456, 0.56559),
    (14.28, 0.0, 1.06079),
    (16.66, 4.12228, 0.753963),
    (19.04, 0.0, 1.02783),
];

fn positive(what: &'static str, value: f64) -> Result<f64, Error> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain { what, value, min: 0.0 })
    }
}

/// Three collinear antennas with consecutive gaps `x1` and `x2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineConfig {
    pub x1: f64,
    pub x2: f64,
}

impl LineConfig {
    pub fn new(x1: f64, x2: f64) -> Result<Self, Error> {
        Ok(Self {
            x1: positive("line gap x1", x1)?,
            x2: positive("line gap x2", x2)?,
        })
    }

    pub fn published() -> Self {
        Self {
            x1: LINE_GAPS[0],
            x2: LINE_GAPS[1],
        }
    }

    pub fn layout(&self) -> ElectricalLayout {
        LineFamily.layout(&[self.x1, self.x2]).expect("validated gaps")
    }
}

/// Isosceles triangle: base endpoints at `(±base/2, 0)`, apex at `(0, height)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoscelesConfig {
    pub base: f64,
    pub height: f64,
}

impl IsoscelesConfig {
    pub fn new(base: f64, height: f64) -> Result<Self, Error> {
        Ok(Self {
            base: positive("isosceles base", base)?,
            height: positive("isosceles height", height)?,
        })
    }

    pub fn published() -> Self {
        Self {
            base: ISOSCELES_PARAMS[0],
            height: ISOSCELES_PARAMS[1],
        }
    }

    pub fn layout(&self) -> ElectricalLayout {
        IsoscelesFamily.layout(&[self.base, self.height]).expect("validated sides")
    }
}

/// Right triangle with vertices `(0, 0)`, `(leg_x, 0)` and `(0, leg_y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RightTriangleConfig {
    pub leg_x: f64,
    pub leg_y: f64,
}

impl RightTriangleConfig {
    pub fn new(leg_x: f64, leg_y: f64) -> Result<Self, Error> {
        Ok(Self {
            leg_x: positive("right triangle leg x", leg_x)?,
            leg_y: positive("right triangle leg y", leg_y)?,
        })
    }

    pub fn published() -> Self {
        Self {
            leg_x: RIGHT_TRIANGLE_PARAMS[0],
            leg_y: RIGHT_TRIANGLE_PARAMS[1],
        }
    }

    pub fn layout(&self) -> ElectricalLayout {
        RightTriangleFamily.layout(&[self.leg_x, self.leg_y]).expect("validated legs")
    }
}

/// Rectangular grid of `rows × cols` antennas with uniform spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub rows: usize,
    pub cols: usize,
    pub spacing: f64,
}

impl GridConfig {
    pub fn new(rows: usize, cols: usize, spacing: f64) -> Result<Self, Error> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidSpec("grid needs at least one row and one column"));
        }
        Ok(Self {
            rows,
            cols,
            spacing: positive("grid spacing", spacing)?,
        })
    }

    pub fn square(m: usize, spacing: f64) -> Result<Self, Error> {
        Self::new(m, m, spacing)
    }

    pub fn antennas(&self) -> usize {
        self.rows * self.cols
    }

    /// Positions `(i·d, j·d)`, row-major in `i`.
    pub fn layout(&self) -> ElectricalLayout {
        let mut positions = Vec::with_capacity(self.antennas());
        for i in 0..self.rows {
            for j in 0..self.cols {
                positions.push([i as f64 * self.spacing, j as f64 * self.spacing]);
            }
        }
        ElectricalLayout::new(positions).expect("grid spacing is positive")
    }
}

/// Antennas circling fixed centers, each with its own phase.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularLatticeConfig {
    centers: Vec<Point>,
    phases: Vec<f64>,
    radius: f64,
}

impl TriangularLatticeConfig {
    pub fn new(centers: Vec<Point>, phases: Vec<f64>, radius: f64) -> Result<Self, Error> {
        if centers.len() != phases.len() {
            return Err(Error::InvalidSpec("lattice needs one phase per center"));
        }
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::Domain {
                what: "lattice radius",
                value: radius,
                min: 0.0,
            });
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidSpec("lattice phases must be finite"));
        }
        // Validates the centers themselves.
        ElectricalLayout::new(centers.clone())?;
        Ok(Self { centers, phases, radius })
    }

    /// The published 15-antenna lattice with the default circle radius.
    pub fn table1() -> Self {
        Self::table1_with_radius(LATTICE_RADIUS).expect("published lattice is valid")
    }

    pub fn table1_with_radius(radius: f64) -> Result<Self, Error> {
        Self::new(
            TABLE1.iter().map(|&(x, y, _)| [x, y]).collect(),
            TABLE1.iter().map(|&(_, _, phase)| phase).collect(),
            radius,
        )
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn with_radius(&self, radius: f64) -> Result<Self, Error> {
        Self::new(self.centers.clone(), self.phases.clone(), radius)
    }

    pub fn center_layout(&self) -> ElectricalLayout {
        ElectricalLayout::new(self.centers.clone()).expect("validated centers")
    }
}

/// A closed loop of layouts over `t ∈ [0, 1]` with `layout_at(0) == layout_at(1)`.
pub trait ClosedTrajectory {
    fn layout_at(&self, t: f64) -> Result<ElectricalLayout, Error>;
}

impl<T: ClosedTrajectory + ?Sized> ClosedTrajectory for &T {
    fn layout_at(&self, t: f64) -> Result<ElectricalLayout, Error> {
        (**self).layout_at(t)
    }
}

impl<T: ClosedTrajectory + ?Sized> ClosedTrajectory for alloc::boxed::Box<T> {
    fn layout_at(&self, t: f64) -> Result<ElectricalLayout, Error> {
        (**self).layout_at(t)
    }
}

/// Reduces `t` into `[0, 1)` so that `t = 1` evaluates bit-identically to `t = 0`.
fn cycle(t: f64) -> f64 {
    let mut r = libm::fmod(t, 1.0);
    if r < 0.0 {
        r += 1.0;
    }
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// A layout described by a short vector of real parameters.
pub trait LayoutFamily {
    fn dimension(&self) -> usize;
    fn layout(&self, params: &[f64]) -> Result<ElectricalLayout, Error>;
}

impl<F: LayoutFamily + ?Sized> LayoutFamily for &F {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn layout(&self, params: &[f64]) -> Result<ElectricalLayout, Error> {
        (**self).layout(params)
    }
}

impl<F: LayoutFamily + ?Sized> LayoutFamily for alloc::boxed::Box<F> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn layout(&self, params: &[f64]) -> Result<ElectricalLayout, Error> {
        (**self).layout(params)
    }
}

fn two_params(params: &[f64]) -> Result<(f64, f64), Error> {
    match *params {
        [a, b] if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() => Ok((a, b)),
        [_, _] => Err(Error::Geometry("family parameters must be positive")),
        _ => Err(Error::InvalidSpec("family takes exactly two parameters")),
    }
}

/// Line layouts parameterized by the gaps `(x1, x2)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LineFamily;

impl LayoutFamily for LineFamily {
    fn dimension(&self) -> usize {
        2
    }

    fn layout(&self, params: &[f64]) -> Result<ElectricalLayout, Error> {
        let (x1, x2) = two_params(params)?;
        ElectricalLayout::new(alloc::vec![[0.0, 0.0], [x1, 0.0], [x1 + x2, 0.0]])
    }
}

/// Isosceles triangles parameterized by `(base, height)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IsoscelesFamily;

impl LayoutFamily for IsoscelesFamily {
    fn dimension(&self) -> usize {
        2
    }

    fn layout(&self, params: &[f64]) -> Result<ElectricalLayout, Error> {
        let (base, height) = two_params(params)?;
        ElectricalLayout::new(alloc::vec![[-base / 2.0, 0.0], [base / 2.0, 0.0], [0.0, height]])
    }
}

/// Right triangles parameterized by the legs `(x, y)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RightTriangleFamily;

impl LayoutFamily for RightTriangleFamily {
    fn dimension(&self) -> usize {
        2
    }

    fn layout(&self, params: &[f64]) -> Result<ElectricalLayout, Error> {
        let (x, y) = two_params(params)?;
        ElectricalLayout::new(alloc::vec![[0.0, 0.0], [x, 0.0], [0.0, y]])
    }
}

/// Loop through a two-parameter family:
/// `p(t) = center + r (sin 2πt, sin 2π(t - phase_offset))`.
///
/// A phase offset of 0.25 traces a circle; offsets near 0 or 0.5 flatten the
/// loop into a thin ellipse along a diagonal.
#[derive(Debug, Clone, Copy)]
pub struct FamilyLoop<F> {
    family: F,
    center: [f64; 2],
    radius: f64,
    phase_offset: f64,
}

impl<F: LayoutFamily> FamilyLoop<F> {
    /// Requires `0 <= radius < min(center)` so every parameter stays positive.
    pub fn new(family: F, center: [f64; 2], radius: f64, phase_offset: f64) -> Result<Self, Error> {
        if family.dimension() != 2 {
            return Err(Error::InvalidSpec("loops need a two-parameter family"));
        }
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::Domain {
                what: "loop radius",
                value: radius,
                min: 0.0,
            });
        }
        if !phase_offset.is_finite() {
            return Err(Error::InvalidSpec("phase offset must be finite"));
        }
        if radius >= center[0].min(center[1]) {
            return Err(Error::Geometry("loop radius must stay below both center parameters"));
        }
        // Rejects centers whose layouts are already invalid.
        family.layout(&center)?;
        Ok(Self {
            family,
            center,
            radius,
            phase_offset,
        })
    }

    pub fn params_at(&self, t: f64) -> [f64; 2] {
        let t = cycle(t);
        let lag = cycle(t - self.phase_offset);
        [
            self.center[0] + self.radius * libm::sin(2.0 * PI * t),
            self.center[1] + self.radius * libm::sin(2.0 * PI * lag),
        ]
    }

    pub fn family(&self) -> &F {
        &self.family
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn phase_offset(&self) -> f64 {
        self.phase_offset
    }
}

impl<F: LayoutFamily> ClosedTrajectory for FamilyLoop<F> {
    fn layout_at(&self, t: f64) -> Result<ElectricalLayout, Error> {
        self.family.layout(&self.params_at(t))
    }
}

/// Line trajectory `x1(t) = x1 + r sin 2πt`, `x2(t) = x2 + r sin 2π(t - φ)`.
pub fn line_trajectory(config: LineConfig, radius: f64, phase_offset: f64) -> Result<FamilyLoop<LineFamily>, Error> {
    FamilyLoop::new(LineFamily, [config.x1, config.x2], radius, phase_offset)
}

/// Every lattice antenna runs once around its center:
/// `p_i(t) = c_i + r (sin 2π(t - φ_i), cos 2π(t - φ_i))`.
#[derive(Debug, Clone)]
pub struct LatticeTrajectory {
    config: TriangularLatticeConfig,
}

impl LatticeTrajectory {
    /// Rejects radii of half the smallest center distance or more, which
    /// could make two antennas collide.
    pub fn new(config: TriangularLatticeConfig) -> Result<Self, Error> {
        let n = config.centers.len();
        let mut min_center = f64::INFINITY;
        for i in 0..n {
            for k in i + 1..n {
                min_center = min_center.min(distance(config.centers[i], config.centers[k]));
            }
        }
        if n > 1 && config.radius >= min_center / 2.0 {
            return Err(Error::Geometry("lattice radius must be below half the smallest center distance"));
        }
        Ok(Self { config })
    }

    pub fn config(&self) -> &TriangularLatticeConfig {
        &self.config
    }

    pub fn positions_at(&self, t: f64) -> Vec<Point> {
        let t = cycle(t);
        let r = self.config.radius;
        self.config
            .centers
            .iter()
            .zip(&self.config.phases)
            .map(|(c, &phase)| {
                let angle = 2.0 * PI * cycle(t - phase);
                [c[0] + r * libm::sin(angle), c[1] + r * libm::cos(angle)]
            })
            .collect()
    }
}

impl ClosedTrajectory for LatticeTrajectory {
    fn layout_at(&self, t: f64) -> Result<ElectricalLayout, Error> {
        ElectricalLayout::new(self.positions_at(t))
    }
}

/// Same layout for every `t`.
#[derive(Debug, Clone)]
pub struct ConstantTrajectory(pub ElectricalLayout);

impl ClosedTrajectory for ConstantTrajectory {
    fn layout_at(&self, _t: f64) -> Result<ElectricalLayout, Error> {
        Ok(self.0.clone())
    }
}
