//! Named configurations with the published constants baked in.

use clap::ValueEnum;
use nearfield_core::layouts::{
    line_trajectory, FamilyLoop, LINE_GAPS, LINE_PHASE_OFFSET, LINE_RADIUS, ISOSCELES_PARAMS, LATTICE_RADIUS,
    RIGHT_TRIANGLE_PARAMS,
};
use nearfield_core::{
    ClosedTrajectory, CouplingModel, Error, IsoscelesFamily, LatticeTrajectory, LayoutFamily, LineConfig, LineFamily,
    RightTriangleFamily, TriangularLatticeConfig,
};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Three antennas on a line, gaps (5.1373, 1.59932).
    Line,
    /// Isosceles triangle, base 2.35477, height 1.25534.
    Isosceles,
    /// Right triangle, legs (2.07905, 1.59907).
    Right,
    /// 15-antenna triangular lattice.
    Table1,
    /// Square or rectangular grid.
    Grid,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Self::Line => "line",
            Self::Isosceles => "isosceles",
            Self::Right => "right",
            Self::Table1 => "table1",
            Self::Grid => "grid",
        }
    }

    pub fn default_model(self) -> CouplingModel {
        match self {
            Self::Line | Self::Isosceles | Self::Right => CouplingModel::Far,
            Self::Table1 => CouplingModel::Mid,
            Self::Grid => CouplingModel::Hertzian,
        }
    }

    /// Two-parameter family behind the preset, if any.
    pub fn family(self) -> Option<Box<dyn LayoutFamily>> {
        match self {
            Self::Line => Some(Box::new(LineFamily)),
            Self::Isosceles => Some(Box::new(IsoscelesFamily)),
            Self::Right => Some(Box::new(RightTriangleFamily)),
            Self::Table1 | Self::Grid => None,
        }
    }

    pub fn default_params(self) -> Option<[f64; 2]> {
        match self {
            Self::Line => Some(LINE_GAPS),
            Self::Isosceles => Some(ISOSCELES_PARAMS),
            Self::Right => Some(RIGHT_TRIANGLE_PARAMS),
            Self::Table1 | Self::Grid => None,
        }
    }

    pub fn default_radius(self) -> Option<f64> {
        match self {
            Self::Line | Self::Isosceles => Some(LINE_RADIUS),
            Self::Right => Some(1e-5),
            Self::Table1 => Some(LATTICE_RADIUS),
            Self::Grid => None,
        }
    }

    /// The line keeps its published lag; the triangles loop on a circle.
    pub fn default_phase_offset(self) -> f64 {
        match self {
            Self::Line => LINE_PHASE_OFFSET,
            _ => 0.25,
        }
    }

    /// Certification loop of radius `radius` around `params`.
    pub fn trajectory(
        self,
        params: Option<[f64; 2]>,
        radius: f64,
        phase_offset: f64,
    ) -> Result<Box<dyn ClosedTrajectory>, Error> {
        let center = params.or(self.default_params());
        Ok(match (self, center) {
            (Self::Line, Some([x1, x2])) => Box::new(line_trajectory(LineConfig::new(x1, x2)?, radius, phase_offset)?),
            (Self::Isosceles, Some(c)) => Box::new(FamilyLoop::new(IsoscelesFamily, c, radius, phase_offset)?),
            (Self::Right, Some(c)) => Box::new(FamilyLoop::new(RightTriangleFamily, c, radius, phase_offset)?),
            (Self::Table1, _) => Box::new(LatticeTrajectory::new(TriangularLatticeConfig::table1_with_radius(radius)?)?),
            _ => return Err(Error::InvalidSpec("preset has no certification loop")),
        })
    }
}
