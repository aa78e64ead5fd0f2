//! Normalized near-field impedance matrices for arrays of parallel Hertzian
//! dipoles, with tools to certify singular (zero-determinant) placements.
//!
//! Every geometric quantity in this crate is an *electrical* length, that is
//! a physical length multiplied by the wave number `k = 2π/λ`. Conversion
//! from meters happens only at the edges (see [`matrix::electrical_distance`]).
//!
//! The crate is `no_std` and only needs `alloc`.
//!
//! ```
//! use nearfield_core::{build_matrix, CircuitParams, CouplingModel, LineConfig};
//!
//! let layout = LineConfig::new(5.1373, 1.59932).unwrap().layout();
//! let m = build_matrix(&layout, CouplingModel::Far, CircuitParams::default()).unwrap();
//! assert!(m.determinant().norm() < 1e-5);
//! ```
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod certification;
pub mod coupling;
mod error;
pub mod layouts;
pub mod matrix;
pub mod sweeps;

pub use certification::{
    find_zero, shrink_radius_scan, trace_closed_curve, trace_curve, winding_number, CurveSample,
    DeterminantCurve, FindZeroError, NewtonOptions, RadiusScan, RefinementOptions,
    WindingCertificate, ZeroLocation,
};
pub use coupling::{coupling_value, phi, psi, self_impedance, CouplingModel, SelfImpedanceParams};
pub use error::Error;
pub use layouts::{
    ClosedTrajectory, FamilyLoop, GridConfig, IsoscelesConfig, IsoscelesFamily, LatticeTrajectory,
    LayoutFamily, LineConfig, LineFamily, RightTriangleConfig, RightTriangleFamily,
    TriangularLatticeConfig,
};
pub use matrix::{
    build_matrix, safe_distance_bound, CircuitParams, ComplexMatrix, ElectricalLayout,
    NormalizedMatrix, Point,
};
pub use sweeps::{monotone_collapse_report, run_sweep, CollapseEntry, GridSweep, SweepMinimum, SweepResult, SweepSpec};

pub use num_complex::Complex64;
