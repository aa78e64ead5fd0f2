use thiserror::Error;

/// Errors raised while building layouts, matrices, trajectories or sweeps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be a finite value above {min}, got {value}")]
    Domain {
        what: &'static str,
        value: f64,
        min: f64,
    },
    #[error("antennas {first} and {second} are too close (electrical distance {distance})")]
    CoincidentAntennas {
        first: usize,
        second: usize,
        distance: f64,
    },
    #[error("layout must contain at least one antenna")]
    EmptyLayout,
    #[error("position {index} has a non-finite coordinate")]
    NonFinitePosition { index: usize },
    #[error("load ratio -1 makes Z_nn + Z_L vanish")]
    DegenerateLoad,
    #[error("invalid geometry: {0}")]
    Geometry(&'static str),
    #[error("invalid parameters: {0}")]
    InvalidSpec(&'static str),
    #[error("curve is not closed: value(1) differs from value(0) by {gap}")]
    OpenCurve { gap: f64 },
}
