//! JSON layout/trajectory documents, JSON result records and CSV exports.

use std::io::{Read, Write};

use nearfield_core::certification::DeterminantCurve;
use nearfield_core::matrix::electrical_distance;
use nearfield_core::sweeps::{GridSweep, SweepResult};
use nearfield_core::{ElectricalLayout, Error, TriangularLatticeConfig, WindingCertificate, ZeroLocation};
use serde::{Deserialize, Serialize};

/// `{"positions": [[x, y], ...]}`, electrical units unless a wavelength is
/// supplied when converting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutDocument {
    pub positions: Vec<[f64; 2]>,
}

impl LayoutDocument {
    pub fn from_reader<R: Read>(reader: R) -> serde_json::Result<Self> {
        serde_json::from_reader(reader)
    }

    pub fn to_layout(&self, wavelength: Option<f64>) -> Result<ElectricalLayout, Error> {
        match wavelength {
            Some(w) => ElectricalLayout::from_meters(&self.positions, w),
            None => ElectricalLayout::new(self.positions.clone()),
        }
    }
}

impl From<&ElectricalLayout> for LayoutDocument {
    fn from(layout: &ElectricalLayout) -> Self {
        Self {
            positions: layout.positions().to_vec(),
        }
    }
}

/// Circular per-antenna trajectory: centers, phases and a shared radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryDocument {
    pub centers: Vec<[f64; 2]>,
    pub phases: Vec<f64>,
    pub radius: f64,
}

impl TrajectoryDocument {
    pub fn from_reader<R: Read>(reader: R) -> serde_json::Result<Self> {
        serde_json::from_reader(reader)
    }

    /// Centers and radius are lengths and get converted; phases do not.
    pub fn to_config(&self, wavelength: Option<f64>) -> Result<TriangularLatticeConfig, Error> {
        let convert = |v: f64| wavelength.map_or(v, |w| electrical_distance(v, w));
        TriangularLatticeConfig::new(
            self.centers.iter().map(|c| [convert(c[0]), convert(c[1])]).collect(),
            self.phases.clone(),
            convert(self.radius),
        )
    }
}

impl From<&TriangularLatticeConfig> for TrajectoryDocument {
    fn from(cfg: &TriangularLatticeConfig) -> Self {
        Self {
            centers: cfg.centers().to_vec(),
            phases: cfg.phases().to_vec(),
            radius: cfg.radius(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub winding: i64,
    pub min_modulus: f64,
    pub samples_used: usize,
    pub certified: bool,
}

impl From<WindingCertificate> for CertificateRecord {
    fn from(c: WindingCertificate) -> Self {
        Self {
            winding: c.winding,
            min_modulus: c.min_modulus,
            samples_used: c.samples_used,
            certified: c.certified,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub parameters: Vec<f64>,
    pub residual_modulus: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl ZeroRecord {
    pub fn new(location: &ZeroLocation, converged: bool) -> Self {
        Self {
            parameters: location.parameters.clone(),
            residual_modulus: location.residual_modulus,
            iterations: location.iterations,
            converged,
        }
    }
}

#[derive(Serialize)]
struct CurveRow {
    t: f64,
    re_det: f64,
    im_det: f64,
    abs_det: f64,
}

/// Columns `t,re_det,im_det,abs_det`.
pub fn write_curve_csv<W: Write>(writer: W, curve: &DeterminantCurve) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for s in curve.samples() {
        w.serialize(CurveRow {
            t: s.t,
            re_det: s.value.re,
            im_det: s.value.im,
            abs_det: s.value.norm(),
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    grid_m1: usize,
    grid_m2: usize,
    x: f64,
    abs_det: f64,
}

/// Columns `grid_m1,grid_m2,x,abs_det` for the listed grids.
pub fn write_sweep_csv<'a, W, I>(writer: W, grids: I) -> csv::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a GridSweep>,
{
    let mut w = csv::Writer::from_writer(writer);
    for g in grids {
        for &(x, abs_det) in &g.samples {
            w.serialize(SweepRow {
                grid_m1: g.rows,
                grid_m2: g.cols,
                x,
                abs_det,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SummaryRow {
    grid_m1: usize,
    grid_m2: usize,
    x_min: f64,
    abs_det_min: f64,
}

/// Columns `grid_m1,grid_m2,x_min,abs_det_min`, one row per grid.
pub fn write_summary_csv<W: Write>(writer: W, result: &SweepResult) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for g in &result.grids {
        w.serialize(SummaryRow {
            grid_m1: g.rows,
            grid_m2: g.cols,
            x_min: g.minimum.x,
            abs_det_min: g.minimum.abs_det,
        })?;
    }
    w.flush()?;
    Ok(())
}
