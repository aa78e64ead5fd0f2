//! Determinant sweeps over the spacing of square (or rectangular) grids.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::coupling::CouplingModel;
use crate::error::Error;
use crate::layouts::GridConfig;
use crate::matrix::{build_matrix, CircuitParams};

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const GOLDEN_RELATIVE_TOL: f64 = 1e-6;

/// Grid sizes, spacing window and sampling of a determinant sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    sizes: Vec<(usize, usize)>,
    range: (f64, f64),
    samples: usize,
    model: CouplingModel,
    circuit: CircuitParams,
}

impl SweepSpec {
    pub const DEFAULT_SAMPLES: usize = 512;
    pub const DEFAULT_RANGE: (f64, f64) = (3.5, 4.5);

    pub fn new(
        sizes: Vec<(usize, usize)>,
        range: (f64, f64),
        samples: usize,
        model: CouplingModel,
        circuit: CircuitParams,
    ) -> Result<Self, Error> {
        if sizes.is_empty() {
            return Err(Error::InvalidSpec("sweep needs at least one grid size"));
        }
        if sizes.iter().any(|&(r, c)| r == 0 || c == 0) {
            return Err(Error::InvalidSpec("grid sizes must be at least 1x1"));
        }
        let (lo, hi) = range;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
            return Err(Error::InvalidSpec("spacing range must satisfy 0 < lo < hi"));
        }
        if samples < 2 {
            return Err(Error::InvalidSpec("sweep needs at least two samples"));
        }
        Ok(Self {
            sizes,
            range,
            samples,
            model,
            circuit,
        })
    }

    /// Square grids `m × m` for each `m` in `sizes`.
    pub fn square(sizes: impl IntoIterator<Item = usize>, model: CouplingModel) -> Result<Self, Error> {
        Self::new(
            sizes.into_iter().map(|m| (m, m)).collect(),
            Self::DEFAULT_RANGE,
            Self::DEFAULT_SAMPLES,
            model,
            CircuitParams::default(),
        )
    }

    pub fn with_range(mut self, lo: f64, hi: f64) -> Result<Self, Error> {
        self.range = (lo, hi);
        Self::new(self.sizes, self.range, self.samples, self.model, self.circuit)
    }

    pub fn with_samples(mut self, samples: usize) -> Result<Self, Error> {
        self.samples = samples;
        Self::new(self.sizes, self.range, self.samples, self.model, self.circuit)
    }

    pub fn sizes(&self) -> &[(usize, usize)] {
        &self.sizes
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn model(&self) -> CouplingModel {
        self.model
    }

    pub fn circuit(&self) -> CircuitParams {
        self.circuit
    }

    /// The `i`-th sample position.
    pub fn spacing_at(&self, i: usize) -> f64 {
        let (lo, hi) = self.range;
        if i + 1 == self.samples {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (self.samples - 1) as f64
        }
    }
}

/// `|det M|` for a `rows × cols` grid at electrical spacing `x`.
pub fn grid_abs_det(rows: usize, cols: usize, x: f64, model: CouplingModel, circuit: CircuitParams) -> Result<f64, Error> {
    let layout = GridConfig::new(rows, cols, x)?.layout();
    Ok(build_matrix(&layout, model, circuit)?.determinant().norm())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepMinimum {
    pub x: f64,
    pub abs_det: f64,
}

impl SweepMinimum {
    /// Spacing in wavelengths, `x / 2π`.
    pub fn wavelengths(&self) -> f64 {
        self.x / (2.0 * PI)
    }
}

/// Sweep output for a single grid size.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSweep {
    pub rows: usize,
    pub cols: usize,
    /// `(x, |det|)` in increasing `x`.
    pub samples: Vec<(f64, f64)>,
    pub minimum: SweepMinimum,
}

impl GridSweep {
    pub fn antennas(&self) -> usize {
        self.rows * self.cols
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grids: Vec<GridSweep>,
}

/// Samples `|det|` uniformly for each grid size, then polishes the smallest
/// sample by golden-section search on its neighboring interval.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, Error> {
    let mut grids = Vec::with_capacity(spec.sizes.len());
    for &(rows, cols) in &spec.sizes {
        let eval = |x: f64| grid_abs_det(rows, cols, x, spec.model, spec.circuit);
        let mut samples = Vec::with_capacity(spec.samples);
        for i in 0..spec.samples {
            let x = spec.spacing_at(i);
            samples.push((x, eval(x)?));
        }
        // strict `<` keeps the smallest x on ties
        let mut best = 0;
        for (i, s) in samples.iter().enumerate() {
            if s.1 < samples[best].1 {
                best = i;
            }
        }
        let lo = samples[best.saturating_sub(1)].0;
        let hi = samples[(best + 1).min(samples.len() - 1)].0;
        let mut minimum = SweepMinimum {
            x: samples[best].0,
            abs_det: samples[best].1,
        };
        let polished = golden_section(eval, lo, hi)?;
        if polished.abs_det < minimum.abs_det {
            minimum = polished;
        }
        grids.push(GridSweep {
            rows,
            cols,
            samples,
            minimum,
        });
    }
    Ok(SweepResult { grids })
}

fn golden_section<F>(mut f: F, lo: f64, hi: f64) -> Result<SweepMinimum, Error>
where
    F: FnMut(f64) -> Result<f64, Error>,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > GOLDEN_RELATIVE_TOL * a.abs().max(b.abs()) {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd {
        SweepMinimum { x: c, abs_det: fc }
    } else {
        SweepMinimum { x: d, abs_det: fd }
    })
}

/// One row of the collapse table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseEntry {
    pub antennas: usize,
    pub rows: usize,
    pub cols: usize,
    pub minimum: SweepMinimum,
    /// Minimum divided by the previous row's minimum.
    pub ratio_to_previous: Option<f64>,
}

/// Sweep minima ordered by antenna count, with ratios between consecutive
/// entries.
pub fn monotone_collapse_report(result: &SweepResult) -> Vec<CollapseEntry> {
    let mut grids: Vec<&GridSweep> = result.grids.iter().collect();
    grids.sort_by_key(|g| g.antennas());
    let mut report: Vec<CollapseEntry> = Vec::with_capacity(grids.len());
    for g in grids {
        let ratio_to_previous = report.last().map(|prev| g.minimum.abs_det / prev.minimum.abs_det);
        report.push(CollapseEntry {
            antennas: g.antennas(),
            rows: g.rows,
            cols: g.cols,
            minimum: g.minimum,
            ratio_to_previous,
        });
    }
    report
}
