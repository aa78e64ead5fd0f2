//! Winding-number certification of determinant zeros.
//!
//! A closed trajectory of layouts maps, through the determinant of the
//! normalized impedance matrix, to a closed curve in the complex plane. When
//! that curve winds around the origin, shrinking the loop continuously to a
//! point must sweep the curve across 0, so some layout inside the swept
//! family has a singular matrix. The certificate here is the winding number
//! of a sampled curve whose consecutive samples never turn by π/2 or more.
//! [`find_zero`] then pins the zero down with Newton's method.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::coupling::CouplingModel;
use crate::error::Error;
use crate::layouts::{ClosedTrajectory, LayoutFamily};
use crate::matrix::{build_matrix, CircuitParams};

/// Samples with a smaller modulus make the curve uncertifiable.
pub const MODULUS_FLOOR: f64 = 1e-300;

/// Largest argument change allowed between consecutive certified samples.
pub const MAX_ARG_STEP: f64 = FRAC_PI_2;

const CLOSURE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub t: f64,
    pub value: Complex64,
}

/// How finely a closed curve is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementOptions {
    /// Uniform samples before adaptive bisection, at least 8.
    pub initial_samples: usize,
    /// Maximum number of bisections of any initial segment.
    pub max_depth: u32,
}

impl Default for RefinementOptions {
    fn default() -> Self {
        Self {
            initial_samples: 64,
            max_depth: 20,
        }
    }
}

impl RefinementOptions {
    pub fn with_samples(initial_samples: usize) -> Self {
        Self {
            initial_samples,
            ..Self::default()
        }
    }
}

/// Sampled closed curve `t ↦ value(t)` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantCurve {
    samples: Vec<CurveSample>,
    exhausted: bool,
}

impl DeterminantCurve {
    /// Samples ordered by `t`, first at 0 and last at 1.
    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    /// True when some segment still turned by π/2 or more at the depth cap.
    pub fn refinement_exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn min_modulus(&self) -> f64 {
        self.samples.iter().map(|s| s.value.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Multiplies every sample by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            samples: self
                .samples
                .iter()
                .map(|s| CurveSample {
                    t: s.t,
                    value: s.value * factor,
                })
                .collect(),
            exhausted: self.exhausted,
        }
    }
}

fn arg_step(from: Complex64, to: Complex64) -> f64 {
    (to * from.conj()).arg()
}

fn needs_split(a: Complex64, b: Complex64) -> bool {
    a.norm() < MODULUS_FLOOR || b.norm() < MODULUS_FLOOR || arg_step(a, b).abs() >= MAX_ARG_STEP
}

/// Samples a closed curve uniformly, then bisects every segment whose
/// argument turns by π/2 or more until it does not or `max_depth` is hit.
pub fn trace_closed_curve<F>(mut value_at: F, options: RefinementOptions) -> Result<DeterminantCurve, Error>
where
    F: FnMut(f64) -> Result<Complex64, Error>,
{
    if options.initial_samples < 8 {
        return Err(Error::InvalidSpec("curves need at least 8 initial samples"));
    }
    let n = options.initial_samples;
    let mut coarse = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = i as f64 / n as f64;
        coarse.push(CurveSample { t, value: value_at(t)? });
    }
    let gap = (coarse[n].value - coarse[0].value).norm();
    if gap.is_nan() || gap > CLOSURE_TOLERANCE * coarse[0].value.norm().max(1.0) {
        return Err(Error::OpenCurve { gap });
    }

    let mut samples = Vec::with_capacity(n + 1);
    samples.push(coarse[0]);
    let mut exhausted = false;
    for pair in coarse.windows(2) {
        refine(&mut value_at, pair[0], pair[1], options.max_depth, &mut samples, &mut exhausted)?;
    }
    Ok(DeterminantCurve { samples, exhausted })
}

fn refine<F>(
    value_at: &mut F,
    start: CurveSample,
    end: CurveSample,
    depth_left: u32,
    out: &mut Vec<CurveSample>,
    exhausted: &mut bool,
) -> Result<(), Error>
where
    F: FnMut(f64) -> Result<Complex64, Error>,
{
    if needs_split(start.value, end.value) {
        if depth_left == 0 {
            *exhausted = true;
        } else {
            let t = 0.5 * (start.t + end.t);
            let mid = CurveSample { t, value: value_at(t)? };
            refine(value_at, start, mid, depth_left - 1, out, exhausted)?;
            return refine(value_at, mid, end, depth_left - 1, out, exhausted);
        }
    }
    out.push(end);
    Ok(())
}

/// Determinant curve of `trajectory` under the given coupling model.
pub fn trace_curve<T: ClosedTrajectory + ?Sized>(
    trajectory: &T,
    model: CouplingModel,
    circuit: CircuitParams,
    options: RefinementOptions,
) -> Result<DeterminantCurve, Error> {
    trace_closed_curve(
        |t| {
            let layout = trajectory.layout_at(t)?;
            Ok(build_matrix(&layout, model, circuit)?.determinant())
        },
        options,
    )
}

/// Winding of a sampled closed curve around the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingCertificate {
    /// Counterclockwise turns around 0.
    pub winding: i64,
    pub min_modulus: f64,
    pub samples_used: usize,
    /// Every consecutive pair turns by less than π/2 and the curve stays
    /// away from 0.
    pub certified: bool,
}

/// Sums principal-branch argument steps between consecutive samples.
pub fn winding_number(curve: &DeterminantCurve) -> WindingCertificate {
    let samples = curve.samples();
    let min_modulus = curve.min_modulus();
    let mut total = 0.0;
    let mut max_step = 0.0f64;
    for pair in samples.windows(2) {
        let step = arg_step(pair[0].value, pair[1].value);
        max_step = max_step.max(step.abs());
        total += step;
    }
    let certified = !curve.exhausted
        && samples.len() >= 2
        && max_step < MAX_ARG_STEP
        && min_modulus >= MODULUS_FLOOR
        && min_modulus.is_finite();
    WindingCertificate {
        winding: libm::round(total / (2.0 * PI)) as i64,
        min_modulus,
        samples_used: samples.len(),
        certified,
    }
}

/// Newton settings for [`find_zero`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Success once `|det| < tol`.
    pub tol: f64,
    pub max_iterations: usize,
    /// Central-difference step in electrical units.
    pub step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iterations: 100,
            step: 1e-7,
        }
    }
}

/// Result of a Newton search for a zero of the determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroLocation {
    pub parameters: Vec<f64>,
    pub residual_modulus: f64,
    pub iterations: usize,
    /// `|det|` at the start and after every accepted step.
    pub residual_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FindZeroError {
    #[error(transparent)]
    Layout(#[from] Error),
    #[error("no convergence after {} iterations, best |det| = {}", .0.iterations, .0.residual_modulus)]
    NoConvergence(ZeroLocation),
    #[error("jacobian became singular, best |det| = {}", .0.residual_modulus)]
    SingularJacobian(ZeroLocation),
}

impl FindZeroError {
    /// Best point reached before giving up, if the search started at all.
    pub fn best(&self) -> Option<&ZeroLocation> {
        match self {
            Self::Layout(_) => None,
            Self::NoConvergence(best) | Self::SingularJacobian(best) => Some(best),
        }
    }
}

/// Newton iteration on `(Re det, Im det)` over the family parameters, with a
/// central-difference Jacobian and step halving whenever a full step leaves
/// the family or fails to shrink `|det|`. With more than two parameters the
/// minimum-norm step is taken.
pub fn find_zero<F: LayoutFamily + ?Sized>(
    family: &F,
    model: CouplingModel,
    circuit: CircuitParams,
    start: &[f64],
    options: NewtonOptions,
) -> Result<ZeroLocation, FindZeroError> {
    if family.dimension() < 2 || start.len() != family.dimension() {
        return Err(Error::InvalidSpec("zero search needs a start vector matching a family of at least two parameters").into());
    }
    let det_at = |p: &[f64]| -> Result<Complex64, Error> {
        let layout = family.layout(p)?;
        Ok(build_matrix(&layout, model, circuit)?.determinant())
    };

    let mut params = start.to_vec();
    let mut value = det_at(&params)?;
    let mut location = ZeroLocation {
        parameters: params.clone(),
        residual_modulus: value.norm(),
        iterations: 0,
        residual_history: alloc::vec![value.norm()],
    };

    let dim = params.len();
    let mut jacobian = alloc::vec![Complex64::new(0.0, 0.0); dim];
    let mut probe = params.clone();
    while location.residual_modulus >= options.tol {
        if location.iterations >= options.max_iterations {
            return Err(FindZeroError::NoConvergence(location));
        }
        for i in 0..dim {
            probe.copy_from_slice(&params);
            probe[i] = params[i] + options.step;
            let forward = det_at(&probe)?;
            probe[i] = params[i] - options.step;
            let backward = det_at(&probe)?;
            jacobian[i] = (forward - backward) / (2.0 * options.step);
        }
        let Some(direction) = newton_direction(&jacobian, value) else {
            return Err(FindZeroError::SingularJacobian(location));
        };

        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let trial: Vec<f64> = params.iter().zip(&direction).map(|(p, d)| p + scale * d).collect();
            if let Ok(trial_value) = det_at(&trial) {
                if trial_value.norm() < value.norm() {
                    accepted = Some((trial, trial_value));
                    break;
                }
            }
            scale *= 0.5;
        }
        let Some((next, next_value)) = accepted else {
            return Err(FindZeroError::NoConvergence(location));
        };
        params = next;
        value = next_value;
        location.parameters.clone_from(&params);
        location.residual_modulus = value.norm();
        location.iterations += 1;
        location.residual_history.push(value.norm());
    }
    Ok(location)
}

/// Solves `J δ = -F` for the real 2×p system, taking `δ = Jᵀ (J Jᵀ)⁻¹ (-F)`.
fn newton_direction(jacobian: &[Complex64], value: Complex64) -> Option<Vec<f64>> {
    // Rows of J are (Re ∂det/∂p_i) and (Im ∂det/∂p_i).
    let (mut aa, mut ab, mut bb) = (0.0, 0.0, 0.0);
    for d in jacobian {
        aa += d.re * d.re;
        ab += d.re * d.im;
        bb += d.im * d.im;
    }
    let gram_det = aa * bb - ab * ab;
    if !(gram_det.is_finite() && gram_det > 1e-24 * (aa + bb) * (aa + bb)) {
        return None;
    }
    // (J Jᵀ)⁻¹ (-F)
    let y_re = (bb * -value.re - ab * -value.im) / gram_det;
    let y_im = (aa * -value.im - ab * -value.re) / gram_det;
    Some(jacobian.iter().map(|d| d.re * y_re + d.im * y_im).collect())
}

/// Certificates for a shrinking sequence of loop radii.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusScan {
    pub entries: Vec<(f64, WindingCertificate)>,
}

impl RadiusScan {
    /// Smallest radius whose curve is certified with nonzero winding.
    pub fn smallest_enclosing_radius(&self) -> Option<f64> {
        self.entries
            .iter()
            .filter(|(_, c)| c.certified && c.winding != 0)
            .map(|&(r, _)| r)
            .reduce(f64::min)
    }
}

/// Certifies the loop for each radius in strictly decreasing `radii`.
pub fn shrink_radius_scan<T, B>(
    mut build: B,
    model: CouplingModel,
    circuit: CircuitParams,
    radii: &[f64],
    options: RefinementOptions,
) -> Result<RadiusScan, Error>
where
    T: ClosedTrajectory,
    B: FnMut(f64) -> Result<T, Error>,
{
    if radii.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(core::cmp::Ordering::Less)) {
        return Err(Error::InvalidSpec("radii must be strictly decreasing"));
    }
    let mut entries = Vec::with_capacity(radii.len());
    for &radius in radii {
        let trajectory = build(radius)?;
        let curve = trace_curve(&trajectory, model, circuit, options)?;
        entries.push((radius, winding_number(&curve)));
    }
    Ok(RadiusScan { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layouts::{line_trajectory, LineConfig, LineFamily};

    fn circle(center: Complex64, radius: f64, turns: f64) -> impl FnMut(f64) -> Result<Complex64, Error> {
        move |t| Ok(center + Complex64::from_polar(radius, 2.0 * PI * turns * t))
    }

    #[test]
    fn unit_circle_winds_once() {
        let curve = trace_closed_curve(circle(Complex64::new(0.0, 0.0), 1.0, 1.0), RefinementOptions::with_samples(64)).unwrap();
        assert_eq!(curve.samples().len(), 65);
        let cert = winding_number(&curve);
        assert_eq!(cert.winding, 1);
        assert!(cert.certified);
    }

    #[test]
    fn clockwise_circle_winds_negative() {
        let cert = winding_number(
            &trace_closed_curve(circle(Complex64::new(0.0, 0.0), 2.0, -1.0), RefinementOptions::default()).unwrap(),
        );
        assert_eq!(cert.winding, -1);
        assert!(cert.certified);
    }

    #[test]
    fn offset_circle_does_not_wind() {
        let cert = winding_number(
            &trace_closed_curve(circle(Complex64::new(2.0, 0.0), 1.0, 1.0), RefinementOptions::default()).unwrap(),
        );
        assert_eq!(cert.winding, 0);
        assert!(cert.certified);
        assert!((cert.min_modulus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fast_curve_gets_refined() {
        // five turns cannot be resolved by 8 uniform samples
        let curve = trace_closed_curve(circle(Complex64::new(0.0, 0.0), 1.0, 5.0), RefinementOptions::with_samples(8)).unwrap();
        let cert = winding_number(&curve);
        assert!(cert.samples_used > 9);
        assert_eq!(cert.winding, 5);
        assert!(cert.certified);
    }

    #[test]
    fn curve_through_origin_is_uncertifiable() {
        let curve =
            trace_closed_curve(circle(Complex64::new(1.0, 0.0), 1.0, 1.0), RefinementOptions { initial_samples: 8, max_depth: 6 }).unwrap();
        assert!(!winding_number(&curve).certified);
    }

    #[test]
    fn open_curve_rejected() {
        let result = trace_closed_curve(|t| Ok(Complex64::new(1.0 + t, 0.0)), RefinementOptions::default());
        assert!(matches!(result, Err(Error::OpenCurve { .. })));
        assert!(trace_closed_curve(circle(Complex64::new(0.0, 0.0), 1.0, 1.0), RefinementOptions::with_samples(4)).is_err());
    }

    #[test]
    fn constant_trajectory_has_zero_winding() {
        let traj = line_trajectory(LineConfig::published(), 0.0, 0.25).unwrap();
        let curve = trace_curve(&traj, CouplingModel::Far, CircuitParams::default(), RefinementOptions::default()).unwrap();
        let first = curve.samples()[0].value;
        assert!(curve.samples().iter().all(|s| s.value == first));
        let cert = winding_number(&curve);
        assert_eq!(cert.winding, 0);
        assert!(cert.certified);
    }

    #[test]
    fn newton_finds_line_zero() {
        let zero = find_zero(&LineFamily, CouplingModel::Far, CircuitParams::default(), &[5.1373, 1.59932], NewtonOptions::default())
            .unwrap();
        assert!(zero.residual_modulus < 1e-12);
        assert!((zero.parameters[0] - 5.1373).abs() < 5e-5);
        assert!((zero.parameters[1] - 1.59932).abs() < 5e-5);
    }

    #[test]
    fn newton_rejects_wrong_dimension() {
        let err = find_zero(&LineFamily, CouplingModel::Far, CircuitParams::default(), &[5.0], NewtonOptions::default());
        assert!(matches!(err, Err(FindZeroError::Layout(_))));
    }

    #[test]
    fn radii_must_decrease() {
        let build = |r| line_trajectory(LineConfig::published(), r, 0.25);
        let scan = shrink_radius_scan(build, CouplingModel::Far, CircuitParams::default(), &[1e-5, 2e-5], RefinementOptions::default());
        assert!(scan.is_err());
    }

    #[test]
    fn zero_radius_scan() {
        let build = |r| line_trajectory(LineConfig::published(), r, 0.25);
        let scan = shrink_radius_scan(build, CouplingModel::Far, CircuitParams::default(), &[0.0], RefinementOptions::default()).unwrap();
        assert_eq!(scan.entries.len(), 1);
        assert_eq!(scan.entries[0].1.winding, 0);
        assert!(scan.entries[0].1.certified);
        assert_eq!(scan.smallest_enclosing_radius(), None);
    }
}
