//! Certification and zero search on the published configurations.

mod common;

use nearfield_core::certification::RefinementOptions;
use nearfield_core::layouts::{line_trajectory, FamilyLoop, LINE_PHASE_OFFSET, LINE_RADIUS};
use nearfield_core::{
    find_zero, safe_distance_bound, shrink_radius_scan, trace_curve, winding_number, CircuitParams, CouplingModel,
    FindZeroError, IsoscelesConfig, IsoscelesFamily, LatticeTrajectory, LayoutFamily, LineConfig, LineFamily,
    NewtonOptions, RightTriangleConfig, RightTriangleFamily, TriangularLatticeConfig,
};

const FAR: CouplingModel = CouplingModel::Far;

fn zero_of<F: LayoutFamily>(family: &F, start: [f64; 2]) -> nearfield_core::ZeroLocation {
    find_zero(family, FAR, CircuitParams::default(), &start, NewtonOptions::default()).unwrap()
}

#[test]
fn newton_converges_quadratically_on_published_families() {
    let runs = [
        zero_of(&LineFamily, [5.1373, 1.59932]),
        zero_of(&IsoscelesFamily, [2.35477, 1.25534]),
        zero_of(&RightTriangleFamily, [2.07905, 1.59907]),
    ];
    for zero in &runs {
        assert!(zero.residual_modulus < 1e-12);
        let tail = &zero.residual_history[zero.residual_history.len().saturating_sub(3)..];
        assert!(tail.windows(2).all(|w| w[1] < w[0]), "{:?}", zero.residual_history);
        assert!(zero.iterations <= 6, "{} iterations", zero.iterations);
    }
    assert!((runs[1].parameters[0] - 2.35477).abs() <= 5e-5 && (runs[1].parameters[1] - 1.25534).abs() <= 1e-5);
    assert!((runs[2].parameters[0] - 2.07905).abs() <= 1e-5 && (runs[2].parameters[1] - 1.59907).abs() <= 1e-5);
}

#[test]
fn exact_model_has_no_zero_near_line_configuration() {
    let result = find_zero(&LineFamily, CouplingModel::Hertzian, CircuitParams::default(), &[5.1373, 1.59932], NewtonOptions::default());
    let err = result.unwrap_err();
    assert!(matches!(err, FindZeroError::NoConvergence(_) | FindZeroError::SingularJacobian(_)));
    assert!(err.best().unwrap().residual_modulus > 1e-3);
}

#[test]
fn published_line_loop_misses_the_zero() {
    let traj = line_trajectory(LineConfig::published(), LINE_RADIUS, LINE_PHASE_OFFSET).unwrap();
    let curve = trace_curve(&traj, FAR, CircuitParams::default(), RefinementOptions::default()).unwrap();
    let cert = winding_number(&curve);
    assert!(cert.certified);
    assert!(cert.min_modulus < 4.5e-6);
    // the flattened ellipse does not contain the zero found by Newton
    assert_eq!(cert.winding, 0);
}

#[test]
fn circular_line_scan_encloses_then_loses_the_zero() {
    let scan = shrink_radius_scan(
        |r| line_trajectory(LineConfig::published(), r, 0.25),
        FAR,
        CircuitParams::default(),
        &[5e-5, 2e-5, 1e-5],
        RefinementOptions::default(),
    )
    .unwrap();
    let windings: Vec<i64> = scan.entries.iter().map(|(_, c)| c.winding).collect();
    assert!(scan.entries.iter().all(|(_, c)| c.certified));
    // the zero sits 2.68e-5 from the loop center
    assert_eq!(windings, [-1, 0, 0]);
    assert_eq!(scan.smallest_enclosing_radius(), Some(5e-5));
    // enclosure at the largest radius implies a zero that Newton reaches
    let zero = zero_of(&LineFamily, [5.1373, 1.59932]);
    let offset = ((zero.parameters[0] - 5.1373).powi(2) + (zero.parameters[1] - 1.59932).powi(2)).sqrt();
    assert!(offset < 5e-5);
}

#[test]
fn triangle_loops_enclose_their_zeros() {
    let iso = IsoscelesConfig::published();
    let traj = FamilyLoop::new(IsoscelesFamily, [iso.base, iso.height], 5e-5, 0.25).unwrap();
    let cert = winding_number(&trace_curve(&traj, FAR, CircuitParams::default(), RefinementOptions::default()).unwrap());
    assert!(cert.certified && cert.winding != 0);

    let right = RightTriangleConfig::published();
    let traj = FamilyLoop::new(RightTriangleFamily, [right.leg_x, right.leg_y], 1e-5, 0.25).unwrap();
    let cert = winding_number(&trace_curve(&traj, FAR, CircuitParams::default(), RefinementOptions::default()).unwrap());
    assert!(cert.certified && cert.winding != 0);
}

#[test]
fn lattice_radius_scan() {
    let base = TriangularLatticeConfig::table1();
    let scan = shrink_radius_scan(
        |r| LatticeTrajectory::new(base.with_radius(r)?),
        CouplingModel::Mid,
        CircuitParams::default(),
        &[0.3, 0.27, 0.2, 0.1],
        RefinementOptions::default(),
    )
    .unwrap();
    let windings: Vec<i64> = scan.entries.iter().map(|(_, c)| c.winding).collect();
    assert_eq!(windings, [-1, -1, 0, 0]);
    assert_eq!(scan.smallest_enclosing_radius(), Some(0.27));
}

#[test]
fn lattice_centers_are_not_singular_under_exact_model() {
    let traj = LatticeTrajectory::new(TriangularLatticeConfig::table1()).unwrap();
    let cert = winding_number(&trace_curve(&traj, CouplingModel::Hertzian, CircuitParams::default(), RefinementOptions::default()).unwrap());
    assert!(cert.certified);
    assert_eq!(cert.winding, 0);
}

#[test]
fn safe_triangle_scan_never_winds() {
    let bound = safe_distance_bound(3, CouplingModel::Mid).unwrap();
    let center = [bound * 2.0, bound * 2.0];
    let scan = shrink_radius_scan(
        |r| FamilyLoop::new(RightTriangleFamily, center, r, 0.25),
        CouplingModel::Mid,
        CircuitParams::default(),
        &[bound, 0.5, 1e-3],
        RefinementOptions::default(),
    )
    .unwrap();
    assert!(scan.entries.iter().all(|(_, c)| c.certified && c.winding == 0));
    assert_eq!(scan.smallest_enclosing_radius(), None);
}

#[test]
fn loaded_circuit_moves_the_zero() {
    // with Z_L ≠ 0 the unit diagonal no longer matches the coupling scale
    let circuit = CircuitParams::new(nearfield_core::Complex64::new(0.5, 0.0)).unwrap();
    let traj = line_trajectory(LineConfig::published(), 0.0, 0.25).unwrap();
    let cert = winding_number(&trace_curve(&traj, FAR, circuit, RefinementOptions::default()).unwrap());
    assert!(cert.min_modulus > 1e-2);
}
