//! The solvers are generic over the scalar type; exercise the `f32`
//! instantiation end to end. Quantitative tolerances are an `f64`
//! affair, so these checks are structural: runs complete, stay finite
//! and land in the right ballpark.

use kinlb::config::{Overrides, SolverConfig};
use kinlb::problems;

#[test]
fn burgers_square_runs_in_single_precision() {
    let p = problems::by_id::<f32>("burgers-square").unwrap();
    let config = SolverConfig::for_problem(&p, &Overrides::default()).unwrap();
    let (u, report) = kinlb::run(&p, &config).unwrap();
    assert!(u.all_finite());
    assert!(report.steps > 0);
    assert!(u.max_value() <= 1.0 + 1e-5);
    assert!(u.min_value() >= -1e-5);
}

#[test]
fn stiff_source_runs_in_single_precision() {
    let p = problems::leveque_yee::<f32>(100.0);
    let config = SolverConfig::for_problem(&p, &Overrides::default()).unwrap();
    let (u, _) = kinlb::run_with_source(&p, &config).unwrap();
    assert!(u.all_finite());
    // the front still sits near x = 0.6
    let grid = u.grid().clone();
    let mut crossing = f32::NAN;
    for i in 1..grid.shape()[0] {
        let (a, b) = (u.values()[i - 1], u.values()[i]);
        if (a - 0.5) * (b - 0.5) <= 0.0 && a != b {
            crossing = grid.position_ij(i - 1, 0)[0] + grid.dx() * (0.5 - a) / (b - a);
            break;
        }
    }
    assert!((crossing - 0.6).abs() < 0.05, "front at {crossing}");
}

#[test]
fn oracle_equivalence_holds_at_single_precision_scale() {
    let p = problems::by_id::<f32>("burgers-sine").unwrap();
    let config = SolverConfig::for_problem(&p, &Overrides::default()).unwrap();
    let mut lb = kinlb::LbSolver::new(&p, &config).unwrap();
    let mut eo = kinlb::EoSolver::new(&p, &config).unwrap();
    let mut max_diff = 0.0f32;
    while !(lb.is_finished() || eo.is_finished()) {
        lb.step().unwrap();
        eo.step().unwrap();
        let d = lb
            .u()
            .values()
            .iter()
            .zip(eo.u().values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f32::max);
        max_diff = max_diff.max(d);
    }
    assert!(max_diff < 1e-5, "lb vs eo differ by {max_diff}");
}
