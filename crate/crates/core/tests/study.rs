//! End-to-end checks of the study drivers.

use cutdg::geometry::builtin_levelset;
use cutdg::linalg::condition_number;
use cutdg::study::*;

fn cfg(text: &str) -> StudyConfig {
    text.parse().expect("valid configuration")
}

#[test]
fn unshifted_sweep_row_matches_the_base_case() {
    let c = cfg("problem = circle\norder = 1\nn_list = 8\nsweep_steps = 2\nsweep_step = 0.01");
    let rows = run_translation_sweep(&c).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0].delta, 0.0);
    let problem = c.problem().unwrap();
    let d = discretize(&problem, 8, &c).unwrap();
    let base = solve_discrete(&d, &problem, 8, &c, false).unwrap();
    let kappa = condition_number(&d.system.matrix, c.cond_tol)
        .unwrap()
        .kappa;
    assert_eq!(rows[0].l2.to_bits(), base.errors.l2.to_bits());
    assert_eq!(rows[0].h1.to_bits(), base.errors.h1_full.to_bits());
    assert_eq!(rows[0].kappa.to_bits(), kappa.to_bits());
    assert!(rows.iter().all(|r| r.converged));
}

#[test]
fn interface_with_empty_second_domain_reduces_to_the_box_problem() {
    let c = cfg("order = 2");
    let whole = builtin_levelset("empty", &[]).unwrap();
    let mut interface = builtin_problem("interface2d_a", 2).unwrap();
    interface.level_set = whole.clone();
    let mut bvp = builtin_problem("flower2d", 2).unwrap();
    bvp.level_set = whole;
    bvp.bbox = interface.bbox;
    let a = solve_case(&interface, 6, &c, false).unwrap();
    let b = solve_case(&bvp, 6, &c, false).unwrap();
    assert_eq!(a.coefficients.len(), b.coefficients.len());
    let scale = b.coefficients.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
        assert!((x - y).abs() <= 1e-8 * scale, "{x} vs {y}");
    }
    assert!((a.errors.l2 - b.errors.l2).abs() <= 1e-8 * b.errors.l2);
}

#[test]
fn convergence_table_survives_a_csv_round_trip() {
    let t = run_convergence(&cfg("problem = flower2d\nn_list = 8, 16")).unwrap();
    let mut buf = Vec::new();
    t.write_csv(&mut buf).unwrap();
    let back = EocTable::read_csv(&buf[..]).unwrap();
    assert_eq!(back.rows, t.rows);
    assert!(back.rows[1].eoc_l2.unwrap() > 1.5);
}

#[test]
fn failed_meshes_are_reported_not_fatal() {
    // no element qualifies as fat, so agglomeration cannot be built
    let t = run_convergence(&cfg(
        "problem = flower2d\nn_list = 4, 8\ngp_variant = projection_p3\nc_s = 100",
    ))
    .unwrap();
    assert_eq!(t.failures.len(), 2);
    assert!(t.rows.iter().all(|r| r.l2.is_nan()));
}

mod invariants {
    use super::*;
    use cutdg::simplex::Point;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn linear_patch_test_holds_for_any_cut_position(dx in -0.3f64..0.3, dy in -0.3f64..0.3) {
            let c = cfg("order = 1");
            let problem = builtin_problem("halfplane", 1).unwrap().translated(Point::new(dx, dy, 0.0));
            let r = solve_case(&problem, 8, &c, false).unwrap();
            prop_assert!(r.errors.l2 < 1e-9, "l2 = {}", r.errors.l2);
        }
    }
}
