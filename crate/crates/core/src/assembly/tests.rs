use super::*;

#[test]
fn variant_names_round_trip() {
    for v in GhostVariant::ALL {
        assert_eq!(v.name().parse::<GhostVariant>().unwrap(), v);
    }
    assert_eq!(
        "FaceJumps".parse::<GhostVariant>().unwrap(),
        GhostVariant::FaceJumps
    );
    assert!("bogus".parse::<GhostVariant>().is_err());
}

#[test]
fn harmonic_weights_high_contrast() {
    let p = InterfaceParams {
        kappa1: 1.0,
        kappa2: 1e6,
        ..Default::default()
    };
    let (w1, w2) = p.harmonic_weights();
    assert!((w1 + w2 - 1.0).abs() < 1e-15);
    let expected = 2.0 * p.beta_gamma_tilde * (1.0 - 1e-6);
    assert!((p.beta_gamma() - expected).abs() < 1e-9 * expected);
    assert!(p.beta_gamma() <= 2.0 * p.beta_gamma_tilde * p.kappa1.min(p.kappa2));
}

#[test]
fn params_validate() {
    assert!(BvpParams::default().validate().is_ok());
    assert!(BvpParams {
        beta: 0.0,
        ..Default::default()
    }
    .validate()
    .is_err());
    assert!(BvpParams {
        gamma: vec![-1.0],
        ..Default::default()
    }
    .validate()
    .is_err());
}

use std::collections::{BTreeMap, BTreeSet};

use crate::geometry::{
    builtin_levelset, classify, classify_two_domain, AnalyticLevelSet, Shape, DEFAULT_EPS,
};
use crate::linalg::symmetric_eigenvalues;
use crate::mesh::{BackgroundMesh, BoundingBox};
use crate::quadrature::CutQuadrature;
use crate::space::BrokenSpace;

fn square(lo: f64, hi: f64, n: usize) -> BackgroundMesh {
    BackgroundMesh::structured(BoundingBox::cube(lo, hi), n, 2).unwrap()
}

fn zero(_: &Point) -> f64 {
    0.0
}

fn quad_form(a: &SparseSym, v: &[f64]) -> f64 {
    crate::linalg::dot(v, &a.mul_vec(v))
}

/// Polynomials in (x, y) as exponent -> coefficient maps.
type Poly = BTreeMap<(usize, usize), f64>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&(i, j), &c) in a {
        for (&(k, l), &d) in b {
            *out.entry((i + k, j + l)).or_insert(0.0) += c * d;
        }
    }
    out
}

fn poly_diff(a: &Poly, axis: usize) -> Poly {
    let mut out = Poly::new();
    for (&(i, j), &c) in a {
        let e = if axis == 0 { i } else { j };
        if e > 0 {
            let key = if axis == 0 { (i - 1, j) } else { (i, j - 1) };
            *out.entry(key).or_insert(0.0) += c * e as f64;
        }
    }
    out
}

/// `((t - c) / s)^a` expanded in `t`.
fn shifted_power(a: usize, c: f64, s: f64, axis: usize) -> Poly {
    let mut out = Poly::new();
    for r in 0..=a {
        let binom = (0..r).fold(1.0, |acc, i| acc * (a - i) as f64 / (i + 1) as f64);
        let coef = binom * (-c).powi((a - r) as i32) / s.powi(a as i32);
        let key = if axis == 0 { (r, 0) } else { (0, r) };
        out.insert(key, coef);
    }
    out
}

/// Exact integral over the triangle `(0,0), (1,0), (1,1)`, i.e. `0 <= y <= x <= 1`.
fn integrate_lower_triangle(p: &Poly) -> f64 {
    p.iter()
        .map(|(&(a, b), &c)| c / ((b + 1) as f64 * (a + b + 2) as f64))
        .sum()
}

#[test]
fn element_stiffness_matches_symbolic_oracle() {
    let m = square(0.0, 1.0, 1);
    assert_eq!(
        m.element(0).vertices(),
        &[
            Point::new(0.0, 0.0, 0.0),
            Point::new(1.0, 0.0, 0.0),
            Point::new(1.0, 1.0, 0.0)
        ]
    );
    let phi = builtin_levelset("empty", &[]).unwrap();
    let class = classify(&m, &phi, DEFAULT_EPS);
    for k in 1..=3 {
        let space = BrokenSpace::new(&m, &class.active_elements, k).unwrap();
        let cq = CutQuadrature::new(&m, &phi, class.sign_rule, 0, 2 * k);
        let stiff = assemble_gram(&cq, &class, &space, GramKind::Stiffness, GramRegion::Full);
        let basis = space.basis(0);
        let (c, s) = (basis.center(), basis.scale());
        let polys: Vec<Poly> = (0..space.dofs_per_element())
            .map(|i| {
                let mut p = Poly::new();
                for (q, a) in space.exponents().iter().enumerate() {
                    let mono = poly_mul(
                        &shifted_power(a[0], c.x, s, 0),
                        &shifted_power(a[1], c.y, s, 1),
                    );
                    for (key, v) in mono {
                        *p.entry(key).or_insert(0.0) += basis.coefficients()[(i, q)] * v;
                    }
                }
                p
            })
            .collect();
        let r = space.dofs(0);
        for i in 0..polys.len() {
            for j in 0..polys.len() {
                let gx = poly_mul(&poly_diff(&polys[i], 0), &poly_diff(&polys[j], 0));
                let gy = poly_mul(&poly_diff(&polys[i], 1), &poly_diff(&polys[j], 1));
                let exact = integrate_lower_triangle(&gx) + integrate_lower_triangle(&gy);
                let got = stiff.get(r.start + i, r.start + j);
                assert!(
                    (got - exact).abs() < 1e-10 * (1.0 + exact.abs()),
                    "k={k} ({i},{j}): {got} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn uncut_square_nitsche_hand_values() {
    // phi = -1: the box boundary carries the Nitsche terms
    let m = square(0.0, 1.0, 1);
    let phi = builtin_levelset("empty", &[]).unwrap();
    let class = classify(&m, &phi, DEFAULT_EPS);
    let space = BrokenSpace::new(&m, &class.active_elements, 1).unwrap();
    let cq = CutQuadrature::new(&m, &phi, class.sign_rule, 0, 2);
    let op = assemble_bvp(&cq, &class, &space, &BvpParams::default(), &zero, &zero).unwrap();
    let one = space.l2_project(&m, |_| 1.0, 0).coeffs;
    assert!((quad_form(&op.matrix, &one) - 200.0).abs() < 1e-10);
    // |grad x|^2 - 2 (d_n x, x) + 50 |x|^2 on the boundary = 1 - 2 + 50 * 5/3
    let x = space.l2_project(&m, |p| p.x, 0).coeffs;
    assert!((quad_form(&op.matrix, &x) - (1.0 - 2.0 + 250.0 / 3.0)).abs() < 1e-10);
}

#[test]
fn constant_jump_on_single_ghost_face() {
    let m = square(0.0, 1.0, 1);
    let phi = AnalyticLevelSet::new(
        "x",
        Shape::HalfSpace {
            normal: [1.0, 0.0, 0.0],
            offset: 0.5,
        },
    );
    let class = classify(&m, &phi, DEFAULT_EPS);
    assert_eq!(class.ghost_faces.len(), 1);
    let space = BrokenSpace::new(&m, &class.active_elements, 1).unwrap();
    let cq = CutQuadrature::new(&m, &phi, class.sign_rule, 0, 2);
    let g = assemble_ghost_penalty(&cq, &class, &space, &BvpParams::default()).unwrap();
    let mut v = space.l2_project(&m, |p| p.x, 0).coeffs;
    let shifted = space.l2_project(&m, |p| p.x + 1.0, 0).coeffs;
    let r = space.dofs(1);
    v[r.clone()].copy_from_slice(&shifted[r]);
    assert!((quad_form(&g, &v) - 50.0 * 2f64.sqrt()).abs() < 1e-10);
}

#[test]
fn ghost_penalties_vanish_on_global_polynomials() {
    let m = square(-1.0, 1.0, 6);
    let phi = builtin_levelset("circle", &[0.55, 0.03, -0.02]).unwrap();
    let class = classify(&m, &phi, DEFAULT_EPS);
    let cq = CutQuadrature::new(&m, &phi, class.sign_rule, 1, 6);
    for k in 1..=3 {
        let space = BrokenSpace::new(&m, &class.active_elements, k).unwrap();
        let p = |x: &Point| match k {
            1 => 0.3 - 2.0 * x.x + x.y,
            2 => 1.0 + x.x * x.y - 0.5 * x.y * x.y,
            _ => x.x * x.x * x.x - 2.0 * x.x * x.y * x.y + x.y,
        };
        let v = space.l2_project(&m, p, 0).coeffs;
        for variant in GhostVariant::ALL {
            let params = BvpParams {
                gp_variant: variant,
                ..Default::default()
            };
            let g = assemble_ghost_penalty(&cq, &class, &space, &params).unwrap();
            let norm2 = crate::linalg::dot(&v, &v);
            assert!(
                quad_form(&g, &v).abs() < 1e-10 * norm2,
                "{variant} k={k}: {}",
                quad_form(&g, &v)
            );
        }
    }
}

#[test]
fn face_based_variants_keep_fitted_dg_sparsity() {
    let m = square(-1.0, 1.0, 6);
    let phi = builtin_levelset("circle", &[0.55]).unwrap();
    let class = classify(&m, &phi, DEFAULT_EPS);
    let space = BrokenSpace::new(&m, &class.active_elements, 2).unwrap();
    let cq = CutQuadrature::new(&m, &phi, class.sign_rule, 1, 4);
    let mut dg = BTreeSet::new();
    let mut couple = |a: usize, b: usize| {
        for i in space.dofs(a) {
            for j in space.dofs(b) {
                dg.insert((i, j));
                dg.insert((j, i));
            }
        }
    };
    for &e in &class.active_elements {
        couple(e, e);
    }
    for &f in &class.interior_faces {
        let face = m.face(f);
        couple(face.left, face.right.unwrap());
    }
    let g = |x: &Point| x.x;
    for variant in [
        GhostVariant::FaceJumps,
        GhostVariant::FullGradient,
        GhostVariant::ProjectionP1,
    ] {
        let params = BvpParams {
            gp_variant: variant,
            ..Default::default()
        };
        let op = assemble_bvp(&cq, &class, &space, &params, &g, &g).unwrap();
        let pattern: BTreeSet<(usize, usize)> = op.matrix.pattern().into_iter().collect();
        assert_eq!(pattern, dg, "{variant}");
    }
    let params = BvpParams {
        gp_variant: GhostVariant::ProjectionP2,
        ..Default::default()
    };
    let op = assemble_bvp(&cq, &class, &space, &params, &g, &g).unwrap();
    assert!(op.matrix.nnz() > dg.len());
}

#[test]
fn bvp_matrix_is_symmetric_positive_definite() {
    let m = square(-1.0, 1.0, 6);
    for (t, k) in [(0.0, 1), (0.013, 2), (0.071, 3), (0.17, 1)] {
        let phi = builtin_levelset("flower2d", &[])
            .unwrap()
            .translate(Point::new(t, -0.5 * t, 0.0));
        let class = classify(&m, &phi, DEFAULT_EPS);
        let space = BrokenSpace::new(&m, &class.active_elements, k).unwrap();
        let cq = CutQuadrature::new(&m, &phi, class.sign_rule, 1, 2 * k);
        let g = |x: &Point| x.y;
        let op = assemble_bvp(&cq, &class, &space, &BvpParams::default(), &g, &g).unwrap();
        assert_eq!(op.matrix.asymmetry(), 0.0);
        let lmin = symmetric_eigenvalues(&op.matrix.to_dense())[0];
        assert!(lmin > 0.0, "t={t} k={k}: {lmin}");
    }
}

#[test]
fn unstabilized_empty_cut_element_is_reported() {
    // a cut element whose inside part is a sliver below the drop threshold
    let m = square(0.0, 1.0, 2);
    let phi = AnalyticLevelSet::new(
        "x",
        Shape::HalfSpace {
            normal: [1.0, 0.0, 0.0],
            offset: 1e-11,
        },
    );
    let class = classify(&m, &phi, 0.0);
    let space = BrokenSpace::new(&m, &class.active_elements, 1).unwrap();
    let cq = CutQuadrature::new(&m, &phi, class.sign_rule, 0, 2);
    let params = BvpParams {
        gp_variant: GhostVariant::None,
        ..Default::default()
    };
    assert!(matches!(
        assemble_bvp(&cq, &class, &space, &params, &zero, &zero),
        Err(AssemblyError::EmptyCutElement(_))
    ));
    assert!(assemble_bvp(&cq, &class, &space, &BvpParams::default(), &zero, &zero).is_ok());
}

#[test]
fn interface_system_is_symmetric_positive_definite() {
    let m = square(-1.0, 1.0, 5);
    let phi = builtin_levelset("flower2d", &[]).unwrap();
    let class = classify_two_domain(&m, &phi, DEFAULT_EPS);
    let s1 = BrokenSpace::new(&m, &class.inner.active_elements, 1).unwrap();
    let s2 = BrokenSpace::new(&m, &class.outer.active_elements, 1).unwrap();
    let cq = CutQuadrature::new(&m, &phi, class.inner.sign_rule, 1, 2);
    let one = |_: &Point| 1.0;
    let flux = |_: &Point, n: &Point| n.x;
    let data = InterfaceData {
        f: [&one, &one],
        g: [&zero, &zero],
        g_d: &zero,
        g_n: &flux,
    };
    for weighting in [Weighting::Harmonic, Weighting::CutArea] {
        for kappa2 in [1.0, 1e3] {
            let params = InterfaceParams {
                kappa2,
                weighting,
                ..Default::default()
            };
            let op = assemble_interface(&cq, &class, [&s1, &s2], &params, &data).unwrap();
            assert_eq!(op.offsets, vec![0, s1.n_dofs()]);
            assert_eq!(op.matrix.asymmetry(), 0.0);
            assert!(
                symmetric_eigenvalues(&op.matrix.to_dense())[0] > 0.0,
                "{weighting:?} {kappa2}"
            );
        }
    }
}

#[test]
fn small_cut_without_fat_neighbour_fails_loudly() {
    // every active element is a tiny corner cut
    let m = square(0.0, 1.0, 2);
    let phi = builtin_levelset("circle", &[0.05, 0.5, 0.5]).unwrap();
    let class = classify(&m, &phi, DEFAULT_EPS);
    let space = BrokenSpace::new(&m, &class.active_elements, 1).unwrap();
    let cq = CutQuadrature::new(&m, &phi, class.sign_rule, 2, 2);
    let params = BvpParams {
        gp_variant: GhostVariant::ProjectionP3,
        ..Default::default()
    };
    assert!(matches!(
        assemble_ghost_penalty(&cq, &class, &space, &params),
        Err(AssemblyError::NoFatNeighbour(_))
    ));
}
