//! Assemble and solve the Poisson problem on the flower domain step by step,
//! using the library building blocks directly instead of the study drivers.
//!
//! ```text
//! cargo run --release --example poisson_flower -- 32
//! ```

use std::f64::consts::PI;

use cutdg::assembly::{assemble_bvp, BvpParams};
use cutdg::geometry::{builtin_levelset, classify, Side, DEFAULT_EPS};
use cutdg::linalg::solve;
use cutdg::mesh::{BackgroundMesh, BoundingBox};
use cutdg::quadrature::CutQuadrature;
use cutdg::simplex::Point;
use cutdg::space::{BrokenSpace, FieldVector};

fn exact(x: &Point) -> f64 {
    (PI * x.x).sin() * (PI * x.y).cos()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map_or(Ok(32), |s| s.parse())?;
    let order = 2;

    let mesh = BackgroundMesh::structured(BoundingBox::cube(-1.1, 1.1), n, 2)?;
    let phi = builtin_levelset("flower2d", &[])?;
    let class = classify(&mesh, &phi, DEFAULT_EPS);
    println!(
        "{} elements, {} active, {} cut, {} ghost faces",
        mesh.n_elements(),
        class.active_elements.len(),
        class.cut_elements.len(),
        class.ghost_faces.len()
    );

    let space = BrokenSpace::new(&mesh, &class.active_elements, order)?;
    let cq = CutQuadrature::new(&mesh, &phi, class.sign_rule, order + 1, 2 * order);

    // -Lap u = 2 pi^2 u for this u
    let f = |x: &Point| 2.0 * PI * PI * exact(x);
    let system = assemble_bvp(&cq, &class, &space, &BvpParams::default(), &f, &exact)?;
    let sol = solve(&system.matrix, &system.rhs)?;
    println!(
        "{} unknowns, {:?}, residual {:.2e}",
        system.n(),
        sol.method,
        sol.residual
    );

    // plain L2 error on the physical domain, with a finer rule than the solve used
    let u = FieldVector::new(&space, sol.x);
    let fine = cq.oversampled(2, 2);
    let mut err2 = 0.0;
    for &e in &class.active_elements {
        let q = fine.volume(e, Side::Inside);
        err2 += q.integrate(|x| (u.value(e, x) - exact(x)).powi(2));
    }
    println!("L2 error {:.4e}", err2.sqrt());
    Ok(())
}
