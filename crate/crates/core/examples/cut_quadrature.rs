//! Cut-cell quadrature on its own: area and perimeter of a circle, and the
//! volume of the 3D flower, as the refinement depth grows.
//!
//! ```text
//! cargo run --release --example cut_quadrature
//! ```

use std::f64::consts::PI;

use cutdg::geometry::{builtin_levelset, classify, Side, DEFAULT_EPS};
use cutdg::mesh::{BackgroundMesh, BoundingBox};
use cutdg::quadrature::CutQuadrature;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mesh = BackgroundMesh::structured(BoundingBox::cube(-0.51, 0.51), 8, 2)?;
    let circle = builtin_levelset("circle", &[])?;
    let class = classify(&mesh, &circle, DEFAULT_EPS);
    let r: f64 = 0.25;
    println!(
        "circle r = {r}: exact area {:.8}, perimeter {:.8}",
        PI * r * r,
        2.0 * PI * r
    );
    for depth in 0..=5 {
        let cq = CutQuadrature::new(&mesh, &circle, class.sign_rule, depth, 2);
        let area: f64 = class
            .active_elements
            .iter()
            .map(|&e| cq.volume(e, Side::Inside).weights.iter().sum::<f64>())
            .sum();
        let length: f64 = class
            .cut_elements
            .iter()
            .map(|&e| cq.interface(e).weights.iter().sum::<f64>())
            .sum();
        println!(
            "depth {depth}: area {area:.8} (err {:.1e}), perimeter {length:.8} (err {:.1e})",
            (area - PI * r * r).abs(),
            (length - 2.0 * PI * r).abs()
        );
    }

    let mesh = BackgroundMesh::structured(BoundingBox::cube(-0.8, 0.8), 8, 3)?;
    let flower = builtin_levelset("flower3d", &[])?;
    let class = classify(&mesh, &flower, DEFAULT_EPS);
    for depth in 0..=2 {
        let cq = CutQuadrature::new(&mesh, &flower, class.sign_rule, depth, 2);
        let vol: f64 = class
            .active_elements
            .iter()
            .map(|&e| cq.volume(e, Side::Inside).weights.iter().sum::<f64>())
            .sum();
        println!("3D flower, depth {depth}: volume {vol:.6}");
    }
    Ok(())
}
