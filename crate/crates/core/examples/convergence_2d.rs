//! Convergence of the ghost-penalty stabilized method on the 2D flower for
//! orders 1 to 3.
//!
//! ```text
//! cargo run --release --example convergence_2d
//! ```

use cutdg::study::{run_convergence, StudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for order in 1..=3 {
        let config: StudyConfig =
            format!("problem = flower2d\norder = {order}\nn_list = 8, 16, 32, 64").parse()?;
        let table = run_convergence(&config)?;
        println!("p = {order}");
        println!(
            "{:>4} {:>8} {:>11} {:>6} {:>11} {:>6}",
            "n", "dofs", "L2", "eoc", "H1", "eoc"
        );
        for r in &table.rows {
            let rate = |v: Option<f64>| v.map_or("-".into(), |v| format!("{v:.2}"));
            println!(
                "{:>4} {:>8} {:>11.3e} {:>6} {:>11.3e} {:>6}",
                r.n,
                r.dofs,
                r.l2,
                rate(r.eoc_l2),
                r.h1,
                rate(r.eoc_h1)
            );
        }
    }
    Ok(())
}
