//! Two-domain problem on the flower interface, first without contrast, then
//! with diffusion coefficients 1 and 1e6.
//!
//! ```text
//! cargo run --release --example interface_2d
//! ```

use cutdg::study::{run_interface_convergence, StudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for problem in ["interface2d_a", "interface2d_b"] {
        let config: StudyConfig =
            format!("problem = {problem}\norder = 1\nn_list = 8, 16, 32, 64").parse()?;
        let table = run_interface_convergence(&config)?;
        println!("{problem}");
        for r in &table.rows {
            println!(
                "{:>4} L2 {:.3e} ({})  |k^1/2 grad e| {:.3e} ({})",
                r.n,
                r.l2,
                r.eoc_l2.map_or("-".into(), |v| format!("{v:.2}")),
                r.h1,
                r.eoc_h1.map_or("-".into(), |v| format!("{v:.2}"))
            );
        }
    }
    Ok(())
}
