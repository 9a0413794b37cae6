//! Scale all ghost-penalty parameters by powers of ten and record how the
//! condition number reacts along a short translation sweep.
//!
//! ```text
//! cargo run --release --example parameter_scaling
//! ```

use cutdg::study::{run_parameter_scaling, StudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config: StudyConfig = "problem = circle
        n_list = 16
        sweep_steps = 40
        sweep_step = 0.01
        sweep_scale_by_h = false
        sweep_direction = 1, 1
        scales = 1e-4, 1e-2, 1, 1e2, 1e4"
        .parse()?;
    println!(
        "{:>8} {:>11} {:>11} {:>9}",
        "scale", "min kappa", "max kappa", "max/min"
    );
    for r in run_parameter_scaling(&config)? {
        println!(
            "{:>8.0e} {:>11.3e} {:>11.3e} {:>9.2}",
            r.scale, r.kappa_min, r.kappa_max, r.fluctuation
        );
    }
    Ok(())
}
