//! Global polynomials of the element degree are reproduced to round-off on a
//! generically cut half plane, for every ghost-penalty variant.
//!
//! ```text
//! cargo run --release --example patch_test
//! ```

use cutdg::study::{builtin_problem, solve_case, StudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for variant in [
        "face_jumps",
        "full_gradient",
        "projection_p1",
        "projection_p2",
        "projection_p3",
    ] {
        for order in 1..=3 {
            let config: StudyConfig = format!("gp_variant = {variant}\norder = {order}").parse()?;
            let problem = builtin_problem("halfplane", order)?;
            let r = solve_case(&problem, 8, &config, false)?;
            println!("{variant:<14} p = {order}: L2 error {:.2e}", r.errors.l2);
        }
    }
    Ok(())
}
