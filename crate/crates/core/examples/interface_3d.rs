//! 3D interface problems: eight balls without contrast, and corner balls plus
//! a cylinder with contrast 1:10. Pass `eight_balls` or `corner_balls_cylinder`;
//! each takes about five minutes at N = 6, 9, 12.
//!
//! ```text
//! cargo run --release --example interface_3d -- eight_balls
//! ```

use cutdg::study::{run_interface_convergence, StudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "eight_balls".into());
    let config: StudyConfig =
        format!("problem = {problem}\norder = 1\nn_list = 6, 9, 12").parse()?;
    let table = run_interface_convergence(&config)?;
    table.write_csv(std::io::stdout())?;
    Ok(())
}
