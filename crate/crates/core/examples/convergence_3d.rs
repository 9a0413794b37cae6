//! Linear elements on the 3D flower, N = 6, 12, 24. Takes several minutes.
//!
//! ```text
//! cargo run --release --example convergence_3d
//! ```

use cutdg::study::{run_convergence, StudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config: StudyConfig = "problem = flower3d\norder = 1\nn_list = 6, 12, 24".parse()?;
    let table = run_convergence(&config)?;
    table.write_csv(std::io::stdout())?;
    Ok(())
}
