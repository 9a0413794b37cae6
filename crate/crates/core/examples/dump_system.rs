//! Write the assembled matrix (`i j value`, 0-based) and the background mesh
//! to text files for inspection elsewhere.
//!
//! ```text
//! cargo run --release --example dump_system -- out/
//! ```

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use cutdg::study::{discretize, StudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    fs::create_dir_all(&dir)?;
    let config: StudyConfig = "problem = circle\norder = 1".parse()?;
    let problem = config.problem()?;
    let d = discretize(&problem, 8, &config)?;
    d.system
        .matrix
        .write_coordinates(BufWriter::new(File::create(dir.join("matrix.txt"))?))?;
    d.mesh
        .write_text(BufWriter::new(File::create(dir.join("mesh.txt"))?))?;
    println!("{} unknowns written to {}", d.system.n(), dir.display());
    Ok(())
}
