//! Generalized eigenvalue ratios that measure how well the ghost penalty
//! extends control from the physical domain to the whole active mesh.
//!
//! `ep1`: full-element gradient vs physical gradient plus ghost penalty.
//! `ep3`: the same with masses. `ep4`: ghost penalty vs scaled full mass.
//!
//! ```text
//! cargo run --release --example extension_spectra
//! ```

use cutdg::study::{run_ep_sweep, StudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config: StudyConfig = "problem = circle
        n_list = 6
        sweep_steps = 50
        sweep_step = 0.002
        sweep_scale_by_h = false
        sweep_direction = 1, 1
        sweep_variants = face_jumps, full_gradient, projection_p1, projection_p2, projection_p3"
        .parse()?;
    let rows = run_ep_sweep(&config)?;
    println!(
        "{:<14} {:>10} {:>10} {:>10}",
        "variant", "max ep1", "max ep3", "max ep4"
    );
    for v in config.variants() {
        let part: Vec<_> = rows.iter().filter(|r| r.variant == v.name()).collect();
        let max =
            |f: fn(&cutdg::study::EpRow) -> f64| part.iter().map(|r| f(r)).fold(0.0, f64::max);
        println!(
            "{:<14} {:>10.3e} {:>10.3e} {:>10.3e}",
            v.name(),
            max(|r| r.ep1),
            max(|r| r.ep3),
            max(|r| r.ep4)
        );
    }
    Ok(())
}
