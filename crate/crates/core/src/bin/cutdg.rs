//! Command-line driver for the study harness.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cutdg::study::{
    discretize, fluctuation, rows_of, run_convergence, run_interface_convergence,
    run_parameter_scaling, run_translation_sweep, solve_discrete, write_rows, EocTable,
    StudyConfig, StudyError,
};

#[derive(Parser)]
#[command(
    name = "cutdg",
    version,
    about = "Cut discontinuous Galerkin experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one case on the first mesh of the list.
    Solve(Common),
    /// Convergence study over the mesh list.
    Converge(Common),
    /// Condition and error sweep while translating the domain.
    SweepTranslate(Common),
    /// Condition sweep repeated for scaled ghost-penalty parameters.
    ParamScale(Common),
    /// Convergence study of an interface problem.
    InterfaceConverge(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Solve(c)
            | Command::Converge(c)
            | Command::SweepTranslate(c)
            | Command::ParamScale(c)
            | Command::InterfaceConverge(c) => c,
        }
    }
}

#[derive(Args)]
struct Common {
    /// `key = value` configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Exit with a failure code when any row failed.
    #[arg(long)]
    strict: bool,
}

#[derive(Serialize)]
struct SolveRow {
    n: usize,
    h: f64,
    dofs: usize,
    l2: f64,
    h1: f64,
    energy: f64,
    residual: f64,
    method: String,
    kappa: f64,
}

fn csv_path(out: &Path, config: &StudyConfig, default: &str) -> PathBuf {
    out.join(config.out_csv.as_deref().unwrap_or(default))
}

fn create(path: &Path) -> Result<BufWriter<File>, StudyError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| StudyError::Io(format!("{}: {e}", path.display())))
}

fn csv_err(e: csv::Error) -> StudyError {
    StudyError::Io(e.to_string())
}

fn write_table(table: &EocTable, path: &Path) -> Result<usize, StudyError> {
    table.write_csv(create(path)?).map_err(csv_err)?;
    for (n, msg) in &table.failures {
        eprintln!("n = {n}: {msg}");
    }
    for r in &table.rows {
        let rate = |r: Option<f64>| r.map_or("-".to_string(), |v| format!("{v:.2}"));
        println!(
            "{:>4} {:>10.3e} {:>6} {:>10.3e} {:>6}",
            r.n,
            r.l2,
            rate(r.eoc_l2),
            r.h1,
            rate(r.eoc_h1)
        );
    }
    Ok(table.failures.len())
}

/// Runs a subcommand and returns the number of failed rows.
fn run(command: &Command) -> Result<usize, StudyError> {
    let c = command.common();
    let config = StudyConfig::from_file(&c.config)?;
    fs::create_dir_all(&c.out).map_err(|e| StudyError::Io(format!("{}: {e}", c.out.display())))?;
    match command {
        Command::Solve(_) => {
            let problem = config.problem()?;
            let n = *config
                .n_list(&problem)
                .first()
                .ok_or_else(|| StudyError::Config("empty n_list".into()))?;
            let d = discretize(&problem, n, &config)?;
            if let Some(name) = &config.dump_matrix {
                d.system
                    .matrix
                    .write_coordinates(create(&c.out.join(name))?)
                    .map_err(|e| StudyError::Io(e.to_string()))?;
            }
            if let Some(name) = &config.dump_mesh {
                d.mesh
                    .write_text(create(&c.out.join(name))?)
                    .map_err(|e| StudyError::Io(e.to_string()))?;
            }
            let r = solve_discrete(&d, &problem, n, &config, config.condition)?;
            let e = &r.errors;
            let row = SolveRow {
                n,
                h: e.h,
                dofs: e.dofs,
                l2: e.l2,
                h1: if problem.is_interface() {
                    e.h1_semi
                } else {
                    e.h1_full
                },
                energy: e.energy,
                residual: r.residual,
                method: format!("{:?}", r.method).to_lowercase(),
                kappa: r.condition.as_ref().map_or(f64::NAN, |k| k.kappa),
            };
            println!(
                "n = {n}, dofs = {}, l2 = {:.4e}, h1 = {:.4e}, energy = {:.4e}",
                row.dofs, row.l2, row.h1, row.energy
            );
            if row.kappa.is_finite() {
                println!("kappa = {:.4e}", row.kappa);
            }
            write_rows(create(&csv_path(&c.out, &config, "solve.csv"))?, &[row])
                .map_err(csv_err)?;
            Ok(0)
        }
        Command::Converge(_) => write_table(
            &run_convergence(&config)?,
            &csv_path(&c.out, &config, "converge.csv"),
        ),
        Command::InterfaceConverge(_) => write_table(
            &run_interface_convergence(&config)?,
            &csv_path(&c.out, &config, "interface.csv"),
        ),
        Command::SweepTranslate(_) => {
            let rows = run_translation_sweep(&config)?;
            write_rows(create(&csv_path(&c.out, &config, "sweep.csv"))?, &rows).map_err(csv_err)?;
            for v in config.variants() {
                let part = rows_of(&rows, v);
                let kappa = fluctuation(&part, |r| r.kappa);
                let h1 = fluctuation(&part, |r| r.h1);
                println!(
                    "{:<14} kappa max/min {:?}  h1 max/min {:?}",
                    v.name(),
                    kappa,
                    h1
                );
            }
            Ok(rows.iter().filter(|r| !r.converged).count())
        }
        Command::ParamScale(_) => {
            let rows = run_parameter_scaling(&config)?;
            write_rows(create(&csv_path(&c.out, &config, "scaling.csv"))?, &rows)
                .map_err(csv_err)?;
            for r in &rows {
                println!(
                    "{:>8.0e} {:>10.3e} {:>10.3e} {:>8.2}",
                    r.scale, r.kappa_min, r.kappa_max, r.fluctuation
                );
            }
            Ok(rows.iter().map(|r| r.failed).sum())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let strict = cli.command.common().strict;
    match run(&cli.command) {
        Ok(failed) if failed > 0 && strict => {
            eprintln!("{failed} row(s) failed");
            ExitCode::FAILURE
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
