use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{error, info};

use ritzlab_core::experiments::{run_green, run_pointwise, run_stability, ExperimentConfig, ExperimentReport};
use ritzlab_core::mesh::{mesh_at_level, write_mesh, ConvexPolygon};
use ritzlab_core::RitzError;

#[derive(Parser)]
#[command(name = "ritzlab", version, about = "Ritz projection stability experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ratios |grad R_h u(z)| / M[grad u](z) at sampled points.
    Pointwise(RunArgs),
    /// Norms of grad R_h u against grad u in the configured spaces.
    Stability(RunArgs),
    /// Regularized Green's function diagnostics.
    Green(RunArgs),
    /// Every experiment in turn.
    All(RunArgs),
    /// Export a uniformly refined mesh.
    Mesh {
        #[arg(long, default_value = "square")]
        polygon: String,
        #[arg(long, default_value_t = 0)]
        levels: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Outcome {
    Clean,
    Violations,
}

fn run(args: &RunArgs, which: &str) -> Result<Outcome, RitzError> {
    let config = ExperimentConfig::load(&args.config)?;
    let out = args
        .out
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("results"));
    let runners: Vec<fn(&ExperimentConfig) -> ritzlab_core::Result<ExperimentReport>> = match which {
        "pointwise" => vec![run_pointwise],
        "stability" => vec![run_stability],
        "green" => vec![run_green],
        _ => vec![run_pointwise, run_stability, run_green],
    };
    let mut violations = 0;
    let mut errors = Vec::new();
    for runner in runners {
        let report = runner(&config)?;
        let path = report.write_csv(&out)?;
        info!("wrote {}", path.display());
        for p in report.violations() {
            eprintln!("violation [{}]: {} ({})", report.name, p.name, p.detail);
            violations += 1;
        }
        errors.extend(report.errors.iter().map(|e| format!("[{}] {e}", report.name)));
    }
    if let Some(first) = errors.into_iter().next() {
        return Err(RitzError::InvalidArgument(first));
    }
    Ok(if violations > 0 {
        Outcome::Violations
    } else {
        Outcome::Clean
    })
}

fn export_mesh(polygon: &str, levels: usize, out: &Path) -> Result<(), RitzError> {
    let mesh = mesh_at_level(&ConvexPolygon::by_name(polygon)?, levels)?;
    write_mesh(&mesh, BufWriter::new(File::create(out)?))?;
    info!("wrote {} triangles to {}", mesh.n_triangles(), out.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Pointwise(a) => run(a, "pointwise"),
        Command::Stability(a) => run(a, "stability"),
        Command::Green(a) => run(a, "green"),
        Command::All(a) => run(a, "all"),
        Command::Mesh { polygon, levels, out } => export_mesh(polygon, *levels, out).map(|_| Outcome::Clean),
    };
    match result {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Violations) => ExitCode::from(1),
        Err(e) => {
            error!("{e}");
            ExitCode::from(2)
        }
    }
}
