mod commands;
mod config;
mod output;
mod pipeline;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use config::{sorted_unique, GlideScenario, RunConfig};
use output::{Emitter, Format};
use std::path::PathBuf;
use std::process::ExitCode;

/// Soft morphing-wing glider analysis: inflate the wing section, build
/// polars, and evaluate vehicle efficiency, moments and glide range.
#[derive(Debug, Parser)]
#[command(name = "morphglide", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration; built-in defaults otherwise.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Inflation(s) in mL, replacing the sweep grid. Repeat or comma-separate.
    #[arg(long, global = true, value_name = "ML", value_delimiter = ',', allow_negative_numbers = true)]
    inflation: Vec<f64>,
    /// Incidence(s) in degrees, replacing the sweep grid.
    #[arg(long, global = true, value_name = "DEG", value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Vec<f64>,
    /// Speed(s) in m/s, replacing the sweep grid; the first also sets the glide speed.
    #[arg(long, global = true, value_name = "MPS", value_delimiter = ',')]
    speed: Vec<f64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, value_name = "N")]
    max_workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Morphed profiles, camber lines and a convergence report.
    Deform,
    /// Quadratic pressure-volume fit against the measured table.
    FitPressure,
    /// Sectional polars for every speed and inflation.
    Polar,
    /// Vehicle efficiency, pitch and roll tables.
    Vehicle,
    /// Sawtooth glide paths and the rigid-versus-morphing report.
    Glide {
        /// Scenario TOML replacing the config's `[glide]` table.
        #[arg(long, value_name = "PATH")]
        scenario: Option<PathBuf>,
    },
    /// Best efficiency of every inflation against the rigid wing.
    Compare,
    /// The full pipeline over the configured grid.
    Sweep,
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    if !cli.inflation.is_empty() {
        cfg.sweep.inflations_ml = sorted_unique(cli.inflation.clone());
    }
    if !cli.alpha.is_empty() {
        cfg.sweep.alphas_deg = sorted_unique(cli.alpha.clone());
    }
    if !cli.speed.is_empty() {
        cfg.glide.speed_mps = cli.speed[0];
        cfg.sweep.speeds_mps = sorted_unique(cli.speed.clone());
    }
    if let Some(n) = cli.max_workers {
        cfg.max_workers = n;
    }
    if let Command::Glide { scenario: Some(p) } = &cli.command {
        cfg.glide = GlideScenario::load(p)?;
    }
    cfg.validate().context("invalid configuration")?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = load(cli)?;
    if cfg.max_workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.max_workers)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let mut em = Emitter::new(&cfg.output_dir, cli.format, cfg.hash())?;
    let grid = cfg.sweep.inflations_ml.clone();
    match &cli.command {
        Command::FitPressure => commands::fit_pressure(&cfg, &mut em)?,
        Command::Deform => {
            let sections = pipeline::solve_sections(&cfg, &grid)?;
            commands::deform(&cfg, &mut em, &sections, &grid)?;
        }
        Command::Polar => {
            let sections = pipeline::solve_sections(&cfg, &grid)?;
            for &u in &cfg.sweep.speeds_mps {
                commands::write_polars(&mut em, &pipeline::polars(&cfg, &sections, &grid, u)?)?;
            }
        }
        Command::Vehicle => {
            let needed = commands::vehicle_inflations(&cfg);
            let sections = pipeline::solve_sections(&cfg, &needed)?;
            for &u in &cfg.sweep.speeds_mps {
                let polars = pipeline::polars(&cfg, &sections, &needed, u)?;
                commands::vehicle(&cfg, &mut em, &polars, u)?;
            }
        }
        Command::Compare => {
            let needed = sorted_unique([grid.clone(), vec![cfg.glide.rigid_inflation_ml]].concat());
            let sections = pipeline::solve_sections(&cfg, &needed)?;
            for &u in &cfg.sweep.speeds_mps {
                let polars = pipeline::polars(&cfg, &sections, &needed, u)?;
                commands::compare(&cfg, &mut em, &polars, u)?;
            }
        }
        Command::Glide { .. } => {
            let needed = cfg.glide.inflations();
            let sections = pipeline::solve_sections(&cfg, &needed)?;
            let polars = pipeline::polars(&cfg, &sections, &needed, cfg.glide.speed_mps)?;
            commands::glide(&cfg, &cfg.glide, &mut em, &polars)?;
        }
        Command::Sweep => {
            let mut needed = commands::vehicle_inflations(&cfg);
            needed.extend(cfg.glide.inflations());
            let needed = sorted_unique(needed);
            let sections = pipeline::solve_sections(&cfg, &needed)?;
            commands::fit_pressure(&cfg, &mut em)?;
            commands::deform(&cfg, &mut em, &sections, &grid)?;
            let mut speeds = cfg.sweep.speeds_mps.clone();
            speeds.push(cfg.glide.speed_mps);
            for u in sorted_unique(speeds) {
                let polars = pipeline::polars(&cfg, &sections, &needed, u)?;
                if cfg.sweep.speeds_mps.contains(&u) {
                    let on_grid: Vec<_> = polars.iter().filter(|p| grid.contains(&p.inflation_ml)).cloned().collect();
                    commands::write_polars(&mut em, &on_grid)?;
                    commands::vehicle(&cfg, &mut em, &polars, u)?;
                    commands::compare(&cfg, &mut em, &polars, u)?;
                }
                if u == cfg.glide.speed_mps {
                    commands::glide(&cfg, &cfg.glide, &mut em, &polars)?;
                }
            }
        }
    }
    log::info!("{} files written to {}", em.written.len(), em.dir.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
