//! Command-line driver for the water-risk analysis pipeline.

use aquarisk_cli::{dataset, pipeline, report, synth};

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use aquarisk_core::ensemble::{Scenario, Statistic};
use aquarisk_core::risk::AggregationMode;
use aquarisk_core::watersupply::ClimatologyWindow;

use dataset::{load, validate, DataPaths, Scope};
use pipeline::{
    compute_projections, compute_risk, compute_trends, compute_waaci, run_pipeline, DemandMode,
    PipelineConfig,
};

#[derive(Parser)]
#[command(
    name = "aquarisk",
    about = "County-level water-scarcity and stream-temperature risk reports for thermoelectric power production",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct DataArgs {
    /// County table CSV (fips,state,lat,lon,area_km2,pop2000,pop2010).
    #[arg(long)]
    counties: Option<PathBuf>,
    /// Gauge record CSV (gauge_id,lat,lon,fips,state,year,month,temp_c).
    #[arg(long)]
    gauges: Option<PathBuf>,
    /// Plant inventory CSV.
    #[arg(long)]
    plants: Option<PathBuf>,
    /// Long-format gridded climate CSV; repeat per file.
    #[arg(long = "grid")]
    grids: Vec<PathBuf>,
    /// Stream-temperature threshold table CSV (state,threshold_c); the
    /// built-in regulatory table applies when omitted.
    #[arg(long)]
    thresholds: Option<PathBuf>,
    /// Optional national reference CSV (year,population).
    #[arg(long)]
    national: Option<PathBuf>,
}

impl DataArgs {
    fn paths(&self) -> DataPaths {
        DataPaths {
            counties: self.counties.clone(),
            gauges: self.gauges.clone(),
            plants: self.plants.clone(),
            grids: self.grids.clone(),
            thresholds: self.thresholds.clone(),
            national: self.national.clone(),
        }
    }
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Emission scenario of the ensemble to analyze.
    #[arg(long, default_value = "rcp85")]
    scenario: String,
    /// Cross-member statistic: median, min2, or p80.
    #[arg(long, default_value = "median")]
    statistic: String,
    /// Comma-separated climatology windows.
    #[arg(long, default_value = "2010s,2020s,2030s,2040s")]
    windows: String,
    /// Municipal per-capita water use, m3/capita/year.
    #[arg(long, default_value_t = 1700.0)]
    per_capita: f64,
    /// Two-sided significance level for the trend test.
    #[arg(long, default_value_t = 0.10)]
    alpha: f64,
    /// Plant-to-gauge link radius, km.
    #[arg(long, default_value_t = 100.0)]
    gauge_radius_km: f64,
    /// At-risk aggregation: disjunctive (scarce OR hot) or conjunctive.
    #[arg(long, default_value = "disjunctive")]
    aggregation: String,
    /// Capacity factor for plants without generation data.
    #[arg(long, default_value_t = 0.6)]
    capacity_factor: f64,
    /// Demand term: absolute projected population or delta since 2010.
    #[arg(long, default_value = "absolute")]
    demand_mode: String,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

impl RunArgs {
    fn config(&self) -> Result<PipelineConfig> {
        let mut windows = Vec::new();
        for w in self.windows.split(',') {
            let w = w.trim();
            if w.is_empty() {
                continue;
            }
            windows.push(w.parse::<ClimatologyWindow>()?);
        }
        if windows.is_empty() {
            return Err(anyhow!("no climatology windows selected"));
        }
        if !(0.0 < self.alpha && self.alpha < 1.0) {
            return Err(anyhow!("alpha must be in (0, 1)"));
        }
        Ok(PipelineConfig {
            scenario: self.scenario.parse::<Scenario>()?,
            statistic: self.statistic.parse::<Statistic>()?,
            windows,
            per_capita_m3_yr: self.per_capita,
            alpha: self.alpha,
            gauge_radius_km: self.gauge_radius_km,
            aggregation: self.aggregation.parse::<AggregationMode>()?,
            capacity_factor_default: self.capacity_factor,
            demand_mode: self.demand_mode.parse::<DemandMode>()?,
        })
    }

    fn install_pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .context("building the worker pool")
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check dataset schemas, ranges, and cross-references.
    Validate {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "rcp85")]
        scenario: String,
    },
    /// Generate the synthetic mini-dataset and its ground-truth sidecar.
    Synth {
        /// Output directory for the dataset files.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Ensemble members to emit (1..=6).
        #[arg(long, default_value_t = 6)]
        members: usize,
        /// Gauge record length in years, ending 2012 (8..=15).
        #[arg(long, default_value_t = 15)]
        gauge_years: u32,
        /// Fraction of gauge months knocked out as gaps.
        #[arg(long, default_value_t = 0.06)]
        gap_fraction: f64,
        /// Emit one model's water fluxes on a finer grid.
        #[arg(long, default_value_t = true)]
        fine_grid: bool,
    },
    /// Run the full pipeline and write every artifact.
    Run {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// County WAACI tables only.
    Waaci {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Gauge trend tests only.
    Trend {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Stream-temperature projections only.
    Project {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Risk reports (WAACI + projections + plants) without stage tables.
    Risk {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        run: RunArgs,
    },
}

/// Exit(1) for data validation failures, Exit(2) for runtime failures.
enum CliFailure {
    Validation(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for CliFailure {
    fn from(e: anyhow::Error) -> Self {
        Self::Runtime(e)
    }
}

fn load_and_check(
    data: &DataArgs,
    config: &PipelineConfig,
    scope: Scope,
) -> std::result::Result<dataset::Dataset, CliFailure> {
    let loaded = load(&data.paths()).map_err(CliFailure::Validation)?;
    let report = validate(&loaded, config.scenario, scope);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if !report.ok() {
        for e in &report.errors {
            eprintln!("error: {e}");
        }
        return Err(CliFailure::Validation(format!(
            "{} validation error(s)",
            report.errors.len()
        )));
    }
    Ok(loaded)
}

fn dispatch(cli: Cli) -> std::result::Result<(), CliFailure> {
    match cli.command {
        Command::Validate { data, scenario } => {
            let scenario: Scenario = scenario
                .parse()
                .map_err(|e: aquarisk_core::Error| CliFailure::Validation(e.to_string()))?;
            let loaded = load(&data.paths()).map_err(CliFailure::Validation)?;
            let report = validate(&loaded, scenario, Scope::Loaded);
            print!("{report}");
            if report.ok() {
                Ok(())
            } else {
                Err(CliFailure::Validation("validation failed".into()))
            }
        }
        Command::Synth {
            out,
            seed,
            members,
            gauge_years,
            gap_fraction,
            fine_grid,
        } => {
            synth::generate(
                &out,
                &synth::SynthConfig {
                    seed,
                    members,
                    gauge_years,
                    gap_fraction,
                    fine_grid,
                },
            )?;
            println!("synthetic dataset written to {}", out.display());
            Ok(())
        }
        Command::Run { data, run } => {
            let config = run.config()?;
            let loaded = load_and_check(&data, &config, Scope::Full)?;
            let pool = run.install_pool()?;
            let output = pool
                .install(|| run_pipeline(&loaded, &config))
                .map_err(|e| CliFailure::Runtime(e.into()))?;
            report::write_all(&run.out, &output, &config, &loaded.counties)?;
            println!("artifacts written to {}", run.out.display());
            Ok(())
        }
        Command::Waaci { data, run } => {
            let config = run.config()?;
            let loaded = load_and_check(&data, &config, Scope::Waaci)?;
            let pool = run.install_pool()?;
            let waaci = pool
                .install(|| compute_waaci(&loaded, &config))
                .map_err(|e| CliFailure::Runtime(e.into()))?;
            std::fs::create_dir_all(&run.out).map_err(|e| CliFailure::Runtime(e.into()))?;
            let output = pipeline::PipelineOutput {
                waaci,
                trends: pipeline::TrendStage {
                    rows: vec![],
                    skipped_short_record: 0,
                },
                projections: pipeline::ProjectionStage {
                    projections: vec![],
                    skipped: vec![],
                    unknown_states: 0,
                },
                risk: pipeline::RiskStage {
                    reports: vec![],
                    links: vec![],
                    trend: vec![],
                },
                national_checks: vec![],
            };
            report::write_waaci_csv(&run.out, &output)?;
            report::write_waaci_change_csv(&run.out, &output, &config.scenario.to_string())?;
            println!("WAACI tables written to {}", run.out.display());
            Ok(())
        }
        Command::Trend { data, run } => {
            let config = run.config()?;
            let loaded = load_and_check(&data, &config, Scope::Trend)?;
            let pool = run.install_pool()?;
            let trends = pool
                .install(|| compute_trends(&loaded, &config))
                .map_err(|e| CliFailure::Runtime(e.into()))?;
            std::fs::create_dir_all(&run.out).map_err(|e| CliFailure::Runtime(e.into()))?;
            let mut output = empty_output();
            output.trends = trends;
            report::write_trend_csv(&run.out, &output)?;
            println!("trend table written to {}", run.out.display());
            Ok(())
        }
        Command::Project { data, run } => {
            let config = run.config()?;
            let loaded = load_and_check(&data, &config, Scope::Project)?;
            let pool = run.install_pool()?;
            let projections = pool
                .install(|| compute_projections(&loaded, &config))
                .map_err(|e| CliFailure::Runtime(e.into()))?;
            std::fs::create_dir_all(&run.out).map_err(|e| CliFailure::Runtime(e.into()))?;
            let mut output = empty_output();
            output.projections = projections;
            report::write_projection_csv(&run.out, &output)?;
            println!("projection table written to {}", run.out.display());
            Ok(())
        }
        Command::Risk { data, run } => {
            let config = run.config()?;
            let loaded = load_and_check(&data, &config, Scope::Full)?;
            let pool = run.install_pool()?;
            let output = pool
                .install(|| -> aquarisk_core::Result<pipeline::PipelineOutput> {
                    let waaci = compute_waaci(&loaded, &config)?;
                    let projections = compute_projections(&loaded, &config)?;
                    let risk = compute_risk(&loaded, &config, &waaci, &projections)?;
                    let mut output = empty_output();
                    output.waaci = waaci;
                    output.projections = projections;
                    output.risk = risk;
                    Ok(output)
                })
                .map_err(|e| CliFailure::Runtime(e.into()))?;
            std::fs::create_dir_all(&run.out).map_err(|e| CliFailure::Runtime(e.into()))?;
            for r in &output.risk.reports {
                report::write_risk_csv(&run.out, r)?;
                report::write_risk_geojson(&run.out, r, &loaded.counties)?;
            }
            report::write_plant_links_csv(&run.out, &output)?;
            report::write_risk_trend_csv(&run.out, &output.risk.trend)?;
            report::write_risk_trend_svg(&run.out, &output.risk.trend)?;
            report::write_summary(&run.out, &output, &config)?;
            println!("risk reports written to {}", run.out.display());
            Ok(())
        }
    }
}

fn empty_output() -> pipeline::PipelineOutput {
    pipeline::PipelineOutput {
        waaci: pipeline::WaaciStage {
            records: vec![],
            by_window: Default::default(),
            changes: vec![],
            yearly: Default::default(),
            members: vec![],
            counties_outside_grid: 0,
        },
        trends: pipeline::TrendStage {
            rows: vec![],
            skipped_short_record: 0,
        },
        projections: pipeline::ProjectionStage {
            projections: vec![],
            skipped: vec![],
            unknown_states: 0,
        },
        risk: pipeline::RiskStage {
            reports: vec![],
            links: vec![],
            trend: vec![],
        },
        national_checks: vec![],
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliFailure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliFailure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
