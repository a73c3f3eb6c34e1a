use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dependence::Measure;
use crate::zenplot::DEFAULT_WIDTH;

#[derive(Debug, Parser)]
#[command(name = "zenscope", version, about = "Pairwise dependence analysis with zenpaths and zenplots")]
pub struct Cli {
    /// Seed for every stochastic stage.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; 0 uses all available cores. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Directory receiving all artifacts.
    #[arg(long, global = true, default_value = "zenscope-out")]
    pub out_dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Clean prices and compute negative log-returns.
    Ingest(IngestArgs),
    /// Generate a synthetic price panel with sector labels.
    Synth(SynthArgs),
    /// Fit ARMA(1,1)-GARCH(1,1) margins; write residuals and pseudo-observations.
    Degarch(DegarchArgs),
    /// Ljung-Box and Anderson-Darling orderings with ACF and Q-Q zenplots.
    Diagnose(DiagnoseArgs),
    /// Pairwise dependence matrix.
    Depmat(DepmatArgs),
    /// Joint t copula with tau-inverted correlation.
    FitJoint(FitJointArgs),
    /// Compare pairwise and joint t copulas pair by pair.
    Gof(GofArgs),
    /// Order pairs into a zenpath.
    Zenpath(ZenpathArgs),
    /// Render a zenplot to SVG.
    Zenplot(ZenplotArgs),
    /// Run every stage end to end.
    Pipeline(PipelineArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ingest(_) => "ingest",
            Command::Synth(_) => "synth",
            Command::Degarch(_) => "degarch",
            Command::Diagnose(_) => "diagnose",
            Command::Depmat(_) => "depmat",
            Command::FitJoint(_) => "fit-joint",
            Command::Gof(_) => "gof",
            Command::Zenpath(_) => "zenpath",
            Command::Zenplot(_) => "zenplot",
            Command::Pipeline(_) => "pipeline",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IngestArgs {
    /// Price CSV: `date,<ticker>,...`; empty or NA cells are missing.
    #[arg(long)]
    pub prices: PathBuf,
    /// Sector CSV: `ticker,sector,subsector`.
    #[arg(long)]
    pub sectors: Option<PathBuf>,
    /// Largest tolerated fraction of missing prices per column.
    #[arg(long, default_value_t = 0.2)]
    pub max_missing: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 10)]
    pub d: usize,
    /// Number of returns (prices get one more row).
    #[arg(long, default_value_t = 1000)]
    pub t: usize,
    #[arg(long, default_value_t = 3)]
    pub sectors: usize,
    #[arg(long, default_value_t = 4.0)]
    pub copula_nu: f64,
    #[arg(long, default_value_t = 0.6)]
    pub rho_within: f64,
    #[arg(long, default_value_t = 0.25)]
    pub rho_cross: f64,
    /// Column given lag-5 serial dependence that the margins cannot absorb.
    #[arg(long)]
    pub contaminate: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub missing_rate: f64,
    /// Trailing columns missing their first 30% of prices.
    #[arg(long, default_value_t = 0)]
    pub late_starts: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DegarchArgs {
    /// Return CSV as written by `ingest`.
    #[arg(long)]
    pub returns: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DiagnoseArgs {
    #[arg(long)]
    pub residuals: PathBuf,
    /// Fit JSON from `degarch` (supplies the innovation degrees of freedom).
    #[arg(long)]
    pub fits: PathBuf,
    /// Raw returns, additionally scored for serial dependence.
    #[arg(long)]
    pub returns: Option<PathBuf>,
    /// Ljung-Box lags `1..=max_lag` are scanned.
    #[arg(long, default_value_t = 10)]
    pub max_lag: usize,
    /// Lags drawn in each ACF panel.
    #[arg(long, default_value_t = 30)]
    pub acf_lags: usize,
    /// Simulations per Q-Q envelope.
    #[arg(long, default_value_t = 1000)]
    pub nsim: usize,
    #[arg(long, default_value_t = DEFAULT_WIDTH)]
    pub width: usize,
    #[arg(long)]
    pub style: Option<PathBuf>,
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse::<Measure>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DepmatArgs {
    /// Pseudo-observation CSV.
    #[arg(long)]
    pub pobs: PathBuf,
    /// tau, rho, lambda-t or lambda-emp.
    #[arg(long, value_parser = parse_measure, default_value = "tau")]
    pub measure: Measure,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitJointArgs {
    #[arg(long)]
    pub pobs: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conditioning {
    LowerFirst,
    HigherFirst,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GofArgs {
    #[arg(long)]
    pub pobs: PathBuf,
    /// Pairwise fits written by `depmat --measure lambda-t`.
    #[arg(long)]
    pub pairfits: PathBuf,
    /// Joint fit written by `fit-joint`.
    #[arg(long)]
    pub joint: PathBuf,
    #[arg(long, default_value_t = crate::gof::DEFAULT_THRESHOLD)]
    pub threshold: f64,
    #[arg(long, value_enum, default_value_t = Conditioning::LowerFirst)]
    pub conditioning: Conditioning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathOrder {
    Desc,
    Asc,
    Extremes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectorMode {
    Any,
    Within,
    Cross,
    PerSector,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZenpathArgs {
    /// Dependence matrix JSON from `depmat` or `fit-joint`.
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = PathOrder::Extremes)]
    pub order: PathOrder,
    /// Pairs kept from the top (desc, extremes) or bottom (asc).
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Pairs kept from the bottom (extremes only).
    #[arg(long, default_value_t = 10)]
    pub bottom: usize,
    #[arg(long, value_enum, default_value_t = SectorMode::Any)]
    pub sector_mode: SectorMode,
    #[arg(long)]
    pub sectors: Option<PathBuf>,
    /// Drop pairs already shown adjacently in the current group.
    #[arg(long)]
    pub dedup: bool,
    /// Ignore ordering and visit every pair (Eulerian traversal).
    #[arg(long)]
    pub all_pairs: bool,
    /// Output file name.
    #[arg(long, default_value = "zenpath.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PanelArg {
    Scatter,
    Acf,
    Qq,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZenplotArgs {
    #[arg(long, value_enum, default_value_t = PanelArg::Scatter)]
    pub panel: PanelArg,
    /// Data table: pseudo-observations for scatter, residuals for acf/qq.
    #[arg(long)]
    pub input: PathBuf,
    /// Zenpath JSON (scatter); defaults to the chain over all columns.
    #[arg(long)]
    pub zenpath: Option<PathBuf>,
    /// Fit JSON (qq).
    #[arg(long)]
    pub fits: Option<PathBuf>,
    /// Score JSON whose ticker order sets the panel order (acf/qq).
    #[arg(long)]
    pub order_by: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_WIDTH)]
    pub width: usize,
    /// Explicit moves, letters u d l r.
    #[arg(long)]
    pub dirs: Option<String>,
    /// `--dirs` alternates 1D and 2D panels (each 2D step spelled twice).
    #[arg(long)]
    pub interleaved: bool,
    #[arg(long, default_value_t = 30)]
    pub acf_lags: usize,
    #[arg(long, default_value_t = 1000)]
    pub nsim: usize,
    #[arg(long)]
    pub style: Option<PathBuf>,
    #[arg(long, default_value = "zenplot.svg")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PipelineArgs {
    /// Price CSV; the bundled 10-column synthetic panel when omitted.
    #[arg(long)]
    pub prices: Option<PathBuf>,
    #[arg(long)]
    pub sectors: Option<PathBuf>,
    #[arg(long, default_value_t = 0.2)]
    pub max_missing: f64,
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    #[arg(long, default_value_t = 10)]
    pub bottom: usize,
    #[arg(long, default_value_t = DEFAULT_WIDTH)]
    pub width: usize,
    #[arg(long, default_value_t = 10)]
    pub max_lag: usize,
    #[arg(long, default_value_t = 1000)]
    pub nsim: usize,
    #[arg(long)]
    pub style: Option<PathBuf>,
}
