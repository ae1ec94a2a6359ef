use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{PartialGrid, Spacing};
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "cdwtunnel",
    version,
    about = "Charge-density-wave tunneling curves, profiles, matrix elements and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Current-field curves for the soliton-pair law, the Zener law, or both.
    Curve(CurveArgs),
    /// Fit the soliton-pair law to CSV data or to a synthetic target.
    Fit(FitArgs),
    /// Kink-pair phase profile, its thin-wall transform and topological charge.
    Profile(ProfileArgs),
    /// Analytic and quadrature matrix elements over a pair-length or field grid.
    MatrixElement(MatrixArgs),
    /// Run the built-in numerical checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct GridFlags {
    /// Lower end of the grid.
    #[arg(long)]
    pub lo: Option<f64>,
    /// Upper end of the grid.
    #[arg(long)]
    pub hi: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
}

impl GridFlags {
    pub fn partial(&self) -> PartialGrid {
        PartialGrid {
            lo: self.lo,
            hi: self.hi,
            n: self.n,
            spacing: self.spacing,
        }
    }
}

#[derive(Debug, Args)]
pub struct TransportFlags {
    /// Threshold field.
    #[arg(long)]
    pub e_t: Option<f64>,
    #[arg(long)]
    pub c_v: Option<f64>,
    #[arg(long)]
    pub c_tilde1: Option<f64>,
    /// Zener prefactor.
    #[arg(long)]
    pub g_p: Option<f64>,
    #[arg(long)]
    pub delta_s: Option<f64>,
    #[arg(long)]
    pub e_star: Option<f64>,
    #[arg(long)]
    pub eps_g: Option<f64>,
    #[arg(long)]
    pub m_e: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub e_charge: Option<f64>,
}

impl TransportFlags {
    pub fn apply(&self, tp: &mut cdwtunnel::TransportParams) {
        let pairs = [
            (self.e_t, &mut tp.e_t),
            (self.c_v, &mut tp.c_v),
            (self.c_tilde1, &mut tp.c_tilde1),
            (self.g_p, &mut tp.g_p),
            (self.delta_s, &mut tp.delta_s),
            (self.e_star, &mut tp.e_star),
            (self.eps_g, &mut tp.eps_g),
            (self.m_e, &mut tp.m_e),
            (self.omega, &mut tp.omega),
            (self.e_charge, &mut tp.e_charge),
        ];
        for (flag, slot) in pairs {
            if let Some(v) = flag {
                *slot = v;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum ConventionArg {
    AsPrinted,
    BackSubstituted,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridFlags,
    #[command(flatten)]
    pub transport: TransportFlags,
    /// sge, zener or both.
    #[arg(long)]
    pub model: Option<String>,
    /// How the soliton-pair law is written.
    #[arg(long, value_enum)]
    pub convention: Option<ConventionArg>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridFlags,
    #[command(flatten)]
    pub transport: TransportFlags,
    /// CSV of (E, I) rows to fit; an optional header line is skipped.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Synthetic target when no data file is given: zener or sge.
    #[arg(long)]
    pub target: Option<String>,
    /// Free parameters, comma separated (c_tilde1, c_v).
    #[arg(long, value_delimiter = ',')]
    pub free: Option<Vec<String>>,
    #[arg(long)]
    pub start_c_tilde1: Option<f64>,
    #[arg(long)]
    pub start_c_v: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridFlags,
    /// Pair separation.
    #[arg(long)]
    pub l: Option<f64>,
    /// Wall steepness.
    #[arg(long)]
    pub b: Option<f64>,
    /// Midpoint of the pair.
    #[arg(long)]
    pub center: Option<f64>,
    #[arg(long)]
    pub k_lo: Option<f64>,
    #[arg(long)]
    pub k_hi: Option<f64>,
    #[arg(long)]
    pub k_n: Option<usize>,
    #[arg(long, value_enum)]
    pub k_spacing: Option<Spacing>,
    /// Where to write the k-space samples; defaults to `<output>.k.csv`.
    #[arg(long)]
    pub k_output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridFlags,
    #[command(flatten)]
    pub transport: TransportFlags,
    /// Grid axis: l (pair separation) or e (applied field).
    #[arg(long)]
    pub axis: Option<String>,
    /// Distance between the wavefunctional centres on the l axis.
    #[arg(long)]
    pub separation: Option<f64>,
    #[arg(long)]
    pub n1: Option<f64>,
    #[arg(long)]
    pub m_star: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Run only these checks (repeatable or comma separated).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// Override a threshold, as name=value (repeatable).
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
}
