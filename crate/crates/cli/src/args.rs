use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cvpoly",
    version,
    about = "Polynomial cubic-phase gates from measurement-based circuits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fidelity of the bare Taylor polynomial with the unitary.
    Bare(Common),
    /// Photon-subtracted protocol with exact homodyne outcomes.
    Method1(Common),
    /// Photon-subtracted protocol post-selected on a window of outcomes.
    #[command(name = "method1-postselect")]
    Method1Postselect(Common),
    /// Ancilla displacements maximizing the success probability for a known input.
    #[command(name = "method1-optimize")]
    Method1Optimize(OptimizeArgs),
    /// Single-photon-counter protocol.
    Method2(Common),
    /// Wigner functions of the state-preparation outputs.
    Wigner(Common),
    /// Check the fast routines against the two-mode simulation.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Gate strengths, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub nu: Option<Vec<f64>>,
    /// Ancilla squeezing levels in dB, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub db: Option<Vec<f64>>,
    /// Post-selection half-widths, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub delta: Option<Vec<f64>>,
    /// Position grid as "qmin,qmax,n" with n a power of two.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Gauss-Legendre nodes per outcome dimension.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output directory [default: $CVPOLY_OUT or ./cvpoly-out].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config file; a run manifest also works.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// How dB map to the ancilla width in the single-photon protocol.
    #[arg(long, value_enum)]
    pub db_convention: Option<DbConvention>,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Ancilla displacement scan as "start,stop,steps".
    #[arg(long, allow_hyphen_values = true)]
    pub scan: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Replace every check threshold by this value.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Also compare against a grid with twice the points.
    #[arg(long)]
    pub grid_refine: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DbConvention {
    /// Squeezing narrows the ancilla in position.
    SqueezedQ,
    /// Squeezing narrows the ancilla in momentum.
    AntiSqueezedQ,
}

impl DbConvention {
    pub fn to_core(self) -> cvpoly::states::SqueezeConvention {
        match self {
            DbConvention::SqueezedQ => cvpoly::states::SqueezeConvention::SqueezedQ,
            DbConvention::AntiSqueezedQ => cvpoly::states::SqueezeConvention::AntiSqueezedQ,
        }
    }
}
