use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "gaussric",
    version,
    about = "Verify Gauss-map pullback identities and Grassmannian distance inequalities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite on catalog entries and write reports.
    Verify(VerifyArgs),
    /// Print d_c, d_s, the embedded sphere distance and the principal cosines of two planes.
    Distance(DistanceArgs),
    /// Track the largest frame-Ricci eigenvalue over growing chart boxes.
    ScanRic(ScanArgs),
    /// Random plane pairs against the distance inequality and Plücker identities.
    Fuzz(FuzzArgs),
    /// List catalog entries.
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Euclid,
    Sphere,
    Grassmann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Directory for report files.
    #[arg(long, default_value = "reports")]
    pub out: PathBuf,

    #[arg(long, value_enum, default_value_t = Format::Both)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Catalog entries (euclid/sphere) or plane dimensions MxK (grassmann).
    pub entries: Vec<String>,

    #[arg(long, value_enum)]
    pub suite: Suite,

    /// Grid resolution per axis, e.g. 41x41 (or 41 for curves).
    #[arg(long)]
    pub grid: Option<String>,

    /// Sampling box lo0,hi0[,lo1,hi1,...].
    #[arg(long = "box", allow_hyphen_values = true)]
    pub bbox: Option<String>,

    /// Residual bound for the pullback identities.
    #[arg(long)]
    pub tol_id: Option<f64>,

    /// Bound for ‖trB‖ (euclid) or ‖tr B_MN‖ (sphere).
    #[arg(long)]
    pub tol_min: Option<f64>,

    /// Seed for the grassmann suite.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,

    /// Plane pairs per dimension pair for the grassmann suite.
    #[arg(long, default_value_t = 10_000)]
    pub count: u64,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    /// First plane: JSON list of basis vectors, or a path to a file holding one.
    pub p: Option<String>,

    /// Second plane, same format.
    pub q: Option<String>,

    /// JSON file {"p": [[...], ...], "q": [[...], ...]} instead of P and Q.
    #[arg(long, conflicts_with_all = ["p", "q"])]
    pub file: Option<PathBuf>,

    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    pub entry: String,

    /// Half-widths V of the expanding boxes.
    #[arg(long = "v", value_delimiter = ',', default_values_t = vec![1.0, 2.0, 3.0, 5.0])]
    pub half_widths: Vec<f64>,

    #[arg(long)]
    pub grid: Option<String>,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 100_000)]
    pub count: u64,

    /// Dimension pairs MxK, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = vec!["1x3".to_string(), "2x4".to_string(), "2x5".to_string(), "3x6".to_string()])]
    pub dims: Vec<String>,

    #[arg(long, default_value_t = 7)]
    pub seed: u64,

    #[command(flatten)]
    pub output: OutputArgs,
}
