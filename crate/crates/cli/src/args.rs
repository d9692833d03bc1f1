use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logshift::two_sample::TwoSampleTest;

#[derive(Parser, Debug)]
#[command(
    name = "logshift",
    version,
    about = "Verify exponential-shift identities for logistic order statistics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify one identity selector, e.g. `lemma1i:k=2,m=4,n=5`.
    Verify(VerifyArgs),
    /// Verify every catalog identity up to a given n.
    VerifyAll(VerifyAllArgs),
    /// Tabulate an order-statistic characteristic function.
    CfTable(CfTableArgs),
    /// Characterization-based logistic goodness-of-fit test on a data file.
    Gof(GofArgs),
    /// List identity selectors.
    Catalog(CatalogArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TestKind {
    Ks,
    Cvm,
}

impl From<TestKind> for TwoSampleTest {
    fn from(t: TestKind) -> Self {
        match t {
            TestKind::Ks => TwoSampleTest::Ks,
            TestKind::Cvm => TwoSampleTest::Cvm,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Omit the timestamp so identical runs give byte-identical reports.
    #[arg(long)]
    pub canonical: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SeedArg {
    #[arg(long, env = "LOGSHIFT_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub t_min: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub t_max: f64,
    #[arg(long, default_value_t = 41)]
    pub t_points: usize,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Parent distribution, e.g. `logistic` or `normal,mu=0,sigma=1.8138`.
    #[arg(long, default_value = "logistic")]
    pub parent: String,
    #[arg(long, default_value_t = 1_000_000)]
    pub sample_size: usize,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[command(flatten)]
    pub seed: SeedArg,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value = "ks")]
    pub test: TestKind,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub identity: String,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct VerifyAllArgs {
    #[arg(long, default_value_t = 6)]
    pub max_n: u32,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CfMethod {
    /// Closed form (logistic or exponential parent).
    Exact,
    /// Adaptive quadrature of the density.
    Numerical,
}

#[derive(Args, Debug)]
pub struct CfTableArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value = "logistic")]
    pub parent: String,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: CfMethod,
    /// Absolute tolerance of the numerical method.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct GofArgs {
    /// One value per line, or a CSV file when `--column` is given.
    #[arg(long)]
    pub data: PathBuf,
    /// CSV column, by header name or zero-based index.
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub n: u32,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = 199)]
    pub null_replicates: usize,
    #[arg(long, default_value_t = 10)]
    pub rounds: usize,
    /// Subtract the sample median first (also applied inside the null simulation).
    #[arg(long)]
    pub center_median: bool,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[command(flatten)]
    pub seed: SeedArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    #[arg(long, default_value_t = 6)]
    pub max_n: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}
