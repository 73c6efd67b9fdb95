use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "dop", version, about = "Discrete orthogonal polynomials from a Pearson weight on the non-negative integers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Recurrence coefficients and norms
    Compute(ComputeArgs),
    /// Run identity suites and report residuals
    Verify(VerifyArgs),
    /// Emit a coefficient, moment or Ψ table
    Table(TableArgs),
    /// Pointwise diagnostics of the weight
    Weight(WeightCmd),
}

#[derive(Args, Debug, Clone)]
pub struct WeightArgs {
    /// numerator parameters a_i, comma separated ("" for none)
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub a: String,
    /// denominator parameters b_j, comma separated ("" for none)
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: String,
    /// working precision in bits
    #[arg(long, env = "DOP_PREC", default_value_t = 256)]
    pub prec: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub weight: WeightArgs,
    #[arg(long, default_value_t = 10)]
    pub nmax: usize,
    /// also print monic coefficients of P_0, …, P_nmax
    #[arg(long)]
    pub coeffs: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub weight: WeightArgs,
    /// trusted window size
    #[arg(long = "K", default_value_t = 16)]
    pub window: usize,
    #[arg(long, default_value_t = 10)]
    pub nmax: usize,
    /// comma separated suites; all when omitted
    #[arg(long)]
    pub identities: Option<String>,
    /// record wall time per suite
    #[arg(long)]
    pub timings: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    Jacobi,
    Coeffs,
    Moments,
    Psi,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[command(flatten)]
    pub weight: WeightArgs,
    #[arg(value_enum)]
    pub kind: TableKind,
    #[arg(long, default_value_t = 10)]
    pub nmax: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct WeightCmd {
    #[command(flatten)]
    pub weight: WeightArgs,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub action: WeightAction,
}

#[derive(Subcommand, Debug)]
pub enum WeightAction {
    /// w(k) at the given lattice points
    Eval {
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u64>,
    },
    /// Pearson residual θ(k+1)w(k+1) - σ(k)w(k) relative to σ(k)w(k)
    Pearson {
        #[arg(long, default_value_t = 200)]
        kmax: u64,
    },
    /// Coefficients and roots of θ and σ
    ThetaSigma,
}
