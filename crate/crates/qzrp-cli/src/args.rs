use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qzrp", version, about = "Tableau chains, the multispecies TAZRP and H~(X;1,t) at desk scale")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Directory for every file output, including manifest.json.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Largest exhaustive enumeration allowed.
    #[arg(long, global = true, env = "QZRP_BUDGET")]
    pub budget: Option<u128>,
}

#[derive(Args, Debug, Clone)]
pub struct ShapeArgs {
    /// Comma-separated parts (column heights), e.g. 3,1,1.
    #[arg(long)]
    pub shape: String,
    /// Number of sites.
    #[arg(long)]
    pub n: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List configurations or fillings.
    Enumerate {
        #[command(flatten)]
        sh: ShapeArgs,
        #[arg(long, value_enum, default_value_t = Kind::Configs)]
        kind: Kind,
    },
    /// H~_λ(x_1..x_n; 1, t).
    Macdonald {
        #[command(flatten)]
        sh: ShapeArgs,
        #[arg(long, value_enum, default_value_t = Form::Factorized)]
        form: Form,
    },
    /// Stationary weight of every configuration, with probabilities when a
    /// point is given.
    Weights {
        #[command(flatten)]
        sh: ShapeArgs,
        /// `x=2,3,5 t=1/3`; exact fractions only.
        #[arg(long, num_args = 1..)]
        at: Option<Vec<String>>,
    },
    /// Run identity suites exhaustively.
    Verify {
        /// Suite name, comma-separated list, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        sh: ShapeArgs,
        /// `x=2,3,5 t=1/3`; defaults to x = 2,3,5,7,... and t = 1/3.
        #[arg(long, num_args = 1..)]
        at: Option<Vec<String>>,
    },
    /// Gillespie simulation against the exact densities and currents.
    Simulate {
        #[command(flatten)]
        sh: ShapeArgs,
        /// Site parameters, comma-separated decimals or fractions.
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<String>,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Simulated time.
        #[arg(long, default_value_t = 1e4)]
        horizon: f64,
        #[arg(long, value_enum, default_value_t = Report::Density)]
        report: Report,
        /// Also write every jump to events.csv under --out.
        #[arg(long)]
        events: bool,
    },
    /// Evidence for the gcd and refined-extension conjectures.
    Conjecture {
        #[arg(value_enum)]
        which: Which,
        /// A single shape; omit when using --up-to.
        #[arg(long)]
        shape: Option<String>,
        #[arg(long)]
        n: usize,
        /// Sweep every admissible shape of size at most this, with up to n sites
        /// (at least 2 for the gcd check).
        #[arg(long)]
        up_to: Option<u32>,
        #[arg(long, default_value_t = 8)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Refined: check every filling of the compressed shape.
        #[arg(long)]
        all_sigma: bool,
        /// Refined: one filling of the compressed shape, rows top to bottom
        /// separated by `/`.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Multiline diagram of a filling, or of rows given directly.
    Multiline {
        #[arg(long)]
        n: usize,
        /// Rows top to bottom separated by `/`.
        #[arg(long, conflicts_with = "diagram")]
        filling: Option<String>,
        /// Rows top to bottom separated by `;`, sites by `|`.
        #[arg(long)]
        diagram: Option<String>,
        /// Try a jump: row,site,species.
        #[arg(long)]
        jump: Option<String>,
    },
    /// Symbolic densities and currents, evaluated when a point is given.
    Observables {
        #[command(flatten)]
        sh: ShapeArgs,
        #[arg(long, num_args = 1..)]
        at: Option<Vec<String>>,
    },
    /// Write generator, weights or stationary law under --out.
    Export {
        #[command(flatten)]
        sh: ShapeArgs,
        #[arg(long, value_enum)]
        what: Export,
        #[arg(long, num_args = 1..)]
        at: Option<Vec<String>>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Configs,
    Fillings,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Tableaux,
    Factorized,
    Monomial,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Report {
    Density,
    Current,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Compressed,
    Refined,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Export {
    Generator,
    Weights,
    Stationary,
}
