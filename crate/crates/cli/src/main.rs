//! `squarish`: batch front end for building lattice families, counting, and verifying
//! similarity decompositions and product formulas.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use report::{NRange, Report};

#[derive(Parser)]
#[command(
    name = "squarish",
    version,
    about = "Exact lattice-graph counts and similarity certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// Family selector, e.g. QUARTERED or AZTEC.
    family: String,
    /// Order; use --n for a range instead.
    n: Option<i64>,
    /// Inclusive range `a..b`.
    #[arg(long = "n", value_name = "RANGE")]
    range: Option<NRange>,
    /// Dimension for GRID_D.
    #[arg(long)]
    d: Option<usize>,
    /// Edge weight for PATH_Q, e.g. 2 or 1/2.
    #[arg(long)]
    q: Option<BigRational>,
    /// Write the report (or the graph, for `build`) to a file as well.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print a family member in the exchange format.
    Build(FamilyArgs),
    /// Exact characteristic polynomial of the adjacency matrix.
    Charpoly(FamilyArgs),
    /// Spanning-tree count by the Matrix-Tree theorem.
    Trees {
        #[command(flatten)]
        family: FamilyArgs,
        /// Cross-check against enumeration where the graph is small enough.
        #[arg(long)]
        oracle: bool,
    },
    /// Weighted perfect-matching count.
    Matchings {
        #[command(flatten)]
        family: FamilyArgs,
        /// Cross-check against brute force where the graph is small enough.
        #[arg(long)]
        oracle: bool,
    },
    /// Similarity certificates and formula checks.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Counts of matchings (or spanning trees) fixed by a symmetry group.
    Symmetry {
        #[command(flatten)]
        family: FamilyArgs,
        /// One of h, hv, r2, r, d, dd.
        #[arg(long)]
        group: String,
        /// Count spanning trees instead of matchings.
        #[arg(long)]
        trees: bool,
        /// Cross-check against brute-force filtering.
        #[arg(long)]
        oracle: bool,
    },
    /// Matching counts of the holed squares.
    Census {
        #[command(subcommand)]
        what: CensusCommand,
    },
    /// Cubical grids in dimensions three and four.
    Highdim {
        #[command(subcommand)]
        what: HighdimCommand,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Certify a decomposition theorem: grid, mixed, odd or pillow.
    Theorem {
        theorem: String,
        #[arg(long = "n", value_name = "RANGE")]
        range: NRange,
        /// explicit-basis, charpoly or smith; defaults per theorem.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a closed-form product against the exact count; `all` checks every formula.
    Formula {
        formula: String,
        #[arg(long = "n", value_name = "RANGE")]
        range: NRange,
        /// Starting precision in bits.
        #[arg(long, default_value_t = squarish::closed_forms::DEFAULT_PRECISION)]
        precision: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CensusCommand {
    /// Table of M(H_n) = 2^n * m^2 for n = 1..max-n.
    Holes {
        #[arg(long)]
        max_n: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum HighdimCommand {
    /// Compare computed charpolys with the tabulated factored forms.
    Verify {
        #[arg(long)]
        d: usize,
        #[arg(long = "n", value_name = "RANGE")]
        range: NRange,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => report.finish(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<Report> {
    use commands as c;
    match command {
        Command::Build(f) => c::build(&f.selector()?),
        Command::Charpoly(f) => c::charpoly(&f.selector()?),
        Command::Trees { family, oracle } => c::trees(&family.selector()?, oracle),
        Command::Matchings { family, oracle } => c::matchings(&family.selector()?, oracle),
        Command::Symmetry {
            family,
            group,
            trees,
            oracle,
        } => c::symmetry(&family.selector()?, &group, trees, oracle),
        Command::Verify { what } => match what {
            VerifyCommand::Theorem {
                theorem,
                range,
                mode,
                out,
            } => c::verify_theorem(&theorem, range, mode.as_deref(), out),
            VerifyCommand::Formula {
                formula,
                range,
                precision,
                out,
            } => c::verify_formula(&formula, range, precision, out),
        },
        Command::Census {
            what: CensusCommand::Holes { max_n, out },
        } => c::census_holes(max_n, out),
        Command::Highdim {
            what: HighdimCommand::Verify { d, range, out },
        } => c::highdim_verify(d, range, out),
    }
}

impl FamilyArgs {
    fn selector(&self) -> anyhow::Result<commands::Selector> {
        let range = match (self.n, self.range) {
            (Some(n), None) => commands::Orders::Single(n),
            (None, Some(r)) => commands::Orders::Range(r),
            (Some(_), Some(_)) => anyhow::bail!("give either an order or --n, not both"),
            (None, None) => anyhow::bail!("missing order: give n or --n a..b"),
        };
        Ok(commands::Selector {
            name: self.family.parse()?,
            orders: range,
            d: self.d,
            q: self.q.clone(),
            out: self.out.clone(),
        })
    }
}
