//! `mascheroni`: evaluate `g_n(x)`, tabulate grids, verify identities and run audits.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
//! 3 numerical non-convergence.

mod commands;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mascheroni::{Accuracy, ConstantVariant, IdentityId};

use crate::format::OutputFormat;

#[derive(Debug, Parser)]
#[command(
    name = "mascheroni",
    version,
    about = "Regularized Euler-Mascheroni functionals g_n(x)"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain, global = true)]
    format: OutputFormat,

    /// Write output to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Relative tolerance of the quadrature engine
    #[arg(long, global = true)]
    quad_tol: Option<f64>,

    /// Absolute truncation tolerance for series
    #[arg(long, global = true)]
    series_tol: Option<f64>,

    /// Maximum number of series terms
    #[arg(long, global = true)]
    max_terms: Option<usize>,
}

impl GlobalOpts {
    fn accuracy(&self) -> Accuracy {
        let mut acc = Accuracy::default();
        if let Some(t) = self.quad_tol {
            acc.quad_rel_tol = t;
        }
        if let Some(t) = self.series_tol {
            acc.series_abs_tol = t;
        }
        if let Some(m) = self.max_terms {
            acc.max_series_terms = m;
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Integral,
    Ladder,
    DerivativeCot,
    DerivativeSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    AsPrinted,
    Corrected,
}

impl From<Variant> for ConstantVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::AsPrinted => ConstantVariant::AsPrinted,
            Variant::Corrected => ConstantVariant::Corrected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Identity {
    DerivativeFdVsCot,
    LadderVsDiff,
    PathEquivalence,
    SeriesConstant,
    Genfunc,
    BernoulliZeta,
}

impl From<Identity> for IdentityId {
    fn from(i: Identity) -> Self {
        match i {
            Identity::DerivativeFdVsCot => IdentityId::DerivativeFdVsCot,
            Identity::LadderVsDiff => IdentityId::LadderVsDiff,
            Identity::PathEquivalence => IdentityId::PathEquivalence,
            Identity::SeriesConstant => IdentityId::SeriesConstant,
            Identity::Genfunc => IdentityId::Genfunc,
            Identity::BernoulliZeta => IdentityId::BernoulliZeta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Audit {
    Table,
    SmallX,
    LargeN,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate g_n(x), or x g_n'(x) for the derivative methods, at one point
    Eval {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        x: f64,
        #[arg(long, value_enum, default_value_t = Method::Integral)]
        method: Method,
        /// Additive constant of the derivative series
        #[arg(long, value_enum, default_value_t = Variant::Corrected)]
        variant: Variant,
    },
    /// Tabulate the integral and ladder evaluations over a grid
    Table {
        /// Orders, comma separated
        #[arg(long = "n", value_delimiter = ',', required = true)]
        ns: Vec<u32>,
        /// Scales, comma separated
        #[arg(long = "x", value_delimiter = ',', required = true)]
        xs: Vec<f64>,
    },
    /// Run identity checks; exits 1 if any fails
    Verify {
        /// Restrict to these identities (comma separated or repeated)
        #[arg(long, value_enum, value_delimiter = ',')]
        only: Vec<Identity>,
    },
    /// Run report-only audits of published claims; always exits 0
    Audit {
        /// Restrict to these audits (comma separated or repeated)
        #[arg(long, value_enum, value_delimiter = ',')]
        only: Vec<Audit>,
        /// Order used by the small-x audit
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Scale used by the large-n audit
        #[arg(long, default_value_t = 0.5)]
        x: f64,
        /// Decreasing scales for the small-x audit, comma separated
        #[arg(long, value_delimiter = ',')]
        xs: Vec<f64>,
        /// Increasing orders for the large-n audit, comma separated
        #[arg(long, value_delimiter = ',')]
        ns: Vec<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let acc = cli.global.accuracy();
    let outcome = acc
        .validate()
        .map_err(commands::Failure::from)
        .and_then(|()| match cli.command {
            Command::Eval {
                n,
                x,
                method,
                variant,
            } => commands::eval(n, x, method, variant.into(), &acc, cli.global.format),
            Command::Table { ns, xs } => commands::table(&ns, &xs, &acc, cli.global.format),
            Command::Verify { only } => {
                let ids: Vec<IdentityId> = only.into_iter().map(IdentityId::from).collect();
                commands::verify(&ids, &acc, cli.global.format)
            }
            Command::Audit { only, n, x, xs, ns } => {
                commands::audit(&only, n, x, &xs, &ns, &acc, cli.global.format)
            }
        });
    let (text, code) = match outcome {
        Ok(out) => (Some(out.text), out.code),
        Err(f) => {
            eprintln!("{}", f.message);
            (f.partial, f.code)
        }
    };
    if let Some(text) = text {
        if let Err(e) = commands::emit(&text, cli.global.out.as_deref()) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
