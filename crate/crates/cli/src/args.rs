//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "berkolab", version, about = "Exact p-adic and Berkovich-line kernels with certificates")]
pub struct Cli {
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Absolute p-adic working precision.
    #[arg(long, global = true, default_value_t = berkolab_core::DEFAULT_PRECISION)]
    pub prec: i64,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Splitting log-radius of the μ_{p^n}-torsor of a germ.
    SplittingRadius(SplittingRadius),
    /// Artin–Schreier reduction data of T^p − T = X^e.
    AsGenus(AsGenus),
    /// Achieved orders of combinations of simple poles.
    OrderSet(OrderSet),
    /// A combination whose order k has k + 1 not a power of p.
    FindOrder(FindOrder),
    /// Evaluate or check a current on a Tate curve.
    Current(CurrentCmd),
    /// δ(c_n)(1) against q^n.
    MoebiusCheck(MoebiusCheck),
    /// δ(c_P)(1) against P(q).
    PolyEval(PolyEvalCmd),
    /// Theta products and their automorphy factor.
    Theta(Theta),
    /// ord_z(δ(c)) + 1 read off splitting radii.
    LadderOrd(LadderOrd),
    /// Retraction checks on a tower of skeleta.
    SkeletonTower(SkeletonTower),
}

#[derive(Debug, Args, Serialize)]
pub struct SplittingRadius {
    #[arg(long)]
    pub p: u64,
    /// Exponent of the germ 1 + X^N.
    #[arg(long = "N", id = "N")]
    #[serde(rename = "N")]
    pub big_n: Option<u32>,
    #[arg(long)]
    pub n: u32,
    /// Compute from the Newton polygon instead of the closed form.
    #[arg(long)]
    pub numeric: bool,
    /// Germ as a series file, instead of 1 + X^N.
    #[arg(long)]
    pub series: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct AsGenus {
    #[arg(long)]
    pub e: u64,
    #[arg(long)]
    pub p: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct OrderSet {
    /// Pole family as a file path or inline JSON.
    #[arg(long)]
    pub poles: String,
    /// Override the evaluation point.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long, default_value_t = 12)]
    pub nmax: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct FindOrder {
    #[arg(long)]
    pub p: u64,
    /// Pole family as a file path or inline JSON; random rational poles when absent.
    #[arg(long)]
    pub poles: Option<String>,
    /// Number of random poles.
    #[arg(long, default_value_t = 6)]
    pub count: usize,
    #[arg(long, default_value_t = 12)]
    pub nmax: usize,
}

/// A Tate curve parameter and a current, shared by several commands.
#[derive(Debug, Args, Serialize)]
pub struct CurrentSource {
    #[arg(long)]
    pub p: u64,
    /// Tate parameter: p, p^k, c*p^k or a rational.
    #[arg(long)]
    pub q: String,
    /// Current file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Cusp values "j:c,j:c" of a window-supported integer current.
    #[arg(long, allow_hyphen_values = true)]
    pub cusps: Option<String>,
    /// Spine value at the left end of the window.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub spine: i64,
    /// Use the Möbius current c_n cut at J·n.
    #[arg(long)]
    pub moebius: Option<u64>,
    #[arg(long = "J", id = "J", default_value_t = 12)]
    #[serde(rename = "J")]
    pub big_j: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurrentOp {
    Validate,
    Delta,
    Alpha,
    RoundTrip,
}

#[derive(Debug, Args, Serialize)]
pub struct CurrentCmd {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: CurrentSource,
    #[arg(long, value_enum, default_value = "delta")]
    pub what: CurrentOp,
    /// Evaluation point.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Evaluate α on the ball of this log-radius around z.
    #[arg(long, allow_hyphen_values = true)]
    pub logradius: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct MoebiusCheck {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: String,
    #[arg(long)]
    pub n: u64,
    #[arg(long = "J", id = "J", default_value_t = 12)]
    #[serde(rename = "J")]
    pub big_j: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct PolyEvalCmd {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: String,
    /// Integer coefficients a_0,a_1,… of P.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
    #[arg(long = "J", id = "J", default_value_t = 12)]
    #[serde(rename = "J")]
    pub big_j: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct Theta {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: String,
    /// Roots and multiplicities "a:k,b:k" of f, with Σ k = 0.
    #[arg(long, allow_hyphen_values = true)]
    pub roots: String,
    #[arg(long, default_value_t = 1)]
    pub l: u64,
    /// Sample points, comma separated; more than one runs the automorphy check.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, allow_hyphen_values = true)]
    pub z0: String,
    #[arg(long = "M", id = "M", default_value_t = 12)]
    #[serde(rename = "M")]
    pub big_m: u64,
    /// Report f_Γ'(q^l z)/f_Γ'(z) even for a single z.
    #[arg(long)]
    pub automorphy: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct LadderOrd {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: CurrentSource,
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, default_value_t = 6)]
    pub nmax: u32,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TowerCheck {
    Compose,
    Separation,
}

#[derive(Debug, Args, Serialize)]
pub struct SkeletonTower {
    /// Tower file.
    #[arg(long, required_unless_present = "random_depth")]
    pub file: Option<PathBuf>,
    /// Generate a random tower of this depth from the seed instead.
    #[arg(long)]
    pub random_depth: Option<usize>,
    #[arg(long, value_enum)]
    pub check: TowerCheck,
    /// Sample points per graph, or point pairs for separation.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// A point of the finest graph as JSON, e.g. '{"edge":0,"t":"1/2"}'.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub y: Option<String>,
}
