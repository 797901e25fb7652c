use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Format, Overrides};

#[derive(Debug, Parser)]
#[command(name = "lipsat", version, about = "Integral closure and Lipschitz saturation on plane-curve germs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// TOML file with keys exp, root, div, trunc, ceiling, seed, format.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Largest reparametrization exponent in the pair-curve search.
    #[arg(long, global = true)]
    pub exp: Option<u32>,
    /// Largest root-of-unity order tried for twists.
    #[arg(long, global = true)]
    pub root: Option<u32>,
    /// Degree bound for division certificates.
    #[arg(long, global = true)]
    pub div: Option<u32>,
    /// Initial series truncation.
    #[arg(long, global = true)]
    pub trunc: Option<i64>,
    /// Cap for iterative deepening of the truncation.
    #[arg(long, global = true)]
    pub ceiling: Option<i64>,
    /// Seed for sampling commands; recorded in every report.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

impl GlobalArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            exp: self.exp,
            root: self.root,
            div: self.div,
            trunc: self.trunc,
            ceiling: self.ceiling,
            seed: self.seed,
            format: self.format,
        }
    }
}

/// A plane curve and an ideal on it.
#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// Defining polynomial of the curve.
    #[arg(long)]
    pub f: String,
    /// Comma-separated generators; the Jacobian ideal of f when omitted.
    #[arg(long)]
    pub gens: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct MemberArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Element to test.
    #[arg(long, allow_hyphen_values = true)]
    pub h: String,
}

/// A family `F(z, y)` over the parameter space.
#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Defining polynomial of the total space.
    #[arg(long = "F")]
    pub total: String,
    /// Comma-separated fiber coordinates.
    #[arg(long, default_value = "x,y")]
    pub fiber: String,
    /// Comma-separated parameters.
    #[arg(long, default_value = "w")]
    pub params: String,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Comma-separated parameter values.
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModuleArg {
    Jz,
    Myjz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Sup,
    Inner,
    Both,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Puiseux branches of a plane curve.
    Parametrize {
        #[arg(long)]
        f: String,
    },
    /// Integral-closure membership h ∈ closure(I).
    Iclosure(MemberArgs),
    /// Multiplicity of I on the curve, branch by branch.
    Mult(CurveArgs),
    /// Lipschitz-saturation membership h ∈ I_S.
    Saturation(MemberArgs),
    /// iL_A at a parameter value.
    CheckIla(CheckArgs),
    /// iL_mY at a parameter value.
    CheckIlmy(CheckArgs),
    /// Whitney condition W at a parameter value.
    CheckW(CheckArgs),
    /// Rank of the doubled module at a pair of points.
    Cosupport {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Fiber coordinates of the first point.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Fiber coordinates of the second point.
        #[arg(long, allow_hyphen_values = true)]
        z2: String,
        #[arg(long, value_enum, default_value = "jz")]
        module: ModuleArg,
    },
    /// All three conditions over a list of parameter values.
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        /// `a..b` for integers, or a comma list; `:` separates parameters.
        #[arg(long, allow_hyphen_values = true)]
        samples: String,
    },
    /// Grassmann chart of hyperplane sections and its identities.
    Grassmann {
        #[arg(long = "F")]
        total: String,
        /// Variable solved for on the hyperplane; the last one by default.
        #[arg(long)]
        chart: Option<String>,
    },
    /// Check on one hyperplane section z_n = Σ h_i z_i.
    Section {
        #[arg(long = "F")]
        total: String,
        #[arg(long)]
        chart: Option<String>,
        /// Comma-separated coefficients h_i.
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// Sup-norm distance of two hyperplanes given by their normals.
    Distance {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
    },
    /// Tangent-plane distances at sampled pairs of fiber points.
    ProbeTangent {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Lipschitz exponents of h/g along the enumerated pair-curves.
    ProbeLipschitz(MemberArgs),
    /// Re-evaluate the witness or certificate in a JSON report.
    Replay {
        /// Report written by `--format json`.
        #[arg(long)]
        witness: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Parametrize { .. } => "parametrize",
            Command::Iclosure(_) => "iclosure",
            Command::Mult(_) => "mult",
            Command::Saturation(_) => "saturation",
            Command::CheckIla(_) => "check-ila",
            Command::CheckIlmy(_) => "check-ilmy",
            Command::CheckW(_) => "check-w",
            Command::Cosupport { .. } => "cosupport",
            Command::Sweep { .. } => "sweep",
            Command::Grassmann { .. } => "grassmann",
            Command::Section { .. } => "section",
            Command::Distance { .. } => "distance",
            Command::ProbeTangent { .. } => "probe-tangent",
            Command::ProbeLipschitz(_) => "probe-lipschitz",
            Command::Replay { .. } => "replay",
        }
    }
}
