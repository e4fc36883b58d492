use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "tcss",
    version,
    about = "Threshold-changeable secret sharing toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate or validate primes and write a parameters file.
    Setup(SetupArgs),
    /// Deal shares for a secret and write the commitment.
    Deal(DealArgs),
    /// Build one participant's component for a session.
    Component(ComponentArgs),
    /// Run an honest all-in-one reconstruction and print the secret.
    Reconstruct(ReconstructArgs),
    /// Check a full set of components against the commitment.
    Authenticate(AuthenticateArgs),
    /// Simulate a session with adversarial participants.
    Attack(AttackArgs),
    /// Exact leakage and uniformity analysis at tiny sizes.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("prime_source").args(["q_bits", "q"])))]
pub struct SetupArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub t: usize,
    /// Bit length of a freshly generated q.
    #[arg(long)]
    pub q_bits: Option<u64>,
    /// Explicit q; p defaults to the smallest valid prime.
    #[arg(long)]
    pub q: Option<String>,
    /// Explicit p, requires --q.
    #[arg(long, requires = "q")]
    pub p: Option<String>,
    /// Comma-separated identities U_0..U_n.
    #[arg(long, value_delimiter = ',')]
    pub identities: Option<Vec<String>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("secret_source").args(["secret", "random"]).required(true)))]
pub struct DealArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub secret: Option<String>,
    #[arg(long)]
    pub random: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Receives `share-<i>.json` and `commitment.json`.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct ComponentArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub share: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub participants: Vec<usize>,
    #[arg(long)]
    pub nonce: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub params: PathBuf,
    /// Defaults to the indices of the given shares.
    #[arg(long, value_delimiter = ',')]
    pub participants: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    pub nonce: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Exit with status 1 unless the recovered secret equals this.
    #[arg(long)]
    pub expect: Option<String>,
    #[arg(required = true)]
    pub shares: Vec<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AuthenticateArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub commitment: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub participants: Vec<usize>,
    #[arg(long)]
    pub nonce: u64,
    /// Include the group key in the printed verdict.
    #[arg(long)]
    pub show_key: bool,
    #[arg(required = true)]
    pub components: Vec<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttackMode {
    Reconstruct,
    Authenticate,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopologyArg {
    Pairwise,
    Broadcast,
}

#[derive(Args, Debug)]
pub struct AttackArgs {
    #[arg(long)]
    pub params: PathBuf,
    /// Directory written by `deal`.
    #[arg(long)]
    pub shares_dir: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub participants: Vec<usize>,
    /// `INDEX:ipa[:fixed=V][:last]`, `INDEX:replay` or
    /// `INDEX:mutate=OFFSET[:last]`; repeatable.
    #[arg(long = "adversary")]
    pub adversaries: Vec<String>,
    #[arg(long, value_enum, default_value = "authenticate")]
    pub mode: AttackMode,
    #[arg(long, value_enum, default_value = "pairwise")]
    pub topology: TopologyArg,
    #[arg(long)]
    pub nonce: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON-lines transcript.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
#[command(group(
    ArgGroup::new("analysis")
        .args(["linear", "mixed", "threshold", "impersonation", "subsets", "forged_token"])
        .required(true)
))]
pub struct AnalyzeArgs {
    /// Distribution of a nonzero linear combination over F_p.
    #[arg(long)]
    pub linear: bool,
    /// Linear combination mixing F_p and [0, q) variables.
    #[arg(long)]
    pub mixed: bool,
    /// Leakage from fewer than t shares.
    #[arg(long)]
    pub threshold: bool,
    /// Success of an impersonator with a forged component.
    #[arg(long)]
    pub impersonation: bool,
    /// Leakage from every j-subset of the m components.
    #[arg(long)]
    pub subsets: bool,
    /// Acceptance of a forged token in group authentication.
    #[arg(long)]
    pub forged_token: bool,

    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub j: Option<usize>,
    /// Known share indices for --threshold.
    #[arg(long, value_delimiter = ',')]
    pub known: Vec<usize>,
    /// Coefficients for --linear, or the F_p coefficients for --mixed.
    #[arg(long, value_delimiter = ',')]
    pub coeffs: Vec<u64>,
    /// The [0, q) coefficients for --mixed.
    #[arg(long, value_delimiter = ',')]
    pub small_coeffs: Vec<u64>,
    /// `exhaustive`, `honest` or `fixed=V`.
    #[arg(long, default_value = "exhaustive")]
    pub forge: String,
    #[arg(long)]
    pub budget: Option<u64>,
    /// Disable the statistical fallback above the budget.
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub sequential: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub json: bool,
}
