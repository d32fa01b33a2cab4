use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use codepir::schemes::{AmgParams, BasicParams, HhwzParams, RlweParams, SchemeId, SchemeParams};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "codepir", version, about = "Code-based single-server PIR: demo, loopback server/client, attacks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one query/reply/extract round in-process on a random database.
    Demo(DemoArgs),
    /// Write a random database file.
    Mkdb(MkdbArgs),
    /// Answer framed queries against a database file.
    Serve(ServeArgs),
    /// Send a query to a server and extract the requested file.
    Fetch(FetchArgs),
    /// Run a distinguishing attack on a recorded transcript.
    Attack(AttackArgs),
    /// Tabulate communication and server time over database sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeName {
    Basic,
    Hhwz,
    Amg,
    Rlwe,
}

impl From<SchemeName> for SchemeId {
    fn from(s: SchemeName) -> Self {
        match s {
            SchemeName::Basic => SchemeId::Basic,
            SchemeName::Hhwz => SchemeId::Hhwz,
            SchemeName::Amg => SchemeId::Amg,
            SchemeName::Rlwe => SchemeId::Rlwe,
        }
    }
}

/// Scheme selection and parameters; unset flags take the scheme's defaults.
#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    #[arg(long, value_enum, default_value = "basic")]
    pub scheme: SchemeName,
    /// Field size (basic) or base field size (hhwz).
    #[arg(long)]
    pub q: Option<u64>,
    /// Code length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Code dimension.
    #[arg(long)]
    pub k: Option<usize>,
    /// Extension degree (hhwz).
    #[arg(long)]
    pub m: Option<usize>,
    /// Dimension of the retained subspace (hhwz).
    #[arg(long)]
    pub s: Option<usize>,
    /// Plaintext modulus (rlwe).
    #[arg(long)]
    pub t: Option<u64>,
    /// Ciphertext modulus (rlwe).
    #[arg(long)]
    pub rq: Option<u64>,
    /// Ring degree (rlwe).
    #[arg(long)]
    pub deg: Option<usize>,
    /// Noise standard deviation (rlwe).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Number of files in the database.
    #[arg(long = "N")]
    pub files: Option<usize>,
}

impl SchemeArgs {
    pub fn id(&self) -> SchemeId {
        self.scheme.into()
    }

    pub fn num_files(&self) -> usize {
        self.files.unwrap_or_else(|| SchemeParams::default_files(self.id()))
    }

    /// Parameters for a database of `files` entries.
    pub fn params_for(&self, files: usize) -> Result<SchemeParams, CliError> {
        let params = match self.id() {
            SchemeId::Basic => {
                let d = BasicParams::default();
                SchemeParams::Basic(BasicParams { q: self.q.unwrap_or(d.q), n: self.n.unwrap_or(d.n), k: self.k.unwrap_or(d.k) })
            }
            SchemeId::Hhwz => {
                let d = HhwzParams::default();
                let (q, m) = (self.q.unwrap_or(d.q), self.m.unwrap_or(d.m));
                let (s, n, k) = (self.s.unwrap_or(d.s), self.n.unwrap_or(d.n), self.k.unwrap_or(d.k));
                if (q, m) == (d.q, d.m) {
                    SchemeParams::Hhwz(HhwzParams { s, n, k, ..d })
                } else {
                    SchemeParams::Hhwz(HhwzParams::with_default_modulus(q, m, s, n, k)?)
                }
            }
            SchemeId::Amg => {
                let d = AmgParams::default();
                SchemeParams::Amg(AmgParams { files, n: self.n.unwrap_or(d.n), k: self.k.unwrap_or(d.k) })
            }
            SchemeId::Rlwe => {
                let d = RlweParams::default();
                SchemeParams::Rlwe(RlweParams {
                    deg: self.deg.unwrap_or(d.deg),
                    q: self.rq.unwrap_or(d.q),
                    t: self.t.unwrap_or(d.t),
                    sigma: self.sigma.unwrap_or(d.sigma),
                    files,
                })
            }
        };
        params.build()?;
        Ok(params)
    }

    pub fn params(&self) -> Result<SchemeParams, CliError> {
        self.params_for(self.num_files())
    }
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Index of the requested file, 1-based.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub b: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the query transcript here.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MkdbArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value = "127.0.0.1:7878")]
    pub addr: String,
    #[arg(long)]
    pub db: PathBuf,
    /// Serve connections concurrently.
    #[arg(long)]
    pub parallel: bool,
    /// Stop after this many connections.
    #[arg(long)]
    pub requests: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value = "127.0.0.1:7878")]
    pub addr: String,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub b: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the retrieved element here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyName {
    Unitvec,
    Rank,
    Lattice,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    #[arg(long)]
    pub transcript: PathBuf,
    #[arg(long, value_enum)]
    pub strategy: StrategyName,
    /// Rows per block (lattice).
    #[arg(long, default_value_t = 4)]
    pub block: usize,
    /// Marker value; defaults to the transcript's derived t (lattice).
    #[arg(long)]
    pub t: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetupName {
    Flat,
    Matrix,
    Iter,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, value_enum, default_value = "flat")]
    pub setup: SetupName,
    /// Chunks per file for the iterative setup.
    #[arg(long = "L", default_value_t = 4)]
    pub chunks: usize,
    /// Database sizes, comma separated.
    #[arg(long = "Ns", value_delimiter = ',', default_values_t = [16usize, 64, 256])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
