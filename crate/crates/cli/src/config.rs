use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rankgrad::subgroup::TietzeLevel;

#[derive(Parser, Debug, Clone)]
#[command(name = "rankgrad", version, about = "Rank gradients along chains of finite-index subgroups")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Primes for mod-p homology, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_value = "2,3,5")]
    pub primes: Vec<u64>,
    /// Worker threads for level-parallel work (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Coset table cache; defaults to $RANKGRAD_CACHE_DIR.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Disable the coset table cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Live coset budget for a single enumeration.
    #[arg(long, global = true, default_value_t = rankgrad::coset::DEFAULT_COSET_CAP)]
    pub coset_cap: usize,
    /// Node budget for low-index searches.
    #[arg(long, global = true, default_value_t = rankgrad::coset::DEFAULT_NODE_CAP)]
    pub node_cap: usize,
    /// Largest index a chain level built by intersection may reach.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub index_cap: usize,
    /// Longest graphing label.
    #[arg(long, global = true, default_value_t = rankgrad::graphings::DEFAULT_LABEL_CAP)]
    pub label_cap: usize,
    /// Tietze effort: 0 drops trivial relators, 1 eliminates generators,
    /// 2 also shortens relators.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=2))]
    pub tietze: u8,
}

impl Global {
    pub fn tietze_level(&self) -> TietzeLevel {
        TietzeLevel::from_number(self.tietze).unwrap_or_default()
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Where the presentation comes from.
#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Built-in presentation: f2, f3, surface2, fig8, s3, z2z2, lamplighter<m>.
    #[arg(long, alias = "group", conflicts_with = "input")]
    pub preset: Option<String>,
    /// Presentation file.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    /// lamplighter for lamplighter presets, hnn when a generator `t` is
    /// present, farber otherwise.
    Auto,
    Farber,
    Hnn,
    Lamplighter,
}

#[derive(Args, Debug, Clone)]
pub struct ChainArgs {
    #[arg(long, value_enum, default_value_t = ChainKind::Auto)]
    pub kind: ChainKind,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Stable letter for hnn chains.
    #[arg(long, default_value = "t")]
    pub stable: String,
    /// Named subgroup whose normal core starts a farber chain (default:
    /// the whole group).
    #[arg(long)]
    pub subgroup: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Coset table of one subgroup.
    Enumerate {
        #[command(flatten)]
        source: Source,
        /// Named subgroup from the presentation file.
        #[arg(long, conflicts_with = "gens")]
        subgroup: Option<String>,
        /// Subgroup generators, comma separated, e.g. "a^2, b".
        #[arg(long)]
        gens: Option<String>,
        /// Take the normal closure of the generators.
        #[arg(long)]
        normal: bool,
    },
    /// All subgroups up to a given index.
    Lowindex {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 4)]
        max: usize,
        /// Include every coset table in the result.
        #[arg(long)]
        list: bool,
    },
    /// Build a chain and report its gradient sequence.
    Chain {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Gradient sequence of named subgroups forming a chain.
    Gradient {
        #[command(flatten)]
        source: Source,
        /// Named subgroups from outermost to innermost (default: all, in
        /// file order).
        #[arg(long, value_delimiter = ',')]
        subgroups: Vec<String>,
    },
    /// Generating-set graphing of one chain level.
    Graphing {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        chain: ChainArgs,
        /// Level number n of the chain.
        #[arg(long)]
        level: usize,
        /// Search for a graphing with fewer incidences.
        #[arg(long)]
        minimize: bool,
        #[arg(long, default_value_t = 50)]
        iterations: usize,
    },
    /// Covering tower of A ∗ ℤ with a prescribed fixed-vertex fraction.
    Tower {
        #[command(flatten)]
        source: Source,
        /// Target fixed fraction as p/q.
        #[arg(long)]
        mu: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Prime for the b1p comparison (default: first of --primes).
        #[arg(long)]
        prime: Option<u64>,
        /// Random lifts tried per level.
        #[arg(long, default_value_t = rankgrad::towers::DEFAULT_LIFT_ATTEMPTS)]
        attempts: usize,
    },
    /// Check a presentation file, its named subgroups, and optionally a
    /// coset table stored as JSON.
    Validate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Enumerate { .. } => "enumerate",
            Command::Lowindex { .. } => "lowindex",
            Command::Chain { .. } => "chain",
            Command::Gradient { .. } => "gradient",
            Command::Graphing { .. } => "graphing",
            Command::Tower { .. } => "tower",
            Command::Validate { .. } => "validate",
        }
    }

    pub fn source(&self) -> &Source {
        match self {
            Command::Enumerate { source, .. }
            | Command::Lowindex { source, .. }
            | Command::Chain { source, .. }
            | Command::Gradient { source, .. }
            | Command::Graphing { source, .. }
            | Command::Tower { source, .. }
            | Command::Validate { source, .. } => source,
        }
    }
}

/// Echo of everything that influences a report's content. Thread count and
/// cache location change how fast a result arrives, not what it is, so
/// they are left out.
#[derive(Serialize, Debug, Clone)]
pub struct RunConfig {
    pub command: String,
    pub source: String,
    pub parameters: serde_json::Value,
    pub caps: Caps,
    pub primes: Vec<u64>,
    pub seed: u64,
    pub format: Format,
}

#[derive(Serialize, Debug, Clone, Copy)]
pub struct Caps {
    pub coset: usize,
    pub node: usize,
    pub index: usize,
    pub label: usize,
    pub tietze: u8,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> RunConfig {
        let g = &cli.global;
        let src = cli.command.source();
        let source = match (&src.preset, &src.input) {
            (Some(p), _) => format!("preset:{p}"),
            (None, Some(f)) => format!("file:{}", f.display()),
            (None, None) => "none".into(),
        };
        let parameters = match &cli.command {
            Command::Enumerate { subgroup, gens, normal, .. } => serde_json::json!({ "subgroup": subgroup, "gens": gens, "normal": normal }),
            Command::Lowindex { max, list, .. } => serde_json::json!({ "max": max, "list": list }),
            Command::Chain { chain, .. } => chain_json(chain),
            Command::Gradient { subgroups, .. } => serde_json::json!({ "subgroups": subgroups }),
            Command::Graphing { chain, level, minimize, iterations, .. } => {
                let mut v = chain_json(chain);
                v["level"] = (*level).into();
                v["minimize"] = (*minimize).into();
                v["iterations"] = (*iterations).into();
                v
            }
            Command::Tower { mu, depth, prime, attempts, .. } => serde_json::json!({ "mu": mu, "depth": depth, "prime": prime, "attempts": attempts }),
            Command::Validate { table, .. } => serde_json::json!({ "table": table.as_ref().map(|t| t.display().to_string()) }),
        };
        RunConfig {
            command: cli.command.name().into(),
            source,
            parameters,
            caps: Caps { coset: g.coset_cap, node: g.node_cap, index: g.index_cap, label: g.label_cap, tietze: g.tietze },
            primes: g.primes.clone(),
            seed: g.seed,
            format: g.format,
        }
    }

    /// Positive caps, at least one prime, all of them prime.
    pub fn check(&self) -> Result<(), String> {
        let c = &self.caps;
        if [c.coset, c.node, c.index, c.label].contains(&0) {
            return Err("caps must be positive".into());
        }
        if let Some(p) = self.primes.iter().find(|&&p| !is_prime(p)) {
            return Err(format!("{p} is not prime"));
        }
        Ok(())
    }
}

fn chain_json(c: &ChainArgs) -> serde_json::Value {
    serde_json::json!({ "kind": c.kind, "depth": c.depth, "stable": c.stable, "subgroup": c.subgroup })
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}
