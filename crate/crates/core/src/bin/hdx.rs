use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hdx_mixing::cli::{run, CliError, Command, Format, OperatorName, RunConfig};
use hdx_mixing::generators::GeneratorSpec;
use hdx_mixing::HdxError;

/// Hodge Laplacians, expander certificates and mixing-bound checks for simplicial complexes.
#[derive(Parser)]
#[command(name = "hdx", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Build a complex, e.g. `generate complete 5 2` or `generate lm 2 8 0.5 1`
    Generate {
        /// Generator kind and its parameters
        spec: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Spectral summary of every upper Laplacian
    Spectrum(Common),
    /// (j, k, eps) certificate at one dimension
    Certify(Common),
    /// Gallery mixing bound over seeded random families
    Mixing(Common),
    /// Descent lemma over seeded random families
    Descent(Common),
    /// Gallery count by brute force and by operator products
    Galleries(Common),
    /// Exact integer operator identities
    Invariants(Common),
    /// Overlap lower bound and embedding estimate
    Overlap(Common),
    /// Chromatic lower bound against exact search
    Chromatic(Common),
    /// Ideal-expander rigidity and exact mixing
    Ideal(Common),
    /// Dump one operator as text COO
    Export(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Jsonl,
}

#[derive(Args, Default)]
struct Common {
    /// Complex JSON file
    #[arg(long, conflicts_with = "generator")]
    input: Option<PathBuf>,
    /// Generator spec: complete:N:M, lm:D:N:P:SEED or file:PATH
    #[arg(long)]
    generator: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    j: Option<isize>,
    #[arg(long)]
    l: Option<usize>,
    /// Set sizes, comma separated
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Explicit vertex sets as JSON, e.g. [[0],[1],[2]]
    #[arg(long)]
    sets: Option<String>,
    #[arg(long, env = "HDX_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Fixed k values, comma separated (k_0, k_1, ...)
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<f64>>,
    #[arg(long)]
    tol: Option<f64>,
    /// Pach's constant for the overlap bound (no default)
    #[arg(long)]
    pach: Option<f64>,
    /// Color budget for exact chromatic search (default n)
    #[arg(long)]
    max_colors: Option<usize>,
    /// Sampled d-cell centroids per embedding
    #[arg(long)]
    centroid_cells: Option<usize>,
    /// Uniform random points per embedding
    #[arg(long)]
    random_points: Option<usize>,
    /// boundary, upper, lower, full, similar, pitchfork or degree
    #[arg(long)]
    operator: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

fn config(command: Command, c: Common, positional: Option<Vec<String>>) -> Result<(RunConfig, Option<PathBuf>), HdxError> {
    let mut cfg = RunConfig::new(command);
    cfg.source = match (c.input, c.generator, positional) {
        (Some(p), _, _) => Some(GeneratorSpec::FromFile { path: p }),
        (None, Some(g), _) => Some(g.parse()?),
        (None, None, Some(words)) if !words.is_empty() => Some(words.join(":").parse()?),
        _ => None,
    };
    cfg.j = c.j;
    cfg.l = c.l;
    cfg.sizes = c.sizes;
    cfg.sets = c.sets.map(|s| serde_json::from_str(&s)).transpose()?;
    cfg.seed = c.seed;
    cfg.trials = c.trials;
    cfg.k = c.k.unwrap_or_default();
    if let Some(t) = c.tol {
        cfg.tol = t;
    }
    cfg.pach = c.pach;
    cfg.max_colors = c.max_colors;
    if let Some(v) = c.centroid_cells {
        cfg.centroid_cells = v;
    }
    if let Some(v) = c.random_points {
        cfg.random_points = v;
    }
    cfg.operator = c.operator.map(|s| s.parse::<OperatorName>()).transpose()?;
    cfg.format = c.format.map(|f| match f {
        FormatArg::Json => Format::Json,
        FormatArg::Jsonl => Format::Jsonl,
    });
    Ok((cfg, c.out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common, positional) = match cli.command {
        Sub::Generate { spec, common } => (Command::Generate, common, Some(spec)),
        Sub::Spectrum(c) => (Command::Spectrum, c, None),
        Sub::Certify(c) => (Command::Certify, c, None),
        Sub::Mixing(c) => (Command::Mixing, c, None),
        Sub::Descent(c) => (Command::Descent, c, None),
        Sub::Galleries(c) => (Command::Galleries, c, None),
        Sub::Invariants(c) => (Command::Invariants, c, None),
        Sub::Overlap(c) => (Command::Overlap, c, None),
        Sub::Chromatic(c) => (Command::Chromatic, c, None),
        Sub::Ideal(c) => (Command::Ideal, c, None),
        Sub::Export(c) => (Command::Export, c, None),
    };
    let result = config(command, common, positional)
        .map_err(CliError::from)
        .and_then(|(cfg, out)| run(&cfg).map(|o| (o, out)));
    match result {
        Ok((output, out)) => {
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, &output.text) {
                        let err = CliError::from(HdxError::Io(format!("{}: {e}", path.display())));
                        eprintln!("{}", err.to_json());
                        return ExitCode::from(err.exit_code as u8);
                    }
                }
                None => print!("{}", output.text),
            }
            ExitCode::from(output.exit_code as u8)
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code as u8)
        }
    }
}
