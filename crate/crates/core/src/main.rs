use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use thiserror::Error;

use awcd::awcd::{run, test_matrix, AwcdConfig, BiasIndicator, Neighborhoods, Variant, VariantTag};
use awcd::eval::{exact_recovery, partition_from_weights, rand_index, tune_lambda_on};
use awcd::experiments::{
    ak_table_csv, constants_csv, parse_grid, polygon_csv, rate_csv, replicate_seeds, run_rate, run_sweep, sweep_csv,
    RateConfig, SweepConfig,
};
use awcd::graph::load_edge_list;
use awcd::sbm::{sample, true_weights, Labeling, SbmSpec};
use awcd::theory::consistency_polygon;

#[derive(Parser, Debug)]
#[command(name = "awcd", version, about = "Adaptive weights community detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Base seed; replicate r uses a stream derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Output path. CSV commands write to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a block model graph.
    Generate(GenerateArgs),
    /// Run the detection procedure on an edge-list file.
    Detect(DetectArgs),
    /// Rand index, exact recovery and modularity over a parameter grid.
    Sweep(SweepArgs),
    /// Minimal within-block probability reaching a target accuracy, per size.
    Rate(RateArgs),
    /// Consistency region corners and expected-count tables.
    Theory(TheoryArgs),
}

#[derive(Args, Debug)]
struct VariantArgs {
    #[arg(long, default_value = "debiased")]
    variant: VariantTag,

    /// Gate of the radius >= 2 debiasing: edge or diag.
    #[arg(long, default_value = "edge")]
    bias: BiasIndicator,
}

impl VariantArgs {
    fn variant(&self) -> Variant {
        Variant::from(self.variant).with_bias(self.bias)
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Block size.
    #[arg(long)]
    n: usize,

    /// Number of blocks.
    #[arg(long = "K", default_value_t = 2)]
    blocks: usize,

    /// Within-block probability, one value or one per block.
    #[arg(long, value_delimiter = ',', required = true)]
    theta: Vec<f64>,

    /// Between-block probability.
    #[arg(long)]
    rho: f64,

    /// Labels file; defaults to the output path with `.labels` appended.
    #[arg(long)]
    labels_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("threshold").required(true).args(["lambda", "tune"])))]
struct DetectArgs {
    /// Edge-list file.
    graph: PathBuf,

    /// Radius of the starting neighborhoods.
    #[arg(long, default_value_t = 1)]
    k: usize,

    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,

    /// Pick the threshold from this grid by modularity (start:stop:count or a list).
    #[arg(long)]
    tune: Option<String>,

    #[command(flatten)]
    variant: VariantArgs,

    #[arg(long, default_value_t = 1)]
    iters: usize,

    /// True labels; prints rand_index and exact_recovery against them.
    #[arg(long)]
    labels: Option<PathBuf>,

    /// Derived labels file; defaults to the output path with `.labels` appended.
    #[arg(long)]
    labels_out: Option<PathBuf>,

    /// Dense CSV of the first pass test statistics.
    #[arg(long)]
    dump_test_matrix: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    n: usize,

    #[arg(long = "K", default_value_t = 2)]
    blocks: usize,

    #[arg(long, value_delimiter = ',', required = true)]
    theta: Vec<f64>,

    #[arg(long, value_delimiter = ',', required = true)]
    rho: Vec<f64>,

    #[arg(long, value_delimiter = ',', default_value = "1")]
    k: Vec<usize>,

    /// Threshold grid, start:stop:count or a list.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,

    /// Replicates per parameter combination.
    #[arg(long, default_value_t = 10)]
    reps: usize,

    #[command(flatten)]
    variant: VariantArgs,

    #[arg(long, default_value_t = 1)]
    iters: usize,

    /// Fill wall_time_seconds; otherwise it is written as 0.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct RateArgs {
    /// Block sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,

    #[arg(long = "K", default_value_t = 2)]
    blocks: usize,

    /// Within-block probabilities, start:stop:count or a list.
    #[arg(long)]
    theta: String,

    /// Space the colon form of --theta geometrically.
    #[arg(long)]
    log_theta: bool,

    #[arg(long, default_value_t = 4.0)]
    quotient: f64,

    #[arg(long, default_value_t = 1)]
    k: usize,

    #[arg(long, default_value_t = 10)]
    reps: usize,

    /// Mean best Rand index counted as recovered.
    #[arg(long, default_value_t = 0.95)]
    threshold: f64,

    /// Optimize over this threshold grid instead of over all thresholds.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,

    #[command(flatten)]
    variant: VariantArgs,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("table").multiple(true).args(["ak_out", "constants_out"]).requires_all(["theta", "rho"])))]
struct TheoryArgs {
    #[arg(long)]
    variant: VariantTag,

    #[arg(long)]
    k: usize,

    /// Write the a_k/b_k table for k = 1..=k_max here.
    #[arg(long)]
    ak_out: Option<PathBuf>,

    /// Write the expected radius-1 counts a, c, d here.
    #[arg(long)]
    constants_out: Option<PathBuf>,

    #[arg(long)]
    theta: Option<f64>,

    #[arg(long)]
    rho: Option<f64>,

    #[arg(long = "K", default_value_t = 2)]
    blocks: usize,

    #[arg(long, default_value_t = 10)]
    k_max: usize,

    /// Block size for the expected counts.
    #[arg(long, default_value_t = 1)]
    n: usize,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {msg}")]
    Parse { path: PathBuf, msg: String },
}

impl CliError {
    fn usage(e: impl ToString) -> Self {
        CliError::Usage(e.to_string())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Parse { .. } => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write(path, contents),
        None => io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn required_out(out: &Option<PathBuf>) -> Result<&Path, CliError> {
    out.as_deref()
        .ok_or_else(|| CliError::usage("--out is required for this command"))
}

fn labels_path(explicit: &Option<PathBuf>, out: &Path) -> PathBuf {
    explicit.clone().unwrap_or_else(|| {
        let mut s = out.as_os_str().to_owned();
        s.push(".labels");
        PathBuf::from(s)
    })
}

fn generate(cli: &Cli, args: &GenerateArgs) -> Result<(), CliError> {
    let out = required_out(&cli.out)?;
    let thetas = if args.theta.len() == 1 {
        vec![args.theta[0]; args.blocks]
    } else {
        args.theta.clone()
    };
    let spec = SbmSpec::new(vec![args.n; args.blocks], thetas, args.rho).map_err(CliError::usage)?;
    let (g, labels) = sample(&spec, cli.seed);
    write(out, &g.to_edge_list())?;
    write(&labels_path(&args.labels_out, out), &labels.to_text())?;
    println!("{}", g.n_edges());
    Ok(())
}

fn detect(cli: &Cli, args: &DetectArgs) -> Result<(), CliError> {
    let out = required_out(&cli.out)?;
    if args.k == 0 || args.iters == 0 {
        return Err(CliError::usage("--k and --iters must be positive"));
    }
    let grid = args
        .tune
        .as_deref()
        .map(|spec| parse_grid(spec, false))
        .transpose()
        .map_err(CliError::usage)?;
    let g = load_edge_list(&read(&args.graph)?).map_err(|e| CliError::Parse {
        path: args.graph.clone(),
        msg: e.to_string(),
    })?;
    let truth = match &args.labels {
        Some(path) => {
            let labels = Labeling::from_text(&read(path)?).map_err(|msg| CliError::Parse {
                path: path.clone(),
                msg,
            })?;
            if labels.len() != g.n_vertices() {
                return Err(CliError::Parse {
                    path: path.clone(),
                    msg: format!("{} labels for {} vertices", labels.len(), g.n_vertices()),
                });
            }
            Some(labels)
        }
        None => None,
    };
    let variant = args.variant.variant();
    let lambda = match (args.lambda, grid) {
        (Some(lambda), _) => lambda,
        (None, Some(grid)) => {
            let t = test_matrix(&g, &Neighborhoods::rings(&g, args.k), variant);
            let (lambda, q) = tune_lambda_on(&g, &t, &grid).map_err(CliError::usage)?;
            println!("lambda {lambda}");
            println!("modularity {q}");
            lambda
        }
        (None, None) => unreachable!("clap requires one of --lambda and --tune"),
    };
    let result = run(
        &g,
        &AwcdConfig::new(args.k, lambda, variant).with_iterations(args.iters),
    );
    if let Some(path) = &args.dump_test_matrix {
        write(path, &result.tests[0].to_dense_csv())?;
    }
    let mut pairs = String::new();
    for (i, j) in result.weights.pairs() {
        pairs.push_str(&format!("{i} {j}\n"));
    }
    write(out, &pairs)?;
    write(
        &labels_path(&args.labels_out, out),
        &partition_from_weights(&result.weights).to_text(),
    )?;
    if let Some(truth) = truth {
        let w_star = true_weights(&truth);
        let ri = rand_index(&result.weights, &w_star).map_err(CliError::usage)?;
        let exact = exact_recovery(&result.weights, &w_star).map_err(CliError::usage)?;
        println!("rand_index {ri}");
        println!("exact_recovery {exact}");
    }
    Ok(())
}

fn sweep(cli: &Cli, args: &SweepArgs) -> Result<(), CliError> {
    let cfg = SweepConfig {
        n: args.n,
        n_blocks: args.blocks,
        thetas: args.theta.clone(),
        rhos: args.rho.clone(),
        ks: args.k.clone(),
        lambdas: parse_grid(&args.lambda, false).map_err(CliError::usage)?,
        seeds: replicate_seeds(cli.seed, args.reps),
        variant: args.variant.variant(),
        l_max: args.iters,
        timing: args.timing,
    };
    let records = run_sweep(&cfg, cli.jobs).map_err(CliError::usage)?;
    emit(cli.out.as_deref(), &sweep_csv(&records))
}

fn rate(cli: &Cli, args: &RateArgs) -> Result<(), CliError> {
    let cfg = RateConfig {
        ns: args.n.clone(),
        n_blocks: args.blocks,
        thetas: parse_grid(&args.theta, args.log_theta).map_err(CliError::usage)?,
        quotient: args.quotient,
        k: args.k,
        seeds: replicate_seeds(cli.seed, args.reps),
        threshold: args.threshold,
        variant: args.variant.variant(),
        lambdas: args
            .lambda
            .as_deref()
            .map(|spec| parse_grid(spec, false))
            .transpose()
            .map_err(CliError::usage)?,
    };
    let summary = run_rate(&cfg, cli.jobs).map_err(CliError::usage)?;
    for (n, theta) in &summary.theta_min {
        if theta.is_none() {
            eprintln!("warning: no theta in the grid reaches {} for n = {n}", args.threshold);
        }
    }
    if summary.slope.is_none() {
        eprintln!("warning: fewer than two sizes reach the threshold; slope omitted");
    }
    emit(cli.out.as_deref(), &rate_csv(&summary))
}

fn theory(cli: &Cli, args: &TheoryArgs) -> Result<(), CliError> {
    let poly = consistency_polygon(args.variant, args.k).map_err(CliError::usage)?;
    if args.ak_out.is_some() || args.constants_out.is_some() {
        let (theta, rho) = (args.theta.expect("required"), args.rho.expect("required"));
        SbmSpec::symmetric(args.n.max(1), args.blocks, theta, rho).map_err(CliError::usage)?;
        if args.blocks < 2 {
            return Err(CliError::usage("--K must be at least 2 for the tables"));
        }
        if let Some(path) = &args.ak_out {
            if args.k_max == 0 {
                return Err(CliError::usage("--k-max must be positive"));
            }
            write(path, &ak_table_csv(theta, rho, args.blocks, args.k_max))?;
        }
        if let Some(path) = &args.constants_out {
            write(path, &constants_csv(theta, rho, args.blocks, args.n))?;
        }
    }
    emit(cli.out.as_deref(), &polygon_csv(&poly))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Generate(args) => generate(&cli, args),
        Command::Detect(args) => detect(&cli, args),
        Command::Sweep(args) => sweep(&cli, args),
        Command::Rate(args) => rate(&cli, args),
        Command::Theory(args) => theory(&cli, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
