use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use probe_lab::experiment::{run_experiment, summary_markdown, write_csv, Dataset, ExperimentConfig};
use probe_lab::io::{read_view, write_atomic, write_view};
use probe_lab::learning::{
    build_training_set, train_linear, train_logistic_traced, DatasetOptions, LabelOracle, Model, ModelKind,
    DEFAULT_PAIR_CAP,
};
use probe_lab::planner::export_ilp;
use probe_lab::sampler::{bfs_sample, draw_sizes, gen_hardness, stream_rng, SampleConfig};
use probe_lab::strategy::parse_strategies;
use probe_lab::verify::run_verify;
use probe_lab::{Error, Graph, Result};

#[derive(Parser)]
#[command(name = "probe-lab", version, about = "Adaptive probing experiments on incomplete networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run strategies on sampled validation views and write a CSV of results.
    Experiment(ExperimentArgs),
    /// Train a linear or pairwise-logistic model on a reference network.
    Train(TrainArgs),
    /// Write BFS-sampled view descriptors of a network.
    Sample(SampleArgs),
    /// Write an adversarial instance (edge list and seed file).
    GenHardness(HardnessArgs),
    /// Write the layered 0/1 program of a view in LP format.
    ExportIlp(IlpArgs),
    /// Check planner guarantees and probe invariants on random small instances.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SamplingFlags {
    /// Smallest sample size as a fraction of the node count.
    #[arg(long, default_value_t = 0.005)]
    min_frac: f64,
    /// Largest sample size as a fraction of the node count.
    #[arg(long, default_value_t = 0.10)]
    max_frac: f64,
    /// Exponent of the size distribution p(s) ~ s^gamma.
    #[arg(long, default_value_t = -0.25, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SamplingFlags {
    fn config(&self) -> SampleConfig {
        SampleConfig {
            min_frac: self.min_frac,
            max_frac: self.max_frac,
            power_exponent: self.gamma,
            sample_count: self.samples,
            rng_seed: self.seed,
        }
    }
}

#[derive(Args)]
struct ExperimentArgs {
    /// Edge-list file; repeat for several datasets.
    #[arg(long = "dataset", required = true)]
    datasets: Vec<PathBuf>,
    /// Comma-separated strategy names (DEG, BC, CC, PR, CLC, EIG, KATZ, RAND,
    /// TADA, TADA-H, GREEDY-BATCH, NAIVE, LINREG, LOGREG).
    #[arg(long, default_value = "RAND,DEG")]
    strategies: String,
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 100, 200, 300])]
    budgets: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Validation view size as a fraction of the node count.
    #[arg(long, default_value_t = 0.05)]
    frac: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Model file for LINREG / LOGREG; repeat to pass both kinds.
    #[arg(long = "model")]
    models: Vec<PathBuf>,
    /// Worker threads (default: PROBE_LAB_THREADS, else all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Fill the wall_time column (makes the CSV non-reproducible).
    #[arg(long)]
    wall_time: bool,
    /// CSV output path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Markdown summary path (default: stderr).
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value = "linear")]
    kind: ModelKind,
    /// Label horizon; a list trains one model per value.
    #[arg(long, value_delimiter = ',', default_values_t = [3usize])]
    horizon: Vec<usize>,
    #[arg(long, default_value = "heuristic")]
    oracle: LabelOracle,
    #[arg(long, default_value_t = DEFAULT_PAIR_CAP)]
    pair_cap: usize,
    #[command(flatten)]
    sampling: SamplingFlags,
    /// Model path; with several horizons `.h<h>` is inserted before the extension.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Fixed sample size as a fraction of the node count (overrides the
    /// min/max/gamma distribution).
    #[arg(long)]
    frac: Option<f64>,
    #[command(flatten)]
    sampling: SamplingFlags,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct HardnessArgs {
    /// Number of gray nodes.
    #[arg(long)]
    n: usize,
    /// Hidden nodes behind the distinguished gray.
    #[arg(long)]
    m: usize,
    /// Index (0-based) of the distinguished gray.
    #[arg(long)]
    gstar: usize,
    #[arg(long, default_value_t = 1)]
    layers: u8,
    /// Writes `<prefix>.edges` and `<prefix>.seeds`.
    #[arg(long)]
    out_prefix: PathBuf,
}

#[derive(Args)]
struct IlpArgs {
    #[arg(long)]
    graph: PathBuf,
    /// View descriptor (Black node labels).
    #[arg(long)]
    seeds: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 200)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Experiment(a) => cmd_experiment(a),
        Command::Train(a) => cmd_train(a),
        Command::Sample(a) => cmd_sample(a),
        Command::GenHardness(a) => cmd_gen_hardness(a),
        Command::ExportIlp(a) => cmd_export_ilp(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) => 3,
        Error::UnknownStrategy(_) => 1,
        _ => 2,
    }
}

fn load_graph(path: &Path) -> Result<Arc<Graph>> {
    let g = Graph::read_edge_list_file(path).map_err(|e| match e {
        Error::Io(io) => Error::InvalidConfig(format!("{}: {io}", path.display())),
        Error::Parse { line, message } => Error::Parse { line, message: format!("{}: {message}", path.display()) },
        other => other,
    })?;
    log::info!("{}: {} nodes, {} edges", path.display(), g.node_count(), g.edge_count());
    Ok(Arc::new(g))
}

fn dataset_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

fn cmd_experiment(a: ExperimentArgs) -> Result<()> {
    let strategies = parse_strategies(&a.strategies)?;
    let datasets = a
        .datasets
        .iter()
        .map(|p| Ok(Dataset { name: dataset_name(p), graph: load_graph(p)? }))
        .collect::<Result<Vec<_>>>()?;
    let models = a
        .models
        .iter()
        .map(|p| Model::from_text(&std::fs::read_to_string(p)?))
        .collect::<Result<Vec<_>>>()?;
    let config = ExperimentConfig {
        strategies,
        budgets: a.budgets,
        validation_samples: a.samples,
        validation_frac: a.frac,
        seed: a.seed,
        threads: a.threads,
        record_wall_time: a.wall_time,
    };
    let rows = run_experiment(&datasets, &config, &models)?;
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    match &a.out {
        Some(path) => write_atomic(path, &csv)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&csv)?;
        }
    }
    let summary = summary_markdown(&rows);
    match &a.summary {
        Some(path) => write_atomic(path, summary.as_bytes())?,
        None => eprint!("{summary}"),
    }
    Ok(())
}

fn horizon_path(out: &Path, h: usize, many: bool) -> PathBuf {
    if !many {
        return out.to_path_buf();
    }
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.h{h}.{}", ext.to_string_lossy()),
        None => format!("{stem}.h{h}"),
    };
    out.with_file_name(name)
}

fn cmd_train(a: TrainArgs) -> Result<()> {
    let graph = load_graph(&a.dataset)?;
    let config = a.sampling.config();
    let many = a.horizon.len() > 1;
    for &h in &a.horizon {
        let options = DatasetOptions {
            horizon: h,
            oracle: a.oracle,
            pair_cap: a.pair_cap,
            pairs: a.kind == ModelKind::Logistic,
        };
        let set = build_training_set(&graph, &config, options)?;
        println!(
            "h={h}: {} samples ({} exhausted), {} points, {} pairs",
            set.samples,
            set.exhausted_samples,
            set.points.len(),
            set.pairs.len()
        );
        let model = match a.kind {
            ModelKind::Linear => {
                let model = train_linear(&set.points, h)?;
                let mse = set.points.iter().map(|p| (model.score(&p.features) - p.label).powi(2)).sum::<f64>()
                    / set.points.len() as f64;
                println!("h={h}: linear fit, training mse {mse:.6}");
                model
            }
            ModelKind::Logistic => {
                let (model, report) = train_logistic_traced(&set.pairs, h)?;
                println!(
                    "h={h}: logistic fit, {} epochs, loss {:.6} -> {:.6}, gradient norm {:.3e}, training accuracy {:.4}",
                    report.epochs,
                    report.losses.first().copied().unwrap_or(f64::NAN),
                    report.losses.last().copied().unwrap_or(f64::NAN),
                    report.gradient_norm,
                    report.accuracy
                );
                model
            }
        };
        let path = horizon_path(&a.out, h, many);
        write_atomic(&path, model.to_text().as_bytes())?;
        println!("h={h}: wrote {}", path.display());
    }
    Ok(())
}

fn cmd_sample(a: SampleArgs) -> Result<()> {
    let graph = load_graph(&a.dataset)?;
    let n = graph.node_count();
    let config = a.sampling.config();
    let sizes = match a.frac {
        Some(f) => {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::InvalidConfig(format!("frac {f} outside (0, 1]")));
            }
            vec![((f * n as f64).round() as usize).clamp(1, n); config.sample_count]
        }
        None => draw_sizes(&config, n, &mut stream_rng(config.rng_seed, 0))?,
    };
    std::fs::create_dir_all(&a.out_dir)?;
    let name = dataset_name(&a.dataset);
    for (i, &size) in sizes.iter().enumerate() {
        let mut rng = stream_rng(config.rng_seed, 1 + i as u64);
        let sample = bfs_sample(&graph, size, &mut rng)?;
        let comment = format!(
            "view {i} of {name}: bfs seed label {}, target {size}, observed {}, gray {}{}",
            graph.label(sample.seed),
            sample.view.observed_node_count(),
            sample.view.gray_count(),
            if sample.exhausted { ", component exhausted" } else { "" }
        );
        let mut buf = Vec::new();
        write_view(&sample.view, &comment, &mut buf)?;
        write_atomic(a.out_dir.join(format!("{name}.view{i:04}")), &buf)?;
    }
    println!("wrote {} view descriptors to {}", sizes.len(), a.out_dir.display());
    Ok(())
}

fn cmd_gen_hardness(a: HardnessArgs) -> Result<()> {
    let inst = gen_hardness(a.n, a.m, a.gstar, a.layers)?;
    let mut edges = Vec::new();
    inst.graph.write_edge_list(&mut edges)?;
    let mut seeds = Vec::new();
    let comment = format!("hardness instance n={} m={} gstar={} layers={}", a.n, a.m, a.gstar, a.layers);
    write_view(&inst.view, &comment, &mut seeds)?;
    let with_ext = |ext: &str| {
        let mut s = a.out_prefix.clone().into_os_string();
        s.push(ext);
        PathBuf::from(s)
    };
    write_atomic(with_ext(".edges"), &edges)?;
    write_atomic(with_ext(".seeds"), &seeds)?;
    println!("distinguished gray node: {}", inst.g_star);
    Ok(())
}

fn cmd_export_ilp(a: IlpArgs) -> Result<()> {
    let graph = load_graph(&a.graph)?;
    let view = read_view(&graph, &a.seeds)?;
    let mut buf = Vec::new();
    let dims = export_ilp(&view, a.k, &mut buf)?;
    write_atomic(&a.out, &buf)?;
    println!(
        "{} collapsed nodes, {} x variables, {} y variables, {} constraints",
        dims.nodes, dims.x_vars, dims.y_vars, dims.constraints
    );
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Result<()> {
    let report = run_verify(a.instances, a.seed)?;
    println!("{} instances, {} random probe steps checked", report.instances, report.probe_steps);
    if report.passed() {
        println!("all checks passed");
        Ok(())
    } else {
        for v in &report.violations {
            println!("violation: {v}");
        }
        Err(Error::Invariant(format!("{} violations", report.violations.len())))
    }
}
