use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use union_subgraph::bench::{bench_corpus, run_bench, DEFAULT_BENCH_KINDS};
use union_subgraph::dataset::{
    cycle_dataset, cycle_splits, read_dataset, split_dataset, write_corpus, write_dataset, Labeled,
    DESK_SPLIT, LABELS_FILE,
};
use union_subgraph::descriptors::{coefficient_table, DescriptorKind, EncodingKind};
use union_subgraph::graph::{generate_named, read_graph_file, NamedGraphSpec};
use union_subgraph::neural::{
    prepare_samples, train_classifier, ModelKind, SoftmaxAxis, TrainConfig,
};
use union_subgraph::wl::distinguish_pair;
use union_subgraph::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Union-subgraph structural coefficients and friends")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format of `coeffs`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (`coeffs`, `distinguish`, `bench`) or directory (`gen`, `train`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Per-edge coefficients of one graph file.
    Coeffs {
        graph: PathBuf,
        #[arg(long, default_value = "union-path-svd")]
        kind: DescriptorKind,
        #[arg(long, default_value = "svd-sum")]
        enc: EncodingKind,
    },
    /// 1-WL and coefficient-augmented verdicts for two graph files.
    Distinguish {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value = "union-path-svd")]
        kind: DescriptorKind,
        #[arg(long, default_value = "svd-sum")]
        enc: EncodingKind,
    },
    /// Writes a dataset directory.
    ///
    /// SPEC is one of cycle:N, complete:N, path:N, star:N, rook4x4,
    /// shrikhande, two-triangles-vs-c6, cycle-task:K (with --count, or
    /// --splits for train/val/test subdirectories) and bench-corpus.
    Gen {
        spec: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long)]
        splits: bool,
    },
    /// Times descriptor kinds over a corpus directory.
    Bench {
        corpus: PathBuf,
        #[arg(long, value_delimiter = ',')]
        kinds: Vec<DescriptorKind>,
        #[arg(long, default_value = "svd-sum")]
        enc: EncodingKind,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        /// Spread edges over RAYON_NUM_THREADS threads.
        #[arg(long)]
        parallel: bool,
    },
    /// Trains a graph classifier on a labeled dataset directory.
    Train {
        dataset: PathBuf,
        #[arg(long, default_value = "gcn")]
        model: ModelKind,
        #[arg(long, default_value_t = 100)]
        epochs: usize,
        #[arg(long, default_value_t = 16)]
        hidden: usize,
        #[arg(long, default_value_t = 1e-3)]
        lr: f64,
        #[arg(long, default_value_t = 32)]
        batch: usize,
        #[arg(long, value_enum, default_value_t = Axis::Receiver)]
        axis: Axis,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    Receiver,
    Sender,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn require_out(out: Option<&Path>, command: &str) -> Result<PathBuf> {
    out.map(Path::to_path_buf)
        .ok_or_else(|| Error::InvalidParameter(format!("{command} needs --out DIR")))
}

fn gen(spec: &str, count: usize, splits: bool, seed: u64, dir: &Path) -> Result<()> {
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let number = || {
        arg.parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("{spec:?} needs a numeric argument")))
    };
    let named = match name {
        "cycle" => NamedGraphSpec::Cycle(number()?),
        "complete" => NamedGraphSpec::Complete(number()?),
        "path" => NamedGraphSpec::Path(number()?),
        "star" => NamedGraphSpec::Star(number()?),
        "rook4x4" => NamedGraphSpec::Rook4x4,
        "shrikhande" => NamedGraphSpec::Shrikhande,
        "two-triangles-vs-c6" => NamedGraphSpec::TwoTrianglesVsC6Pair,
        "bench-corpus" => return write_corpus(dir, &bench_corpus(count, seed)),
        "cycle-task" if splits => {
            let (train, val, test) = cycle_splits(number()?, DESK_SPLIT, seed)?;
            write_dataset(dir.join("train"), &train)?;
            write_dataset(dir.join("val"), &val)?;
            return write_dataset(dir.join("test"), &test);
        }
        "cycle-task" => return write_dataset(dir, &cycle_dataset(number()?, count, seed)?),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "unknown graph spec {spec:?}"
            )))
        }
    };
    write_corpus(dir, &generate_named(named)?)
}

fn load_splits(dir: &Path, seed: u64) -> Result<(Labeled, Labeled, Labeled)> {
    if dir.join("train").join(LABELS_FILE).exists() {
        Ok((
            read_dataset(dir.join("train"))?,
            read_dataset(dir.join("val"))?,
            read_dataset(dir.join("test"))?,
        ))
    } else {
        Ok(split_dataset(read_dataset(dir)?, seed))
    }
}

fn run(cli: Cli) -> Result<()> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Coeffs { graph, kind, enc } => {
            let g = read_graph_file(&graph)?;
            let table = coefficient_table(&g, kind, enc)?;
            let text = match cli.format {
                Format::Csv => table.to_csv(),
                Format::Json => table.to_json(),
            };
            emit(out, &text)
        }
        Command::Distinguish {
            first,
            second,
            kind,
            enc,
        } => {
            let g1 = read_graph_file(&first)?;
            let g2 = read_graph_file(&second)?;
            emit(out, &distinguish_pair(&g1, &g2, kind, enc)?.to_json())
        }
        Command::Gen {
            spec,
            count,
            splits,
        } => gen(&spec, count, splits, cli.seed, &require_out(out, "gen")?),
        Command::Bench {
            corpus,
            kinds,
            enc,
            repeats,
            parallel,
        } => {
            let graphs: Vec<_> = read_dataset(&corpus)?.into_iter().map(|(g, _)| g).collect();
            let kinds = if kinds.is_empty() {
                DEFAULT_BENCH_KINDS.to_vec()
            } else {
                kinds
            };
            emit(
                out,
                &run_bench(&graphs, &kinds, enc, repeats, parallel)?.to_json(),
            )
        }
        Command::Train {
            dataset,
            model,
            epochs,
            hidden,
            lr,
            batch,
            axis,
        } => {
            let dir = require_out(out, "train")?;
            let (train, val, test) = load_splits(&dataset, cli.seed)?;
            let coefficients = model.uses_coefficients();
            let (train, val, test) = (
                prepare_samples(&train, coefficients)?,
                prepare_samples(&val, coefficients)?,
                prepare_samples(&test, coefficients)?,
            );
            let cfg = TrainConfig {
                model,
                hidden,
                epochs,
                batch_size: batch,
                lr,
                seed: cli.seed,
                axis: match axis {
                    Axis::Receiver => SoftmaxAxis::Receiver,
                    Axis::Sender => SoftmaxAxis::Sender,
                },
            };
            let (classifier, report) = train_classifier(&train, &val, &test, &cfg)?;
            fs::create_dir_all(&dir)?;
            let checkpoint = dir.join("model.json");
            let curve = dir.join("loss.csv");
            fs::write(&checkpoint, classifier.to_json())?;
            fs::write(&curve, report.log_csv())?;
            let metrics = json!({
                "model": report.model,
                "epochs": epochs,
                "best_epoch": report.best_epoch,
                "train_acc": report.train_acc,
                "val_acc": report.val_acc,
                "test_acc": report.test_acc,
                "loss_curve": curve,
                "checkpoint": checkpoint,
            });
            let text = serde_json::to_string_pretty(&metrics)?;
            fs::write(dir.join("metrics.json"), &text)?;
            emit(None, &text)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
    }
}
