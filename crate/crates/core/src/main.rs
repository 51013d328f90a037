use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use jetpart::io::{load_graph, write_partition, Format};
use jetpart::{partition, Metrics, PartitionError, RefinerConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Metis,
    Mtx,
    Auto,
}

/// Partition a graph into k balanced parts with a small edge cut.
#[derive(Parser, Debug)]
#[command(name = "jetpart", version)]
struct Cli {
    /// Input graph (METIS or Matrix Market).
    graph: PathBuf,
    /// Number of parts.
    #[arg(long)]
    k: usize,
    /// Allowed imbalance: parts may weigh up to (1 + imbalance) * W / k.
    #[arg(long, default_value_t = 0.03)]
    imbalance: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "auto")]
    format: FormatArg,
    /// Partition output file [default: <graph>.part.<k>].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write run metrics as JSON to this file.
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// Guarantee identical output for identical input, seed and flags,
    /// independent of the thread count.
    #[arg(long)]
    deterministic: bool,
    #[arg(long, default_value_t = 0.999)]
    phi: f64,
    #[arg(long, default_value_t = 12)]
    no_improve_limit: usize,
    #[arg(long, default_value_t = 200)]
    coarse_target: usize,
    #[arg(long, default_value_t = 0.25)]
    c_finest: f64,
    #[arg(long, default_value_t = 0.75)]
    c_other: f64,
    /// Worker threads [default: all cores].
    #[arg(long)]
    threads: Option<usize>,
}

const EXIT_IO: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("jetpart: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        builder = builder.num_threads(t);
    }
    match builder.build() {
        Ok(pool) => pool.install(|| run(cli)),
        Err(e) => fail(EXIT_IO, e),
    }
}

fn run(cli: Cli) -> ExitCode {
    let format = match cli.format {
        FormatArg::Metis => Format::Metis,
        FormatArg::Mtx => Format::MatrixMarket,
        FormatArg::Auto => Format::from_extension(&cli.graph),
    };
    let g = match load_graph(&cli.graph, format) {
        Ok(g) => g,
        Err(e) => return fail(EXIT_IO, e),
    };

    let mut cfg = RefinerConfig::new(cli.k, cli.imbalance);
    cfg.seed = cli.seed;
    cfg.deterministic = cli.deterministic;
    cfg.phi = cli.phi;
    cfg.no_improve_limit = cli.no_improve_limit;
    cfg.coarse_target = cli.coarse_target;
    cfg.c_finest = cli.c_finest;
    cfg.c_other = cli.c_other;

    let result = match partition(g.clone(), &cfg) {
        Ok(r) => r,
        Err(e @ PartitionError::Infeasible(_)) => return fail(EXIT_INFEASIBLE, e),
        Err(e) => return fail(EXIT_IO, e),
    };

    let out = cli.out.unwrap_or_else(|| {
        let mut name = cli.graph.clone().into_os_string();
        name.push(format!(".part.{}", cli.k));
        name.into()
    });
    let written = File::create(&out).and_then(|f| write_partition(result.partition.parts(), BufWriter::new(f)));
    if let Err(e) = written {
        return fail(EXIT_IO, format!("{}: {e}", out.display()));
    }

    if let Some(path) = &cli.metrics {
        let metrics = Metrics::new(&g, &result, &cfg);
        let written = File::create(path)
            .map_err(|e| e.to_string())
            .and_then(|f| serde_json::to_writer_pretty(BufWriter::new(f), &metrics).map_err(|e| e.to_string()));
        if let Err(e) = written {
            return fail(EXIT_IO, format!("{}: {e}", path.display()));
        }
    }

    println!(
        "cutsize {} imbalance {:.4} parts {} vertices {}",
        result.cutsize(),
        result.partition.imbalance(),
        cli.k,
        g.n()
    );
    if !result.balanced {
        return fail(
            EXIT_INFEASIBLE,
            "no balanced partition found; wrote the least imbalanced one",
        );
    }
    ExitCode::SUCCESS
}
