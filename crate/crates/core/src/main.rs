//! `rydberg-bench`: run a benchmark from a JSON configuration file.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rydberg_vqd::runner::{parse_config, run, Benchmark};
use rydberg_vqd::Error;

const SCHEMA: &str = "\
CONFIGURATION FILE (JSON; unknown keys are rejected)
  benchmark        \"qv\" | \"bv\" | \"grover\"   optional, the subcommand wins
  master_seed      u64                        required here or via --seed
  device           object, every field optional (defaults below):
                     t1 4.0 s, t2 1.49 s, rabi 1.0 MHz, eps_init 0.003,
                     t_init 300 us, v_move 0.55 um/us, tau_move_a 100 us,
                     tau_move_b 40 us, t_cz 0.5 us, t_ccz 1.0 us
  noiseless        bool, default false         ideal gates and no decoherence
  modality         \"reconfigurable\" | \"static\"   QV only, default reconfigurable
  cz_protocol      \"lp\" | \"arp\"                QV and BV, default lp
  grover_scheme    \"ccz\" | \"cz_lp\" | \"cz_arp\"  default ccz
  depth_range      [lo, hi] within 2..=9, default [2, 9]        (QV)
  n_circuits       int >= 2, default 200                        (QV)
  qubit_counts     data widths within 1..=9, default [9]        (BV)
  iteration_range  [lo, hi] within 1..=6, default [1, 6]        (Grover)
  targets          six-bit integers, default 0..63              (Grover)
  output_dir       path, default \"results\"
  workers          threads, 0 = one per core (default)

OUTPUT
  records.jsonl  summary.csv  run_meta.json in the output directory.
  Exit status 0 on success, 2 on configuration errors, 1 on run failures.";

#[derive(Parser)]
#[command(name = "rydberg-bench", version, about = "Benchmarks on a virtual neutral-atom processor")]
#[command(after_long_help = SCHEMA)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quantum volume (heavy-output probability per width).
    Qv(RunArgs),
    /// Bernstein-Vazirani (success probability per seed string).
    Bv(RunArgs),
    /// Six-qubit Grover search (target probability per iteration count).
    Grover(RunArgs),
}

#[derive(Args)]
#[command(after_long_help = SCHEMA)]
struct RunArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Master seed (overrides `master_seed`).
    #[arg(long)]
    seed: Option<u64>,
    /// Circuits per QV width (overrides `n_circuits`).
    #[arg(long)]
    circuits: Option<usize>,
    /// Output directory (overrides `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (overrides `workers`).
    #[arg(long)]
    workers: Option<usize>,
    /// Log progress to stderr.
    #[arg(short, long)]
    verbose: bool,
}

fn resolve(benchmark: Benchmark, args: &RunArgs) -> Result<rydberg_vqd::runner::RunConfig, Error> {
    let text = std::fs::read_to_string(&args.config)?;
    let mut value: serde_json::Value = serde_json::from_str(&text)?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Error::Config("top level: expected a JSON object".into()))?;
    obj.insert("benchmark".into(), serde_json::to_value(benchmark)?);
    let mut cfg = parse_config(&value.to_string())?;
    if let Some(seed) = args.seed {
        cfg.master_seed = Some(seed);
    }
    if let Some(n) = args.circuits {
        cfg.n_circuits = n;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (benchmark, args) = match &cli.command {
        Command::Qv(a) => (Benchmark::Qv, a),
        Command::Bv(a) => (Benchmark::Bv, a),
        Command::Grover(a) => (Benchmark::Grover, a),
    };
    let level = if args.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn };
    env_logger::Builder::new().filter_level(level).init();

    let cfg = match resolve(benchmark, args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("rydberg-bench: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(out) => {
            for s in &out.summaries {
                println!(
                    "size {:>2}  raw {:.4}  corrected {:.4}  sem {:.4}  loss {:.4}",
                    s.size, s.mean_raw, s.mean_corrected, s.sem, s.mean_loss
                );
            }
            if !out.extra.as_object().is_some_and(|o| o.is_empty()) {
                println!("{}", out.extra);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("rydberg-bench: {e}");
            ExitCode::from(1)
        }
    }
}
