//! Run configuration, orchestration and result files.
//!
//! A run writes three files to its output directory:
//!
//! * `records.jsonl`: one [`BenchRecord`] per line, in item order;
//! * `summary.csv`: one row per size with columns
//!   `size,mean_raw,mean_corrected,sem,mean_loss,pass_raw,pass_corrected`;
//! * `run_meta.json`: the resolved configuration, tool version, timestamp,
//!   status and benchmark-level results.
//!
//! Records and summary depend only on the configuration (never on the worker
//! count or on timing).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bench::{
    run_bv, run_grover, run_qv, Backend, BvConfig, GroverConfig, GroverScheme, QvConfig, SizeSummary,
};
use crate::circuit::Modality;
use crate::error::{Error, Result};
use crate::gates::CzProtocol;
use crate::noise::DeviceParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Benchmark {
    Qv,
    Bv,
    Grover,
}

impl Benchmark {
    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Qv => "qv",
            Benchmark::Bv => "bv",
            Benchmark::Grover => "grover",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModalityKind {
    Static,
    #[default]
    Reconfigurable,
}

fn default_cz() -> CzProtocol {
    CzProtocol::Lp
}
fn default_circuits() -> usize {
    200
}
fn default_depths() -> [usize; 2] {
    [2, 9]
}
fn default_bv_sizes() -> Vec<usize> {
    vec![9]
}
fn default_iterations() -> [usize; 2] {
    [1, 6]
}
fn default_targets() -> Vec<usize> {
    (0..64).collect()
}
fn default_out() -> PathBuf {
    PathBuf::from("results")
}

/// Resolved run configuration. Every field except `benchmark` and
/// `master_seed` has a default; device fields default to `DeviceParams::default()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub benchmark: Benchmark,
    /// Required before running; may come from the command line.
    #[serde(default)]
    pub master_seed: Option<u64>,
    #[serde(default)]
    pub device: DeviceParams,
    /// Ideal gates, no preparation error and no decoherence.
    #[serde(default)]
    pub noiseless: bool,
    /// QV only; BV and Grover always run reconfigurable.
    #[serde(default)]
    pub modality: ModalityKind,
    /// Entangling protocol for QV and BV.
    #[serde(default = "default_cz")]
    pub cz_protocol: CzProtocol,
    #[serde(default)]
    pub grover_scheme: GroverSchemeField,
    /// Inclusive QV width/depth range.
    #[serde(default = "default_depths")]
    pub depth_range: [usize; 2],
    /// BV data-register widths.
    #[serde(default = "default_bv_sizes")]
    pub qubit_counts: Vec<usize>,
    /// Inclusive Grover iteration range.
    #[serde(default = "default_iterations")]
    pub iteration_range: [usize; 2],
    #[serde(default = "default_targets")]
    pub targets: Vec<usize>,
    #[serde(default = "default_circuits")]
    pub n_circuits: usize,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
    /// Worker threads; 0 uses one per core.
    #[serde(default)]
    pub workers: usize,
}

/// Grover scheme with a serde default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroverSchemeField(pub GroverScheme);

impl Default for GroverSchemeField {
    fn default() -> Self {
        GroverSchemeField(GroverScheme::Ccz)
    }
}

impl RunConfig {
    /// Defaults for `benchmark` with no seed set.
    pub fn new(benchmark: Benchmark) -> Self {
        serde_json::from_value(serde_json::json!({ "benchmark": benchmark }))
            .expect("defaults deserialize")
    }

    pub fn validate(&self) -> Result<()> {
        if self.master_seed.is_none() {
            return Err(Error::Config("master_seed: required (set it in the file or with --seed)".into()));
        }
        if !self.noiseless {
            validate_device(&self.device)?;
        }
        let [d0, d1] = self.depth_range;
        if self.benchmark == Benchmark::Qv && !(2 <= d0 && d0 <= d1 && d1 <= 9) {
            return Err(Error::Config(format!("depth_range: [{d0}, {d1}] must satisfy 2 <= lo <= hi <= 9")));
        }
        if self.benchmark == Benchmark::Qv && self.n_circuits < 2 {
            return Err(Error::Config("n_circuits: QV needs at least 2".into()));
        }
        if let Some(n) = self.qubit_counts.iter().find(|&&n| !(1..=9).contains(&n)) {
            return Err(Error::Config(format!("qubit_counts: {n} outside 1..=9")));
        }
        let [k0, k1] = self.iteration_range;
        if !(1 <= k0 && k0 <= k1 && k1 <= 6) {
            return Err(Error::Config(format!("iteration_range: [{k0}, {k1}] must satisfy 1 <= lo <= hi <= 6")));
        }
        if let Some(t) = self.targets.iter().find(|&&t| t >= 64) {
            return Err(Error::Config(format!("targets: {t} is not a six-bit string")));
        }
        Ok(())
    }

    fn backend(&self) -> Backend {
        if self.noiseless {
            Backend::noiseless()
        } else {
            Backend::device(self.device)
        }
    }

    fn seed(&self) -> u64 {
        self.master_seed.unwrap_or_default()
    }

    /// Hex digest of the settings that determine results (output directory
    /// and worker count excluded).
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        c.output_dir = PathBuf::new();
        c.workers = 0;
        let bytes = serde_json::to_vec(&c).expect("config serializes");
        Sha256::digest(&bytes)[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn validate_device(device: &DeviceParams) -> Result<()> {
    device.validate().map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("device: {msg}")),
        other => other,
    })
}

/// Parses a JSON configuration. Schema violations name the offending key;
/// physically invalid device values are rejected with a reason.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Config(format!("{path}: {}", e.into_inner()))
    })?;
    if !cfg.noiseless {
        validate_device(&cfg.device)?;
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    parse_config(&fs::read_to_string(path)?)
}

/// One benchmark datum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub benchmark: Benchmark,
    pub config_digest: String,
    /// QV `n<size>-c<index>`; BV the seed bit string; Grover `<target bits>-k<k>`.
    pub item_id: String,
    /// QV width, BV data width or Grover iteration count.
    pub size: usize,
    pub raw: f64,
    pub corrected: f64,
    pub p_loss: f64,
    pub wall_clock_us: f64,
    /// QV ideal heavy-output probability.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<f64>,
    /// Grover largest non-target probability, raw and corrected.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_raw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_corrected: Option<f64>,
}

/// In-memory outcome of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub records: Vec<BenchRecord>,
    pub summaries: Vec<SizeSummary>,
    /// Benchmark-level results for `run_meta.json`.
    pub extra: serde_json::Value,
}

fn bits(value: usize, width: usize) -> String {
    format!("{value:0width$b}")
}

/// Runs the benchmark on the current rayon pool without touching the disk.
pub fn execute_config(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let digest = cfg.digest();
    let record = |item_id: String, size, raw, corrected, p_loss, wall| BenchRecord {
        benchmark: cfg.benchmark,
        config_digest: digest.clone(),
        item_id,
        size,
        raw,
        corrected,
        p_loss,
        wall_clock_us: wall,
        ideal: None,
        second_raw: None,
        second_corrected: None,
    };
    match cfg.benchmark {
        Benchmark::Qv => {
            let modality = match cfg.modality {
                ModalityKind::Static => Modality::Static,
                ModalityKind::Reconfigurable => Modality::Reconfigurable { tau_move: cfg.device.tau_move_a },
            };
            let qv = QvConfig {
                sizes: (cfg.depth_range[0]..=cfg.depth_range[1]).collect(),
                n_circuits: cfg.n_circuits,
                modality,
                cz: cfg.cz_protocol,
                master_seed: cfg.seed(),
                backend: cfg.backend(),
            };
            let r = run_qv(&qv)?;
            let records = r
                .circuits
                .iter()
                .map(|c| BenchRecord {
                    ideal: Some(c.h_ideal),
                    ..record(format!("n{}-c{}", c.size, c.index), c.size, c.h_raw, c.h_corrected, c.p_loss, c.wall_clock)
                })
                .collect();
            Ok(RunOutput {
                records,
                summaries: r.summaries,
                extra: serde_json::json!({ "vq_raw": r.vq_raw, "vq_corrected": r.vq_corrected }),
            })
        }
        Benchmark::Bv => {
            let bv = BvConfig {
                sizes: cfg.qubit_counts.clone(),
                cz: cfg.cz_protocol,
                master_seed: cfg.seed(),
                backend: cfg.backend(),
            };
            let r = run_bv(&bv)?;
            let records = r
                .seeds
                .iter()
                .map(|s| record(bits(s.seed, s.size), s.size, s.raw, s.corrected, s.p_loss, s.wall_clock))
                .collect();
            Ok(RunOutput { records, summaries: r.summaries, extra: serde_json::json!({}) })
        }
        Benchmark::Grover => {
            let gc = GroverConfig {
                scheme: cfg.grover_scheme.0,
                targets: cfg.targets.clone(),
                max_iterations: cfg.iteration_range[1],
                backend: cfg.backend(),
            };
            let r = run_grover(&gc)?;
            let k0 = cfg.iteration_range[0];
            let records = r
                .records
                .iter()
                .filter(|g| g.k >= k0)
                .map(|g| BenchRecord {
                    second_raw: Some(g.p_second_raw),
                    second_corrected: Some(g.p_second_corrected),
                    ..record(
                        format!("{}-k{}", bits(g.target, 6), g.k),
                        g.k,
                        g.p_target_raw,
                        g.p_target_corrected,
                        g.p_loss,
                        g.wall_clock,
                    )
                })
                .collect();
            let mean_second: Vec<_> = r
                .mean_second
                .iter()
                .enumerate()
                .filter(|(i, _)| i + 1 >= k0)
                .map(|(i, (raw, corr))| serde_json::json!({ "k": i + 1, "raw": raw, "corrected": corr }))
                .collect();
            Ok(RunOutput {
                records,
                summaries: r.summaries.into_iter().filter(|s| s.size >= k0).collect(),
                extra: serde_json::json!({ "mean_second": mean_second }),
            })
        }
    }
}

fn write_records(path: &Path, records: &[BenchRecord]) -> Result<()> {
    let mut f = std::io::BufWriter::new(fs::File::create(path)?);
    for r in records {
        serde_json::to_writer(&mut f, r)?;
        f.write_all(b"\n")?;
    }
    f.flush()?;
    Ok(())
}

fn write_summary(path: &Path, summaries: &[SizeSummary]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    for s in summaries {
        w.serialize(s).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Usage(format!("CSV: {other:?}")),
    }
}

/// Reads `summary.csv` back.
pub fn read_summary(path: &Path) -> Result<Vec<SizeSummary>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_error)?;
    r.deserialize().map(|row| row.map_err(csv_error)).collect()
}

/// Reads `records.jsonl` back.
pub fn read_records(path: &Path) -> Result<Vec<BenchRecord>> {
    fs::read_to_string(path)?
        .lines()
        .map(|l| serde_json::from_str(l).map_err(Error::from))
        .collect()
}

fn write_meta(dir: &Path, cfg: &RunConfig, status: &str, extra: serde_json::Value) -> Result<()> {
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or_default();
    let meta = serde_json::json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp_unix": timestamp,
        "status": status,
        "config_digest": cfg.digest(),
        "config": cfg,
        "results": extra,
    });
    fs::write(dir.join("run_meta.json"), serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

/// Runs `cfg` with its worker count and writes the three result files.
///
/// A failing or panicking run still writes `run_meta.json` with
/// `status: "failed"` and the reason; no records are written then.
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("workers: {e}")))?;
    log::info!("running {} (digest {}) into {}", cfg.benchmark.name(), cfg.digest(), dir.display());
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| pool.install(|| execute_config(cfg))));
    let out = match outcome {
        Ok(Ok(out)) => out,
        Ok(Err(e)) => {
            write_meta(dir, cfg, "failed", serde_json::json!({ "error": e.to_string() }))?;
            return Err(e);
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "worker panicked".into());
            write_meta(dir, cfg, "failed", serde_json::json!({ "error": msg }))?;
            return Err(Error::Usage(format!("worker panicked: {msg}")));
        }
    };
    write_records(&dir.join("records.jsonl"), &out.records)?;
    write_summary(&dir.join("summary.csv"), &out.summaries)?;
    write_meta(dir, cfg, "complete", out.extra.clone())?;
    log::info!("wrote {} records", out.records.len());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_device_section_gives_defaults() {
        let cfg = parse_config(r#"{"benchmark": "qv", "master_seed": 1, "device": {}}"#).unwrap();
        assert_eq!(cfg.device, DeviceParams::default());
        assert_eq!(cfg.depth_range, [2, 9]);
        cfg.validate().unwrap();
    }

    #[test]
    fn unphysical_t2_is_rejected() {
        let e = parse_config(r#"{"benchmark": "qv", "device": {"t1": 4, "t2": 10}}"#).unwrap_err();
        assert!(e.to_string().contains("t2"), "{e}");
    }

    #[test]
    fn errors_name_the_key() {
        let e = parse_config(r#"{"benchmark": "qv", "device": {"t1": "long"}}"#).unwrap_err();
        assert!(e.to_string().contains("device.t1"), "{e}");
        let e = parse_config(r#"{"benchmark": "qv", "bogus": 1}"#).unwrap_err();
        assert!(e.to_string().contains("bogus"), "{e}");
        let e = parse_config(r#"{"benchmark": "tetris"}"#).unwrap_err();
        assert!(e.to_string().contains("benchmark"), "{e}");
    }

    #[test]
    fn seed_is_mandatory() {
        let cfg = parse_config(r#"{"benchmark": "bv"}"#).unwrap();
        assert!(cfg.validate().unwrap_err().to_string().contains("master_seed"));
    }

    #[test]
    fn digest_ignores_placement() {
        let mut a = RunConfig::new(Benchmark::Qv);
        a.master_seed = Some(3);
        let mut b = a.clone();
        b.workers = 7;
        b.output_dir = "elsewhere".into();
        assert_eq!(a.digest(), b.digest());
        b.n_circuits = 5;
        assert_ne!(a.digest(), b.digest());
    }
}
