//! Grover search over six data qubits with a three-ancilla C5Z.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{mean, post_select, SizeSummary};
use super::Backend;
use crate::circuit::{execute_checkpoints, schedule, Modality, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::gates::CzProtocol;
use crate::transpile::{lower, multi_controlled_z, AbstractGate, Circuit, LoweringScheme, ToffoliScheme};

pub const GROVER_DATA: usize = 6;
pub const GROVER_ANCILLAS: usize = 3;
const DATA: [usize; GROVER_DATA] = [0, 1, 2, 3, 4, 5];
const ANCILLAS: [usize; GROVER_ANCILLAS] = [6, 7, 8];

/// Entangling resources for the C5Z stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroverScheme {
    /// Native CCZ gates.
    Ccz,
    /// Six-CZ Toffolis with the LP protocol.
    CzLp,
    /// Six-CZ Toffolis with the ARP protocol.
    CzArp,
}

impl GroverScheme {
    pub fn toffoli(self) -> ToffoliScheme {
        match self {
            GroverScheme::Ccz => ToffoliScheme::Ccz,
            _ => ToffoliScheme::SixCnot,
        }
    }

    pub fn lowering(self) -> LoweringScheme {
        let cz = match self {
            GroverScheme::CzLp => CzProtocol::Lp,
            _ => CzProtocol::Arp,
        };
        LoweringScheme { cz, native_ccz: self == GroverScheme::Ccz }
    }
}

/// `k` Grover iterations marking `target` (bit `i` of the six-bit string is
/// data qubit `i`, qubit 0 most significant). Each iteration ends with a
/// barrier, so the `k`-iteration circuit lowers and schedules to an exact
/// prefix of the `k + 1` one.
pub fn grover_circuit(target: usize, k: usize, scheme: GroverScheme) -> Result<Circuit> {
    if target >= 1 << GROVER_DATA {
        return Err(Error::Usage(format!("target {target} is not a six-bit string")));
    }
    let mut c = Circuit::new(GROVER_DATA + GROVER_ANCILLAS);
    c.gates(DATA.map(AbstractGate::H));
    let c5z = multi_controlled_z(&DATA, &ANCILLAS, scheme.toffoli())?;
    let zeros: Vec<usize> = DATA.iter().copied().filter(|&q| target >> (GROVER_DATA - 1 - q) & 1 == 0).collect();
    for _ in 0..k {
        c.gates(zeros.iter().map(|&q| AbstractGate::X(q)));
        c.extend(c5z.iter().cloned());
        c.gates(zeros.iter().map(|&q| AbstractGate::X(q)));

        c.gates(DATA.map(AbstractGate::H));
        c.gates(DATA.map(AbstractGate::X));
        c.extend(c5z.iter().cloned());
        c.gates(DATA.map(AbstractGate::X));
        c.gates(DATA.map(AbstractGate::H));
        c.barrier();
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroverConfig {
    pub scheme: GroverScheme,
    /// Six-bit target strings to search for.
    pub targets: Vec<usize>,
    /// Largest iteration count; every `k` in `1..=max_iterations` is reported.
    pub max_iterations: usize,
    pub backend: Backend,
}

impl GroverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=6).contains(&self.max_iterations) {
            return Err(Error::Config(format!("Grover iterations {} outside 1..=6", self.max_iterations)));
        }
        if let Some(t) = self.targets.iter().find(|&&t| t >= 1 << GROVER_DATA) {
            return Err(Error::Config(format!("Grover target {t} is not a six-bit string")));
        }
        self.backend.params.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroverRecord {
    pub target: usize,
    pub k: usize,
    pub p_target_raw: f64,
    pub p_target_corrected: f64,
    /// Largest probability of a non-target data outcome.
    pub p_second_raw: f64,
    pub p_second_corrected: f64,
    pub p_loss: f64,
    pub wall_clock: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroverResult {
    pub scheme: GroverScheme,
    pub records: Vec<GroverRecord>,
    /// One row per iteration count; `size` is `k`.
    pub summaries: Vec<SizeSummary>,
    /// Mean raw and corrected second-largest probability per `k`.
    pub mean_second: Vec<(f64, f64)>,
}

impl GroverResult {
    pub fn summary(&self, k: usize) -> Option<&SizeSummary> {
        self.summaries.iter().find(|s| s.size == k)
    }
}

fn scheduled(target: usize, k: usize, scheme: GroverScheme, backend: &Backend) -> Result<ScheduledCircuit> {
    let p = &backend.params;
    let lowered = lower(&grover_circuit(target, k, scheme)?, scheme.lowering(), p)?;
    schedule(&lowered, GROVER_DATA + GROVER_ANCILLAS, Modality::Reconfigurable { tau_move: p.tau_move_a }, p)
}

fn run_target(cfg: &GroverConfig, target: usize) -> Result<Vec<GroverRecord>> {
    let kmax = cfg.max_iterations;
    let full = scheduled(target, kmax, cfg.scheme, &cfg.backend)?;
    let mut prefixes = Vec::with_capacity(kmax);
    for k in 1..kmax {
        let sc = scheduled(target, k, cfg.scheme, &cfg.backend)?;
        if full.layers[..sc.layers.len()] != sc.layers[..] {
            return Err(Error::Scheduling(format!("{k}-iteration schedule is not a prefix")));
        }
        prefixes.push(sc.layers.len());
    }
    prefixes.push(full.layers.len());
    let snaps = execute_checkpoints(&full, &cfg.backend.params, cfg.backend.model, &prefixes)?;
    snaps
        .into_iter()
        .enumerate()
        .map(|(i, res)| {
            let dist = res.rho_final.outcome_distribution(&DATA)?;
            let trace = res.rho_final.trace();
            let (pt, ps) = (dist.probability(target), dist.max_excluding(target));
            Ok(GroverRecord {
                target,
                k: i + 1,
                p_target_raw: pt,
                p_target_corrected: post_select(pt, trace),
                p_second_raw: ps,
                p_second_corrected: post_select(ps, trace),
                p_loss: res.p_loss,
                wall_clock: res.wall_clock_total,
            })
        })
        .collect()
}

/// Runs every target for `k = 1..=max_iterations`, one checkpointed
/// execution per target.
pub fn run_grover(cfg: &GroverConfig) -> Result<GroverResult> {
    cfg.validate()?;
    let per_target = cfg
        .targets
        .par_iter()
        .map(|&t| run_target(cfg, t))
        .collect::<Result<Vec<_>>>()?;
    let records: Vec<GroverRecord> = per_target.into_iter().flatten().collect();
    let mut summaries = Vec::new();
    let mut mean_second = Vec::new();
    for k in 1..=cfg.max_iterations {
        let rows: Vec<&GroverRecord> = records.iter().filter(|r| r.k == k).collect();
        let col = |f: fn(&GroverRecord) -> f64| rows.iter().map(|r| f(r)).collect::<Vec<_>>();
        summaries.push(SizeSummary::from_items(
            k,
            &col(|r| r.p_target_raw),
            &col(|r| r.p_target_corrected),
            &col(|r| r.p_loss),
        ));
        mean_second.push((mean(&col(|r| r.p_second_raw)), mean(&col(|r| r.p_second_corrected))));
    }
    Ok(GroverResult { scheme: cfg.scheme, records, summaries, mean_second })
}
