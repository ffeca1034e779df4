//! Bernstein-Vazirani with a mobile ancilla.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{child_seed, post_select, SizeSummary};
use super::Backend;
use crate::circuit::{execute_with_model, schedule, Modality};
use crate::error::{Error, Result};
use crate::gates::CzProtocol;
use crate::transpile::{lower, AbstractGate, Circuit, LoweringScheme};

/// Largest number of seed strings evaluated per register width.
pub const SEED_CAP: usize = 256;

/// Circuit recovering `seed` on `n` data qubits (0..n) with the ancilla at
/// index `n`.
///
/// Bit `i` of the seed string belongs to data qubit `i`, which is the
/// `(n - 1 - i)`-th bit of the integer `seed`. The ancilla is flipped to
/// `|1>`, and for each set bit it is moved next to that data qubit (one
/// movement block) and a CZ kicks the phase back.
pub fn bv_circuit(seed: usize, n: usize) -> Circuit {
    let anc = n;
    let mut c = Circuit::new(n + 1);
    c.gates((0..n).map(AbstractGate::H));
    c.gate(AbstractGate::Rx(PI, anc));
    for i in 0..n {
        if seed >> (n - 1 - i) & 1 == 1 {
            c.move_marker();
            c.gate(AbstractGate::Cz([i, anc]));
        }
    }
    c.gates((0..n).map(AbstractGate::H));
    c
}

/// Seed strings for width `n`: all of them when `2^n <= 256`, otherwise the
/// all-zeros and all-ones strings plus 254 distinct others drawn from `rng`.
/// Returned in ascending order.
pub fn bv_seeds<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let total = 1usize << n;
    if total <= SEED_CAP {
        return (0..total).collect();
    }
    let mut seeds: Vec<usize> = rand::seq::index::sample(rng, total - 2, SEED_CAP - 2)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    seeds.push(0);
    seeds.push(total - 1);
    seeds.sort_unstable();
    seeds
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BvConfig {
    /// Data-register widths, each in `1..=9`.
    pub sizes: Vec<usize>,
    pub cz: CzProtocol,
    pub master_seed: u64,
    pub backend: Backend,
}

impl BvConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(&n) = self.sizes.iter().find(|&&n| !(1..=9).contains(&n)) {
            return Err(Error::Config(format!("BV width {n} outside 1..=9")));
        }
        self.backend.params.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BvSeedResult {
    pub size: usize,
    pub seed: usize,
    pub raw: f64,
    pub corrected: f64,
    pub p_loss: f64,
    pub wall_clock: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BvResult {
    pub seeds: Vec<BvSeedResult>,
    pub summaries: Vec<SizeSummary>,
}

fn run_seed(cfg: &BvConfig, n: usize, seed: usize) -> Result<BvSeedResult> {
    let params = &cfg.backend.params;
    let circuit = bv_circuit(seed, n);
    let lowered = lower(&circuit, LoweringScheme { cz: cfg.cz, native_ccz: true }, params)?;
    let sc = schedule(&lowered, n + 1, Modality::Reconfigurable { tau_move: params.tau_move_b }, params)?;
    let res = execute_with_model(&sc, params, cfg.backend.model)?;
    let data: Vec<usize> = (0..n).collect();
    let raw = res.rho_final.outcome_distribution(&data)?.probability(seed);
    Ok(BvSeedResult {
        size: n,
        seed,
        raw,
        corrected: post_select(raw, res.rho_final.trace()),
        p_loss: res.p_loss,
        wall_clock: res.wall_clock_total,
    })
}

/// Runs every width in `cfg.sizes` on the reconfigurable device with
/// single-atom moves (`tau_move_b`).
pub fn run_bv(cfg: &BvConfig) -> Result<BvResult> {
    cfg.validate()?;
    let items: Vec<(usize, usize)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| {
            let mut rng = ChaCha8Rng::seed_from_u64(child_seed(cfg.master_seed, n as u64));
            bv_seeds(n, &mut rng).into_iter().map(move |s| (n, s))
        })
        .collect();
    let seeds = items
        .par_iter()
        .map(|&(n, s)| run_seed(cfg, n, s))
        .collect::<Result<Vec<_>>>()?;
    let summaries = cfg
        .sizes
        .iter()
        .map(|&n| {
            let rows: Vec<&BvSeedResult> = seeds.iter().filter(|r| r.size == n).collect();
            let col = |f: fn(&BvSeedResult) -> f64| rows.iter().map(|r| f(r)).collect::<Vec<_>>();
            SizeSummary::from_items(n, &col(|r| r.raw), &col(|r| r.corrected), &col(|r| r.p_loss))
        })
        .collect();
    Ok(BvResult { seeds, summaries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_shape() {
        assert_eq!(bv_circuit(0, 6).move_count(), 0);
        let c = bv_circuit(0b111111, 6);
        assert_eq!(c.move_count(), 6);
        assert_eq!(c.count_gates(|g| matches!(g, AbstractGate::Cz(_))), 6);
    }

    #[test]
    fn seed_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(bv_seeds(3, &mut rng), (0..8).collect::<Vec<_>>());
        let s = bv_seeds(9, &mut rng);
        assert_eq!(s.len(), 256);
        assert_eq!(s[0], 0);
        assert_eq!(*s.last().unwrap(), 511);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }
}
