//! Quantum volume via heavy-output probability on square random circuits.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{child_seed, mean, post_select, sem, SizeSummary};
use super::Backend;
use crate::circuit::{execute_with_model, schedule, Modality};
use crate::error::{Error, Result};
use crate::gates::CzProtocol;
use crate::state::{run_ideal, OutcomeDistribution};
use crate::transpile::{consolidate_blocks, haar_su4, lower, pairing_layout, route_static, AbstractGate, Circuit, LoweringScheme, Permutation};

/// Heavy outputs of an ideal distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct HeavySet {
    pub median: f64,
    /// Outcomes with probability strictly above the median, ascending.
    pub outcomes: Vec<usize>,
    /// Ideal probability mass on the heavy outcomes.
    pub h_ideal: f64,
}

impl HeavySet {
    pub fn mass(&self, dist: &OutcomeDistribution) -> f64 {
        self.outcomes.iter().map(|&b| dist.probability(b)).sum()
    }
}

pub fn qv_heavy_set(ideal: &OutcomeDistribution) -> HeavySet {
    let p = ideal.probabilities();
    let mut sorted = p.to_vec();
    sorted.sort_by(f64::total_cmp);
    let k = sorted.len();
    let median = if k % 2 == 0 { (sorted[k / 2 - 1] + sorted[k / 2]) / 2.0 } else { sorted[k / 2] };
    let outcomes: Vec<usize> = (0..k).filter(|&b| p[b] > median).collect();
    let h_ideal = outcomes.iter().map(|&b| p[b]).sum();
    HeavySet { median, outcomes, h_ideal }
}

/// Quantum-volume run over several square sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QvConfig {
    /// Widths (= depths) to run, each in `2..=9`.
    pub sizes: Vec<usize>,
    pub n_circuits: usize,
    pub modality: Modality,
    pub cz: CzProtocol,
    pub master_seed: u64,
    pub backend: Backend,
}

impl QvConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(&n) = self.sizes.iter().find(|&&n| !(2..=9).contains(&n)) {
            return Err(Error::Config(format!("QV size {n} outside 2..=9")));
        }
        if self.n_circuits < 2 {
            return Err(Error::Config("QV needs at least 2 circuits per size".into()));
        }
        self.backend.params.validate()
    }
}

/// A sampled model circuit in its logical form and as laid out on the device.
#[derive(Debug, Clone)]
pub struct QvInstance {
    pub logical: Circuit,
    pub physical: Circuit,
    /// `measured[k]` is the device qubit holding logical qubit `k` at the end.
    pub measured: Vec<usize>,
}

/// Samples the width-`n`, depth-`n` model circuit from `rng`.
///
/// Each layer pairs a uniformly random permutation of the qubits and applies
/// a Haar SU(4) gate to each pair. On a reconfigurable device one movement
/// block precedes every layer after the first. On the static line each layer
/// is preceded by the adjacent SWAPs that bring its pairs next to each other
/// (the layout then persists); the initial placement is the first layer's.
pub fn qv_instance<R: rand::Rng + ?Sized>(n: usize, modality: Modality, rng: &mut R) -> QvInstance {
    let mut logical = Circuit::new(n);
    let mut physical = Circuit::new(n);
    let mut order: Option<Permutation> = None;
    for layer in 0..n {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let pairs: Vec<[usize; 2]> = perm.chunks_exact(2).map(|c| [c[0], c[1]]).collect();
        let gates: Vec<_> = pairs.iter().map(|&p| (haar_su4(rng), p)).collect();
        for (u, [a, b]) in &gates {
            logical.gate(AbstractGate::Su4(u.clone(), [*a, *b]));
        }
        match modality {
            Modality::Reconfigurable { .. } => {
                if layer > 0 {
                    physical.move_marker();
                }
                for (u, p) in gates {
                    physical.gate(AbstractGate::Su4(u, p));
                }
            }
            Modality::Static => {
                let current = order.get_or_insert_with(|| pairing_layout(&Permutation::identity(n), &pairs));
                let layout = pairing_layout(current, &pairs);
                for p in route_static(current, &layout) {
                    physical.gate(AbstractGate::Swap([p, p + 1]));
                    current.swap_adjacent(p);
                }
                let pos = current.positions();
                for (u, [a, b]) in gates {
                    physical.gate(AbstractGate::Su4(u, [pos[a], pos[b]]));
                }
            }
        }
    }
    let measured = order.map_or_else(|| (0..n).collect(), |o| o.positions());
    QvInstance { logical, physical, measured }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QvCircuitResult {
    pub size: usize,
    pub index: usize,
    pub seed: u64,
    pub h_ideal: f64,
    pub h_raw: f64,
    pub h_corrected: f64,
    pub p_loss: f64,
    /// Microseconds.
    pub wall_clock: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QvResult {
    pub circuits: Vec<QvCircuitResult>,
    pub summaries: Vec<SizeSummary>,
    pub vq_raw: u64,
    pub vq_corrected: u64,
}

/// Heavy-output criterion: the mean less two standard errors exceeds 2/3.
fn passes(xs: &[f64]) -> bool {
    mean(xs) - 2.0 * sem(xs) > 2.0 / 3.0
}

/// `2^n` for the largest `n` such that every run size up to `n` passes.
fn quantum_volume(summaries: &[SizeSummary], pass: impl Fn(&SizeSummary) -> bool) -> u64 {
    let mut sorted: Vec<&SizeSummary> = summaries.iter().collect();
    sorted.sort_by_key(|s| s.size);
    let mut best = 0;
    for s in sorted {
        if !pass(s) {
            break;
        }
        best = s.size;
    }
    1u64 << best
}

fn run_circuit(cfg: &QvConfig, n: usize, index: usize) -> Result<QvCircuitResult> {
    let seed = child_seed(cfg.master_seed, ((n as u64) << 32) | index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = qv_instance(n, cfg.modality, &mut rng);
    let heavy = qv_heavy_set(&run_ideal(&inst.logical)?);
    let params = &cfg.backend.params;
    let physical = consolidate_blocks(&inst.physical)?;
    let lowered = lower(&physical, LoweringScheme { cz: cfg.cz, native_ccz: true }, params)?;
    let sc = schedule(&lowered, n, cfg.modality, params)?;
    let res = execute_with_model(&sc, params, cfg.backend.model)?;
    let dist = res.rho_final.outcome_distribution(&inst.measured)?;
    let h_raw = heavy.mass(&dist);
    let trace = res.rho_final.trace();
    Ok(QvCircuitResult {
        size: n,
        index,
        seed,
        h_ideal: heavy.h_ideal,
        h_raw,
        h_corrected: post_select(h_raw, trace),
        p_loss: res.p_loss,
        wall_clock: res.wall_clock_total,
    })
}

/// Runs every size in `cfg.sizes` with `cfg.n_circuits` circuits each, in
/// parallel on the current rayon pool. Each circuit's randomness depends only
/// on the master seed, its size and its index.
pub fn run_qv(cfg: &QvConfig) -> Result<QvResult> {
    cfg.validate()?;
    let items: Vec<(usize, usize)> =
        cfg.sizes.iter().flat_map(|&n| (0..cfg.n_circuits).map(move |c| (n, c))).collect();
    let circuits = items
        .par_iter()
        .map(|&(n, c)| run_circuit(cfg, n, c))
        .collect::<Result<Vec<_>>>()?;
    let summaries: Vec<SizeSummary> = cfg
        .sizes
        .iter()
        .map(|&n| {
            let rows: Vec<&QvCircuitResult> = circuits.iter().filter(|r| r.size == n).collect();
            let raw: Vec<f64> = rows.iter().map(|r| r.h_raw).collect();
            let corrected: Vec<f64> = rows.iter().map(|r| r.h_corrected).collect();
            let loss: Vec<f64> = rows.iter().map(|r| r.p_loss).collect();
            let mut s = SizeSummary::from_items(n, &raw, &corrected, &loss);
            s.pass_raw = Some(passes(&raw));
            s.pass_corrected = Some(passes(&corrected));
            s
        })
        .collect();
    Ok(QvResult {
        vq_raw: quantum_volume(&summaries, |s| s.pass_raw == Some(true)),
        vq_corrected: quantum_volume(&summaries, |s| s.pass_corrected == Some(true)),
        circuits,
        summaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(p: &[f64]) -> OutcomeDistribution {
        let k = p.len().trailing_zeros() as usize;
        OutcomeDistribution::new((0..k).collect(), p.to_vec())
    }

    #[test]
    fn heavy_set_examples() {
        let h = qv_heavy_set(&dist(&[0.4, 0.3, 0.2, 0.1]));
        assert!((h.median - 0.25).abs() < 1e-15);
        assert_eq!(h.outcomes, vec![0, 1]);
        assert!((h.h_ideal - 0.7).abs() < 1e-15);
        let h = qv_heavy_set(&dist(&[0.25; 4]));
        assert!(h.outcomes.is_empty());
        let h = qv_heavy_set(&dist(&[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(h.outcomes, vec![0]);
        assert_eq!(h.h_ideal, 1.0);
    }

    #[test]
    fn volume_stops_at_first_failure() {
        let mk = |size, pass| SizeSummary { pass_raw: Some(pass), ..SizeSummary::from_items(size, &[0.0], &[0.0], &[0.0]) };
        let s = vec![mk(2, true), mk(3, true), mk(4, false), mk(5, true)];
        assert_eq!(quantum_volume(&s, |s| s.pass_raw == Some(true)), 8);
        assert_eq!(quantum_volume(&s[2..], |s| s.pass_raw == Some(true)), 1);
    }

    #[test]
    fn static_instances_are_routed_equivalents() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in [3, 4, 5] {
            let inst = qv_instance(n, Modality::Static, &mut rng);
            let ideal = run_ideal(&inst.logical).unwrap();
            let mut psi = crate::state::PureState::zero(n).unwrap();
            for i in inst.physical.instructions() {
                if let crate::transpile::Instruction::Gate(g) = i {
                    psi.apply_gate(g).unwrap();
                }
            }
            let routed = psi.outcome_distribution(&inst.measured).unwrap();
            for (a, b) in ideal.probabilities().iter().zip(routed.probabilities()) {
                assert!((a - b).abs() < 1e-12);
            }
            for instr in inst.physical.instructions() {
                if let crate::transpile::Instruction::Gate(g) = instr {
                    if g.targets().len() == 2 {
                        assert_eq!(g.targets()[0].abs_diff(g.targets()[1]), 1);
                    }
                }
            }
        }
    }
}
