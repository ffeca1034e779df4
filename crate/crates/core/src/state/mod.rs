//! Dense state engines.
//!
//! Basis convention: qubit 0 is the most significant bit of a computational
//! basis index, so on three qubits `|q0 q1 q2> = |011>` is index 3.

mod density;
mod distribution;
mod pure;
mod superop;

pub use density::DensityMatrix;
pub use distribution::OutcomeDistribution;
pub use pure::{run_ideal, run_ideal_on, PureState};
pub use superop::Superop1;

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 10;

/// Bit mask of `qubit` inside a basis index of an `n_qubits` register.
#[inline]
pub(crate) fn qubit_mask(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}

pub(crate) fn check_register_size(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::Config(format!(
            "register size {n_qubits} outside supported range 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

pub(crate) fn check_targets(n_qubits: usize, targets: &[usize]) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::Usage("empty target list".into()));
    }
    for (k, &t) in targets.iter().enumerate() {
        if t >= n_qubits {
            return Err(Error::Usage(format!(
                "target qubit {t} out of range for a {n_qubits}-qubit register"
            )));
        }
        if targets[..k].contains(&t) {
            return Err(Error::Usage(format!("duplicate target qubit {t}")));
        }
    }
    Ok(())
}

/// Basis-index offsets of the `2^k` sub-states spanned by `targets`
/// (first target = most significant sub-index bit).
pub(crate) fn target_offsets(n_qubits: usize, targets: &[usize]) -> Vec<usize> {
    let k = targets.len();
    (0..1usize << k)
        .map(|s| {
            targets
                .iter()
                .enumerate()
                .filter(|(t, _)| s >> (k - 1 - t) & 1 == 1)
                .map(|(_, &q)| qubit_mask(n_qubits, q))
                .sum()
        })
        .collect()
}

/// Sub-index formed by reading the bits of `index` at `qubits`
/// (first listed qubit = most significant bit).
#[inline]
pub(crate) fn extract_bits(n_qubits: usize, index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | ((index >> (n_qubits - 1 - q)) & 1))
}
