//! Brute-force full-register matrices, used as verification oracles.

use super::{AbstractGate, Circuit, Instruction};
use crate::error::Result;
use crate::gates::{GateModel, NativeOp};
use crate::linalg::CMatrix;
use crate::state::PureState;

fn column_by_column(n: usize, mut evolve: impl FnMut(&mut PureState) -> Result<()>) -> Result<CMatrix> {
    let dim = 1usize << n;
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut psi = PureState::zero(n)?;
        psi.set_basis(col);
        evolve(&mut psi)?;
        out.column_mut(col).copy_from_slice(psi.amplitudes());
    }
    Ok(out)
}

/// Full `2^n x 2^n` unitary of an abstract circuit; movement markers and
/// barriers act as identity.
pub fn abstract_unitary(circuit: &Circuit) -> Result<CMatrix> {
    let gates: Vec<&AbstractGate> = circuit
        .instructions()
        .iter()
        .filter_map(|i| match i {
            Instruction::Gate(g) => Some(g),
            _ => None,
        })
        .collect();
    column_by_column(circuit.n_qubits(), |psi| gates.iter().try_for_each(|g| psi.apply_gate(g)))
}

/// Full `2^n x 2^n` operator of a native sequence, with entangling gates
/// taken from `model`. The result is not unitary under [`GateModel::Native`].
pub fn native_unitary(ops: &[NativeOp], n_qubits: usize, model: GateModel) -> Result<CMatrix> {
    let mats: Vec<(CMatrix, &[usize])> = ops
        .iter()
        .filter_map(|op| op.matrix_for(model).map(|m| (m, op.targets())))
        .collect();
    for (_, t) in &mats {
        crate::state::check_targets(n_qubits, t)?;
    }
    column_by_column(n_qubits, |psi| {
        for (m, t) in &mats {
            psi.apply_matrix_unchecked(m, t);
        }
        Ok(())
    })
}
