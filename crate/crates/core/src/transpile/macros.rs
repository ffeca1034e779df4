//! Compiled multi-qubit macros built from CZ and CCZ.

use std::f64::consts::FRAC_PI_4;

use super::{AbstractGate, Instruction};
use crate::error::{Error, Result};

/// How Toffoli (and CCZ) stages are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToffoliScheme {
    /// One native three-qubit CCZ per Toffoli.
    Ccz,
    /// Six CNOTs plus virtual T rotations per Toffoli.
    SixCnot,
}

/// CNOT as a Hadamard-conjugated CZ.
pub fn macro_cnot(control: usize, target: usize) -> Vec<AbstractGate> {
    use AbstractGate::*;
    vec![H(target), Cz([control, target]), H(target)]
}

/// SWAP as three alternating CNOTs (three CZs).
pub fn macro_swap(a: usize, b: usize) -> Vec<AbstractGate> {
    let mut out = macro_cnot(a, b);
    out.extend(macro_cnot(b, a));
    out.extend(macro_cnot(a, b));
    out
}

/// CCZ from six CNOTs with T and T-dagger realized as z rotations.
pub fn ccz_expansion(a: usize, b: usize, c: usize) -> Vec<AbstractGate> {
    use AbstractGate::Rz;
    let t = FRAC_PI_4;
    let mut out = Vec::with_capacity(24);
    out.extend(macro_cnot(b, c));
    out.push(Rz(-t, c));
    out.extend(macro_cnot(a, c));
    out.push(Rz(t, c));
    out.extend(macro_cnot(b, c));
    out.push(Rz(-t, c));
    out.extend(macro_cnot(a, c));
    out.push(Rz(t, b));
    out.push(Rz(t, c));
    out.extend(macro_cnot(a, b));
    out.push(Rz(t, a));
    out.push(Rz(-t, b));
    out.extend(macro_cnot(a, b));
    out
}

/// Toffoli with controls `a`, `b` onto `target`.
pub fn macro_toffoli(a: usize, b: usize, target: usize, scheme: ToffoliScheme) -> Vec<AbstractGate> {
    let mut out = vec![AbstractGate::H(target)];
    match scheme {
        ToffoliScheme::Ccz => out.push(AbstractGate::Ccz([a, b, target])),
        ToffoliScheme::SixCnot => out.extend(ccz_expansion(a, b, target)),
    }
    out.push(AbstractGate::H(target));
    out
}

/// Six-controlled Z on `data` using three clean ancillas.
///
/// Three Toffolis compute pairwise ANDs of the data qubits into the
/// ancillas, a CCZ on the ancillas applies the phase, and the Toffolis are
/// undone. One movement block precedes each of the three CCZ-class stages.
/// Ancillas must start in `|0>`; the result is unspecified otherwise.
pub fn multi_controlled_z(
    data: &[usize],
    ancillas: &[usize],
    scheme: ToffoliScheme,
) -> Result<Vec<Instruction>> {
    if data.len() != 6 || ancillas.len() != 3 {
        return Err(Error::Usage(format!(
            "C5Z macro needs 6 data qubits and 3 ancillas, got {} and {}",
            data.len(),
            ancillas.len()
        )));
    }
    let compute = |out: &mut Vec<Instruction>| {
        out.push(Instruction::Move);
        for (pair, &anc) in data.chunks(2).zip(ancillas) {
            out.extend(macro_toffoli(pair[0], pair[1], anc, scheme).into_iter().map(Instruction::Gate));
        }
    };
    let mut out = Vec::new();
    compute(&mut out);
    out.push(Instruction::Move);
    let center = match scheme {
        ToffoliScheme::Ccz => vec![AbstractGate::Ccz([ancillas[0], ancillas[1], ancillas[2]])],
        ToffoliScheme::SixCnot => ccz_expansion(ancillas[0], ancillas[1], ancillas[2]),
    };
    out.extend(center.into_iter().map(Instruction::Gate));
    compute(&mut out);
    Ok(out)
}
