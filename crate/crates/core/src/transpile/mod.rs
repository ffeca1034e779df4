//! Lowering of abstract circuits to the native gate set and device
//! connectivity.

mod consolidate;
mod euler;
mod haar;
mod kak;
mod lower;
mod macros;
mod route;
mod unitary;

pub use consolidate::consolidate_blocks;
pub use euler::{euler_yxy, EulerAngles};
pub use haar::{haar_su4, haar_unitary};
pub use kak::{decompose_su4, kak_decompose, su4_expansion, KakDecomposition};
pub use lower::{lower, LoweringScheme, NativeInstr};
pub use macros::{
    ccz_expansion, macro_cnot, macro_swap, macro_toffoli, multi_controlled_z, ToffoliScheme,
};
pub use route::{pairing_layout, route_static, Permutation};
pub use unitary::{abstract_unitary, native_unitary};

use crate::error::{Error, Result};
use crate::gates::{rx_matrix, ry_matrix, rz_matrix};
use crate::linalg::{self, diagonal, from_rows, CMatrix, ONE, ZERO};

/// Hardware-independent gate.
#[derive(Debug, Clone, PartialEq)]
pub enum AbstractGate {
    /// Arbitrary two-qubit unitary; the first target is the more significant
    /// qubit of the matrix.
    Su4(CMatrix, [usize; 2]),
    /// Arbitrary single-qubit unitary.
    U1(CMatrix, usize),
    H(usize),
    X(usize),
    Rx(f64, usize),
    Ry(f64, usize),
    Rz(f64, usize),
    Cz([usize; 2]),
    /// Control, target.
    Cnot([usize; 2]),
    Swap([usize; 2]),
    Ccz([usize; 3]),
    /// Phase -1 on the all-ones configuration of the listed qubits.
    CkZ(Vec<usize>),
}

impl AbstractGate {
    /// Validated SU(4) gate: unitary within 1e-12 and determinant one within 1e-10.
    pub fn su4(m: CMatrix, a: usize, b: usize) -> Result<Self> {
        if m.shape() != (4, 4) || !linalg::is_unitary(&m, 1e-12) {
            return Err(Error::Usage("SU(4) gate must be a 4x4 unitary".into()));
        }
        let det = m.determinant();
        if (det - ONE).norm() > 1e-10 {
            return Err(Error::Usage(format!("SU(4) gate has determinant {det}")));
        }
        Ok(AbstractGate::Su4(m, [a, b]))
    }

    pub fn targets(&self) -> &[usize] {
        use AbstractGate::*;
        match self {
            Su4(_, t) => t,
            U1(_, q) | H(q) | X(q) | Rx(_, q) | Ry(_, q) | Rz(_, q) => std::slice::from_ref(q),
            Cz(t) | Cnot(t) | Swap(t) => t,
            Ccz(t) => t,
            CkZ(qs) => qs,
        }
    }

    pub fn matrix(&self) -> CMatrix {
        use AbstractGate::*;
        let h = linalg::hadamard;
        match self {
            Su4(m, _) | U1(m, _) => m.clone(),
            H(_) => h(),
            X(_) => linalg::pauli_x(),
            Rx(t, _) => rx_matrix(*t),
            Ry(t, _) => ry_matrix(*t),
            Rz(t, _) => rz_matrix(*t),
            Cz(..) => diagonal(&[ONE, ONE, ONE, -ONE]),
            Cnot(..) => from_rows(&[
                &[ONE, ZERO, ZERO, ZERO],
                &[ZERO, ONE, ZERO, ZERO],
                &[ZERO, ZERO, ZERO, ONE],
                &[ZERO, ZERO, ONE, ZERO],
            ]),
            Swap(..) => from_rows(&[
                &[ONE, ZERO, ZERO, ZERO],
                &[ZERO, ZERO, ONE, ZERO],
                &[ZERO, ONE, ZERO, ZERO],
                &[ZERO, ZERO, ZERO, ONE],
            ]),
            Ccz(..) => {
                let mut d = vec![ONE; 8];
                d[7] = -ONE;
                diagonal(&d)
            }
            CkZ(qs) => {
                let mut d = vec![ONE; 1 << qs.len()];
                *d.last_mut().unwrap() = -ONE;
                diagonal(&d)
            }
        }
    }
}

/// One step of an abstract circuit.
#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    Gate(AbstractGate),
    /// Atom rearrangement between gate stages (reconfigurable devices).
    Move,
    /// Scheduling fence: nothing after it may be placed in an earlier layer.
    Barrier,
}

/// Abstract circuit on a fixed register, with movement markers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n_qubits: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit { n_qubits, instructions: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn gate(&mut self, g: AbstractGate) -> &mut Self {
        self.instructions.push(Instruction::Gate(g));
        self
    }

    pub fn gates(&mut self, gs: impl IntoIterator<Item = AbstractGate>) -> &mut Self {
        self.instructions.extend(gs.into_iter().map(Instruction::Gate));
        self
    }

    pub fn extend(&mut self, instrs: impl IntoIterator<Item = Instruction>) -> &mut Self {
        self.instructions.extend(instrs);
        self
    }

    pub fn move_marker(&mut self) -> &mut Self {
        self.instructions.push(Instruction::Move);
        self
    }

    pub fn barrier(&mut self) -> &mut Self {
        self.instructions.push(Instruction::Barrier);
        self
    }

    pub fn move_count(&self) -> usize {
        self.instructions.iter().filter(|i| matches!(i, Instruction::Move)).count()
    }

    pub fn count_gates(&self, pred: impl Fn(&AbstractGate) -> bool) -> usize {
        self.instructions
            .iter()
            .filter(|i| matches!(i, Instruction::Gate(g) if pred(g)))
            .count()
    }
}
