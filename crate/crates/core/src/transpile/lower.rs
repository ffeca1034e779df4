//! Lowering of abstract circuits to native operations.
//!
//! Single-qubit gates are accumulated per qubit and emitted lazily, just
//! before the next entangling gate on that qubit (or a barrier, or the end
//! of the circuit), as one Euler `Ry Rx Ry` triple. Diagonal accumulations
//! become a single virtual z rotation.

use super::{ccz_expansion, euler_yxy, macro_cnot, macro_swap, su4_expansion, AbstractGate, Circuit, Instruction};
use crate::error::{Error, Result};
use crate::gates::{Axis, CzProtocol, NativeOp};
use crate::linalg::{identity, pauli_x, pauli_z, CMatrix};
use crate::noise::DeviceParams;

const ANGLE_EPS: f64 = 1e-12;

/// Native entangling resources used for lowering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoweringScheme {
    pub cz: CzProtocol,
    /// Use the native CCZ for logical CCZ gates; otherwise expand to six CZs.
    pub native_ccz: bool,
}

/// Lowered instruction stream.
#[derive(Debug, Clone, PartialEq)]
pub enum NativeInstr {
    Op(NativeOp),
    /// Scheduling fence carried through from the abstract circuit.
    Barrier,
}

impl NativeInstr {
    pub fn op(&self) -> Option<&NativeOp> {
        match self {
            NativeInstr::Op(op) => Some(op),
            NativeInstr::Barrier => None,
        }
    }
}

struct Lowerer<'a> {
    scheme: LoweringScheme,
    params: &'a DeviceParams,
    pending: Vec<CMatrix>,
    out: Vec<NativeInstr>,
}

impl Lowerer<'_> {
    fn push_local(&mut self, m: &CMatrix, q: usize) {
        self.pending[q] = m * &self.pending[q];
    }

    fn flush(&mut self, q: usize) {
        let u = std::mem::replace(&mut self.pending[q], identity(2));
        let off = u[(0, 1)].norm().max(u[(1, 0)].norm());
        if off < ANGLE_EPS {
            let theta = (u[(1, 1)] / u[(0, 0)]).arg();
            if theta.abs() > ANGLE_EPS {
                self.out.push(NativeInstr::Op(NativeOp::rz_virtual(theta, q)));
            }
            return;
        }
        let e = euler_yxy(&u);
        for (axis, angle) in [(Axis::Y, e.gamma), (Axis::X, e.beta), (Axis::Y, e.alpha)] {
            if angle.abs() > ANGLE_EPS {
                self.out.push(NativeInstr::Op(NativeOp::rotation(axis, angle, q, self.params)));
            }
        }
    }

    fn flush_all(&mut self) {
        for q in 0..self.pending.len() {
            self.flush(q);
        }
    }

    fn check(&self, targets: &[usize]) -> Result<()> {
        crate::state::check_targets(self.pending.len(), targets)
    }

    fn gate(&mut self, g: &AbstractGate) -> Result<()> {
        use AbstractGate::*;
        self.check(g.targets())?;
        match g {
            U1(..) | H(_) | X(_) | Rx(..) | Ry(..) | Rz(..) => {
                self.push_local(&g.matrix(), g.targets()[0]);
            }
            Cz([a, b]) => {
                self.flush(*a);
                self.flush(*b);
                self.out.push(NativeInstr::Op(NativeOp::cz(self.scheme.cz, *a, *b, self.params)));
                if self.scheme.cz == CzProtocol::Arp {
                    // The ARP frame differs from CZ by Z on both qubits.
                    self.pending[*a] = pauli_z();
                    self.pending[*b] = pauli_z();
                }
            }
            Cnot([c, t]) => self.all(&macro_cnot(*c, *t))?,
            Swap([a, b]) => self.all(&macro_swap(*a, *b))?,
            Su4(m, [a, b]) => self.all(&su4_expansion(m, *a, *b)?)?,
            Ccz([a, b, c]) if self.scheme.native_ccz => {
                let x = pauli_x();
                for &q in &[*a, *b, *c] {
                    self.push_local(&x, q);
                    self.flush(q);
                }
                self.out.push(NativeInstr::Op(NativeOp::ccz(*a, *b, *c, self.params)));
                for &q in &[*a, *b, *c] {
                    self.pending[q] = x.clone();
                }
            }
            Ccz([a, b, c]) => self.all(&ccz_expansion(*a, *b, *c))?,
            CkZ(qs) => match qs.as_slice() {
                [] => {}
                [q] => self.push_local(&pauli_z(), *q),
                [a, b] => self.gate(&Cz([*a, *b]))?,
                [a, b, c] => self.gate(&Ccz([*a, *b, *c]))?,
                _ => {
                    return Err(Error::Usage(format!(
                        "{}-qubit controlled Z needs ancillas; expand it with multi_controlled_z",
                        qs.len()
                    )))
                }
            },
        }
        Ok(())
    }

    fn all(&mut self, gates: &[AbstractGate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.gate(g))
    }
}

/// Lowers `circuit` to native operations under `scheme`. Movement markers
/// become MOVE ops; barriers flush every pending rotation and are kept.
pub fn lower(circuit: &Circuit, scheme: LoweringScheme, params: &DeviceParams) -> Result<Vec<NativeInstr>> {
    let mut l = Lowerer { scheme, params, pending: vec![identity(2); circuit.n_qubits()], out: Vec::new() };
    for instr in circuit.instructions() {
        match instr {
            Instruction::Gate(g) => l.gate(g)?,
            Instruction::Move => l.out.push(NativeInstr::Op(NativeOp::move_block())),
            Instruction::Barrier => {
                l.flush_all();
                l.out.push(NativeInstr::Barrier);
            }
        }
    }
    l.flush_all();
    Ok(l.out)
}
