use num_complex::Complex64;

use super::{check_register_size, check_targets, extract_bits, target_offsets, OutcomeDistribution};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};
use crate::transpile::{AbstractGate, Circuit, Instruction};

/// State vector used for ideal, error-free reference runs.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_register_size(n_qubits)?;
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[0] = ONE;
        Ok(PureState { n_qubits, amplitudes })
    }

    /// Resets to the computational basis state `index`.
    pub fn set_basis(&mut self, index: usize) {
        self.amplitudes.fill(ZERO);
        self.amplitudes[index] = ONE;
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies a unitary on `targets`; non-unitary matrices are rejected.
    pub fn apply_unitary(&mut self, m: &CMatrix, targets: &[usize]) -> Result<()> {
        check_targets(self.n_qubits, targets)?;
        let d = 1usize << targets.len();
        if m.shape() != (d, d) {
            return Err(Error::Usage(format!(
                "operator is {}x{} but {} targets need {d}x{d}",
                m.nrows(),
                m.ncols(),
                targets.len()
            )));
        }
        if !linalg::is_unitary(m, 1e-10) {
            return Err(Error::Usage("non-unitary gate in ideal simulation".into()));
        }
        self.apply_matrix_unchecked(m, targets);
        Ok(())
    }

    pub(crate) fn apply_matrix_unchecked(&mut self, m: &CMatrix, targets: &[usize]) {
        let offsets = target_offsets(self.n_qubits, targets);
        let tmask: usize = offsets.iter().fold(0, |a, &o| a | o);
        let sub = offsets.len();
        let mut buf = vec![ZERO; sub];
        for base in (0..self.amplitudes.len()).filter(|i| i & tmask == 0) {
            for (b, &o) in buf.iter_mut().zip(&offsets) {
                *b = self.amplitudes[base + o];
            }
            for (r, &o) in offsets.iter().enumerate() {
                self.amplitudes[base + o] = (0..sub).map(|c| m[(r, c)] * buf[c]).sum();
            }
        }
    }

    /// Multi-controlled Z: phase -1 on the all-ones configuration of `targets`.
    pub fn apply_phase_flip(&mut self, targets: &[usize]) -> Result<()> {
        check_targets(self.n_qubits, targets)?;
        let all = (1usize << targets.len()) - 1;
        for i in 0..self.amplitudes.len() {
            if extract_bits(self.n_qubits, i, targets) == all {
                self.amplitudes[i] = -self.amplitudes[i];
            }
        }
        Ok(())
    }

    pub fn outcome_distribution(&self, measured: &[usize]) -> Result<OutcomeDistribution> {
        check_targets(self.n_qubits, measured)?;
        let mut probs = vec![0.0; 1 << measured.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            probs[extract_bits(self.n_qubits, i, measured)] += a.norm_sqr();
        }
        Ok(OutcomeDistribution::new(measured.to_vec(), probs))
    }

    pub fn apply_gate(&mut self, gate: &AbstractGate) -> Result<()> {
        match gate {
            AbstractGate::CkZ(qubits) => self.apply_phase_flip(qubits),
            _ => self.apply_unitary(&gate.matrix(), gate.targets()),
        }
    }
}

/// Error-free pure-state simulation of an abstract circuit from `|0...0>`,
/// returning the distribution over all qubits. Movement markers are no-ops.
pub fn run_ideal(circuit: &Circuit) -> Result<OutcomeDistribution> {
    let all: Vec<usize> = (0..circuit.n_qubits()).collect();
    run_ideal_on(circuit, &all)
}

/// [`run_ideal`] marginalized onto `measured`.
pub fn run_ideal_on(circuit: &Circuit, measured: &[usize]) -> Result<OutcomeDistribution> {
    let mut psi = PureState::zero(circuit.n_qubits())?;
    for instr in circuit.instructions() {
        if let Instruction::Gate(g) = instr {
            psi.apply_gate(g)?;
        }
    }
    psi.outcome_distribution(measured)
}
