use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{
    check_register_size, check_targets, extract_bits, qubit_mask, target_offsets,
    OutcomeDistribution, PureState, Superop1,
};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};

/// Slack allowed on the spectral norm of an applied operator.
const NORM_TOLERANCE: f64 = 1e-9;
/// Slack allowed on `sum K^dagger K <= I` for channels.
const COMPLETENESS_TOLERANCE: f64 = 1e-10;
/// Smallest trace that can still be renormalized.
const MIN_TRACE: f64 = 1e-9;

/// Dense, possibly sub-normalized density matrix of up to ten qubits.
///
/// Loss from the computational basis is carried implicitly: the trace starts
/// at one and only ever decreases, and `1 - trace` is the accumulated loss
/// probability.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    dim: usize,
    /// Row-major `dim x dim`.
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// `|0...0><0...0|`.
    pub fn ground(n_qubits: usize) -> Result<Self> {
        Self::init_state(n_qubits, 0.0)
    }

    /// Product of per-qubit mixtures `diag(1 - eps_init, eps_init)`: each
    /// qubit is independently mis-prepared in `|1>` with probability `eps_init`.
    pub fn init_state(n_qubits: usize, eps_init: f64) -> Result<Self> {
        check_register_size(n_qubits)?;
        if !(0.0..1.0).contains(&eps_init) {
            return Err(Error::Config(format!(
                "state preparation error {eps_init} outside [0, 1)"
            )));
        }
        let dim = 1usize << n_qubits;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            let ones = i.count_ones() as i32;
            let p = eps_init.powi(ones) * (1.0 - eps_init).powi(n_qubits as i32 - ones);
            data[i * dim + i] = Complex64::new(p, 0.0);
        }
        Ok(DensityMatrix { n_qubits, dim, data })
    }

    pub fn from_pure(state: &PureState) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut data = vec![ZERO; dim * dim];
        for (i, a) in amps.iter().enumerate() {
            for (j, b) in amps.iter().enumerate() {
                data[i * dim + j] = a * b.conj();
            }
        }
        DensityMatrix { n_qubits: state.n_qubits(), dim, data }
    }

    /// Wraps a row-major matrix after checking shape, Hermiticity and trace.
    pub fn from_row_major(n_qubits: usize, data: Vec<Complex64>) -> Result<Self> {
        check_register_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if data.len() != dim * dim {
            return Err(Error::Usage(format!(
                "expected {} entries for {n_qubits} qubits, got {}",
                dim * dim,
                data.len()
            )));
        }
        let rho = DensityMatrix { n_qubits, dim, data };
        let herm = rho.hermiticity_error();
        if herm > 1e-12 {
            return Err(Error::Usage(format!("matrix is not Hermitian (error {herm:e})")));
        }
        let tr = rho.trace();
        if !(tr > 0.0 && tr <= 1.0 + 1e-12) {
            return Err(Error::Usage(format!("trace {tr} outside (0, 1]")));
        }
        Ok(rho)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i].re).sum()
    }

    /// `1 - trace`, clamped at zero against rounding.
    pub fn loss_probability(&self) -> f64 {
        (1.0 - self.trace()).max(0.0)
    }

    /// `rho / trace(rho)`.
    pub fn renormalized(&self) -> Result<Self> {
        let tr = self.trace();
        if tr <= MIN_TRACE {
            return Err(Error::DegenerateState(tr));
        }
        let inv = 1.0 / tr;
        Ok(DensityMatrix {
            n_qubits: self.n_qubits,
            dim: self.dim,
            data: self.data.iter().map(|z| z * inv).collect(),
        })
    }

    /// `rho <- (M on targets) rho (M on targets)^dagger`.
    ///
    /// `M` may be non-unitary but must not have spectral norm above one,
    /// otherwise the trace could grow.
    pub fn apply_operator(&mut self, m: &CMatrix, targets: &[usize]) -> Result<()> {
        check_targets(self.n_qubits, targets)?;
        check_operator_shape(m, targets.len())?;
        let norm = linalg::operator_norm(m);
        if norm > 1.0 + NORM_TOLERANCE {
            return Err(Error::Unphysical(format!(
                "operator norm {norm} exceeds 1; the trace would grow"
            )));
        }
        if linalg::is_diagonal(m) {
            let diag: Vec<Complex64> = (0..m.nrows()).map(|i| m[(i, i)]).collect();
            self.apply_diagonal(&diag, targets);
        } else if targets.len() == 1 {
            self.apply_superop(&Superop1::from_operator(m), targets[0]);
        } else {
            self.apply_dense(m, targets);
        }
        debug_assert!(self.hermiticity_error() < 1e-12);
        Ok(())
    }

    /// `rho <- sum_j K_j rho K_j^dagger` with the Kraus set acting on `targets`.
    pub fn apply_channel(&mut self, kraus: &[CMatrix], targets: &[usize]) -> Result<()> {
        check_targets(self.n_qubits, targets)?;
        if kraus.is_empty() {
            return Err(Error::Usage("empty Kraus set".into()));
        }
        let k = targets.len();
        for op in kraus {
            check_operator_shape(op, k)?;
        }
        let d = 1usize << k;
        let completeness = kraus.iter().fold(CMatrix::zeros(d, d), |acc, op| acc + op.adjoint() * op);
        let top = linalg::max_hermitian_eigenvalue(&completeness);
        if top > 1.0 + COMPLETENESS_TOLERANCE {
            return Err(Error::Unphysical(format!(
                "Kraus set is trace increasing (largest eigenvalue of sum K^dagger K is {top})"
            )));
        }
        if k == 1 {
            self.apply_superop(&Superop1::from_kraus(kraus), targets[0]);
        } else {
            let original = std::mem::replace(&mut self.data, vec![ZERO; self.dim * self.dim]);
            for op in kraus {
                let mut branch = DensityMatrix {
                    n_qubits: self.n_qubits,
                    dim: self.dim,
                    data: original.clone(),
                };
                branch.apply_dense(op, targets);
                for (acc, z) in self.data.iter_mut().zip(branch.data) {
                    *acc += z;
                }
            }
        }
        debug_assert!(self.hermiticity_error() < 1e-12);
        Ok(())
    }

    /// Probabilities of the computational-basis outcomes of `measured`, with
    /// every other qubit traced out. Not renormalized: the entries sum to the
    /// trace of the state.
    pub fn outcome_distribution(&self, measured: &[usize]) -> Result<OutcomeDistribution> {
        check_targets(self.n_qubits, measured)?;
        let mut probs = vec![0.0; 1 << measured.len()];
        for i in 0..self.dim {
            probs[extract_bits(self.n_qubits, i, measured)] += self.data[i * self.dim + i].re;
        }
        Ok(OutcomeDistribution::new(measured.to_vec(), probs))
    }

    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.data[i * d + j] - self.data[j * d + i].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue. Cubic in the dimension; intended for tests.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = DMatrix::from_row_slice(self.dim, self.dim, &self.data);
        m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// One-pass application of a single-qubit superoperator.
    pub(crate) fn apply_superop(&mut self, s: &Superop1, qubit: usize) {
        let d = self.dim;
        let m = qubit_mask(self.n_qubits, qubit);
        for i0 in (0..d).filter(|i| i & m == 0) {
            let i1 = i0 | m;
            let (lo, hi) = self.data.split_at_mut(i1 * d);
            let r0 = &mut lo[i0 * d..i0 * d + d];
            let r1 = &mut hi[..d];
            for jb in (0..d).step_by(2 * m) {
                for j0 in jb..jb + m {
                    let j1 = j0 + m;
                    let out = s.apply([r0[j0], r0[j1], r1[j0], r1[j1]]);
                    r0[j0] = out[0];
                    r0[j1] = out[1];
                    r1[j0] = out[2];
                    r1[j1] = out[3];
                }
            }
        }
    }

    /// Diagonal operator on `targets`, given by its diagonal.
    pub(crate) fn apply_diagonal(&mut self, diag: &[Complex64], targets: &[usize]) {
        let factors: Vec<Complex64> = (0..self.dim)
            .map(|i| diag[extract_bits(self.n_qubits, i, targets)])
            .collect();
        self.apply_row_factors(&factors);
    }

    /// `rho_ij <- f_i conj(f_j) rho_ij` for a full-register diagonal `f`.
    pub(crate) fn apply_row_factors(&mut self, factors: &[Complex64]) {
        let d = self.dim;
        debug_assert_eq!(factors.len(), d);
        let conj: Vec<Complex64> = factors.iter().map(|z| z.conj()).collect();
        for (row, &fi) in self.data.chunks_exact_mut(d).zip(factors) {
            if fi == ONE {
                for (z, g) in row.iter_mut().zip(&conj) {
                    if *g != ONE {
                        *z *= g;
                    }
                }
            } else {
                for (z, g) in row.iter_mut().zip(&conj) {
                    *z *= fi * g;
                }
            }
        }
    }

    /// General `k`-qubit operator: left multiplication over row groups, then
    /// right multiplication by `M^dagger` over column groups.
    fn apply_dense(&mut self, m: &CMatrix, targets: &[usize]) {
        let d = self.dim;
        let offsets = target_offsets(self.n_qubits, targets);
        let tmask: usize = offsets.iter().fold(0, |a, &o| a | o);
        let sub = offsets.len();
        let mut buf = vec![ZERO; sub];
        let bases: Vec<usize> = (0..d).filter(|i| i & tmask == 0).collect();
        for j in 0..d {
            for &base in &bases {
                for (b, &o) in buf.iter_mut().zip(&offsets) {
                    *b = self.data[(base + o) * d + j];
                }
                for (r, &o) in offsets.iter().enumerate() {
                    self.data[(base + o) * d + j] = (0..sub).map(|c| m[(r, c)] * buf[c]).sum();
                }
            }
        }
        for i in 0..d {
            let row = &mut self.data[i * d..(i + 1) * d];
            for &base in &bases {
                for (b, &o) in buf.iter_mut().zip(&offsets) {
                    *b = row[base + o];
                }
                for (r, &o) in offsets.iter().enumerate() {
                    row[base + o] = (0..sub).map(|c| m[(r, c)].conj() * buf[c]).sum();
                }
            }
        }
    }
}

fn check_operator_shape(m: &CMatrix, k: usize) -> Result<()> {
    let d = 1usize << k;
    if m.shape() != (d, d) {
        return Err(Error::Usage(format!(
            "operator is {}x{} but {k} targets need {d}x{d}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}
