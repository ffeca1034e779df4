//! Two-qubit synthesis through the Cartan (KAK) decomposition.
//!
//! Any `U` in U(4) factors as `(A1 x A2) exp(i(a XX + b YY + c ZZ)) (B1 x B2)`
//! up to global phase. The local factors become single-qubit unitaries and the
//! non-local core costs exactly three CNOTs (three CZs).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use super::AbstractGate;
use crate::error::{Error, Result};
use crate::gates::CzProtocol;
use crate::linalg::{c64, kron, pauli_x, pauli_y, pauli_z, CMatrix, ONE, ZERO};
use crate::noise::DeviceParams;

/// Factors of `U = phase * (A1 x A2) exp(i(a XX + b YY + c ZZ)) (B1 x B2)`.
#[derive(Debug, Clone)]
pub struct KakDecomposition {
    pub left: (CMatrix, CMatrix),
    pub coefficients: [f64; 3],
    pub right: (CMatrix, CMatrix),
}

impl KakDecomposition {
    /// `exp(i(a XX + b YY + c ZZ))`, computed through the magic basis where it
    /// is diagonal.
    pub fn canonical_gate(&self) -> CMatrix {
        let b = magic_basis();
        let signs = magic_signs();
        let [a, bb, c] = self.coefficients;
        let d: Vec<Complex64> = (0..4)
            .map(|k| Complex64::from_polar(1.0, a * signs[k][0] + bb * signs[k][1] + c * signs[k][2]))
            .collect();
        &b * crate::linalg::diagonal(&d) * b.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        kron(&self.left.0, &self.left.1) * self.canonical_gate() * kron(&self.right.0, &self.right.1)
    }
}

fn magic_basis() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (o, z, i) = (c64(h, 0.0), ZERO, c64(0.0, h));
    crate::linalg::from_rows(&[&[o, z, z, i], &[z, i, o, z], &[z, i, -o, z], &[o, z, z, -i]])
}

/// Eigenvalues of XX, YY, ZZ on each magic-basis vector.
fn magic_signs() -> [[f64; 3]; 4] {
    let b = magic_basis();
    let mut out = [[0.0; 3]; 4];
    for (p, pauli) in [pauli_x(), pauli_y(), pauli_z()].iter().enumerate() {
        let d = b.adjoint() * kron(pauli, pauli) * &b;
        for (k, row) in out.iter_mut().enumerate() {
            row[p] = d[(k, k)].re;
        }
    }
    out
}

/// Splits a 4x4 matrix known to be a tensor product into SU(2) factors.
fn factor_tensor(m: &CMatrix) -> (CMatrix, CMatrix) {
    let (idx, _) = m
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .expect("4x4 matrix");
    // nalgebra storage is column-major.
    let (row, col) = (idx % 4, idx / 4);
    let (k, l) = (row % 2, col % 2);
    let (i1, j1) = (row / 2, col / 2);
    let mut a = CMatrix::from_fn(2, 2, |r, s| m[(2 * r + k, 2 * s + l)]);
    let mut b = CMatrix::from_fn(2, 2, |r, s| m[(2 * i1 + r, 2 * j1 + s)]);
    a /= a.determinant().sqrt();
    b /= b.determinant().sqrt();
    (a, b)
}

/// Deterministic mixing weights for diagonalizing the real and imaginary
/// parts of the magic-basis Gram matrix simultaneously; later entries are
/// only tried if an earlier one leaves the matrix non-diagonal.
const MIXING_WEIGHTS: [f64; 6] = [0.618_033_988_7, 1.324_717_957_2, 0.276_393_202_2, 2.718_281_828, 0.141_421_356, 3.302_775_637_7];

pub fn kak_decompose(u: &CMatrix) -> Result<KakDecomposition> {
    if u.shape() != (4, 4) || !crate::linalg::is_unitary(u, 1e-9) {
        return Err(Error::Usage("KAK decomposition needs a 4x4 unitary".into()));
    }
    let u = u / u.determinant().powf(0.25);
    let magic = magic_basis();
    let ub = magic.adjoint() * &u * &magic;
    let gram = ub.transpose() * &ub;
    let re = gram.map(|z| z.re);
    let im = gram.map(|z| z.im);

    let mut found = None;
    for w in MIXING_WEIGHTS {
        let eig = (&re + &im * w).symmetric_eigen();
        let p = eig.eigenvectors;
        let pc = p.map(|x| c64(x, 0.0));
        let d = pc.transpose() * &gram * &pc;
        let off = (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .filter(|(r, c)| r != c)
            .map(|(r, c)| d[(r, c)].norm())
            .fold(0.0, f64::max);
        if off < 1e-9 {
            found = Some((p, d));
            break;
        }
    }
    let (mut p, d) = found.ok_or_else(|| {
        Error::Synthesis("could not simultaneously diagonalize the magic-basis Gram matrix".into())
    })?;
    if p.determinant() < 0.0 {
        p.column_mut(0).neg_mut();
    }
    let mut theta: Vec<f64> = (0..4).map(|k| d[(k, k)].arg() / 2.0).collect();
    let phase_sum: f64 = theta.iter().sum();
    if (Complex64::from_polar(1.0, phase_sum) - ONE).norm() > 1e-6 {
        theta[0] += std::f64::consts::PI;
    }
    let pc = p.map(|x| c64(x, 0.0));
    let inv_phases = crate::linalg::diagonal(
        &theta.iter().map(|&t| Complex64::from_polar(1.0, -t)).collect::<Vec<_>>(),
    );
    let k1 = &ub * &pc * inv_phases;
    let imag = k1.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > 1e-7 {
        return Err(Error::Synthesis(format!("left factor is not real orthogonal (imag {imag:e})")));
    }
    let k1 = k1.map(|z| c64(z.re, 0.0));
    let left = &magic * k1 * magic.adjoint();
    let right = &magic * pc.transpose() * magic.adjoint();

    let signs = magic_signs();
    let system = DMatrix::from_fn(4, 4, |r, c| if c < 3 { signs[r][c] } else { 1.0 });
    let rhs = DVector::from_column_slice(&theta);
    let sol = system
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Synthesis("singular magic-basis sign system".into()))?;

    Ok(KakDecomposition {
        left: factor_tensor(&left),
        coefficients: [sol[0], sol[1], sol[2]],
        right: factor_tensor(&right),
    })
}

/// Abstract expansion of a two-qubit unitary on `(qa, qb)` into single-qubit
/// unitaries and exactly three CNOTs.
pub fn su4_expansion(u: &CMatrix, qa: usize, qb: usize) -> Result<Vec<AbstractGate>> {
    use AbstractGate::*;
    let kak = kak_decompose(u)?;
    let [a, b, c] = kak.coefficients;
    Ok(vec![
        U1(kak.right.0.clone(), qa),
        U1(kak.right.1.clone(), qb),
        Rz(-FRAC_PI_2, qb),
        Cnot([qb, qa]),
        Rz(FRAC_PI_2 - 2.0 * c, qa),
        Ry(2.0 * a - FRAC_PI_2, qb),
        Cnot([qa, qb]),
        Ry(FRAC_PI_2 - 2.0 * b, qb),
        Cnot([qb, qa]),
        Rz(FRAC_PI_2, qa),
        U1(kak.left.0, qa),
        U1(kak.left.1, qb),
    ])
}

/// Native synthesis of a two-qubit unitary on qubits `(0, 1)`: three CZs of
/// the given protocol interleaved with physical x/y rotations.
pub fn decompose_su4(
    u: &CMatrix,
    protocol: CzProtocol,
    params: &DeviceParams,
) -> Result<Vec<crate::gates::NativeOp>> {
    let mut circuit = super::Circuit::new(2);
    circuit.gates(su4_expansion(u, 0, 1)?);
    let scheme = super::LoweringScheme { cz: protocol, native_ccz: false };
    Ok(super::lower(&circuit, scheme, params)?
        .into_iter()
        .filter_map(|i| match i {
            super::NativeInstr::Op(op) => Some(op),
            _ => None,
        })
        .collect())
}
