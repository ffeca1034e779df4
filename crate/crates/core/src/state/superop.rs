use num_complex::Complex64;

use crate::linalg::{CMatrix, ONE, ZERO};

/// Single-qubit superoperator acting on the 2x2 block
/// `(rho_00, rho_01, rho_10, rho_11)` of one qubit.
///
/// Several single-qubit maps on the same qubit compose into one of these, so
/// the executor can apply a run of rotations and idle periods in one pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superop1(pub [[Complex64; 4]; 4]);

impl Superop1 {
    pub fn identity() -> Self {
        let mut s = [[ZERO; 4]; 4];
        for (k, row) in s.iter_mut().enumerate() {
            row[k] = ONE;
        }
        Superop1(s)
    }

    /// `rho -> sum_j K_j rho K_j^dagger` for 2x2 Kraus operators.
    pub fn from_kraus(kraus: &[CMatrix]) -> Self {
        let mut s = [[ZERO; 4]; 4];
        for k in kraus {
            assert_eq!(k.shape(), (2, 2), "single-qubit Kraus operator expected");
            for a in 0..2 {
                for b in 0..2 {
                    for c in 0..2 {
                        for d in 0..2 {
                            s[2 * a + b][2 * c + d] += k[(a, c)] * k[(b, d)].conj();
                        }
                    }
                }
            }
        }
        Superop1(s)
    }

    /// `rho -> M rho M^dagger`.
    pub fn from_operator(m: &CMatrix) -> Self {
        Self::from_kraus(std::slice::from_ref(m))
    }

    /// The map "apply `self`, then `next`".
    pub fn then(&self, next: &Superop1) -> Superop1 {
        let mut out = [[ZERO; 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).map(|k| next.0[r][k] * self.0[k][c]).sum();
            }
        }
        Superop1(out)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    #[inline]
    pub(crate) fn apply(&self, v: [Complex64; 4]) -> [Complex64; 4] {
        let s = &self.0;
        [
            s[0][0] * v[0] + s[0][1] * v[1] + s[0][2] * v[2] + s[0][3] * v[3],
            s[1][0] * v[0] + s[1][1] * v[1] + s[1][2] * v[2] + s[1][3] * v[3],
            s[2][0] * v[0] + s[2][1] * v[1] + s[2][2] * v[2] + s[2][3] * v[3],
            s[3][0] * v[0] + s[3][1] * v[1] + s[3][2] * v[2] + s[3][3] * v[3],
        ]
    }
}
