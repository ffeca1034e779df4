use std::f64::consts::{PI, TAU};

use crate::gates::{rx_matrix, ry_matrix};
use crate::linalg::{c64, from_rows, CMatrix};

/// `U = e^{i phase} Ry(alpha) Rx(beta) Ry(gamma)`; applied in time order
/// `Ry(gamma)`, `Rx(beta)`, `Ry(alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub fn matrix(&self) -> CMatrix {
        ry_matrix(self.alpha) * rx_matrix(self.beta) * ry_matrix(self.gamma)
    }
}

/// Wraps into `(-pi, pi]`. Shifting a rotation angle by `2 pi` only flips the
/// global sign.
fn canonical(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t <= -PI {
        t += TAU;
    } else if t > PI {
        t -= TAU;
    }
    t
}

/// Clifford `C` with `C Z C^dag = Y` and `C Y C^dag = X`: rotation by
/// `-2 pi / 3` about `(1, 1, 1)`, i.e. `(I + i (X + Y + Z)) / 2`.
fn axis_permutation() -> CMatrix {
    let h = 0.5;
    from_rows(&[&[c64(h, h), c64(h, h)], &[c64(-h, h), c64(h, -h)]])
}

/// Y-X-Y Euler angles of a single-qubit unitary, global phase dropped,
/// each angle in `(-pi, pi]`.
pub fn euler_yxy(u: &CMatrix) -> EulerAngles {
    assert_eq!(u.shape(), (2, 2), "single-qubit unitary expected");
    let c = axis_permutation();
    // Z-Y-Z angles of C^dag U C are the Y-X-Y angles of U.
    let w = c.adjoint() * u * &c;
    let det = w.determinant();
    let w = w / det.sqrt();
    let (a, b, d) = (w[(0, 0)], w[(1, 0)], w[(1, 1)]);
    let theta = 2.0 * b.norm().atan2(a.norm());
    let (sum, diff) = if b.norm() < 1e-14 {
        (2.0 * d.arg(), 0.0)
    } else if a.norm() < 1e-14 {
        (0.0, 2.0 * b.arg())
    } else {
        (2.0 * d.arg(), 2.0 * b.arg())
    };
    EulerAngles {
        alpha: canonical((sum + diff) / 2.0),
        beta: canonical(theta),
        gamma: canonical((sum - diff) / 2.0),
    }
}
