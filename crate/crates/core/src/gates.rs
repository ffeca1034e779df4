//! Native gate set of the virtual device.
//!
//! Single-qubit x/y rotations are exact; z rotations are free frame updates.
//! The entangling gates are the fixed, non-unitary diagonal operators below:
//! moduli below one encode population lost from the computational basis, and
//! phases away from `0`/`pi` are blockade phase errors.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::{self, c64, diagonal, from_rows, polar_pi, CMatrix, ONE};
use crate::noise::DeviceParams;

/// Amplitude and phase (in units of pi) of the `|01>`, `|10>` entries of the
/// adiabatic-rapid-passage CZ.
pub const CZ_ARP_SINGLE: (f64, f64) = (0.9990, 0.9906);
/// `|11>` entry of the adiabatic-rapid-passage CZ.
pub const CZ_ARP_DOUBLE: (f64, f64) = (0.9986, 1.000);
/// `|01>`, `|10>` entries of the Levine-Pichler CZ.
pub const CZ_LP_SINGLE: (f64, f64) = (0.999320, -0.013);
/// `|11>` entry of the Levine-Pichler CZ.
pub const CZ_LP_DOUBLE: (f64, f64) = (0.999458, 0.985);
/// CCZ entries for Hamming weight 1, 2 and 3 (weight 0 is exactly 1).
pub const CCZ_ARP_BY_WEIGHT: [(f64, f64); 3] = [(0.9981, 0.9845), (0.9973, 0.9934), (0.9963, 0.9911)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NativeKind {
    Rx,
    Ry,
    RzVirtual,
    CzArp,
    CzLp,
    CczArp,
    Move,
    Init,
}

impl NativeKind {
    pub fn is_entangling(self) -> bool {
        matches!(self, NativeKind::CzArp | NativeKind::CzLp | NativeKind::CczArp)
    }

    pub fn is_single_qubit_gate(self) -> bool {
        matches!(self, NativeKind::Rx | NativeKind::Ry | NativeKind::RzVirtual)
    }

    pub fn is_gate(self) -> bool {
        self.is_entangling() || self.is_single_qubit_gate()
    }
}

/// Which CZ implementation the device uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CzProtocol {
    /// Adiabatic rapid passage: more amplitude loss, smaller phase error.
    Arp,
    /// Levine-Pichler: less loss, larger `|11>` phase error.
    Lp,
}

impl CzProtocol {
    pub fn kind(self) -> NativeKind {
        match self {
            CzProtocol::Arp => NativeKind::CzArp,
            CzProtocol::Lp => NativeKind::CzLp,
        }
    }
}

/// Selects between the device operators and their ideal unitary references.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateModel {
    #[default]
    Native,
    Ideal,
}

pub fn cz_arp_matrix() -> CMatrix {
    let s = polar_pi(CZ_ARP_SINGLE.0, CZ_ARP_SINGLE.1);
    diagonal(&[ONE, s, s, polar_pi(CZ_ARP_DOUBLE.0, CZ_ARP_DOUBLE.1)])
}

pub fn cz_lp_matrix() -> CMatrix {
    let s = polar_pi(CZ_LP_SINGLE.0, CZ_LP_SINGLE.1);
    diagonal(&[ONE, s, s, polar_pi(CZ_LP_DOUBLE.0, CZ_LP_DOUBLE.1)])
}

pub fn ccz_arp_matrix() -> CMatrix {
    let entries: Vec<_> = (0..8u32)
        .map(|i| match i.count_ones() {
            0 => ONE,
            w => {
                let (a, p) = CCZ_ARP_BY_WEIGHT[w as usize - 1];
                polar_pi(a, p)
            }
        })
        .collect();
    diagonal(&entries)
}

/// Ideal unitary each entangling operator approximates, in the frame its
/// phases are quoted in.
///
/// The ARP gates carry a phase near `pi` on every excited state, so they are
/// referenced to `diag(1,-1,-1,-1)` and `2|000><000| - I` rather than to the
/// textbook CZ/CCZ; the two frames differ by local Z (or, for CCZ, X
/// conjugation up to global phase).
pub fn ideal_reference(kind: NativeKind) -> Result<CMatrix> {
    let m = |v: &[f64]| diagonal(&v.iter().map(|&x| c64(x, 0.0)).collect::<Vec<_>>());
    match kind {
        NativeKind::CzLp => Ok(m(&[1.0, 1.0, 1.0, -1.0])),
        NativeKind::CzArp => Ok(m(&[1.0, -1.0, -1.0, -1.0])),
        NativeKind::CczArp => Ok(m(&[1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0])),
        other => Err(Error::Usage(format!("{other:?} has no entangling ideal reference"))),
    }
}

pub fn native_matrix(kind: NativeKind) -> Option<CMatrix> {
    match kind {
        NativeKind::CzArp => Some(cz_arp_matrix()),
        NativeKind::CzLp => Some(cz_lp_matrix()),
        NativeKind::CczArp => Some(ccz_arp_matrix()),
        _ => None,
    }
}

/// `exp(-i theta X / 2)`.
pub fn rx_matrix(theta: f64) -> CMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    from_rows(&[&[c64(c, 0.0), c64(0.0, -s)], &[c64(0.0, -s), c64(c, 0.0)]])
}

/// `exp(-i theta Y / 2)`.
pub fn ry_matrix(theta: f64) -> CMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    from_rows(&[&[c64(c, 0.0), c64(-s, 0.0)], &[c64(s, 0.0), c64(c, 0.0)]])
}

/// `diag(exp(-i theta/2), exp(i theta/2))`.
pub fn rz_matrix(theta: f64) -> CMatrix {
    diagonal(&[
        num_complex::Complex64::from_polar(1.0, -theta / 2.0),
        num_complex::Complex64::from_polar(1.0, theta / 2.0),
    ])
}

/// Wraps an angle into `(-2 pi, 2 pi]`; rotations are `4 pi` periodic so the
/// matrix is unchanged.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % (2.0 * TAU);
    if t <= -TAU {
        t += 2.0 * TAU;
    } else if t > TAU {
        t -= 2.0 * TAU;
    }
    t
}

/// Rotation axis of a physical single-qubit pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// One primitive device action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "NativeOpRepr", try_from = "NativeOpRepr")]
pub struct NativeOp {
    kind: NativeKind,
    angle: f64,
    targets: Vec<usize>,
    /// Microseconds.
    duration: f64,
    matrix: Option<CMatrix>,
}

impl NativeOp {
    /// Physical x or y rotation; a pulse of area `|theta|` at Rabi frequency
    /// `params.rabi` (MHz) takes `|theta| / (2 pi rabi)` microseconds.
    pub fn rotation(axis: Axis, theta: f64, qubit: usize, params: &DeviceParams) -> Self {
        let theta = wrap_angle(theta);
        let (kind, matrix) = match axis {
            Axis::X => (NativeKind::Rx, rx_matrix(theta)),
            Axis::Y => (NativeKind::Ry, ry_matrix(theta)),
        };
        NativeOp {
            kind,
            angle: theta,
            targets: vec![qubit],
            duration: theta.abs() / (TAU * params.rabi),
            matrix: Some(matrix),
        }
    }

    /// Error-free frame update; takes no time.
    pub fn rz_virtual(theta: f64, qubit: usize) -> Self {
        let theta = wrap_angle(theta);
        NativeOp {
            kind: NativeKind::RzVirtual,
            angle: theta,
            targets: vec![qubit],
            duration: 0.0,
            matrix: Some(rz_matrix(theta)),
        }
    }

    pub fn cz(protocol: CzProtocol, a: usize, b: usize, params: &DeviceParams) -> Self {
        let kind = protocol.kind();
        NativeOp {
            kind,
            angle: 0.0,
            targets: vec![a, b],
            duration: params.t_cz,
            matrix: native_matrix(kind),
        }
    }

    pub fn ccz(a: usize, b: usize, c: usize, params: &DeviceParams) -> Self {
        NativeOp {
            kind: NativeKind::CczArp,
            angle: 0.0,
            targets: vec![a, b, c],
            duration: params.t_ccz,
            matrix: Some(ccz_arp_matrix()),
        }
    }

    /// Atom rearrangement marker. Its duration is assigned by the scheduler
    /// from the device modality.
    pub fn move_block() -> Self {
        NativeOp { kind: NativeKind::Move, angle: 0.0, targets: vec![], duration: 0.0, matrix: None }
    }

    pub fn init(n_qubits: usize, params: &DeviceParams) -> Self {
        NativeOp {
            kind: NativeKind::Init,
            angle: 0.0,
            targets: (0..n_qubits).collect(),
            duration: params.t_init,
            matrix: None,
        }
    }

    pub fn kind(&self) -> NativeKind {
        self.kind
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub(crate) fn set_duration(&mut self, duration: f64) {
        self.duration = duration;
    }

    /// Device matrix (gates only).
    pub fn matrix(&self) -> Option<&CMatrix> {
        self.matrix.as_ref()
    }

    /// Matrix under `model`: entangling gates are replaced by their ideal
    /// references in [`GateModel::Ideal`].
    pub fn matrix_for(&self, model: GateModel) -> Option<CMatrix> {
        match model {
            GateModel::Ideal if self.kind.is_entangling() => ideal_reference(self.kind).ok(),
            _ => self.matrix.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct NativeOpRepr {
    kind: NativeKind,
    targets: Vec<usize>,
    angle: f64,
    duration: f64,
}

impl From<NativeOp> for NativeOpRepr {
    fn from(op: NativeOp) -> Self {
        NativeOpRepr { kind: op.kind, targets: op.targets, angle: op.angle, duration: op.duration }
    }
}

impl TryFrom<NativeOpRepr> for NativeOp {
    type Error = Error;

    fn try_from(r: NativeOpRepr) -> Result<Self> {
        let arity = match r.kind {
            NativeKind::Rx | NativeKind::Ry | NativeKind::RzVirtual => Some(1),
            NativeKind::CzArp | NativeKind::CzLp => Some(2),
            NativeKind::CczArp => Some(3),
            NativeKind::Move | NativeKind::Init => None,
        };
        if let Some(k) = arity {
            if r.targets.len() != k {
                return Err(Error::Usage(format!(
                    "{:?} needs {k} targets, got {}",
                    r.kind,
                    r.targets.len()
                )));
            }
        }
        if !(r.duration >= 0.0) {
            return Err(Error::Usage(format!("negative duration {}", r.duration)));
        }
        let matrix = match r.kind {
            NativeKind::Rx => Some(rx_matrix(r.angle)),
            NativeKind::Ry => Some(ry_matrix(r.angle)),
            NativeKind::RzVirtual => Some(rz_matrix(r.angle)),
            k => native_matrix(k),
        };
        Ok(NativeOp { kind: r.kind, angle: r.angle, targets: r.targets, duration: r.duration, matrix })
    }
}

/// Average gate fidelity of a (possibly trace-decreasing) operator `m`
/// against the unitary `u`: `(Tr(M^dag M) + |Tr(U^dag M)|^2) / (d (d + 1))`.
pub fn average_gate_fidelity(m: &CMatrix, u: &CMatrix) -> Result<f64> {
    if m.shape() != u.shape() || !m.is_square() {
        return Err(Error::Usage(format!(
            "dimension mismatch: {:?} vs {:?}",
            m.shape(),
            u.shape()
        )));
    }
    let d = m.nrows() as f64;
    let tr_mm = linalg::trace(&(m.adjoint() * m)).re;
    let overlap = linalg::trace(&(u.adjoint() * m)).norm_sqr();
    Ok(((tr_mm + overlap) / (d * (d + 1.0))).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateFidelityReport {
    pub kind: NativeKind,
    pub fidelity: f64,
    pub reference: String,
}

/// Fidelity of a native entangling gate against its ideal reference.
pub fn fidelity_report(kind: NativeKind) -> Result<GateFidelityReport> {
    let m = native_matrix(kind)
        .ok_or_else(|| Error::Usage(format!("{kind:?} is not an entangling gate")))?;
    let reference = match kind {
        NativeKind::CzLp => "diag(1, 1, 1, -1)",
        NativeKind::CzArp => "diag(1, -1, -1, -1)",
        _ => "2|000><000| - I",
    };
    Ok(GateFidelityReport {
        kind,
        fidelity: average_gate_fidelity(&m, &ideal_reference(kind)?)?,
        reference: reference.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;
    use super::*;
    use crate::linalg::{identity, kron, max_abs_diff, pauli_z, unitarity_error, ZERO};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn diag_entry(m: &CMatrix, i: usize) -> num_complex::Complex64 {
        m[(i, i)]
    }

    #[test]
    fn cz_entries_are_the_quoted_constants() {
        let arp = cz_arp_matrix();
        assert_abs_diff_eq!(diag_entry(&arp, 3).re, -0.9986, epsilon = 1e-15);
        assert_abs_diff_eq!(diag_entry(&arp, 3).im, 0.0, epsilon = 1e-15);
        let lp = cz_lp_matrix();
        let expected = num_complex::Complex64::from_polar(0.999320, -0.013 * PI);
        assert_eq!(diag_entry(&lp, 1), expected);
        assert_eq!(diag_entry(&lp, 2), expected);
        assert_eq!(diag_entry(&arp, 0), ONE);
        assert_eq!(diag_entry(&lp, 0), ONE);
        assert!(linalg::is_diagonal(&arp) && linalg::is_diagonal(&lp));
    }

    #[test]
    fn ccz_entries_depend_only_on_weight() {
        let m = ccz_arp_matrix();
        assert_eq!(diag_entry(&m, 0), ONE);
        assert_eq!(diag_entry(&m, 0b011), num_complex::Complex64::from_polar(0.9973, 0.9934 * PI));
        for i in 0..8usize {
            for j in 0..8usize {
                if i.count_ones() == j.count_ones() {
                    assert_eq!(diag_entry(&m, i), diag_entry(&m, j));
                }
            }
        }
    }

    #[test]
    fn entangling_moduli_never_exceed_one() {
        for m in [cz_arp_matrix(), cz_lp_matrix(), ccz_arp_matrix()] {
            for i in 0..m.nrows() {
                assert!(m[(i, i)].norm() <= 1.0);
            }
        }
    }

    #[test]
    fn lp_trades_loss_for_phase_error() {
        let lp_phase_dev = (CZ_LP_DOUBLE.1 - 1.0).abs();
        let arp_phase_dev = (CZ_ARP_DOUBLE.1 - 1.0).abs();
        assert!(lp_phase_dev > arp_phase_dev);
        assert!(1.0 - CZ_ARP_SINGLE.0 > 1.0 - CZ_LP_SINGLE.0);
    }

    #[test]
    fn rotation_durations() {
        let p = DeviceParams::default();
        let op = NativeOp::rotation(Axis::X, PI, 0, &p);
        assert_abs_diff_eq!(op.duration(), 0.5, epsilon = 1e-15);
        let op = NativeOp::rotation(Axis::Y, 0.0, 0, &p);
        assert_eq!(op.duration(), 0.0);
        assert_eq!(max_abs_diff(op.matrix().unwrap(), &identity(2)), 0.0);
        let op = NativeOp::rz_virtual(PI / 4.0, 0);
        assert_eq!(op.duration(), 0.0);
        let m = op.matrix().unwrap();
        assert_abs_diff_eq!((m[(0, 0)] - num_complex::Complex64::from_polar(1.0, -PI / 8.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((m[(1, 1)] - num_complex::Complex64::from_polar(1.0, PI / 8.0)).norm(), 0.0, epsilon = 1e-15);
        assert_eq!(m[(0, 1)], ZERO);
    }

    #[test]
    fn wrapped_angles_keep_the_matrix() {
        for theta in [-7.0, -2.0 * TAU, 5.0, 3.0 * TAU, 13.0] {
            let w = wrap_angle(theta);
            assert!(w > -TAU && w <= TAU);
            assert!(max_abs_diff(&rx_matrix(w), &rx_matrix(theta)) < 1e-12);
        }
    }

    #[test]
    fn rotations_are_unitary() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let theta = rng.random_range(-TAU..TAU);
            assert!(unitarity_error(&rx_matrix(theta)) < 1e-14);
            assert!(unitarity_error(&ry_matrix(theta)) < 1e-14);
        }
    }

    #[test]
    fn ideal_references() {
        let lp = ideal_reference(NativeKind::CzLp).unwrap();
        assert_eq!(lp, diagonal(&[ONE, ONE, ONE, -ONE]));
        // diag(1,-1,-1,-1) . (Z x Z) = CZ
        let arp = ideal_reference(NativeKind::CzArp).unwrap();
        let zz = kron(&pauli_z(), &pauli_z());
        assert_eq!(arp * zz, lp);
        let ccz = ideal_reference(NativeKind::CczArp).unwrap();
        let mut expected = -identity(8);
        expected[(0, 0)] = ONE;
        assert_eq!(ccz, expected);
        assert!(ideal_reference(NativeKind::Rx).is_err());
    }

    #[test]
    fn fidelity_of_unitary_with_itself_is_one() {
        let u = kron(&rx_matrix(0.3), &ry_matrix(1.2));
        assert_abs_diff_eq!(average_gate_fidelity(&u, &u).unwrap(), 1.0, epsilon = 1e-14);
        assert!(average_gate_fidelity(&u, &identity(2)).is_err());
    }

    #[test]
    fn native_fidelities_near_quoted_values() {
        let f = |k| fidelity_report(k).unwrap().fidelity;
        assert_abs_diff_eq!(f(NativeKind::CzArp), 0.9981, epsilon = 0.002);
        assert_abs_diff_eq!(f(NativeKind::CzLp), 0.9987, epsilon = 0.002);
        assert_abs_diff_eq!(f(NativeKind::CczArp), 0.9954, epsilon = 0.003);
    }

    #[test]
    fn json_round_trip_rebuilds_matrix() {
        let p = DeviceParams::default();
        for op in [
            NativeOp::rotation(Axis::Y, -1.25, 3, &p),
            NativeOp::cz(CzProtocol::Arp, 1, 2, &p),
            NativeOp::ccz(0, 1, 2, &p),
            NativeOp::rz_virtual(0.5, 1),
        ] {
            let json = serde_json::to_string(&op).unwrap();
            let back: NativeOp = serde_json::from_str(&json).unwrap();
            assert_eq!(back, op);
        }
        let bad = r#"{"kind":"CZ_LP","targets":[0],"angle":0.0,"duration":0.5}"#;
        assert!(serde_json::from_str::<NativeOp>(bad).is_err());
    }
}
