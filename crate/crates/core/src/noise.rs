//! Device parameters and the idle-decoherence channels derived from them.
//!
//! `T2` is treated as the total transverse coherence time: an idle qubit
//! undergoes amplitude damping at rate `1/T1` plus pure dephasing at rate
//! `1/T_phi = 1/T2 - 1/(2 T1)`, so coherences decay exactly as `exp(-t/T2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, diagonal, from_rows, identity, pauli_z, CMatrix, ONE, ZERO};
use crate::state::Superop1;

/// Timing and noise constants of the virtual device.
///
/// Units: `t1`, `t2` in seconds; `rabi` in MHz (ordinary, not angular,
/// frequency); every other duration in microseconds; `v_move` in um/us.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceParams {
    pub t1: f64,
    pub t2: f64,
    pub rabi: f64,
    pub eps_init: f64,
    pub t_init: f64,
    /// Recorded for completeness; movement is modelled as fixed-duration blocks.
    pub v_move: f64,
    /// Move duration when several atoms are rearranged at once.
    pub tau_move_a: f64,
    /// Move duration when a single atom is shuttled.
    pub tau_move_b: f64,
    pub t_cz: f64,
    pub t_ccz: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        DeviceParams {
            t1: 4.00,
            t2: 1.49,
            rabi: 1.0,
            eps_init: 0.003,
            t_init: 300.0,
            v_move: 0.55,
            tau_move_a: 100.0,
            tau_move_b: 40.0,
            t_cz: 0.5,
            t_ccz: 1.0,
        }
    }
}

impl DeviceParams {
    /// No preparation error and no idle decoherence (`T1 = T2 = inf`).
    /// Gate operators are unaffected; pair with ideal gates for an error-free
    /// backend.
    pub fn noiseless() -> Self {
        DeviceParams { t1: f64::INFINITY, t2: f64::INFINITY, eps_init: 0.0, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.t1.is_nan() || self.t1 <= 0.0 {
            return bad(format!("t1 must be positive, got {}", self.t1));
        }
        if self.t2.is_nan() || self.t2 <= 0.0 {
            return bad(format!("t2 must be positive, got {}", self.t2));
        }
        if self.t2 > 2.0 * self.t1 {
            return bad(format!(
                "t2 = {} exceeds 2 * t1 = {}; no physical dephasing rate reproduces it",
                self.t2,
                2.0 * self.t1
            ));
        }
        if !(self.rabi > 0.0 && self.rabi.is_finite()) {
            return bad(format!("rabi frequency must be positive, got {}", self.rabi));
        }
        if !(0.0..1.0).contains(&self.eps_init) {
            return bad(format!("eps_init must lie in [0, 1), got {}", self.eps_init));
        }
        for (name, v) in [
            ("t_init", self.t_init),
            ("v_move", self.v_move),
            ("tau_move_a", self.tau_move_a),
            ("tau_move_b", self.tau_move_b),
            ("t_cz", self.t_cz),
            ("t_ccz", self.t_ccz),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be a non-negative duration, got {v}"));
            }
        }
        Ok(())
    }

    /// Pure-dephasing time `T_phi` in seconds (infinite when `T2 = 2 T1`).
    pub fn dephasing_time(&self) -> f64 {
        1.0 / dephasing_rate(self.t1, self.t2)
    }

    pub fn has_idle_noise(&self) -> bool {
        self.t1.is_finite() || self.t2.is_finite()
    }
}

fn dephasing_rate(t1: f64, t2: f64) -> f64 {
    1.0 / t2 - 1.0 / (2.0 * t1)
}

fn check_duration(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Usage(format!("idle duration must be non-negative, got {t}")));
    }
    Ok(())
}

/// Amplitude damping over `t` seconds: decay probability `1 - exp(-t/t1)`.
pub fn amplitude_damping(t: f64, t1: f64) -> Result<[CMatrix; 2]> {
    check_duration(t)?;
    let p = -(-t / t1).exp_m1();
    Ok([
        diagonal(&[ONE, c64((1.0 - p).sqrt(), 0.0)]),
        from_rows(&[&[ZERO, c64(p.sqrt(), 0.0)], &[ZERO, ZERO]]),
    ])
}

/// Phase-flip channel over `t` seconds with flip probability
/// `(1 - exp(-t/T_phi)) / 2`.
pub fn pure_dephasing(t: f64, t1: f64, t2: f64) -> Result<[CMatrix; 2]> {
    check_duration(t)?;
    let rate = dephasing_rate(t1, t2);
    if rate < 0.0 {
        return Err(Error::Config(format!("t2 = {t2} exceeds 2 * t1 = {}", 2.0 * t1)));
    }
    let q = -0.5 * (-t * rate).exp_m1();
    Ok([identity(2) * c64((1.0 - q).sqrt(), 0.0), pauli_z() * c64(q.sqrt(), 0.0)])
}

/// Idle decoherence of one qubit over `t` seconds: amplitude damping composed
/// with pure dephasing (the two commute).
pub fn idle_channel(t: f64, params: &DeviceParams) -> Result<Vec<CMatrix>> {
    let damping = amplitude_damping(t, params.t1)?;
    let dephasing = pure_dephasing(t, params.t1, params.t2)?;
    Ok(damping
        .iter()
        .flat_map(|a| dephasing.iter().map(move |d| a * d))
        .collect())
}

/// [`idle_channel`] as a superoperator.
pub fn idle_superop(t: f64, params: &DeviceParams) -> Result<Superop1> {
    Ok(Superop1::from_kraus(&idle_channel(t, params)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hadamard, max_abs_diff};
    use crate::state::DensityMatrix;
    use approx::assert_abs_diff_eq;

    fn decay_probability(k: &[CMatrix; 2]) -> f64 {
        k[1][(0, 1)].norm_sqr()
    }

    fn completeness(kraus: &[CMatrix]) -> CMatrix {
        kraus.iter().fold(CMatrix::zeros(2, 2), |acc, k| acc + k.adjoint() * k)
    }

    #[test]
    fn defaults_match_the_device_sheet() {
        let p = DeviceParams::default();
        assert_eq!((p.t1, p.t2, p.rabi, p.eps_init), (4.00, 1.49, 1.0, 0.003));
        assert_eq!((p.t_init, p.v_move, p.tau_move_a, p.tau_move_b), (300.0, 0.55, 100.0, 40.0));
        p.validate().unwrap();
        DeviceParams::noiseless().validate().unwrap();
    }

    #[test]
    fn unphysical_t2_rejected() {
        let p = DeviceParams { t1: 4.0, t2: 10.0, ..Default::default() };
        assert!(matches!(p.validate(), Err(Error::Config(_))));
        assert!(pure_dephasing(1.0, 4.0, 10.0).is_err());
    }

    #[test]
    fn amplitude_damping_examples() {
        let k = amplitude_damping(0.0, 4.0).unwrap();
        assert_eq!(decay_probability(&k), 0.0);
        assert_eq!(k[0], identity(2));

        let k = amplitude_damping(4.0, 4.0).unwrap();
        assert_abs_diff_eq!(decay_probability(&k), 1.0 - (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(decay_probability(&k), 0.632121, epsilon = 1e-6);

        let k = amplitude_damping(100e-6, 4.0).unwrap();
        assert_abs_diff_eq!(decay_probability(&k), 2.49997e-5, epsilon = 1e-10);

        assert!(matches!(amplitude_damping(-1.0, 4.0), Err(Error::Usage(_))));
    }

    #[test]
    fn pure_dephasing_examples() {
        let k = pure_dephasing(0.0, 4.0, 1.49).unwrap();
        assert_eq!(max_abs_diff(&k[0], &identity(2)), 0.0);

        let tphi = DeviceParams::default().dephasing_time();
        assert_abs_diff_eq!(tphi, 1.0 / (1.0 / 1.49 - 1.0 / 8.0), epsilon = 1e-12);
        assert_abs_diff_eq!(tphi, 1.831029, epsilon = 1e-6);

        let k = pure_dephasing(tphi, 4.0, 1.49).unwrap();
        let q = k[1][(0, 0)].norm_sqr();
        assert_abs_diff_eq!(q, (1.0 - (-1.0f64).exp()) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(q, 0.316060, epsilon = 1e-6);
    }

    #[test]
    fn idle_channel_is_trace_preserving() {
        let p = DeviceParams::default();
        for t in [0.0, 1e-6, 300e-6, 0.1, 3.0] {
            let c = completeness(&idle_channel(t, &p).unwrap());
            assert!(max_abs_diff(&c, &identity(2)) < 1e-12);
        }
    }

    #[test]
    fn idle_channel_zero_time_is_identity() {
        let s = idle_superop(0.0, &DeviceParams::default()).unwrap();
        assert!(s.is_identity());
    }

    #[test]
    fn idle_coherence_decay_after_init_time() {
        let p = DeviceParams::default();
        let t = 300e-6;
        let mut rho = DensityMatrix::ground(1).unwrap();
        rho.apply_operator(&hadamard(), &[0]).unwrap();
        rho.apply_channel(&idle_channel(t, &p).unwrap(), &[0]).unwrap();
        let factor = rho.get(0, 1).re / 0.5;
        let expected = (-t / (2.0 * p.t1) - t / p.dephasing_time()).exp();
        assert_abs_diff_eq!(factor, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(1.0 - factor, 2.013e-4, epsilon = 1e-7);
        // Equivalently exp(-t / T2).
        assert_abs_diff_eq!(factor, (-t / p.t2).exp(), epsilon = 1e-15);
    }

    #[test]
    fn order_of_components_irrelevant_on_diagonal_states() {
        let p = DeviceParams::default();
        let t = 0.7;
        let ad = amplitude_damping(t, p.t1).unwrap();
        let pd = pure_dephasing(t, p.t1, p.t2).unwrap();
        let mut a = DensityMatrix::init_state(1, 0.3).unwrap();
        let mut b = a.clone();
        a.apply_channel(&ad, &[0]).unwrap();
        a.apply_channel(&pd, &[0]).unwrap();
        b.apply_channel(&pd, &[0]).unwrap();
        b.apply_channel(&ad, &[0]).unwrap();
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn ground_state_is_a_fixed_point() {
        let p = DeviceParams::default();
        for t in [1e-6, 1.0, 10.0] {
            let mut rho = DensityMatrix::ground(1).unwrap();
            rho.apply_channel(&idle_channel(t, &p).unwrap(), &[0]).unwrap();
            assert_abs_diff_eq!(rho.get(0, 0).re, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(rho.get(1, 1).re, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn noiseless_params_produce_identity() {
        let s = idle_superop(1.0, &DeviceParams::noiseless()).unwrap();
        assert!(s.is_identity());
    }
}
