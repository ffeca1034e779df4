use std::collections::HashMap;

use num_complex::Complex64;

use super::ScheduledCircuit;
use crate::error::{Error, Result};
use crate::gates::{GateModel, NativeKind};
use crate::linalg::{is_diagonal, CMatrix, ONE};
use crate::noise::{idle_channel, idle_superop, DeviceParams};
use crate::state::{DensityMatrix, Superop1};

/// Final state of a noisy run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionResult {
    /// Unnormalized final state.
    pub rho_final: DensityMatrix,
    /// `1 - trace(rho_final)`.
    pub p_loss: f64,
    /// Microseconds, including initialization.
    pub wall_clock_total: f64,
}

impl ExecutionResult {
    fn new(rho: DensityMatrix, wall_clock_total: f64) -> Result<Self> {
        let trace = rho.trace();
        if trace > 1.0 + 1e-12 {
            return Err(Error::Unphysical(format!("final trace {trace} exceeds one")));
        }
        let herm = rho.hermiticity_error();
        if herm > 1e-12 {
            return Err(Error::Unphysical(format!("final state not Hermitian ({herm:e})")));
        }
        Ok(ExecutionResult { p_loss: (1.0 - trace).clamp(0.0, 1.0), rho_final: rho, wall_clock_total })
    }
}

fn seconds(us: f64) -> f64 {
    us * 1e-6
}

/// Layer-by-layer executor that defers single-qubit work.
///
/// Single-qubit gates and idle channels are composed per qubit into a
/// pending superoperator, which is applied only when an entangling gate
/// touches the qubit or the run ends. Diagonal entangling gates of a layer
/// are applied together in one pass. Idle channels act independently on
/// each qubit, so this reordering is exact.
struct Engine<'a> {
    rho: DensityMatrix,
    params: &'a DeviceParams,
    model: GateModel,
    pending: Vec<Superop1>,
    idle_cache: HashMap<u64, Superop1>,
    elapsed: f64,
}

impl<'a> Engine<'a> {
    fn new(n_qubits: usize, params: &'a DeviceParams, model: GateModel) -> Result<Self> {
        params.validate()?;
        Ok(Engine {
            rho: DensityMatrix::init_state(n_qubits, params.eps_init)?,
            params,
            model,
            pending: vec![Superop1::identity(); n_qubits],
            idle_cache: HashMap::new(),
            elapsed: 0.0,
        })
    }

    fn flush(&mut self, q: usize) {
        let s = std::mem::replace(&mut self.pending[q], Superop1::identity());
        if !s.is_identity() {
            self.rho.apply_superop(&s, q);
        }
    }

    fn flush_all(&mut self) {
        for q in 0..self.pending.len() {
            self.flush(q);
        }
    }

    fn idle(&mut self, wall_time: f64) -> Result<Option<Superop1>> {
        if wall_time == 0.0 || !self.params.has_idle_noise() {
            return Ok(None);
        }
        if let Some(s) = self.idle_cache.get(&wall_time.to_bits()) {
            return Ok(Some(*s));
        }
        let s = idle_superop(seconds(wall_time), self.params)?;
        self.idle_cache.insert(wall_time.to_bits(), s);
        Ok(Some(s))
    }

    fn step(&mut self, layer: &super::Layer) -> Result<()> {
        let n = self.rho.n_qubits();
        let mut factors: Option<Vec<Complex64>> = None;
        for op in &layer.ops {
            if matches!(op.kind(), NativeKind::Init | NativeKind::Move) {
                continue;
            }
            let m = op.matrix_for(self.model).ok_or_else(|| Error::Usage(format!("{:?} has no matrix", op.kind())))?;
            let targets = op.targets();
            crate::state::check_targets(n, targets)?;
            if targets.len() == 1 {
                let q = targets[0];
                self.pending[q] = self.pending[q].then(&Superop1::from_operator(&m));
                continue;
            }
            for &q in targets {
                self.flush(q);
            }
            if is_diagonal(&m) && crate::linalg::operator_norm(&m) <= 1.0 + 1e-9 {
                let f = factors.get_or_insert_with(|| vec![ONE; 1 << n]);
                multiply_diagonal(f, n, &m, targets);
            } else {
                self.rho.apply_operator(&m, targets)?;
            }
        }
        if let Some(f) = factors {
            self.rho.apply_row_factors(&f);
        }
        if let Some(s) = self.idle(layer.wall_time)? {
            for p in &mut self.pending {
                *p = p.then(&s);
            }
        }
        self.elapsed += layer.wall_time;
        Ok(())
    }

    fn snapshot(&mut self) -> Result<ExecutionResult> {
        self.flush_all();
        ExecutionResult::new(self.rho.clone(), self.elapsed)
    }
}

fn multiply_diagonal(f: &mut [Complex64], n: usize, m: &CMatrix, targets: &[usize]) {
    for (i, fi) in f.iter_mut().enumerate() {
        let k = crate::state::extract_bits(n, i, targets);
        *fi *= m[(k, k)];
    }
}

/// Runs `sc` from `init_state(eps_init)` with the device's native operators.
pub fn execute(sc: &ScheduledCircuit, params: &DeviceParams) -> Result<ExecutionResult> {
    execute_with_model(sc, params, GateModel::Native)
}

/// [`execute`] with entangling gates taken from `model`.
pub fn execute_with_model(sc: &ScheduledCircuit, params: &DeviceParams, model: GateModel) -> Result<ExecutionResult> {
    let mut engine = Engine::new(sc.n_qubits, params, model)?;
    for layer in &sc.layers {
        engine.step(layer)?;
    }
    engine.snapshot()
}

/// Results after each of the given layer-prefix lengths, from one pass over
/// the circuit. `prefixes` must be non-decreasing and at most the layer count.
pub fn execute_checkpoints(
    sc: &ScheduledCircuit,
    params: &DeviceParams,
    model: GateModel,
    prefixes: &[usize],
) -> Result<Vec<ExecutionResult>> {
    if prefixes.windows(2).any(|w| w[1] < w[0]) || prefixes.last().is_some_and(|&p| p > sc.layers.len()) {
        return Err(Error::Usage(format!("invalid checkpoint list {prefixes:?}")));
    }
    let mut engine = Engine::new(sc.n_qubits, params, model)?;
    let mut out = Vec::with_capacity(prefixes.len());
    let mut done = 0;
    for &p in prefixes {
        while done < p {
            engine.step(&sc.layers[done])?;
            done += 1;
        }
        out.push(engine.snapshot()?);
    }
    Ok(out)
}

/// Straightforward executor used as a cross-check: every gate through
/// [`DensityMatrix::apply_operator`] and every idle period through
/// [`DensityMatrix::apply_channel`] on each qubit, in layer order.
pub fn execute_reference(sc: &ScheduledCircuit, params: &DeviceParams, model: GateModel) -> Result<ExecutionResult> {
    params.validate()?;
    let mut rho = DensityMatrix::init_state(sc.n_qubits, params.eps_init)?;
    let mut elapsed = 0.0;
    for layer in &sc.layers {
        for op in &layer.ops {
            if let Some(m) = op.matrix_for(model) {
                rho.apply_operator(&m, op.targets())?;
            }
        }
        if params.has_idle_noise() {
            let kraus = idle_channel(seconds(layer.wall_time), params)?;
            for q in 0..sc.n_qubits {
                rho.apply_channel(&kraus, &[q])?;
            }
        }
        elapsed += layer.wall_time;
    }
    ExecutionResult::new(rho, elapsed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{schedule, Modality};
    use crate::gates::{Axis, CzProtocol, NativeOp};
    use crate::transpile::NativeInstr;
    use std::f64::consts::PI;

    fn run(ops: Vec<NativeOp>, n: usize, params: &DeviceParams) -> ExecutionResult {
        let instrs: Vec<NativeInstr> = ops.into_iter().map(NativeInstr::Op).collect();
        let sc = schedule(&instrs, n, Modality::Reconfigurable { tau_move: 100.0 }, params).unwrap();
        execute(&sc, params).unwrap()
    }

    #[test]
    fn empty_noiseless_circuit() {
        let p = DeviceParams { eps_init: 0.0, ..DeviceParams::default() };
        let r = run(vec![], 3, &p);
        assert!(r.p_loss.abs() < 1e-15);
        assert_eq!(r.rho_final, DensityMatrix::ground(3).unwrap());
        assert_eq!(r.wall_clock_total, 300.0);
    }

    #[test]
    fn arp_cz_on_excited_pair() {
        let p = DeviceParams { eps_init: 0.0, ..DeviceParams::default() };
        let r = run(
            vec![
                NativeOp::rotation(Axis::X, PI, 0, &p),
                NativeOp::rotation(Axis::X, PI, 1, &p),
                NativeOp::cz(CzProtocol::Arp, 0, 1, &p),
            ],
            2,
            &p,
        );
        assert!((r.p_loss - (1.0 - 0.9986f64.powi(2))).abs() < 1e-6, "{}", r.p_loss);
    }

    #[test]
    fn ideal_gates_lose_nothing() {
        let p = DeviceParams { eps_init: 0.0, ..DeviceParams::default() };
        let instrs: Vec<NativeInstr> = vec![
            NativeOp::rotation(Axis::Y, 1.0, 0, &p),
            NativeOp::cz(CzProtocol::Arp, 0, 1, &p),
            NativeOp::ccz(0, 1, 2, &p),
        ]
        .into_iter()
        .map(NativeInstr::Op)
        .collect();
        let sc = schedule(&instrs, 3, Modality::Reconfigurable { tau_move: 100.0 }, &p).unwrap();
        let r = execute_with_model(&sc, &p, GateModel::Ideal).unwrap();
        assert!(r.p_loss < 1e-12);
    }

    #[test]
    fn matches_reference_executor() {
        let p = DeviceParams { t1: 1e-3, t2: 1.5e-3, ..DeviceParams::default() };
        let ops = vec![
            NativeOp::rotation(Axis::Y, 1.1, 0, &p),
            NativeOp::rotation(Axis::X, -0.4, 2, &p),
            NativeOp::cz(CzProtocol::Arp, 0, 1, &p),
            NativeOp::rz_virtual(0.3, 1),
            NativeOp::cz(CzProtocol::Lp, 2, 3, &p),
            NativeOp::move_block(),
            NativeOp::rotation(Axis::X, 2.0, 1, &p),
            NativeOp::ccz(1, 2, 3, &p),
            NativeOp::rotation(Axis::Y, 0.7, 3, &p),
        ];
        let instrs: Vec<NativeInstr> = ops.into_iter().map(NativeInstr::Op).collect();
        let sc = schedule(&instrs, 4, Modality::Reconfigurable { tau_move: 100.0 }, &p).unwrap();
        for model in [GateModel::Native, GateModel::Ideal] {
            let fast = execute_with_model(&sc, &p, model).unwrap();
            let slow = execute_reference(&sc, &p, model).unwrap();
            let diff = fast
                .rho_final
                .as_slice()
                .iter()
                .zip(slow.rho_final.as_slice())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-13, "{diff:e}");
            assert_eq!(fast.wall_clock_total, slow.wall_clock_total);
        }
    }

    #[test]
    fn checkpoints_match_prefix_runs() {
        let p = DeviceParams::default();
        let ops: Vec<NativeInstr> = (0..6)
            .flat_map(|k| {
                vec![
                    NativeInstr::Op(NativeOp::rotation(Axis::Y, 0.3 * k as f64 + 0.1, k % 3, &p)),
                    NativeInstr::Op(NativeOp::cz(CzProtocol::Lp, k % 3, (k + 1) % 3, &p)),
                ]
            })
            .collect();
        let sc = schedule(&ops, 3, Modality::Reconfigurable { tau_move: 100.0 }, &p).unwrap();
        let prefixes: Vec<usize> = (1..=sc.layers.len()).collect();
        let snaps = execute_checkpoints(&sc, &p, GateModel::Native, &prefixes).unwrap();
        for (&k, snap) in prefixes.iter().zip(&snaps) {
            let prefix = ScheduledCircuit { n_qubits: 3, layers: sc.layers[..k].to_vec() };
            let direct = execute(&prefix, &p).unwrap();
            assert!((direct.p_loss - snap.p_loss).abs() < 1e-14);
        }
        assert!(execute_checkpoints(&sc, &p, GateModel::Native, &[3, 2]).is_err());
    }
}
