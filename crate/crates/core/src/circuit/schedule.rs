use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{NativeKind, NativeOp};
use crate::noise::DeviceParams;
use crate::transpile::NativeInstr;

/// Device connectivity model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modality {
    /// Fixed 1-D line with nearest-neighbour interactions; one entangling
    /// gate at a time.
    Static,
    /// Atoms are rearranged in blocks of `tau_move` microseconds, allowing
    /// arbitrary parallel entangling gates on disjoint qubits.
    Reconfigurable { tau_move: f64 },
}

/// Ops on pairwise disjoint qubits executed simultaneously.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub ops: Vec<NativeOp>,
    /// Microseconds; the longest op in the layer.
    pub wall_time: f64,
}

impl Layer {
    fn new() -> Self {
        Layer { ops: Vec::new(), wall_time: 0.0 }
    }

    fn push(&mut self, op: NativeOp) {
        self.wall_time = self.wall_time.max(op.duration());
        self.ops.push(op);
    }

    fn has_entangler(&self) -> bool {
        self.ops.iter().any(|o| o.kind().is_entangling())
    }
}

/// Layered native circuit; the executor's input. The first layer is the
/// register initialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduledCircuit {
    pub n_qubits: usize,
    pub layers: Vec<Layer>,
}

impl ScheduledCircuit {
    /// Total wall-clock time in microseconds.
    pub fn wall_clock(&self) -> f64 {
        self.layers.iter().map(|l| l.wall_time).sum()
    }

    pub fn count(&self, kind: NativeKind) -> usize {
        self.layers.iter().flat_map(|l| &l.ops).filter(|o| o.kind() == kind).count()
    }

    /// Checks target disjointness within layers, target ranges and the
    /// wall-time rule.
    pub fn validate(&self) -> Result<()> {
        crate::state::check_register_size(self.n_qubits)?;
        for (i, layer) in self.layers.iter().enumerate() {
            let mut used = vec![false; self.n_qubits];
            let mut longest: f64 = 0.0;
            for op in &layer.ops {
                if op.kind() == NativeKind::Move && layer.ops.len() != 1 {
                    return Err(Error::Scheduling(format!("layer {i}: MOVE must be alone in its layer")));
                }
                if !matches!(op.kind(), NativeKind::Init | NativeKind::Move) {
                    crate::state::check_targets(self.n_qubits, op.targets())?;
                    for &q in op.targets() {
                        if std::mem::replace(&mut used[q], true) {
                            return Err(Error::Scheduling(format!("layer {i}: qubit {q} used twice")));
                        }
                    }
                }
                longest = longest.max(op.duration());
            }
            if (longest - layer.wall_time).abs() > 1e-9 {
                return Err(Error::Scheduling(format!(
                    "layer {i}: wall time {} differs from longest op {longest}",
                    layer.wall_time
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let sc: ScheduledCircuit = serde_json::from_str(s)?;
        sc.validate()?;
        Ok(sc)
    }
}

fn check_static_adjacency(op: &NativeOp) -> Result<()> {
    let mut t = op.targets().to_vec();
    t.sort_unstable();
    if t.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::Scheduling(format!(
            "{:?} on {:?} is not nearest-neighbour on the static line",
            op.kind(),
            op.targets()
        )));
    }
    Ok(())
}

/// As-soon-as-possible layering of a lowered instruction stream.
///
/// Each op goes into the earliest layer after every earlier op on its
/// qubits and after the most recent MOVE or barrier. MOVE ops get a layer of
/// their own lasting `tau_move`. In static mode a layer holds at most one
/// entangling gate, entangling targets must be consecutive positions, and
/// MOVE is rejected.
pub fn schedule(
    instrs: &[NativeInstr],
    n_qubits: usize,
    modality: Modality,
    params: &DeviceParams,
) -> Result<ScheduledCircuit> {
    crate::state::check_register_size(n_qubits)?;
    let mut layers = vec![Layer::new()];
    layers[0].push(NativeOp::init(n_qubits, params));
    let mut floor = 1;
    let mut frontier = vec![1usize; n_qubits];

    for instr in instrs {
        let op = match instr {
            NativeInstr::Barrier => {
                floor = layers.len();
                continue;
            }
            NativeInstr::Op(op) => op,
        };
        match op.kind() {
            NativeKind::Init => {
                return Err(Error::Scheduling("INIT may only appear as the first layer".into()))
            }
            NativeKind::Move => {
                let Modality::Reconfigurable { tau_move } = modality else {
                    return Err(Error::Scheduling("MOVE on a static device".into()));
                };
                let mut m = op.clone();
                m.set_duration(tau_move);
                let mut layer = Layer::new();
                layer.push(m);
                layers.push(layer);
                floor = layers.len();
                continue;
            }
            _ => {}
        }
        crate::state::check_targets(n_qubits, op.targets())?;
        let sequential = matches!(modality, Modality::Static) && op.kind().is_entangling();
        if sequential {
            check_static_adjacency(op)?;
        }
        let mut at = op.targets().iter().map(|&q| frontier[q]).fold(floor, usize::max);
        if sequential {
            while at < layers.len() && layers[at].has_entangler() {
                at += 1;
            }
        }
        if at == layers.len() {
            layers.push(Layer::new());
        }
        layers[at].push(op.clone());
        for &q in op.targets() {
            frontier[q] = at + 1;
        }
    }
    Ok(ScheduledCircuit { n_qubits, layers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{Axis, CzProtocol};

    fn p() -> DeviceParams {
        DeviceParams::default()
    }

    fn ops(v: Vec<NativeOp>) -> Vec<NativeInstr> {
        v.into_iter().map(NativeInstr::Op).collect()
    }

    const RECONF: Modality = Modality::Reconfigurable { tau_move: 100.0 };

    #[test]
    fn parallel_single_qubit_gates() {
        let v = ops((0..3).map(|q| NativeOp::rotation(Axis::Y, 1.0, q, &p())).collect());
        let sc = schedule(&v, 3, RECONF, &p()).unwrap();
        assert_eq!(sc.layers.len(), 2);
        let sc = schedule(&v, 3, Modality::Static, &p()).unwrap();
        assert_eq!(sc.layers.len(), 2);
    }

    #[test]
    fn disjoint_czs() {
        let v = ops(vec![NativeOp::cz(CzProtocol::Lp, 0, 1, &p()), NativeOp::cz(CzProtocol::Lp, 2, 3, &p())]);
        assert_eq!(schedule(&v, 4, Modality::Static, &p()).unwrap().layers.len() - 1, 2);
        assert_eq!(schedule(&v, 4, RECONF, &p()).unwrap().layers.len() - 1, 1);
    }

    #[test]
    fn static_rejects_distant_pairs_and_moves() {
        let v = ops(vec![NativeOp::cz(CzProtocol::Lp, 0, 2, &p())]);
        assert!(matches!(schedule(&v, 3, Modality::Static, &p()), Err(Error::Scheduling(_))));
        assert!(schedule(&v, 3, RECONF, &p()).is_ok());
        let m = ops(vec![NativeOp::move_block()]);
        assert!(schedule(&m, 3, Modality::Static, &p()).is_err());
    }

    #[test]
    fn moves_and_barriers_fence() {
        let mut v = ops(vec![NativeOp::rotation(Axis::X, 1.0, 0, &p()), NativeOp::move_block()]);
        v.push(NativeInstr::Op(NativeOp::rotation(Axis::X, 1.0, 1, &p())));
        v.push(NativeInstr::Barrier);
        v.push(NativeInstr::Op(NativeOp::rotation(Axis::X, 1.0, 2, &p())));
        let sc = schedule(&v, 3, RECONF, &p()).unwrap();
        assert_eq!(sc.layers.len(), 5);
        assert_eq!(sc.layers[2].ops[0].kind(), NativeKind::Move);
        assert_eq!(sc.layers[2].wall_time, 100.0);
        assert_eq!(sc.layers[0].wall_time, 300.0);
        sc.validate().unwrap();
    }

    #[test]
    fn json_round_trip() {
        let v = ops(vec![
            NativeOp::rotation(Axis::X, 0.5, 0, &p()),
            NativeOp::cz(CzProtocol::Arp, 0, 1, &p()),
            NativeOp::move_block(),
            NativeOp::ccz(0, 1, 2, &p()),
            NativeOp::rz_virtual(0.25, 2),
        ]);
        let sc = schedule(&v, 3, RECONF, &p()).unwrap();
        let json = sc.to_json().unwrap();
        assert!(json.contains("\"kind\": \"CZ_ARP\""));
        assert_eq!(ScheduledCircuit::from_json(&json).unwrap(), sc);
    }

    #[test]
    fn invalid_json_layers_are_rejected() {
        let bad = r#"{"n_qubits":2,"layers":[{"ops":[
            {"kind":"RX","targets":[0],"angle":1.0,"duration":0.1},
            {"kind":"RY","targets":[0],"angle":1.0,"duration":0.1}],"wall_time":0.1}]}"#;
        assert!(ScheduledCircuit::from_json(bad).is_err());
    }
}
