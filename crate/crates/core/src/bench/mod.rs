//! Benchmark procedures: quantum volume, Bernstein-Vazirani and Grover.

mod bv;
mod grover;
mod qv;
mod stats;

pub use bv::{bv_circuit, bv_seeds, run_bv, BvConfig, BvResult, BvSeedResult};
pub use grover::{grover_circuit, run_grover, GroverConfig, GroverRecord, GroverResult, GroverScheme, GROVER_ANCILLAS, GROVER_DATA};
pub use qv::{
    qv_heavy_set, qv_instance, run_qv, HeavySet, QvCircuitResult, QvConfig, QvInstance, QvResult,
};
pub use stats::{child_seed, mean, post_select, sem, SizeSummary};

use serde::{Deserialize, Serialize};

use crate::gates::GateModel;
use crate::noise::DeviceParams;

/// Which physics a benchmark runs against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Backend {
    pub params: DeviceParams,
    pub model: GateModel,
}

impl Backend {
    /// Native lossy gates and the given noise parameters.
    pub fn device(params: DeviceParams) -> Self {
        Backend { params, model: GateModel::Native }
    }

    /// Ideal gates, no preparation error, no decoherence.
    pub fn noiseless() -> Self {
        Backend { params: DeviceParams::noiseless(), model: GateModel::Ideal }
    }
}

impl Default for Backend {
    fn default() -> Self {
        Backend::device(DeviceParams::default())
    }
}
