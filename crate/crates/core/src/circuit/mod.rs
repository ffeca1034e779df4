//! Timed circuits: modality rules, layer scheduling and the noisy executor.

mod execute;
mod schedule;

pub use execute::{execute, execute_checkpoints, execute_reference, execute_with_model, ExecutionResult};
pub use schedule::{schedule, Layer, Modality, ScheduledCircuit};
