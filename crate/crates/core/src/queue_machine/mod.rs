//! Queue machines, their simulator, and their encoding as session types.

mod encode;
mod load;
mod machine;

pub use encode::{encode_control, encode_control_from, encode_queue, queue_hub, reduction};
pub use load::{parse_machine, LoadError};
pub use machine::{
    anbn_machine, run, step, trace, Configuration, MachineError, QueueMachine, RunOutcome, Step, Transition,
};
