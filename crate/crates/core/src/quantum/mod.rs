//! Exact linear-algebra substrate: states, gates, channels and Pauli transfer matrices.

mod channel;
mod gate;
mod linalg;
mod observable;
mod pauli;
mod ptm;
mod state;

pub use channel::{ChannelKind, KrausChannel};
pub use gate::{GateKind, UnitaryGate};
pub use linalg::{Matrix, C64};
pub use observable::Observable;
pub use pauli::{Pauli, PauliString};
pub use ptm::PauliTransferMatrix;
pub use state::{check_targets, DensityMatrix, QuantumState, StateVector, MAX_DENSITY_QUBITS, MAX_STATE_QUBITS};

pub(crate) use state::marginal_distribution;
