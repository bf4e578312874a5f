//! Numerics for the Wigner phase operator, the radially integrated Wigner
//! phase distribution and the Pegg–Barnett phase formalism on a truncated
//! Fock space.

pub mod analysis;
pub mod cli;
pub mod distribution;
pub mod error;
pub mod fock;
pub mod io;
pub mod pegg_barnett;
pub mod phase_op;
pub mod special;
pub mod state_spec;
pub mod wigner;

pub use distribution::{DistributionKind, PhaseDistribution, PhaseGrid};
pub use error::{PhaseError, Result};
pub use fock::{DensityMatrix, LadderSet, OperatorMatrix, StateVector};
pub use state_spec::{PreparedState, StateSpec};
