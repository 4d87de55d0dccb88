//! Lie-Poisson dynamics of the heavy top and gyrostat on e(3)*, its twistor,
//! magnetic-monopole and T*S^3 symplectic realizations, group actions, an
//! ODE engine with drift instrumentation, and a numerical verification
//! harness for the structural identities linking them.

// Negated comparisons such as `!(x > 0.0)` deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod dynamics;
pub mod e3;
pub mod error;
pub mod groups;
pub mod reduced;
pub mod sampling;
pub mod scenario;
pub mod twistor;
pub mod verify;

pub use error::{Error, Result};
