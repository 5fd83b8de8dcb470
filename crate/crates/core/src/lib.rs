//! Exact outcome distributions and locality certificates for quantum
//! networks arranged on a cycle.
//!
//! * [`network`], [`state`], [`basis`], [`label`]: scenario description.
//! * [`engine`]: outcome distributions by transfer-matrix contraction.
//! * [`certificates`]: support checks, the Finner bound, exact marginal
//!   feasibility programs and the threshold curve.
//! * [`trilocal`]: classical hidden-variable models on the cycle.

pub mod basis;
pub mod certificates;
pub mod engine;
pub mod error;
pub mod exact;
pub mod label;
pub mod network;
pub mod state;
pub mod trilocal;

pub use basis::JointBasis;
pub use engine::{cycle_distribution, OutcomeDistribution};
pub use error::{Error, Result};
pub use exact::{Real, Surd};
pub use label::Label;
pub use network::CycleNetwork;
pub use state::SchmidtState;
