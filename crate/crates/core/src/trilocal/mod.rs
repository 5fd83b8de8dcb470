//! Classical hidden-variable models on the cycle: representation, exact
//! evaluation, seeded sampling and explicit constructions for the qubit
//! triangle.

pub mod builders;
pub mod model;
pub mod skeleton;

pub use builders::{
    boundary_model, boundary_residuals, boundary_u_sq, solve_boundary_params, uniform_chi_model,
    BoundaryParams, BoundaryResiduals, BOUNDARY_RESIDUAL_TOL,
};
pub use model::{empirical_distribution, write_samples_csv, PartyResponse, TrilocalModel, HIDDEN_CAP};
pub use skeleton::{coarse_skeleton, CoarseSkeleton};
