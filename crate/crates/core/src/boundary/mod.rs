//! Smooth bodies, their boundary data on the sphere, and the local
//! (p,q)-form together with the integral identities behind it.

mod forms;
mod grid;
mod smooth;

pub use forms::{
    bochner_residual, divergence_residual, improved_form_value, local_form_matrices, local_form_max,
    local_form_value, pointwise_matrix_inequality_check, ray_decreasing_check, IdentityReport, LocalFormMax,
    QuadraticField, RayReport, ScalarField, GRAM_CONDITION_FLOOR,
};
pub use grid::{
    BoundaryGrid, BoundaryNode, GridFn, SphereFn, TestFunctionBasis, DEFAULT_DEGREE, DEFAULT_K_MAX, PLANAR_NODES,
    SPHERE_LATITUDES,
};
pub use smooth::{LocalData, SmoothBody, DEFAULT_BOX_EPS, DEFAULT_BOX_KERNEL};
