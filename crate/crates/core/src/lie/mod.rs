//! Lie algebras, their exterior powers and the Chevalley–Eilenberg complex.

pub mod algebra;
pub mod ce;
pub mod exterior;

pub use algebra::{
    embed_lower_block, make_g2, make_so, make_so_on_lower_block, make_so_plus_dilation, make_su_realified, make_u1,
    so_generator, so_index, LieAlgebra,
};
pub use ce::{
    adjoint_action, adjoint_action_element, boundary_matrix, ce_boundary, ce_differential, find_primitive, homology,
    is_coboundary, Caps, HomologyReport, DEFAULT_MAX_DIM, MAX_DIM_ENV,
};
pub use exterior::{Cochain, MultiVector};
