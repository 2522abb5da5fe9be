//! Exterior calculus on `R^m` and tangential evaluation on the unit sphere.

pub mod calculus;
pub mod field;
pub mod form;
pub mod sphere;

pub use calculus::{
    contract, contract_element, interior_product, iterated_cartan_residual, lie_derivative, lie_derivative_vf,
    multicartan_residual, TaggedField,
};
pub use field::{
    fundamental_fields, fundamental_multivector, fundamental_of_element, fundamental_vf, MultiVectorField, VectorField,
};
pub use form::DiffForm;
pub use sphere::{
    ambient_samples, ambient_values, eval_on_vectors, sphere_sample, sphere_samples, tangential_eval,
    tangential_values, SpherePoint,
};
