//! Euler and delta factors, h-elements, conductor and discriminant units, cyclotomic twists and
//! the descent identities between them.

pub mod descent;
pub mod factors;
pub mod place;

pub use descent::{descent_identity_suite, random_descent_instance, random_filtration_instance, DescentInstance, DescentReport, FiltrationInstance};
pub use factors::{
    conductor_unit, conductor_unit_component, delta_factor, delta_trivial, descent_factor, discriminant_unit, e_variant,
    euler_component, euler_factor, h_element, to_zpn, twist_op, ConductorUnit, GroupRingFraction, IdentityCheck, ZpnGroupRing,
};
pub use place::{CyclotomicLevel, PlaceData, PlaceDataJson};
