//! Exact cyclotomic arithmetic, finite abelian groups, characters and group rings.

pub mod arith;
pub mod cyclo;
pub mod group;
pub mod group_ring;
pub mod linalg;
pub mod scalar;
pub mod units;

pub use cyclo::{rat, CyclotomicNumber};
pub use group::{Character, FiniteAbelianGroup, Subgroup};
pub use group_ring::{group_ring_det, group_ring_det_semisimple, CycloGroupRing, GroupRingElement, QGroupRing};
pub use scalar::Scalar;
pub use units::{DirichletCharacter, UnitsModN};
