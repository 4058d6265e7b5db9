//! Local and global Gauss sums, local reciprocity, and the Davenport-Hasse relations.

pub mod dh;
pub mod global;
pub mod local;

pub use dh::{
    classical_gauss_sum, davenport_hasse_classical_check, davenport_hasse_generalized_check,
    davenport_hasse_generalized_grid, gauss_decomposition_check_l, gauss_decomposition_check_p, IdentityReport,
};
pub use global::{equivariant_gauss_sum, equivariant_gauss_sum_global, global_gauss_sum, DirichletLocal};
pub use local::{
    additive_character, local_gauss_sum, local_reciprocity, phase, wild_invariant, GaussSumResult,
    LocalCharacterData, LocalField, Phase,
};
