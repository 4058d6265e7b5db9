//! Coleman maps at finite precision: (1 - phi/p) log, the specialization maps Xi_{n,j} with
//! their character-wise closed forms, interpolation factors and the pairing on R.

pub mod algebra;
pub mod col;
pub mod interp;
pub mod pairing;
pub mod xi;

pub use algebra::CycloAlgebra;
pub use col::{
    coleman_interpolation_check, coleman_output_precision, coleman_value, cyclotomic_constant_term_check, cyclotomic_unit_series,
    ConstantTermReport,
    ColemanInterpolationReport, NormCompatibleFamily,
};
pub use interp::{a_n, a_n_conversion, normalized_interpolation_factor, interpolation_factor, LocalCharacterData};
pub use pairing::{sesquilinearity_check, PairingLevel};
pub use xi::{
    chi_component, d_twist_check, random_r_element, r_representative, xi_chi_closed, xi_class_closed,
    xi_exact_reports, xi_interpolation_check, xi_specialize, xi_specialize_exact, SpecializationReport,
    XiClassReport, XiValue,
};
