//! Dirichlet L-values: exact values at non-positive integers, Hurwitz-zeta numerics at positive
//! integers, the archimedean constants and the period element B over Q.
pub mod arch;
pub mod bernoulli;
pub mod hurwitz;
pub mod period;

pub use arch::{
    arch_constant, functional_equation_check, functional_equation_rhs, functional_equation_suite, lambda_order,
    primitive_characters, ArchData, ChiSpec, ComplexJson, FunctionalEquationReport, PiGraded,
};
pub use bernoulli::{bernoulli_numbers, bernoulli_polynomial, gen_bernoulli};
pub use hurwitz::{hurwitz_dual, l_derivative, l_numeric, l_value, Bounded, Dual};
pub use period::{
    alpha_weight, b_an_check, gram_element, normal_basis_generator, period_b_check, period_matrix_b, wedge_alpha_check,
    BAnReport, PeriodReport, WedgeAlphaReport,
};
