//! Determinant functors on graded lines, with the sign conventions made observable: every
//! canonical isomorphism is computed as the scalar relating two presented basis wedges.

pub mod bockstein;
pub mod dvr;
pub mod frobenius;
pub mod lines;

pub use bockstein::{
    bockstein_det_a, det02_sign, det02_sign_check, det_a_instance, random_complex, random_det02_setting, Det02Report, Det02Setting,
    DetAReport, FreeComplex12, FreeComplex12Json,
};
pub use dvr::{smith_form, SmithForm, TruncDvr};
pub use frobenius::{bockstein_scalar_limit, det_frobenius, det_frobenius_closed_form, FrobeniusMode};
pub use lines::{evaluation, evaluation_left, four_term_iso, graded_swap, ratio, ses_isomorphism, swap_sign, GradedLine};
