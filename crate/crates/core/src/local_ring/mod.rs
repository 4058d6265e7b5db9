//! Unramified p-adic rings at fixed precision and truncated power series over them.

pub mod series;
pub mod unramified;
pub mod zpn;

pub use series::TruncatedSeries;
pub use unramified::{padic_log, URElement, UnramifiedRing};
pub use zpn::Zpn;
