//! p-adic scalars, the ramified quadratic extension, binomial coefficients
//! and bounded power series.

pub mod binom;
pub mod number;
pub mod quad;
pub mod series;

pub use binom::{binom_fractional, binom_rational, digit_sum, vp_factorial};
pub use number::{is_prime, ppow, vp_int, vp_rational, PadicNumber};
pub use quad::{QuadPadic, QuadRational};
pub use series::{BoundedSeries, Tail};
