//! Exact kernels for p-adic analytic geometry on the line and on Tate curves.
//!
//! The crate is organised by subsystem:
//!
//! * [`padic`]: capped-precision p-adic numbers, the ramified quadratic
//!   extension `Q_p(π)` with `π² = p`, binomial coefficients and power series
//!   with certified affine tail bounds.
//! * [`berkovich`]: ball points `b_{a,r}` of the Berkovich affine line,
//!   seminorms, joins and the rays used by splitting ladders.
//! * [`torsor`]: splitting radii of `μ_{p^n}`-torsors pulled back along a germ,
//!   Artin–Schreier genus certificates and logarithmic-derivative orders.
//! * [`poles`]: the achievable-order solver for combinations `Σ a_i/(X-i)`.
//! * [`tate`]: currents on the Tate tree, `α`, `δ`, Möbius currents, theta
//!   products and the ladder estimate of `ord_z(δ(c)) + 1`.
//! * [`skeleton`]: metric graphs, refinements, retractions and subdivision
//!   sets with their order completions.
//!
//! Every value that leaves this crate is exact: rationals are `BigRational`,
//! p-adic numbers carry their absolute precision, and truncated infinite sums
//! report the valuation of the discarded tail.

pub mod berkovich;
pub mod error;
pub mod ext;
pub mod linalg;
pub mod padic;
pub mod poles;
pub mod skeleton;
pub mod tate;
pub mod torsor;

pub use error::{Error, ErrorKind, Result};
pub use ext::ExtQ;
pub use padic::{PadicNumber, QuadPadic};

/// Default absolute precision (in powers of `p`) for constructed numbers.
pub const DEFAULT_PRECISION: i64 = 64;
