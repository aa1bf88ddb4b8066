//! The Tate curve `G_m/q^Z`: currents on its tree, the function attached to
//! a current, differentials, theta products and the splitting ladder.

pub mod alpha;
pub mod current;
pub mod delta;
pub mod ladder;
pub mod theta;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::PadicNumber;

pub use alpha::{alpha_eval, current_from_slopes, factored_alpha, AlphaValue, FactoredFunction, Root};
pub use current::{moebius, moebius_current, moebius_current_upto, Current, CurrentRepr, Ring};
pub use delta::{delta_at_one, delta_eval, poly_current_eval, DeltaValue, PolyEval};
pub use ladder::{ladder_ord, LadderResult};
pub use theta::{theta_automorphy, theta_product, ThetaValue};

/// `G_m/q^Z` with `0 < v(q) < ∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TateCurve {
    q: PadicNumber,
}

impl TateCurve {
    pub fn new(q: PadicNumber) -> Result<Self> {
        match q.val() {
            Some(v) if v > 0 => Ok(TateCurve { q }),
            Some(v) => Err(Error::invalid(format!("Tate parameter needs v(q) > 0, got {v}"))),
            None => Err(Error::invalid("Tate parameter is zero at working precision")),
        }
    }

    pub fn q(&self) -> &PadicNumber {
        &self.q
    }

    pub fn p(&self) -> u64 {
        self.q.p()
    }

    pub fn vq(&self) -> i64 {
        self.q.val().expect("checked at construction")
    }

    /// Working precision, inherited from `q`.
    pub fn prec(&self) -> i64 {
        self.q.prec()
    }

    /// `q^j` for any integer `j`.
    pub fn q_pow(&self, j: i64) -> PadicNumber {
        self.q.pow(j).expect("q is invertible")
    }
}
