//! Ordered subdivision sets of an edge and their completion.
//!
//! Each level of a tower marks finitely many rational positions on an edge
//! of length `L`; later levels contain earlier ones. The union is kept as an
//! ordered rational list with formal end cuts `0_e` and `1_e`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use super::tower::Tower;
use crate::error::{Error, Result};
use crate::ext::rational_str;

/// A cut of the completed subdivision set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cut {
    Bottom,
    At(BigRational),
    Top,
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cut::Bottom => f.write_str("0_e"),
            Cut::At(t) => write!(f, "{t}"),
            Cut::Top => f.write_str("1_e"),
        }
    }
}

impl Serialize for Cut {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionSet {
    #[serde(with = "rational_str")]
    length: BigRational,
    levels: Vec<Vec<BigRational>>,
    reversed: bool,
}

impl SubdivisionSet {
    pub fn new(length: BigRational, levels: Vec<Vec<BigRational>>, reversed: bool) -> Result<Self> {
        if !length.is_positive() {
            return Err(Error::invalid("edge length must be positive"));
        }
        for (i, lv) in levels.iter().enumerate() {
            if lv.iter().any(|t| !t.is_positive() || *t >= length) {
                return Err(Error::invalid(format!("level {i} has a position outside (0, L)")));
            }
            if lv.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!("level {i} is not strictly increasing")));
            }
            if i > 0 {
                if let Some(t) = levels[i - 1].iter().find(|t| lv.binary_search(t).is_err()) {
                    return Err(Error::invalid(format!("position {t} of level {} is missing from level {i}", i - 1)));
                }
            }
        }
        Ok(SubdivisionSet { length, levels, reversed })
    }

    /// The vertices each tower level places on the image of a coarsest edge.
    pub fn from_tower(tower: &Tower, edge: usize) -> Result<Self> {
        let length = tower
            .graph(0)
            .edges()
            .get(edge)
            .ok_or_else(|| Error::invalid(format!("edge {edge} does not exist")))?
            .length
            .clone();
        let levels = (0..=tower.depth())
            .map(|l| tower.refinement(0, l)?.edge_subdivision(edge))
            .collect::<Result<Vec<_>>>()?;
        SubdivisionSet::new(length, levels, false)
    }

    pub fn length(&self) -> &BigRational {
        &self.length
    }

    pub fn levels(&self) -> &[Vec<BigRational>] {
        &self.levels
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    /// The same set read from the other end of the edge.
    pub fn reversed(&self) -> Self {
        let levels = self.levels.iter().map(|lv| lv.iter().rev().map(|t| &self.length - t).collect()).collect();
        SubdivisionSet { length: self.length.clone(), levels, reversed: !self.reversed }
    }
}

/// The ordered union of all levels with the end cuts adjoined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletedSet {
    #[serde(with = "rational_str")]
    length: BigRational,
    reversed: bool,
    cuts: Vec<Cut>,
}

impl CompletedSet {
    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    /// The order-reversing identification with the opposite orientation.
    pub fn reverse_cut(&self, c: &Cut) -> Cut {
        match c {
            Cut::Bottom => Cut::Top,
            Cut::Top => Cut::Bottom,
            Cut::At(t) => Cut::At(&self.length - t),
        }
    }

    pub fn reverse(&self) -> Self {
        CompletedSet {
            length: self.length.clone(),
            reversed: !self.reversed,
            cuts: self.cuts.iter().rev().map(|c| self.reverse_cut(c)).collect(),
        }
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.cuts.windows(2).all(|w| w[0] < w[1])
    }
}

pub fn subdivision_union(set: &SubdivisionSet) -> CompletedSet {
    let mut pts: Vec<BigRational> = set.levels.iter().flatten().cloned().collect();
    pts.sort();
    pts.dedup();
    let mut cuts = Vec::with_capacity(pts.len() + 2);
    cuts.push(Cut::Bottom);
    cuts.extend(pts.into_iter().filter(|t| !t.is_zero()).map(Cut::At));
    cuts.push(Cut::Top);
    CompletedSet { length: set.length.clone(), reversed: set.reversed, cuts }
}
