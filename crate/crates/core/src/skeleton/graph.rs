//! Finite metric graphs with cusp half-edges, and exact points on them.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::rational_str;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    /// Endpoints `[u, v]`; offsets along the edge are measured from `u`.
    pub ends: [usize; 2],
    #[serde(with = "rational_str")]
    pub length: BigRational,
}

/// A connected metric graph. Loops and multi-edges are allowed; a cusp is a
/// half-edge of infinite length attached at a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct SkeletonGraph {
    vertices: usize,
    edges: Vec<Edge>,
    cusps: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: usize,
    edges: Vec<Edge>,
    #[serde(default)]
    cusps: Vec<usize>,
}

impl TryFrom<GraphRepr> for SkeletonGraph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Self> {
        SkeletonGraph::new(r.vertices, r.edges, r.cusps)
    }
}

impl From<SkeletonGraph> for GraphRepr {
    fn from(g: SkeletonGraph) -> Self {
        GraphRepr { vertices: g.vertices, edges: g.edges, cusps: g.cusps }
    }
}

impl SkeletonGraph {
    pub fn new(vertices: usize, edges: Vec<Edge>, cusps: Vec<usize>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::invalid("a skeleton needs at least one vertex"));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.ends.iter().any(|&v| v >= vertices) {
                return Err(Error::invalid(format!("edge {i} has an endpoint out of range")));
            }
            if !e.length.is_positive() {
                return Err(Error::invalid(format!("edge {i} has non-positive length")));
            }
        }
        if let Some(c) = cusps.iter().position(|&v| v >= vertices) {
            return Err(Error::invalid(format!("cusp {c} is attached out of range")));
        }
        let g = SkeletonGraph { vertices, edges, cusps };
        let comp = g.components(|_| true);
        if comp.iter().any(|&c| c != comp[0]) {
            return Err(Error::invalid("skeleton graph is not connected"));
        }
        Ok(g)
    }

    /// The skeleton of a Tate curve: a cycle of total length `v(q)` cut into `pieces` edges.
    pub fn tate_cycle(vq: &BigRational, pieces: usize) -> Result<Self> {
        let n = pieces.max(1);
        let len = vq / BigRational::from_integer(n.into());
        let edges = (0..n).map(|i| Edge { ends: [i, (i + 1) % n], length: len.clone() }).collect();
        SkeletonGraph::new(n, edges, Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn cusps(&self) -> &[usize] {
        &self.cusps
    }

    pub fn total_length(&self) -> BigRational {
        self.edges.iter().map(|e| e.length.clone()).sum()
    }

    /// Component labels of the subgraph on all vertices using the edges accepted by `keep`.
    pub(crate) fn components(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, e) in self.edges.iter().enumerate() {
            if keep(i) {
                let (a, b) = (find(&mut parent, e.ends[0]), find(&mut parent, e.ends[1]));
                parent[a] = b;
            }
        }
        (0..self.vertices).map(|v| find(&mut parent, v)).collect()
    }

    /// Brings a point to canonical form and checks it lies on the graph.
    pub fn normalize(&self, x: &GraphPoint) -> Result<GraphPoint> {
        match x {
            GraphPoint::Vertex(v) if *v < self.vertices => Ok(x.clone()),
            GraphPoint::Edge { edge, t } if *edge < self.edges.len() => {
                let e = &self.edges[*edge];
                if t.is_negative() || *t > e.length {
                    Err(Error::invalid(format!("offset {t} is outside edge {edge}")))
                } else if t.is_zero() {
                    Ok(GraphPoint::Vertex(e.ends[0]))
                } else if *t == e.length {
                    Ok(GraphPoint::Vertex(e.ends[1]))
                } else {
                    Ok(x.clone())
                }
            }
            GraphPoint::Cusp { cusp, t } if *cusp < self.cusps.len() => {
                if t.is_negative() {
                    Err(Error::invalid(format!("offset {t} is outside cusp {cusp}")))
                } else if t.is_zero() {
                    Ok(GraphPoint::Vertex(self.cusps[*cusp]))
                } else {
                    Ok(x.clone())
                }
            }
            _ => Err(Error::invalid(format!("{x} is not on the graph"))),
        }
    }
}

/// A point of a skeleton: a vertex, an interior point of an edge at offset
/// `t` from its first end, or a point at distance `t` along a cusp.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphPoint {
    Vertex(usize),
    Edge {
        edge: usize,
        #[serde(with = "rational_str")]
        t: BigRational,
    },
    Cusp {
        cusp: usize,
        #[serde(with = "rational_str")]
        t: BigRational,
    },
}

impl fmt::Display for GraphPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphPoint::Vertex(v) => write!(f, "v{v}"),
            GraphPoint::Edge { edge, t } => write!(f, "e{edge}@{t}"),
            GraphPoint::Cusp { cusp, t } => write!(f, "c{cusp}@{t}"),
        }
    }
}
