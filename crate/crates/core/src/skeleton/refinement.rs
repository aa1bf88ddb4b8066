//! Embeddings of a coarse skeleton into a finer one and the retraction back.
//!
//! The coarse graph is realized inside the fine one: vertices go to vertices,
//! edges to edge paths of the same total length, cusps to a finite path
//! followed by a fine cusp. Whatever the image misses must be a union of
//! trees, each attached to the image at a single vertex; the retraction
//! collapses each tree onto its attachment point.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::graph::{GraphPoint, SkeletonGraph};
use crate::error::{Error, Result};

/// One fine edge of an image path, walked from its first end unless `reverse`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "StepRepr", into = "StepRepr")]
pub struct Step {
    pub edge: usize,
    pub reverse: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum StepRepr {
    Forward(usize),
    Full {
        edge: usize,
        #[serde(default)]
        reverse: bool,
    },
}

impl From<StepRepr> for Step {
    fn from(r: StepRepr) -> Self {
        match r {
            StepRepr::Forward(edge) => Step { edge, reverse: false },
            StepRepr::Full { edge, reverse } => Step { edge, reverse },
        }
    }
}

impl From<Step> for StepRepr {
    fn from(s: Step) -> Self {
        if s.reverse {
            StepRepr::Full { edge: s.edge, reverse: true }
        } else {
            StepRepr::Forward(s.edge)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspPath {
    pub path: Vec<Step>,
    pub cusp: usize,
}

/// The combinatorial data of an embedding, as stored in tower files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingData {
    pub vertex_map: Vec<usize>,
    pub edge_paths: Vec<Vec<Step>>,
    #[serde(default)]
    pub cusp_paths: Vec<CuspPath>,
}

impl EmbeddingData {
    /// The identity embedding of a graph into itself.
    pub fn identity(g: &SkeletonGraph) -> Self {
        EmbeddingData {
            vertex_map: (0..g.vertex_count()).collect(),
            edge_paths: (0..g.edges().len()).map(|e| vec![Step { edge: e, reverse: false }]).collect(),
            cusp_paths: (0..g.cusps().len()).map(|c| CuspPath { path: Vec::new(), cusp: c }).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Owner {
    Edge(usize),
    Cusp(usize),
}

#[derive(Debug, Clone)]
struct EdgeImage {
    owner: Owner,
    start: BigRational,
    reverse: bool,
}

/// A validated refinement with its derived lookup tables.
#[derive(Debug, Clone)]
pub struct Refinement {
    coarse: SkeletonGraph,
    fine: SkeletonGraph,
    data: EmbeddingData,
    vertex_image: Vec<Option<GraphPoint>>,
    edge_image: Vec<Option<EdgeImage>>,
    cusp_image: Vec<Option<(usize, BigRational)>>,
    attach: Vec<usize>,
}

fn walk(fine: &SkeletonGraph, from: usize, path: &[Step]) -> Result<Vec<(usize, BigRational)>> {
    let mut out = vec![(from, BigRational::zero())];
    let mut at = from;
    let mut len = BigRational::zero();
    for s in path {
        let e = fine.edges().get(s.edge).ok_or_else(|| Error::invalid(format!("fine edge {} does not exist", s.edge)))?;
        let (a, b) = if s.reverse { (e.ends[1], e.ends[0]) } else { (e.ends[0], e.ends[1]) };
        if a != at {
            return Err(Error::invalid(format!("path breaks at fine edge {}", s.edge)));
        }
        at = b;
        len += &e.length;
        out.push((at, len.clone()));
    }
    Ok(out)
}

impl Refinement {
    pub fn new(coarse: SkeletonGraph, fine: SkeletonGraph, data: EmbeddingData) -> Result<Self> {
        let bad = |m: String| Err(Error::invalid(format!("invalid refinement: {m}")));
        let (nv, ne, nc) = (coarse.vertex_count(), coarse.edges().len(), coarse.cusps().len());
        if data.vertex_map.len() != nv || data.edge_paths.len() != ne || data.cusp_paths.len() != nc {
            return bad("maps do not match the coarse graph".into());
        }
        let mut vertex_image: Vec<Option<GraphPoint>> = vec![None; fine.vertex_count()];
        for (c, &f) in data.vertex_map.iter().enumerate() {
            if f >= fine.vertex_count() {
                return bad(format!("vertex {c} maps out of range"));
            }
            if vertex_image[f].is_some() {
                return bad(format!("vertex map is not injective at {c}"));
            }
            vertex_image[f] = Some(GraphPoint::Vertex(c));
        }
        let mut edge_image: Vec<Option<EdgeImage>> = vec![None; fine.edges().len()];
        let mut claim = |owner: Owner, path: &[Step], stops: &[(usize, BigRational)], vi: &mut Vec<Option<GraphPoint>>, last_interior: bool| -> Result<()> {
            for (k, s) in path.iter().enumerate() {
                if edge_image[s.edge].is_some() {
                    return Err(Error::invalid(format!("invalid refinement: fine edge {} is used twice", s.edge)));
                }
                edge_image[s.edge] = Some(EdgeImage { owner: owner.clone(), start: stops[k].1.clone(), reverse: s.reverse });
            }
            let interior = if last_interior { &stops[1..] } else { &stops[1..stops.len() - 1] };
            for (v, off) in interior {
                if vi[*v].is_some() {
                    return Err(Error::invalid(format!("invalid refinement: fine vertex {v} is hit twice")));
                }
                vi[*v] = Some(match owner {
                    Owner::Edge(e) => GraphPoint::Edge { edge: e, t: off.clone() },
                    Owner::Cusp(c) => GraphPoint::Cusp { cusp: c, t: off.clone() },
                });
            }
            Ok(())
        };
        for (e, path) in data.edge_paths.iter().enumerate() {
            let ce = coarse.edge(e);
            let stops = walk(&fine, data.vertex_map[ce.ends[0]], path)?;
            let (end, len) = stops.last().unwrap();
            if *end != data.vertex_map[ce.ends[1]] {
                return bad(format!("path of edge {e} ends at the wrong vertex"));
            }
            if *len != ce.length {
                return bad(format!("path of edge {e} has length {len}, expected {}", ce.length));
            }
            claim(Owner::Edge(e), path, &stops, &mut vertex_image, false)?;
        }
        let mut cusp_image = vec![None; fine.cusps().len()];
        for (c, cp) in data.cusp_paths.iter().enumerate() {
            let stops = walk(&fine, data.vertex_map[coarse.cusps()[c]], &cp.path)?;
            let (end, len) = stops.last().unwrap().clone();
            match fine.cusps().get(cp.cusp) {
                Some(&v) if v == end => {}
                _ => return bad(format!("cusp {c} does not end on its fine cusp")),
            }
            if cusp_image[cp.cusp].is_some() {
                return bad(format!("fine cusp {} is used twice", cp.cusp));
            }
            cusp_image[cp.cusp] = Some((c, len));
            claim(Owner::Cusp(c), &cp.path, &stops, &mut vertex_image, true)?;
        }

        // The complement of the image must be a forest with one image vertex per tree.
        let mut parent: Vec<usize> = (0..fine.vertex_count()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, e) in fine.edges().iter().enumerate() {
            if edge_image[i].is_none() {
                let (a, b) = (find(&mut parent, e.ends[0]), find(&mut parent, e.ends[1]));
                if a == b {
                    return bad(format!("fine edge {i} closes a cycle outside the image"));
                }
                parent[a] = b;
            }
        }
        let mut root_anchor: Vec<Option<usize>> = vec![None; fine.vertex_count()];
        for v in 0..fine.vertex_count() {
            if vertex_image[v].is_some() {
                let r = find(&mut parent, v);
                if let Some(w) = root_anchor[r] {
                    return bad(format!("fine vertices {w} and {v} of the image are joined outside it"));
                }
                root_anchor[r] = Some(v);
            }
        }
        let mut attach = Vec::with_capacity(fine.vertex_count());
        for v in 0..fine.vertex_count() {
            let r = find(&mut parent, v);
            match root_anchor[r] {
                Some(a) => attach.push(a),
                None => return bad(format!("fine vertex {v} is not attached to the image")),
            }
        }
        Ok(Refinement { coarse, fine, data, vertex_image, edge_image, cusp_image, attach })
    }

    /// A graph refining itself trivially.
    pub fn identity(g: &SkeletonGraph) -> Self {
        Refinement::new(g.clone(), g.clone(), EmbeddingData::identity(g)).expect("identity embedding is valid")
    }

    pub fn coarse(&self) -> &SkeletonGraph {
        &self.coarse
    }

    pub fn fine(&self) -> &SkeletonGraph {
        &self.fine
    }

    pub fn data(&self) -> &EmbeddingData {
        &self.data
    }

    /// Whether a fine point lies on the image of the coarse graph.
    pub fn in_image(&self, x: &GraphPoint) -> Result<bool> {
        Ok(match self.fine.normalize(x)? {
            GraphPoint::Vertex(v) => self.vertex_image[v].is_some(),
            GraphPoint::Edge { edge, .. } => self.edge_image[edge].is_some(),
            GraphPoint::Cusp { cusp, .. } => self.cusp_image[cusp].is_some(),
        })
    }

    /// The fine vertex a vertex of a hanging tree is attached at (itself on the image).
    pub fn attachment(&self, v: usize) -> usize {
        self.attach[v]
    }

    fn owned(&self, owner: &Owner, t: BigRational) -> Result<GraphPoint> {
        self.coarse.normalize(&match owner {
            Owner::Edge(e) => GraphPoint::Edge { edge: *e, t },
            Owner::Cusp(c) => GraphPoint::Cusp { cusp: *c, t },
        })
    }

    /// Nearest-point retraction of the fine graph onto the coarse one.
    pub fn retract(&self, x: &GraphPoint) -> Result<GraphPoint> {
        let vertex = |v: usize| Ok(self.vertex_image[self.attach[v]].clone().expect("attachment lies on the image"));
        match self.fine.normalize(x)? {
            GraphPoint::Vertex(v) => vertex(v),
            GraphPoint::Edge { edge, t } => match &self.edge_image[edge] {
                Some(im) => {
                    let len = &self.fine.edge(edge).length;
                    let along = if im.reverse { len - &t } else { t };
                    self.owned(&im.owner, &im.start + along)
                }
                None => vertex(self.fine.edge(edge).ends[0]),
            },
            GraphPoint::Cusp { cusp, t } => match &self.cusp_image[cusp] {
                Some((c, start)) => self.owned(&Owner::Cusp(*c), start + t),
                None => vertex(self.fine.cusps()[cusp]),
            },
        }
    }

    /// The embedding of coarse points into the fine graph.
    pub fn embed(&self, y: &GraphPoint) -> Result<GraphPoint> {
        let (start, path, tail_cusp, t) = match self.coarse.normalize(y)? {
            GraphPoint::Vertex(v) => return Ok(GraphPoint::Vertex(self.data.vertex_map[v])),
            GraphPoint::Edge { edge, t } => {
                (self.data.vertex_map[self.coarse.edge(edge).ends[0]], &self.data.edge_paths[edge], None, t)
            }
            GraphPoint::Cusp { cusp, t } => {
                let cp = &self.data.cusp_paths[cusp];
                (self.data.vertex_map[self.coarse.cusps()[cusp]], &cp.path, Some(cp.cusp), t)
            }
        };
        let stops = walk(&self.fine, start, path)?;
        for (k, s) in path.iter().enumerate() {
            let (lo, hi) = (&stops[k].1, &stops[k + 1].1);
            if t <= *hi {
                let into = &t - lo;
                let len = &self.fine.edge(s.edge).length;
                let off = if s.reverse { len - into } else { into };
                return self.fine.normalize(&GraphPoint::Edge { edge: s.edge, t: off });
            }
        }
        match tail_cusp {
            Some(c) => self.fine.normalize(&GraphPoint::Cusp { cusp: c, t: t - &stops.last().unwrap().1 }),
            None => Err(Error::invalid(format!("{y} lies beyond its edge"))),
        }
    }

    /// Offsets of image vertices interior to the image of a coarse edge.
    pub fn edge_subdivision(&self, edge: usize) -> Result<Vec<BigRational>> {
        let ce = self.coarse.edges().get(edge).ok_or_else(|| Error::invalid(format!("edge {edge} does not exist")))?;
        let stops = walk(&self.fine, self.data.vertex_map[ce.ends[0]], &self.data.edge_paths[edge])?;
        Ok(stops[1..stops.len() - 1].iter().map(|(_, t)| t.clone()).collect())
    }
}

fn reversed(path: &[Step]) -> Vec<Step> {
    path.iter().rev().map(|s| Step { edge: s.edge, reverse: !s.reverse }).collect()
}

/// Composite refinement `G3 ⊂ G1` of `r12: G2 ⊂ G1` and `r23: G3 ⊂ G2`.
pub fn composite(r12: &Refinement, r23: &Refinement) -> Result<Refinement> {
    if r12.coarse != r23.fine {
        return Err(Error::invalid("refinements do not chain"));
    }
    let expand = |path: &[Step]| -> Vec<Step> {
        path.iter()
            .flat_map(|s| {
                let p = &r12.data.edge_paths[s.edge];
                if s.reverse { reversed(p) } else { p.clone() }
            })
            .collect()
    };
    let data = EmbeddingData {
        vertex_map: r23.data.vertex_map.iter().map(|&v| r12.data.vertex_map[v]).collect(),
        edge_paths: r23.data.edge_paths.iter().map(|p| expand(p)).collect(),
        cusp_paths: r23
            .data
            .cusp_paths
            .iter()
            .map(|cp| {
                let mid = &r12.data.cusp_paths[cp.cusp];
                let mut path = expand(&cp.path);
                path.extend(mid.path.iter().copied());
                CuspPath { path, cusp: mid.cusp }
            })
            .collect(),
    };
    Refinement::new(r23.coarse.clone(), r12.fine.clone(), data)
}

/// Checks `r23 ∘ r12 = r13` and `r13 ∘ ι12 ∘ r12 = r13` on every sample of the finest graph.
pub fn compose_check(r12: &Refinement, r23: &Refinement, samples: &[GraphPoint]) -> Result<()> {
    let r13 = composite(r12, r23)?;
    for (index, x) in samples.iter().enumerate() {
        let mid = r12.retract(x)?;
        let direct = r13.retract(x)?;
        let stepwise = r23.retract(&mid)?;
        if stepwise != direct {
            return Err(Error::CompositionFailure { index, detail: format!("r23(r12({x})) = {stepwise} but r13({x}) = {direct}") });
        }
        let back = r13.retract(&r12.embed(&mid)?)?;
        if back != direct {
            return Err(Error::CompositionFailure { index, detail: format!("r13(i12(r12({x}))) = {back} but r13({x}) = {direct}") });
        }
    }
    Ok(())
}
