//! Seeded random skeleta, towers and sample points.

use num_rational::BigRational;
use rand::Rng;

use super::graph::{Edge, GraphPoint, SkeletonGraph};
use super::refinement::{EmbeddingData, Step};
use super::tower::Tower;
use crate::error::Result;
use crate::ext::rat;

fn length<R: Rng>(rng: &mut R) -> BigRational {
    const DENS: [i64; 5] = [1, 2, 3, 4, 6];
    rat(rng.gen_range(1..=12), DENS[rng.gen_range(0..DENS.len())])
}

/// A rational strictly between 0 and `len`.
fn inside<R: Rng>(rng: &mut R, len: &BigRational) -> BigRational {
    let d = rng.gen_range(2..=7);
    len * rat(rng.gen_range(1..d), d)
}

/// A connected graph: a random spanning tree, a few extra edges (loops and
/// multi-edges included) and possibly a cusp.
pub fn random_graph<R: Rng>(rng: &mut R) -> SkeletonGraph {
    let n = rng.gen_range(1..=4);
    let mut edges: Vec<Edge> =
        (1..n).map(|v| Edge { ends: [rng.gen_range(0..v), v], length: length(rng) }).collect();
    for _ in 0..rng.gen_range(0..=2) {
        edges.push(Edge { ends: [rng.gen_range(0..n), rng.gen_range(0..n)], length: length(rng) });
    }
    let cusps = if rng.gen_bool(0.4) { vec![rng.gen_range(0..n)] } else { Vec::new() };
    SkeletonGraph::new(n, edges, cusps).expect("spanning tree keeps the graph connected")
}

struct Builder {
    vertices: usize,
    edges: Vec<Edge>,
    cusps: Vec<usize>,
    data: EmbeddingData,
}

impl Builder {
    fn new(g: &SkeletonGraph) -> Self {
        Builder {
            vertices: g.vertex_count(),
            edges: g.edges().to_vec(),
            cusps: g.cusps().to_vec(),
            data: EmbeddingData::identity(g),
        }
    }

    fn subdivide(&mut self, e: usize, t: BigRational) {
        let w = self.vertices;
        self.vertices += 1;
        let old = self.edges[e].clone();
        let n = self.edges.len();
        self.edges[e] = Edge { ends: [old.ends[0], w], length: t.clone() };
        self.edges.push(Edge { ends: [w, old.ends[1]], length: old.length - t });
        let split = |path: &mut Vec<Step>| {
            if let Some(k) = path.iter().position(|s| s.edge == e) {
                let r = path[k].reverse;
                let pair = if r {
                    [Step { edge: n, reverse: true }, Step { edge: e, reverse: true }]
                } else {
                    [Step { edge: e, reverse: false }, Step { edge: n, reverse: false }]
                };
                path.splice(k..=k, pair);
            }
        };
        self.data.edge_paths.iter_mut().for_each(split);
        self.data.cusp_paths.iter_mut().for_each(|cp| split(&mut cp.path));
    }

    fn subdivide_cusp(&mut self, c: usize, t: BigRational) {
        let w = self.vertices;
        self.vertices += 1;
        let n = self.edges.len();
        self.edges.push(Edge { ends: [self.cusps[c], w], length: t });
        self.cusps[c] = w;
        for cp in self.data.cusp_paths.iter_mut().filter(|cp| cp.cusp == c) {
            cp.path.push(Step { edge: n, reverse: false });
        }
    }

    fn hang_tree<R: Rng>(&mut self, rng: &mut R, at: usize) {
        let mut nodes = vec![at];
        for _ in 0..rng.gen_range(1..=3) {
            let w = self.vertices;
            self.vertices += 1;
            let parent = nodes[rng.gen_range(0..nodes.len())];
            self.edges.push(Edge { ends: [parent, w], length: length(rng) });
            nodes.push(w);
        }
        if rng.gen_bool(0.3) {
            self.cusps.push(*nodes.last().unwrap());
        }
    }

    fn finish(self) -> (SkeletonGraph, EmbeddingData) {
        let g = SkeletonGraph::new(self.vertices, self.edges, self.cusps).expect("refinement keeps the graph connected");
        (g, self.data)
    }
}

/// A random refinement of `g`: subdivided edges and cusps plus hanging trees.
pub fn random_refinement<R: Rng>(rng: &mut R, g: &SkeletonGraph) -> (SkeletonGraph, EmbeddingData) {
    let mut b = Builder::new(g);
    for _ in 0..rng.gen_range(1..=4) {
        match rng.gen_range(0..3) {
            0 if !b.edges.is_empty() => {
                let e = rng.gen_range(0..b.edges.len());
                let t = inside(rng, &b.edges[e].length.clone());
                b.subdivide(e, t);
            }
            1 if !b.cusps.is_empty() => {
                let c = rng.gen_range(0..b.cusps.len());
                b.subdivide_cusp(c, length(rng));
            }
            _ => {
                let at = rng.gen_range(0..b.vertices);
                b.hang_tree(rng, at);
            }
        }
    }
    b.finish()
}

/// A tower of the given depth over a random base graph.
pub fn random_tower<R: Rng>(rng: &mut R, depth: usize) -> Result<Tower> {
    let mut graphs = vec![random_graph(rng)];
    let mut steps = Vec::with_capacity(depth);
    for _ in 0..depth {
        let (g, d) = random_refinement(rng, graphs.last().unwrap());
        graphs.push(g);
        steps.push(d);
    }
    Tower::new(graphs, steps)
}

/// Random vertices, edge points and cusp points of `g`.
pub fn sample_points<R: Rng>(rng: &mut R, g: &SkeletonGraph, n: usize) -> Vec<GraphPoint> {
    (0..n)
        .map(|_| match rng.gen_range(0..6) {
            0 => GraphPoint::Vertex(rng.gen_range(0..g.vertex_count())),
            5 if !g.cusps().is_empty() => GraphPoint::Cusp { cusp: rng.gen_range(0..g.cusps().len()), t: length(rng) },
            _ if !g.edges().is_empty() => {
                let e = rng.gen_range(0..g.edges().len());
                GraphPoint::Edge { edge: e, t: inside(rng, &g.edge(e).length) }
            }
            _ => GraphPoint::Vertex(rng.gen_range(0..g.vertex_count())),
        })
        .collect()
}
