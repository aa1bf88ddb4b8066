//! Finite towers of skeleta `G_0 ⊂ G_1 ⊂ … ⊂ G_k`, with `G_0` the coarsest.

use serde::{Deserialize, Serialize};

use super::graph::{GraphPoint, SkeletonGraph};
use super::refinement::{compose_check, composite, EmbeddingData, Refinement};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementEntry {
    pub coarse: usize,
    pub fine: usize,
    #[serde(flatten)]
    pub data: EmbeddingData,
}

/// The on-disk form of a tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerFile {
    pub graphs: Vec<SkeletonGraph>,
    pub refinements: Vec<RefinementEntry>,
}

#[derive(Debug, Clone)]
pub struct Tower {
    graphs: Vec<SkeletonGraph>,
    /// `steps[i]` realizes `graphs[i]` inside `graphs[i + 1]`.
    steps: Vec<Refinement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComposeReport {
    pub triples: usize,
    pub samples: usize,
}

impl Tower {
    pub fn new(graphs: Vec<SkeletonGraph>, steps: Vec<EmbeddingData>) -> Result<Self> {
        if graphs.is_empty() || steps.len() + 1 != graphs.len() {
            return Err(Error::invalid("a tower of k + 1 graphs needs k refinements"));
        }
        let steps = steps
            .into_iter()
            .enumerate()
            .map(|(i, d)| Refinement::new(graphs[i].clone(), graphs[i + 1].clone(), d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Tower { graphs, steps })
    }

    pub fn from_file(f: TowerFile) -> Result<Self> {
        let k = f.graphs.len();
        let mut slots: Vec<Option<EmbeddingData>> = vec![None; k.saturating_sub(1)];
        for r in f.refinements {
            if r.coarse + 1 != r.fine || r.fine >= k {
                return Err(Error::invalid(format!(
                    "refinement {} -> {} is not a consecutive step of the chain",
                    r.coarse, r.fine
                )));
            }
            if slots[r.coarse].replace(r.data).is_some() {
                return Err(Error::invalid(format!("refinement {} -> {} given twice", r.coarse, r.fine)));
            }
        }
        let steps = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::invalid(format!("refinement {i} -> {} is missing", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        Tower::new(f.graphs, steps)
    }

    pub fn to_file(&self) -> TowerFile {
        TowerFile {
            graphs: self.graphs.clone(),
            refinements: self
                .steps
                .iter()
                .enumerate()
                .map(|(i, r)| RefinementEntry { coarse: i, fine: i + 1, data: r.data().clone() })
                .collect(),
        }
    }

    /// Number of refinement steps.
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn graphs(&self) -> &[SkeletonGraph] {
        &self.graphs
    }

    pub fn graph(&self, level: usize) -> &SkeletonGraph {
        &self.graphs[level]
    }

    pub fn finest(&self) -> &SkeletonGraph {
        self.graphs.last().unwrap()
    }

    pub fn step(&self, i: usize) -> &Refinement {
        &self.steps[i]
    }

    /// The refinement `graphs[a] ⊂ graphs[b]` for `a ≤ b`.
    pub fn refinement(&self, a: usize, b: usize) -> Result<Refinement> {
        if a > b || b >= self.graphs.len() {
            return Err(Error::invalid(format!("no refinement from level {a} to level {b}")));
        }
        if a == b {
            return Ok(Refinement::identity(&self.graphs[a]));
        }
        let mut acc = self.steps[a].clone();
        for c in a + 1..b {
            acc = composite(&self.steps[c], &acc)?;
        }
        Ok(acc)
    }

    /// Images of a point of the finest graph at every level, coarsest first.
    pub fn images(&self, x: &GraphPoint) -> Result<Vec<GraphPoint>> {
        let mut out = vec![self.finest().normalize(x)?];
        for r in self.steps.iter().rev() {
            let next = r.retract(out.last().unwrap())?;
            out.push(next);
        }
        out.reverse();
        Ok(out)
    }

    /// Runs [`compose_check`] on every triple of levels `a < b < c`,
    /// sampling points of `graphs[c]` with `sampler`.
    pub fn check_compose(&self, sampler: &mut dyn FnMut(&SkeletonGraph) -> Vec<GraphPoint>) -> Result<ComposeReport> {
        let n = self.graphs.len();
        let mut report = ComposeReport { triples: 0, samples: 0 };
        for c in 0..n {
            let samples = sampler(&self.graphs[c]);
            for b in 0..c {
                let r12 = self.refinement(b, c)?;
                for a in 0..b {
                    compose_check(&r12, &self.refinement(a, b)?, &samples)?;
                    report.triples += 1;
                    report.samples += samples.len();
                }
            }
        }
        Ok(report)
    }
}

/// Smallest level at which the images of two distinct points of the finest graph differ.
pub fn tower_separation(tower: &Tower, x: &GraphPoint, y: &GraphPoint) -> Result<usize> {
    let (xs, ys) = (tower.images(x)?, tower.images(y)?);
    if xs.last() == ys.last() {
        return Err(Error::invalid(format!("{x} and {y} are the same point")));
    }
    let level = (0..xs.len()).find(|&i| xs[i] != ys[i]).ok_or(Error::NotSeparated)?;
    // Re-evaluate through the direct refinement at the reported level and the one below.
    let top = tower.depth();
    let direct = tower.refinement(level, top)?;
    if direct.retract(x)? == direct.retract(y)? {
        return Err(Error::CompositionFailure { index: level, detail: "direct retraction does not separate".into() });
    }
    if level > 0 {
        let below = tower.refinement(level - 1, top)?;
        if below.retract(x)? != below.retract(y)? {
            return Err(Error::CompositionFailure { index: level - 1, detail: "direct retraction separates earlier".into() });
        }
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::rat;
    use crate::skeleton::graph::Edge;
    use crate::skeleton::refinement::Step;

    /// One edge of length 2, subdivided at 1, then at 1/2.
    fn tower() -> Tower {
        let g0 = SkeletonGraph::new(2, vec![Edge { ends: [0, 1], length: rat(2, 1) }], vec![]).unwrap();
        let g1 = SkeletonGraph::new(
            3,
            vec![Edge { ends: [0, 2], length: rat(1, 1) }, Edge { ends: [2, 1], length: rat(1, 1) }],
            vec![],
        )
        .unwrap();
        let g2 = SkeletonGraph::new(
            4,
            vec![
                Edge { ends: [0, 3], length: rat(1, 2) },
                Edge { ends: [2, 1], length: rat(1, 1) },
                Edge { ends: [3, 2], length: rat(1, 2) },
            ],
            vec![],
        )
        .unwrap();
        let f = |e| Step { edge: e, reverse: false };
        let s0 = EmbeddingData { vertex_map: vec![0, 1], edge_paths: vec![vec![f(0), f(1)]], cusp_paths: vec![] };
        let s1 = EmbeddingData { vertex_map: vec![0, 1, 2], edge_paths: vec![vec![f(0), f(2)], vec![f(1)]], cusp_paths: vec![] };
        Tower::new(vec![g0, g1, g2], vec![s0, s1]).unwrap()
    }

    #[test]
    fn subdivision_towers_retract_identically() {
        let t = tower();
        let x = GraphPoint::Edge { edge: 2, t: rat(1, 4) };
        let imgs = t.images(&x).unwrap();
        assert_eq!(imgs[0], GraphPoint::Edge { edge: 0, t: rat(3, 4) });
        assert_eq!(imgs[1], GraphPoint::Edge { edge: 0, t: rat(3, 4) });
        let report = t.check_compose(&mut |g| (0..g.edges().len()).map(|e| GraphPoint::Edge { edge: e, t: rat(1, 3) }).collect()).unwrap();
        assert_eq!(report.triples, 1);
    }

    #[test]
    fn separation_levels() {
        let t = tower();
        let a = GraphPoint::Edge { edge: 0, t: rat(1, 4) };
        let b = GraphPoint::Edge { edge: 2, t: rat(1, 4) };
        assert_eq!(tower_separation(&t, &a, &b).unwrap(), 0);
        assert!(tower_separation(&t, &a, &a).is_err());
    }

    #[test]
    fn file_round_trip() {
        let t = tower();
        let json = serde_json::to_string(&t.to_file()).unwrap();
        let back = Tower::from_file(serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.to_file(), t.to_file());
        let mut f = t.to_file();
        f.refinements.pop();
        assert!(Tower::from_file(f).is_err());
    }
}
