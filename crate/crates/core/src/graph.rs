//! The comparison multigraph: one edge per answer, from the declared bigger
//! element to the declared smaller one.
//!
//! For a consistent (acyclic) graph the degree counts decide candidacy on
//! their own: an element can still be the maximum iff at most `k` answers
//! placed something above it, and dually for the minimum.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::model::{Answer, Claim, ElementId, GameKind, Query, Transcript};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("comparison graph has a directed cycle; degree criteria do not apply")]
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonGraph {
    n: usize,
    edge_mult: BTreeMap<(usize, usize), u32>,
    in_deg: Vec<u32>,
    out_deg: Vec<u32>,
}

impl ComparisonGraph {
    pub fn new(n: usize) -> Self {
        ComparisonGraph {
            n,
            edge_mult: BTreeMap::new(),
            in_deg: vec![0; n],
            out_deg: vec![0; n],
        }
    }

    pub fn from_transcript(t: &Transcript) -> Self {
        let mut g = ComparisonGraph::new(t.n());
        for &(q, a) in t.entries() {
            g.record(q, a);
        }
        g
    }

    pub fn record(&mut self, q: Query, answer: Answer) {
        self.add_edge(q.winner(answer), q.loser(answer));
    }

    pub fn add_edge(&mut self, winner: ElementId, loser: ElementId) {
        *self.edge_mult.entry((winner.0, loser.0)).or_default() += 1;
        self.out_deg[winner.0] += 1;
        self.in_deg[loser.0] += 1;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn in_degree(&self, v: ElementId) -> u32 {
        self.in_deg[v.0]
    }

    pub fn out_degree(&self, v: ElementId) -> u32 {
        self.out_deg[v.0]
    }

    pub fn in_degrees(&self) -> &[u32] {
        &self.in_deg
    }

    pub fn out_degrees(&self) -> &[u32] {
        &self.out_deg
    }

    pub fn multiplicity(&self, winner: ElementId, loser: ElementId) -> u32 {
        self.edge_mult
            .get(&(winner.0, loser.0))
            .copied()
            .unwrap_or(0)
    }

    pub fn touched(&self, v: ElementId) -> bool {
        self.in_deg[v.0] + self.out_deg[v.0] > 0
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.edge_mult.values().sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (ElementId, ElementId, u32)> + '_ {
        self.edge_mult
            .iter()
            .map(|(&(w, l), &m)| (ElementId(w), ElementId(l), m))
    }

    /// Acyclicity of the underlying simple digraph (iterative three-colour DFS).
    pub fn is_consistent(&self) -> bool {
        let mut succ = vec![Vec::new(); self.n];
        for &(w, l) in self.edge_mult.keys() {
            succ[w].push(l);
        }
        // 0 = unvisited, 1 = on stack, 2 = finished
        let mut colour = vec![0u8; self.n];
        for root in 0..self.n {
            if colour[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            colour[root] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if let Some(&w) = succ[v].get(*next) {
                    *next += 1;
                    match colour[w] {
                        0 => {
                            colour[w] = 1;
                            stack.push((w, 0));
                        }
                        1 => return false,
                        _ => {}
                    }
                } else {
                    colour[v] = 2;
                    stack.pop();
                }
            }
        }
        true
    }

    pub fn max_candidates(&self, k: u32) -> Result<BTreeSet<ElementId>, GraphError> {
        self.candidates(&self.in_deg, k)
    }

    pub fn min_candidates(&self, k: u32) -> Result<BTreeSet<ElementId>, GraphError> {
        self.candidates(&self.out_deg, k)
    }

    fn candidates(&self, deg: &[u32], k: u32) -> Result<BTreeSet<ElementId>, GraphError> {
        if !self.is_consistent() {
            return Err(GraphError::Inconsistent);
        }
        Ok((0..self.n)
            .filter(|&v| deg[v] <= k)
            .map(ElementId)
            .collect())
    }

    /// The claim forced by the degree counts, if both candidate sets needed
    /// by `kind` are singletons.
    pub fn determined(&self, k: u32, kind: GameKind) -> Result<Option<Claim>, GraphError> {
        let single = |set: BTreeSet<ElementId>| {
            if set.len() == 1 {
                set.into_iter().next()
            } else {
                None
            }
        };
        let max = single(self.max_candidates(k)?);
        Ok(match kind {
            GameKind::Max => max.map(Claim::Max),
            GameKind::MaxMin => {
                let min = single(self.min_candidates(k)?);
                max.zip(min).map(|(max, min)| Claim::MaxMin { max, min })
            }
        })
    }
}

/// Edge list, one `winner>loser xMult` line per distinct edge.
impl fmt::Display for ComparisonGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&(w, l), &m) in &self.edge_mult {
            writeln!(f, "{w}>{l} x{m}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::consistent_scenarios;

    fn graph(n: usize, edges: &[(usize, usize)]) -> ComparisonGraph {
        let mut g = ComparisonGraph::new(n);
        for &(w, l) in edges {
            g.add_edge(ElementId(w), ElementId(l));
        }
        g
    }

    fn ids(v: &[usize]) -> BTreeSet<ElementId> {
        v.iter().copied().map(ElementId).collect()
    }

    #[test]
    fn from_transcript_examples() {
        let g = ComparisonGraph::from_transcript(&Transcript::new(3));
        assert_eq!(g.in_degrees(), &[0, 0, 0]);
        assert_eq!(g.out_degrees(), &[0, 0, 0]);

        let q = Query::new(0, 1).unwrap();
        let t = Transcript::from_entries(3, [(q, Answer::First)]).unwrap();
        let g = ComparisonGraph::from_transcript(&t);
        assert_eq!(g.in_degrees(), &[0, 1, 0]);
        assert_eq!(g.out_degrees(), &[1, 0, 0]);
        assert!(g.touched(ElementId(0)) && !g.touched(ElementId(2)));

        let t = Transcript::from_entries(2, [(q, Answer::First), (q, Answer::First)]).unwrap();
        let g = ComparisonGraph::from_transcript(&t);
        assert_eq!(g.multiplicity(ElementId(0), ElementId(1)), 2);
        assert_eq!(g.in_degree(ElementId(1)), 2);
        assert_eq!(g.to_string(), "0>1 x2\n");
    }

    #[test]
    fn consistency_examples() {
        assert!(graph(3, &[(0, 1), (1, 2)]).is_consistent());
        assert!(!graph(2, &[(0, 1), (1, 0)]).is_consistent());
        assert!(ComparisonGraph::new(4).is_consistent());
        assert!(!graph(4, &[(0, 1), (1, 2), (2, 3), (3, 1)]).is_consistent());
    }

    #[test]
    fn candidate_examples() {
        assert_eq!(graph(3, &[(0, 1), (0, 2)]).max_candidates(0).unwrap(), ids(&[0]));
        assert_eq!(graph(3, &[(0, 1)]).max_candidates(0).unwrap(), ids(&[0, 2]));
        assert_eq!(graph(3, &[(0, 1), (2, 1)]).min_candidates(0).unwrap(), ids(&[1]));
        assert_eq!(ComparisonGraph::new(2).min_candidates(0).unwrap(), ids(&[0, 1]));
        assert_eq!(graph(3, &[(0, 1)]).min_candidates(1).unwrap(), ids(&[0, 1, 2]));
        assert_eq!(
            graph(2, &[(0, 1), (1, 0)]).max_candidates(0),
            Err(GraphError::Inconsistent)
        );
    }

    #[test]
    fn doubled_edge_rules_out_the_loser_at_budget_one() {
        let g = graph(2, &[(0, 1), (0, 1)]);
        assert_eq!(g.max_candidates(1).unwrap(), ids(&[0]));
        assert_eq!(g.max_candidates(2).unwrap(), ids(&[0, 1]));
        // brute force: putting 1 on top contradicts both answers
        let q = Query::new(0, 1).unwrap();
        let t = Transcript::from_entries(2, [(q, Answer::First), (q, Answer::First)]).unwrap();
        assert_eq!(
            consistent_scenarios(&t, 1, GameKind::Max).unwrap(),
            [Claim::Max(ElementId(0))].into()
        );
        assert_eq!(consistent_scenarios(&t, 2, GameKind::Max).unwrap().len(), 2);
    }

    #[test]
    fn determined_examples() {
        let chain = graph(3, &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(
            chain.determined(0, GameKind::MaxMin).unwrap(),
            Some(Claim::MaxMin {
                max: ElementId(0),
                min: ElementId(2)
            })
        );
        assert_eq!(graph(3, &[(0, 1), (0, 2)]).determined(0, GameKind::MaxMin).unwrap(), None);

        let star_into_zero = graph(4, &[(1, 0), (1, 0), (2, 0), (2, 0), (3, 0), (3, 0)]);
        assert_eq!(star_into_zero.determined(1, GameKind::Max).unwrap(), None);

        let star_from_zero = graph(4, &[(0, 1), (0, 1), (0, 2), (0, 2), (0, 3), (0, 3)]);
        assert_eq!(
            star_from_zero.determined(1, GameKind::Max).unwrap(),
            Some(Claim::Max(ElementId(0)))
        );
        let entries = star_from_zero.edges().flat_map(|(w, l, m)| {
            let q = Query::new(w.0, l.0).unwrap();
            std::iter::repeat_n((q, Answer::First), m as usize)
        });
        let t = Transcript::from_entries(4, entries).unwrap();
        assert_eq!(
            consistent_scenarios(&t, 1, GameKind::Max).unwrap(),
            [Claim::Max(ElementId(0))].into()
        );
    }
}
