//! Exact worst-case query counts for tiny games by exhaustive minimax.
//!
//! A position is summarised by the lie count of the transcript against
//! every one of the `n!` scenarios (capped: anything above `k` is dead).
//! The solver picks a query, the adversary picks any answer that keeps at
//! least one scenario alive, and the game ends once all live scenarios agree
//! on the target. Positions are memoised under a relabelling-invariant key.

use std::collections::HashSet;
use std::sync::Arc;

use dashmap::DashMap;
use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use thiserror::Error;

use crate::model::{Answer, ElementId, GameKind, Query, Transcript};
use crate::scenarios::ScenarioSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("instance n = {n}, k = {k} is outside the exact-solver guard (n <= 5, k <= 3, and k <= 1 when n = 5)")]
    OutsideGuard { n: usize, k: usize },
    #[error("search exceeded the depth cap of {0} queries")]
    DepthCap(usize),
    #[error("answer leaves no scenario within budget")]
    Unsatisfiable,
}

pub fn within_guard(n: usize, k: usize) -> bool {
    (1..=5).contains(&n) && k <= 3 && (n < 5 || k <= 1)
}

/// Lie counts against every scenario; an entry of `k + 1` means dead.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameValueState {
    lie_vec: Vec<u8>,
    kind: GameKind,
    k: usize,
}

impl GameValueState {
    pub fn fresh(n: usize, k: usize, kind: GameKind) -> Self {
        let count = (1..=n).product::<usize>();
        GameValueState {
            lie_vec: vec![0; count],
            kind,
            k,
        }
    }

    pub fn lie_vec(&self) -> &[u8] {
        &self.lie_vec
    }

    pub fn dead(&self) -> u8 {
        self.k as u8 + 1
    }

    pub fn alive_count(&self) -> usize {
        self.lie_vec.iter().filter(|&&l| l < self.dead()).count()
    }
}

/// Precomputed tables for one `(n, k, kind)`.
#[derive(Debug)]
pub struct GameTables {
    n: usize,
    k: usize,
    kind: GameKind,
    space: Arc<ScenarioSpace>,
    /// Target of each scenario, encoded as a small integer.
    claim_code: Vec<u8>,
    /// For each relabelling, `src[j]` is the scenario that lands on `j`.
    relabel_src: Vec<Vec<u16>>,
}

impl GameTables {
    pub fn new(n: usize, k: usize, kind: GameKind) -> Self {
        let space = ScenarioSpace::shared(n);
        let claim_code = (0..space.len())
            .map(|s| {
                let r = space.ranks(s);
                let max = r.iter().position(|&x| x as usize + 1 == n).unwrap_or(0);
                let min = r.iter().position(|&x| x == 0).unwrap_or(0);
                match kind {
                    GameKind::Max => max as u8,
                    GameKind::MaxMin => (max * n + min) as u8,
                }
            })
            .collect();
        let mut relabel_src = Vec::with_capacity(space.len());
        for p in 0..space.len() {
            // element e is renamed to pi[e]
            let pi = space.ranks(p);
            let mut src = vec![0u16; space.len()];
            let mut relabelled = vec![0u8; n];
            for s in 0..space.len() {
                let r = space.ranks(s);
                for e in 0..n {
                    relabelled[pi[e] as usize] = r[e];
                }
                src[space.index_of(&relabelled)] = s as u16;
            }
            relabel_src.push(src);
        }
        GameTables {
            n,
            k,
            kind,
            space,
            claim_code,
            relabel_src,
        }
    }

    pub fn fresh(&self) -> GameValueState {
        GameValueState::fresh(self.n, self.k, self.kind)
    }

    pub fn state_after(&self, t: &Transcript) -> Result<GameValueState, ExactError> {
        let mut state = self.fresh();
        for &(q, a) in t.entries() {
            state = self.step(&state, q, a)?;
        }
        Ok(state)
    }

    /// Applies one answer. Errors when it would kill every scenario.
    pub fn step(
        &self,
        state: &GameValueState,
        q: Query,
        answer: Answer,
    ) -> Result<GameValueState, ExactError> {
        let mut next = state.clone();
        let dead = state.dead();
        for s in self.space.above(q.loser(answer), q.winner(answer)).ones() {
            if next.lie_vec[s] < dead {
                next.lie_vec[s] += 1;
            }
        }
        if next.alive_count() == 0 {
            return Err(ExactError::Unsatisfiable);
        }
        Ok(next)
    }

    /// Lexicographically smallest lie vector over all relabellings of the elements.
    pub fn canonicalize(&self, state: &GameValueState) -> Vec<u8> {
        canonical(&state.lie_vec, &self.relabel_src)
    }

    pub fn is_determined(&self, state: &GameValueState) -> bool {
        determined(&state.lie_vec, state.dead(), &self.claim_code)
    }
}

fn canonical(lie_vec: &[u8], relabel_src: &[Vec<u16>]) -> Vec<u8> {
    let mut best: Vec<u8> = lie_vec.to_vec();
    for src in relabel_src {
        // compare lazily, copy only on improvement
        let mut ordering = std::cmp::Ordering::Equal;
        for (j, &s) in src.iter().enumerate() {
            let v = lie_vec[s as usize];
            if v != best[j] {
                ordering = v.cmp(&best[j]);
                break;
            }
        }
        if ordering == std::cmp::Ordering::Less {
            for (j, &s) in src.iter().enumerate() {
                best[j] = lie_vec[s as usize];
            }
        }
    }
    best
}

fn determined(lie_vec: &[u8], dead: u8, claim_code: &[u8]) -> bool {
    let mut seen = None;
    for (s, &l) in lie_vec.iter().enumerate() {
        if l < dead {
            match seen {
                None => seen = Some(claim_code[s]),
                Some(c) if c != claim_code[s] => return false,
                _ => {}
            }
        }
    }
    true
}

/// Memoised minimax over game positions.
pub struct ExactSolver {
    tables: GameTables,
    canonicalize: bool,
    parallel: bool,
    depth_cap: usize,
    memo: DashMap<Box<[u8]>, u8>,
}

impl ExactSolver {
    pub fn new(n: usize, k: usize, kind: GameKind) -> Result<Self, ExactError> {
        if !within_guard(n, k) {
            return Err(ExactError::OutsideGuard { n, k });
        }
        Ok(ExactSolver {
            tables: GameTables::new(n, k, kind),
            canonicalize: true,
            parallel: false,
            depth_cap: 4 * (k + 1) * n,
            memo: DashMap::new(),
        })
    }

    /// Memoise on raw lie vectors instead of canonical keys.
    pub fn without_canonicalization(mut self) -> Self {
        self.canonicalize = false;
        self
    }

    /// Split the root's queries over the rayon pool; the memo is shared.
    pub fn parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    pub fn tables(&self) -> &GameTables {
        &self.tables
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn game_value(&self) -> Result<u32, ExactError> {
        let root = self.tables.fresh();
        self.value_of(&root)
    }

    /// Optimal remaining number of queries from `state`.
    pub fn value_of(&self, state: &GameValueState) -> Result<u32, ExactError> {
        let key = self.key(&state.lie_vec);
        self.value(&key, 0, self.parallel).map(u32::from)
    }

    fn key(&self, lie_vec: &[u8]) -> Vec<u8> {
        if self.canonicalize {
            canonical(lie_vec, &self.tables.relabel_src)
        } else {
            lie_vec.to_vec()
        }
    }

    fn child(&self, lie_vec: &[u8], winner: usize, loser: usize) -> Vec<u8> {
        let dead = self.tables.k as u8 + 1;
        let mut next = lie_vec.to_vec();
        for s in self.tables.space.above(ElementId(loser), ElementId(winner)).ones() {
            if next[s] < dead {
                next[s] += 1;
            }
        }
        self.key(&next)
    }

    fn informative_pairs(&self, lie_vec: &[u8]) -> Vec<(usize, usize)> {
        let dead = self.tables.k as u8 + 1;
        let mut alive = FixedBitSet::with_capacity(lie_vec.len());
        for (s, &l) in lie_vec.iter().enumerate() {
            if l < dead {
                alive.insert(s);
            }
        }
        let space = &self.tables.space;
        let n = self.tables.n;
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !alive.is_disjoint(space.above(ElementId(u), ElementId(v)))
                    && !alive.is_disjoint(space.above(ElementId(v), ElementId(u)))
                {
                    pairs.push((u, v));
                }
            }
        }
        pairs
    }

    fn value(&self, key: &[u8], depth: usize, parallel: bool) -> Result<u8, ExactError> {
        let dead = self.tables.k as u8 + 1;
        if determined(key, dead, &self.tables.claim_code) {
            return Ok(0);
        }
        if let Some(v) = self.memo.get(key) {
            return Ok(*v);
        }
        if depth >= self.depth_cap {
            return Err(ExactError::DepthCap(self.depth_cap));
        }

        // Both answers to an informative pair keep someone alive and change
        // the position, so every branch makes progress.
        let mut seen = HashSet::new();
        let mut branches = Vec::new();
        for (u, v) in self.informative_pairs(key) {
            let a = self.child(key, u, v);
            let b = self.child(key, v, u);
            let pair = if a <= b { (a, b) } else { (b, a) };
            if seen.insert(pair.clone()) {
                branches.push(pair);
            }
        }

        let worst = |(a, b): &(Vec<u8>, Vec<u8>)| -> Result<u8, ExactError> {
            let va = self.value(a, depth + 1, false)?;
            let vb = self.value(b, depth + 1, false)?;
            Ok(1 + va.max(vb))
        };
        let best = if parallel {
            branches
                .par_iter()
                .map(worst)
                .try_reduce(|| u8::MAX, |x, y| Ok(x.min(y)))?
        } else {
            let mut best = u8::MAX;
            for branch in &branches {
                best = best.min(worst(branch)?);
            }
            best
        };
        self.memo.entry(key.into()).or_insert(best);
        Ok(best)
    }
}

/// Exact minimax value of the `(n, k, kind)` game.
pub fn game_value(n: usize, k: usize, kind: GameKind) -> Result<u32, ExactError> {
    ExactSolver::new(n, k, kind)?.game_value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{consistent_scenarios, lie_count};

    fn q(a: usize, b: usize) -> Query {
        Query::new(a, b).unwrap()
    }

    #[test]
    fn step_examples() {
        // scenario index 0 is rank [0,1] (1 on top), index 1 is [1,0]
        let tables = GameTables::new(2, 0, GameKind::Max);
        let s = tables.step(&tables.fresh(), q(0, 1), Answer::First).unwrap();
        assert_eq!(s.lie_vec(), &[1, 0]);
        assert_eq!(s.alive_count(), 1);

        let tables = GameTables::new(2, 1, GameKind::Max);
        let once = tables.step(&tables.fresh(), q(0, 1), Answer::First).unwrap();
        assert_eq!(once.lie_vec(), &[1, 0]);
        let twice = tables.step(&once, q(0, 1), Answer::First).unwrap();
        assert_eq!(twice.lie_vec(), &[2, 0]);
        assert_eq!(twice.alive_count(), 1);

        let tables = GameTables::new(2, 0, GameKind::Max);
        let s = tables.step(&tables.fresh(), q(0, 1), Answer::First).unwrap();
        assert_eq!(tables.step(&s, q(0, 1), Answer::Second), Err(ExactError::Unsatisfiable));
    }

    #[test]
    fn state_matches_direct_lie_counts() {
        let tables = GameTables::new(4, 1, GameKind::MaxMin);
        let entries = [(0, 1, Answer::First), (2, 3, Answer::Second), (1, 2, Answer::First)];
        let t = Transcript::from_entries(4, entries.map(|(a, b, ans)| (q(a, b), ans))).unwrap();
        let state = tables.state_after(&t).unwrap();
        for s in 0..tables.space.len() {
            let direct = lie_count(&t, &tables.space.scenario(s)).min(2);
            assert_eq!(state.lie_vec()[s] as usize, direct);
        }
        let claims = consistent_scenarios(&t, 1, GameKind::MaxMin).unwrap();
        assert_eq!(tables.is_determined(&state), claims.len() == 1);
    }

    #[test]
    fn canonical_key_examples() {
        let tables = GameTables::new(3, 1, GameKind::Max);
        let fresh = tables.fresh();
        assert_eq!(tables.canonicalize(&fresh), fresh.lie_vec());

        let a = Transcript::from_entries(3, [(q(0, 1), Answer::First)]).unwrap();
        let b = Transcript::from_entries(3, [(q(2, 0), Answer::First)]).unwrap();
        let sa = tables.state_after(&a).unwrap();
        let sb = tables.state_after(&b).unwrap();
        assert_ne!(sa.lie_vec(), sb.lie_vec());
        assert_eq!(tables.canonicalize(&sa), tables.canonicalize(&sb));

        let two = Transcript::from_entries(3, [(q(0, 1), Answer::First), (q(0, 1), Answer::First)])
            .unwrap();
        let s2 = tables.state_after(&two).unwrap();
        assert_ne!(s2.alive_count(), sa.alive_count());
        assert_ne!(tables.canonicalize(&s2), tables.canonicalize(&sa));
    }

    #[test]
    fn small_values() {
        assert_eq!(game_value(1, 2, GameKind::Max), Ok(0));
        assert_eq!(game_value(2, 1, GameKind::Max), Ok(3));
        assert_eq!(game_value(3, 1, GameKind::Max), Ok(5));
        assert_eq!(game_value(3, 0, GameKind::MaxMin), Ok(3));
    }

    #[test]
    fn guard_is_enforced() {
        assert_eq!(
            game_value(5, 2, GameKind::Max),
            Err(ExactError::OutsideGuard { n: 5, k: 2 })
        );
        assert!(game_value(6, 0, GameKind::Max).is_err());
        assert!(game_value(3, 4, GameKind::Max).is_err());
    }

    #[test]
    fn canonicalization_does_not_change_values() {
        for n in 2..=3 {
            for k in 0..=2 {
                for kind in [GameKind::Max, GameKind::MaxMin] {
                    let with = ExactSolver::new(n, k, kind).unwrap().game_value().unwrap();
                    let without = ExactSolver::new(n, k, kind)
                        .unwrap()
                        .without_canonicalization()
                        .game_value()
                        .unwrap();
                    assert_eq!(with, without, "n={n} k={k} {kind}");
                }
            }
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let seq = ExactSolver::new(4, 0, GameKind::MaxMin).unwrap().game_value().unwrap();
        let par = ExactSolver::new(4, 0, GameKind::MaxMin)
            .unwrap()
            .parallel(true)
            .game_value()
            .unwrap();
        assert_eq!(seq, par);
    }
}
