//! Enumeration tables over all `n!` total orders, and incremental lie
//! tracking against every one of them.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

use crate::model::{Answer, Claim, ElementId, GameKind, ModelError, Query, Scenario, Transcript};

const CACHED_UP_TO: usize = 8;

/// Every total order on `n` elements, indexed in lexicographic order of
/// their rank arrays.
#[derive(Debug)]
pub struct ScenarioSpace {
    n: usize,
    ranks: Vec<Vec<u8>>,
    /// `above[u * n + v]` holds the scenarios in which `u` is above `v`.
    above: Vec<FixedBitSet>,
    max_of: Vec<u8>,
    min_of: Vec<u8>,
}

impl ScenarioSpace {
    pub fn new(n: usize) -> Self {
        let mut ranks = Vec::new();
        let mut perm: Vec<u8> = (0..n as u8).collect();
        loop {
            ranks.push(perm.clone());
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let count = ranks.len();
        let mut above = vec![FixedBitSet::with_capacity(count); n * n];
        let mut max_of = Vec::with_capacity(count);
        let mut min_of = Vec::with_capacity(count);
        for (s, r) in ranks.iter().enumerate() {
            for u in 0..n {
                for v in 0..n {
                    if r[u] > r[v] {
                        above[u * n + v].insert(s);
                    }
                }
            }
            max_of.push(r.iter().position(|&x| x as usize + 1 == n).unwrap_or(0) as u8);
            min_of.push(r.iter().position(|&x| x == 0).unwrap_or(0) as u8);
        }
        ScenarioSpace {
            n,
            ranks,
            above,
            max_of,
            min_of,
        }
    }

    /// Shared, lazily built table; sizes up to 8 are cached for the process lifetime.
    pub fn shared(n: usize) -> Arc<ScenarioSpace> {
        static CACHE: [OnceLock<Arc<ScenarioSpace>>; CACHED_UP_TO + 1] =
            [const { OnceLock::new() }; CACHED_UP_TO + 1];
        if n <= CACHED_UP_TO {
            CACHE[n]
                .get_or_init(|| Arc::new(ScenarioSpace::new(n)))
                .clone()
        } else {
            Arc::new(ScenarioSpace::new(n))
        }
    }

    pub fn for_enumeration(n: usize, cap: usize) -> Result<Arc<ScenarioSpace>, ModelError> {
        if n > cap {
            return Err(ModelError::EnumerationCap { n, cap });
        }
        Ok(Self::shared(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self, s: usize) -> &[u8] {
        &self.ranks[s]
    }

    pub fn scenario(&self, s: usize) -> Scenario {
        Scenario::from_ranks(self.ranks[s].iter().map(|&r| r as usize).collect())
            .expect("enumerated rank arrays are permutations")
    }

    /// Position of a rank array in the lexicographic enumeration.
    pub fn index_of(&self, rank: &[u8]) -> usize {
        let n = rank.len();
        let mut idx = 0;
        for i in 0..n {
            let smaller_later = rank[i + 1..].iter().filter(|&&r| r < rank[i]).count();
            idx = idx * (n - i) + smaller_later;
        }
        idx
    }

    pub fn above(&self, u: ElementId, v: ElementId) -> &FixedBitSet {
        &self.above[u.0 * self.n + v.0]
    }

    pub fn claim(&self, s: usize, kind: GameKind) -> Claim {
        let max = ElementId(self.max_of[s] as usize);
        match kind {
            GameKind::Max => Claim::Max(max),
            GameKind::MaxMin => Claim::MaxMin {
                max,
                min: ElementId(self.min_of[s] as usize),
            },
        }
    }

    /// Lie counts of `t` against every scenario, saturating at `budget + 1`.
    pub fn lie_counts(&self, t: &Transcript, budget: usize) -> Vec<u32> {
        let ceiling = budget.saturating_add(1).min(u32::MAX as usize) as u32;
        let mut mult: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for &(q, a) in t.entries() {
            *mult.entry((q.winner(a).0, q.loser(a).0)).or_default() += 1;
        }
        let mut lies = vec![0u32; self.len()];
        for (&(w, l), &m) in &mult {
            for s in self.above[l * self.n + w].ones() {
                lies[s] = lies[s].saturating_add(m).min(ceiling);
            }
        }
        lies
    }
}

/// Lexicographic successor in place; false when `perm` was the last permutation.
fn next_permutation(perm: &mut [u8]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Running lie counts of a transcript against every scenario, with the
/// alive set (scenarios within budget) maintained incrementally.
#[derive(Debug, Clone)]
pub struct ScenarioTracker {
    space: Arc<ScenarioSpace>,
    budget: usize,
    lies: Vec<u32>,
    alive: FixedBitSet,
}

impl ScenarioTracker {
    pub fn new(space: Arc<ScenarioSpace>, budget: usize) -> Self {
        let len = space.len();
        let mut alive = FixedBitSet::with_capacity(len);
        alive.insert_range(..);
        ScenarioTracker {
            space,
            budget,
            lies: vec![0; len],
            alive,
        }
    }

    pub fn space(&self) -> &ScenarioSpace {
        &self.space
    }

    pub fn apply(&mut self, q: Query, answer: Answer) {
        let falsified = self.space.above(q.loser(answer), q.winner(answer));
        let hit: Vec<usize> = self.alive.intersection(falsified).collect();
        for s in hit {
            self.lies[s] += 1;
            if self.lies[s] as usize > self.budget {
                self.alive.set(s, false);
            }
        }
    }

    pub fn alive_count(&self) -> usize {
        self.alive.count_ones(..)
    }

    pub fn is_satisfiable(&self) -> bool {
        !self.alive.is_clear()
    }

    pub fn alive(&self) -> impl Iterator<Item = usize> + '_ {
        self.alive.ones()
    }

    pub fn lies(&self, s: usize) -> u32 {
        self.lies[s]
    }

    pub fn claims(&self, kind: GameKind) -> BTreeSet<Claim> {
        self.alive.ones().map(|s| self.space.claim(s, kind)).collect()
    }

    pub fn determined(&self, kind: GameKind) -> Option<Claim> {
        let mut alive = self.alive.ones();
        let first = self.space.claim(alive.next()?, kind);
        alive
            .all(|s| self.space.claim(s, kind) == first)
            .then_some(first)
    }

    /// True when the alive scenarios disagree on the order of `u` and `v`,
    /// so either answer shrinks the game.
    pub fn is_informative(&self, u: ElementId, v: ElementId) -> bool {
        let above = self.space.above(u, v);
        let below = self.space.above(v, u);
        !self.alive.is_disjoint(above) && !self.alive.is_disjoint(below)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::lie_count;

    #[test]
    fn enumerates_all_orders_lexicographically() {
        let space = ScenarioSpace::new(4);
        assert_eq!(space.len(), 24);
        for s in 0..space.len() {
            assert_eq!(space.index_of(space.ranks(s)), s);
        }
        assert!(space.ranks(0) < space.ranks(1));
        assert_eq!(ScenarioSpace::new(0).len(), 1);
        assert_eq!(ScenarioSpace::new(1).len(), 1);
    }

    #[test]
    fn tracker_matches_direct_lie_counts() {
        let n = 4;
        let space = ScenarioSpace::shared(n);
        let entries = [(0, 1, Answer::First), (2, 1, Answer::Second), (0, 1, Answer::Second)];
        let mut t = Transcript::new(n);
        let mut tracker = ScenarioTracker::new(space.clone(), 1);
        for (a, b, ans) in entries {
            let q = Query::new(a, b).unwrap();
            t.push(q, ans).unwrap();
            tracker.apply(q, ans);
        }
        let batch = space.lie_counts(&t, 1);
        assert_eq!(batch.len(), space.len());
        for (s, &lies) in batch.iter().enumerate() {
            let direct = lie_count(&t, &space.scenario(s));
            assert_eq!(lies as usize, direct.min(2));
            assert_eq!(tracker.alive().any(|x| x == s), direct <= 1);
        }
    }
}
