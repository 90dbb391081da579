//! Ground set, queries, answers, scenarios and transcripts.
//!
//! A game is played on `n` elements with a hidden total order (a
//! [`Scenario`]). Every answer that disagrees with the hidden order is a lie;
//! the answering side may tell at most `k` of them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scenarios::ScenarioSpace;

/// Largest ground set for which scenario enumeration is attempted by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("cannot compare element {0} with itself")]
    SelfComparison(usize),
    #[error("element {element} is outside the ground set of size {n}")]
    OutOfRange { element: usize, n: usize },
    #[error("rank array is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("ground set sizes differ ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("n = {n} exceeds the enumeration cap of {cap}; use the degree criteria instead")]
    EnumerationCap { n: usize, cap: usize },
}

/// An element of the ground set `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElementId(pub usize);

impl ElementId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A comparison between two distinct elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Query {
    a: ElementId,
    b: ElementId,
}

impl Query {
    pub fn new(a: usize, b: usize) -> Result<Self, ModelError> {
        if a == b {
            return Err(ModelError::SelfComparison(a));
        }
        Ok(Query {
            a: ElementId(a),
            b: ElementId(b),
        })
    }

    pub fn first(self) -> ElementId {
        self.a
    }

    pub fn second(self) -> ElementId {
        self.b
    }

    pub fn winner(self, answer: Answer) -> ElementId {
        match answer {
            Answer::First => self.a,
            Answer::Second => self.b,
        }
    }

    pub fn loser(self, answer: Answer) -> ElementId {
        match answer {
            Answer::First => self.b,
            Answer::Second => self.a,
        }
    }

    /// The answer that declares `winner` bigger, if `winner` is part of the query.
    pub fn answer_for_winner(self, winner: ElementId) -> Option<Answer> {
        if winner == self.a {
            Some(Answer::First)
        } else if winner == self.b {
            Some(Answer::Second)
        } else {
            None
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Which queried element was declared bigger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Answer {
    First,
    Second,
}

impl Answer {
    pub fn flipped(self) -> Answer {
        match self {
            Answer::First => Answer::Second,
            Answer::Second => Answer::First,
        }
    }
}

/// A hidden total order: `rank[e]` is the position of `e`, higher is bigger.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scenario {
    rank: Vec<usize>,
}

impl Scenario {
    pub fn from_ranks(rank: Vec<usize>) -> Result<Self, ModelError> {
        let n = rank.len();
        let mut seen = vec![false; n];
        for &r in &rank {
            if r >= n || seen[r] {
                return Err(ModelError::NotAPermutation(n));
            }
            seen[r] = true;
        }
        Ok(Scenario { rank })
    }

    /// `rank[e] = e`: element `n - 1` is the maximum.
    pub fn identity(n: usize) -> Self {
        Scenario {
            rank: (0..n).collect(),
        }
    }

    /// Builds a scenario from elements listed biggest first.
    pub fn from_descending(order: &[usize]) -> Result<Self, ModelError> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, &e) in order.iter().enumerate() {
            if e >= n || rank[e] != usize::MAX {
                return Err(ModelError::NotAPermutation(n));
            }
            rank[e] = n - 1 - pos;
        }
        Ok(Scenario { rank })
    }

    pub fn n(&self) -> usize {
        self.rank.len()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    pub fn rank(&self, e: ElementId) -> usize {
        self.rank[e.0]
    }

    pub fn is_above(&self, a: ElementId, b: ElementId) -> bool {
        self.rank[a.0] > self.rank[b.0]
    }

    /// The truthful answer to `q` under this order.
    pub fn answer(&self, q: Query) -> Answer {
        if self.is_above(q.first(), q.second()) {
            Answer::First
        } else {
            Answer::Second
        }
    }

    pub fn maximum(&self) -> ElementId {
        let pos = self.rank.iter().position(|&r| r + 1 == self.n()).unwrap_or(0);
        ElementId(pos)
    }

    pub fn minimum(&self) -> ElementId {
        let pos = self.rank.iter().position(|&r| r == 0).unwrap_or(0);
        ElementId(pos)
    }
}

/// Ordered history of a game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    n: usize,
    entries: Vec<(Query, Answer)>,
}

impl Transcript {
    pub fn new(n: usize) -> Self {
        Transcript {
            n,
            entries: Vec::new(),
        }
    }

    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = (Query, Answer)>,
    ) -> Result<Self, ModelError> {
        let mut t = Transcript::new(n);
        for (q, a) in entries {
            t.push(q, a)?;
        }
        Ok(t)
    }

    pub fn push(&mut self, q: Query, answer: Answer) -> Result<(), ModelError> {
        self.check_query(q)?;
        self.entries.push((q, answer));
        Ok(())
    }

    pub fn check_query(&self, q: Query) -> Result<(), ModelError> {
        for e in [q.first(), q.second()] {
            if e.0 >= self.n {
                return Err(ModelError::OutOfRange {
                    element: e.0,
                    n: self.n,
                });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Query, Answer)] {
        &self.entries
    }

    pub fn prefix(&self, len: usize) -> Transcript {
        Transcript {
            n: self.n,
            entries: self.entries[..len.min(self.entries.len())].to_vec(),
        }
    }

    /// One line per entry, `a b winner`, decimal element indices.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (q, a) in &self.entries {
            out.push_str(&format!("{} {} {}\n", q.first(), q.second(), q.winner(*a)));
        }
        out
    }
}

/// The target function of a game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameKind {
    Max,
    MaxMin,
}

impl GameKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GameKind::Max => "max",
            GameKind::MaxMin => "maxmin",
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GameKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "max" => Ok(GameKind::Max),
            "maxmin" => Ok(GameKind::MaxMin),
            other => Err(format!("unknown game kind `{other}` (expected max or maxmin)")),
        }
    }
}

/// Value of the target function: the maximum, or the (maximum, minimum) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    Max(ElementId),
    MaxMin { max: ElementId, min: ElementId },
}

impl Claim {
    pub fn kind(self) -> GameKind {
        match self {
            Claim::Max(_) => GameKind::Max,
            Claim::MaxMin { .. } => GameKind::MaxMin,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Max(e) => write!(f, "{e}"),
            Claim::MaxMin { max, min } => write!(f, "({max},{min})"),
        }
    }
}

pub fn answer_truth(q: Query, answer: Answer, s: &Scenario) -> bool {
    s.is_above(q.winner(answer), q.loser(answer))
}

/// Number of entries of `t` that are false under `s`, repeated entries counted each time.
pub fn lie_count(t: &Transcript, s: &Scenario) -> usize {
    t.entries()
        .iter()
        .filter(|&&(q, a)| !answer_truth(q, a, s))
        .count()
}

pub fn target_of(s: &Scenario, kind: GameKind) -> Claim {
    match kind {
        GameKind::Max => Claim::Max(s.maximum()),
        GameKind::MaxMin => Claim::MaxMin {
            max: s.maximum(),
            min: s.minimum(),
        },
    }
}

/// Claims of every scenario that is within `budget` lies of `t`.
///
/// The game is determined exactly when the returned set has one member.
pub fn consistent_scenarios(
    t: &Transcript,
    budget: usize,
    kind: GameKind,
) -> Result<BTreeSet<Claim>, ModelError> {
    consistent_scenarios_capped(t, budget, kind, DEFAULT_ENUMERATION_CAP)
}

pub fn consistent_scenarios_capped(
    t: &Transcript,
    budget: usize,
    kind: GameKind,
    cap: usize,
) -> Result<BTreeSet<Claim>, ModelError> {
    let space = ScenarioSpace::for_enumeration(t.n(), cap)?;
    let lies = space.lie_counts(t, budget);
    Ok(lies
        .iter()
        .enumerate()
        .filter(|&(_, &l)| l as usize <= budget)
        .map(|(s, _)| space.claim(s, kind))
        .collect())
}
