//! Query-asking strategies.
//!
//! Every solver is a small state machine: it is handed the answer to its
//! previous query (if any) and either asks another query or makes a claim.

mod ladder;
mod maxmin;
mod random;

pub use ladder::{Keep, Ladder, LadderStep};
pub use maxmin::{NaiveMaxMin, PairAndConquer};
pub use random::RandomSolver;

use crate::arena::GameView;
use crate::model::{Answer, Claim, ElementId, GameKind, Query};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverDecision {
    Ask(Query),
    Claim(Claim),
}

pub trait Solver: Send {
    fn name(&self) -> String;

    fn supports(&self, kind: GameKind) -> bool;

    fn step(&mut self, last_answer: Option<Answer>, view: &GameView<'_>) -> SolverDecision;
}

impl<S: Solver + ?Sized> Solver for Box<S> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn supports(&self, kind: GameKind) -> bool {
        (**self).supports(kind)
    }

    fn step(&mut self, last_answer: Option<Answer>, view: &GameView<'_>) -> SolverDecision {
        (**self).step(last_answer, view)
    }
}

/// Single-elimination ladder keeping the element declared bigger `k + 1`
/// times in each pairing.
#[derive(Debug, Clone)]
pub struct TournamentMax {
    ladder: Ladder,
}

impl TournamentMax {
    pub fn new(n: usize, k: usize) -> Self {
        TournamentMax {
            ladder: Ladder::new((0..n).map(ElementId).collect(), k, Keep::Bigger),
        }
    }

    pub fn tournament_max_step(&mut self, last_answer: Option<Answer>) -> SolverDecision {
        match self.ladder.advance(last_answer) {
            LadderStep::Ask(q) => SolverDecision::Ask(q),
            LadderStep::Done(e) => SolverDecision::Claim(Claim::Max(e)),
        }
    }
}

impl Solver for TournamentMax {
    fn name(&self) -> String {
        "tournament-max".into()
    }

    fn supports(&self, kind: GameKind) -> bool {
        kind == GameKind::Max
    }

    fn step(&mut self, last_answer: Option<Answer>, _view: &GameView<'_>) -> SolverDecision {
        self.tournament_max_step(last_answer)
    }
}

/// Mirror of [`TournamentMax`]: keeps the element declared smaller.
///
/// There is no min-only game kind, so this is not a registered [`Solver`];
/// it is the second phase of [`NaiveMaxMin`] and usable on its own.
#[derive(Debug, Clone)]
pub struct TournamentMin {
    ladder: Ladder,
}

impl TournamentMin {
    pub fn new(n: usize, k: usize) -> Self {
        TournamentMin {
            ladder: Ladder::new((0..n).map(ElementId).collect(), k, Keep::Smaller),
        }
    }

    /// Asks a query, or returns the claimed minimum.
    pub fn tournament_min_step(&mut self, last_answer: Option<Answer>) -> Result<ElementId, Query> {
        match self.ladder.advance(last_answer) {
            LadderStep::Ask(q) => Err(q),
            LadderStep::Done(e) => Ok(e),
        }
    }
}
