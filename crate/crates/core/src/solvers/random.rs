use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arena::GameView;
use crate::model::{Answer, ElementId, GameKind, Query};

use super::{Solver, SolverDecision};

/// Asks uniformly random informative queries and claims as soon as the
/// arena reports the game determined.
#[derive(Debug, Clone)]
pub struct RandomSolver {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSolver {
    pub fn new(seed: u64) -> Self {
        RandomSolver {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn random_solver_step(&mut self, view: &GameView<'_>) -> SolverDecision {
        if let Some(claim) = view.determined() {
            return SolverDecision::Claim(claim);
        }
        let n = view.n();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if view.is_informative(ElementId(a), ElementId(b)) {
                    pairs.push((a, b));
                }
            }
        }
        if pairs.is_empty() {
            // undetermined without an informative pair only happens when the
            // arena cannot enumerate; fall back to any pair
            pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        }
        let &(a, b) = pairs
            .choose(&mut self.rng)
            .expect("an undetermined game has at least two elements");
        let q = if self.rng.gen::<bool>() {
            Query::new(a, b)
        } else {
            Query::new(b, a)
        };
        SolverDecision::Ask(q.expect("pairs are distinct"))
    }
}

impl Solver for RandomSolver {
    fn name(&self) -> String {
        "random".into()
    }

    fn supports(&self, _kind: GameKind) -> bool {
        true
    }

    fn step(&mut self, _last_answer: Option<Answer>, view: &GameView<'_>) -> SolverDecision {
        self.random_solver_step(view)
    }
}
