use crate::arena::GameView;
use crate::model::{Answer, Claim, ElementId, GameKind};

use super::{Keep, Ladder, LadderStep, Solver, SolverDecision};

/// Max ladder over everything, then a min ladder over everything but the
/// claimed maximum.
#[derive(Debug, Clone)]
pub struct NaiveMaxMin {
    n: usize,
    k: usize,
    max_phase: Option<Ladder>,
    min_phase: Option<Ladder>,
    max: Option<ElementId>,
}

impl NaiveMaxMin {
    pub fn new(n: usize, k: usize) -> Self {
        NaiveMaxMin {
            n,
            k,
            max_phase: (n > 0).then(|| Ladder::new((0..n).map(ElementId).collect(), k, Keep::Bigger)),
            min_phase: None,
            max: None,
        }
    }

    pub fn naive_maxmin_step(&mut self, last_answer: Option<Answer>) -> SolverDecision {
        if self.n <= 1 {
            let only = ElementId(0);
            return SolverDecision::Claim(Claim::MaxMin { max: only, min: only });
        }
        let mut last = last_answer;
        if self.max.is_none() {
            let phase = self.max_phase.as_mut().expect("n > 1");
            match phase.advance(last) {
                LadderStep::Ask(q) => return SolverDecision::Ask(q),
                LadderStep::Done(max) => {
                    self.max = Some(max);
                    let rest = (0..self.n).map(ElementId).filter(|&e| e != max).collect();
                    self.min_phase = Some(Ladder::new(rest, self.k, Keep::Smaller));
                    last = None;
                }
            }
        }
        let max = self.max.expect("max phase finished");
        let phase = self.min_phase.as_mut().expect("started with the max claim");
        match phase.advance(last) {
            LadderStep::Ask(q) => SolverDecision::Ask(q),
            LadderStep::Done(min) => SolverDecision::Claim(Claim::MaxMin { max, min }),
        }
    }
}

impl Solver for NaiveMaxMin {
    fn name(&self) -> String {
        "naive-maxmin".into()
    }

    fn supports(&self, kind: GameKind) -> bool {
        kind == GameKind::MaxMin
    }

    fn step(&mut self, last_answer: Option<Answer>, _view: &GameView<'_>) -> SolverDecision {
        self.naive_maxmin_step(last_answer)
    }
}

#[derive(Debug, Clone)]
enum Phase {
    Pairing(usize, Ladder),
    Max(Ladder),
    Min(ElementId, Ladder),
}

/// Pairs the elements up and settles each pair by majority, then runs a max
/// ladder over the winners and a min ladder over the losers. An unpaired
/// element goes into both pools.
///
/// A pair is settled as soon as one side has `k + 1` of at most `2k + 1`
/// answers; the remaining answers could not change the majority.
#[derive(Debug, Clone)]
pub struct PairAndConquer {
    n: usize,
    k: usize,
    phase: Option<Phase>,
    top: Vec<ElementId>,
    bottom: Vec<ElementId>,
}

impl PairAndConquer {
    pub fn new(n: usize, k: usize) -> Self {
        let mut solver = PairAndConquer {
            n,
            k,
            phase: None,
            top: Vec::new(),
            bottom: Vec::new(),
        };
        solver.phase = Some(solver.start_pairing(0));
        solver
    }

    fn start_pairing(&mut self, first: usize) -> Phase {
        if first + 1 < self.n {
            let pair = vec![ElementId(first), ElementId(first + 1)];
            return Phase::Pairing(first, Ladder::new(pair, self.k, Keep::Bigger));
        }
        if first < self.n {
            self.top.push(ElementId(first));
            self.bottom.push(ElementId(first));
        }
        if self.top.is_empty() {
            self.top.push(ElementId(0));
            self.bottom.push(ElementId(0));
        }
        Phase::Max(Ladder::new(self.top.clone(), self.k, Keep::Bigger))
    }

    pub fn pair_and_conquer_step(&mut self, last_answer: Option<Answer>) -> SolverDecision {
        let mut last = last_answer;
        loop {
            let phase = self.phase.take().expect("phase is always restored");
            let (next, decision) = match phase {
                Phase::Pairing(first, mut ladder) => match ladder.advance(last) {
                    LadderStep::Ask(q) => (Phase::Pairing(first, ladder), Some(SolverDecision::Ask(q))),
                    LadderStep::Done(winner) => {
                        let loser = if winner.0 == first { first + 1 } else { first };
                        self.top.push(winner);
                        self.bottom.push(ElementId(loser));
                        (self.start_pairing(first + 2), None)
                    }
                },
                Phase::Max(mut ladder) => match ladder.advance(last) {
                    LadderStep::Ask(q) => (Phase::Max(ladder), Some(SolverDecision::Ask(q))),
                    LadderStep::Done(max) => {
                        let min_ladder = Ladder::new(self.bottom.clone(), self.k, Keep::Smaller);
                        (Phase::Min(max, min_ladder), None)
                    }
                },
                Phase::Min(max, mut ladder) => match ladder.advance(last) {
                    LadderStep::Ask(q) => (Phase::Min(max, ladder), Some(SolverDecision::Ask(q))),
                    LadderStep::Done(min) => (
                        Phase::Min(max, ladder),
                        Some(SolverDecision::Claim(Claim::MaxMin { max, min })),
                    ),
                },
            };
            self.phase = Some(next);
            if let Some(decision) = decision {
                return decision;
            }
            last = None;
        }
    }
}

impl Solver for PairAndConquer {
    fn name(&self) -> String {
        "pair-and-conquer".into()
    }

    fn supports(&self, kind: GameKind) -> bool {
        kind == GameKind::MaxMin
    }

    fn step(&mut self, last_answer: Option<Answer>, _view: &GameView<'_>) -> SolverDecision {
        self.pair_and_conquer_step(last_answer)
    }
}
