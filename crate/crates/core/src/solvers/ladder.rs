use crate::model::{Answer, ElementId, Query};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    Bigger,
    Smaller,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderStep {
    Ask(Query),
    Done(ElementId),
}

/// Reduces a pool left to right: the current holder meets the next element
/// and the pair is re-asked until one side collects `k + 1` points, where a
/// point is a declaration in the direction given by [`Keep`].
#[derive(Debug, Clone)]
pub struct Ladder {
    pool: Vec<ElementId>,
    next: usize,
    holder: Option<ElementId>,
    tally: [usize; 2],
    k: usize,
    keep: Keep,
    pending: Option<Query>,
}

impl Ladder {
    /// `pool` must be non-empty.
    pub fn new(pool: Vec<ElementId>, k: usize, keep: Keep) -> Self {
        assert!(!pool.is_empty(), "a ladder needs at least one element");
        Ladder {
            holder: Some(pool[0]),
            pool,
            next: 1,
            tally: [0, 0],
            k,
            keep,
            pending: None,
        }
    }

    pub fn advance(&mut self, last_answer: Option<Answer>) -> LadderStep {
        if let (Some(q), Some(answer)) = (self.pending.take(), last_answer) {
            let point = match self.keep {
                Keep::Bigger => q.winner(answer),
                Keep::Smaller => q.loser(answer),
            };
            let side = usize::from(point != q.first());
            self.tally[side] += 1;
            if self.tally[side] > self.k {
                self.holder = Some(point);
                self.next += 1;
                self.tally = [0, 0];
            }
        }
        let holder = self.holder.expect("set at construction");
        match self.pool.get(self.next) {
            None => LadderStep::Done(holder),
            Some(&challenger) => {
                let q = Query::new(holder.0, challenger.0).expect("pool elements are distinct");
                self.pending = Some(q);
                LadderStep::Ask(q)
            }
        }
    }
}
