//! Answer strategies.
//!
//! [`Consistent`] and [`TopBottom`] never contradict themselves, so the
//! comparison graph they produce stays acyclic. [`Claim1Wrapper`] sits on top
//! of either and spends the lie budget at the last moment, which forces `k`
//! extra queries out of any solver.

mod claim1;
mod topbottom;

pub use claim1::{select_alternative, Claim1Wrapper};
pub use topbottom::{Membership, TopBottom};

use thiserror::Error;

use crate::model::{Answer, ModelError, Query, Scenario, Transcript};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdversaryError {
    /// The strategy cannot continue without breaking its own contract.
    #[error("adversary forfeit: {0}")]
    Forfeit(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub trait Adversary: Send {
    fn name(&self) -> String;

    /// Answers `query`, given everything answered so far.
    fn answer(&mut self, transcript: &Transcript, query: Query) -> Result<Answer, AdversaryError>;

    /// A total order under which every answer given so far is true.
    fn committed_scenario(&self) -> Scenario;
}

impl<A: Adversary + ?Sized> Adversary for Box<A> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn answer(&mut self, transcript: &Transcript, query: Query) -> Result<Answer, AdversaryError> {
        (**self).answer(transcript, query)
    }

    fn committed_scenario(&self) -> Scenario {
        (**self).committed_scenario()
    }
}

/// Answers every query according to a hidden ground truth.
#[derive(Debug, Clone)]
pub struct Truthful {
    truth: Scenario,
}

impl Truthful {
    pub fn new(truth: Scenario) -> Self {
        Truthful { truth }
    }
}

impl Adversary for Truthful {
    fn name(&self) -> String {
        "truthful".into()
    }

    fn answer(&mut self, _transcript: &Transcript, query: Query) -> Result<Answer, AdversaryError> {
        Ok(self.truth.answer(query))
    }

    fn committed_scenario(&self) -> Scenario {
        self.truth.clone()
    }
}

/// Answers according to a fixed priority order, element 0 highest by default.
#[derive(Debug, Clone)]
pub struct Consistent {
    priority: Scenario,
}

impl Consistent {
    pub fn new(n: usize) -> Self {
        let order: Vec<usize> = (0..n).collect();
        Consistent {
            priority: Scenario::from_descending(&order).expect("0..n is a permutation"),
        }
    }

    pub fn with_priority(priority: Scenario) -> Self {
        Consistent { priority }
    }

    pub fn consistent_answer(&self, query: Query) -> Answer {
        self.priority.answer(query)
    }
}

impl Adversary for Consistent {
    fn name(&self) -> String {
        "consistent".into()
    }

    fn answer(&mut self, _transcript: &Transcript, query: Query) -> Result<Answer, AdversaryError> {
        Ok(self.consistent_answer(query))
    }

    fn committed_scenario(&self) -> Scenario {
        self.priority.clone()
    }
}
