use crate::arena::determined_claim;
use crate::model::{
    target_of, Answer, Claim, GameKind, Query, Scenario, Transcript, DEFAULT_ENUMERATION_CAP,
};
use crate::scenarios::ScenarioSpace;

use super::{Adversary, AdversaryError};

/// Delegates to a consistent base strategy until the base's next answer
/// would settle the game, then switches to an alternative order `y` that is
/// still within the lie budget and has a different target value.
///
/// Answers given per `y` that disagree with the base's committed order `x`
/// are lies against `x`; after `k` of them the wrapper keeps answering per
/// `y`, which always stays within budget.
#[derive(Debug, Clone)]
pub struct Claim1Wrapper<A> {
    base: A,
    k: usize,
    kind: GameKind,
    enumeration_cap: usize,
    committed: Option<Scenario>,
    alt_scenario: Option<Scenario>,
    remaining_alt_answers: usize,
    activated_at: Option<usize>,
}

impl<A: Adversary> Claim1Wrapper<A> {
    pub fn new(base: A, k: usize, kind: GameKind) -> Self {
        Claim1Wrapper {
            base,
            k,
            kind,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            committed: None,
            alt_scenario: None,
            remaining_alt_answers: 0,
            activated_at: None,
        }
    }

    pub fn with_enumeration_cap(mut self, cap: usize) -> Self {
        self.enumeration_cap = cap;
        self
    }

    pub fn is_activated(&self) -> bool {
        self.alt_scenario.is_some()
    }

    /// Zero-based index of the query on which the wrapper switched to `y`.
    pub fn activated_at(&self) -> Option<usize> {
        self.activated_at
    }

    pub fn alt_scenario(&self) -> Option<&Scenario> {
        self.alt_scenario.as_ref()
    }

    /// The base's order at activation time (`x`).
    pub fn base_scenario(&self) -> Option<&Scenario> {
        self.committed.as_ref()
    }

    pub fn remaining_alt_answers(&self) -> usize {
        self.remaining_alt_answers
    }

    fn answer_per_alt(&mut self, query: Query) -> Answer {
        let y = self.alt_scenario.as_ref().expect("called after activation");
        let x = self.committed.as_ref().expect("set together with y");
        let ans = y.answer(query);
        if self.remaining_alt_answers > 0 && ans != x.answer(query) {
            self.remaining_alt_answers -= 1;
        }
        ans
    }
}

impl<A: Adversary> Adversary for Claim1Wrapper<A> {
    fn name(&self) -> String {
        format!("{}+claim1", self.base.name())
    }

    fn answer(&mut self, transcript: &Transcript, query: Query) -> Result<Answer, AdversaryError> {
        if self.alt_scenario.is_some() {
            return Ok(self.answer_per_alt(query));
        }
        let base_answer = self.base.answer(transcript, query)?;
        if self.k == 0 {
            return Ok(base_answer);
        }
        let mut lookahead = transcript.clone();
        lookahead.push(query, base_answer)?;
        let settles = determined_claim(&lookahead, self.k, self.kind, self.enumeration_cap)?;
        if settles.is_none() {
            return Ok(base_answer);
        }

        let x = self.base.committed_scenario();
        let y = select_alternative_capped(
            transcript,
            self.k,
            self.kind,
            &target_of(&x, self.kind),
            self.enumeration_cap,
        )?;
        self.committed = Some(x);
        self.alt_scenario = Some(y);
        self.remaining_alt_answers = self.k;
        self.activated_at = Some(transcript.len());
        Ok(self.answer_per_alt(query))
    }

    fn committed_scenario(&self) -> Scenario {
        match &self.alt_scenario {
            Some(y) => y.clone(),
            None => self.base.committed_scenario(),
        }
    }
}

/// A scenario within `k` lies of `t` whose target differs from `avoid`:
/// fewest lies first, then the lexicographically smallest rank array.
pub fn select_alternative(
    t: &Transcript,
    k: usize,
    kind: GameKind,
    avoid: &Claim,
) -> Result<Scenario, AdversaryError> {
    select_alternative_capped(t, k, kind, avoid, DEFAULT_ENUMERATION_CAP)
}

fn select_alternative_capped(
    t: &Transcript,
    k: usize,
    kind: GameKind,
    avoid: &Claim,
    cap: usize,
) -> Result<Scenario, AdversaryError> {
    let space = ScenarioSpace::for_enumeration(t.n(), cap)?;
    let lies = space.lie_counts(t, k);
    let mut best: Option<(u32, usize)> = None;
    for (s, &l) in lies.iter().enumerate() {
        if l as usize > k || space.claim(s, kind) == *avoid {
            continue;
        }
        if best.is_none_or(|(bl, _)| l < bl) {
            best = Some((l, s));
        }
    }
    best.map(|(_, s)| space.scenario(s)).ok_or_else(|| {
        AdversaryError::Forfeit(format!(
            "no scenario within {k} lies has a target other than {avoid}"
        ))
    })
}
