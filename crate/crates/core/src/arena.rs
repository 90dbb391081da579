//! The game loop: one solver against one adversary, with the lie budget
//! enforced and every claim checked against all scenarios within budget.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversaries::{Adversary, AdversaryError};
use crate::graph::ComparisonGraph;
use crate::model::{
    consistent_scenarios_capped, Answer, Claim, ElementId, GameKind, ModelError, Query,
    Transcript, DEFAULT_ENUMERATION_CAP,
};
use crate::scenarios::{ScenarioSpace, ScenarioTracker};
use crate::solvers::{Solver, SolverDecision};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArenaError {
    #[error("invalid game configuration: {0}")]
    InvalidConfig(String),
    #[error("solver `{solver}` cannot play the {kind} game")]
    Unsupported { solver: String, kind: GameKind },
    #[error("solver asked an invalid query: {0}")]
    BadQuery(#[from] ModelError),
}

/// The claim settled by `t`, if any: degree criteria when the transcript is
/// consistent, scenario enumeration otherwise.
pub fn determined_claim(
    t: &Transcript,
    k: usize,
    kind: GameKind,
    cap: usize,
) -> Result<Option<Claim>, ModelError> {
    let g = ComparisonGraph::from_transcript(t);
    if g.is_consistent() {
        return Ok(g
            .determined(k as u32, kind)
            .expect("graph checked consistent"));
    }
    let claims = consistent_scenarios_capped(t, k, kind, cap)?;
    Ok(single(claims))
}

fn single(claims: BTreeSet<Claim>) -> Option<Claim> {
    if claims.len() == 1 {
        claims.into_iter().next()
    } else {
        None
    }
}

/// True iff `claim` is the only target value left within `k` lies of `t`.
pub fn verify_claim(t: &Transcript, claim: Claim, k: usize, kind: GameKind) -> bool {
    verify_claim_capped(t, claim, k, kind, DEFAULT_ENUMERATION_CAP)
}

pub fn verify_claim_capped(
    t: &Transcript,
    claim: Claim,
    k: usize,
    kind: GameKind,
    cap: usize,
) -> bool {
    if claim.kind() != kind {
        return false;
    }
    match consistent_scenarios_capped(t, k, kind, cap) {
        Ok(claims) => single(claims) == Some(claim),
        Err(_) => {
            let g = ComparisonGraph::from_transcript(t);
            g.is_consistent() && g.determined(k as u32, kind) == Ok(Some(claim))
        }
    }
}

/// Everything the arena knows about a game in progress.
#[derive(Debug, Clone)]
pub struct GameState {
    k: usize,
    kind: GameKind,
    transcript: Transcript,
    graph: ComparisonGraph,
    tracker: Option<ScenarioTracker>,
}

impl GameState {
    pub fn new(n: usize, k: usize, kind: GameKind) -> Self {
        Self::with_enumeration_cap(n, k, kind, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_enumeration_cap(n: usize, k: usize, kind: GameKind, cap: usize) -> Self {
        let tracker = ScenarioSpace::for_enumeration(n, cap)
            .ok()
            .map(|space| ScenarioTracker::new(space, k));
        GameState {
            k,
            kind,
            transcript: Transcript::new(n),
            graph: ComparisonGraph::new(n),
            tracker,
        }
    }

    pub fn record(&mut self, q: Query, answer: Answer) -> Result<(), ModelError> {
        self.transcript.push(q, answer)?;
        self.graph.record(q, answer);
        if let Some(tracker) = &mut self.tracker {
            tracker.apply(q, answer);
        }
        Ok(())
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    /// `Some(false)` when no scenario is within budget; `None` when that
    /// cannot be decided (inconsistent transcript above the enumeration cap).
    pub fn is_satisfiable(&self) -> Option<bool> {
        match &self.tracker {
            Some(t) => Some(t.is_satisfiable()),
            None => self.graph.is_consistent().then_some(true),
        }
    }

    pub fn view(&self) -> GameView<'_> {
        GameView { state: self }
    }
}

/// Read-only window a solver gets onto the game.
#[derive(Debug, Clone, Copy)]
pub struct GameView<'a> {
    state: &'a GameState,
}

impl GameView<'_> {
    pub fn n(&self) -> usize {
        self.state.transcript.n()
    }

    pub fn k(&self) -> usize {
        self.state.k
    }

    pub fn kind(&self) -> GameKind {
        self.state.kind
    }

    pub fn transcript(&self) -> &Transcript {
        &self.state.transcript
    }

    pub fn graph(&self) -> &ComparisonGraph {
        &self.state.graph
    }

    pub fn determined(&self) -> Option<Claim> {
        match &self.state.tracker {
            Some(t) => t.determined(self.state.kind),
            None => self
                .state
                .graph
                .determined(self.state.k as u32, self.state.kind)
                .ok()
                .flatten(),
        }
    }

    /// Whether the scenarios still in play disagree on `u` versus `v`.
    /// Without enumeration every pair counts as informative.
    pub fn is_informative(&self, u: ElementId, v: ElementId) -> bool {
        match &self.state.tracker {
            Some(t) => t.is_informative(u, v),
            None => u != v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameConfig {
    pub n: usize,
    pub k: usize,
    pub kind: GameKind,
    pub query_cap: Option<usize>,
    pub enumeration_cap: usize,
}

impl GameConfig {
    pub fn validate(&self) -> Result<(), ArenaError> {
        if self.n == 0 {
            return Err(ArenaError::InvalidConfig("n must be at least 1".into()));
        }
        if self.query_cap == Some(0) {
            return Err(ArenaError::InvalidConfig("query cap must be at least 1".into()));
        }
        Ok(())
    }

    pub fn new(n: usize, k: usize, kind: GameKind) -> Self {
        GameConfig {
            n,
            k,
            kind,
            query_cap: None,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn with_query_cap(mut self, cap: usize) -> Self {
        self.query_cap = Some(cap);
        self
    }

    /// `10 (k + 1) n` unless overridden.
    pub fn effective_query_cap(&self) -> usize {
        self.query_cap.unwrap_or(10 * (self.k + 1) * self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameResult {
    pub n: usize,
    pub k: usize,
    pub kind: GameKind,
    pub solver: String,
    pub adversary: String,
    pub queries_used: usize,
    pub claim: Option<Claim>,
    pub verified: bool,
    pub transcript: Transcript,
    pub adversary_forfeit: bool,
}

/// Serialized form of a [`GameResult`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub n: usize,
    pub k: usize,
    pub kind: GameKind,
    pub solver: String,
    pub adversary: String,
    pub queries: usize,
    pub verified: bool,
    pub forfeit: bool,
}

impl GameResult {
    pub fn record(&self) -> GameRecord {
        GameRecord {
            n: self.n,
            k: self.k,
            kind: self.kind,
            solver: self.solver.clone(),
            adversary: self.adversary.clone(),
            queries: self.queries_used,
            verified: self.verified,
            forfeit: self.adversary_forfeit,
        }
    }
}

pub fn run_game(
    solver: &mut dyn Solver,
    adversary: &mut dyn Adversary,
    config: GameConfig,
) -> Result<GameResult, ArenaError> {
    config.validate()?;
    let GameConfig { n, k, kind, .. } = config;
    if !solver.supports(kind) {
        return Err(ArenaError::Unsupported {
            solver: solver.name(),
            kind,
        });
    }
    let cap = config.effective_query_cap();
    let mut state = GameState::with_enumeration_cap(n, k, kind, config.enumeration_cap);
    let mut last = None;
    let mut claim = None;
    let mut forfeit = false;

    loop {
        match solver.step(last, &state.view()) {
            SolverDecision::Claim(c) => {
                claim = Some(c);
                break;
            }
            SolverDecision::Ask(q) => {
                if state.transcript.len() >= cap {
                    break;
                }
                state.transcript.check_query(q)?;
                let answer = match adversary.answer(&state.transcript, q) {
                    Ok(a) => a,
                    Err(AdversaryError::Forfeit(_)) | Err(AdversaryError::Model(_)) => {
                        forfeit = true;
                        break;
                    }
                };
                state.record(q, answer)?;
                if state.is_satisfiable() == Some(false) {
                    forfeit = true;
                    break;
                }
                last = Some(answer);
            }
        }
    }

    let verified = !forfeit
        && claim.is_some_and(|c| {
            verify_claim_capped(&state.transcript, c, k, kind, config.enumeration_cap)
        });
    Ok(GameResult {
        n,
        k,
        kind,
        solver: solver.name(),
        adversary: adversary.name(),
        queries_used: state.transcript.len(),
        claim,
        verified,
        transcript: state.transcript,
        adversary_forfeit: forfeit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::{Claim1Wrapper, Consistent, TopBottom, Truthful};
    use crate::model::Scenario;
    use crate::solvers::{NaiveMaxMin, TournamentMax};

    fn q(a: usize, b: usize) -> Query {
        Query::new(a, b).unwrap()
    }

    #[test]
    fn tournament_against_truth() {
        let mut solver = TournamentMax::new(3, 0);
        let mut adv = Truthful::new(Scenario::identity(3));
        let r = run_game(&mut solver, &mut adv, GameConfig::new(3, 0, GameKind::Max)).unwrap();
        assert_eq!(r.queries_used, 2);
        assert!(r.verified);
        assert_eq!(r.claim, Some(Claim::Max(ElementId(2))));
    }

    #[test]
    fn tournament_against_wrapped_consistent() {
        let mut solver = TournamentMax::new(3, 1);
        let mut adv = Claim1Wrapper::new(Consistent::new(3), 1, GameKind::Max);
        let r = run_game(&mut solver, &mut adv, GameConfig::new(3, 1, GameKind::Max)).unwrap();
        assert!(r.queries_used >= 5, "{r:?}");
        assert!(r.verified && !r.adversary_forfeit);
    }

    #[test]
    fn naive_maxmin_against_wrapped_topbottom() {
        let mut solver = NaiveMaxMin::new(4, 1);
        let mut adv = Claim1Wrapper::new(TopBottom::new(4), 1, GameKind::MaxMin);
        let r = run_game(&mut solver, &mut adv, GameConfig::new(4, 1, GameKind::MaxMin)).unwrap();
        assert!(r.queries_used >= 7, "{r:?}");
        assert!(r.verified && !r.adversary_forfeit);
    }

    #[test]
    fn verify_claim_examples() {
        let zero = Claim::Max(ElementId(0));
        assert!(!verify_claim(&Transcript::new(2), zero, 0, GameKind::Max));
        let t = Transcript::from_entries(2, [(q(0, 1), Answer::First)]).unwrap();
        assert!(verify_claim(&t, zero, 0, GameKind::Max));
        assert!(!verify_claim(&t, zero, 0, GameKind::MaxMin));

        let entries = [(0, 1), (0, 1), (0, 2), (0, 2)].map(|(a, b)| (q(a, b), Answer::First));
        let t = Transcript::from_entries(3, entries).unwrap();
        assert!(verify_claim(&t, zero, 1, GameKind::Max));
        assert!(!verify_claim(&t, zero, 2, GameKind::Max));
    }

    #[test]
    fn verify_claim_above_the_cap_uses_degrees() {
        let n = 10;
        let entries = (1..n).map(|b| (q(0, b), Answer::First));
        let t = Transcript::from_entries(n, entries).unwrap();
        assert!(verify_claim(&t, Claim::Max(ElementId(0)), 0, GameKind::Max));
        assert!(!verify_claim(&t, Claim::Max(ElementId(0)), 1, GameKind::Max));
    }

    #[test]
    fn cap_exhaustion_reports_no_claim() {
        struct Stubborn;
        impl Solver for Stubborn {
            fn name(&self) -> String {
                "stubborn".into()
            }
            fn supports(&self, _: GameKind) -> bool {
                true
            }
            fn step(&mut self, _: Option<Answer>, _: &GameView<'_>) -> SolverDecision {
                SolverDecision::Ask(Query::new(0, 1).unwrap())
            }
        }
        let mut adv = Consistent::new(2);
        let cfg = GameConfig::new(2, 0, GameKind::Max).with_query_cap(4);
        let r = run_game(&mut Stubborn, &mut adv, cfg).unwrap();
        assert_eq!((r.queries_used, r.claim, r.verified), (4, None, false));
    }

    #[test]
    fn invalid_configurations_are_rejected() {
        let mut adv = Consistent::new(2);
        assert!(matches!(
            run_game(&mut TournamentMax::new(2, 0), &mut adv, GameConfig::new(2, 0, GameKind::MaxMin)),
            Err(ArenaError::Unsupported { .. })
        ));
        assert!(matches!(
            run_game(&mut TournamentMax::new(1, 0), &mut adv, GameConfig::new(0, 0, GameKind::Max)),
            Err(ArenaError::InvalidConfig(_))
        ));
    }

    #[test]
    fn unsatisfiable_answers_are_flagged_as_forfeit() {
        // answers flip every time: after two contradicting answers at k = 0
        // nothing is left
        struct Flipper(bool);
        impl Adversary for Flipper {
            fn name(&self) -> String {
                "flipper".into()
            }
            fn answer(&mut self, _: &Transcript, _: Query) -> Result<Answer, AdversaryError> {
                self.0 = !self.0;
                Ok(if self.0 { Answer::First } else { Answer::Second })
            }
            fn committed_scenario(&self) -> Scenario {
                Scenario::identity(2)
            }
        }
        struct Repeat;
        impl Solver for Repeat {
            fn name(&self) -> String {
                "repeat".into()
            }
            fn supports(&self, _: GameKind) -> bool {
                true
            }
            fn step(&mut self, _: Option<Answer>, _: &GameView<'_>) -> SolverDecision {
                SolverDecision::Ask(Query::new(0, 1).unwrap())
            }
        }
        let r = run_game(&mut Repeat, &mut Flipper(false), GameConfig::new(2, 0, GameKind::Max))
            .unwrap();
        assert!(r.adversary_forfeit);
        assert_eq!(r.queries_used, 2);
        assert!(!r.verified);
    }

    #[test]
    fn record_round_trips_through_json() {
        let mut solver = TournamentMax::new(3, 0);
        let mut adv = Consistent::new(3);
        let r = run_game(&mut solver, &mut adv, GameConfig::new(3, 0, GameKind::Max)).unwrap();
        let json = serde_json::to_string(&r.record()).unwrap();
        assert!(json.contains("\"kind\":\"max\""));
        let back: GameRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r.record());
    }
}
