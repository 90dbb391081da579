//! Comparison search games in which up to `k` answers may be lies.
//!
//! The crate provides the game vocabulary ([`model`]), the comparison graph
//! and its degree-based candidate sets ([`graph`]), answer strategies
//! ([`adversaries`]), query strategies ([`solvers`]), a refereed game loop
//! ([`arena`]), an exhaustive minimax oracle for tiny instances ([`exact`]),
//! the closed-form bounds ([`bounds`]) and grid runners that check the two
//! against each other ([`harness`]).

pub mod adversaries;
pub mod arena;
pub mod bounds;
pub mod exact;
pub mod graph;
pub mod harness;
pub mod model;
pub mod scenarios;
pub mod solvers;

pub use arena::{run_game, verify_claim, GameConfig, GameRecord, GameResult};
pub use graph::ComparisonGraph;
pub use model::{
    answer_truth, consistent_scenarios, lie_count, target_of, Answer, Claim, ElementId, GameKind,
    Query, Scenario, Transcript,
};
