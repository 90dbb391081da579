//! Named solver/adversary registries and the grid runners behind the
//! command-line tools and the acceptance suite.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversaries::{Adversary, Claim1Wrapper, Consistent, TopBottom, Truthful};
use crate::arena::{run_game, ArenaError, GameConfig, GameResult};
use crate::bounds::{pohl, rgl_max, thm1_lower};
use crate::exact::{within_guard, ExactError, ExactSolver};
use crate::model::{GameKind, Scenario};
use crate::solvers::{NaiveMaxMin, PairAndConquer, RandomSolver, Solver, TournamentMax};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SolverName {
    TournamentMax,
    NaiveMaxMin,
    PairAndConquer,
    Random,
}

impl SolverName {
    pub const ALL: [SolverName; 4] = [
        SolverName::TournamentMax,
        SolverName::NaiveMaxMin,
        SolverName::PairAndConquer,
        SolverName::Random,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SolverName::TournamentMax => "tournament-max",
            SolverName::NaiveMaxMin => "naive-maxmin",
            SolverName::PairAndConquer => "pair-and-conquer",
            SolverName::Random => "random",
        }
    }

    pub fn supports(self, kind: GameKind) -> bool {
        match self {
            SolverName::TournamentMax => kind == GameKind::Max,
            SolverName::NaiveMaxMin | SolverName::PairAndConquer => kind == GameKind::MaxMin,
            SolverName::Random => true,
        }
    }

    pub fn build(self, n: usize, k: usize, seed: u64) -> Box<dyn Solver> {
        match self {
            SolverName::TournamentMax => Box::new(TournamentMax::new(n, k)),
            SolverName::NaiveMaxMin => Box::new(NaiveMaxMin::new(n, k)),
            SolverName::PairAndConquer => Box::new(PairAndConquer::new(n, k)),
            SolverName::Random => Box::new(RandomSolver::new(seed)),
        }
    }
}

impl fmt::Display for SolverName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SolverName::ALL
            .into_iter()
            .find(|name| name.as_str() == s)
            .ok_or_else(|| format!("unknown solver `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AdversaryBase {
    Truthful,
    Consistent,
    TopBottom,
}

impl AdversaryBase {
    pub const ALL: [AdversaryBase; 3] = [
        AdversaryBase::Truthful,
        AdversaryBase::Consistent,
        AdversaryBase::TopBottom,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AdversaryBase::Truthful => "truthful",
            AdversaryBase::Consistent => "consistent",
            AdversaryBase::TopBottom => "topbottom",
        }
    }
}

impl FromStr for AdversaryBase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AdversaryBase::ALL
            .into_iter()
            .find(|name| name.as_str() == s)
            .ok_or_else(|| format!("unknown adversary `{s}`"))
    }
}

/// An adversary strategy, optionally under the last-moment lying wrapper.
/// Written `topbottom` or `topbottom+claim1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdversarySpec {
    pub base: AdversaryBase,
    pub claim1: bool,
}

impl AdversarySpec {
    pub fn new(base: AdversaryBase, claim1: bool) -> Self {
        AdversarySpec { base, claim1 }
    }

    pub fn all() -> Vec<AdversarySpec> {
        AdversaryBase::ALL
            .into_iter()
            .flat_map(|base| [false, true].map(|claim1| AdversarySpec { base, claim1 }))
            .collect()
    }

    /// `seed` only matters for the truthful adversary, whose hidden order is a
    /// seeded shuffle.
    pub fn build(self, n: usize, k: usize, kind: GameKind, seed: u64) -> Box<dyn Adversary> {
        let base: Box<dyn Adversary> = match self.base {
            AdversaryBase::Truthful => {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                let truth = Scenario::from_descending(&order).expect("shuffled 0..n");
                Box::new(Truthful::new(truth))
            }
            AdversaryBase::Consistent => Box::new(Consistent::new(n)),
            AdversaryBase::TopBottom => Box::new(TopBottom::new(n)),
        };
        if self.claim1 {
            Box::new(Claim1Wrapper::new(base, k, kind))
        } else {
            base
        }
    }
}

impl fmt::Display for AdversarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.base.as_str())?;
        if self.claim1 {
            f.write_str("+claim1")?;
        }
        Ok(())
    }
}

impl FromStr for AdversarySpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.strip_suffix("+claim1") {
            Some(base) => Ok(AdversarySpec::new(base.parse()?, true)),
            None => Ok(AdversarySpec::new(s.parse()?, false)),
        }
    }
}

pub fn play(
    solver: SolverName,
    adversary: AdversarySpec,
    config: GameConfig,
    seed: u64,
) -> Result<GameResult, ArenaError> {
    config.validate()?;
    let mut s = solver.build(config.n, config.k, seed);
    let mut a = adversary.build(config.n, config.k, config.kind, seed);
    run_game(s.as_mut(), a.as_mut(), config)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub n_range: RangeInclusive<usize>,
    pub k_range: RangeInclusive<usize>,
    pub solvers: Vec<SolverName>,
    pub adversaries: Vec<AdversarySpec>,
    pub kind: GameKind,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub k: usize,
    pub solver: String,
    pub adversary: String,
    pub kind: GameKind,
    pub queries: usize,
    pub verified: bool,
}

/// One game per grid point, solver and adversary; rows sorted by
/// `(n, k, solver, adversary)`.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, ArenaError> {
    if cfg.n_range.is_empty() || cfg.k_range.is_empty() {
        return Err(ArenaError::InvalidConfig("empty n or k range".into()));
    }
    if let Some(bad) = cfg.solvers.iter().find(|s| !s.supports(cfg.kind)) {
        return Err(ArenaError::Unsupported {
            solver: bad.to_string(),
            kind: cfg.kind,
        });
    }
    let mut jobs = Vec::new();
    for n in cfg.n_range.clone() {
        for k in cfg.k_range.clone() {
            for &solver in &cfg.solvers {
                for &adversary in &cfg.adversaries {
                    jobs.push((n, k, solver, adversary));
                }
            }
        }
    }
    let mut rows = jobs
        .into_par_iter()
        .map(|(n, k, solver, adversary)| {
            let r = play(solver, adversary, GameConfig::new(n, k, cfg.kind), cfg.seed)?;
            Ok(SweepRow {
                n,
                k,
                solver: solver.to_string(),
                adversary: adversary.to_string(),
                kind: cfg.kind,
                queries: r.queries_used,
                verified: r.verified,
            })
        })
        .collect::<Result<Vec<_>, ArenaError>>()?;
    rows.sort();
    Ok(rows)
}

/// A bound that an observed value failed to respect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub n: usize,
    pub k: usize,
    pub bound: &'static str,
    pub expected: u64,
    pub observed: u64,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} k={} bound={} expected={} observed={} {}",
            self.n, self.k, self.bound, self.expected, self.observed, self.detail
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactEntry {
    pub n: usize,
    pub k: usize,
    pub kind: GameKind,
    pub value: u32,
}

/// Exact values over `n in 2..=n_max`, `k in k_range`, skipping points outside the guard.
pub fn exact_table(
    kinds: &[GameKind],
    n_max: usize,
    k_range: RangeInclusive<usize>,
) -> Result<Vec<ExactEntry>, ExactError> {
    let mut out = Vec::new();
    for &kind in kinds {
        for n in 2..=n_max {
            for k in k_range.clone() {
                if !within_guard(n, k) {
                    continue;
                }
                let value = ExactSolver::new(n, k, kind)?.parallel(true).game_value()?;
                out.push(ExactEntry { n, k, kind, value });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct ExactReport {
    pub entries: Vec<ExactEntry>,
    pub skipped: Vec<(usize, usize)>,
    pub violations: Vec<Violation>,
}

/// Checks exact game values against the closed forms:
/// max games equal `(k+1)n - 1` (and `2k + 1` at `n = 2`); max-min games
/// equal `ceil(3n/2) - 2` at `k = 0` and are at least the TOP/BOTTOM bound.
pub fn verify_exact(
    kind: GameKind,
    n_range: RangeInclusive<usize>,
    k_range: RangeInclusive<usize>,
) -> Result<ExactReport, ExactError> {
    let mut report = ExactReport::default();
    for n in n_range.filter(|&n| n >= 2) {
        for k in k_range.clone() {
            if !within_guard(n, k) {
                report.skipped.push((n, k));
                continue;
            }
            let value = ExactSolver::new(n, k, kind)?.parallel(true).game_value()?;
            report.entries.push(ExactEntry { n, k, kind, value });
            let observed = u64::from(value);
            let mut require = |ok: bool, bound: &'static str, expected: u64| {
                if !ok {
                    report.violations.push(Violation {
                        n,
                        k,
                        bound,
                        expected,
                        observed,
                        detail: format!("exact {kind} value"),
                    });
                }
            };
            let (n64, k64) = (n as u64, k as u64);
            match kind {
                GameKind::Max => {
                    let rgl = rgl_max(n64, k64);
                    require(observed == rgl, "rgl_max", rgl);
                    if n == 2 {
                        require(observed == 2 * k64 + 1, "corollary_2k_plus_1", 2 * k64 + 1);
                    }
                }
                GameKind::MaxMin => {
                    let lower = thm1_lower(n64, k64).expect("n >= 2");
                    require(observed >= lower, "thm1_lower", lower);
                    if k == 0 {
                        let p = pohl(n64).expect("n >= 2");
                        require(observed == p, "pohl", p);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Outcome of playing solvers against the lower-bound adversaries.
#[derive(Debug, Clone, Default)]
pub struct AdversaryReport {
    pub games: usize,
    /// Games that hit the query cap without a claim.
    pub unfinished: usize,
    pub violations: Vec<Violation>,
    /// Fewest queries of any verified game, per `(n, k)`.
    pub min_verified: Vec<((usize, usize), u64)>,
}

/// The wrapped lower-bound adversary and bound for `kind`.
pub fn lower_bound_setup(kind: GameKind, n: usize, k: usize) -> (AdversarySpec, &'static str, u64) {
    let (n64, k64) = (n as u64, k as u64);
    match kind {
        GameKind::Max => (
            AdversarySpec::new(AdversaryBase::Consistent, true),
            "rgl_max",
            rgl_max(n64, k64),
        ),
        GameKind::MaxMin => (
            AdversarySpec::new(AdversaryBase::TopBottom, true),
            "thm1_lower",
            thm1_lower(n64, k64).expect("n >= 2"),
        ),
    }
}

/// Every deterministic solver for `kind`, plus `trials` seeded random
/// solvers, against the wrapped lower-bound adversary at every grid point.
/// Verified games below the bound, unverified claims and forfeits are all
/// reported as violations.
pub fn verify_adversary(
    kind: GameKind,
    n_range: RangeInclusive<usize>,
    k_range: RangeInclusive<usize>,
    trials: usize,
    seed: u64,
) -> Result<AdversaryReport, ArenaError> {
    let mut jobs = Vec::new();
    for n in n_range.filter(|&n| n >= 2) {
        for k in k_range.clone() {
            for solver in SolverName::ALL {
                if !solver.supports(kind) {
                    continue;
                }
                let runs = if solver == SolverName::Random { trials } else { 1 };
                for trial in 0..runs {
                    jobs.push((n, k, solver, seed.wrapping_add(trial as u64)));
                }
            }
        }
    }
    let results = jobs
        .into_par_iter()
        .map(|(n, k, solver, seed)| {
            let (adversary, bound, expected) = lower_bound_setup(kind, n, k);
            let r = play(solver, adversary, GameConfig::new(n, k, kind), seed)?;
            Ok((n, k, bound, expected, seed, r))
        })
        .collect::<Result<Vec<_>, ArenaError>>()?;

    let mut report = AdversaryReport {
        games: results.len(),
        ..Default::default()
    };
    let mut min_verified = std::collections::BTreeMap::new();
    for (n, k, bound, expected, seed, r) in results {
        let observed = r.queries_used as u64;
        let detail = format!("solver={} adversary={} seed={seed}", r.solver, r.adversary);
        if r.adversary_forfeit {
            report.violations.push(Violation {
                n,
                k,
                bound: "no_forfeit",
                expected,
                observed,
                detail,
            });
        } else if r.claim.is_none() {
            report.unfinished += 1;
        } else if !r.verified {
            report.violations.push(Violation {
                n,
                k,
                bound: "sound_claim",
                expected,
                observed,
                detail,
            });
        } else {
            let slot = min_verified.entry((n, k)).or_insert(observed);
            *slot = (*slot).min(observed);
            if observed < expected {
                report.violations.push(Violation {
                    n,
                    k,
                    bound,
                    expected,
                    observed,
                    detail,
                });
            }
        }
    }
    report.min_verified = min_verified.into_iter().collect();
    Ok(report)
}

/// The max ladder against every adversary (with and without the wrapper)
/// never needs more than `(k+1)(n-1) + k` queries, and its claim verifies.
pub fn verify_tournament_ceiling(
    n_range: RangeInclusive<usize>,
    k_range: RangeInclusive<usize>,
    seed: u64,
) -> Result<(usize, Vec<Violation>), ArenaError> {
    let mut jobs = Vec::new();
    for n in n_range.filter(|&n| n >= 1) {
        for k in k_range.clone() {
            for adversary in AdversarySpec::all() {
                jobs.push((n, k, adversary));
            }
        }
    }
    let games = jobs.len();
    let violations = jobs
        .into_par_iter()
        .map(|(n, k, adversary)| {
            let r = play(
                SolverName::TournamentMax,
                adversary,
                GameConfig::new(n, k, GameKind::Max),
                seed,
            )?;
            let ceiling = ((k + 1) * n.saturating_sub(1) + if n > 1 { k } else { 0 }) as u64;
            let observed = r.queries_used as u64;
            let ok = observed <= ceiling && r.verified && !r.adversary_forfeit;
            Ok((!ok).then(|| Violation {
                n,
                k,
                bound: "tournament_ceiling",
                expected: ceiling,
                observed,
                detail: format!("adversary={adversary} verified={}", r.verified),
            }))
        })
        .collect::<Result<Vec<_>, ArenaError>>()?;
    Ok((games, violations.into_iter().flatten().collect()))
}
