//! Deciding a cycle type: known exceptions, open cases, constructive rules
//! and, as a last resort, search.
//!
//! Rules are tried in this order:
//!
//! 1. the nonexistent types `(4)`, `(6)`, `(3,3)`;
//! 2. the open cases of order 14 and the open two-cycle family;
//! 3. the catalog and the dedicated `(2,2,4)` join;
//! 4. `2^b` by round robin and a single odd cycle by zigzag cycles;
//! 5. bipartite doubling of an equal-order split when every length is even;
//! 6. extension of a smaller type by one long cycle;
//! 7. extension of a smaller type by digons;
//! 8. search, through the disk cache when one is attached.
//!
//! Sub-problems are memoized, failures included.

pub mod cache;
pub mod direct;
pub mod search;
pub mod trace;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::digraph::{CycleType, Decomposition};
use crate::error::{Error, Result};
use crate::recursion::{digons_admissible, long_cycle_admissible};
use crate::rotational::{catalog::catalog_lookup, single_starter_obstructed};
use crate::verify::{verify_decomposition, CertificateReport};

use cache::DiskCache;
use search::{
    anneal, exact_cover, orbit_search, starter_search, SearchLog, SearchResult, EXACT_COVER_MAX_N,
};
use trace::{apply, Rule, StrategyTrace};

/// 1 for odd `m`, 0 for even.
pub fn delta(m: usize) -> usize {
    m % 2
}

const EXCEPTIONS: [&[usize]; 3] = [&[4], &[6], &[3, 3]];

const OPEN_AT_14: [&[usize]; 9] = [
    &[4, 10],
    &[6, 8],
    &[3, 3, 8],
    &[3, 4, 7],
    &[3, 5, 6],
    &[4, 4, 6],
    &[4, 5, 5],
    &[3, 3, 3, 5],
    &[3, 3, 4, 4],
];

/// The types known to have no solution.
pub fn is_known_exception(ty: &CycleType) -> bool {
    EXCEPTIONS.contains(&ty.lengths())
}

/// Types whose status is not settled: nine of order 14, and `(m1, m2)`
/// with `m1` in `{4, 6}`, `m2` even and `m1 + m2 >= 14`.
pub fn is_open_case(ty: &CycleType) -> bool {
    if OPEN_AT_14.contains(&ty.lengths()) {
        return true;
    }
    matches!(ty.lengths(), &[a, b] if (a == 4 || a == 6) && b % 2 == 0 && a + b >= 14)
}

/// The open types of order 14.
pub fn open_cases_at_14() -> Vec<CycleType> {
    OPEN_AT_14
        .iter()
        .map(|l| CycleType::new(l.to_vec()).expect("listed types are valid"))
        .collect()
}

/// All cycle types of order `2..=max_n`, by order and then lexicographically.
pub fn cycle_types(max_n: usize) -> Vec<CycleType> {
    fn parts(n: usize, min: usize, prefix: &mut Vec<usize>, out: &mut Vec<CycleType>) {
        if n == 0 {
            out.push(CycleType::new(prefix.clone()).expect("parts are at least 2"));
            return;
        }
        for p in min..=n {
            if n - p == 0 || n - p >= p {
                prefix.push(p);
                parts(n - p, p, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    for n in 2..=max_n {
        parts(n, 2, &mut Vec::new(), &mut out);
    }
    out
}

/// Work allowed per search kernel and the seed for all randomized search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub nodes: u64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            nodes: 20_000_000,
            seed: 0,
        }
    }
}

/// A certified decomposition and how it was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub cycle_type: CycleType,
    pub decomposition: Decomposition,
    pub trace: StrategyTrace,
    pub report: CertificateReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "witness", rename_all = "kebab-case")]
pub enum Nonexistence {
    KnownException,
    ExhaustiveSearch(SearchLog),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum UnknownReason {
    OpenCase,
    BudgetExhausted { searches: Vec<SearchLog> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(Solution),
    Nonexistent(Nonexistence),
    Unknown(UnknownReason),
}

impl SolveOutcome {
    pub fn verdict(&self) -> &'static str {
        match self {
            SolveOutcome::Solved(_) => "solved",
            SolveOutcome::Nonexistent(_) => "nonexistent",
            SolveOutcome::Unknown(_) => "unknown",
        }
    }

    pub fn solution(&self) -> Option<&Solution> {
        match self {
            SolveOutcome::Solved(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug)]
struct Built {
    decomposition: Decomposition,
    trace: StrategyTrace,
}

#[derive(Debug, Clone)]
enum Construct {
    Built(Arc<Built>),
    Impossible(Nonexistence),
    Open,
    Failed(Vec<SearchLog>),
}

/// Memoizing dispatcher. Shared references may be used from several
/// threads; results depend only on the type and the budget.
#[derive(Debug, Default)]
pub struct Solver {
    budget: SearchBudget,
    memo: Mutex<HashMap<CycleType, Construct>>,
    cache: Option<Mutex<DiskCache>>,
}

impl Solver {
    pub fn new(budget: SearchBudget) -> Self {
        Solver {
            budget,
            ..Default::default()
        }
    }

    /// Search witnesses are read from and written to `cache`.
    pub fn with_cache(mut self, cache: DiskCache) -> Self {
        self.cache = Some(Mutex::new(cache));
        self
    }

    pub fn budget(&self) -> SearchBudget {
        self.budget
    }

    pub fn solve(&self, ty: &CycleType) -> SolveOutcome {
        match self.construct(ty) {
            Construct::Built(b) => {
                let report = verify_decomposition(&b.decomposition, ty);
                assert!(report.ok, "constructions are certified as they are built");
                SolveOutcome::Solved(Solution {
                    cycle_type: ty.clone(),
                    decomposition: b.decomposition.clone(),
                    trace: b.trace.clone(),
                    report,
                })
            }
            Construct::Impossible(w) => SolveOutcome::Nonexistent(w),
            Construct::Open => SolveOutcome::Unknown(UnknownReason::OpenCase),
            Construct::Failed(searches) => {
                SolveOutcome::Unknown(UnknownReason::BudgetExhausted { searches })
            }
        }
    }

    fn construct(&self, ty: &CycleType) -> Construct {
        if let Some(c) = self.memo.lock().expect("memo lock").get(ty) {
            return c.clone();
        }
        let c = self.construct_fresh(ty);
        self.memo
            .lock()
            .expect("memo lock")
            .insert(ty.clone(), c.clone());
        c
    }

    fn built(&self, ty: &CycleType) -> Option<Arc<Built>> {
        match self.construct(ty) {
            Construct::Built(b) => Some(b),
            _ => None,
        }
    }

    fn construct_fresh(&self, ty: &CycleType) -> Construct {
        if is_known_exception(ty) {
            return Construct::Impossible(Nonexistence::KnownException);
        }
        if is_open_case(ty) {
            return Construct::Open;
        }
        let n = ty.order();
        let lengths = ty.lengths();
        let leaf = |rule: Rule| self.finish(ty, rule, &[]);

        if catalog_lookup(ty).is_some() {
            if let Some(b) = leaf(Rule::Catalog) {
                return b;
            }
        }
        if lengths == [2, 2, 4] {
            if let Some(b) = leaf(Rule::Special224) {
                return b;
            }
        }
        if ty.is_uniform() && lengths[0] == 2 {
            if let Some(b) = leaf(Rule::RoundRobin) {
                return b;
            }
        }
        if lengths.len() == 1 && n % 2 == 1 {
            if let Some(b) = leaf(Rule::Walecki) {
                return b;
            }
        }
        if lengths.len() >= 2 && lengths.iter().all(|m| m % 2 == 0) && n % 4 == 0 {
            for (x, y) in equal_splits(ty) {
                let (Some(bx), Some(by)) = (self.built(&x), self.built(&y)) else {
                    continue;
                };
                if let Some(b) = self.finish(ty, Rule::Double, &[(&x, &bx), (&y, &by)]) {
                    return b;
                }
            }
        }
        let mut distinct = lengths.to_vec();
        distinct.dedup();
        for &t in distinct.iter().rev() {
            let Some(base) = ty.without(&[t]) else {
                continue;
            };
            if !long_cycle_admissible(&base, t) {
                continue;
            }
            if let Some(bb) = self.built(&base) {
                if let Some(b) = self.finish(ty, Rule::LongCycle { t }, &[(&base, &bb)]) {
                    return b;
                }
            }
        }
        for pairs in (1..=ty.count(2)).rev() {
            let Some(base) = ty.without(&vec![2; pairs]) else {
                continue;
            };
            let t = 2 * pairs;
            if !digons_admissible(&base, t) {
                continue;
            }
            if let Some(bb) = self.built(&base) {
                if let Some(b) = self.finish(ty, Rule::Digons { t }, &[(&base, &bb)]) {
                    return b;
                }
            }
        }
        self.search(ty)
    }

    /// Applies `rule` and certifies the result.
    fn finish(
        &self,
        ty: &CycleType,
        rule: Rule,
        inputs: &[(&CycleType, &Arc<Built>)],
    ) -> Option<Construct> {
        let plain: Vec<(&CycleType, &Decomposition)> =
            inputs.iter().map(|(t, b)| (*t, &b.decomposition)).collect();
        let d = apply(ty, &rule, &plain).ok()?;
        if !verify_decomposition(&d, ty).ok {
            return None;
        }
        let traces: Vec<&StrategyTrace> = inputs.iter().map(|(_, b)| &b.trace).collect();
        Some(Construct::Built(Arc::new(Built {
            decomposition: d,
            trace: StrategyTrace::node(ty, rule, &traces),
        })))
    }

    fn search(&self, ty: &CycleType) -> Construct {
        let cached = self
            .cache
            .as_ref()
            .and_then(|c| c.lock().expect("cache lock").get(ty).cloned());
        if let Some(rule) = cached {
            if let Some(b) = self.finish(ty, rule, &[]) {
                return b;
            }
        }
        let n = ty.order();
        let budget = self.budget;
        let mut logs = Vec::new();
        let found = |rule: Rule| -> Option<Construct> {
            let b = self.finish(ty, rule.clone(), &[])?;
            if let Some(c) = &self.cache {
                // A cache that cannot be written only costs time later.
                let _ = c.lock().expect("cache lock").put(ty, &rule);
            }
            Some(b)
        };
        if n < EXACT_COVER_MAX_N {
            match exact_cover(ty, budget.nodes, budget.seed) {
                SearchResult::Found(d) => {
                    return found(Rule::explicit("exact-cover", &d)).expect("certified")
                }
                SearchResult::Exhausted(log) => {
                    return Construct::Impossible(Nonexistence::ExhaustiveSearch(log))
                }
                SearchResult::OutOfBudget(log) => logs.push(log),
            }
        }
        // A short pass over every kernel, then a full one.
        for budget_nodes in [budget.nodes / 20, budget.nodes] {
            if !single_starter_obstructed(ty) {
                match starter_search(ty, 1, budget_nodes, budget.seed) {
                    SearchResult::Found(set) => {
                        return found(Rule::starters(&set)).expect("certified")
                    }
                    SearchResult::Exhausted(log) | SearchResult::OutOfBudget(log) => logs.push(log),
                }
            }
            for q in [3, 5, 7] {
                if n > q + 1 && (n - 1) % q == 0 {
                    match starter_search(ty, q, budget_nodes, budget.seed) {
                        SearchResult::Found(set) => {
                            return found(Rule::starters(&set)).expect("certified")
                        }
                        SearchResult::Exhausted(log) | SearchResult::OutOfBudget(log) => {
                            logs.push(log)
                        }
                    }
                }
            }
            for q in [3, 2, 4] {
                if n > q && n % q == 0 {
                    match orbit_search(ty, q, budget_nodes, budget.seed) {
                        SearchResult::Found(d) => {
                            return found(Rule::explicit(&format!("orbit-q{q}"), &d))
                                .expect("certified")
                        }
                        SearchResult::Exhausted(log) | SearchResult::OutOfBudget(log) => {
                            logs.push(log)
                        }
                    }
                }
            }
            match anneal(ty, budget_nodes, budget.seed) {
                SearchResult::Found(d) => {
                    return found(Rule::explicit("anneal", &d)).expect("certified")
                }
                SearchResult::Exhausted(log) | SearchResult::OutOfBudget(log) => logs.push(log),
            }
        }
        Construct::Failed(logs)
    }
}

/// Splits of an all-even type into two sub-types of equal order; the first
/// part holds the largest length.
fn equal_splits(ty: &CycleType) -> Vec<(CycleType, CycleType)> {
    let l = ty.lengths();
    let half = ty.order() / 2;
    let (&largest, rest) = l.split_last().expect("non-empty");
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    fn pick(
        rest: &[usize],
        i: usize,
        need: usize,
        chosen: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
    ) {
        if need == 0 {
            found.push(chosen.clone());
            return;
        }
        if i == rest.len() {
            return;
        }
        if rest[i] <= need {
            chosen.push(rest[i]);
            pick(rest, i + 1, need - rest[i], chosen, found);
            chosen.pop();
        }
        pick(rest, i + 1, need, chosen, found);
    }
    let mut found = Vec::new();
    if largest <= half {
        pick(rest, 0, half - largest, &mut vec![largest], &mut found);
    }
    for x in found {
        if !seen.insert(x.clone()) {
            continue;
        }
        if let (Ok(a), Some(b)) = (CycleType::new(x.clone()), ty.without(&x)) {
            out.push((a, b));
        }
    }
    out
}

/// Solves `ty` with a fresh dispatcher.
pub fn solve(ty: &CycleType, budget: SearchBudget) -> SolveOutcome {
    Solver::new(budget).solve(ty)
}

/// Exact cover alone, without any constructive rule.
pub fn brute_force_search(ty: &CycleType, budget: SearchBudget) -> SolveOutcome {
    match exact_cover(ty, budget.nodes, budget.seed) {
        SearchResult::Found(d) => {
            let rule = Rule::explicit("exact-cover", &d);
            let d = apply(ty, &rule, &[]).expect("search output rebuilds");
            let report = verify_decomposition(&d, ty);
            SolveOutcome::Solved(Solution {
                cycle_type: ty.clone(),
                decomposition: d,
                trace: StrategyTrace::leaf(ty, rule),
                report,
            })
        }
        SearchResult::Exhausted(log) => {
            SolveOutcome::Nonexistent(Nonexistence::ExhaustiveSearch(log))
        }
        SearchResult::OutOfBudget(log) => SolveOutcome::Unknown(UnknownReason::BudgetExhausted {
            searches: vec![log],
        }),
    }
}

fn extend(base: &Solution, ty: CycleType, rule: Rule) -> Result<Solution> {
    let d = apply(&ty, &rule, &[(&base.cycle_type, &base.decomposition)])?;
    let report = verify_decomposition(&d, &ty);
    if !report.ok {
        return Err(Error::NotCertified(report));
    }
    Ok(Solution {
        trace: StrategyTrace::node(&ty, rule, &[&base.trace]),
        cycle_type: ty,
        decomposition: d,
        report,
    })
}

/// Adds one cycle of length `t` to a solved type.
pub fn extend_by_long_cycle(base: &Solution, t: usize) -> Result<Solution> {
    extend(base, base.cycle_type.with(&[t]), Rule::LongCycle { t })
}

/// Adds `t/2` digons to a solved type.
pub fn extend_by_digons(base: &Solution, t: usize) -> Result<Solution> {
    extend(
        base,
        base.cycle_type.with(&vec![2; t / 2]),
        Rule::Digons { t },
    )
}
