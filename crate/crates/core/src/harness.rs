//! Exhaustive cross-checks over all labeled trees of bounded order.
//!
//! The Prüfer space of each order is cut into contiguous shards; each shard
//! is processed independently and outcomes merge by summing counts and
//! concatenating counterexamples, so shard results can be combined in any
//! order.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::constructor::{construct_with, verify, Strategy};
use crate::equitable::{decide, decide2, decide_with, DecideMode};
use crate::forest::{select_bipartition, Forest};
use crate::oracle::{canonical_form, oracle_exists, LabeledTrees, ENUMERATION_MAX_N};
use crate::stability::{alpha_x, major_vertex_check, MajorVertexReport};
use crate::{ceil_div, Error, Result};

/// Upper end of the pure integer check `k >= ⌈(n+1)/(α+1)⌉ ⟺ α >= ⌊n/k⌋`.
pub const EQUIVALENCE_MAX_N: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `decide(F, k)` against the brute-force oracle for `3 <= k <= n`.
    Main,
    /// Vertices with bound above 3 are the unique maximum-degree vertex,
    /// and the maximum-degree-only criterion agrees with the full one.
    Lemma,
    /// Trees with `n >= 3Δ - 8` or `n = 3Δ - 10` are equitably 3-colorable.
    Bg,
    /// Trees with a balanced bipartition are equitably `k`-colorable for
    /// every `k >= 2`.
    Cl2,
    /// Unbalanced trees (`n >= 2`, `||A| - |B|| >= 2`) are equitably
    /// `k`-colorable exactly for `k >= max(3, ⌈(n+1)/(α_v+1)⌉)`, `v` any
    /// maximum-degree vertex.
    Cl3,
    /// The integer identity behind the two forms of the criterion.
    Equiv,
    /// Every positive instance with `3 <= k <= n` is colored by the
    /// construction without fallback, and the result verifies.
    Construct,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Main,
        Check::Lemma,
        Check::Bg,
        Check::Cl2,
        Check::Cl3,
        Check::Equiv,
        Check::Construct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Main => "main",
            Check::Lemma => "lemma",
            Check::Bg => "bg",
            Check::Cl2 => "cl2",
            Check::Cl3 => "cl3",
            Check::Equiv => "equiv",
            Check::Construct => "construct",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check `{s}`")))
    }
}

/// A failing instance, replayable from `edge_list` and `k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Counterexample {
    pub check: Check,
    pub n: usize,
    pub k: Option<usize>,
    pub edge_list: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: Check,
    /// Trees (or integer triples for `equiv`) examined.
    pub instances: u64,
    /// Individual assertions evaluated.
    pub checks: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl CheckOutcome {
    pub fn new(check: Check) -> Self {
        CheckOutcome {
            check,
            instances: 0,
            checks: 0,
            counterexamples: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn merge(&mut self, other: CheckOutcome) {
        debug_assert_eq!(self.check, other.check);
        self.instances += other.instances;
        self.checks += other.checks;
        self.counterexamples.extend(other.counterexamples);
    }

    fn fail(&mut self, forest: &Forest, k: Option<usize>, detail: impl Into<String>) {
        self.counterexamples.push(Counterexample {
            check: self.check,
            n: forest.n(),
            k,
            edge_list: forest.to_edge_list(),
            detail: detail.into(),
        });
    }
}

/// Runs one tree-level check on `forest`, accumulating into `out`.
pub fn check_instance(forest: &Forest, out: &mut CheckOutcome) {
    let n = forest.n();
    out.instances += 1;
    match out.check {
        Check::Main => {
            for k in 3..=n {
                out.checks += 1;
                let fast = decide(forest, k).map(|r| r.colorable);
                let truth = oracle_exists(forest, k);
                match (fast, truth) {
                    (Ok(a), Ok(b)) if a == b => {}
                    (a, b) => out.fail(forest, Some(k), format!("decide {a:?}, oracle {b:?}")),
                }
            }
        }
        Check::Lemma => {
            out.checks += 1;
            if let report @ MajorVertexReport::Violated { .. } = major_vertex_check(forest) {
                out.fail(forest, None, format!("{report:?}"));
            }
            for k in 3..=n {
                out.checks += 1;
                if let Err(e) = decide_with(forest, k, DecideMode::Checked) {
                    out.fail(forest, Some(k), e.to_string());
                }
            }
        }
        Check::Bg => {
            let (n_i, delta) = (n as i64, forest.max_degree() as i64);
            if n_i >= 3 * delta - 8 || n_i == 3 * delta - 10 {
                out.checks += 1;
                match decide(forest, 3) {
                    Ok(r) if r.colorable => {}
                    other => out.fail(forest, Some(3), format!("{other:?}")),
                }
            }
        }
        Check::Cl2 => {
            let bip = select_bipartition(forest);
            if bip.a() - bip.b() <= 1 {
                out.checks += 1;
                if !decide2(forest).colorable {
                    out.fail(forest, Some(2), "balanced tree is not equitably 2-colorable");
                }
                for k in 3..=n.max(3) {
                    out.checks += 1;
                    if !decide(forest, k).is_ok_and(|r| r.colorable) {
                        out.fail(forest, Some(k), "balanced tree rejected");
                    }
                }
            }
        }
        Check::Cl3 => {
            let bip = select_bipartition(forest);
            if n >= 2 && bip.a() - bip.b() >= 2 {
                for v in forest.max_degree_vertices() {
                    let a_v = alpha_x(forest, v).expect("vertex in range");
                    let threshold = ceil_div(n + 1, a_v + 1).max(3);
                    for k in 3..=n + 1 {
                        out.checks += 1;
                        let got = decide(forest, k).map(|r| r.colorable);
                        if got != Ok(k >= threshold) {
                            out.fail(
                                forest,
                                Some(k),
                                format!("decide {got:?}, threshold {threshold} via vertex {v}"),
                            );
                        }
                    }
                }
            }
        }
        Check::Construct => {
            for k in 3..=n {
                if !decide(forest, k).is_ok_and(|r| r.colorable) {
                    continue;
                }
                out.checks += 1;
                match construct_with(forest, k, Strategy::Proof) {
                    Ok(c) if c.trace.fallback_used => {
                        out.fail(forest, Some(k), format!("fallback used; trace {:?}", c.trace));
                    }
                    Ok(c) => {
                        if !verify(forest, &c.coloring).is_ok_and(|v| v.valid) {
                            out.fail(forest, Some(k), "construction failed verification");
                        }
                    }
                    Err(e) => out.fail(forest, Some(k), e.to_string()),
                }
            }
        }
        Check::Equiv => {}
    }
}

/// Exhaustive integer check over `1 <= α <= n <= max_n`, `1 <= k <= n`.
pub fn check_equivalence(max_n: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new(Check::Equiv);
    for n in 1..=max_n {
        for a in 1..=n {
            for k in 1..=n {
                out.instances += 1;
                out.checks += 1;
                let bound_form = k >= ceil_div(n + 1, a + 1);
                let floor_form = a >= n / k;
                if bound_form != floor_form {
                    out.counterexamples.push(Counterexample {
                        check: Check::Equiv,
                        n,
                        k: Some(k),
                        edge_list: String::new(),
                        detail: format!("alpha = {a}: bound form {bound_form}, floor form {floor_form}"),
                    });
                }
            }
        }
    }
    out
}

/// Runs `checks` over every forest in `forests`.
pub fn run_on<'a, I>(checks: &[Check], forests: I) -> Vec<CheckOutcome>
where
    I: IntoIterator<Item = &'a Forest>,
{
    let mut outcomes: Vec<CheckOutcome> = checks
        .iter()
        .filter(|&&c| c != Check::Equiv)
        .map(|&c| CheckOutcome::new(c))
        .collect();
    for f in forests {
        for out in &mut outcomes {
            check_instance(f, out);
        }
    }
    outcomes
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarnessConfig {
    pub max_n: usize,
    pub checks: Vec<Check>,
    pub shards: usize,
    /// Run a single shard; `None` runs all shards (in parallel).
    pub shard_index: Option<usize>,
    /// Keep one counterexample per isomorphism class, check and `k`.
    pub distinct_shapes: bool,
}

impl HarnessConfig {
    pub fn new(max_n: usize, checks: Vec<Check>) -> Self {
        HarnessConfig {
            max_n,
            checks,
            shards: 1,
            shard_index: None,
            distinct_shapes: false,
        }
    }
}

fn run_shard(config: &HarnessConfig, index: usize) -> Result<Vec<CheckOutcome>> {
    let tree_checks: Vec<Check> = config.checks.iter().copied().filter(|&c| c != Check::Equiv).collect();
    let mut outcomes: Vec<CheckOutcome> = tree_checks.iter().map(|&c| CheckOutcome::new(c)).collect();
    for n in 1..=config.max_n {
        for f in LabeledTrees::shard(n, config.shards, index)? {
            for out in &mut outcomes {
                check_instance(&f, out);
            }
        }
    }
    if index == 0 && config.checks.contains(&Check::Equiv) {
        outcomes.push(check_equivalence(EQUIVALENCE_MAX_N));
    }
    Ok(outcomes)
}

/// Runs the configured checks over all labeled trees with `1 <= n <= max_n`.
/// Outcomes come back in the order of `config.checks`.
pub fn run(config: &HarnessConfig) -> Result<Vec<CheckOutcome>> {
    if config.max_n == 0 || config.max_n > ENUMERATION_MAX_N {
        return Err(Error::EnumerationRange {
            n: config.max_n,
            max: ENUMERATION_MAX_N,
        });
    }
    let shards = config.shards.max(1);
    let config = HarnessConfig {
        shards,
        ..config.clone()
    };
    let indices: Vec<usize> = match config.shard_index {
        Some(i) if i >= shards => {
            return Err(Error::InvalidArgument(format!("shard index {i} out of range for {shards} shards")))
        }
        Some(i) => vec![i],
        None => (0..shards).collect(),
    };
    let per_shard = indices
        .par_iter()
        .map(|&i| run_shard(&config, i))
        .collect::<Result<Vec<_>>>()?;

    let mut merged: Vec<CheckOutcome> = Vec::new();
    for outcome in per_shard.into_iter().flatten() {
        match merged.iter_mut().find(|m| m.check == outcome.check) {
            Some(m) => m.merge(outcome),
            None => merged.push(outcome),
        }
    }
    let mut ordered = Vec::new();
    for check in &config.checks {
        if let Some(pos) = merged.iter().position(|m| m.check == *check) {
            let mut out = merged.swap_remove(pos);
            out.counterexamples.sort();
            if config.distinct_shapes {
                dedup_by_shape(&mut out.counterexamples);
            }
            ordered.push(out);
        }
    }
    Ok(ordered)
}

fn dedup_by_shape(list: &mut Vec<Counterexample>) {
    let mut seen = BTreeSet::new();
    list.retain(|c| {
        let key = crate::parse_forest(&c.edge_list)
            .map(|f| canonical_form(&f))
            .unwrap_or_else(|_| c.edge_list.clone());
        seen.insert((key, c.k, c.detail.clone()))
    });
}
