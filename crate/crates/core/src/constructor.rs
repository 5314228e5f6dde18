//! Explicit equitable colorings.
//!
//! For `k >= 3`, [`construct`] follows the constructive case analysis behind
//! the `α_x >= ⌊n/k⌋` criterion. With `(A, B)` the bipartition chosen by
//! [`select_bipartition`] and `s_1 <= ... <= s_k` the target sizes, let `j`
//! be the first index with `|B| <= s_1 + ... + s_j`:
//!
//! * **equality**: `|B|` is exactly such a prefix sum, so `B` fills classes
//!   `1..=j` and `A` the rest;
//! * **low-degree swap** (`j > 1`): the overflow of `B` into class `j` is
//!   taken from its lowest-degree vertices, which leave enough of `A`
//!   non-adjacent to complete the class;
//! * **leaf split** (`j = 1`, so `|B| < ⌊n/k⌋`): the leaves `L` of `A`
//!   hang off `B` in disjoint bunches. A smallest set `S ⊆ B` whose
//!   leaves, together with `B - S`, reach `⌈n/k⌉` is split off; either the
//!   complementary leaves already fill class 1 around `S`, or a stable set
//!   `R` of size `⌊n/k⌋` through the vertex `v ∈ S` with the most leaves
//!   becomes class 1 (anchored variants), and the leftover `B` plus leaves
//!   outside `R` fill class `k`.
//!
//! Every remaining vertex lies on one side of the bipartition and is
//! chunked into the remaining classes in ascending id order. Each step
//! re-checks the inequality that guarantees it; a failed check falls back
//! to a bounded search, or errors in strict mode.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::equitable::{class_sizes, decide, decide1, decide2, ClassSizes, Witness};
use crate::forest::{leaves_in, select_bipartition, Bipartition, Forest, Vertex};
use crate::stability::stable_set_of_size_min_b;
use crate::{Error, Result};

/// A vertex-to-class map with classes numbered `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EquitableColoring {
    k: usize,
    assignment: Vec<usize>,
}

impl EquitableColoring {
    pub fn new(k: usize, assignment: Vec<usize>) -> Result<Self> {
        if let Some((v, &c)) = assignment
            .iter()
            .enumerate()
            .find(|&(_, &c)| c == 0 || c > k)
        {
            return Err(Error::MalformedColoring(format!(
                "vertex {v} has class {c}, expected 1..={k}"
            )));
        }
        Ok(EquitableColoring { k, assignment })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn class_of(&self, v: Vertex) -> usize {
        self.assignment[v]
    }

    /// Members of each class, ascending; index `i` holds class `i + 1`.
    pub fn classes(&self) -> Vec<Vec<Vertex>> {
        let mut classes = vec![Vec::new(); self.k];
        for (v, &c) in self.assignment.iter().enumerate() {
            classes[c - 1].push(v);
        }
        classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assignment {
            sizes[c - 1] += 1;
        }
        sizes
    }

    /// One `vertex class` line per vertex.
    pub fn to_coloring_file(&self) -> String {
        self.assignment
            .iter()
            .enumerate()
            .map(|(v, c)| format!("{v} {c}\n"))
            .collect()
    }

    /// Reads the `vertex class` format. Every vertex `0..n` must appear
    /// exactly once; `k` defaults to the largest class seen.
    pub fn parse(text: &str, k: Option<usize>) -> Result<Self> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let tokens: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            let parsed: Option<Vec<usize>> = tokens.iter().map(|t| t.parse().ok()).collect();
            match parsed.as_deref() {
                Some(&[v, c]) => pairs.push((v, c)),
                _ => {
                    return Err(Error::MalformedColoring(format!(
                        "line {}: expected `vertex class`",
                        idx + 1
                    )))
                }
            }
        }
        let n = pairs.len();
        let mut assignment = vec![0; n];
        for (v, c) in pairs {
            if v >= n || assignment[v] != 0 {
                return Err(Error::MalformedColoring(format!(
                    "vertex {v} is out of range or listed twice"
                )));
            }
            if c == 0 {
                return Err(Error::MalformedColoring(format!("vertex {v} has class 0")));
            }
            assignment[v] = c;
        }
        let k = k.unwrap_or_else(|| assignment.iter().copied().max().unwrap_or(0));
        Self::new(k, assignment)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionCase {
    OneClass,
    TwoClasses,
    Equality,
    LowDegreeSwap,
    LeafSplit,
    /// Class 1 is a stable set meeting `B` only in the anchor.
    AnchoredSingle,
    /// Class 1 is a stable set meeting `B` in two or more vertices.
    AnchoredMulti,
}

/// What the construction did, for inspection and replay.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConstructionTrace {
    pub case: Option<ConstructionCase>,
    pub a: usize,
    pub b: usize,
    pub sizes: Vec<usize>,
    /// First index `j` with `|B| <= s_1 + ... + s_j`.
    pub split_index: Option<usize>,
    /// Vertices of `B` moved into a shared class (`S`).
    pub swapped: Option<Vec<Vertex>>,
    /// Vertices of `A` completing the class of `swapped`, or class `k`.
    pub filler: Option<Vec<Vertex>>,
    /// Leaves completing class 1 in the leaf split.
    pub second_filler: Option<Vec<Vertex>>,
    /// Leaves of side `A`.
    pub leaves: Option<Vec<Vertex>>,
    pub anchor: Option<Vertex>,
    /// Leaves hanging off the anchor.
    pub anchor_leaves: Option<usize>,
    pub anchored_set: Option<Vec<Vertex>>,
    /// Structural checks that held, in execution order.
    pub checks: Vec<String>,
    pub fallback_used: bool,
    pub fallback_nodes: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub coloring: EquitableColoring,
    pub trace: ConstructionTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Follow the case analysis; fall back to bounded search if a step's
    /// guarantee fails.
    #[default]
    Proof,
    /// Follow the case analysis and error out on the first failed check.
    ProofStrict,
}

/// Node budget of the fallback search.
pub const FALLBACK_NODE_LIMIT: u64 = 1_000_000;

/// Builds an equitable `k`-coloring for `k >= 3`.
pub fn construct(forest: &Forest, k: usize) -> Result<Construction> {
    construct_with(forest, k, Strategy::Proof)
}

pub fn construct_with(forest: &Forest, k: usize, strategy: Strategy) -> Result<Construction> {
    if k < 3 {
        return Err(Error::InvalidClassCount { k, min: 3 });
    }
    if !decide(forest, k)?.colorable {
        return Err(Error::NotColorable { k });
    }
    let sizes = class_sizes(forest.n(), k)?;
    let bipartition = select_bipartition(forest);
    let mut builder = Builder {
        forest,
        sizes: &sizes,
        bip: &bipartition,
        assign: vec![0; forest.n()],
        trace: ConstructionTrace {
            a: bipartition.a(),
            b: bipartition.b(),
            sizes: sizes.sizes().to_vec(),
            ..Default::default()
        },
    };
    let outcome = builder.run().and_then(|()| {
        let coloring = EquitableColoring::new(k, builder.assign.clone())
            .map_err(|e| fail("final", e.to_string()))?;
        let check = verify(forest, &coloring).map_err(|e| fail("final", e.to_string()))?;
        if check.valid {
            Ok(coloring)
        } else {
            Err(fail("final", format!("{check:?}")))
        }
    });
    let mut trace = builder.trace;
    match outcome {
        Ok(coloring) => Ok(Construction { coloring, trace }),
        Err(failure) => match strategy {
            Strategy::ProofStrict => Err(Error::ProofStep {
                step: failure.step.to_string(),
                detail: failure.detail,
                trace: Box::new(trace),
            }),
            Strategy::Proof => {
                let (found, nodes) = fallback_search(forest, &sizes, FALLBACK_NODE_LIMIT);
                trace.fallback_used = true;
                trace.fallback_nodes = Some(nodes);
                match found {
                    Some(assignment) => Ok(Construction {
                        coloring: EquitableColoring::new(k, assignment)?,
                        trace,
                    }),
                    None => Err(Error::Inconsistency(format!(
                        "step `{}` failed ({}) and the fallback search found nothing in {nodes} nodes; trace: {trace:?}",
                        failure.step, failure.detail
                    ))),
                }
            }
        },
    }
}

/// Colors with any `k >= 1`: a single class, the two-class orientation, or
/// [`construct_with`].
pub fn color(forest: &Forest, k: usize, strategy: Strategy) -> Result<Construction> {
    let n = forest.n();
    let trace = |case| ConstructionTrace {
        case: Some(case),
        sizes: class_sizes(n, k).map(|s| s.sizes().to_vec()).unwrap_or_default(),
        ..Default::default()
    };
    match k {
        0 => Err(Error::InvalidClassCount { k, min: 1 }),
        1 => {
            if !decide1(forest).colorable {
                return Err(Error::NotColorable { k });
            }
            Ok(Construction {
                coloring: EquitableColoring::new(1, vec![1; n])?,
                trace: trace(ConstructionCase::OneClass),
            })
        }
        2 => {
            let report = decide2(forest);
            if !report.colorable {
                return Err(Error::NotColorable { k });
            }
            Ok(Construction {
                coloring: realize2(forest, &report)?,
                trace: trace(ConstructionCase::TwoClasses),
            })
        }
        _ => construct_with(forest, k, strategy),
    }
}

/// Turns a positive two-class decision into a coloring: class 1 receives
/// the chosen side of every component (`⌊n/2⌋` vertices), class 2 the rest.
pub fn realize2(forest: &Forest, report: &crate::DecisionReport) -> Result<EquitableColoring> {
    let Witness::Orientation {
        even_side_first, ..
    } = &report.witness
    else {
        return Err(Error::MissingWitness);
    };
    if even_side_first.len() != forest.component_count() {
        return Err(Error::MissingWitness);
    }
    let assignment = (0..forest.n())
        .map(|v| {
            let first = even_side_first[forest.component_of(v)] != forest.odd_depth(v);
            if first {
                1
            } else {
                2
            }
        })
        .collect();
    EquitableColoring::new(2, assignment)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeViolation {
    pub first_class: usize,
    pub first_size: usize,
    pub second_class: usize,
    pub second_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub valid: bool,
    pub class_sizes: Vec<usize>,
    pub monochromatic_edges: Vec<(Vertex, Vertex)>,
    pub size_violations: Vec<SizeViolation>,
}

/// Checks that every class is stable and that class sizes differ pairwise
/// by at most one.
pub fn verify(forest: &Forest, coloring: &EquitableColoring) -> Result<Verification> {
    if coloring.assignment().len() != forest.n() {
        return Err(Error::MalformedColoring(format!(
            "{} assignments for {} vertices",
            coloring.assignment().len(),
            forest.n()
        )));
    }
    let monochromatic_edges: Vec<_> = forest
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| coloring.class_of(u) == coloring.class_of(v))
        .collect();
    let sizes = coloring.class_sizes();
    let mut size_violations = Vec::new();
    for i in 0..sizes.len() {
        for j in i + 1..sizes.len() {
            if sizes[i].abs_diff(sizes[j]) > 1 {
                size_violations.push(SizeViolation {
                    first_class: i + 1,
                    first_size: sizes[i],
                    second_class: j + 1,
                    second_size: sizes[j],
                });
            }
        }
    }
    Ok(Verification {
        valid: monochromatic_edges.is_empty() && size_violations.is_empty(),
        class_sizes: sizes,
        monochromatic_edges,
        size_violations,
    })
}

struct ProofFailure {
    step: &'static str,
    detail: String,
}

fn fail(step: &'static str, detail: impl Into<String>) -> ProofFailure {
    ProofFailure {
        step,
        detail: detail.into(),
    }
}

struct Builder<'a> {
    forest: &'a Forest,
    sizes: &'a ClassSizes,
    bip: &'a Bipartition,
    assign: Vec<usize>,
    trace: ConstructionTrace,
}

impl Builder<'_> {
    fn check(&mut self, step: &'static str, holds: bool, detail: impl FnOnce() -> String) -> Result<(), ProofFailure> {
        if holds {
            self.trace.checks.push(step.to_string());
            Ok(())
        } else {
            Err(fail(step, detail()))
        }
    }

    fn put(&mut self, vertices: &[Vertex], class: usize) {
        for &v in vertices {
            self.assign[v] = class;
        }
    }

    /// Fills `classes` in order with `vertices`, which must match their
    /// total target size exactly.
    fn chunk(&mut self, vertices: &[Vertex], classes: RangeInclusive<usize>) -> Result<(), ProofFailure> {
        let need: usize = classes.clone().map(|i| self.sizes.size(i)).sum();
        if vertices.len() != need {
            return Err(fail(
                "chunk",
                format!("{} vertices for classes {classes:?} of total size {need}", vertices.len()),
            ));
        }
        let mut rest = vertices;
        for class in classes {
            let (head, tail) = rest.split_at(self.sizes.size(class));
            self.put(head, class);
            rest = tail;
        }
        Ok(())
    }

    fn run(&mut self) -> Result<(), ProofFailure> {
        let k = self.sizes.k();
        let b = self.bip.b();
        let j = (1..=k)
            .find(|&j| b <= self.sizes.prefix(j))
            .expect("the full prefix sum is n >= b");
        self.trace.split_index = Some(j);
        let b_side = self.bip.b_vertices();
        let a_side = self.bip.a_vertices();
        if b == self.sizes.prefix(j) {
            self.trace.case = Some(ConstructionCase::Equality);
            self.chunk(&b_side, 1..=j)?;
            return self.chunk(&a_side, j + 1..=k);
        }
        if j > 1 {
            self.low_degree_swap(j, b_side, a_side)
        } else {
            self.leaf_split(b_side, a_side)
        }
    }

    fn low_degree_swap(&mut self, j: usize, b_side: Vec<Vertex>, a_side: Vec<Vertex>) -> Result<(), ProofFailure> {
        self.trace.case = Some(ConstructionCase::LowDegreeSwap);
        let forest = self.forest;
        let k = self.sizes.k();
        let s = b_side.len() - self.sizes.prefix(j - 1);

        let mut by_degree = b_side.clone();
        by_degree.sort_by_key(|&v| (forest.degree(v), v));
        let mut swapped = by_degree[..s].to_vec();
        swapped.sort_unstable();

        let mut blocked = vec![false; forest.n()];
        for &v in &swapped {
            for &w in forest.neighbors(v) {
                blocked[w] = true;
            }
        }
        let free: Vec<Vertex> = a_side.iter().copied().filter(|&v| !blocked[v]).collect();
        let s1 = self.sizes.floor();
        self.check("low_degree.stable_pool", s + free.len() > s1, || {
            format!("|S| + |A - N(S)| = {} <= s_1 = {s1}", s + free.len())
        })?;
        let need = self.sizes.size(j) - s;
        let filler = free[..need].to_vec();

        self.put(&swapped, j);
        self.put(&filler, j);
        let rest_b: Vec<Vertex> = b_side.iter().copied().filter(|v| swapped.binary_search(v).is_err()).collect();
        let rest_a: Vec<Vertex> = a_side.iter().copied().filter(|v| filler.binary_search(v).is_err()).collect();
        self.trace.swapped = Some(swapped);
        self.trace.filler = Some(filler);
        self.chunk(&rest_b, 1..=j - 1)?;
        self.chunk(&rest_a, j + 1..=k)
    }

    fn leaf_split(&mut self, b_side: Vec<Vertex>, a_side: Vec<Vertex>) -> Result<(), ProofFailure> {
        let forest = self.forest;
        let n = forest.n();
        let k = self.sizes.k();
        let (a, b) = (self.bip.a(), self.bip.b());
        let (floor, ceil) = (self.sizes.floor(), self.sizes.ceil());

        let isolated = self.bip.isolated_in_a(forest);
        self.check("leaf_split.no_isolated_in_a", isolated == 0, || {
            format!("{isolated} isolated vertices in A")
        })?;
        let leaves = leaves_in(forest, self.bip);
        self.trace.leaves = Some(leaves.clone());
        self.check("leaf_split.leaf_count", leaves.len() > a - b, || {
            format!("|L| = {} < a - b + 1 = {}", leaves.len(), a - b + 1)
        })?;
        self.check("leaf_split.leaves_reach_ceil", leaves.len() >= ceil, || {
            format!("|L| = {} < ⌈n/k⌉ = {ceil}", leaves.len())
        })?;

        // Each leaf of A has its single neighbor in B.
        let owner = |x: Vertex| forest.neighbors(x)[0];
        let mut leaf_count = vec![0usize; n];
        for &x in &leaves {
            leaf_count[owner(x)] += 1;
        }

        // Smallest S ⊆ B with Σ_{u∈S} (ℓ(u) - 1) >= ⌈n/k⌉ - |B|: take
        // vertices by decreasing leaf count.
        let mut by_leaves = b_side.clone();
        by_leaves.sort_by_key(|&u| (std::cmp::Reverse(leaf_count[u]), u));
        let need = ceil - b;
        let mut gain = 0usize;
        let mut taken = 0;
        while gain < need && taken < by_leaves.len() && leaf_count[by_leaves[taken]] > 1 {
            gain += leaf_count[by_leaves[taken]] - 1;
            taken += 1;
        }
        self.check("leaf_split.swap_set", gain >= need, || {
            format!("leaves of B reach only {} of ⌈n/k⌉ = {ceil}", b + gain)
        })?;
        let anchor = by_leaves[0];
        let mut swapped = by_leaves[..taken].to_vec();
        swapped.sort_unstable();
        let in_swapped = |u: Vertex| swapped.binary_search(&u).is_ok();

        let outside_leaves: usize = b_side.iter().filter(|&&u| !in_swapped(u)).map(|&u| leaf_count[u]).sum();
        let rest_b: Vec<Vertex> = b_side.iter().copied().filter(|&u| !in_swapped(u)).collect();
        self.trace.swapped = Some(swapped.clone());

        if outside_leaves + swapped.len() >= floor {
            self.trace.case = Some(ConstructionCase::LeafSplit);
            let last_need = self.sizes.size(k) - rest_b.len();
            let first_need = floor - swapped.len();
            let filler: Vec<Vertex> = leaves.iter().copied().filter(|&x| in_swapped(owner(x))).take(last_need).collect();
            let second: Vec<Vertex> = leaves.iter().copied().filter(|&x| !in_swapped(owner(x))).take(first_need).collect();
            self.check("leaf_split.fillers", filler.len() == last_need && second.len() == first_need, || {
                format!("found {} of {last_need} and {} of {first_need} leaves", filler.len(), second.len())
            })?;
            self.put(&rest_b, k);
            self.put(&filler, k);
            self.put(&swapped, 1);
            self.put(&second, 1);
            self.trace.filler = Some(filler);
            self.trace.second_filler = Some(second);
            let rest_a: Vec<Vertex> = a_side.iter().copied().filter(|&x| self.assign[x] == 0).collect();
            return self.chunk(&rest_a, 2..=k - 1);
        }

        let anchor_leaves = leaf_count[anchor];
        self.trace.anchor = Some(anchor);
        self.trace.anchor_leaves = Some(anchor_leaves);
        let bound = (a + 4) as i64 - ceil as i64 - floor as i64;
        self.check("leaf_split.anchor_leaves", anchor_leaves as i64 >= bound, || {
            format!("|N(v) ∩ L| = {anchor_leaves} < a + 4 - ⌈n/k⌉ - ⌊n/k⌋ = {bound}")
        })?;
        let anchored = stable_set_of_size_min_b(forest, anchor, floor, self.bip)
            .map_err(|e| fail("leaf_split.anchored_set", e.to_string()))?
            .ok_or_else(|| fail("leaf_split.anchored_set", format!("no stable set of size {floor} through {anchor}")))?;
        let members = anchored.members().to_vec();
        self.trace.anchored_set = Some(members.clone());
        let b_in_anchored = anchored.b_count(self.bip);

        if b_in_anchored == 1 {
            self.trace.case = Some(ConstructionCase::AnchoredSingle);
            self.check("leaf_split.anchor_pool", anchor_leaves + b > ceil, || {
                format!("|N(v) ∩ L| + |B| - 1 = {} < ⌈n/k⌉ = {ceil}", anchor_leaves + b - 1)
            })?;
            let last_need = self.sizes.size(k) - (b - 1);
            let filler: Vec<Vertex> = leaves.iter().copied().filter(|&x| owner(x) == anchor).take(last_need).collect();
            self.put(&members, 1);
            let others: Vec<Vertex> = b_side.iter().copied().filter(|&u| u != anchor).collect();
            self.put(&others, k);
            self.put(&filler, k);
            self.trace.filler = Some(filler);
        } else {
            self.trace.case = Some(ConstructionCase::AnchoredMulti);
            let pool_b: Vec<Vertex> = b_side.iter().copied().filter(|&u| !anchored.contains(u)).collect();
            let pool_leaves: Vec<Vertex> = leaves.iter().copied().filter(|&x| !anchored.contains(x)).collect();
            let stable = pool_leaves.iter().all(|&x| anchored.contains(owner(x)));
            let pool = pool_b.len() + pool_leaves.len();
            self.check("leaf_split.residual_pool", stable && pool >= ceil, || {
                format!("(B ∪ L) - R has size {pool} (need {ceil}), stable: {stable}")
            })?;
            let last_need = self.sizes.size(k) - pool_b.len();
            let filler = pool_leaves[..last_need].to_vec();
            self.put(&members, 1);
            self.put(&pool_b, k);
            self.put(&filler, k);
            self.trace.filler = Some(filler);
        }
        let rest_a: Vec<Vertex> = a_side.iter().copied().filter(|&x| self.assign[x] == 0).collect();
        self.chunk(&rest_a, 2..=k - 1)
    }
}

/// Bounded backtracking over class assignments. Returns the coloring (if
/// found within `limit` nodes) and the number of nodes expanded.
fn fallback_search(forest: &Forest, sizes: &ClassSizes, limit: u64) -> (Option<Vec<usize>>, u64) {
    struct Search<'a> {
        forest: &'a Forest,
        order: Vec<Vertex>,
        target: &'a [usize],
        fill: Vec<usize>,
        assign: Vec<usize>,
        nodes: u64,
        limit: u64,
    }

    impl Search<'_> {
        fn go(&mut self, i: usize) -> Option<bool> {
            if i == self.order.len() {
                return Some(true);
            }
            self.nodes += 1;
            if self.nodes > self.limit {
                return None;
            }
            let v = self.order[i];
            let mut offered_empty = Vec::new();
            for c in 0..self.target.len() {
                if self.fill[c] == self.target[c] {
                    continue;
                }
                if self.forest.neighbors(v).iter().any(|&w| self.assign[w] == c + 1) {
                    continue;
                }
                if self.fill[c] == 0 {
                    if offered_empty.contains(&self.target[c]) {
                        continue;
                    }
                    offered_empty.push(self.target[c]);
                }
                self.assign[v] = c + 1;
                self.fill[c] += 1;
                if self.go(i + 1)? {
                    return Some(true);
                }
                self.assign[v] = 0;
                self.fill[c] -= 1;
            }
            Some(false)
        }
    }

    let mut order: Vec<Vertex> = forest.bfs_order().collect();
    order.sort_by_key(|&v| std::cmp::Reverse(forest.degree(v)));
    let mut search = Search {
        forest,
        order,
        target: sizes.sizes(),
        fill: vec![0; sizes.k()],
        assign: vec![0; forest.n()],
        nodes: 0,
        limit,
    };
    let found = search.go(0) == Some(true);
    (found.then_some(search.assign), search.nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::LabeledTrees;

    fn path(n: usize) -> Forest {
        Forest::new(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    fn star(d: usize) -> Forest {
        Forest::new(d + 1, (1..=d).map(|v| (0, v))).unwrap()
    }

    fn three_path_family(l: usize) -> Forest {
        let mut edges = vec![(0, 1), (1, 2)];
        for hub in 0..3 {
            edges.extend((0..l).map(|i| (hub, 3 + hub * l + i)));
        }
        Forest::new(3 * l + 3, edges).unwrap()
    }

    fn sorted_sizes(c: &EquitableColoring) -> Vec<usize> {
        let mut s = c.class_sizes();
        s.sort_unstable();
        s
    }

    #[test]
    fn three_path_family_k3() {
        let out = construct_with(&three_path_family(3), 3, Strategy::ProofStrict).unwrap();
        assert_eq!(sorted_sizes(&out.coloring), vec![4, 4, 4]);
        assert!(verify(&three_path_family(3), &out.coloring).unwrap().valid);
        assert!(!out.trace.fallback_used);
    }

    #[test]
    fn star_k4_isolates_center() {
        let f = star(6);
        let out = construct_with(&f, 4, Strategy::ProofStrict).unwrap();
        assert_eq!(out.coloring.class_sizes(), vec![1, 2, 2, 2]);
        assert_eq!(out.coloring.classes()[0], vec![0]);
        assert_eq!(out.trace.case, Some(ConstructionCase::Equality));
    }

    #[test]
    fn path6_k3() {
        let out = construct_with(&path(6), 3, Strategy::ProofStrict).unwrap();
        assert_eq!(out.coloring.class_sizes(), vec![2, 2, 2]);
        assert!(matches!(
            out.trace.case,
            Some(ConstructionCase::Equality | ConstructionCase::LowDegreeSwap)
        ));
        assert!(!out.trace.fallback_used);
    }

    #[test]
    fn refuses_no_instances() {
        assert!(matches!(construct(&star(5), 3), Err(Error::NotColorable { k: 3 })));
        assert!(matches!(construct(&path(4), 2), Err(Error::InvalidClassCount { .. })));
    }

    #[test]
    fn realize2_examples() {
        let p4 = path(4);
        let c = realize2(&p4, &decide2(&p4)).unwrap();
        assert_eq!(c.classes(), vec![vec![0, 2], vec![1, 3]]);

        let f = Forest::new(3, [(0, 1)]).unwrap();
        let c = realize2(&f, &decide2(&f)).unwrap();
        assert_eq!(c.class_sizes(), vec![1, 2]);
        assert!(verify(&f, &c).unwrap().valid);

        let e = Forest::empty(4);
        let c = realize2(&e, &decide2(&e)).unwrap();
        assert_eq!(c.class_sizes(), vec![2, 2]);

        assert!(matches!(realize2(&p4, &decide1(&p4)), Err(Error::MissingWitness)));
    }

    #[test]
    fn verify_examples() {
        let p3 = path(3);
        let ok = verify(&p3, &EquitableColoring::new(2, vec![1, 2, 1]).unwrap()).unwrap();
        assert!(ok.valid);
        let bad = verify(&p3, &EquitableColoring::new(2, vec![1, 1, 2]).unwrap()).unwrap();
        assert!(!bad.valid);
        assert_eq!(bad.monochromatic_edges, vec![(0, 1)]);
        assert!(bad.size_violations.is_empty());
        let p5 = path(5);
        assert!(verify(&p5, &EquitableColoring::new(2, vec![1, 2, 1, 2, 1]).unwrap()).unwrap().valid);
        let lopsided = verify(&Forest::empty(4), &EquitableColoring::new(2, vec![1, 1, 1, 2]).unwrap()).unwrap();
        assert_eq!(
            lopsided.size_violations,
            vec![SizeViolation {
                first_class: 1,
                first_size: 3,
                second_class: 2,
                second_size: 1
            }]
        );
        assert!(matches!(
            verify(&p5, &EquitableColoring::new(2, vec![1, 2]).unwrap()),
            Err(Error::MalformedColoring(_))
        ));
        assert!(EquitableColoring::new(2, vec![1, 3]).is_err());
    }

    #[test]
    fn coloring_file_round_trip() {
        let c = EquitableColoring::new(3, vec![1, 2, 3, 1]).unwrap();
        let text = c.to_coloring_file();
        assert_eq!(text, "0 1\n1 2\n2 3\n3 1\n");
        assert_eq!(EquitableColoring::parse(&text, Some(3)).unwrap(), c);
        assert!(EquitableColoring::parse("0 1\n0 2\n", None).is_err());
        assert!(EquitableColoring::parse("0 x\n", None).is_err());
    }

    #[test]
    fn construct_all_small_trees() {
        for n in 1..=7 {
            for f in LabeledTrees::new(n).unwrap() {
                for k in 3..=n + 1 {
                    if !decide(&f, k).unwrap().colorable {
                        continue;
                    }
                    let out = construct_with(&f, k, Strategy::ProofStrict)
                        .unwrap_or_else(|e| panic!("{f:?} k={k}: {e}"));
                    assert!(verify(&f, &out.coloring).unwrap().valid);
                    assert_eq!(out.coloring.class_sizes(), class_sizes(n, k).unwrap().sizes());
                }
            }
        }
    }

    #[test]
    fn trace_matches_coloring() {
        let f = three_path_family(4);
        for k in 3..=8 {
            let Ok(out) = construct(&f, k) else { continue };
            let t = &out.trace;
            let c = &out.coloring;
            if let (Some(case), Some(j)) = (t.case, t.split_index) {
                if case == ConstructionCase::LowDegreeSwap {
                    for &v in t.swapped.iter().flatten().chain(t.filler.iter().flatten()) {
                        assert_eq!(c.class_of(v), j);
                    }
                }
            }
            if let Some(r) = &t.anchored_set {
                assert!(r.iter().all(|&v| c.class_of(v) == 1));
            }
        }
    }

    #[test]
    fn fallback_search_finds_colorings() {
        let f = three_path_family(3);
        let sizes = class_sizes(12, 3).unwrap();
        let (found, nodes) = fallback_search(&f, &sizes, FALLBACK_NODE_LIMIT);
        let c = EquitableColoring::new(3, found.unwrap()).unwrap();
        assert!(verify(&f, &c).unwrap().valid);
        assert!(nodes > 0);
        let (none, _) = fallback_search(&star(5), &class_sizes(6, 3).unwrap(), FALLBACK_NODE_LIMIT);
        assert!(none.is_none());
    }

    #[test]
    fn deterministic() {
        let f = three_path_family(5);
        assert_eq!(construct(&f, 4).unwrap(), construct(&f, 4).unwrap());
    }
}
