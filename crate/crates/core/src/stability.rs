//! Stability numbers on forests.
//!
//! All dynamic programs run over the rooted orientation stored in
//! [`Forest`] (children after parents in BFS order), iterating in reverse for
//! the bottom-up pass, so no recursion is involved.

use serde::Serialize;

use crate::forest::{Bipartition, Forest, Vertex};
use crate::{ceil_div, Error, Result};

/// A set of pairwise non-adjacent vertices, kept in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct StableSet {
    members: Vec<Vertex>,
}

impl StableSet {
    /// Checks stability against `forest`.
    pub fn new(forest: &Forest, mut members: Vec<Vertex>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if let Some(&v) = members.iter().find(|&&v| v >= forest.n()) {
            return Err(Error::InvalidVertex { vertex: v, n: forest.n() });
        }
        for &v in &members {
            if let Some(&w) = forest
                .neighbors(v)
                .iter()
                .find(|w| members.binary_search(w).is_ok())
            {
                return Err(Error::Inconsistency(format!("{v} and {w} are adjacent")));
            }
        }
        Ok(StableSet { members })
    }

    fn from_flags(flags: &[bool]) -> Self {
        StableSet {
            members: (0..flags.len()).filter(|&v| flags[v]).collect(),
        }
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Number of members lying in side `B`.
    pub fn b_count(&self, bipartition: &Bipartition) -> usize {
        self.members.iter().filter(|&&v| bipartition.in_b(v)).count()
    }
}

const NEG: i64 = i64::MIN / 4;

/// Bottom-up take/skip values with the vertices in `excluded` forbidden.
fn take_skip(forest: &Forest, excluded: &[bool]) -> (Vec<i64>, Vec<i64>) {
    let n = forest.n();
    let mut take = vec![0i64; n];
    let mut skip = vec![0i64; n];
    for v in forest.bfs_order().rev() {
        let mut t = 1;
        let mut s = 0;
        for c in forest.children(v) {
            t += skip[c];
            s += take[c].max(skip[c]);
        }
        take[v] = if excluded[v] { NEG } else { t };
        skip[v] = s;
    }
    (take, skip)
}

/// Maximum stable set avoiding `excluded`; on ties a vertex is taken.
fn best_avoiding(forest: &Forest, excluded: &[bool]) -> Vec<bool> {
    let (take, skip) = take_skip(forest, excluded);
    let mut chosen = vec![false; forest.n()];
    for v in forest.bfs_order() {
        let parent_taken = forest.parent(v).is_some_and(|p| chosen[p]);
        chosen[v] = !parent_taken && take[v] >= skip[v];
    }
    chosen
}

/// The stability number α(F).
pub fn alpha(forest: &Forest) -> usize {
    max_stable_set(forest).len()
}

/// A maximum stable set of `forest`.
pub fn max_stable_set(forest: &Forest) -> StableSet {
    StableSet::from_flags(&best_avoiding(forest, &vec![false; forest.n()]))
}

/// α_x: the largest size of a stable set containing `x`, computed as
/// `1 + α(F - N[x])`.
pub fn alpha_x(forest: &Forest, x: Vertex) -> Result<usize> {
    Ok(max_stable_set_containing(forest, x)?.len())
}

/// A maximum stable set among those containing `x`.
pub fn max_stable_set_containing(forest: &Forest, x: Vertex) -> Result<StableSet> {
    if x >= forest.n() {
        return Err(Error::InvalidVertex { vertex: x, n: forest.n() });
    }
    let mut excluded = vec![false; forest.n()];
    excluded[x] = true;
    for &w in forest.neighbors(x) {
        excluded[w] = true;
    }
    let mut chosen = best_avoiding(forest, &excluded);
    chosen[x] = true;
    Ok(StableSet::from_flags(&chosen))
}

/// α_x for every vertex at once, in linear time, by rerooting the take/skip
/// recurrences.
pub fn alpha_x_all(forest: &Forest) -> Vec<usize> {
    let n = forest.n();
    let (take, skip) = take_skip(forest, &vec![false; n]);
    // Values of the parent-side remainder of the tree, rooted at parent(v),
    // with v's subtree removed.
    let mut up_take = vec![0i64; n];
    let mut up_skip = vec![0i64; n];
    let mut result = vec![0usize; n];
    for p in forest.bfs_order() {
        let (mut sum_skip, mut sum_best) = (0i64, 0i64);
        for c in forest.children(p) {
            sum_skip += skip[c];
            sum_best += take[c].max(skip[c]);
        }
        let (from_parent_take, from_parent_skip) = match forest.parent(p) {
            Some(_) => (up_skip[p], up_take[p].max(up_skip[p])),
            None => (0, 0),
        };
        result[p] = (1 + sum_skip + from_parent_take) as usize;
        for c in forest.children(p) {
            up_take[c] = 1 + sum_skip - skip[c] + from_parent_take;
            up_skip[c] = sum_best - take[c].max(skip[c]) + from_parent_skip;
        }
    }
    // Other components contribute their own stability numbers.
    let per_component: Vec<usize> = forest
        .components()
        .iter()
        .map(|c| take[c[0]].max(skip[c[0]]) as usize)
        .collect();
    let total: usize = per_component.iter().sum();
    for (v, r) in result.iter_mut().enumerate() {
        *r += total - per_component[forest.component_of(v)];
    }
    result
}

/// `⌈(n+1)/(α_x+1)⌉` for every vertex.
pub fn vertex_bounds(forest: &Forest) -> Vec<usize> {
    let n = forest.n();
    alpha_x_all(forest)
        .into_iter()
        .map(|a| ceil_div(n + 1, a + 1))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub value: usize,
    /// Smallest vertex attaining the maximum; `None` for the empty forest.
    pub vertex: Option<Vertex>,
    pub alpha_x: Option<usize>,
}

/// `max_x ⌈(n+1)/(α_x+1)⌉`, a lower bound on the equitable chromatic number.
/// The empty forest gets 0.
pub fn lower_bound(forest: &Forest) -> LowerBound {
    let n = forest.n();
    let alphas = alpha_x_all(forest);
    let mut best = LowerBound {
        value: 0,
        vertex: None,
        alpha_x: None,
    };
    for (x, &a) in alphas.iter().enumerate() {
        let value = ceil_div(n + 1, a + 1);
        if best.vertex.is_none() || value > best.value {
            best = LowerBound {
                value,
                vertex: Some(x),
                alpha_x: Some(a),
            };
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MajorVertexReport {
    /// No vertex has bound above 3.
    NotApplicable { bound: usize },
    /// The bound exceeds 3 and is attained only at the unique vertex of
    /// maximum degree.
    Holds {
        vertex: Vertex,
        bound: usize,
        degree: usize,
    },
    /// A vertex with bound above 3 that is not the unique maximum-degree
    /// vertex. Seeing this means a bug somewhere.
    Violated {
        vertex: Vertex,
        bound: usize,
        degree: usize,
        max_degree: usize,
        max_degree_vertices: Vec<Vertex>,
    },
}

/// Checks that every vertex with `⌈(n+1)/(α_x+1)⌉ > 3` is the unique vertex
/// of maximum degree.
pub fn major_vertex_check(forest: &Forest) -> MajorVertexReport {
    let bounds = vertex_bounds(forest);
    let overall = bounds.iter().copied().max().unwrap_or(0);
    if overall <= 3 {
        return MajorVertexReport::NotApplicable { bound: overall };
    }
    let delta = forest.max_degree();
    let delta_vertices = forest.max_degree_vertices();
    let mut holder = None;
    for (x, &bound) in bounds.iter().enumerate() {
        if bound <= 3 {
            continue;
        }
        if forest.degree(x) != delta || delta_vertices.len() != 1 {
            return MajorVertexReport::Violated {
                vertex: x,
                bound,
                degree: forest.degree(x),
                max_degree: delta,
                max_degree_vertices: delta_vertices,
            };
        }
        holder = Some(x);
    }
    let vertex = holder.expect("some vertex attains the bound");
    MajorVertexReport::Holds {
        vertex,
        bound: overall,
        degree: delta,
    }
}

const INF: u32 = u32::MAX;

fn add(x: u32, y: u32) -> u32 {
    if x == INF || y == INF {
        INF
    } else {
        x + y
    }
}

/// Min-plus convolution truncated to sizes `0..=cap`.
fn merge(acc: &[u32], child: &[u32], cap: usize) -> Vec<u32> {
    let len = (acc.len() + child.len() - 1).min(cap + 1);
    let mut out = vec![INF; len];
    for (i, &x) in acc.iter().enumerate() {
        if x == INF {
            continue;
        }
        for (j, &y) in child.iter().enumerate().take(len.saturating_sub(i)) {
            let s = add(x, y);
            if s < out[i + j] {
                out[i + j] = s;
            }
        }
    }
    out
}

fn pointwise_min(x: &[u32], y: &[u32]) -> Vec<u32> {
    (0..x.len().max(y.len()))
        .map(|i| {
            x.get(i)
                .copied()
                .unwrap_or(INF)
                .min(y.get(i).copied().unwrap_or(INF))
        })
        .collect()
}

fn at(table: &[u32], i: usize) -> u32 {
    table.get(i).copied().unwrap_or(INF)
}

/// Finds the smallest `j` with `prefix[s - j] + part[j] == total`.
fn split(prefix: &[u32], part: &[u32], s: usize, total: u32) -> usize {
    (0..part.len().min(s + 1))
        .find(|&j| add(at(prefix, s - j), part[j]) == total)
        .expect("table entry has a witness split")
}

struct SizedDp<'a> {
    forest: &'a Forest,
    forced: Vertex,
    weight: Vec<u32>,
    cap: usize,
    take: Vec<Vec<u32>>,
    skip: Vec<Vec<u32>>,
}

impl SizedDp<'_> {
    fn base_take(&self, u: Vertex) -> Vec<u32> {
        let mut t = vec![INF, self.weight[u]];
        t.truncate(self.cap + 1);
        t
    }

    fn base_skip(&self, u: Vertex) -> Vec<u32> {
        if u == self.forced {
            vec![INF]
        } else {
            vec![0]
        }
    }

    fn run(&mut self) {
        for u in self.forest.bfs_order().rev() {
            let mut t = self.base_take(u);
            let mut s = self.base_skip(u);
            for c in self.forest.children(u) {
                t = merge(&t, &self.skip[c], self.cap);
                s = merge(&s, &pointwise_min(&self.take[c], &self.skip[c]), self.cap);
            }
            self.take[u] = t;
            self.skip[u] = s;
        }
    }

    fn best(&self, u: Vertex) -> Vec<u32> {
        pointwise_min(&self.take[u], &self.skip[u])
    }

    /// Walks the tables top-down, marking the members of an optimal set.
    fn reconstruct(&self, roots: Vec<(Vertex, bool, usize)>, chosen: &mut [bool]) {
        let mut stack = roots;
        while let Some((u, taking, mut s)) = stack.pop() {
            chosen[u] = taking;
            let children: Vec<Vertex> = self.forest.children(u).collect();
            let child_tables: Vec<Vec<u32>> = children
                .iter()
                .map(|&c| if taking { self.skip[c].clone() } else { self.best(c) })
                .collect();
            let mut prefixes = vec![if taking { self.base_take(u) } else { self.base_skip(u) }];
            for table in &child_tables {
                let next = merge(prefixes.last().unwrap(), table, self.cap);
                prefixes.push(next);
            }
            for i in (0..children.len()).rev() {
                let total = prefixes[i + 1][s];
                let j = split(&prefixes[i], &child_tables[i], s, total);
                let c = children[i];
                let child_take = !taking && at(&self.take[c], j) == child_tables[i][j];
                stack.push((c, child_take, j));
                s -= j;
            }
        }
    }
}

/// Among the stable sets `R` with `v ∈ R` and `|R| = size`, returns one
/// with the fewest members in side `B`, or `None` if no such set exists.
///
/// Each subtree carries, for both states of its root, a table indexed by
/// chosen size holding the minimum number of `B` members; components are
/// then combined by min-plus convolution. Tables are truncated at `size`.
pub fn stable_set_of_size_min_b(
    forest: &Forest,
    v: Vertex,
    size: usize,
    bipartition: &Bipartition,
) -> Result<Option<StableSet>> {
    let n = forest.n();
    if v >= n {
        return Err(Error::InvalidVertex { vertex: v, n });
    }
    if size == 0 || size > n {
        return Ok(None);
    }
    let mut dp = SizedDp {
        forest,
        forced: v,
        weight: (0..n).map(|u| u32::from(bipartition.in_b(u))).collect(),
        cap: size,
        take: vec![Vec::new(); n],
        skip: vec![Vec::new(); n],
    };
    dp.run();

    let roots: Vec<Vertex> = forest.components().iter().map(|c| c[0]).collect();
    let component_tables: Vec<Vec<u32>> = roots.iter().map(|&r| dp.best(r)).collect();
    let mut prefixes = vec![vec![0u32]];
    for table in &component_tables {
        let next = merge(prefixes.last().unwrap(), table, size);
        prefixes.push(next);
    }
    let total = at(prefixes.last().unwrap(), size);
    if total == INF {
        return Ok(None);
    }

    let mut starts = Vec::with_capacity(roots.len());
    let mut s = size;
    for c in (0..roots.len()).rev() {
        let total = prefixes[c + 1][s];
        let j = split(&prefixes[c], &component_tables[c], s, total);
        let r = roots[c];
        starts.push((r, at(&dp.take[r], j) == component_tables[c][j], j));
        s -= j;
    }
    let mut chosen = vec![false; n];
    dp.reconstruct(starts, &mut chosen);
    let set = StableSet::from_flags(&chosen);
    debug_assert_eq!(set.len(), size);
    debug_assert_eq!(set.b_count(bipartition) as u32, total);
    Ok(Some(set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_alpha, oracle_alpha_x, oracle_min_b_stable_set, LabeledTrees};

    fn path(n: usize) -> Forest {
        Forest::new(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    fn star(d: usize) -> Forest {
        Forest::new(d + 1, (1..=d).map(|v| (0, v))).unwrap()
    }

    fn assert_stable(f: &Forest, set: &StableSet) {
        for &(u, v) in f.edges() {
            assert!(!(set.contains(u) && set.contains(v)), "edge {u} {v} inside {set:?}");
        }
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(&path(5)), 3);
        assert_eq!(alpha(&Forest::empty(4)), 4);
        assert_eq!(alpha(&star(6)), 6);
        assert_eq!(max_stable_set(&path(5)).members(), &[0, 2, 4]);
    }

    #[test]
    fn alpha_x_examples() {
        assert_eq!(alpha_x(&path(5), 1).unwrap(), 2);
        assert_eq!(alpha_x(&star(6), 0).unwrap(), 1);
        assert_eq!(alpha_x(&Forest::empty(1), 0).unwrap(), 1);
        assert!(matches!(
            alpha_x(&path(3), 3),
            Err(Error::InvalidVertex { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn lower_bound_examples() {
        let lb = lower_bound(&star(6));
        assert_eq!((lb.value, lb.vertex, lb.alpha_x), (4, Some(0), Some(1)));
        assert_eq!(lower_bound(&path(4)).value, 2);
        assert_eq!(lower_bound(&Forest::empty(1)).value, 1);
        assert_eq!(lower_bound(&Forest::empty(0)).value, 0);
    }

    #[test]
    fn rerooting_matches_direct() {
        for n in 1..=7 {
            for f in LabeledTrees::new(n).unwrap() {
                let all = alpha_x_all(&f);
                for x in 0..n {
                    assert_eq!(all[x], alpha_x(&f, x).unwrap(), "{f:?} x={x}");
                }
            }
        }
        let f = Forest::new(7, [(0, 3), (3, 5), (1, 4)]).unwrap();
        let all = alpha_x_all(&f);
        for x in 0..7 {
            assert_eq!(all[x], alpha_x(&f, x).unwrap());
        }
    }

    #[test]
    fn exhaustive_against_brute_force() {
        for n in 1..=7 {
            for f in LabeledTrees::new(n).unwrap() {
                let a = alpha(&f);
                assert_eq!(a, oracle_alpha(&f).unwrap());
                assert!(a >= n.div_ceil(2));
                for x in 0..n {
                    let set = max_stable_set_containing(&f, x).unwrap();
                    assert_stable(&f, &set);
                    assert!(set.contains(x));
                    assert_eq!(set.len(), oracle_alpha_x(&f, x).unwrap());
                    assert!(set.len() <= a && !set.is_empty());
                }
            }
        }
    }

    #[test]
    fn min_b_examples() {
        let p3 = path(3);
        let bip = Bipartition::with_b_side(&p3, &[1]).unwrap();
        let r = stable_set_of_size_min_b(&p3, 1, 1, &bip).unwrap().unwrap();
        assert_eq!(r.members(), &[1]);
        assert_eq!(r.b_count(&bip), 1);

        let s4 = star(4);
        let bip = Bipartition::with_b_side(&s4, &[0]).unwrap();
        assert_eq!(stable_set_of_size_min_b(&s4, 0, 2, &bip).unwrap(), None);

        let p5 = path(5);
        let bip = Bipartition::with_b_side(&p5, &[1, 3]).unwrap();
        assert_eq!(stable_set_of_size_min_b(&p5, 3, 3, &bip).unwrap(), None);
        let r = stable_set_of_size_min_b(&p5, 3, 2, &bip).unwrap().unwrap();
        assert_eq!(r.members(), &[0, 3]);
    }

    #[test]
    fn min_b_exhaustive_small() {
        for n in 1..=7 {
            for f in LabeledTrees::new(n).unwrap() {
                let bip = crate::forest::select_bipartition(&f);
                for v in 0..n {
                    for size in 1..=n {
                        let got = stable_set_of_size_min_b(&f, v, size, &bip).unwrap();
                        let want = oracle_min_b_stable_set(&f, v, size, &bip).unwrap();
                        match (got, want) {
                            (None, None) => {}
                            (Some(r), Some(best)) => {
                                assert_stable(&f, &r);
                                assert!(r.contains(v));
                                assert_eq!(r.len(), size);
                                assert_eq!(r.b_count(&bip), best, "{f:?} v={v} size={size}");
                            }
                            (got, want) => panic!("{f:?} v={v} size={size}: {got:?} vs {want:?}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn min_b_across_components() {
        // Two paths and an isolated vertex; the forced vertex sits in the middle one.
        let f = Forest::new(8, [(0, 1), (1, 2), (3, 4), (4, 5), (5, 6)]).unwrap();
        let bip = crate::forest::select_bipartition(&f);
        for size in 1..=8 {
            for v in 0..8 {
                let got = stable_set_of_size_min_b(&f, v, size, &bip)
                    .unwrap()
                    .map(|r| r.b_count(&bip));
                assert_eq!(got, oracle_min_b_stable_set(&f, v, size, &bip).unwrap());
            }
        }
    }

    #[test]
    fn major_vertex_examples() {
        assert_eq!(
            major_vertex_check(&star(6)),
            MajorVertexReport::Holds {
                vertex: 0,
                bound: 4,
                degree: 6
            }
        );
        assert_eq!(
            major_vertex_check(&path(4)),
            MajorVertexReport::NotApplicable { bound: 2 }
        );
    }

    #[test]
    fn long_path_does_not_recurse() {
        let f = path(200_000);
        assert_eq!(alpha(&f), 100_000);
        assert_eq!(alpha_x_all(&f)[1], 100_000);
    }
}
