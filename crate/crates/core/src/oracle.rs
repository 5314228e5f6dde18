//! Brute-force ground truth and exhaustive tree enumeration.
//!
//! Nothing here calls into the stability or decision code; the functions
//! work straight from the definitions on adjacency bitmasks so that they can
//! serve as an independent check.

use std::collections::BTreeSet;

use crate::forest::{Bipartition, Forest, Vertex};
use crate::{Error, Result};

/// Largest instance the brute-force routines accept.
pub const ORACLE_MAX_N: usize = 20;

/// Largest order supported by labeled-tree enumeration (`9^7` trees).
pub const ENUMERATION_MAX_N: usize = 9;

/// Largest order supported by unlabeled shape enumeration.
pub const SHAPES_MAX_N: usize = 16;

fn masks(forest: &Forest) -> Result<Vec<u32>> {
    if forest.n() > ORACLE_MAX_N {
        return Err(Error::TooLarge {
            n: forest.n(),
            max: ORACLE_MAX_N,
        });
    }
    Ok((0..forest.n())
        .map(|v| forest.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect())
}

/// Calls `visit` with every stable set (as a bitmask) of the graph.
fn for_each_stable_set(adj: &[u32], mut visit: impl FnMut(u32)) {
    fn go(adj: &[u32], i: usize, set: u32, blocked: u32, visit: &mut dyn FnMut(u32)) {
        if i == adj.len() {
            visit(set);
            return;
        }
        go(adj, i + 1, set, blocked, visit);
        if blocked & (1 << i) == 0 {
            go(adj, i + 1, set | (1 << i), blocked | adj[i], visit);
        }
    }
    go(adj, 0, 0, 0, &mut visit);
}

/// α(F) by enumerating stable sets.
pub fn oracle_alpha(forest: &Forest) -> Result<usize> {
    let adj = masks(forest)?;
    let mut best = 0;
    for_each_stable_set(&adj, |s| best = best.max(s.count_ones() as usize));
    Ok(best)
}

/// α_x(F) by enumerating stable sets that contain `x`.
pub fn oracle_alpha_x(forest: &Forest, x: Vertex) -> Result<usize> {
    let adj = masks(forest)?;
    if x >= forest.n() {
        return Err(Error::InvalidVertex { vertex: x, n: forest.n() });
    }
    let mut best = 0;
    for_each_stable_set(&adj, |s| {
        if s & (1 << x) != 0 {
            best = best.max(s.count_ones() as usize);
        }
    });
    Ok(best)
}

/// Minimum number of `B` members over stable sets of exactly `size` that
/// contain `v`.
pub fn oracle_min_b_stable_set(
    forest: &Forest,
    v: Vertex,
    size: usize,
    bipartition: &Bipartition,
) -> Result<Option<usize>> {
    let adj = masks(forest)?;
    if v >= forest.n() {
        return Err(Error::InvalidVertex { vertex: v, n: forest.n() });
    }
    let b_mask = (0..forest.n())
        .filter(|&u| bipartition.in_b(u))
        .fold(0u32, |m, u| m | (1 << u));
    let mut best: Option<usize> = None;
    for_each_stable_set(&adj, |s| {
        if s & (1 << v) != 0 && s.count_ones() as usize == size {
            let cost = (s & b_mask).count_ones() as usize;
            best = Some(best.map_or(cost, |b| b.min(cost)));
        }
    });
    Ok(best)
}

/// Whether an equitable `k`-coloring exists, by backtracking straight from
/// the definition.
pub fn oracle_exists(forest: &Forest, k: usize) -> Result<bool> {
    Ok(oracle_coloring(forest, k)?.is_some())
}

/// Finds an equitable `k`-coloring by exhaustive search; classes are
/// numbered `1..=k` with the smaller targets first.
///
/// Vertices are placed in order of decreasing degree. Classes of equal
/// target size are interchangeable, so a vertex is only ever offered the
/// first empty class of each target size.
pub fn oracle_coloring(forest: &Forest, k: usize) -> Result<Option<Vec<usize>>> {
    let adj = masks(forest)?;
    let n = forest.n();
    if k == 0 {
        return Ok((n == 0).then(Vec::new));
    }
    let (q, r) = (n / k, n % k);
    let target: Vec<usize> = (0..k).map(|i| if i < k - r { q } else { q + 1 }).collect();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].count_ones()), v));

    struct Search<'a> {
        adj: &'a [u32],
        order: &'a [Vertex],
        target: &'a [usize],
        members: Vec<u32>,
        fill: Vec<usize>,
        class_of: Vec<usize>,
    }

    impl Search<'_> {
        fn go(&mut self, i: usize) -> bool {
            if i == self.order.len() {
                return true;
            }
            let v = self.order[i];
            let mut offered_empty: Vec<usize> = Vec::new();
            for c in 0..self.target.len() {
                if self.fill[c] == self.target[c] || self.members[c] & self.adj[v] != 0 {
                    continue;
                }
                if self.fill[c] == 0 {
                    if offered_empty.contains(&self.target[c]) {
                        continue;
                    }
                    offered_empty.push(self.target[c]);
                }
                self.members[c] |= 1 << v;
                self.fill[c] += 1;
                self.class_of[v] = c + 1;
                if self.go(i + 1) {
                    return true;
                }
                self.members[c] &= !(1 << v);
                self.fill[c] -= 1;
            }
            false
        }
    }

    let mut search = Search {
        adj: &adj,
        order: &order,
        target: &target,
        members: vec![0; k],
        fill: vec![0; k],
        class_of: vec![0; n],
    };
    Ok(search.go(0).then_some(search.class_of))
}

/// `n^(n-2)`, the number of labeled trees on `n` vertices (1 for `n <= 2`).
pub fn labeled_tree_count(n: usize) -> u64 {
    if n <= 2 {
        1
    } else {
        (n as u64).pow(n as u32 - 2)
    }
}

/// Decodes a Prüfer word (entries in `0..n`, length `n - 2`) into its tree.
pub fn prufer_decode(n: usize, word: &[usize]) -> Forest {
    assert!(n >= 1 && word.len() == n.saturating_sub(2));
    if n == 1 {
        return Forest::empty(1);
    }
    let mut degree = vec![1usize; n];
    for &w in word {
        degree[w] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &w in word {
        let leaf = (0..n).find(|&u| degree[u] == 1).expect("a leaf exists");
        edges.push((leaf, w));
        degree[leaf] = 0;
        degree[w] -= 1;
    }
    let mut last = (0..n).filter(|&u| degree[u] == 1);
    let (u, v) = (last.next().unwrap(), last.next().unwrap());
    edges.push((u, v));
    Forest::new(n, edges).expect("Prüfer decoding yields a tree")
}

/// Iterator over a contiguous rank range of the labeled trees on `n`
/// vertices. Rank `r` is the Prüfer word whose base-`n` digits (most
/// significant first) spell `r`.
#[derive(Debug, Clone)]
pub struct LabeledTrees {
    n: usize,
    word: Vec<usize>,
    next: u64,
    end: u64,
}

impl LabeledTrees {
    /// All labeled trees on `n` vertices.
    pub fn new(n: usize) -> Result<Self> {
        Self::range(n, 0, labeled_tree_count(n))
    }

    /// Trees of rank `start..end` (clamped to the total count).
    pub fn range(n: usize, start: u64, end: u64) -> Result<Self> {
        if n == 0 || n > ENUMERATION_MAX_N {
            return Err(Error::EnumerationRange {
                n,
                max: ENUMERATION_MAX_N,
            });
        }
        let total = labeled_tree_count(n);
        let end = end.min(total);
        let start = start.min(end);
        let len = n.saturating_sub(2);
        let mut word = vec![0; len];
        let mut r = start;
        for slot in word.iter_mut().rev() {
            *slot = (r % n as u64) as usize;
            r /= n as u64;
        }
        Ok(LabeledTrees {
            n,
            word,
            next: start,
            end,
        })
    }

    /// Trees of shard `index` out of `shards` equal contiguous slices.
    pub fn shard(n: usize, shards: usize, index: usize) -> Result<Self> {
        let (start, end) = shard_range(labeled_tree_count(n), shards, index);
        Self::range(n, start, end)
    }

    pub fn remaining(&self) -> u64 {
        self.end - self.next
    }
}

/// The `index`-th of `shards` contiguous slices of `0..total`.
pub fn shard_range(total: u64, shards: usize, index: usize) -> (u64, u64) {
    let shards = shards.max(1) as u64;
    let index = (index as u64).min(shards);
    (total * index / shards, total * (index + 1).min(shards) / shards)
}

impl Iterator for LabeledTrees {
    type Item = Forest;

    fn next(&mut self) -> Option<Forest> {
        if self.next >= self.end {
            return None;
        }
        let tree = prufer_decode(self.n, &self.word);
        self.next += 1;
        for slot in self.word.iter_mut().rev() {
            *slot += 1;
            if *slot < self.n {
                break;
            }
            *slot = 0;
        }
        Some(tree)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining() as usize;
        (r, Some(r))
    }
}

/// Every labeled tree on `n` vertices, `1 <= n <= 9`, each exactly once.
pub fn enumerate_labeled_trees(n: usize) -> Result<LabeledTrees> {
    LabeledTrees::new(n)
}

/// One representative of every rooted unlabeled tree on `n` vertices, via
/// canonical level sequences. Every free tree appears at least once.
pub fn enumerate_rooted_shapes(n: usize) -> Result<Vec<Forest>> {
    if n == 0 || n > SHAPES_MAX_N {
        return Err(Error::EnumerationRange {
            n,
            max: SHAPES_MAX_N,
        });
    }
    let mut levels: Vec<usize> = (0..n).collect();
    let mut shapes = Vec::new();
    loop {
        shapes.push(from_levels(&levels));
        let Some(p) = levels.iter().rposition(|&l| l > 1) else {
            break;
        };
        let q = levels[..p]
            .iter()
            .rposition(|&l| l == levels[p] - 1)
            .expect("a vertex one level up precedes p");
        for i in p..n {
            levels[i] = levels[i - (p - q)];
        }
    }
    Ok(shapes)
}

fn from_levels(levels: &[usize]) -> Forest {
    let mut stack: Vec<Vertex> = Vec::new();
    let mut edges = Vec::with_capacity(levels.len().saturating_sub(1));
    for (v, &l) in levels.iter().enumerate() {
        stack.truncate(l);
        if let Some(&p) = stack.last() {
            edges.push((p, v));
        }
        stack.push(v);
    }
    Forest::new(levels.len(), edges).expect("level sequence encodes a tree")
}

/// One representative of every free (unlabeled, unrooted) tree on `n`
/// vertices.
pub fn enumerate_free_trees(n: usize) -> Result<Vec<Forest>> {
    let mut seen = BTreeSet::new();
    Ok(enumerate_rooted_shapes(n)?
        .into_iter()
        .filter(|f| seen.insert(canonical_form(f)))
        .collect())
}

/// A string that is equal for two forests iff they are isomorphic.
///
/// Each component is encoded from its center by nested parentheses with
/// sorted children; bicentral components take the smaller of the two
/// encodings. Component encodings are sorted and concatenated.
pub fn canonical_form(forest: &Forest) -> String {
    let mut parts: Vec<String> = forest
        .components()
        .iter()
        .map(|vertices| {
            centers(forest, vertices)
                .into_iter()
                .map(|c| encode_rooted(forest, c))
                .min()
                .unwrap()
        })
        .collect();
    parts.sort_unstable();
    parts.concat()
}

fn centers(forest: &Forest, vertices: &[Vertex]) -> Vec<Vertex> {
    if vertices.len() <= 2 {
        let mut all = vertices.to_vec();
        all.sort_unstable();
        return all;
    }
    let mut degree: Vec<usize> = vec![0; forest.n()];
    let mut layer = Vec::new();
    for &v in vertices {
        degree[v] = forest.degree(v);
        if degree[v] == 1 {
            layer.push(v);
        }
    }
    let mut remaining = vertices.len();
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            degree[leaf] = 0;
            for &w in forest.neighbors(leaf) {
                if degree[w] > 0 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

fn encode_rooted(forest: &Forest, root: Vertex) -> String {
    // Iterative post-order over the tree rooted at `root`.
    let mut order = vec![(root, usize::MAX)];
    let mut i = 0;
    while i < order.len() {
        let (u, p) = order[i];
        for &w in forest.neighbors(u) {
            if w != p {
                order.push((w, u));
            }
        }
        i += 1;
    }
    let mut codes: Vec<Vec<String>> = vec![Vec::new(); forest.n()];
    let mut result = String::new();
    for &(u, p) in order.iter().rev() {
        let mut kids = std::mem::take(&mut codes[u]);
        kids.sort_unstable();
        let code = format!("({})", kids.concat());
        if p == usize::MAX {
            result = code;
        } else {
            codes[p].push(code);
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Forest {
        Forest::new(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    fn star(d: usize) -> Forest {
        Forest::new(d + 1, (1..=d).map(|v| (0, v))).unwrap()
    }

    #[test]
    fn exists_examples() {
        assert!(!oracle_exists(&star(5), 3).unwrap());
        assert!(oracle_exists(&star(5), 4).unwrap());
        assert!(oracle_exists(&path(4), 2).unwrap());
        assert!(oracle_exists(&Forest::empty(0), 3).unwrap());
        assert!(!oracle_exists(&path(2), 1).unwrap());
    }

    #[test]
    fn coloring_witness_is_equitable() {
        let f = star(5);
        let colors = oracle_coloring(&f, 4).unwrap().unwrap();
        let mut sizes = [0usize; 4];
        for &c in &colors {
            sizes[c - 1] += 1;
        }
        sizes.sort_unstable();
        assert_eq!(sizes, [1, 1, 2, 2]);
        for &(u, v) in f.edges() {
            assert_ne!(colors[u], colors[v]);
        }
    }

    #[test]
    fn alpha_x_examples() {
        assert_eq!(oracle_alpha_x(&path(5), 1).unwrap(), 2);
        assert_eq!(oracle_alpha_x(&star(6), 0).unwrap(), 1);
        assert_eq!(oracle_alpha_x(&Forest::empty(3), 0).unwrap(), 3);
    }

    #[test]
    fn too_large_is_rejected() {
        let f = path(21);
        assert!(matches!(oracle_exists(&f, 3), Err(Error::TooLarge { n: 21, .. })));
        assert!(matches!(oracle_alpha_x(&f, 0), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn cayley_counts() {
        assert_eq!(LabeledTrees::new(3).unwrap().count(), 3);
        assert_eq!(LabeledTrees::new(4).unwrap().count(), 16);
        assert_eq!(LabeledTrees::new(1).unwrap().count(), 1);
        assert_eq!(LabeledTrees::new(2).unwrap().count(), 1);
        for n in 3..=8 {
            let mut seen = BTreeSet::new();
            for t in LabeledTrees::new(n).unwrap() {
                assert_eq!(t.edge_count(), n - 1);
                assert_eq!(t.component_count(), 1);
                assert!(seen.insert(t.edges().to_vec()));
            }
            assert_eq!(seen.len() as u64, labeled_tree_count(n));
        }
        assert_eq!(labeled_tree_count(8), 262_144);
    }

    #[test]
    fn enumeration_range_guard() {
        assert!(LabeledTrees::new(0).is_err());
        assert!(LabeledTrees::new(10).is_err());
    }

    #[test]
    fn shards_partition_the_space() {
        let n = 6;
        let all: Vec<_> = LabeledTrees::new(n).unwrap().map(|t| t.to_edge_list()).collect();
        for shards in [1, 3, 7] {
            let joined: Vec<_> = (0..shards)
                .flat_map(|i| LabeledTrees::shard(n, shards, i).unwrap())
                .map(|t| t.to_edge_list())
                .collect();
            assert_eq!(joined, all);
        }
    }

    #[test]
    fn shape_counts() {
        // Rooted and free unlabeled trees, OEIS A000081 and A000055.
        let rooted = [1, 1, 2, 4, 9, 20, 48, 115, 286, 719];
        let free = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106];
        for n in 1..=10 {
            assert_eq!(enumerate_rooted_shapes(n).unwrap().len(), rooted[n - 1], "rooted n={n}");
            assert_eq!(enumerate_free_trees(n).unwrap().len(), free[n - 1], "free n={n}");
        }
    }

    #[test]
    fn free_shapes_cover_labeled_trees() {
        for n in 1..=7 {
            let forms: BTreeSet<_> = LabeledTrees::new(n).unwrap().map(|t| canonical_form(&t)).collect();
            let shapes: BTreeSet<_> = enumerate_free_trees(n)
                .unwrap()
                .iter()
                .map(canonical_form)
                .collect();
            assert_eq!(forms, shapes);
        }
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let a = Forest::new(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let b = Forest::new(5, [(4, 2), (2, 0), (2, 1), (0, 3)]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert_ne!(canonical_form(&a), canonical_form(&path(5)));
    }
}
