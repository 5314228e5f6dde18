//! Forest representation, the edge-list format, and bipartition selection.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ForestError;

pub type Vertex = usize;

/// A simple undirected acyclic graph on the vertices `0..n`.
///
/// Every component is rooted at its smallest vertex id and components are
/// numbered in order of their roots. The rooted orientation (parents, BFS
/// order, depth parity) is computed once at construction so that the
/// dynamic programs can run iteratively.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ForestData", into = "ForestData")]
pub struct Forest {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adjacency: Vec<Vec<Vertex>>,
    component: Vec<usize>,
    components: Vec<Vec<Vertex>>,
    parent: Vec<Option<Vertex>>,
    odd_depth: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct ForestData {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl TryFrom<ForestData> for Forest {
    type Error = ForestError;

    fn try_from(data: ForestData) -> Result<Self, Self::Error> {
        Forest::new(data.n, data.edges)
    }
}

impl From<Forest> for ForestData {
    fn from(f: Forest) -> Self {
        ForestData {
            n: f.n,
            edges: f.edges,
        }
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Forest")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Forest {
    /// Validates `edges` and builds the forest.
    ///
    /// Edges are checked in the order given; the first problem found is
    /// reported. A cycle error lists the vertices of one offending cycle.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, ForestError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut dsu = Dsu::new(n);
        let mut adjacency = vec![Vec::new(); n];
        let mut normalized = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(ForestError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(ForestError::SelfLoop { vertex: u });
            }
            if !dsu.union(u, v) {
                let (lo, hi) = (u.min(v), u.max(v));
                if adjacency[lo].contains(&hi) {
                    return Err(ForestError::DuplicateEdge { u: lo, v: hi });
                }
                return Err(ForestError::Cycle {
                    cycle: tree_path(&adjacency, u, v),
                });
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self::from_parts(n, normalized, adjacency))
    }

    fn from_parts(n: usize, edges: Vec<(Vertex, Vertex)>, adjacency: Vec<Vec<Vertex>>) -> Self {
        let mut component = vec![usize::MAX; n];
        let mut components = Vec::new();
        let mut parent = vec![None; n];
        let mut odd_depth = vec![false; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            if component[root] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut order = Vec::new();
            component[root] = id;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &w in &adjacency[u] {
                    if component[w] == usize::MAX {
                        component[w] = id;
                        parent[w] = Some(u);
                        odd_depth[w] = !odd_depth[u];
                        queue.push_back(w);
                    }
                }
            }
            components.push(order);
        }
        Forest {
            n,
            edges,
            adjacency,
            component,
            components,
            parent,
            odd_depth,
        }
    }

    /// The edgeless forest on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self::from_parts(n, Vec::new(), vec![Vec::new(); n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(min, max)` pairs in ascending order.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Neighbors of `v` in ascending id order.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// All vertices of maximum degree, ascending.
    pub fn max_degree_vertices(&self) -> Vec<Vertex> {
        let delta = self.max_degree();
        (0..self.n).filter(|&v| self.degree(v) == delta).collect()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn component_of(&self, v: Vertex) -> usize {
        self.component[v]
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Vertices of component `c` in BFS order from its root (the smallest id).
    pub fn component_vertices(&self, c: usize) -> &[Vertex] {
        &self.components[c]
    }

    pub fn components(&self) -> &[Vec<Vertex>] {
        &self.components
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    /// Children of `v` in the rooted orientation, ascending.
    pub fn children(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let p = self.parent[v];
        self.adjacency[v]
            .iter()
            .copied()
            .filter(move |&w| Some(w) != p)
    }

    /// Whether `v` sits at odd distance from its component root. This is the
    /// canonical 2-coloring of each component.
    pub fn odd_depth(&self, v: Vertex) -> bool {
        self.odd_depth[v]
    }

    /// Concatenated BFS orders of all components; parents precede children.
    pub fn bfs_order(&self) -> impl DoubleEndedIterator<Item = Vertex> + '_ {
        self.components.iter().flatten().copied()
    }

    /// Serializes to the edge-list format. `parse_forest` inverts this.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

impl FromStr for Forest {
    type Err = ForestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_forest(s)
    }
}

/// Parses the edge-list format: the first nonblank line holds `n`, every
/// further nonblank line one edge `u v`. `#` starts a comment.
pub fn parse_forest(text: &str) -> Result<Forest, ForestError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let number = |tok: &str| {
            tok.parse::<usize>().map_err(|_| ForestError::Syntax {
                line,
                message: format!("expected a non-negative integer, found `{tok}`"),
            })
        };
        match n {
            None => {
                if tokens.len() != 1 {
                    return Err(ForestError::Syntax {
                        line,
                        message: "first line must hold only the vertex count".into(),
                    });
                }
                n = Some(number(tokens[0])?);
            }
            Some(order) => {
                if tokens.len() != 2 {
                    return Err(ForestError::Syntax {
                        line,
                        message: format!("expected `u v`, found {} tokens", tokens.len()),
                    });
                }
                let (u, v) = (number(tokens[0])?, number(tokens[1])?);
                for w in [u, v] {
                    if w >= order {
                        return Err(ForestError::VertexOutOfRange { vertex: w, n: order });
                    }
                }
                edges.push((u, v));
            }
        }
    }
    let n = n.ok_or(ForestError::MissingOrder)?;
    Forest::new(n, edges)
}

fn tree_path(adjacency: &[Vec<Vertex>], from: Vertex, to: Vertex) -> Vec<Vertex> {
    let mut prev = vec![usize::MAX; adjacency.len()];
    let mut queue = VecDeque::from([from]);
    prev[from] = from;
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &w in &adjacency[u] {
            if prev[w] == usize::MAX {
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// A proper 2-coloring `(A, B)` of a forest with `|A| >= |B|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    side: Vec<Side>,
    a: usize,
    b: usize,
}

impl Bipartition {
    /// Builds the bipartition obtained by placing, for each component `c`,
    /// its even-depth vertices in `A` when `flips[c]` is false and in `B`
    /// otherwise. Fails if the result has `|A| < |B|`.
    pub fn from_flips(forest: &Forest, flips: &[bool]) -> Result<Self, ForestError> {
        if flips.len() != forest.component_count() {
            return Err(ForestError::InvalidBipartition(format!(
                "{} flips for {} components",
                flips.len(),
                forest.component_count()
            )));
        }
        let side = (0..forest.n())
            .map(|v| {
                if forest.odd_depth(v) == flips[forest.component_of(v)] {
                    Side::A
                } else {
                    Side::B
                }
            })
            .collect();
        Self::from_sides(forest, side)
    }

    /// Checks that `side` is proper on every edge and that `|A| >= |B|`.
    pub fn from_sides(forest: &Forest, side: Vec<Side>) -> Result<Self, ForestError> {
        if side.len() != forest.n() {
            return Err(ForestError::InvalidBipartition(format!(
                "{} sides for {} vertices",
                side.len(),
                forest.n()
            )));
        }
        if let Some(&(u, v)) = forest.edges().iter().find(|&&(u, v)| side[u] == side[v]) {
            return Err(ForestError::InvalidBipartition(format!(
                "edge {u} {v} lies inside one side"
            )));
        }
        let a = side.iter().filter(|&&s| s == Side::A).count();
        let b = side.len() - a;
        if a < b {
            return Err(ForestError::InvalidBipartition(format!("|A| = {a} < |B| = {b}")));
        }
        Ok(Bipartition { side, a, b })
    }

    /// Convenience constructor from an explicit `B` side.
    pub fn with_b_side(forest: &Forest, b_side: &[Vertex]) -> Result<Self, ForestError> {
        let mut side = vec![Side::A; forest.n()];
        for &v in b_side {
            if v >= forest.n() {
                return Err(ForestError::VertexOutOfRange { vertex: v, n: forest.n() });
            }
            side[v] = Side::B;
        }
        Self::from_sides(forest, side)
    }

    pub fn side(&self, v: Vertex) -> Side {
        self.side[v]
    }

    pub fn in_a(&self, v: Vertex) -> bool {
        self.side[v] == Side::A
    }

    pub fn in_b(&self, v: Vertex) -> bool {
        self.side[v] == Side::B
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn a_vertices(&self) -> Vec<Vertex> {
        (0..self.side.len()).filter(|&v| self.in_a(v)).collect()
    }

    pub fn b_vertices(&self) -> Vec<Vertex> {
        (0..self.side.len()).filter(|&v| self.in_b(v)).collect()
    }

    /// Number of degree-0 vertices placed in `A`.
    pub fn isolated_in_a(&self, forest: &Forest) -> usize {
        (0..forest.n())
            .filter(|&v| self.in_a(v) && forest.degree(v) == 0)
            .count()
    }
}

/// The leaves (degree-1 vertices) lying in side `A`, ascending.
pub fn leaves_in(forest: &Forest, bipartition: &Bipartition) -> Vec<Vertex> {
    (0..forest.n())
        .filter(|&v| bipartition.in_a(v) && forest.degree(v) == 1)
        .collect()
}

/// Chooses the bipartition used by the coloring construction.
///
/// Among all assignments obtained by flipping component 2-colorings
/// independently, it returns one with `|A| >= |B|` that places the fewest
/// isolated vertices in `A`; remaining ties go to the lexicographically
/// smallest flip vector (component order, `false` before `true`).
///
/// Only singleton components can contribute isolated vertices, and every
/// other component can always contribute its larger side to `A`, so the
/// optimum and the lexicographic completion test both reduce to suffix
/// sums. The search is exact and linear.
pub fn select_bipartition(forest: &Forest) -> Bipartition {
    let n = forest.n();
    let need = n.div_ceil(2);
    let r = forest.component_count();
    let parts: Vec<(usize, usize)> = forest
        .components()
        .iter()
        .map(|order| {
            let odd = order.iter().filter(|&&v| forest.odd_depth(v)).count();
            (order.len() - odd, odd)
        })
        .collect();
    let singleton = |c: usize| parts[c].0 + parts[c].1 == 1;

    // suffix_max[c]: largest |A| contribution of non-singleton components c..r;
    // suffix_single[c]: number of singleton components among c..r.
    let mut suffix_max = vec![0usize; r + 1];
    let mut suffix_single = vec![0usize; r + 1];
    for c in (0..r).rev() {
        if singleton(c) {
            suffix_max[c] = suffix_max[c + 1];
            suffix_single[c] = suffix_single[c + 1] + 1;
        } else {
            suffix_max[c] = suffix_max[c + 1] + parts[c].0.max(parts[c].1);
            suffix_single[c] = suffix_single[c + 1];
        }
    }
    let min_isolated = need.saturating_sub(suffix_max[0]);

    let feasible = |c_next: usize, a_sum: usize, used: usize| {
        if used > min_isolated {
            return false;
        }
        let rest = min_isolated - used;
        rest <= suffix_single[c_next] && a_sum + suffix_max[c_next] + rest >= need
    };

    let mut flips = Vec::with_capacity(r);
    let (mut a_sum, mut used) = (0usize, 0usize);
    for c in 0..r {
        let iso = usize::from(singleton(c));
        // false: even-depth side (which holds the root) goes to A.
        if feasible(c + 1, a_sum + parts[c].0, used + iso) {
            flips.push(false);
            a_sum += parts[c].0;
            used += iso;
        } else {
            debug_assert!(feasible(c + 1, a_sum + parts[c].1, used));
            flips.push(true);
            a_sum += parts[c].1;
        }
    }
    Bipartition::from_flips(forest, &flips).expect("selected flips satisfy |A| >= |B|")
}
