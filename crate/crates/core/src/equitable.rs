//! Decision procedures for equitable colorability of forests.

use serde::Serialize;

use crate::forest::{Forest, Vertex};
use crate::stability::{alpha_x, alpha_x_all, lower_bound};
use crate::{Error, Result};

/// Target class sizes `s_i = ⌊(n + i - 1)/k⌋` for `i = 1..=k`.
///
/// The sizes are nondecreasing, sum to `n`, and differ by at most one; any
/// equitable `k`-coloring of `n` vertices realizes exactly this multiset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassSizes {
    n: usize,
    k: usize,
    sizes: Vec<usize>,
}

impl ClassSizes {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// `s_i` with 1-based `i`.
    pub fn size(&self, i: usize) -> usize {
        self.sizes[i - 1]
    }

    /// `s_1 + ... + s_j`.
    pub fn prefix(&self, j: usize) -> usize {
        self.sizes[..j].iter().sum()
    }

    /// `⌊n/k⌋`, the smallest class size.
    pub fn floor(&self) -> usize {
        self.sizes[0]
    }

    /// `⌈n/k⌉`, the largest class size.
    pub fn ceil(&self) -> usize {
        self.sizes[self.k - 1]
    }
}

pub fn class_sizes(n: usize, k: usize) -> Result<ClassSizes> {
    if k == 0 {
        return Err(Error::InvalidClassCount { k, min: 1 });
    }
    Ok(ClassSizes {
        n,
        k,
        sizes: (1..=k).map(|i| (n + i - 1) / k).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Every vertex `x` has `α_x >= threshold`.
    CriterionSatisfied {
        threshold: usize,
        checked_vertices: Vec<Vertex>,
    },
    /// A vertex whose stability number falls below `⌊n/k⌋`.
    Violation {
        vertex: Vertex,
        alpha_x: usize,
        threshold: usize,
    },
    /// Component sides chosen for the smaller class. `parts[c]` holds the
    /// (even-depth, odd-depth) side sizes of component `c`, and
    /// `even_side_first[c]` says which of them joins the first class.
    Orientation {
        target: usize,
        parts: Vec<(usize, usize)>,
        even_side_first: Vec<bool>,
    },
    /// No choice of sides sums to `target`.
    NoOrientation {
        target: usize,
        parts: Vec<(usize, usize)>,
    },
    Edgeless,
    /// An edge, which rules out a single class.
    Edge { u: Vertex, v: Vertex },
    /// The empty forest: the empty partition is equitable.
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecisionReport {
    pub n: usize,
    pub k: usize,
    pub colorable: bool,
    pub witness: Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecideMode {
    /// Evaluate only the maximum-degree vertices. A vertex with
    /// `α_x < ⌊n/k⌋` for some `k >= 3` has `⌈(n+1)/(α_x+1)⌉ > 3`, and such a
    /// vertex is always the unique vertex of maximum degree.
    #[default]
    Fast,
    /// Evaluate every vertex.
    AllVertices,
    /// Run both and fail with [`Error::Inconsistency`] if they disagree.
    Checked,
}

/// Decides equitable `k`-colorability for `k >= 3`: yes iff
/// `α_x >= ⌊n/k⌋` for every vertex `x`.
pub fn decide(forest: &Forest, k: usize) -> Result<DecisionReport> {
    decide_with(forest, k, DecideMode::Fast)
}

pub fn decide_with(forest: &Forest, k: usize, mode: DecideMode) -> Result<DecisionReport> {
    if k < 3 {
        return Err(Error::InvalidClassCount { k, min: 3 });
    }
    let n = forest.n();
    if n == 0 {
        return Ok(DecisionReport {
            n,
            k,
            colorable: true,
            witness: Witness::Empty,
        });
    }
    let threshold = n / k;
    match mode {
        DecideMode::Fast => Ok(criterion(forest, k, threshold, forest.max_degree_vertices())),
        DecideMode::AllVertices => Ok(criterion(forest, k, threshold, (0..n).collect())),
        DecideMode::Checked => {
            let fast = criterion(forest, k, threshold, forest.max_degree_vertices());
            let slow = criterion(forest, k, threshold, (0..n).collect());
            if fast.colorable != slow.colorable || (!fast.colorable && fast.witness != slow.witness) {
                return Err(Error::Inconsistency(format!(
                    "fast and exhaustive criteria disagree for k = {k}: {:?} vs {:?}",
                    fast.witness, slow.witness
                )));
            }
            Ok(slow)
        }
    }
}

fn criterion(forest: &Forest, k: usize, threshold: usize, vertices: Vec<Vertex>) -> DecisionReport {
    // A handful of vertices are cheaper one at a time; beyond that the
    // linear all-vertex rerooting pass wins.
    let alphas: Vec<usize> = if vertices.len() <= 8 {
        vertices
            .iter()
            .map(|&x| alpha_x(forest, x).expect("vertex in range"))
            .collect()
    } else {
        let all = alpha_x_all(forest);
        vertices.iter().map(|&x| all[x]).collect()
    };
    let n = forest.n();
    let violation = vertices
        .iter()
        .zip(&alphas)
        .find(|&(_, &a)| a < threshold)
        .map(|(&x, &a)| Witness::Violation {
            vertex: x,
            alpha_x: a,
            threshold,
        });
    match violation {
        Some(witness) => DecisionReport {
            n,
            k,
            colorable: false,
            witness,
        },
        None => DecisionReport {
            n,
            k,
            colorable: true,
            witness: Witness::CriterionSatisfied {
                threshold,
                checked_vertices: vertices,
            },
        },
    }
}

/// Per-component (even-depth, odd-depth) side sizes.
pub(crate) fn component_parts(forest: &Forest) -> Vec<(usize, usize)> {
    forest
        .components()
        .iter()
        .map(|order| {
            let odd = order.iter().filter(|&&v| forest.odd_depth(v)).count();
            (order.len() - odd, odd)
        })
        .collect()
}

/// Decides equitable 2-colorability.
///
/// Each component must put one of its sides in the smaller class, so the
/// forest is equitably 2-colorable iff some choice of sides sums to
/// `⌊n/2⌋`. Reachable sums are tracked per component suffix as bitsets;
/// the witness is then read off front to back, preferring the even side.
pub fn decide2(forest: &Forest) -> DecisionReport {
    let n = forest.n();
    let target = n / 2;
    let parts = component_parts(forest);
    let r = parts.len();
    let words = target / 64 + 1;
    // reach[c]: sums in 0..=target reachable by components c..r.
    let mut reach = vec![vec![0u64; words]; r + 1];
    reach[r][0] = 1;
    for c in (0..r).rev() {
        let (even, odd) = parts[c];
        let mut next = vec![0u64; words];
        or_shifted(&mut next, &reach[c + 1], even);
        or_shifted(&mut next, &reach[c + 1], odd);
        truncate_bits(&mut next, target);
        reach[c] = next;
    }
    if !bit(&reach[0], target) {
        return DecisionReport {
            n,
            k: 2,
            colorable: false,
            witness: Witness::NoOrientation { target, parts },
        };
    }
    let mut remaining = target;
    let mut even_side_first = Vec::with_capacity(r);
    for (c, &(even, odd)) in parts.iter().enumerate() {
        if even <= remaining && bit(&reach[c + 1], remaining - even) {
            even_side_first.push(true);
            remaining -= even;
        } else {
            debug_assert!(odd <= remaining && bit(&reach[c + 1], remaining - odd));
            even_side_first.push(false);
            remaining -= odd;
        }
    }
    DecisionReport {
        n,
        k: 2,
        colorable: true,
        witness: Witness::Orientation {
            target,
            parts,
            even_side_first,
        },
    }
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let (word_shift, bit_shift) = (shift / 64, shift % 64);
    for i in (word_shift..dst.len()).rev() {
        let j = i - word_shift;
        let mut v = src[j] << bit_shift;
        if bit_shift > 0 && j > 0 {
            v |= src[j - 1] >> (64 - bit_shift);
        }
        dst[i] |= v;
    }
}

fn truncate_bits(set: &mut [u64], max: usize) {
    let last = max / 64;
    let keep = max % 64;
    if keep < 63 {
        set[last] &= (1u64 << (keep + 1)) - 1;
    }
}

/// A single class works iff the forest has no edges.
pub fn decide1(forest: &Forest) -> DecisionReport {
    let n = forest.n();
    let witness = match forest.edges().first() {
        Some(&(u, v)) => Witness::Edge { u, v },
        None if n == 0 => Witness::Empty,
        None => Witness::Edgeless,
    };
    DecisionReport {
        n,
        k: 1,
        colorable: matches!(witness, Witness::Edgeless | Witness::Empty),
        witness,
    }
}

/// Dispatches on `k`: [`decide1`], [`decide2`] or [`decide`].
pub fn decide_k(forest: &Forest, k: usize) -> Result<DecisionReport> {
    match k {
        0 => Err(Error::InvalidClassCount { k, min: 1 }),
        1 => Ok(decide1(forest)),
        2 => Ok(decide2(forest)),
        _ => decide(forest, k),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChromaticRule {
    /// `n = 0`; reported as 0 by convention.
    Empty,
    Edgeless,
    TwoClasses,
    /// `max(3, lower bound)`.
    Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChromaticReport {
    pub value: usize,
    pub lower_bound: usize,
    pub rule: ChromaticRule,
}

/// The least `k` admitting an equitable `k`-coloring.
///
/// `k = 1` and `k = 2` are tested directly. Past that the criterion
/// `α_x >= ⌊n/k⌋` only gets easier as `k` grows, so the answer is
/// `max(3, max_x ⌈(n+1)/(α_x+1)⌉)`.
pub fn equitable_chromatic_number(forest: &Forest) -> ChromaticReport {
    let bound = lower_bound(forest).value;
    let (value, rule) = if forest.n() == 0 {
        (0, ChromaticRule::Empty)
    } else if decide1(forest).colorable {
        (1, ChromaticRule::Edgeless)
    } else if decide2(forest).colorable {
        (2, ChromaticRule::TwoClasses)
    } else {
        (bound.max(3), ChromaticRule::Formula)
    };
    ChromaticReport {
        value,
        lower_bound: bound,
        rule,
    }
}
