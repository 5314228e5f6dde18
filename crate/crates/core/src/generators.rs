//! Deterministic and seeded-random instance families.
//!
//! Specs are written `name:p1,p2,...` (an optional `family:` prefix is
//! accepted), e.g. `star:6`, `double_star:2,3`, `random_tree:10,42`.
//! Random families draw from ChaCha8 seeded with the given seed, so the same
//! spec always yields the same forest on every platform.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::forest::{Forest, Vertex};
use crate::oracle::prufer_decode;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Path { n: usize },
    /// `K_{1,d}`, center 0.
    Star { d: usize },
    /// Adjacent centers 0 and 1 carrying `p` and `q` leaves.
    DoubleStar { p: usize, q: usize },
    /// Center 0 with `legs` paths of `len` vertices each.
    Spider { legs: usize, len: usize },
    /// Spine path `0..leaves.len()`, spine vertex `i` carrying `leaves[i]` leaves.
    Caterpillar { leaves: Vec<usize> },
    /// Path `0 - 1 - 2` with `l` leaves on each of its vertices.
    #[serde(rename = "paper3path")]
    ThreePath { l: usize },
    /// Uniform labeled tree via a random Prüfer word.
    RandomTree { n: usize, seed: u64 },
    /// `c` components with sizes drawn uniformly among compositions of
    /// `n`, each a uniform random tree, labels shuffled.
    RandomForest { n: usize, c: usize, seed: u64 },
}

impl FamilySpec {
    /// Notes about parameters outside the range the family is meant for.
    pub fn warnings(&self) -> Vec<String> {
        match self {
            FamilySpec::ThreePath { l } if *l < 3 => {
                vec![format!("paper3path with l = {l} < 3 lies outside the family's intended range")]
            }
            _ => Vec::new(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Path { .. } => "path",
            FamilySpec::Star { .. } => "star",
            FamilySpec::DoubleStar { .. } => "double_star",
            FamilySpec::Spider { .. } => "spider",
            FamilySpec::Caterpillar { .. } => "caterpillar",
            FamilySpec::ThreePath { .. } => "paper3path",
            FamilySpec::RandomTree { .. } => "random_tree",
            FamilySpec::RandomForest { .. } => "random_forest",
        }
    }

    pub fn params(&self) -> Vec<u64> {
        let u = |x: &usize| *x as u64;
        match self {
            FamilySpec::Path { n } => vec![u(n)],
            FamilySpec::Star { d } => vec![u(d)],
            FamilySpec::DoubleStar { p, q } => vec![u(p), u(q)],
            FamilySpec::Spider { legs, len } => vec![u(legs), u(len)],
            FamilySpec::Caterpillar { leaves } => std::iter::once(leaves.len() as u64)
                .chain(leaves.iter().map(u))
                .collect(),
            FamilySpec::ThreePath { l } => vec![u(l)],
            FamilySpec::RandomTree { n, seed } => vec![u(n), *seed],
            FamilySpec::RandomForest { n, c, seed } => vec![u(n), u(c), *seed],
        }
    }

    /// Builds a spec from a family name and its numeric parameters.
    pub fn from_parts(name: &str, params: &[u64]) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidFamily(format!("{name}: {msg}"));
        let arity = |want: usize| {
            if params.len() == want {
                Ok(())
            } else {
                Err(bad(&format!("expected {want} parameter(s), got {}", params.len())))
            }
        };
        let p = |i: usize| params[i] as usize;
        let spec = match name {
            "path" => {
                arity(1)?;
                FamilySpec::Path { n: p(0) }
            }
            "star" => {
                arity(1)?;
                FamilySpec::Star { d: p(0) }
            }
            "double_star" => {
                arity(2)?;
                FamilySpec::DoubleStar { p: p(0), q: p(1) }
            }
            "spider" => {
                arity(2)?;
                FamilySpec::Spider { legs: p(0), len: p(1) }
            }
            "caterpillar" => {
                let spine = *params.first().ok_or_else(|| bad("missing spine length"))? as usize;
                arity(spine + 1)?;
                if spine == 0 {
                    return Err(bad("spine must be nonempty"));
                }
                FamilySpec::Caterpillar {
                    leaves: params[1..].iter().map(|&x| x as usize).collect(),
                }
            }
            "paper3path" => {
                arity(1)?;
                FamilySpec::ThreePath { l: p(0) }
            }
            "random_tree" => {
                arity(2)?;
                if p(0) == 0 {
                    return Err(bad("n must be positive"));
                }
                FamilySpec::RandomTree { n: p(0), seed: params[1] }
            }
            "random_forest" => {
                arity(3)?;
                if p(1) == 0 || p(1) > p(0) {
                    return Err(bad("need 1 <= c <= n"));
                }
                FamilySpec::RandomForest {
                    n: p(0),
                    c: p(1),
                    seed: params[2],
                }
            }
            _ => return Err(Error::InvalidFamily(format!("unknown family `{name}`"))),
        };
        Ok(spec)
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.strip_prefix("family:").unwrap_or(s);
        let (name, rest) = body.split_once(':').unwrap_or((body, ""));
        let params = rest
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidFamily(format!("bad parameter `{t}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(name, &params)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(u64::to_string).collect();
        write!(f, "family:{}:{}", self.name(), params.join(","))
    }
}

/// Builds the forest described by `spec`.
pub fn gen_family(spec: &FamilySpec) -> Result<Forest> {
    let edges: Vec<(Vertex, Vertex)>;
    let n;
    match spec {
        FamilySpec::Path { n: order } => {
            n = *order;
            edges = (1..n).map(|v| (v - 1, v)).collect();
        }
        FamilySpec::Star { d } => {
            n = d + 1;
            edges = (1..=*d).map(|v| (0, v)).collect();
        }
        FamilySpec::DoubleStar { p, q } => {
            n = p + q + 2;
            edges = std::iter::once((0, 1))
                .chain((0..*p).map(|i| (0, 2 + i)))
                .chain((0..*q).map(|i| (1, 2 + p + i)))
                .collect();
        }
        FamilySpec::Spider { legs, len } => {
            n = 1 + legs * len;
            let mut e = Vec::with_capacity(n.saturating_sub(1));
            for leg in 0..*legs {
                let first = 1 + leg * len;
                for i in 0..*len {
                    e.push((if i == 0 { 0 } else { first + i - 1 }, first + i));
                }
            }
            edges = e;
        }
        FamilySpec::Caterpillar { leaves } => {
            let spine = leaves.len();
            n = spine + leaves.iter().sum::<usize>();
            let mut e: Vec<_> = (1..spine).map(|v| (v - 1, v)).collect();
            let mut next = spine;
            for (hub, &count) in leaves.iter().enumerate() {
                e.extend((next..next + count).map(|leaf| (hub, leaf)));
                next += count;
            }
            edges = e;
        }
        FamilySpec::ThreePath { l } => {
            n = 3 * l + 3;
            let mut e = vec![(0, 1), (1, 2)];
            for hub in 0..3 {
                e.extend((0..*l).map(|i| (hub, 3 + hub * l + i)));
            }
            edges = e;
        }
        FamilySpec::RandomTree { n, seed } => {
            return Ok(random_tree(*n, &mut ChaCha8Rng::seed_from_u64(*seed)));
        }
        FamilySpec::RandomForest { n, c, seed } => {
            return Ok(random_forest(*n, *c, &mut ChaCha8Rng::seed_from_u64(*seed)));
        }
    }
    Ok(Forest::new(n, edges)?)
}

/// A uniform random labeled tree on `n >= 1` vertices.
pub fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Forest {
    let word: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.random_range(0..n)).collect();
    prufer_decode_large(n, &word)
}

/// A random forest with `c` components: component sizes are a uniform
/// composition of `n` into `c` positive parts, each component a uniform
/// random tree, and vertex labels are shuffled.
pub fn random_forest(n: usize, c: usize, rng: &mut ChaCha8Rng) -> Forest {
    assert!(c >= 1 && c <= n);
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts = cuts[..c - 1].to_vec();
    cuts.sort_unstable();
    cuts.push(n);
    let mut labels: Vec<Vertex> = (0..n).collect();
    labels.shuffle(rng);
    let mut edges = Vec::with_capacity(n - c);
    let mut start = 0;
    for end in cuts {
        let tree = random_tree(end - start, rng);
        edges.extend(tree.edges().iter().map(|&(u, v)| (labels[start + u], labels[start + v])));
        start = end;
    }
    Forest::new(n, edges).expect("disjoint trees form a forest")
}

/// Linear-time Prüfer decoding for large `n`; agrees with
/// [`prufer_decode`] on every word.
fn prufer_decode_large(n: usize, word: &[usize]) -> Forest {
    if n <= 9 {
        return prufer_decode(n, word);
    }
    let mut degree = vec![1usize; n];
    for &w in word {
        degree[w] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = (0..n).find(|&u| degree[u] == 1).unwrap();
    let mut leaf = ptr;
    for &w in word {
        edges.push((leaf, w));
        degree[w] -= 1;
        if degree[w] == 1 && w < ptr {
            leaf = w;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    Forest::new(n, edges).expect("Prüfer decoding yields a tree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equitable::{decide2, equitable_chromatic_number};
    use crate::stability::lower_bound;
    use std::collections::HashMap;

    #[test]
    fn three_path_shape() {
        let f = gen_family(&"paper3path:3".parse().unwrap()).unwrap();
        assert_eq!(f.n(), 12);
        assert_eq!(f.max_degree(), 5);
        assert_eq!((f.degree(0), f.degree(1), f.degree(2)), (4, 5, 4));
        let spec: FamilySpec = "family:paper3path:2".parse().unwrap();
        assert_eq!(spec.warnings().len(), 1);
        assert!(gen_family(&spec).is_ok());
    }

    #[test]
    fn three_path_needs_three_classes() {
        for l in 3..=8 {
            let f = gen_family(&FamilySpec::ThreePath { l }).unwrap();
            assert_eq!(lower_bound(&f).value, 2);
            assert!(!decide2(&f).colorable);
            assert_eq!(equitable_chromatic_number(&f).value, 3);
        }
    }

    #[test]
    fn star_is_k1d() {
        let f = gen_family(&"star:6".parse().unwrap()).unwrap();
        assert_eq!(f.n(), 7);
        assert_eq!(f.degree(0), 6);
        assert_eq!(f.edge_count(), 6);
    }

    #[test]
    fn deterministic_families() {
        let spec: FamilySpec = "random_tree:10,42".parse().unwrap();
        assert_eq!(gen_family(&spec).unwrap().edges(), gen_family(&spec).unwrap().edges());
        let spec: FamilySpec = "random_forest:50,4,7".parse().unwrap();
        let f = gen_family(&spec).unwrap();
        assert_eq!(f.component_count(), 4);
        assert_eq!(f, gen_family(&spec).unwrap());
    }

    #[test]
    fn shapes() {
        let ds = gen_family(&"double_star:2,3".parse().unwrap()).unwrap();
        assert_eq!((ds.n(), ds.degree(0), ds.degree(1)), (7, 3, 4));
        let sp = gen_family(&"spider:3,2".parse().unwrap()).unwrap();
        assert_eq!((sp.n(), sp.degree(0), sp.max_degree()), (7, 3, 3));
        let cat = gen_family(&"caterpillar:3,1,0,2".parse().unwrap()).unwrap();
        assert_eq!((cat.n(), cat.degree(0), cat.degree(1), cat.degree(2)), (6, 2, 2, 3));
        let p = gen_family(&"path:1".parse().unwrap()).unwrap();
        assert_eq!(p.n(), 1);
    }

    #[test]
    fn bad_specs() {
        for s in ["star", "star:1,2", "blob:3", "caterpillar:2,1", "random_forest:3,4,1", "star:x"] {
            assert!(s.parse::<FamilySpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["family:star:5", "family:caterpillar:2,0,3", "family:random_forest:9,2,11"] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }

    #[test]
    fn linear_decoder_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 10..40 {
            for _ in 0..20 {
                let word: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
                assert_eq!(prufer_decode_large(n, &word), prufer_decode_small(n, &word));
            }
        }
    }

    fn prufer_decode_small(n: usize, word: &[usize]) -> Forest {
        let mut degree = vec![1usize; n];
        for &w in word {
            degree[w] += 1;
        }
        let mut edges = Vec::new();
        for &w in word {
            let leaf = (0..n).find(|&u| degree[u] == 1).unwrap();
            edges.push((leaf, w));
            degree[leaf] = 0;
            degree[w] -= 1;
        }
        let rest: Vec<_> = (0..n).filter(|&u| degree[u] == 1).collect();
        edges.push((rest[0], rest[1]));
        Forest::new(n, edges).unwrap()
    }

    #[test]
    fn random_tree_is_uniform_on_five_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let samples = 100_000usize;
        let mut counts: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
        for _ in 0..samples {
            *counts.entry(random_tree(5, &mut rng).edges().to_vec()).or_default() += 1;
        }
        assert_eq!(counts.len(), 125);
        let p = 1.0 / 125.0;
        let mean = samples as f64 * p;
        let sigma = (samples as f64 * p * (1.0 - p)).sqrt();
        for (tree, &c) in &counts {
            assert!((c as f64 - mean).abs() <= 5.0 * sigma, "{tree:?}: {c}");
        }
    }
}
