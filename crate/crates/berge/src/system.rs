//! Triple systems, pattern graphs, and the balanced 3-partite construction.
//!
//! Vertices are `0..n`. A stored system keeps its triples sorted, each triple
//! strictly increasing, with set semantics. Systems are immutable after
//! construction; every operation that "modifies" builds a new value.

use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

/// One hyperedge: three distinct vertices, stored strictly increasing.
pub type Triple = [usize; 3];

/// An unordered vertex pair, stored as `(low, high)`.
pub type Pair = (usize, usize);

/// Stored systems cap the vertex count; formula helpers like [`f`] do not.
pub const MAX_STORED_N: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SystemError {
    #[error("line {line}: malformed input ({reason})")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: repeated vertex in triple")]
    RepeatedVertex { line: usize },
    #[error("line {line}: duplicate triple")]
    DuplicateTriple { line: usize },
    #[error("n = {n} exceeds the stored-system limit {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("triple {triple:?} is not valid on {n} vertices")]
    BadTriple { triple: Triple, n: usize },
}

/// `f(n) = floor(n/3) * floor((n+1)/3) * floor((n+2)/3)`, the number of
/// crossing triples of a balanced 3-partition of `n` vertices.
pub fn f(n: usize) -> u64 {
    let a = (n / 3) as u64;
    let b = ((n + 1) / 3) as u64;
    let c = ((n + 2) / 3) as u64;
    a.checked_mul(b)
        .and_then(|ab| ab.checked_mul(c))
        .expect("f(n) overflows u64")
}

/// Forward difference `f(n) - f(n-1)`. Requires `n >= 1`.
pub fn diff(n: usize) -> u64 {
    assert!(n >= 1, "diff requires n >= 1");
    f(n) - f(n - 1)
}

/// The published piecewise table for the forward difference, reproduced
/// verbatim: `k^2 + 2` at `n = 3k`, `k^2` at `n = 3k + 1`, `k^2 + k` at
/// `n = 3k + 2`. Differs from [`diff`] when `n % 3 == 0`; see
/// [`discrepancy_report`].
pub fn observation2_table(n: usize) -> u64 {
    assert!(n >= 1, "observation2_table requires n >= 1");
    let k = (n / 3) as u64;
    match n % 3 {
        0 => k * k + 2,
        1 => k * k,
        _ => k * k + k,
    }
}

/// One disagreement between [`observation2_table`] and [`diff`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiffDiscrepancy {
    pub n: usize,
    pub table: u64,
    pub direct: u64,
}

/// All `n` in `1..=n_max` where the published table and the direct
/// difference disagree. Direct evaluation is the ground truth; the table is
/// reported side by side.
pub fn discrepancy_report(n_max: usize) -> Vec<DiffDiscrepancy> {
    (1..=n_max)
        .filter_map(|n| {
            let table = observation2_table(n);
            let direct = diff(n);
            (table != direct).then_some(DiffDiscrepancy { n, table, direct })
        })
        .collect()
}

/// Canonical near-balanced 3-partition of `0..n`: part sizes
/// `floor(n/3) <= floor((n+1)/3) <= ceil(n/3)`, lowest ids in the first part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition3 {
    parts: [Vec<usize>; 3],
}

impl Partition3 {
    pub fn canonical(n: usize) -> Self {
        let sizes = [n / 3, (n + 1) / 3, (n + 2) / 3];
        let mut next = 0;
        let parts = sizes.map(|s| {
            let part: Vec<usize> = (next..next + s).collect();
            next += s;
            part
        });
        debug_assert_eq!(next, n);
        Partition3 { parts }
    }

    pub fn parts(&self) -> &[Vec<usize>; 3] {
        &self.parts
    }

    /// Index of the part containing `v`, if any.
    pub fn part_of(&self, v: usize) -> Option<usize> {
        self.parts.iter().position(|p| p.binary_search(&v).is_ok())
    }
}

fn normalize_triple(t: Triple) -> Triple {
    let mut t = t;
    t.sort_unstable();
    t
}

/// A 3-uniform hypergraph on vertices `0..n` with set semantics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleSystem {
    n: usize,
    edges: Vec<Triple>,
}

impl TripleSystem {
    /// Builds a system from arbitrary triples. Vertex order inside a triple
    /// is normalized; repeated vertices or duplicate triples are rejected.
    pub fn new(n: usize, triples: impl IntoIterator<Item = Triple>) -> Result<Self, SystemError> {
        if n > MAX_STORED_N {
            return Err(SystemError::TooManyVertices { n, max: MAX_STORED_N });
        }
        let mut edges: Vec<Triple> = Vec::new();
        for raw in triples {
            let t = normalize_triple(raw);
            if t[2] >= n || t[0] == t[1] || t[1] == t[2] {
                return Err(SystemError::BadTriple { triple: raw, n });
            }
            edges.push(t);
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            let dup = edges.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
            return Err(SystemError::BadTriple { triple: dup, n });
        }
        Ok(TripleSystem { n, edges })
    }

    pub fn empty(n: usize) -> Self {
        TripleSystem::new(n, []).expect("empty system")
    }

    /// All `C(n,3)` triples.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    edges.push([a, b, c]);
                }
            }
        }
        TripleSystem::new(n, edges).expect("complete system")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Triples in lexicographic order.
    pub fn edges(&self) -> &[Triple] {
        &self.edges
    }

    pub fn contains(&self, t: Triple) -> bool {
        self.edges.binary_search(&normalize_triple(t)).is_ok()
    }

    /// Number of triples containing `v`. Panics if `v >= n`.
    pub fn degree(&self, v: usize) -> u64 {
        assert!(v < self.n, "vertex {v} out of range for n = {}", self.n);
        self.edges.iter().filter(|t| t.contains(&v)).count() as u64
    }

    pub fn min_degree(&self) -> u64 {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> u64 {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Number of triples containing both `u` and `v`. Panics on an invalid
    /// pair.
    pub fn codegree(&self, u: usize, v: usize) -> u64 {
        assert!(u != v, "codegree requires two distinct vertices");
        assert!(
            u < self.n && v < self.n,
            "pair ({u},{v}) out of range for n = {}",
            self.n
        );
        self.edges
            .iter()
            .filter(|t| t.contains(&u) && t.contains(&v))
            .count() as u64
    }

    /// The graph of pairs with codegree zero.
    pub fn uncovered_graph(&self) -> SimpleGraph {
        let mut covered = BTreeSet::new();
        for t in &self.edges {
            covered.insert((t[0], t[1]));
            covered.insert((t[0], t[2]));
            covered.insert((t[1], t[2]));
        }
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !covered.contains(&(u, v)) {
                    edges.push((u, v));
                }
            }
        }
        SimpleGraph::new(self.n, edges)
    }

    /// Applies a vertex permutation (`perm[v]` is the new id of `v`).
    pub fn relabel(&self, perm: &[usize]) -> TripleSystem {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let edges = self
            .edges
            .iter()
            .map(|t| normalize_triple([perm[t[0]], perm[t[1]], perm[t[2]]]));
        TripleSystem::new(self.n, edges).expect("relabeling a valid system")
    }

    /// Text format: header `n m`, then one `a b c` line per triple in
    /// lexicographic order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n, self.edges.len()).unwrap();
        for t in &self.edges {
            writeln!(out, "{} {} {}", t[0], t[1], t[2]).unwrap();
        }
        out
    }

    /// Parses the text format produced by [`TripleSystem::serialize`].
    /// Triple lines may appear in any order; each must hold three distinct
    /// in-range vertices and no triple may repeat.
    pub fn parse(input: &str) -> Result<Self, SystemError> {
        let mut lines = input.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or(SystemError::Malformed {
            line: 1,
            reason: "missing header".into(),
        })?;
        let mut hfields = header.split_whitespace();
        let parse_num = |field: Option<&str>, line: usize| -> Result<usize, SystemError> {
            field
                .ok_or(SystemError::Malformed {
                    line,
                    reason: "expected a number".into(),
                })?
                .parse()
                .map_err(|_| SystemError::Malformed {
                    line,
                    reason: "expected a number".into(),
                })
        };
        let n = parse_num(hfields.next(), hline + 1)?;
        let m = parse_num(hfields.next(), hline + 1)?;
        if hfields.next().is_some() {
            return Err(SystemError::Malformed {
                line: hline + 1,
                reason: "header must be exactly `n m`".into(),
            });
        }
        if n > MAX_STORED_N {
            return Err(SystemError::TooManyVertices { n, max: MAX_STORED_N });
        }
        let mut edges: Vec<Triple> = Vec::with_capacity(m);
        let mut seen = BTreeSet::new();
        let mut count = 0usize;
        for (idx, line) in lines {
            let lineno = idx + 1;
            count += 1;
            if count > m {
                return Err(SystemError::Malformed {
                    line: lineno,
                    reason: format!("more than the {m} triples announced in the header"),
                });
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(SystemError::Malformed {
                    line: lineno,
                    reason: "expected exactly three vertices".into(),
                });
            }
            let mut t = [0usize; 3];
            for (slot, field) in t.iter_mut().zip(&fields) {
                *slot = field.parse().map_err(|_| SystemError::Malformed {
                    line: lineno,
                    reason: format!("`{field}` is not a vertex id"),
                })?;
            }
            for &v in &t {
                if v >= n {
                    return Err(SystemError::VertexOutOfRange { line: lineno, vertex: v, n });
                }
            }
            let t = normalize_triple(t);
            if t[0] == t[1] || t[1] == t[2] {
                return Err(SystemError::RepeatedVertex { line: lineno });
            }
            if !seen.insert(t) {
                return Err(SystemError::DuplicateTriple { line: lineno });
            }
            edges.push(t);
        }
        if count < m {
            return Err(SystemError::Malformed {
                line: hline + 1 + count,
                reason: format!("header announced {m} triples, found {count}"),
            });
        }
        edges.sort_unstable();
        Ok(TripleSystem { n, edges })
    }
}

/// All crossing triples of the canonical balanced 3-partition: one vertex
/// from each part. Has exactly [`f`]`(n)` edges and contains no Berge-K4.
pub fn balanced_3partite(n: usize) -> TripleSystem {
    let partition = Partition3::canonical(n);
    let [a, b, c] = partition.parts();
    let mut edges = Vec::with_capacity(a.len() * b.len() * c.len());
    for &x in a {
        for &y in b {
            for &z in c {
                edges.push(normalize_triple([x, y, z]));
            }
        }
    }
    TripleSystem::new(n, edges).expect("balanced 3-partite system")
}

/// A simple (loop-free) graph pattern whose Berge copies are searched for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternGraph {
    k: usize,
    edges: Vec<Pair>,
}

impl PatternGraph {
    pub fn new(k: usize, pairs: impl IntoIterator<Item = Pair>) -> Self {
        let mut edges: Vec<Pair> = pairs
            .into_iter()
            .map(|(u, v)| {
                assert!(u != v, "pattern edges join distinct vertices");
                assert!(u < k && v < k, "pattern edge ({u},{v}) out of range for k = {k}");
                (u.min(v), u.max(v))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        PatternGraph { k, edges }
    }

    pub fn complete(k: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..k {
            for v in u + 1..k {
                edges.push((u, v));
            }
        }
        PatternGraph::new(k, edges)
    }

    pub fn k3() -> Self {
        PatternGraph::complete(3)
    }

    pub fn k4() -> Self {
        PatternGraph::complete(4)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Pair] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// All vertex permutations preserving the edge set, by brute force.
    /// Intended for small patterns (`k <= 8`).
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        assert!(self.k <= 8, "automorphism enumeration is limited to k <= 8");
        let edge_set: BTreeSet<Pair> = self.edges.iter().copied().collect();
        let mut perms = Vec::new();
        let mut perm: Vec<usize> = (0..self.k).collect();
        loop {
            let ok = self.edges.iter().all(|&(u, v)| {
                let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
                edge_set.contains(&(a, b))
            });
            if ok {
                perms.push(perm.clone());
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        perms
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A simple graph on vertices `0..n`, edges sorted, set semantics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<Pair>,
}

impl SimpleGraph {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = Pair>) -> Self {
        let mut edges: Vec<Pair> = pairs
            .into_iter()
            .map(|(u, v)| {
                assert!(u != v, "graph edges join distinct vertices");
                assert!(u < n && v < n, "edge ({u},{v}) out of range for n = {n}");
                (u.min(v), u.max(v))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        SimpleGraph { n, edges }
    }

    /// Complete multipartite graph on a near-balanced partition into
    /// `parts` classes (lowest ids in the first class).
    pub fn complete_multipartite(n: usize, parts: usize) -> Self {
        assert!(parts >= 1);
        let mut class = vec![0usize; n];
        // Sizes differ by at most one, smaller classes first.
        let base = n / parts;
        let extra = n % parts;
        let mut v = 0;
        for p in 0..parts {
            let size = base + usize::from(p >= parts - extra);
            for _ in 0..size {
                class[v] = p;
                v += 1;
            }
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for w in u + 1..n {
                if class[u] != class[w] {
                    edges.push((u, w));
                }
            }
        }
        SimpleGraph::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Pair] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Edge count of the induced subgraph on `verts`.
    pub fn induced_edge_count(&self, verts: &[usize]) -> usize {
        let set: BTreeSet<usize> = verts.iter().copied().collect();
        self.edges
            .iter()
            .filter(|(u, v)| set.contains(u) && set.contains(v))
            .count()
    }

    /// True when some `r` vertices are pairwise adjacent.
    pub fn has_clique(&self, r: usize) -> bool {
        fn extend(g: &SimpleGraph, clique: &mut Vec<usize>, start: usize, left: usize) -> bool {
            if left == 0 {
                return true;
            }
            for v in start..g.n {
                if clique.iter().all(|&u| g.has_edge(u, v)) {
                    clique.push(v);
                    if extend(g, clique, v + 1, left - 1) {
                        return true;
                    }
                    clique.pop();
                }
            }
            false
        }
        if r == 0 {
            return true;
        }
        extend(self, &mut Vec::new(), 0, r)
    }
}
