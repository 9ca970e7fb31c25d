//! Berge-pattern detection.
//!
//! A host system `H` contains a Berge copy of a graph `G` when there are an
//! injective placement of `V(G)` onto host vertices (the core) and a
//! bijection from pattern edges to distinct host triples such that each
//! triple contains the image of its pattern edge. Detection enumerates core
//! placements up to pattern automorphisms and decides each one with a
//! bipartite matching between pattern edges and candidate triples.

use crate::system::{PatternGraph, Triple, TripleSystem};
use serde::Serialize;

/// What counts as a hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetectMode {
    /// Any Berge copy.
    Any,
    /// Only Berge copies that are not an exact expansion of the pattern
    /// (an expansion assigns every pattern edge a triple made of its two
    /// core vertices plus a private new vertex, all privates distinct).
    NonExpansion,
}

/// Assignment of one pattern edge (by pattern vertex ids) to a host triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeAssignment {
    pub pair: [usize; 2],
    pub triple: Triple,
}

/// A certified Berge copy: `core[i]` hosts pattern vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BergeEmbedding {
    pub core: Vec<usize>,
    pub assignment: Vec<EdgeAssignment>,
}

/// A Berge triangle in anchored form: triples `T1 = {labels}`,
/// `T2 = {labels[0], labels[1], x}`, `T3 = {labels[1], labels[2], y}` with
/// `x, y` outside the labels. `x == y` exactly when the triangle sits inside
/// a 4-set spanning three triples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnchoredTriangle {
    pub labels: [usize; 3],
    pub x: usize,
    pub y: usize,
    pub triples: [Triple; 3],
}

impl AnchoredTriangle {
    /// Checks the anchored shape against a host system.
    pub fn is_valid_for(&self, h: &TripleSystem) -> bool {
        let [l1, l2, l3] = self.labels;
        let mut t1 = [l1, l2, l3];
        let mut t2 = [l1, l2, self.x];
        let mut t3 = [l2, l3, self.y];
        t1.sort_unstable();
        t2.sort_unstable();
        t3.sort_unstable();
        let distinct_labels = l1 != l2 && l2 != l3 && l1 != l3;
        let outside = !self.labels.contains(&self.x) && !self.labels.contains(&self.y);
        distinct_labels
            && outside
            && self.triples == [t1, t2, t3]
            && t1 != t2
            && t1 != t3
            && t2 != t3
            && h.contains(t1)
            && h.contains(t2)
            && h.contains(t3)
    }
}

/// Reusable detector for one pattern and one host vertex count. Core
/// placements are enumerated once, keeping only the lexicographically least
/// tuple of each pattern-automorphism orbit.
pub(crate) struct BergeFinder {
    k: usize,
    pattern_edges: Vec<(usize, usize)>,
    pattern_degrees: Vec<usize>,
    cores: Vec<Vec<usize>>,
    n: usize,
}

impl BergeFinder {
    pub fn new(pattern: &PatternGraph, n: usize) -> Self {
        let k = pattern.k();
        let pattern_edges = pattern.edges().to_vec();
        let pattern_degrees = (0..k).map(|v| pattern.degree(v)).collect();
        let auts: Vec<Vec<usize>> = pattern
            .automorphisms()
            .into_iter()
            .filter(|p| p.iter().enumerate().any(|(i, &v)| i != v))
            .collect();
        let mut cores = Vec::new();
        if k <= n {
            let mut tuple = vec![0usize; k];
            let mut used = vec![false; n];
            enumerate_cores(n, k, 0, &mut tuple, &mut used, &auts, &mut cores);
        }
        BergeFinder { k, pattern_edges, pattern_degrees, cores, n }
    }

    /// Searches `edges` for a Berge copy. When `forced` is set, only copies
    /// whose assignment uses `edges[forced]` count.
    pub fn find_with(
        &self,
        edges: &[Triple],
        forced: Option<usize>,
        mode: DetectMode,
    ) -> Option<BergeEmbedding> {
        let ledges = self.pattern_edges.len();
        if edges.len() < ledges || self.cores.is_empty() {
            return None;
        }
        // In NonExpansion mode an expansion needs k + |E(G)| distinct host
        // vertices; below that every copy qualifies.
        let expansions_possible = self.n >= self.k + ledges;

        let mut host_deg = vec![0usize; self.n];
        for t in edges {
            for &v in t {
                host_deg[v] += 1;
            }
        }
        let pairs = PairIndex::build(self.n, edges);

        let mut cand: Vec<&[u32]> = vec![&[]; ledges];
        let mut match_left = vec![usize::MAX; ledges];
        let mut used = vec![false; edges.len()];

        'core: for core in &self.cores {
            for i in 0..self.k {
                if host_deg[core[i]] < self.pattern_degrees[i] {
                    continue 'core;
                }
            }
            for (e, &(i, j)) in self.pattern_edges.iter().enumerate() {
                let c = pairs.candidates(core[i], core[j]);
                if c.is_empty() {
                    continue 'core;
                }
                cand[e] = c;
            }
            let found = match (mode, expansions_possible) {
                (DetectMode::Any, _) | (DetectMode::NonExpansion, false) => {
                    self.match_any(edges, core, &cand, forced, &mut match_left, &mut used)
                }
                (DetectMode::NonExpansion, true) => {
                    self.match_non_expansion(edges, core, &cand, forced, &mut match_left, &mut used)
                }
            };
            if let Some(assignment) = found {
                return Some(self.build_embedding(edges, core, &assignment));
            }
        }
        None
    }

    fn build_embedding(
        &self,
        edges: &[Triple],
        core: &[usize],
        matched: &[usize],
    ) -> BergeEmbedding {
        let assignment = self
            .pattern_edges
            .iter()
            .zip(matched)
            .map(|(&(i, j), &t)| EdgeAssignment { pair: [i, j], triple: edges[t] })
            .collect();
        BergeEmbedding { core: core.to_vec(), assignment }
    }

    /// Perfect matching of pattern edges to distinct candidate triples
    /// (augmenting paths). Returns the matched triple index per pattern edge.
    fn match_any(
        &self,
        edges: &[Triple],
        core: &[usize],
        cand: &[&[u32]],
        forced: Option<usize>,
        match_left: &mut [usize],
        used: &mut [bool],
    ) -> Option<Vec<usize>> {
        match forced {
            None => self.run_matching(cand, usize::MAX, usize::MAX, match_left, used),
            Some(fidx) => {
                // Try every pattern edge as the one pinned to edges[fidx].
                let ft = edges[fidx];
                for (estar, &(i, j)) in self.pattern_edges.iter().enumerate() {
                    if !(ft.contains(&core[i]) && ft.contains(&core[j])) {
                        continue;
                    }
                    if let Some(mut m) = self.run_matching(cand, estar, fidx, match_left, used) {
                        m[estar] = fidx;
                        return Some(m);
                    }
                }
                None
            }
        }
    }

    fn run_matching(
        &self,
        cand: &[&[u32]],
        pinned_edge: usize,
        pinned_triple: usize,
        match_left: &mut [usize],
        used: &mut [bool],
    ) -> Option<Vec<usize>> {
        let ledges = cand.len();
        match_left.fill(usize::MAX);
        used.fill(false);
        let mut match_right: Vec<usize> = vec![usize::MAX; used.len()];
        if pinned_edge != usize::MAX {
            match_left[pinned_edge] = pinned_triple;
            match_right[pinned_triple] = pinned_edge;
        }
        for e in 0..ledges {
            if e == pinned_edge {
                continue;
            }
            used.fill(false);
            if pinned_edge != usize::MAX {
                used[pinned_triple] = true;
            }
            if !augment(e, cand, match_left, &mut match_right, used, pinned_edge) {
                return None;
            }
        }
        Some(match_left.to_vec())
    }

    /// Enumerates perfect matchings (fewest candidates first) until one is
    /// not an expansion.
    fn match_non_expansion(
        &self,
        edges: &[Triple],
        core: &[usize],
        cand: &[&[u32]],
        forced: Option<usize>,
        _match_left: &mut [usize],
        used: &mut [bool],
    ) -> Option<Vec<usize>> {
        let ledges = self.pattern_edges.len();
        let mut order: Vec<usize> = (0..ledges).collect();
        order.sort_by_key(|&e| cand[e].len());
        used.fill(false);
        let mut assign = vec![usize::MAX; ledges];
        let mut out = None;
        self.enumerate_matchings(edges, core, cand, &order, 0, used, &mut assign, forced, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_matchings(
        &self,
        edges: &[Triple],
        core: &[usize],
        cand: &[&[u32]],
        order: &[usize],
        pos: usize,
        used: &mut [bool],
        assign: &mut Vec<usize>,
        forced: Option<usize>,
        out: &mut Option<Vec<usize>>,
    ) {
        if out.is_some() {
            return;
        }
        if pos == order.len() {
            if let Some(fidx) = forced {
                if !assign.contains(&fidx) {
                    return;
                }
            }
            if !self.is_expansion(edges, core, assign) {
                *out = Some(assign.clone());
            }
            return;
        }
        let e = order[pos];
        for &t in cand[e] {
            let t = t as usize;
            if !used[t] {
                used[t] = true;
                assign[e] = t;
                self.enumerate_matchings(edges, core, cand, order, pos + 1, used, assign, forced, out);
                assign[e] = usize::MAX;
                used[t] = false;
                if out.is_some() {
                    return;
                }
            }
        }
    }

    fn is_expansion(&self, edges: &[Triple], core: &[usize], assign: &[usize]) -> bool {
        let mut privates: Vec<usize> = Vec::with_capacity(assign.len());
        for (&(i, j), &t) in self.pattern_edges.iter().zip(assign) {
            let triple = edges[t];
            let mut private = usize::MAX;
            for &v in &triple {
                if v != core[i] && v != core[j] {
                    private = v;
                }
            }
            if core.contains(&private) || privates.contains(&private) {
                return false;
            }
            privates.push(private);
        }
        true
    }
}

fn enumerate_cores(
    n: usize,
    k: usize,
    depth: usize,
    tuple: &mut Vec<usize>,
    used: &mut Vec<bool>,
    auts: &[Vec<usize>],
    out: &mut Vec<Vec<usize>>,
) {
    if depth == k {
        // Keep only the lexicographically least tuple of its orbit under
        // pattern automorphisms.
        for aut in auts {
            let mut smaller = false;
            let mut larger = false;
            for i in 0..k {
                let mapped = tuple[aut[i]];
                if mapped < tuple[i] {
                    smaller = true;
                    break;
                }
                if mapped > tuple[i] {
                    larger = true;
                    break;
                }
            }
            if smaller && !larger {
                return;
            }
        }
        out.push(tuple.clone());
        return;
    }
    for v in 0..n {
        if !used[v] {
            used[v] = true;
            tuple[depth] = v;
            enumerate_cores(n, k, depth + 1, tuple, used, auts, out);
            used[v] = false;
        }
    }
}

fn augment(
    e: usize,
    cand: &[&[u32]],
    match_left: &mut [usize],
    match_right: &mut Vec<usize>,
    visited: &mut [bool],
    pinned_edge: usize,
) -> bool {
    for &t in cand[e] {
        let t = t as usize;
        if visited[t] {
            continue;
        }
        visited[t] = true;
        let owner = match_right[t];
        if owner == usize::MAX
            || (owner != pinned_edge
                && augment(owner, cand, match_left, match_right, visited, pinned_edge))
        {
            match_left[e] = t;
            match_right[t] = e;
            return true;
        }
    }
    false
}

/// Triples indexed by the pairs they contain (CSR layout).
struct PairIndex {
    n: usize,
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl PairIndex {
    fn build(n: usize, edges: &[Triple]) -> Self {
        let mut counts = vec![0u32; n * n + 1];
        let pair_id = |u: usize, v: usize| u * n + v;
        for t in edges {
            counts[pair_id(t[0], t[1]) + 1] += 1;
            counts[pair_id(t[0], t[2]) + 1] += 1;
            counts[pair_id(t[1], t[2]) + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let starts = counts;
        let mut cursor = starts.clone();
        let mut items = vec![0u32; edges.len() * 3];
        for (idx, t) in edges.iter().enumerate() {
            for (u, v) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                let slot = cursor[pair_id(u, v)] as usize;
                items[slot] = idx as u32;
                cursor[pair_id(u, v)] += 1;
            }
        }
        PairIndex { n, starts, items }
    }

    fn candidates(&self, u: usize, v: usize) -> &[u32] {
        let (u, v) = (u.min(v), u.max(v));
        let id = u * self.n + v;
        &self.items[self.starts[id] as usize..self.starts[id + 1] as usize]
    }
}

/// Finds a Berge copy of `pattern` in `h`, or `None`.
pub fn find_berge(
    h: &TripleSystem,
    pattern: &PatternGraph,
    mode: DetectMode,
) -> Option<BergeEmbedding> {
    BergeFinder::new(pattern, h.n()).find_with(h.edges(), None, mode)
}

/// Like [`find_berge`] but only accepts copies whose assignment uses the
/// triple `t`. Supports incremental maintenance: if `H` was pattern-free and
/// gains `t`, any new copy must use `t`.
pub fn find_berge_using(
    h: &TripleSystem,
    pattern: &PatternGraph,
    mode: DetectMode,
    t: Triple,
) -> Option<BergeEmbedding> {
    let mut key = t;
    key.sort_unstable();
    let idx = h.edges().iter().position(|&e| e == key)?;
    BergeFinder::new(pattern, h.n()).find_with(h.edges(), Some(idx), mode)
}

pub fn is_berge_free(h: &TripleSystem, pattern: &PatternGraph, mode: DetectMode) -> bool {
    find_berge(h, pattern, mode).is_none()
}

/// Definitional check of an embedding, independent of the search path.
pub fn verify_embedding(h: &TripleSystem, pattern: &PatternGraph, emb: &BergeEmbedding) -> bool {
    let k = pattern.k();
    if emb.core.len() != k || emb.core.iter().any(|&v| v >= h.n()) {
        return false;
    }
    let mut core_sorted = emb.core.clone();
    core_sorted.sort_unstable();
    core_sorted.dedup();
    if core_sorted.len() != k {
        return false;
    }
    if emb.assignment.len() != pattern.edges().len() {
        return false;
    }
    let mut pairs_seen: Vec<(usize, usize)> = Vec::new();
    let mut triples_seen: Vec<Triple> = Vec::new();
    for a in &emb.assignment {
        let (i, j) = (a.pair[0].min(a.pair[1]), a.pair[0].max(a.pair[1]));
        if i >= k || j >= k || i == j {
            return false;
        }
        if !h.contains(a.triple) {
            return false;
        }
        if !(a.triple.contains(&emb.core[i]) && a.triple.contains(&emb.core[j])) {
            return false;
        }
        pairs_seen.push((i, j));
        let mut t = a.triple;
        t.sort_unstable();
        triples_seen.push(t);
    }
    pairs_seen.sort_unstable();
    if pairs_seen != pattern.edges() {
        return false;
    }
    triples_seen.sort_unstable();
    triples_seen.windows(2).all(|w| w[0] != w[1])
}

/// First 4-set of vertices spanning at least three triples, with three
/// witnesses.
pub fn find_k43_minus_e(h: &TripleSystem) -> Option<([usize; 4], [Triple; 3])> {
    let n = h.n();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let subs = [[a, b, c], [a, b, d], [a, c, d], [b, c, d]];
                    let present: Vec<Triple> =
                        subs.into_iter().filter(|&t| h.contains(t)).collect();
                    if present.len() >= 3 {
                        return Some(([a, b, c, d], [present[0], present[1], present[2]]));
                    }
                }
            }
        }
    }
    None
}

/// First tight path `abc, bcd, cde` on five distinct vertices, returned as
/// `[a, b, c, d, e]`.
pub fn find_tight_path(h: &TripleSystem) -> Option<[usize; 5]> {
    let n = h.n();
    for t in h.edges() {
        // Choose which two vertices of t play (b, c), in order.
        let roles = [
            (t[0], t[1], t[2]),
            (t[0], t[2], t[1]),
            (t[1], t[2], t[0]),
            (t[1], t[0], t[2]),
            (t[2], t[0], t[1]),
            (t[2], t[1], t[0]),
        ];
        for (b, c, a) in roles {
            for d in 0..n {
                if d == a || d == b || d == c {
                    continue;
                }
                let mut bcd = [b, c, d];
                bcd.sort_unstable();
                if !h.contains(bcd) {
                    continue;
                }
                for e in 0..n {
                    if e == a || e == b || e == c || e == d {
                        continue;
                    }
                    let mut cde = [c, d, e];
                    cde.sort_unstable();
                    if h.contains(cde) {
                        return Some([a, b, c, d, e]);
                    }
                }
            }
        }
    }
    None
}

/// Selects a Berge triangle in anchored form, preferring `x == y` from a
/// 4-set spanning three triples and falling back to a tight path.
pub fn find_berge_triangle_anchored(h: &TripleSystem) -> Option<AnchoredTriangle> {
    if let Some((verts, triples)) = find_k43_minus_e(h) {
        let [t1, t2, t3] = triples;
        let common = *verts
            .iter()
            .find(|v| t1.contains(v) && t2.contains(v) && t3.contains(v))
            .expect("three triples of a 4-set share one vertex");
        let x = *verts.iter().find(|v| !t1.contains(v)).expect("t1 omits one vertex");
        let l1 = *t1
            .iter()
            .find(|&&v| v != common && t2.contains(&v))
            .expect("t1 and t2 share a second vertex");
        let l3 = *t1
            .iter()
            .find(|&&v| v != common && t3.contains(&v))
            .expect("t1 and t3 share a second vertex");
        let anchored = AnchoredTriangle { labels: [l1, common, l3], x, y: x, triples: [t1, t2, t3] };
        debug_assert!(anchored.is_valid_for(h));
        return Some(anchored);
    }
    if let Some([a, b, c, d, e]) = find_tight_path(h) {
        let mut t1 = [b, c, d];
        let mut t2 = [a, b, c];
        let mut t3 = [c, d, e];
        t1.sort_unstable();
        t2.sort_unstable();
        t3.sort_unstable();
        let anchored = AnchoredTriangle { labels: [b, c, d], x: a, y: e, triples: [t1, t2, t3] };
        debug_assert!(anchored.is_valid_for(h));
        return Some(anchored);
    }
    None
}

/// The expansion of a graph: each pattern edge becomes a triple with its own
/// new vertex. On `k + |E|` vertices.
pub fn expansion_of(pattern: &PatternGraph) -> TripleSystem {
    let k = pattern.k();
    let triples = pattern
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| [u, v, k + i]);
    TripleSystem::new(k + pattern.edges().len(), triples).expect("expansion fits")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{balanced_3partite, PatternGraph, TripleSystem};

    /// Six triples meeting {0,1} in exactly one vertex, on five vertices.
    fn pair_star_system() -> TripleSystem {
        TripleSystem::new(
            5,
            [[0, 2, 3], [0, 3, 4], [0, 2, 4], [1, 2, 3], [1, 2, 4], [1, 3, 4]],
        )
        .unwrap()
    }

    #[test]
    fn pair_star_system_contains_berge_k4() {
        let h = pair_star_system();
        let emb = find_berge(&h, &PatternGraph::k4(), DetectMode::Any).expect("copy exists");
        assert!(verify_embedding(&h, &PatternGraph::k4(), &emb));
    }

    #[test]
    fn explicit_star_embedding_verifies() {
        let h = pair_star_system();
        let emb = BergeEmbedding {
            core: vec![0, 2, 3, 4],
            assignment: vec![
                EdgeAssignment { pair: [0, 1], triple: [0, 2, 3] },
                EdgeAssignment { pair: [0, 2], triple: [0, 3, 4] },
                EdgeAssignment { pair: [0, 3], triple: [0, 2, 4] },
                EdgeAssignment { pair: [1, 2], triple: [1, 2, 3] },
                EdgeAssignment { pair: [1, 3], triple: [1, 2, 4] },
                EdgeAssignment { pair: [2, 3], triple: [1, 3, 4] },
            ],
        };
        assert!(verify_embedding(&h, &PatternGraph::k4(), &emb));
    }

    #[test]
    fn swapped_triple_embedding_verifies_on_modified_host() {
        // Replace {1,2,3} by {2,3,4} and reroute the pattern edge (1,2).
        let h = TripleSystem::new(
            5,
            [[0, 2, 3], [0, 3, 4], [0, 2, 4], [2, 3, 4], [1, 2, 4], [1, 3, 4]],
        )
        .unwrap();
        let emb = BergeEmbedding {
            core: vec![0, 2, 3, 4],
            assignment: vec![
                EdgeAssignment { pair: [0, 1], triple: [0, 2, 3] },
                EdgeAssignment { pair: [0, 2], triple: [0, 3, 4] },
                EdgeAssignment { pair: [0, 3], triple: [0, 2, 4] },
                EdgeAssignment { pair: [1, 2], triple: [2, 3, 4] },
                EdgeAssignment { pair: [1, 3], triple: [1, 2, 4] },
                EdgeAssignment { pair: [2, 3], triple: [1, 3, 4] },
            ],
        };
        assert!(verify_embedding(&h, &PatternGraph::k4(), &emb));
    }

    #[test]
    fn embedding_reusing_a_triple_fails_verification() {
        let h = pair_star_system();
        let emb = BergeEmbedding {
            core: vec![0, 2, 3, 4],
            assignment: vec![
                EdgeAssignment { pair: [0, 1], triple: [0, 2, 3] },
                EdgeAssignment { pair: [0, 2], triple: [0, 3, 4] },
                EdgeAssignment { pair: [0, 3], triple: [0, 2, 4] },
                EdgeAssignment { pair: [1, 2], triple: [0, 2, 3] },
                EdgeAssignment { pair: [1, 3], triple: [1, 2, 4] },
                EdgeAssignment { pair: [2, 3], triple: [1, 3, 4] },
            ],
        };
        assert!(!verify_embedding(&h, &PatternGraph::k4(), &emb));
    }

    #[test]
    fn balanced_construction_is_berge_k4_free() {
        for n in [6, 9, 12] {
            assert!(is_berge_free(&balanced_3partite(n), &PatternGraph::k4(), DetectMode::Any));
        }
    }

    #[test]
    fn expansion_contains_its_pattern_but_not_a_non_expansion_copy() {
        let k4 = PatternGraph::k4();
        let h = expansion_of(&k4);
        assert_eq!(h.n(), 10);
        assert_eq!(h.edge_count(), 6);
        let emb = find_berge(&h, &k4, DetectMode::Any).expect("the expansion is a Berge copy");
        assert!(verify_embedding(&h, &k4, &emb));
        assert!(find_berge(&h, &k4, DetectMode::NonExpansion).is_none());
    }

    #[test]
    fn extra_shared_private_vertex_gives_non_expansion_copy() {
        let k4 = PatternGraph::k4();
        let mut edges: Vec<Triple> = expansion_of(&k4).edges().to_vec();
        // {0,2,5} is the triple for pattern edge (0,2); {0,1,5} reuses its
        // private vertex for pattern edge (0,1).
        edges.push([0, 1, 5]);
        let h = TripleSystem::new(10, edges).unwrap();
        let emb = find_berge(&h, &k4, DetectMode::NonExpansion).expect("shared private vertex");
        assert!(verify_embedding(&h, &k4, &emb));
    }

    #[test]
    fn forced_triple_detection() {
        let h = pair_star_system();
        let k4 = PatternGraph::k4();
        for &t in h.edges() {
            assert!(find_berge_using(&h, &k4, DetectMode::Any, t).is_some(), "triple {t:?}");
        }
        assert!(find_berge_using(&h, &k4, DetectMode::Any, [0, 1, 2]).is_none());
    }

    #[test]
    fn forced_triple_must_participate() {
        // The star system plus an irrelevant triple far from the copy: the
        // copy exists, but not through that triple alone when it covers no
        // core pair usefully. Build a host where only one triple completes a
        // copy and force a different, useless one.
        let k4 = PatternGraph::k4();
        let h = TripleSystem::new(
            7,
            [[0, 2, 3], [0, 3, 4], [0, 2, 4], [1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 5, 6]],
        )
        .unwrap();
        assert!(find_berge_using(&h, &k4, DetectMode::Any, [2, 5, 6]).is_none());
        assert!(find_berge_using(&h, &k4, DetectMode::Any, [0, 2, 3]).is_some());
    }

    #[test]
    fn k43_minus_e_found_in_complete_and_absent_in_balanced() {
        let (verts, triples) = find_k43_minus_e(&TripleSystem::complete(4)).unwrap();
        assert_eq!(verts, [0, 1, 2, 3]);
        assert_eq!(triples.len(), 3);
        assert!(find_k43_minus_e(&balanced_3partite(6)).is_none());
    }

    #[test]
    fn tight_path_in_balanced_nine() {
        let h = balanced_3partite(9);
        let [a, b, c, d, e] = find_tight_path(&h).expect("tight path exists");
        let mut sorted = [a, b, c, d, e];
        sorted.sort_unstable();
        sorted.windows(2).for_each(|w| assert_ne!(w[0], w[1]));
        for t in [[a, b, c], [b, c, d], [c, d, e]] {
            assert!(h.contains(t), "missing {t:?}");
        }
    }

    #[test]
    fn anchored_triangle_from_spanning_4set_has_equal_anchors() {
        let h = TripleSystem::complete(4);
        let anchor = find_berge_triangle_anchored(&h).unwrap();
        assert_eq!(anchor.x, anchor.y);
        assert!(anchor.is_valid_for(&h));
    }

    #[test]
    fn anchored_triangle_from_tight_path_has_distinct_anchors() {
        let h = balanced_3partite(9);
        let anchor = find_berge_triangle_anchored(&h).unwrap();
        assert_ne!(anchor.x, anchor.y);
        assert!(anchor.is_valid_for(&h));
    }

    #[test]
    fn no_anchored_triangle_in_sparse_system() {
        let h = TripleSystem::new(6, [[0, 1, 2], [3, 4, 5]]).unwrap();
        assert!(find_berge_triangle_anchored(&h).is_none());
    }

    #[test]
    fn expansion_shape() {
        let k3 = PatternGraph::k3();
        let h = expansion_of(&k3);
        assert_eq!(h.n(), 6);
        assert_eq!(h.edges(), &[[0, 1, 3], [0, 2, 4], [1, 2, 5]]);
    }

    #[test]
    fn detection_is_isomorphism_invariant() {
        let h = pair_star_system();
        let k4 = PatternGraph::k4();
        let perm = [3, 0, 4, 1, 2];
        let g = h.relabel(&perm);
        assert_eq!(
            find_berge(&h, &k4, DetectMode::Any).is_some(),
            find_berge(&g, &k4, DetectMode::Any).is_some()
        );
    }

    #[test]
    fn empty_pattern_embeds_when_enough_vertices_exist() {
        let g = PatternGraph::new(2, []);
        let h = TripleSystem::empty(3);
        let emb = find_berge(&h, &g, DetectMode::Any).unwrap();
        assert_eq!(emb.assignment.len(), 0);
        assert!(verify_embedding(&h, &g, &emb));
        assert!(find_berge(&TripleSystem::empty(1), &g, DetectMode::Any).is_none());
    }
}
