//! Slow definitional oracles used to cross-check the optimized detectors and
//! searches. Everything here enumerates without pruning beyond feasibility.

use crate::detect::{BergeEmbedding, EdgeAssignment};
use crate::system::{PatternGraph, Triple, TripleSystem};

/// Tries every injective core placement and every assignment of distinct
/// host triples, with no automorphism reduction.
pub fn contains_berge_bruteforce(h: &TripleSystem, pattern: &PatternGraph) -> bool {
    first_embedding(h, pattern, None).is_some()
}

/// Brute-force variant of the forced-triple search.
pub fn contains_berge_using_bruteforce(
    h: &TripleSystem,
    pattern: &PatternGraph,
    t: Triple,
) -> bool {
    let mut key = t;
    key.sort_unstable();
    match h.edges().iter().position(|&e| e == key) {
        Some(idx) => first_embedding(h, pattern, Some(idx)).is_some(),
        None => false,
    }
}

/// Collects embeddings up to `cap`, counting distinct core orderings
/// separately.
pub fn all_embeddings_bruteforce(
    h: &TripleSystem,
    pattern: &PatternGraph,
    cap: usize,
) -> Vec<BergeEmbedding> {
    let mut out = Vec::new();
    let k = pattern.k();
    if k > h.n() {
        return out;
    }
    let mut core = vec![0usize; k];
    let mut used_v = vec![false; h.n()];
    cores_rec(h, pattern, 0, &mut core, &mut used_v, &mut |core| {
        let mut assign = vec![usize::MAX; pattern.edges().len()];
        let mut used_t = vec![false; h.edge_count()];
        let mut stop = out.len() >= cap;
        assign_rec(h, pattern, core, 0, &mut assign, &mut used_t, None, &mut |assign| {
            if out.len() < cap {
                out.push(build(h, pattern, core, assign));
            }
            out.len() >= cap
        }, &mut stop);
        out.len() >= cap
    });
    out
}

fn first_embedding(
    h: &TripleSystem,
    pattern: &PatternGraph,
    forced: Option<usize>,
) -> Option<BergeEmbedding> {
    let k = pattern.k();
    if k > h.n() {
        return None;
    }
    let mut core = vec![0usize; k];
    let mut used_v = vec![false; h.n()];
    let mut found = None;
    cores_rec(h, pattern, 0, &mut core, &mut used_v, &mut |core| {
        let mut assign = vec![usize::MAX; pattern.edges().len()];
        let mut used_t = vec![false; h.edge_count()];
        let mut stop = false;
        assign_rec(h, pattern, core, 0, &mut assign, &mut used_t, forced, &mut |assign| {
            found = Some(build(h, pattern, core, assign));
            true
        }, &mut stop);
        found.is_some()
    });
    found
}

fn build(
    h: &TripleSystem,
    pattern: &PatternGraph,
    core: &[usize],
    assign: &[usize],
) -> BergeEmbedding {
    let assignment = pattern
        .edges()
        .iter()
        .zip(assign)
        .map(|(&(i, j), &t)| EdgeAssignment { pair: [i, j], triple: h.edges()[t] })
        .collect();
    BergeEmbedding { core: core.to_vec(), assignment }
}

fn cores_rec(
    h: &TripleSystem,
    pattern: &PatternGraph,
    depth: usize,
    core: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if depth == pattern.k() {
        return visit(core);
    }
    for v in 0..h.n() {
        if !used[v] {
            used[v] = true;
            core[depth] = v;
            if cores_rec(h, pattern, depth + 1, core, used, visit) {
                used[v] = false;
                return true;
            }
            used[v] = false;
        }
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn assign_rec(
    h: &TripleSystem,
    pattern: &PatternGraph,
    core: &[usize],
    pos: usize,
    assign: &mut Vec<usize>,
    used: &mut Vec<bool>,
    forced: Option<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
    stop: &mut bool,
) {
    if *stop {
        return;
    }
    if pos == pattern.edges().len() {
        if let Some(fidx) = forced {
            if !assign.contains(&fidx) {
                return;
            }
        }
        if visit(assign) {
            *stop = true;
        }
        return;
    }
    let (i, j) = pattern.edges()[pos];
    for (t, triple) in h.edges().iter().enumerate() {
        if used[t] || !triple.contains(&core[i]) || !triple.contains(&core[j]) {
            continue;
        }
        used[t] = true;
        assign[pos] = t;
        assign_rec(h, pattern, core, pos + 1, assign, used, forced, visit, stop);
        assign[pos] = usize::MAX;
        used[t] = false;
        if *stop {
            return;
        }
    }
}

/// Whether some injection of vertices maps every triple of `pattern` onto a
/// triple of `h` (sub-system containment, not induced).
pub fn contains_subsystem_bruteforce(h: &TripleSystem, pattern: &TripleSystem) -> bool {
    let k = pattern.n();
    if k > h.n() {
        return false;
    }
    let mut map = vec![usize::MAX; k];
    let mut used = vec![false; h.n()];
    subsystem_rec(h, pattern, 0, &mut map, &mut used)
}

fn subsystem_rec(
    h: &TripleSystem,
    pattern: &TripleSystem,
    depth: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == pattern.n() {
        return pattern.edges().iter().all(|t| {
            let mut image = [map[t[0]], map[t[1]], map[t[2]]];
            image.sort_unstable();
            h.contains(image)
        });
    }
    for v in 0..h.n() {
        if !used[v] {
            used[v] = true;
            map[depth] = v;
            if subsystem_rec(h, pattern, depth + 1, map, used) {
                used[v] = false;
                return true;
            }
            used[v] = false;
        }
    }
    false
}

/// Exact maximum over all `2^C(n,3)` subsets of triples satisfying `free`.
/// Only viable for tiny `n`; asserts `n <= 5`.
pub fn max_edges_bruteforce(
    n: usize,
    free: impl Fn(&TripleSystem) -> bool,
) -> (u64, TripleSystem) {
    assert!(n <= 5, "subset enumeration needs n <= 5, got {n}");
    let all: Vec<Triple> = TripleSystem::complete(n).edges().to_vec();
    let mut best = TripleSystem::empty(n);
    assert!(free(&best), "the empty system must satisfy the property");
    for mask in 0u64..(1u64 << all.len()) {
        if (mask.count_ones() as usize) <= best.edge_count() {
            continue;
        }
        let subset = all
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &t)| t);
        let sys = TripleSystem::new(n, subset).unwrap();
        if free(&sys) {
            best = sys;
        }
    }
    (best.edge_count() as u64, best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::{find_berge, verify_embedding, DetectMode};
    use crate::system::balanced_3partite;

    #[test]
    fn bruteforce_agrees_with_matcher_on_fixtures() {
        let k4 = PatternGraph::k4();
        let hits = TripleSystem::new(
            5,
            [[0, 2, 3], [0, 3, 4], [0, 2, 4], [1, 2, 3], [1, 2, 4], [1, 3, 4]],
        )
        .unwrap();
        assert!(contains_berge_bruteforce(&hits, &k4));
        let misses = balanced_3partite(6);
        assert!(!contains_berge_bruteforce(&misses, &k4));
        assert_eq!(
            contains_berge_bruteforce(&hits, &k4),
            find_berge(&hits, &k4, DetectMode::Any).is_some()
        );
    }

    #[test]
    fn bruteforce_embeddings_verify() {
        let k3 = PatternGraph::k3();
        let h = TripleSystem::new(5, [[0, 1, 2], [0, 1, 3], [1, 2, 4], [0, 2, 4]]).unwrap();
        let embs = all_embeddings_bruteforce(&h, &k3, 50);
        assert!(!embs.is_empty());
        for e in &embs {
            assert!(verify_embedding(&h, &k3, e));
        }
    }

    #[test]
    fn forced_bruteforce_respects_the_forced_triple() {
        let k3 = PatternGraph::k3();
        let h = TripleSystem::new(6, [[0, 1, 2], [0, 1, 3], [1, 2, 4], [0, 2, 4], [3, 4, 5]])
            .unwrap();
        assert!(contains_berge_using_bruteforce(&h, &k3, [0, 1, 2]));
        // Core {1, 3, 4} uses 013, 124 and the forced 345.
        assert!(contains_berge_using_bruteforce(&h, &k3, [3, 4, 5]));
        assert!(!contains_berge_using_bruteforce(&h, &k3, [0, 1, 5]));

        // Here 4 and 5 appear only inside 345, so no triangle can use it,
        // although copies exist elsewhere.
        let lopsided =
            TripleSystem::new(6, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [3, 4, 5]]).unwrap();
        assert!(contains_berge_using_bruteforce(&lopsided, &k3, [0, 1, 2]));
        assert!(!contains_berge_using_bruteforce(&lopsided, &k3, [3, 4, 5]));
    }

    #[test]
    fn subsystem_containment() {
        let host = TripleSystem::complete(4);
        let pat = TripleSystem::new(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3]]).unwrap();
        assert!(contains_subsystem_bruteforce(&host, &pat));
        let sparse = balanced_3partite(6);
        assert!(!contains_subsystem_bruteforce(&sparse, &pat));
    }

    #[test]
    fn tiny_maxima_by_subset_enumeration() {
        let k4 = PatternGraph::k4();
        let (v3, _) = max_edges_bruteforce(3, |s| !contains_berge_bruteforce(s, &k4));
        let (v4, _) = max_edges_bruteforce(4, |s| !contains_berge_bruteforce(s, &k4));
        let (v5, w5) = max_edges_bruteforce(5, |s| !contains_berge_bruteforce(s, &k4));
        assert_eq!((v3, v4, v5), (1, 4, 5));
        assert!(!contains_berge_bruteforce(&w5, &k4));
    }
}
