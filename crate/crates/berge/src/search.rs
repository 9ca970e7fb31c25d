//! Exact extremal-number search.
//!
//! Depth-first include/skip branching over the lexicographically ordered
//! universe of candidate edges, keeping the chosen set free of the forbidden
//! configurations at every step (the detector is constrained to copies that
//! use the newly added edge). Subtrees die by a suffix-count bound against
//! the best witness found so far, and shallow nodes are deduplicated by
//! memoized canonical forms. Deep subtrees can be handed to a worker pool;
//! the extremal value is independent of worker count.

use crate::detect::{BergeFinder, DetectMode};
use crate::reference::contains_subsystem_bruteforce;
use crate::system::{PatternGraph, SimpleGraph, Triple, TripleSystem};
use serde::Serialize;
use std::collections::{HashSet, VecDeque};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering::Relaxed};
use std::sync::Mutex;
use std::time::Instant;
use thiserror::Error;

/// Certified scale limit for triple-system searches and canonical forms.
pub const MAX_SEARCH_N: usize = 10;
/// Certified scale limit for graph searches.
pub const MAX_GRAPH_M: usize = 12;

/// What the chosen system must avoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForbiddenSpec {
    /// Any Berge copy of the pattern graph.
    BergePattern(PatternGraph),
    /// Berge copies of the pattern except its expansion.
    BergeMinusExpansion(PatternGraph),
    /// Injective images of any of the listed triple systems.
    ExplicitPatterns(Vec<TripleSystem>),
    /// Cliques of the given order; only meaningful for [`graph_max_edges`].
    GraphClique(usize),
}

impl std::fmt::Display for ForbiddenSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn pattern_name(g: &PatternGraph) -> String {
            let k = g.k();
            if g.edges().len() == k * (k - 1) / 2 {
                format!("K{k}")
            } else {
                format!("{}v{}e", k, g.edges().len())
            }
        }
        match self {
            ForbiddenSpec::BergePattern(g) => write!(f, "berge({})", pattern_name(g)),
            ForbiddenSpec::BergeMinusExpansion(g) => {
                write!(f, "berge-minus-expansion({})", pattern_name(g))
            }
            ForbiddenSpec::ExplicitPatterns(ps) => write!(f, "explicit-patterns({})", ps.len()),
            ForbiddenSpec::GraphClique(r) => write!(f, "graph-clique({r})"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchConfig {
    /// Canonical-form deduplication applies to nodes at most this deep.
    pub iso_depth: usize,
    pub workers: usize,
    /// Explored-node cap; `None` runs to exhaustion.
    pub node_budget: Option<u64>,
    /// Start from a known dense construction when one applies.
    pub seed_construction: bool,
    /// Prune subtrees that cannot beat the best witness found so far.
    pub bound_pruning: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            iso_depth: 4,
            workers: 1,
            node_budget: None,
            seed_construction: true,
            bound_pruning: true,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub bound_prunes: u64,
    pub canonical_prunes: u64,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Witness {
    Triples(TripleSystem),
    Graph(SimpleGraph),
}

impl Witness {
    pub fn edge_count(&self) -> usize {
        match self {
            Witness::Triples(t) => t.edge_count(),
            Witness::Graph(g) => g.edges().len(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub value: u64,
    pub witness: Witness,
    /// True when the whole tree was covered: the value is certified maximal.
    pub exhausted: bool,
    pub stats: SearchStats,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("n = {n} exceeds the certified scale {max}")]
    NTooLarge { n: usize, max: usize },
    #[error("m = {m} exceeds the certified graph scale {max}")]
    MTooLarge { m: usize, max: usize },
    #[error("clique order r = {r} must be at least 3")]
    RTooSmall { r: usize },
    #[error("a clique spec describes graphs; use graph_max_edges")]
    SpecNeedsGraph,
    #[error("node budget exhausted after {nodes} nodes; best found so far {best}")]
    BudgetExhausted { nodes: u64, best: u64 },
    #[error("claim {claimed} refuted: the maximum is {actual}, no witness with {claimed} edges exists")]
    RefutedNoWitness { claimed: u64, actual: u64 },
    #[error("claim {claimed} refuted: a system with {actual} edges exists")]
    RefutedLargerExists { claimed: u64, actual: u64 },
}

/// Log of a successful certification, sufficient to rerun the search.
#[derive(Debug, Clone, Serialize)]
pub struct CertificationRecord {
    pub n: usize,
    pub spec: String,
    pub value: u64,
    pub witness: Vec<Vec<usize>>,
    pub exhausted: bool,
    pub nodes: u64,
    pub config: SearchConfig,
}

trait SearchSpace: Sync {
    fn universe_len(&self) -> usize;
    /// `chosen` is feasible; may the `new` universe element join it?
    fn extend_ok(&self, chosen: &[usize], new: usize) -> bool;
    /// Full feasibility recheck, independent of the incremental path.
    fn final_ok(&self, chosen: &[usize]) -> bool;
    /// Isomorphism-class key for memoization, or `None` to skip this node.
    fn canonical_key(&self, chosen: &[usize]) -> Option<Vec<u8>>;
    /// Indices of a known feasible set to start from.
    fn seed(&self) -> Option<Vec<usize>>;
}

struct Shared<'a, S: SearchSpace> {
    space: &'a S,
    cfg: &'a SearchConfig,
    ulen: usize,
    best: AtomicU64,
    witness: Mutex<Vec<usize>>,
    nodes: AtomicU64,
    bound_prunes: AtomicU64,
    canonical_prunes: AtomicU64,
    budget_hit: AtomicBool,
}

impl<'a, S: SearchSpace> Shared<'a, S> {
    fn record_if_better(&self, chosen: &[usize]) {
        let size = chosen.len() as u64;
        if size <= self.best.load(Relaxed) {
            return;
        }
        assert!(
            self.space.final_ok(chosen),
            "incremental and full feasibility checks disagree"
        );
        let mut w = self.witness.lock().unwrap();
        if size > self.best.load(Relaxed) {
            self.best.store(size, Relaxed);
            *w = chosen.to_vec();
        }
    }
}

struct SeqCtx {
    memo: HashSet<Vec<u8>>,
    frontier: Option<Vec<Vec<usize>>>,
    split_depth: usize,
}

struct Driver<'a, 'b, S: SearchSpace> {
    sh: &'b Shared<'a, S>,
    seq: Option<SeqCtx>,
}

impl<'a, 'b, S: SearchSpace> Driver<'a, 'b, S> {
    fn dfs(&mut self, chosen: &mut Vec<usize>, i: usize) {
        if self.sh.budget_hit.load(Relaxed) {
            return;
        }
        let nodes = self.sh.nodes.fetch_add(1, Relaxed) + 1;
        if let Some(budget) = self.sh.cfg.node_budget {
            if nodes > budget {
                self.sh.budget_hit.store(true, Relaxed);
                return;
            }
        }
        if i == self.sh.ulen {
            return;
        }
        if self.sh.cfg.bound_pruning
            && (chosen.len() + (self.sh.ulen - i)) as u64 <= self.sh.best.load(Relaxed)
        {
            self.sh.bound_prunes.fetch_add(1, Relaxed);
            return;
        }
        if self.sh.space.extend_ok(chosen, i) {
            chosen.push(i);
            self.sh.record_if_better(chosen);
            let depth = chosen.len();
            let mut descend = true;
            if let Some(seq) = &mut self.seq {
                if depth <= self.sh.cfg.iso_depth {
                    if let Some(key) = self.sh.space.canonical_key(chosen) {
                        if !seq.memo.insert(key) {
                            self.sh.canonical_prunes.fetch_add(1, Relaxed);
                            descend = false;
                        }
                    }
                }
                if descend && depth == seq.split_depth {
                    if let Some(frontier) = &mut seq.frontier {
                        frontier.push(chosen.clone());
                        descend = false;
                    }
                }
            }
            if descend {
                self.dfs(chosen, i + 1);
            }
            chosen.pop();
        }
        self.dfs(chosen, i + 1);
    }
}

fn run_search<S: SearchSpace>(space: &S, cfg: &SearchConfig) -> (u64, Vec<usize>, bool, SearchStats) {
    let started = Instant::now();
    let sh = Shared {
        space,
        cfg,
        ulen: space.universe_len(),
        best: AtomicU64::new(0),
        witness: Mutex::new(Vec::new()),
        nodes: AtomicU64::new(0),
        bound_prunes: AtomicU64::new(0),
        canonical_prunes: AtomicU64::new(0),
        budget_hit: AtomicBool::new(false),
    };
    if cfg.seed_construction {
        if let Some(seed) = space.seed() {
            if space.final_ok(&seed) {
                sh.best.store(seed.len() as u64, Relaxed);
                *sh.witness.lock().unwrap() = seed;
            }
        }
    }

    let workers = cfg.workers.max(1);
    let split_depth = cfg.iso_depth.max(4);
    let mut driver = Driver {
        sh: &sh,
        seq: Some(SeqCtx {
            memo: HashSet::new(),
            frontier: if workers > 1 { Some(Vec::new()) } else { None },
            split_depth,
        }),
    };
    driver.dfs(&mut Vec::new(), 0);
    let frontier = driver.seq.take().and_then(|s| s.frontier).unwrap_or_default();

    if !frontier.is_empty() {
        let queue: Mutex<VecDeque<Vec<usize>>> = Mutex::new(frontier.into());
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| {
                    let mut worker = Driver { sh: &sh, seq: None };
                    loop {
                        let job = queue.lock().unwrap().pop_front();
                        match job {
                            Some(mut chosen) => {
                                let next = chosen.last().map_or(0, |&j| j + 1);
                                worker.dfs(&mut chosen, next);
                            }
                            None => break,
                        }
                    }
                });
            }
        });
    }

    let value = sh.best.load(Relaxed);
    let witness = sh.witness.lock().unwrap().clone();
    let exhausted = !sh.budget_hit.load(Relaxed);
    let stats = SearchStats {
        nodes: sh.nodes.load(Relaxed),
        bound_prunes: sh.bound_prunes.load(Relaxed),
        canonical_prunes: sh.canonical_prunes.load(Relaxed),
        wall_ms: started.elapsed().as_millis() as u64,
    };
    (value, witness, exhausted, stats)
}

struct TripleSpace {
    n: usize,
    universe: Vec<Triple>,
    spec: ForbiddenSpec,
    finder: Option<BergeFinder>,
}

impl TripleSpace {
    fn new(n: usize, spec: ForbiddenSpec) -> Self {
        let universe = TripleSystem::complete(n).edges().to_vec();
        let finder = match &spec {
            ForbiddenSpec::BergePattern(g) | ForbiddenSpec::BergeMinusExpansion(g) => {
                Some(BergeFinder::new(g, n))
            }
            _ => None,
        };
        TripleSpace { n, universe, spec, finder }
    }

    fn edges_of(&self, chosen: &[usize]) -> Vec<Triple> {
        chosen.iter().map(|&i| self.universe[i]).collect()
    }
}

impl SearchSpace for TripleSpace {
    fn universe_len(&self) -> usize {
        self.universe.len()
    }

    fn extend_ok(&self, chosen: &[usize], new: usize) -> bool {
        let mut edges = self.edges_of(chosen);
        edges.push(self.universe[new]);
        let forced = edges.len() - 1;
        match &self.spec {
            ForbiddenSpec::BergePattern(_) => self
                .finder
                .as_ref()
                .unwrap()
                .find_with(&edges, Some(forced), DetectMode::Any)
                .is_none(),
            ForbiddenSpec::BergeMinusExpansion(_) => self
                .finder
                .as_ref()
                .unwrap()
                .find_with(&edges, Some(forced), DetectMode::NonExpansion)
                .is_none(),
            ForbiddenSpec::ExplicitPatterns(pats) => {
                let mut sorted = edges.clone();
                sorted.sort_unstable();
                !pats
                    .iter()
                    .any(|p| subsystem_with_forced(self.n, &sorted, p, self.universe[new]))
            }
            ForbiddenSpec::GraphClique(_) => unreachable!("graph specs use graph_max_edges"),
        }
    }

    fn final_ok(&self, chosen: &[usize]) -> bool {
        let edges = self.edges_of(chosen);
        match &self.spec {
            ForbiddenSpec::BergePattern(_) => self
                .finder
                .as_ref()
                .unwrap()
                .find_with(&edges, None, DetectMode::Any)
                .is_none(),
            ForbiddenSpec::BergeMinusExpansion(_) => self
                .finder
                .as_ref()
                .unwrap()
                .find_with(&edges, None, DetectMode::NonExpansion)
                .is_none(),
            ForbiddenSpec::ExplicitPatterns(pats) => {
                let sys = TripleSystem::new(self.n, edges).expect("chosen triples are distinct");
                !pats.iter().any(|p| contains_subsystem_bruteforce(&sys, p))
            }
            ForbiddenSpec::GraphClique(_) => unreachable!("graph specs use graph_max_edges"),
        }
    }

    fn canonical_key(&self, chosen: &[usize]) -> Option<Vec<u8>> {
        let edges = self.edges_of(chosen);
        if coset_rep_count(self.n, &edges) > 200_000 {
            return None;
        }
        Some(canonical_bytes(self.n, &edges))
    }

    fn seed(&self) -> Option<Vec<usize>> {
        match &self.spec {
            ForbiddenSpec::GraphClique(_) => None,
            _ => {
                let construction = crate::system::balanced_3partite(self.n);
                let indices: Vec<usize> = construction
                    .edges()
                    .iter()
                    .map(|t| self.universe.binary_search(t).expect("triple in universe"))
                    .collect();
                Some(indices)
            }
        }
    }
}

/// Does some injection of the pattern's vertices map every pattern triple
/// onto a host triple, with at least one landing on `forced`? `host` must be
/// sorted.
fn subsystem_with_forced(
    host_n: usize,
    host: &[Triple],
    pattern: &TripleSystem,
    forced: Triple,
) -> bool {
    let pk = pattern.n();
    if pk > host_n {
        return false;
    }
    for anchor in pattern.edges() {
        // All six ways to land this pattern triple on the forced one.
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for perm in perms {
            let mut map = vec![usize::MAX; pk];
            let mut used = vec![false; host_n];
            let mut ok = true;
            for slot in 0..3 {
                let (pv, hv) = (anchor[slot], forced[perm[slot]]);
                if map[pv] == usize::MAX && !used[hv] {
                    map[pv] = hv;
                    used[hv] = true;
                } else if map[pv] != hv {
                    ok = false;
                    break;
                }
            }
            if ok && extend_injection(host, pattern, &mut map, &mut used, 0) {
                return true;
            }
        }
    }
    false
}

fn extend_injection(
    host: &[Triple],
    pattern: &TripleSystem,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    from: usize,
) -> bool {
    let image_present = |map: &[usize], t: &Triple| {
        let mut img = [map[t[0]], map[t[1]], map[t[2]]];
        if img.contains(&usize::MAX) {
            return true;
        }
        img.sort_unstable();
        host.binary_search(&img).is_ok()
    };
    if !pattern.edges().iter().all(|t| image_present(map, t)) {
        return false;
    }
    match (from..map.len()).find(|&v| map[v] == usize::MAX) {
        None => true,
        Some(v) => {
            for hv in 0..used.len() {
                if !used[hv] {
                    map[v] = hv;
                    used[hv] = true;
                    if extend_injection(host, pattern, map, used, v + 1) {
                        map[v] = usize::MAX;
                        used[hv] = false;
                        return true;
                    }
                    map[v] = usize::MAX;
                    used[hv] = false;
                }
            }
            false
        }
    }
}

struct GraphSpace {
    m: usize,
    r: usize,
    universe: Vec<(usize, usize)>,
}

impl GraphSpace {
    fn new(m: usize, r: usize) -> Self {
        let mut universe = Vec::new();
        for u in 0..m {
            for v in u + 1..m {
                universe.push((u, v));
            }
        }
        GraphSpace { m, r, universe }
    }

    fn adjacency(&self, chosen: &[usize], extra: Option<usize>) -> Vec<u32> {
        let mut adj = vec![0u32; self.m];
        for &i in chosen.iter().chain(extra.iter()) {
            let (u, v) = self.universe[i];
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }
}

fn mask_has_clique(adj: &[u32], mut candidates: u32, size: usize) -> bool {
    if size == 0 {
        return true;
    }
    if (candidates.count_ones() as usize) < size {
        return false;
    }
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        if mask_has_clique(adj, candidates & adj[v], size - 1) {
            return true;
        }
    }
    false
}

impl SearchSpace for GraphSpace {
    fn universe_len(&self) -> usize {
        self.universe.len()
    }

    fn extend_ok(&self, chosen: &[usize], new: usize) -> bool {
        let adj = self.adjacency(chosen, Some(new));
        let (u, v) = self.universe[new];
        // A new clique of order r must use the new edge.
        !mask_has_clique(&adj, adj[u] & adj[v], self.r - 2)
    }

    fn final_ok(&self, chosen: &[usize]) -> bool {
        let adj = self.adjacency(chosen, None);
        let all = if self.m == 32 { u32::MAX } else { (1u32 << self.m) - 1 };
        !mask_has_clique(&adj, all, self.r)
    }

    fn canonical_key(&self, _chosen: &[usize]) -> Option<Vec<u8>> {
        None
    }

    fn seed(&self) -> Option<Vec<usize>> {
        let g = SimpleGraph::complete_multipartite(self.m, self.r - 1);
        let indices = g
            .edges()
            .iter()
            .map(|e| self.universe.binary_search(e).expect("pair in universe"))
            .collect();
        Some(indices)
    }
}

/// Certified maximum number of triples on `n` vertices avoiding `spec`.
pub fn max_edges(
    n: usize,
    spec: &ForbiddenSpec,
    cfg: &SearchConfig,
) -> Result<SearchResult, SearchError> {
    if n > MAX_SEARCH_N {
        return Err(SearchError::NTooLarge { n, max: MAX_SEARCH_N });
    }
    if matches!(spec, ForbiddenSpec::GraphClique(_)) {
        return Err(SearchError::SpecNeedsGraph);
    }
    let space = TripleSpace::new(n, spec.clone());
    let (value, witness_indices, exhausted, stats) = run_search(&space, cfg);
    let raw = TripleSystem::new(n, space.edges_of(&witness_indices))
        .expect("witness triples are distinct");
    let canonical = decode_canonical(&canonical_bytes(n, raw.edges()));
    let witness_indices_canonical: Vec<usize> = canonical
        .edges()
        .iter()
        .map(|t| space.universe.binary_search(t).expect("triple in universe"))
        .collect();
    assert!(
        space.final_ok(&witness_indices_canonical),
        "canonical relabeling must preserve feasibility"
    );
    assert_eq!(canonical.edge_count() as u64, value);
    Ok(SearchResult { value, witness: Witness::Triples(canonical), exhausted, stats })
}

/// Certified maximum number of edges of a simple graph on `m` vertices with
/// no clique of order `r`.
pub fn graph_max_edges(m: usize, r: usize, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    if m > MAX_GRAPH_M {
        return Err(SearchError::MTooLarge { m, max: MAX_GRAPH_M });
    }
    if r < 3 {
        return Err(SearchError::RTooSmall { r });
    }
    let space = GraphSpace::new(m, r);
    let (value, witness_indices, exhausted, stats) = run_search(&space, cfg);
    let edges: Vec<(usize, usize)> = witness_indices.iter().map(|&i| space.universe[i]).collect();
    let graph = SimpleGraph::new(m, edges);
    assert!(!graph.has_clique(r));
    assert_eq!(graph.edges().len() as u64, value);
    Ok(SearchResult { value, witness: Witness::Graph(graph), exhausted, stats })
}

/// Runs the search to exhaustion and checks the result against a claimed
/// extremal value, reporting the direction of any disagreement.
pub fn certify_extremal(
    n: usize,
    spec: &ForbiddenSpec,
    claimed: u64,
    cfg: &SearchConfig,
) -> Result<CertificationRecord, SearchError> {
    let result = max_edges(n, spec, cfg)?;
    if !result.exhausted {
        return Err(SearchError::BudgetExhausted {
            nodes: result.stats.nodes,
            best: result.value,
        });
    }
    if result.value > claimed {
        return Err(SearchError::RefutedLargerExists { claimed, actual: result.value });
    }
    if result.value < claimed {
        return Err(SearchError::RefutedNoWitness { claimed, actual: result.value });
    }
    let witness = match &result.witness {
        Witness::Triples(t) => t.edges().iter().map(|t| t.to_vec()).collect(),
        Witness::Graph(_) => unreachable!("triple searches produce triple witnesses"),
    };
    Ok(CertificationRecord {
        n,
        spec: spec.to_string(),
        value: result.value,
        witness,
        exhausted: true,
        nodes: result.stats.nodes,
        config: cfg.clone(),
    })
}

/// Lexicographically minimal edge-set bitstring over all vertex relabelings,
/// prefixed by the vertex count. Equal outputs exactly characterize
/// isomorphic systems with equal `n`.
pub fn canonical_form(h: &TripleSystem) -> Result<Vec<u8>, SearchError> {
    if h.n() > MAX_SEARCH_N {
        return Err(SearchError::NTooLarge { n: h.n(), max: MAX_SEARCH_N });
    }
    Ok(canonical_bytes(h.n(), h.edges()))
}

fn rank_table(n: usize) -> (Vec<Triple>, Vec<usize>) {
    let universe = TripleSystem::complete(n).edges().to_vec();
    let mut table = vec![usize::MAX; n * n * n];
    for (r, t) in universe.iter().enumerate() {
        table[(t[0] * n + t[1]) * n + t[2]] = r;
    }
    (universe, table)
}

/// Vertex classes whose members can be swapped without changing the edge
/// set. Restricting relabelings to be increasing inside each class keeps one
/// representative per equivalent relabeling.
fn twin_classes(n: usize, edges: &[Triple]) -> Vec<usize> {
    let mut degree = vec![0usize; n];
    for t in edges {
        for &v in t {
            degree[v] += 1;
        }
    }
    let swap_fixes = |a: usize, b: usize| {
        let image = |v: usize| {
            if v == a {
                b
            } else if v == b {
                a
            } else {
                v
            }
        };
        let mut mapped: Vec<Triple> = edges
            .iter()
            .map(|t| {
                let mut m = [image(t[0]), image(t[1]), image(t[2])];
                m.sort_unstable();
                m
            })
            .collect();
        mapped.sort_unstable();
        let mut original = edges.to_vec();
        original.sort_unstable();
        mapped == original
    };
    let mut class = (0..n).collect::<Vec<usize>>();
    for v in 0..n {
        for u in 0..v {
            if class[u] == u && degree[u] == degree[v] && swap_fixes(u, v) {
                class[v] = u;
                break;
            }
        }
    }
    class
}

fn coset_rep_count(n: usize, edges: &[Triple]) -> u128 {
    let class = twin_classes(n, edges);
    let mut sizes = vec![0u128; n];
    for v in 0..n {
        sizes[class[v]] += 1;
    }
    let mut count: u128 = 1;
    for k in 2..=n as u128 {
        count = count.saturating_mul(k);
    }
    for &s in &sizes {
        for k in 2..=s {
            count /= k;
        }
    }
    count
}

fn canonical_bytes(n: usize, edges: &[Triple]) -> Vec<u8> {
    assert!(n <= MAX_SEARCH_N, "canonical form needs n <= {MAX_SEARCH_N}");
    let (_, table) = rank_table(n);
    let class = twin_classes(n, edges);
    let mut best = u128::MAX;
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut last_image = vec![usize::MAX; n];
    fn assign(
        v: usize,
        n: usize,
        edges: &[Triple],
        table: &[usize],
        class: &[usize],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        last_image: &mut Vec<usize>,
        best: &mut u128,
    ) {
        if v == n {
            let mut mask: u128 = 0;
            for t in edges {
                let mut img = [perm[t[0]], perm[t[1]], perm[t[2]]];
                img.sort_unstable();
                mask |= 1u128 << table[(img[0] * n + img[1]) * n + img[2]];
            }
            if mask < *best {
                *best = mask;
            }
            return;
        }
        let root = class[v];
        let floor = if root == v { 0 } else { last_image[root].wrapping_add(1) };
        for image in floor..n {
            if !used[image] {
                used[image] = true;
                perm[v] = image;
                let saved = last_image[root];
                last_image[root] = image;
                assign(v + 1, n, edges, table, class, perm, used, last_image, best);
                last_image[root] = saved;
                used[image] = false;
            }
        }
    }
    assign(0, n, edges, &table, &class, &mut perm, &mut used, &mut last_image, &mut best);
    let mut bytes = Vec::with_capacity(17);
    bytes.push(n as u8);
    bytes.extend_from_slice(&best.to_le_bytes());
    bytes
}

fn decode_canonical(bytes: &[u8]) -> TripleSystem {
    let n = bytes[0] as usize;
    let mut le = [0u8; 16];
    le.copy_from_slice(&bytes[1..17]);
    let mask = u128::from_le_bytes(le);
    let universe = TripleSystem::complete(n).edges().to_vec();
    let edges = universe
        .into_iter()
        .enumerate()
        .filter(|(r, _)| mask >> r & 1 == 1)
        .map(|(_, t)| t);
    TripleSystem::new(n, edges).expect("canonical mask encodes distinct triples")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::{find_berge, is_berge_free, DetectMode};
    use crate::reference::{contains_berge_bruteforce, max_edges_bruteforce};
    use crate::system::balanced_3partite;

    fn k4_spec() -> ForbiddenSpec {
        ForbiddenSpec::BergePattern(PatternGraph::k4())
    }

    fn quiet() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn tiny_values_match_subset_enumeration() {
        for n in 3..=5 {
            for pattern in [PatternGraph::k3(), PatternGraph::k4()] {
                let spec = ForbiddenSpec::BergePattern(pattern.clone());
                let fast = max_edges(n, &spec, &quiet()).unwrap();
                let (slow, _) =
                    max_edges_bruteforce(n, |s| !contains_berge_bruteforce(s, &pattern));
                assert!(fast.exhausted);
                assert_eq!(fast.value, slow, "n = {n}, pattern k = {}", pattern.k());
            }
        }
    }

    #[test]
    fn frozen_small_table() {
        assert_eq!(max_edges(4, &k4_spec(), &quiet()).unwrap().value, 4);
        assert_eq!(max_edges(5, &k4_spec(), &quiet()).unwrap().value, 5);
        assert_eq!(max_edges(6, &k4_spec(), &quiet()).unwrap().value, 8);
        assert_eq!(
            max_edges(6, &ForbiddenSpec::BergePattern(PatternGraph::k3()), &quiet())
                .unwrap()
                .value,
            4
        );
    }

    #[test]
    fn expansion_exemption_matches_at_six() {
        let r = max_edges(6, &ForbiddenSpec::BergeMinusExpansion(PatternGraph::k4()), &quiet())
            .unwrap();
        assert!(r.exhausted);
        assert_eq!(r.value, 8);
    }

    #[test]
    fn witness_is_valid_and_canonical_sized() {
        let r = max_edges(6, &k4_spec(), &quiet()).unwrap();
        match &r.witness {
            Witness::Triples(t) => {
                assert_eq!(t.edge_count() as u64, r.value);
                assert!(is_berge_free(t, &PatternGraph::k4(), DetectMode::Any));
            }
            Witness::Graph(_) => panic!("triple search must give triples"),
        }
    }

    #[test]
    fn graph_turan_values() {
        for (m, expected) in [(3, 3), (4, 5), (5, 8), (6, 12)] {
            let r = graph_max_edges(m, 4, &quiet()).unwrap();
            assert!(r.exhausted);
            assert_eq!(r.value, expected, "m = {m}");
            match &r.witness {
                Witness::Graph(g) => assert!(!g.has_clique(4)),
                Witness::Triples(_) => panic!("graph search must give a graph"),
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            max_edges(11, &k4_spec(), &quiet()),
            Err(SearchError::NTooLarge { n: 11, .. })
        ));
        assert!(matches!(
            max_edges(5, &ForbiddenSpec::GraphClique(4), &quiet()),
            Err(SearchError::SpecNeedsGraph)
        ));
        assert!(matches!(
            graph_max_edges(13, 4, &quiet()),
            Err(SearchError::MTooLarge { m: 13, .. })
        ));
        assert!(matches!(graph_max_edges(5, 2, &quiet()), Err(SearchError::RTooSmall { r: 2 })));
        assert!(canonical_form(&TripleSystem::empty(11)).is_err());
    }

    #[test]
    fn value_is_worker_independent() {
        let mut four = quiet();
        four.workers = 4;
        let a = max_edges(6, &k4_spec(), &quiet()).unwrap();
        let b = max_edges(6, &k4_spec(), &four).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.exhausted, b.exhausted);
    }

    #[test]
    fn pruning_and_seeding_do_not_change_the_value() {
        let mut bare = quiet();
        bare.iso_depth = 0;
        bare.bound_pruning = false;
        bare.seed_construction = false;
        for n in 3..=5 {
            let a = max_edges(n, &k4_spec(), &quiet()).unwrap();
            let b = max_edges(n, &k4_spec(), &bare).unwrap();
            assert_eq!(a.value, b.value, "n = {n}");
        }
    }

    #[test]
    fn sandwich_and_monotonicity() {
        let mut prev = 0;
        for n in 3..=6 {
            let plain = max_edges(n, &k4_spec(), &quiet()).unwrap().value;
            let relaxed =
                max_edges(n, &ForbiddenSpec::BergeMinusExpansion(PatternGraph::k4()), &quiet())
                    .unwrap()
                    .value;
            assert!(relaxed >= plain, "n = {n}");
            assert!(plain >= prev, "n = {n}");
            prev = plain;
        }
    }

    #[test]
    fn budget_exhaustion_reports_partial_result() {
        let mut tight = quiet();
        tight.node_budget = Some(10);
        tight.seed_construction = false;
        let r = max_edges(6, &k4_spec(), &tight).unwrap();
        assert!(!r.exhausted);
        assert!(matches!(
            certify_extremal(6, &k4_spec(), 8, &tight),
            Err(SearchError::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn certification_outcomes() {
        let record = certify_extremal(5, &k4_spec(), 5, &quiet()).unwrap();
        assert_eq!(record.value, 5);
        assert!(record.exhausted);
        assert_eq!(record.witness.len(), 5);
        let json = serde_json::to_value(&record).unwrap();
        for key in ["n", "spec", "value", "witness", "exhausted", "nodes", "config"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }

        assert!(matches!(
            certify_extremal(6, &k4_spec(), 9, &quiet()),
            Err(SearchError::RefutedNoWitness { claimed: 9, actual: 8 })
        ));
        assert!(matches!(
            certify_extremal(6, &k4_spec(), 7, &quiet()),
            Err(SearchError::RefutedLargerExists { claimed: 7, actual: 8 })
        ));
    }

    #[test]
    fn explicit_pattern_search() {
        // Forbid three triples inside four vertices; on four vertices only
        // two triples survive.
        let span3 = TripleSystem::new(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3]]).unwrap();
        let spec = ForbiddenSpec::ExplicitPatterns(vec![span3]);
        let r = max_edges(4, &spec, &quiet()).unwrap();
        assert!(r.exhausted);
        assert_eq!(r.value, 2);
    }

    #[test]
    fn canonical_form_examples() {
        let single_a = TripleSystem::new(4, [[0, 1, 2]]).unwrap();
        let single_b = TripleSystem::new(4, [[1, 2, 3]]).unwrap();
        assert_eq!(canonical_form(&single_a).unwrap(), canonical_form(&single_b).unwrap());

        let shared_pair = TripleSystem::new(5, [[0, 1, 2], [0, 1, 3]]).unwrap();
        let disjoint_pairs = TripleSystem::new(5, [[0, 1, 2], [0, 3, 4]]).unwrap();
        assert_ne!(
            canonical_form(&shared_pair).unwrap(),
            canonical_form(&disjoint_pairs).unwrap()
        );
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        let h = balanced_3partite(6);
        let base = canonical_form(&h).unwrap();
        let mut perm = [0, 1, 2, 3, 4, 5];
        // Heap-style enumeration over all 720 permutations.
        fn heaps(k: usize, arr: &mut [usize; 6], visit: &mut impl FnMut(&[usize; 6])) {
            if k == 1 {
                visit(arr);
                return;
            }
            for i in 0..k {
                heaps(k - 1, arr, visit);
                if k % 2 == 0 {
                    arr.swap(i, k - 1);
                } else {
                    arr.swap(0, k - 1);
                }
            }
        }
        let mut count = 0usize;
        heaps(6, &mut perm, &mut |p| {
            let relabeled = h.relabel(p);
            assert_eq!(canonical_form(&relabeled).unwrap(), base);
            count += 1;
        });
        assert_eq!(count, 720);
    }

    #[test]
    fn canonical_decode_round_trip() {
        let h = TripleSystem::new(6, [[0, 1, 2], [1, 2, 3], [3, 4, 5]]).unwrap();
        let bytes = canonical_bytes(h.n(), h.edges());
        let decoded = decode_canonical(&bytes);
        assert_eq!(canonical_bytes(decoded.n(), decoded.edges()), bytes);
        assert_eq!(decoded.edge_count(), h.edge_count());
    }

    #[test]
    fn searched_witness_contains_no_forbidden_copy_even_unseeded() {
        let mut cfg = quiet();
        cfg.seed_construction = false;
        let r = max_edges(5, &k4_spec(), &cfg).unwrap();
        assert_eq!(r.value, 5);
        if let Witness::Triples(t) = &r.witness {
            assert!(find_berge(t, &PatternGraph::k4(), DetectMode::Any).is_none());
        }
    }
}
