//! Labeled trace multigraphs.
//!
//! Fixing an anchor set `A` of host vertices, each triple meeting `A` in two
//! vertices becomes a loop on its third vertex labeled by the pair, and each
//! triple meeting `A` in one vertex becomes a link between its other two
//! vertices labeled by the singleton. The module carries the derived
//! structure used to reason about hosts that avoid Berge copies of K4:
//! surplus counts, the simple reduction, blocks of the surplus subgraph,
//! good/bad components, a taxonomy of bad components, label-partition and
//! representative checks, and an exact-rational bound report.

use crate::detect::AnchoredTriangle;
use crate::system::{SimpleGraph, Triple, TripleSystem};
use num::rational::Ratio;
use num::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;
use thiserror::Error;

/// Exact rational scalar for all inequality arithmetic.
pub type Rat = Ratio<i128>;

fn rat_string<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("anchor set is empty")]
    EmptyAnchor,
    #[error("anchor set covers all {n} vertices")]
    FullAnchor { n: usize },
    #[error("anchor vertex {vertex} out of range for n = {n}")]
    AnchorOutOfRange { vertex: usize, n: usize },
    #[error("anchor vertex {vertex} repeated")]
    RepeatedAnchor { vertex: usize },
    #[error("endpoint {vertex} is not an outer vertex")]
    BadEndpoint { vertex: usize },
    #[error("label vertex {vertex} is not in the anchor set")]
    LabelOutsideCore { vertex: usize },
    #[error("degenerate loop label or link endpoints")]
    DegenerateEdge,
    #[error("parallel edges must carry distinct labels")]
    DuplicateParallelLabel,
    #[error("operation needs an anchor set of size 3, got {len}")]
    CoreSizeNotThree { len: usize },
    #[error("anchored vertex {vertex} is not an outer vertex of the trace")]
    AnchorVertexNotOuter { vertex: usize },
    #[error("anchored triangle labels do not match the trace anchor set")]
    AnchorMismatch,
    #[error("{what} out of range")]
    ValueOutOfRange { what: &'static str },
}

/// Loop on an outer vertex, labeled by two anchor vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LabeledLoop {
    #[serde(rename = "v")]
    pub vertex: usize,
    pub label: [usize; 2],
}

impl LabeledLoop {
    pub fn new(vertex: usize, a: usize, b: usize) -> Self {
        LabeledLoop { vertex, label: [a.min(b), a.max(b)] }
    }
}

/// Link between two outer vertices, labeled by one anchor vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LabeledLink {
    pub u: usize,
    pub v: usize,
    pub label: [usize; 1],
}

impl LabeledLink {
    pub fn new(u: usize, v: usize, label: usize) -> Self {
        LabeledLink { u: u.min(v), v: u.max(v), label: [label] }
    }

    pub fn other_end(&self, v: usize) -> usize {
        if v == self.u {
            self.v
        } else {
            self.u
        }
    }

    /// The host triple this link came from.
    pub fn source_triple(&self) -> Triple {
        let mut t = [self.u, self.v, self.label[0]];
        t.sort_unstable();
        t
    }
}

/// Trace of a triple system over an anchor set. Parallel loops and links are
/// stored as individual instances; parallel instances carry distinct labels,
/// so multiplicities never exceed the number of available labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceMultigraph {
    n: usize,
    core: Vec<usize>,
    outer: Vec<usize>,
    loops: Vec<LabeledLoop>,
    links: Vec<LabeledLink>,
}

/// Connected piece of a trace (links connect, loops do not), with its
/// surplus. Bad means the surplus exceeds the vertex count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub surplus: usize,
    pub bad: bool,
}

/// Shape of a bad component relative to the anchored vertices `x`, `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BadComponentClass {
    /// Three loops on `x` itself (forces `y == x`).
    TripleLoop,
    /// Double loop on `x` plus `m - 1 >= 2` double edges to otherwise
    /// untouched, pairwise non-adjacent vertices; the value is `m`.
    MStar(usize),
    /// Two loops on a single otherwise isolated vertex.
    DoubleLoop,
    /// A double edge whose two endpoints carry either one loop each or a
    /// double loop on one end.
    Dumbbell,
    Other,
}

/// Partition of the outer vertices other than `x`, `y` according to the
/// union of labels on their incident loops and links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZPartition {
    core: [usize; 3],
    x: usize,
    y: usize,
    classes: Vec<(Vec<usize>, Vec<usize>)>,
}

impl ZPartition {
    pub fn core(&self) -> [usize; 3] {
        self.core
    }

    /// All eight classes, keyed by sorted label subsets in (size, lex) order.
    pub fn classes(&self) -> &[(Vec<usize>, Vec<usize>)] {
        &self.classes
    }

    pub fn vertices_in(&self, label_set: &[usize]) -> &[usize] {
        self.classes
            .iter()
            .find(|(l, _)| l == label_set)
            .map(|(_, vs)| vs.as_slice())
            .unwrap_or(&[])
    }

    pub fn class_of(&self, v: usize) -> Option<&[usize]> {
        self.classes
            .iter()
            .find(|(_, vs)| vs.binary_search(&v).is_ok())
            .map(|(l, _)| l.as_slice())
    }

    pub fn z_vertices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.classes.iter().flat_map(|(_, vs)| vs.iter().copied()).collect();
        out.sort_unstable();
        out
    }
}

fn validate_anchor_set(n: usize, core: &[usize]) -> Result<Vec<usize>, TraceError> {
    if core.is_empty() {
        return Err(TraceError::EmptyAnchor);
    }
    for &v in core {
        if v >= n {
            return Err(TraceError::AnchorOutOfRange { vertex: v, n });
        }
    }
    let mut sorted = core.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(TraceError::RepeatedAnchor { vertex: w[0] });
        }
    }
    if sorted.len() >= n {
        return Err(TraceError::FullAnchor { n });
    }
    Ok(sorted)
}

impl TraceMultigraph {
    /// Builds the trace of `h` over the anchor set `core`. Triples meeting
    /// the anchor set in zero or three vertices contribute nothing.
    pub fn from_system(h: &TripleSystem, core: &[usize]) -> Result<Self, TraceError> {
        let n = h.n();
        let core = validate_anchor_set(n, core)?;
        let in_core = |v: usize| core.binary_search(&v).is_ok();
        let outer: Vec<usize> = (0..n).filter(|&v| !in_core(v)).collect();
        let mut loops = Vec::new();
        let mut links = Vec::new();
        for t in h.edges() {
            let (mut inside, mut outside) = (Vec::new(), Vec::new());
            for &v in t {
                if in_core(v) {
                    inside.push(v);
                } else {
                    outside.push(v);
                }
            }
            match inside.len() {
                2 => loops.push(LabeledLoop::new(outside[0], inside[0], inside[1])),
                1 => links.push(LabeledLink::new(outside[0], outside[1], inside[0])),
                _ => {}
            }
        }
        loops.sort_unstable();
        links.sort_unstable();
        Ok(TraceMultigraph { n, core, outer, loops, links })
    }

    /// Assembles a trace directly from parts, enforcing the same invariants
    /// a system-derived trace satisfies.
    pub fn new(
        n: usize,
        core: &[usize],
        loops: impl IntoIterator<Item = LabeledLoop>,
        links: impl IntoIterator<Item = LabeledLink>,
    ) -> Result<Self, TraceError> {
        let core = validate_anchor_set(n, core)?;
        let in_core = |v: usize| core.binary_search(&v).is_ok();
        let outer: Vec<usize> = (0..n).filter(|&v| !in_core(v)).collect();
        let is_outer = |v: usize| v < n && !in_core(v);
        let mut loops: Vec<LabeledLoop> =
            loops.into_iter().map(|l| LabeledLoop::new(l.vertex, l.label[0], l.label[1])).collect();
        let mut links: Vec<LabeledLink> =
            links.into_iter().map(|l| LabeledLink::new(l.u, l.v, l.label[0])).collect();
        for l in &loops {
            if !is_outer(l.vertex) {
                return Err(TraceError::BadEndpoint { vertex: l.vertex });
            }
            if l.label[0] == l.label[1] {
                return Err(TraceError::DegenerateEdge);
            }
            for &c in &l.label {
                if !in_core(c) {
                    return Err(TraceError::LabelOutsideCore { vertex: c });
                }
            }
        }
        for l in &links {
            if l.u == l.v {
                return Err(TraceError::DegenerateEdge);
            }
            for v in [l.u, l.v] {
                if !is_outer(v) {
                    return Err(TraceError::BadEndpoint { vertex: v });
                }
            }
            if !in_core(l.label[0]) {
                return Err(TraceError::LabelOutsideCore { vertex: l.label[0] });
            }
        }
        loops.sort_unstable();
        links.sort_unstable();
        if loops.windows(2).any(|w| w[0] == w[1]) || links.windows(2).any(|w| w[0] == w[1]) {
            return Err(TraceError::DuplicateParallelLabel);
        }
        Ok(TraceMultigraph { n, core, outer, loops, links })
    }

    /// Number of host vertices (anchored and outer together).
    pub fn host_n(&self) -> usize {
        self.n
    }

    pub fn core(&self) -> &[usize] {
        &self.core
    }

    /// Vertex set of the trace, in increasing order.
    pub fn outer(&self) -> &[usize] {
        &self.outer
    }

    pub fn loops(&self) -> &[LabeledLoop] {
        &self.loops
    }

    pub fn links(&self) -> &[LabeledLink] {
        &self.links
    }

    /// Loops plus link instances.
    pub fn total_size(&self) -> usize {
        self.loops.len() + self.links.len()
    }

    pub fn loop_multiplicity(&self, v: usize) -> usize {
        self.loops.iter().filter(|l| l.vertex == v).count()
    }

    pub fn link_multiplicity(&self, u: usize, v: usize) -> usize {
        let (u, v) = (u.min(v), u.max(v));
        self.links.iter().filter(|l| l.u == u && l.v == v).count()
    }

    pub fn loops_at(&self, v: usize) -> Vec<LabeledLoop> {
        self.loops.iter().filter(|l| l.vertex == v).copied().collect()
    }

    pub fn links_at(&self, v: usize) -> Vec<LabeledLink> {
        self.links.iter().filter(|l| l.u == v || l.v == v).copied().collect()
    }

    fn distinct_link_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = self.links.iter().map(|l| (l.u, l.v)).collect();
        pairs.dedup();
        pairs
    }

    /// Loop count plus the excess of parallel links over distinct pairs.
    pub fn surplus(&self) -> usize {
        self.loops.len() + self.links.len() - self.distinct_link_pairs().len()
    }

    /// Simple graph on the host vertex set keeping one edge per linked pair
    /// and dropping loops; anchor vertices end up isolated. Its edge count
    /// is `total_size() - surplus()`.
    pub fn simple_reduction(&self) -> SimpleGraph {
        SimpleGraph::new(self.n, self.distinct_link_pairs())
    }

    /// Restriction to a subset of the outer vertices, keeping only loops and
    /// links with all endpoints inside.
    pub fn induced(&self, vertices: &[usize]) -> TraceMultigraph {
        let mut keep: Vec<usize> = vertices
            .iter()
            .copied()
            .filter(|v| self.outer.binary_search(v).is_ok())
            .collect();
        keep.sort_unstable();
        keep.dedup();
        let inside = |v: usize| keep.binary_search(&v).is_ok();
        TraceMultigraph {
            n: self.n,
            core: self.core.clone(),
            outer: keep.clone(),
            loops: self.loops.iter().filter(|l| inside(l.vertex)).copied().collect(),
            links: self.links.iter().filter(|l| inside(l.u) && inside(l.v)).copied().collect(),
        }
    }

    /// The sub-multigraph keeping every loop and every link that has a
    /// parallel partner, on the full vertex set.
    pub fn surplus_subgraph(&self) -> TraceMultigraph {
        let links: Vec<LabeledLink> = self
            .links
            .iter()
            .filter(|l| self.link_multiplicity(l.u, l.v) >= 2)
            .copied()
            .collect();
        TraceMultigraph {
            n: self.n,
            core: self.core.clone(),
            outer: self.outer.clone(),
            loops: self.loops.clone(),
            links,
        }
    }

    /// Connected components; links connect, loops and labels do not.
    /// Isolated vertices form singleton components.
    pub fn components(&self) -> Vec<Component> {
        let index_of = |v: usize| self.outer.binary_search(&v).expect("outer vertex");
        let mut parent: Vec<usize> = (0..self.outer.len()).collect();
        fn find(parent: &mut [usize], mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        for l in &self.links {
            let (a, b) = (index_of(l.u), index_of(l.v));
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); self.outer.len()];
        for i in 0..self.outer.len() {
            let r = find(&mut parent, i);
            groups[r].push(self.outer[i]);
        }
        groups
            .into_iter()
            .filter(|g| !g.is_empty())
            .map(|vertices| {
                let surplus = self.induced(&vertices).surplus();
                let bad = surplus > vertices.len();
                Component { vertices, surplus, bad }
            })
            .collect()
    }

    /// Components of the surplus subgraph, flagged by the same
    /// surplus-versus-size rule.
    pub fn blocks(&self) -> Vec<Component> {
        self.surplus_subgraph().components()
    }

    /// Splits the outer vertices other than `x` and `y` by the union of the
    /// labels on their incident loops and links. Requires an anchor set of
    /// size 3; `x == y` is allowed.
    pub fn z_partition(&self, x: usize, y: usize) -> Result<ZPartition, TraceError> {
        if self.core.len() != 3 {
            return Err(TraceError::CoreSizeNotThree { len: self.core.len() });
        }
        for v in [x, y] {
            if self.outer.binary_search(&v).is_err() {
                return Err(TraceError::AnchorVertexNotOuter { vertex: v });
            }
        }
        let core = [self.core[0], self.core[1], self.core[2]];
        let subsets = label_subsets(core);
        let mut classes: Vec<(Vec<usize>, Vec<usize>)> =
            subsets.into_iter().map(|s| (s, Vec::new())).collect();
        for &z in &self.outer {
            if z == x || z == y {
                continue;
            }
            let mut union = BTreeSet::new();
            for l in &self.loops {
                if l.vertex == z {
                    union.extend(l.label);
                }
            }
            for l in &self.links {
                if l.u == z || l.v == z {
                    union.insert(l.label[0]);
                }
            }
            let key: Vec<usize> = union.into_iter().collect();
            classes
                .iter_mut()
                .find(|(l, _)| *l == key)
                .expect("label union is a subset of the anchor set")
                .1
                .push(z);
        }
        Ok(ZPartition { core, x, y, classes })
    }
}

fn label_subsets(core: [usize; 3]) -> Vec<Vec<usize>> {
    let [a, b, c] = core;
    vec![
        vec![],
        vec![a],
        vec![b],
        vec![c],
        vec![a, b],
        vec![a, c],
        vec![b, c],
        vec![a, b, c],
    ]
}

/// Matches a bad component against the known shapes. Location matters: three
/// loops or a star center must sit on `x` itself with `y == x`; double loops
/// and dumbbells may appear anywhere. Anything else is `Other`.
pub fn classify_bad_component(
    t: &TraceMultigraph,
    comp: &Component,
    x: usize,
    y: usize,
) -> BadComponentClass {
    let vs = &comp.vertices;
    match vs.len() {
        1 => {
            let v = vs[0];
            let loops = t.loop_multiplicity(v);
            let clean = t.links_at(v).is_empty();
            if v == x && y == x && loops == 3 && clean {
                BadComponentClass::TripleLoop
            } else if loops == 2 && clean {
                BadComponentClass::DoubleLoop
            } else {
                BadComponentClass::Other
            }
        }
        2 => {
            let (u, v) = (vs[0], vs[1]);
            let double_edge = t.link_multiplicity(u, v) == 2
                && t.links_at(u).len() == 2
                && t.links_at(v).len() == 2;
            let loop_shape = matches!(
                (t.loop_multiplicity(u), t.loop_multiplicity(v)),
                (1, 1) | (2, 0) | (0, 2)
            );
            if double_edge && loop_shape {
                BadComponentClass::Dumbbell
            } else {
                BadComponentClass::Other
            }
        }
        m => {
            if !(y == x && vs.contains(&x)) || t.loop_multiplicity(x) != 2 {
                return BadComponentClass::Other;
            }
            let leaves: Vec<usize> = vs.iter().copied().filter(|&v| v != x).collect();
            if t.links_at(x).len() != 2 * leaves.len() {
                return BadComponentClass::Other;
            }
            for &z in &leaves {
                if t.loop_multiplicity(z) != 0
                    || t.link_multiplicity(x, z) != 2
                    || t.links_at(z).len() != 2
                {
                    return BadComponentClass::Other;
                }
            }
            for (i, &z1) in leaves.iter().enumerate() {
                for &z2 in &leaves[i + 1..] {
                    if t.link_multiplicity(z1, z2) != 0 {
                        return BadComponentClass::Other;
                    }
                }
            }
            BadComponentClass::MStar(m)
        }
    }
}

/// Three link instances at one vertex whose labels admit distinct
/// representatives, with the representative choice and the host triples the
/// links came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SdrViolation {
    pub z: usize,
    pub links: [LabeledLink; 3],
    pub representatives: [usize; 3],
    pub triples: [Triple; 3],
}

fn anchor_against_trace(t: &TraceMultigraph, anchor: &AnchoredTriangle) -> Result<(), TraceError> {
    if t.core().len() != 3 {
        return Err(TraceError::CoreSizeNotThree { len: t.core().len() });
    }
    let mut labels = anchor.labels;
    labels.sort_unstable();
    if labels != [t.core()[0], t.core()[1], t.core()[2]] {
        return Err(TraceError::AnchorMismatch);
    }
    for v in [anchor.x, anchor.y] {
        if t.outer().binary_search(&v).is_err() {
            return Err(TraceError::AnchorVertexNotOuter { vertex: v });
        }
    }
    Ok(())
}

fn distinct_representatives(labels: [&[usize]; 3]) -> Option<[usize; 3]> {
    for &r0 in labels[0] {
        for &r1 in labels[1] {
            for &r2 in labels[2] {
                if r0 != r1 && r0 != r2 && r1 != r2 {
                    return Some([r0, r1, r2]);
                }
            }
        }
    }
    None
}

/// Hunts for three distinct links at one vertex of `Z` whose labels admit a
/// system of distinct representatives. Such a configuration combined with
/// the anchored triangle spans a Berge copy of K4, so hosts free of those
/// yield an empty list.
pub fn check_no_sdr(
    t: &TraceMultigraph,
    anchor: &AnchoredTriangle,
) -> Result<Vec<SdrViolation>, TraceError> {
    anchor_against_trace(t, anchor)?;
    let mut out = Vec::new();
    for &z in t.outer() {
        if z == anchor.x || z == anchor.y {
            continue;
        }
        let at = t.links_at(z);
        for i in 0..at.len() {
            for j in i + 1..at.len() {
                for k in j + 1..at.len() {
                    let trio = [at[i], at[j], at[k]];
                    if let Some(reps) =
                        distinct_representatives([&trio[0].label, &trio[1].label, &trio[2].label])
                    {
                        out.push(SdrViolation {
                            z,
                            links: trio,
                            representatives: reps,
                            triples: [
                                trio[0].source_triple(),
                                trio[1].source_triple(),
                                trio[2].source_triple(),
                            ],
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Structural defect relative to the multiplicity properties that hold in
/// hosts without Berge copies of K4.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MultiplicityViolation {
    /// A vertex of `Z` carrying three or more loops.
    ExcessLoops { vertex: usize, multiplicity: usize },
    /// A pair inside `Z` joined by three or more parallel links.
    ExcessLinks { u: usize, v: usize, multiplicity: usize },
    /// A double loop in `Z` whose vertex also meets a link.
    DoubleLoopNotIsolated { vertex: usize, link: LabeledLink },
    /// A multi-edge inside `Z` whose endpoints do not share a two-label
    /// class.
    MultiEdgeOutsidePairClass {
        u: usize,
        v: usize,
        class_u: Vec<usize>,
        class_v: Vec<usize>,
    },
    /// Extra loop on the far endpoint of two incident double edges lying in
    /// one two-label class.
    StarEndpointExtraLoop {
        path: [usize; 3],
        endpoint: usize,
        label: [usize; 2],
    },
    /// Extra link on the far endpoint of two incident double edges lying in
    /// one two-label class.
    StarEndpointExtraLink {
        path: [usize; 3],
        endpoint: usize,
        link: LabeledLink,
    },
}

/// Checks the four multiplicity properties of traces of hosts without Berge
/// copies of K4: loop and in-`Z` link multiplicities at most two, double
/// loops in `Z` isolated, multi-edges inside `Z` confined to one two-label
/// class, and far endpoints of incident double edges in one class carrying
/// nothing else.
pub fn check_multiplicity_props(
    t: &TraceMultigraph,
    anchor: &AnchoredTriangle,
) -> Result<Vec<MultiplicityViolation>, TraceError> {
    anchor_against_trace(t, anchor)?;
    let zp = t.z_partition(anchor.x, anchor.y)?;
    let z: Vec<usize> = zp.z_vertices();
    let in_z = |v: usize| z.binary_search(&v).is_ok();
    let mut out = Vec::new();

    for &v in &z {
        let mult = t.loop_multiplicity(v);
        if mult >= 3 {
            out.push(MultiplicityViolation::ExcessLoops { vertex: v, multiplicity: mult });
        }
        if mult == 2 {
            if let Some(&link) = t.links_at(v).first() {
                out.push(MultiplicityViolation::DoubleLoopNotIsolated { vertex: v, link });
            }
        }
    }

    let mut pairs: Vec<(usize, usize)> = t.links().iter().map(|l| (l.u, l.v)).collect();
    pairs.dedup();
    for &(u, v) in &pairs {
        if !(in_z(u) && in_z(v)) {
            continue;
        }
        let mult = t.link_multiplicity(u, v);
        if mult >= 3 {
            out.push(MultiplicityViolation::ExcessLinks { u, v, multiplicity: mult });
        }
        if mult >= 2 {
            let cu = zp.class_of(u).unwrap_or(&[]).to_vec();
            let cv = zp.class_of(v).unwrap_or(&[]).to_vec();
            if cu != cv || cu.len() != 2 {
                out.push(MultiplicityViolation::MultiEdgeOutsidePairClass {
                    u,
                    v,
                    class_u: cu,
                    class_v: cv,
                });
            }
        }
    }

    let doubles: Vec<(usize, usize)> = pairs
        .iter()
        .copied()
        .filter(|&(u, v)| in_z(u) && in_z(v) && t.link_multiplicity(u, v) == 2)
        .collect();
    for (i, &(a1, b1)) in doubles.iter().enumerate() {
        for &(a2, b2) in &doubles[i + 1..] {
            let (v1, v2, v3) = if a1 == a2 {
                (b1, a1, b2)
            } else if a1 == b2 {
                (b1, a1, a2)
            } else if b1 == a2 {
                (a1, b1, b2)
            } else if b1 == b2 {
                (a1, b1, a2)
            } else {
                continue;
            };
            let same_pair_class = match (zp.class_of(v1), zp.class_of(v2), zp.class_of(v3)) {
                (Some(c1), Some(c2), Some(c3)) => c1 == c2 && c2 == c3 && c1.len() == 2,
                _ => false,
            };
            if !same_pair_class {
                continue;
            }
            for (endpoint, center) in [(v1, v2), (v3, v2)] {
                for l in t.loops_at(endpoint) {
                    let v = MultiplicityViolation::StarEndpointExtraLoop {
                        path: [v1, v2, v3],
                        endpoint,
                        label: l.label,
                    };
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
                for link in t.links_at(endpoint) {
                    if link.other_end(endpoint) != center {
                        let v = MultiplicityViolation::StarEndpointExtraLink {
                            path: [v1, v2, v3],
                            endpoint,
                            link,
                        };
                        if !out.contains(&v) {
                            out.push(v);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Counting fact valid for arbitrary traces: a component whose surplus
/// exceeds its size must contain a block with the same defect.
pub fn check_bad_components_have_bad_block(t: &TraceMultigraph) -> bool {
    let blocks = t.blocks();
    t.components().iter().filter(|c| c.bad).all(|c| {
        blocks
            .iter()
            .any(|q| q.bad && q.vertices.iter().all(|v| c.vertices.binary_search(v).is_ok()))
    })
}

/// Exact-rational bookkeeping for the edge-count argument. Everything is
/// reported, nothing asserted: on arbitrary hosts some inequalities can
/// legitimately fail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    /// Host vertex count.
    pub n: usize,
    /// 1 for a triple loop on `x`, the star size for a star on `x`, else 0.
    pub m: usize,
    /// Bad components classified as double loops.
    pub p: usize,
    /// Bad components classified as dumbbells.
    pub q: usize,
    /// Bad components matching no known shape.
    pub other_bad: usize,
    /// 2 when `m == 1`, otherwise 1.
    pub rho: usize,
    /// `(m + p + 2q) / (n - 3)`.
    #[serde(serialize_with = "rat_string")]
    pub alpha: Rat,
    /// Outer vertices not covered by the classified bad components; its size
    /// is `n - 3 - (m + p + 2q)`.
    pub uncovered: Vec<usize>,
    /// Surplus of the whole trace.
    pub surplus_total: usize,
    /// Sum of surpluses over all bad components.
    pub bad_surplus: usize,
    /// `bad_surplus + |uncovered|`.
    pub surplus_bound_rhs: usize,
    /// Whether `surplus_total <= surplus_bound_rhs`.
    pub surplus_inequality_holds: bool,
    /// `3 (f(n) - f(n-1)) - (n - 3 + (m - 1 + rho + p + 2q))`.
    #[serde(serialize_with = "rat_string")]
    pub m_bound: Rat,
    /// Edges of the simple reduction induced on the uncovered vertices.
    pub reduced_edges_in_u: usize,
    /// Whether `reduced_edges_in_u >= m_bound`.
    pub edge_bound_holds: bool,
    #[serde(serialize_with = "rat_string")]
    pub turan_lhs: Rat,
    /// `|uncovered|^2 / 3`.
    #[serde(serialize_with = "rat_string")]
    pub turan_rhs: Rat,
    /// Whether `turan_lhs >= turan_rhs`; together with the edge bound this
    /// forces a K4 in the reduced graph on the uncovered vertices.
    pub turan_comparison_holds: bool,
}

/// Builds the trace of `h` over the anchor labels and reports the counting
/// argument's quantities for it.
pub fn bound_report(h: &TripleSystem, anchor: &AnchoredTriangle) -> Result<BoundReport, TraceError> {
    let mut labels = anchor.labels.to_vec();
    labels.sort_unstable();
    let t = TraceMultigraph::from_system(h, &labels)?;
    bound_report_from_trace(&t, anchor)
}

pub fn bound_report_from_trace(
    t: &TraceMultigraph,
    anchor: &AnchoredTriangle,
) -> Result<BoundReport, TraceError> {
    anchor_against_trace(t, anchor)?;
    let n = t.host_n();
    let (x, y) = (anchor.x, anchor.y);

    let mut m = 0usize;
    let mut p = 0usize;
    let mut q = 0usize;
    let mut other_bad = 0usize;
    let mut covered: Vec<usize> = Vec::new();
    let mut bad_surplus = 0usize;
    for comp in t.components() {
        if !comp.bad {
            continue;
        }
        bad_surplus += comp.surplus;
        match classify_bad_component(t, &comp, x, y) {
            BadComponentClass::TripleLoop => {
                m = 1;
                covered.extend(&comp.vertices);
            }
            BadComponentClass::MStar(size) => {
                m = size;
                covered.extend(&comp.vertices);
            }
            BadComponentClass::DoubleLoop => {
                p += 1;
                covered.extend(&comp.vertices);
            }
            BadComponentClass::Dumbbell => {
                q += 1;
                covered.extend(&comp.vertices);
            }
            BadComponentClass::Other => other_bad += 1,
        }
    }
    covered.sort_unstable();
    let uncovered: Vec<usize> =
        t.outer().iter().copied().filter(|v| covered.binary_search(v).is_err()).collect();
    debug_assert_eq!(uncovered.len(), n - 3 - (m + p + 2 * q));

    let rho = if m == 1 { 2 } else { 1 };
    let denom = (n - 3) as i128;
    let alpha = if denom == 0 {
        Rat::zero()
    } else {
        Rat::new((m + p + 2 * q) as i128, denom)
    };
    let surplus_total = t.surplus();
    let surplus_bound_rhs = bad_surplus + uncovered.len();

    let diff_n = Rat::from_integer(crate::system::diff(n) as i128);
    let m_bound = Rat::from_integer(3) * diff_n
        - Rat::from_integer(denom + (m as i128 - 1 + rho as i128 + p as i128 + 2 * q as i128));
    let reduced_edges_in_u = t.simple_reduction().induced_edge_count(&uncovered);
    let turan_rhs = Rat::new((uncovered.len() * uncovered.len()) as i128, 3);

    Ok(BoundReport {
        n,
        m,
        p,
        q,
        other_bad,
        rho,
        alpha,
        uncovered,
        surplus_total,
        bad_surplus,
        surplus_bound_rhs,
        surplus_inequality_holds: surplus_total <= surplus_bound_rhs,
        m_bound,
        reduced_edges_in_u,
        edge_bound_holds: Rat::from_integer(reduced_edges_in_u as i128) >= m_bound,
        turan_lhs: m_bound,
        turan_rhs,
        turan_comparison_holds: m_bound >= turan_rhs,
    })
}

/// `9 (f(n) - f(n-1)) - 3 (1 + alpha)(n - 3) - (1 - alpha)^2 (n - 3)^2 - 3`,
/// exactly.
pub fn toomany(n: usize, alpha: Rat) -> Result<Rat, TraceError> {
    if n < 6 {
        return Err(TraceError::ValueOutOfRange { what: "n (must be at least 6)" });
    }
    if alpha.is_negative() || alpha > Rat::one() {
        return Err(TraceError::ValueOutOfRange { what: "alpha (must lie in [0, 1])" });
    }
    let d = Rat::from_integer(crate::system::diff(n) as i128);
    let span = Rat::from_integer((n - 3) as i128);
    let one = Rat::one();
    Ok(Rat::from_integer(9) * d
        - Rat::from_integer(3) * (one + alpha) * span
        - (one - alpha) * (one - alpha) * span * span
        - Rat::from_integer(3))
}

/// Verifies non-negativity of [`toomany`] for every `n` in `[6, n_max]`.
/// The expression is quadratic in alpha with non-positive leading
/// coefficient, so checking the endpoints suffices; a 101-point grid pass
/// confirms the reduction by agreeing on the minimum.
pub fn check_toomany(n_max: usize) -> bool {
    for n in 6..=n_max {
        let at0 = toomany(n, Rat::zero()).expect("alpha 0 valid");
        let at1 = toomany(n, Rat::one()).expect("alpha 1 valid");
        let endpoint_min = at0.min(at1);
        if endpoint_min < Rat::zero() {
            return false;
        }
        let grid_min = (0..=100)
            .map(|k| toomany(n, Rat::new(k, 100)).expect("grid alpha valid"))
            .min()
            .expect("grid nonempty");
        if grid_min != endpoint_min {
            return false;
        }
    }
    true
}
