//! Additive-spanner instances built from Min-Rep, with completeness
//! witnesses, canonicalization and cover extraction.
//!
//! Copy indices `i` run over `0..x`; layer indices `j` along outer, ladder,
//! chain, middle and tail paths are 1-based.

mod canonical;
mod minrep;
mod plus1;
mod plusk;
mod soundness;
mod ugraph;

use std::collections::BTreeMap;
use std::fmt::{self, Write};

use crate::error::{Error, Result};
use crate::graph::{Dist, EdgeId};

pub use canonical::{canonicalize, extract_covers, has_canonical_path, is_canonical, Canonicalized, Charge};
pub use minrep::{min_rep, minrep_yes, random_minrep, rep_cover_verify, MinRepInstance, RepCover};
pub use plus1::{completeness_witness_plus1, plus1_counts, plus1_size_bound, reduce_plus1};
pub use plusk::{completeness_witness_plusk, plusk_counts, plusk_size_bound, reduce_plusk};
pub use soundness::{greedy_minimal_spanner, soundness_scan, SoundnessReport, FREE_EDGE_LIMIT};
pub use ugraph::{additive_violations, verify_additive, UndirectedGraph, Violation};

/// What a vertex of a reduction instance stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// Copy `i` of supernode `y`, layer `j`.
    Outer {
        y: usize,
        i: usize,
        j: usize,
    },
    /// Min-Rep vertex `a`.
    Inner {
        a: usize,
    },
    /// `s_y`.
    Special {
        y: usize,
    },
    /// Layer `j` of the path for superedge number `e`.
    Middle {
        e: usize,
        j: usize,
    },
    /// `ℓ_{y,i,j}`.
    Ladder {
        y: usize,
        i: usize,
        j: usize,
    },
    /// `p_{y,i,j}`.
    Chain {
        y: usize,
        i: usize,
        j: usize,
    },
    /// `q_y`.
    Hub {
        y: usize,
    },
    /// Layer `j` of the tail hanging off main vertex `of`.
    Tail {
        of: usize,
        j: usize,
    },
    Apex,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Role::Outer { y, i, j } => write!(f, "outer y={y} i={i} j={j}"),
            Role::Inner { a } => write!(f, "inner a={a}"),
            Role::Special { y } => write!(f, "special y={y}"),
            Role::Middle { e, j } => write!(f, "middle e={e} j={j}"),
            Role::Ladder { y, i, j } => write!(f, "ladder y={y} i={i} j={j}"),
            Role::Chain { y, i, j } => write!(f, "chain y={y} i={i} j={j}"),
            Role::Hub { y } => write!(f, "hub y={y}"),
            Role::Tail { of, j } => write!(f, "tail of={of} j={j}"),
            Role::Apex => f.write_str("apex"),
        }
    }
}

/// Named edge family; every edge of an instance belongs to exactly one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    In,
    Con,
    Path,
    L,
    P,
    So,
    Si,
    Sm,
    M,
    Out,
    Group,
    Star,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::In,
        Family::Con,
        Family::Path,
        Family::L,
        Family::P,
        Family::So,
        Family::Si,
        Family::Sm,
        Family::M,
        Family::Out,
        Family::Group,
        Family::Star,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::In => "in",
            Family::Con => "con",
            Family::Path => "path",
            Family::L => "L",
            Family::P => "P",
            Family::So => "so",
            Family::Si => "si",
            Family::Sm => "sm",
            Family::M => "M",
            Family::Out => "out",
            Family::Group => "group",
            Family::Star => "star",
        }
    }
}

/// Vertex total and nonzero per-family edge totals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counts {
    pub vertices: usize,
    pub main: usize,
    pub edges: BTreeMap<Family, usize>,
}

impl Counts {
    fn new(vertices: usize, main: usize, edges: impl IntoIterator<Item = (Family, usize)>) -> Self {
        Counts { vertices, main, edges: edges.into_iter().filter(|&(_, c)| c > 0).collect() }
    }
}

/// An additive-spanner instance with its construction metadata.
#[derive(Clone, Debug)]
pub struct SpannerInstance {
    stretch: Dist,
    x: usize,
    minrep: MinRepInstance,
    graph: UndirectedGraph,
    roles: Vec<Role>,
    families: Vec<Family>,
    index: BTreeMap<Role, usize>,
    main: usize,
}

impl SpannerInstance {
    /// The additive stretch the instance is built for.
    pub fn stretch(&self) -> Dist {
        self.stretch
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn minrep(&self) -> &MinRepInstance {
        &self.minrep
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn role(&self, v: usize) -> Role {
        self.roles[v]
    }

    pub fn family(&self, e: EdgeId) -> Family {
        self.families[e]
    }

    pub fn vertex(&self, role: Role) -> Option<usize> {
        self.index.get(&role).copied()
    }

    /// Size of the main vertex set (everything but the apex and tails).
    pub fn main_vertices(&self) -> usize {
        self.main
    }

    /// Outer layers per copy: 1 for `+1`, `k - 1` otherwise.
    pub fn layers(&self) -> usize {
        if self.stretch == 1 {
            1
        } else {
            self.stretch as usize - 1
        }
    }

    /// Middle vertices per superedge.
    pub fn middle_len(&self) -> usize {
        if self.stretch == 1 {
            1
        } else {
            self.stretch as usize - 2
        }
    }

    pub(crate) fn edge_between(&self, a: Role, b: Role) -> Option<EdgeId> {
        self.graph.edge_id(self.vertex(a)?, self.vertex(b)?)
    }

    pub fn counts(&self) -> Counts {
        let mut edges = BTreeMap::new();
        for &f in &self.families {
            *edges.entry(f).or_insert(0) += 1;
        }
        Counts::new(self.graph.n(), self.main, edges)
    }

    /// Sidecar listing: `v <role> k=v...` per vertex, then `edge u v <family>`.
    pub fn format_roles(&self) -> String {
        let mut out = format!("# stretch={} x={}\n", self.stretch, self.x);
        for (v, r) in self.roles.iter().enumerate() {
            writeln!(out, "{v} {r}").unwrap();
        }
        for (e, &(u, v)) in self.graph.edges().iter().enumerate() {
            writeln!(out, "edge {u} {v} {}", self.families[e].name()).unwrap();
        }
        out
    }
}

/// Collects roles and family-tagged edges, then freezes them into an instance.
struct Builder {
    roles: Vec<Role>,
    index: BTreeMap<Role, usize>,
    edges: Vec<(usize, usize, Family)>,
}

impl Builder {
    fn new() -> Self {
        Builder { roles: Vec::new(), index: BTreeMap::new(), edges: Vec::new() }
    }

    fn add(&mut self, role: Role) -> usize {
        let v = self.roles.len();
        let prev = self.index.insert(role, v);
        debug_assert!(prev.is_none(), "role {role} added twice");
        self.roles.push(role);
        v
    }

    fn v(&self, role: Role) -> usize {
        self.index[&role]
    }

    fn edge(&mut self, a: Role, b: Role, family: Family) {
        let (a, b) = (self.v(a), self.v(b));
        self.edges.push((a, b, family));
    }

    /// Adds the apex and `tail` tail vertices per main vertex; the tail is
    /// joined to its vertex at layer 1 and to the apex at layer `tail`.
    fn star(&mut self, tail: usize) {
        let main = self.roles.len();
        self.add(Role::Apex);
        for of in 0..main {
            for j in 1..=tail {
                self.add(Role::Tail { of, j });
            }
            let y = self.roles[of];
            self.edge(y, Role::Tail { of, j: 1 }, Family::Star);
            for j in 1..tail {
                self.edge(Role::Tail { of, j }, Role::Tail { of, j: j + 1 }, Family::Star);
            }
            self.edge(Role::Tail { of, j: tail }, Role::Apex, Family::Star);
        }
    }

    fn finish(self, stretch: Dist, x: usize, minrep: MinRepInstance, main: usize) -> Result<SpannerInstance> {
        let graph = UndirectedGraph::new(self.roles.len(), self.edges.iter().map(|&(a, b, _)| (a, b)))
            .map_err(|e| Error::Model(format!("construction produced a bad edge set: {e}")))?;
        let mut families = vec![Family::In; graph.m()];
        for &(a, b, f) in &self.edges {
            families[graph.edge_id(a, b).expect("edge just inserted")] = f;
        }
        Ok(SpannerInstance { stretch, x, minrep, graph, roles: self.roles, families, index: self.index, main })
    }
}

fn pairs_within(size: usize) -> usize {
    size * size.saturating_sub(1) / 2
}
