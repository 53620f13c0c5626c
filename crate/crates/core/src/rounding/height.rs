use crate::error::{Error, Result};
use crate::graph::{Dist, EdgeSet, MetricView, Witness, INF};

/// Rooted tree of bounded height over a metric completion.
///
/// Node 0 is the root and every node's parent has a smaller index. Each
/// non-root node stands for a path of at most `sigma` metric hops from the
/// root; the tree edge into a node is identified by the node itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShallowTree {
    pub sigma: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub depth: Vec<usize>,
    /// Metric vertex at the end of the node's path.
    pub psi: Vec<usize>,
    /// Weight of the edge into the node (0 at the root).
    pub weight: Vec<Dist>,
    /// Witness path of the edge into the node, `Ψ(parent) ~> Ψ(node)`.
    pub phi: Vec<Witness>,
}

impl ShallowTree {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn root_vertex(&self) -> usize {
        self.psi[0]
    }

    /// Non-root nodes on the way from `node` up to (excluding) the root.
    pub fn path_to_root(&self, mut node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while let Some(p) = self.parent[node] {
            out.push(node);
            node = p;
        }
        out
    }

    /// Total weight of the edges into the selected non-root nodes.
    pub fn cost(&self, nodes: &[bool]) -> u64 {
        (1..self.len()).filter(|&v| nodes[v]).map(|v| u64::from(self.weight[v])).sum()
    }

    fn push(&mut self, parent: usize, psi: usize, weight: Dist, phi: Witness) -> usize {
        let id = self.len();
        self.parent.push(Some(parent));
        self.children.push(Vec::new());
        self.children[parent].push(id);
        self.depth.push(self.depth[parent] + 1);
        self.psi.push(psi);
        self.weight.push(weight);
        self.phi.push(phi);
        id
    }

    fn truncate(&mut self, len: usize) {
        self.parent.truncate(len);
        self.children.truncate(len);
        for c in self.children.iter_mut() {
            c.retain(|&x| x < len);
        }
        self.depth.truncate(len);
        self.psi.truncate(len);
        self.weight.truncate(len);
        self.phi.truncate(len);
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HeightOptions<'a> {
    /// Refuse to build trees with more nodes than this.
    pub node_budget: usize,
    /// When set, keep only nodes whose subtree reaches a marked metric vertex.
    pub terminals: Option<&'a [bool]>,
}

impl Default for HeightOptions<'_> {
    fn default() -> Self {
        HeightOptions { node_budget: 200_000, terminals: None }
    }
}

/// Enumerates every path of at most `sigma` hops from `r` that never repeats a
/// vertex and only uses finite metric hops, arranged as a prefix tree.
pub fn height_reduce(metric: &impl MetricView, r: usize, sigma: usize, opts: HeightOptions) -> Result<ShallowTree> {
    if sigma == 0 {
        return Err(Error::Invalid("height bound sigma must be at least 1".into()));
    }
    if r >= metric.len() {
        return Err(Error::VertexOutOfRange { vertex: r, n: metric.len() });
    }
    let mut tree = ShallowTree {
        sigma,
        parent: vec![None],
        children: vec![Vec::new()],
        depth: vec![0],
        psi: vec![r],
        weight: vec![0],
        phi: vec![Witness { vertices: vec![r], arcs: Vec::new() }],
    };
    let mut on_path = vec![false; metric.len()];
    on_path[r] = true;
    let mut visited = 0usize;
    grow(metric, &mut tree, 0, &mut on_path, &opts, &mut visited)?;
    Ok(tree)
}

/// Returns whether the subtree below `node` reaches a terminal.
fn grow(
    metric: &impl MetricView,
    tree: &mut ShallowTree,
    node: usize,
    on_path: &mut [bool],
    opts: &HeightOptions,
    visited: &mut usize,
) -> Result<bool> {
    let here = tree.psi[node];
    let mut useful = opts.terminals.is_none_or(|t| t[here]);
    if tree.depth[node] == tree.sigma {
        return Ok(useful);
    }
    for v in 0..metric.len() {
        let w = metric.weight(here, v);
        if on_path[v] || w == INF {
            continue;
        }
        *visited += 1;
        if tree.len() >= opts.node_budget || *visited > opts.node_budget.saturating_mul(64) {
            return Err(Error::Budget(format!(
                "height-{} tree over {} vertices exceeds the node budget {}",
                tree.sigma,
                metric.len(),
                opts.node_budget
            )));
        }
        let phi = metric.witness(here, v).expect("finite weight has a witness");
        let mark = tree.len();
        let child = tree.push(node, v, w, phi);
        on_path[v] = true;
        let keep = grow(metric, tree, child, on_path, opts, visited)?;
        on_path[v] = false;
        if keep {
            useful = true;
        } else {
            tree.truncate(mark);
        }
    }
    Ok(useful)
}

/// Union of the witness arcs of the selected non-root nodes.
pub fn project_tree(tree: &ShallowTree, nodes: &[bool]) -> EdgeSet {
    (1..tree.len()).filter(|&v| nodes[v]).flat_map(|v| tree.phi[v].arcs.iter().copied()).collect()
}
