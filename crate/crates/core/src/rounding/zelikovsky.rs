use crate::error::{Error, Result};

/// Weighted out-arborescence on vertices `0..n`; vertices outside the tree
/// have no parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arborescence {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    /// Weight of the edge into each vertex.
    pub weight: Vec<u64>,
    pub children: Vec<Vec<usize>>,
}

impl Arborescence {
    /// Builds from `(parent, child, weight)` triples.
    pub fn new(n: usize, root: usize, edges: &[(usize, usize, u64)]) -> Result<Self> {
        let mut parent = vec![None; n];
        let mut weight = vec![0; n];
        let mut children = vec![Vec::new(); n];
        for &(p, c, w) in edges {
            if p >= n || c >= n {
                return Err(Error::VertexOutOfRange { vertex: p.max(c), n });
            }
            if c == root || parent[c].is_some() {
                return Err(Error::Invalid(format!("vertex {c} has two parents")));
            }
            parent[c] = Some(p);
            weight[c] = w;
            children[p].push(c);
        }
        for c in children.iter_mut() {
            c.sort_unstable();
        }
        let a = Arborescence { root, parent, weight, children };
        let reached = a.preorder().len();
        if reached != edges.len() + 1 {
            return Err(Error::Invalid("edges do not form an arborescence at the root".into()));
        }
        Ok(a)
    }

    fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::new();
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        order
    }

    /// Leaves in depth-first order.
    pub fn leaves(&self) -> Vec<usize> {
        self.preorder().into_iter().filter(|&v| v != self.root && self.children[v].is_empty()).collect()
    }

    pub fn cost(&self) -> u64 {
        (0..self.parent.len()).filter(|&v| self.parent[v].is_some()).map(|v| self.weight[v]).sum()
    }

    fn depths(&self) -> (Vec<usize>, Vec<u64>) {
        let mut hops = vec![0; self.parent.len()];
        let mut wdepth = vec![0; self.parent.len()];
        for v in self.preorder() {
            if let Some(p) = self.parent[v] {
                hops[v] = hops[p] + 1;
                wdepth[v] = wdepth[p] + self.weight[v];
            }
        }
        (hops, wdepth)
    }
}

/// Height-bounded tree over the metric completion of an arborescence. Nodes are
/// per-level copies of original vertices, so the result is always a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedTree {
    pub vertex: Vec<usize>,
    pub parent: Vec<Option<usize>>,
    pub weight: Vec<u64>,
}

impl ReducedTree {
    pub fn cost(&self) -> u64 {
        self.weight.iter().sum()
    }

    pub fn height(&self) -> usize {
        (0..self.parent.len())
            .map(|mut v| {
                let mut h = 0;
                while let Some(p) = self.parent[v] {
                    v = p;
                    h += 1;
                }
                h
            })
            .max()
            .unwrap_or(0)
    }

    /// Original vertices at childless nodes, sorted.
    pub fn leaf_vertices(&self) -> Vec<usize> {
        let mut has_child = vec![false; self.parent.len()];
        for p in self.parent.iter().flatten() {
            has_child[*p] = true;
        }
        let mut out: Vec<usize> = (1..self.parent.len()).filter(|&v| !has_child[v]).map(|v| self.vertex[v]).collect();
        out.sort_unstable();
        out
    }
}

/// Block construction: leaves in DFS order are cut into consecutive blocks of
/// `Δ` (the least integer with `Δ^σ >= |L|`), each block hangs below the LCA
/// of its members, and the LCAs form the next level. Once a level has at most
/// `Δ` nodes it is attached to the root, so the height never exceeds `σ`.
pub fn zelikovsky_reduce(j: &Arborescence, sigma: usize) -> Result<ReducedTree> {
    if sigma == 0 {
        return Err(Error::Invalid("height bound sigma must be at least 1".into()));
    }
    let leaves = j.leaves();
    let mut out = ReducedTree { vertex: vec![j.root], parent: vec![None], weight: vec![0] };
    if leaves.is_empty() {
        return Ok(out);
    }
    let delta = (1..).find(|&d: &usize| d.checked_pow(sigma as u32).is_none_or(|p| p >= leaves.len())).unwrap();
    let (hops, wdepth) = j.depths();
    let lca = |mut a: usize, mut b: usize| {
        while hops[a] > hops[b] {
            a = j.parent[a].unwrap();
        }
        while hops[b] > hops[a] {
            b = j.parent[b].unwrap();
        }
        while a != b {
            a = j.parent[a].unwrap();
            b = j.parent[b].unwrap();
        }
        a
    };
    // pending edges: (child node id, parent vertex); parents become nodes one level up
    let mut level: Vec<usize> = Vec::new();
    for &l in &leaves {
        out.vertex.push(l);
        out.parent.push(None);
        out.weight.push(0);
        level.push(out.vertex.len() - 1);
    }
    loop {
        if level.len() <= delta {
            for &node in &level {
                out.parent[node] = Some(0);
                out.weight[node] = wdepth[out.vertex[node]] - wdepth[j.root];
            }
            return Ok(out);
        }
        let mut next = Vec::new();
        for block in level.chunks(delta) {
            let top = block.iter().map(|&n| out.vertex[n]).reduce(lca).unwrap();
            out.vertex.push(top);
            out.parent.push(None);
            out.weight.push(0);
            let id = out.vertex.len() - 1;
            for &node in block {
                out.parent[node] = Some(id);
                out.weight[node] = wdepth[out.vertex[node]] - wdepth[top];
            }
            next.push(id);
        }
        level = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary() -> Arborescence {
        // 0 -> 1,2 ; 1 -> 3,4 ; 2 -> 5,6
        Arborescence::new(7, 0, &[(0, 1, 1), (0, 2, 1), (1, 3, 1), (1, 4, 1), (2, 5, 1), (2, 6, 1)]).unwrap()
    }

    #[test]
    fn star_is_unchanged() {
        let j = Arborescence::new(4, 0, &[(0, 1, 2), (0, 2, 3), (0, 3, 1)]).unwrap();
        let r = zelikovsky_reduce(&j, 1).unwrap();
        assert_eq!(r.cost(), j.cost());
        assert_eq!(r.height(), 1);
        assert_eq!(r.leaf_vertices(), vec![1, 2, 3]);
    }

    #[test]
    fn binary_tree_two_levels() {
        let j = binary();
        let r = zelikovsky_reduce(&j, 2).unwrap();
        assert_eq!(r.height(), 2);
        assert_eq!(r.leaf_vertices(), vec![3, 4, 5, 6]);
        // blocks {3,4} and {5,6} hang below 1 and 2
        let mids: Vec<usize> = (0..r.vertex.len()).filter(|&v| r.parent[v] == Some(0)).map(|v| r.vertex[v]).collect();
        assert_eq!(mids, vec![1, 2]);
        assert_eq!(r.cost(), j.cost());
    }

    #[test]
    fn single_leaf_is_one_edge() {
        let j = Arborescence::new(3, 0, &[(0, 1, 2), (1, 2, 5)]).unwrap();
        let r = zelikovsky_reduce(&j, 3).unwrap();
        assert_eq!(r.vertex.len(), 2);
        assert_eq!(r.weight[1], 7);
    }

    #[test]
    fn rejects_non_trees() {
        assert!(Arborescence::new(3, 0, &[(0, 1, 1), (2, 1, 1)]).is_err());
        assert!(Arborescence::new(3, 0, &[(1, 2, 1), (2, 1, 1)]).is_err());
    }
}
