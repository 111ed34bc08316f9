//! Minimum spanning tree: Kruskal with union-find, plus an exhaustive
//! enumeration oracle for small graphs.

use thiserror::Error;

use crate::graph::WeightedGraph;

#[derive(Debug, Error)]
pub enum MstError {
    #[error("graph is disconnected: vertex {0} is unreachable from vertex 0")]
    Disconnected(usize),
    #[error("brute-force oracle limited to n <= {limit}, got n = {n}")]
    SizeGuard { n: usize, limit: usize },
}

/// A spanning tree: member edge indices (into the weighted graph's edge
/// list) and their total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeResult {
    pub total_weight: f64,
    pub tree_edges: Vec<usize>,
}

pub(crate) struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            // path halving
            self.parent[x as usize] = self.parent[self.parent[x as usize] as usize];
            x = self.parent[x as usize];
        }
        x
    }

    /// Returns false if the two are already joined.
    pub fn unite(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }
}

/// Kruskal's algorithm. Weight ties are broken by edge index (stable sort),
/// so the result is deterministic for any input.
pub fn mst(wg: &WeightedGraph) -> Result<TreeResult, MstError> {
    let n = wg.graph.vertex_count();
    let mut order: Vec<usize> = (0..wg.edge_count()).collect();
    order.sort_by(|&a, &b| wg.weight(a).partial_cmp(&wg.weight(b)).expect("finite weights"));

    let mut uf = UnionFind::new(n);
    let mut tree_edges = Vec::with_capacity(n.saturating_sub(1));
    let mut total_weight = 0.0;
    for idx in order {
        let (u, v) = wg.graph.edges()[idx];
        if uf.unite(u, v) {
            tree_edges.push(idx);
            total_weight += wg.weight(idx);
            if tree_edges.len() + 1 == n {
                break;
            }
        }
    }
    if tree_edges.len() + 1 != n {
        let root0 = uf.find(0);
        let stray = (1..n).find(|&v| uf.find(v as u32) != root0).expect("some vertex unreachable");
        return Err(MstError::Disconnected(stray));
    }
    tree_edges.sort_unstable();
    Ok(TreeResult { total_weight, tree_edges })
}

const BRUTE_LIMIT: usize = 9;

/// Exhaustive oracle: minimum over all edge subsets of size n-1 that form a
/// spanning tree. Only for n <= 9.
pub fn mst_brute(wg: &WeightedGraph) -> Result<TreeResult, MstError> {
    let n = wg.graph.vertex_count();
    if n > BRUTE_LIMIT {
        return Err(MstError::SizeGuard { n, limit: BRUTE_LIMIT });
    }
    if n <= 1 {
        return Ok(TreeResult { total_weight: 0.0, tree_edges: vec![] });
    }
    let m = wg.edge_count();
    let k = n - 1;
    if m < k {
        return Err(MstError::Disconnected(spot_unreachable(wg)));
    }

    let mut best: Option<TreeResult> = None;
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        // n-1 edges with no cycle span the whole vertex set
        let mut uf = UnionFind::new(n);
        let mut acyclic = true;
        let mut total = 0.0;
        for &idx in &combo {
            let (u, v) = wg.graph.edges()[idx];
            if !uf.unite(u, v) {
                acyclic = false;
                break;
            }
            total += wg.weight(idx);
        }
        if acyclic && best.as_ref().is_none_or(|b| total < b.total_weight) {
            best = Some(TreeResult { total_weight: total, tree_edges: combo.clone() });
        }
        // advance combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return best.ok_or_else(|| MstError::Disconnected(spot_unreachable(wg)));
            }
            i -= 1;
            if combo[i] != i + m - k {
                break;
            }
        }
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

fn spot_unreachable(wg: &WeightedGraph) -> usize {
    let comp = wg.graph.component_of(0);
    (0..wg.graph.vertex_count()).find(|v| !comp.contains(v)).unwrap_or(0)
}
