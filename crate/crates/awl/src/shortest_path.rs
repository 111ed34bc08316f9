//! Dijkstra with process instrumentation: per-settlement distances d_k and
//! frontier edge counts nu_k, plus distance statistics and brute-force
//! oracles.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::WeightedGraph;

#[derive(Debug, Error)]
pub enum PathError {
    #[error("graph is disconnected: vertex {0} is unreachable")]
    Disconnected(usize),
    #[error("target vertex {0} is unreachable from the source")]
    Unreachable(usize),
    #[error("all-pairs oracle limited to n <= {limit}, got n = {n}")]
    SizeGuard { n: usize, limit: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
}

/// Full record of one Dijkstra run. `settle_order[k-1]` is the k-th settled
/// vertex, `d[k-1]` its distance, and `nu[k-1]` the number of edges from the
/// first k settled vertices to the rest (the trivial final zero is omitted).
#[derive(Debug, Clone, PartialEq)]
pub struct DijkstraTrace {
    pub source: usize,
    pub settle_order: Vec<u32>,
    pub d: Vec<f64>,
    pub nu: Vec<u64>,
    /// Vertices with no path from the source (infinite distance).
    pub unreachable: Vec<u32>,
}

impl DijkstraTrace {
    pub fn settled(&self) -> usize {
        self.settle_order.len()
    }

    /// Distance of the k-th settled vertex, 1-based: d_1 = 0.
    pub fn d_k(&self, k: usize) -> f64 {
        self.d[k - 1]
    }

    /// Frontier edge count after k settlements, 1-based.
    pub fn nu_k(&self, k: usize) -> u64 {
        self.nu[k - 1]
    }

    /// CSV with columns k, vertex, d_k, nu_k (nu is blank on the last row).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,vertex,d_k,nu_k\n");
        for k in 1..=self.settled() {
            let nu = if k <= self.nu.len() { self.nu[k - 1].to_string() } else { String::new() };
            let _ = writeln!(out, "{},{},{},{}", k, self.settle_order[k - 1], self.d[k - 1], nu);
        }
        out
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    vertex: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; reverse so the smallest (dist, vertex)
        // pops first. Ties settle the lower vertex index.
        other
            .dist
            .partial_cmp(&self.dist)
            .expect("finite distances")
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Weighted adjacency lists, built once so repeated runs over the same
/// graph skip per-relaxation edge lookups.
fn weighted_adjacency(wg: &WeightedGraph) -> Vec<Vec<(u32, f64)>> {
    let mut lists = vec![Vec::new(); wg.graph.vertex_count()];
    for (u, v, w) in wg.iter_edges() {
        lists[u as usize].push((v, w));
        lists[v as usize].push((u, w));
    }
    lists
}

/// Single-source shortest paths with frontier bookkeeping. Binary heap with
/// lazy deletion; ties in settle order break by vertex index.
pub fn dijkstra_trace(wg: &WeightedGraph, source: usize) -> Result<DijkstraTrace, PathError> {
    if source >= wg.graph.vertex_count() {
        return Err(PathError::VertexOutOfRange(source));
    }
    Ok(dijkstra_inner(&weighted_adjacency(wg), source, None))
}

fn dijkstra_inner(adj: &[Vec<(u32, f64)>], source: usize, stop_at: Option<usize>) -> DijkstraTrace {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    let mut settle_order = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    let mut nu = Vec::with_capacity(n);
    let mut frontier: u64 = 0;

    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry { dist: 0.0, vertex: source as u32 });

    while let Some(HeapEntry { dist: du, vertex: u }) = heap.pop() {
        let ui = u as usize;
        if settled[ui] || du > dist[ui] {
            continue;
        }
        settled[ui] = true;
        settle_order.push(u);
        d.push(dist[ui]);

        // nu_{k} = nu_{k-1} + deg(v_k) - 2 * (edges from v_k into the settled set)
        let into_settled = adj[ui].iter().filter(|&&(w, _)| settled[w as usize]).count() as u64;
        frontier = frontier + adj[ui].len() as u64 - 2 * into_settled;
        nu.push(frontier);

        if stop_at == Some(ui) {
            break;
        }
        for &(w, weight) in &adj[ui] {
            let wi = w as usize;
            if settled[wi] {
                continue;
            }
            let nd = dist[ui] + weight;
            if nd < dist[wi] {
                dist[wi] = nd;
                heap.push(HeapEntry { dist: nd, vertex: w });
            }
        }
    }

    // drop the trivial trailing frontier count (zero on a full settle)
    if stop_at.is_none() && !nu.is_empty() {
        debug_assert!(settle_order.len() < n || *nu.last().unwrap() == 0);
        nu.pop();
    }
    let unreachable = (0..n as u32).filter(|&v| !settled[v as usize]).collect();
    DijkstraTrace { source, settle_order, d, nu, unreachable }
}

/// Which distance statistic to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceQuery {
    /// Shortest distance between two vertices (early-exit Dijkstra).
    Pair { source: usize, target: usize },
    /// Maximum distance from a source over all vertices.
    Eccentricity { source: usize },
    /// Maximum eccentricity over all sources (n full runs).
    Diameter,
}

pub fn distance_stats(wg: &WeightedGraph, query: DistanceQuery) -> Result<f64, PathError> {
    let n = wg.graph.vertex_count();
    let check = |v: usize| {
        if v >= n {
            Err(PathError::VertexOutOfRange(v))
        } else {
            Ok(())
        }
    };
    match query {
        DistanceQuery::Pair { source, target } => {
            check(source)?;
            check(target)?;
            let trace = dijkstra_inner(&weighted_adjacency(wg), source, Some(target));
            match trace.settle_order.iter().position(|&v| v as usize == target) {
                Some(k) => Ok(trace.d[k]),
                None => Err(PathError::Unreachable(target)),
            }
        }
        DistanceQuery::Eccentricity { source } => {
            check(source)?;
            let trace = dijkstra_inner(&weighted_adjacency(wg), source, None);
            if let Some(&v) = trace.unreachable.first() {
                return Err(PathError::Disconnected(v as usize));
            }
            Ok(trace.d.last().copied().unwrap_or(0.0))
        }
        DistanceQuery::Diameter => {
            let adj = weighted_adjacency(wg);
            let mut best = 0.0f64;
            for s in 0..n {
                let trace = dijkstra_inner(&adj, s, None);
                if let Some(&v) = trace.unreachable.first() {
                    return Err(PathError::Disconnected(v as usize));
                }
                best = best.max(trace.d.last().copied().unwrap_or(0.0));
            }
            Ok(best)
        }
    }
}

const ALL_PAIRS_LIMIT: usize = 60;

/// Floyd-Warshall all-pairs oracle for n <= 60. Unreachable pairs hold
/// `f64::INFINITY`.
pub fn sp_brute(wg: &WeightedGraph) -> Result<Vec<Vec<f64>>, PathError> {
    let n = wg.graph.vertex_count();
    if n > ALL_PAIRS_LIMIT {
        return Err(PathError::SizeGuard { n, limit: ALL_PAIRS_LIMIT });
    }
    let mut dist = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for (u, v, w) in wg.iter_edges() {
        let (u, v) = (u as usize, v as usize);
        if w < dist[u][v] {
            dist[u][v] = w;
            dist[v][u] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if dist[i][k].is_infinite() {
                continue;
            }
            for j in 0..n {
                let through = dist[i][k] + dist[k][j];
                if through < dist[i][j] {
                    dist[i][j] = through;
                }
            }
        }
    }
    Ok(dist)
}

/// Number of vertices whose every incident weight is at least `threshold`
/// (isolated vertices count vacuously).
pub fn count_heavy_vertices(wg: &WeightedGraph, threshold: f64) -> usize {
    let n = wg.graph.vertex_count();
    let mut min_incident = vec![f64::INFINITY; n];
    for (u, v, w) in wg.iter_edges() {
        let (u, v) = (u as usize, v as usize);
        if w < min_incident[u] {
            min_incident[u] = w;
        }
        if w < min_incident[v] {
            min_incident[v] = w;
        }
    }
    min_incident.iter().filter(|&&m| m >= threshold).count()
}
