//! Graph ensemble constructors, random-edge augmentation, and weight
//! assignment. Everything here is a pure function of its parameters and a
//! [`RandomSource`].

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{Graph, GraphError, GraphKind, WeightedGraph};
use crate::rng::{index_below, random_permutation, unit_f64, RandomSource, WeightDistribution};

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("circulant degree {d} is odd, which needs even n (got n = {n})")]
    Parity { n: usize, d: usize },
    #[error("degree {d} out of range for n = {n}")]
    DegreeRange { n: usize, d: usize },
    #[error("copy size {r} does not divide n = {n}")]
    CopySize { n: usize, r: usize },
    #[error("need at least 2 copies, got n/r = {copies}")]
    TooFewCopies { copies: usize },
    #[error("copy size {r} below minimum {min}")]
    CopyTooSmall { r: usize, min: usize },
    #[error("requested {requested} augmenting edges but only {available} non-edges exist")]
    Capacity { requested: usize, available: usize },
    #[error("augmentation probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("edge repair did not converge within {0} swaps")]
    RepairBudget(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// How to add random edges: a fixed count without replacement, or each
/// absent edge independently with probability p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AugmentSpec {
    Count(usize),
    Bernoulli(f64),
}

/// Circulant graph on `n` vertices: offsets ±1..±d/2, plus offset n/2 when
/// d is odd. Connected and d-regular for d >= 2.
pub fn make_circulant(n: usize, d: usize) -> Result<Graph, EnsembleError> {
    if d < 1 || d >= n {
        return Err(EnsembleError::DegreeRange { n, d });
    }
    if d % 2 == 1 && n % 2 == 1 {
        return Err(EnsembleError::Parity { n, d });
    }
    let mut edges = Vec::with_capacity(n * d / 2);
    for offset in 1..=(d / 2) {
        for u in 0..n {
            edges.push((u, (u + offset) % n));
        }
    }
    if d % 2 == 1 {
        for u in 0..n / 2 {
            edges.push((u, u + n / 2));
        }
    }
    Ok(Graph::new_general(n, edges)?)
}

/// Cycle of n/r copies of the complete graph K_r minus one edge, bridged
/// through the two degree-deficient vertices of each copy. The result is
/// (r-1)-regular and connected; consecutive copies share exactly one edge.
pub fn make_mst_extremal(n: usize, r: usize) -> Result<Graph, EnsembleError> {
    if r < 4 {
        return Err(EnsembleError::CopyTooSmall { r, min: 4 });
    }
    if r == 0 || !n.is_multiple_of(r) {
        return Err(EnsembleError::CopySize { n, r });
    }
    let copies = n / r;
    if copies < 2 {
        return Err(EnsembleError::TooFewCopies { copies });
    }
    let mut edges = Vec::new();
    for c in 0..copies {
        let base = c * r;
        // K_r minus the edge between local vertices 0 and 1
        for i in 0..r {
            for j in (i + 1)..r {
                if i == 0 && j == 1 {
                    continue;
                }
                edges.push((base + i, base + j));
            }
        }
        // bridge: this copy's local 1 to the next copy's local 0
        let next = ((c + 1) % copies) * r;
        edges.push((base + 1, next));
    }
    Ok(Graph::new_general(n, edges)?)
}

/// Cycle of n/r copies of K_{r,r} minus one edge, bridged from each copy's
/// deficient A-vertex to the next copy's deficient B-vertex. r-regular
/// bipartite and connected.
pub fn make_bip_extremal(n: usize, r: usize) -> Result<Graph, EnsembleError> {
    if r < 2 {
        return Err(EnsembleError::CopyTooSmall { r, min: 2 });
    }
    if r == 0 || !n.is_multiple_of(r) {
        return Err(EnsembleError::CopySize { n, r });
    }
    let copies = n / r;
    if copies < 2 {
        return Err(EnsembleError::TooFewCopies { copies });
    }
    let mut edges = Vec::new();
    for c in 0..copies {
        let base = c * r;
        // K_{r,r} minus the (local 0, local 0) edge
        for i in 0..r {
            for j in 0..r {
                if i == 0 && j == 0 {
                    continue;
                }
                edges.push((base + i, base + j));
            }
        }
        // bridge: this copy's deficient A-vertex to the next copy's deficient B-vertex
        let next = ((c + 1) % copies) * r;
        edges.push((base, next));
    }
    Ok(Graph::new_bipartite(n, edges)?)
}

const REPAIR_SWAP_BUDGET: u64 = 1_000_000;

/// d-regular bipartite graph as a union of d uniformly random perfect
/// matchings. When a permutation repeats an already used edge it is repaired
/// by random transpositions until the union is simple. d = n forces the
/// complete bipartite graph.
pub fn make_random_bipartite_regular(
    n: usize,
    d: usize,
    src: &RandomSource,
) -> Result<Graph, EnsembleError> {
    if d < 1 || d > n {
        return Err(EnsembleError::DegreeRange { n, d });
    }
    if d == n {
        return Ok(Graph::complete_bipartite(n));
    }
    let mut rng = src.rng();
    let mut used: HashSet<(u32, u32)> = HashSet::with_capacity(n * d);
    let mut edges = Vec::with_capacity(n * d);
    for _ in 0..d {
        let mut perm = random_permutation(n, &mut rng);
        let mut swaps = 0u64;
        loop {
            let conflicts: Vec<usize> = (0..n)
                .filter(|&i| used.contains(&(i as u32, perm[i] as u32)))
                .collect();
            if conflicts.is_empty() {
                break;
            }
            for i in conflicts {
                if !used.contains(&(i as u32, perm[i] as u32)) {
                    continue; // an earlier swap already resolved this slot
                }
                let mut j = index_below(&mut rng, n as u64 - 1) as usize;
                if j >= i {
                    j += 1;
                }
                perm.swap(i, j);
                swaps += 1;
                if swaps > REPAIR_SWAP_BUDGET {
                    return Err(EnsembleError::RepairBudget(REPAIR_SWAP_BUDGET));
                }
            }
        }
        for (i, &b) in perm.iter().enumerate() {
            used.insert((i as u32, b as u32));
            edges.push((i, b));
        }
    }
    Ok(Graph::new_bipartite(n, edges)?)
}

/// Add random absent edges to `g` per `spec`. Count mode samples distinct
/// non-edges uniformly without replacement; Bernoulli mode includes each
/// non-edge independently. Added edges are flagged as augmentations.
pub fn augment(g: &Graph, spec: &AugmentSpec, src: &RandomSource) -> Result<Graph, EnsembleError> {
    let n = g.n();
    let total_pairs = match g.kind() {
        GraphKind::General => n * n.saturating_sub(1) / 2,
        GraphKind::Bipartite => n * n,
    };
    let available = total_pairs - g.edge_count();
    let mut rng = src.rng();

    let new_edges: Vec<(u32, u32)> = match *spec {
        AugmentSpec::Count(m) => {
            if m > available {
                return Err(EnsembleError::Capacity { requested: m, available });
            }
            if m == 0 {
                Vec::new()
            } else if available >= 2 * m {
                // dense-complement regime: rejection sampling is O(m) expected
                let mut chosen: HashSet<(u32, u32)> = HashSet::with_capacity(m);
                let mut picked = Vec::with_capacity(m);
                while picked.len() < m {
                    let e = random_pair(g, &mut rng);
                    if g.has_edge(e.0 as usize, e.1 as usize) || !chosen.insert(e) {
                        continue;
                    }
                    picked.push(e);
                }
                picked
            } else {
                // thin complement: enumerate non-edges, partial Fisher-Yates
                let mut pool = non_edges(g);
                for i in 0..m {
                    let j = i + index_below(&mut rng, (pool.len() - i) as u64) as usize;
                    pool.swap(i, j);
                }
                pool.truncate(m);
                pool
            }
        }
        AugmentSpec::Bernoulli(p) => {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(EnsembleError::BadProbability(p));
            }
            non_edges(g)
                .into_iter()
                .filter(|_| unit_f64(&mut rng) < p)
                .collect()
        }
    };

    let mut tagged: Vec<(u32, u32, bool)> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| (u, v, g.is_augmented(i)))
        .collect();
    tagged.extend(new_edges.into_iter().map(|(u, v)| (u, v, true)));
    Ok(Graph::with_augmented(g.kind(), n, tagged))
}

/// Uniform random vertex pair in normalized global form (not checked
/// against the edge set).
fn random_pair(g: &Graph, rng: &mut rand_chacha::ChaCha12Rng) -> (u32, u32) {
    let n = g.n() as u64;
    match g.kind() {
        GraphKind::General => loop {
            let u = index_below(rng, n);
            let v = index_below(rng, n);
            if u != v {
                return (u.min(v) as u32, u.max(v) as u32);
            }
        },
        GraphKind::Bipartite => {
            let a = index_below(rng, n);
            let b = index_below(rng, n);
            (a as u32, (g.n() as u64 + b) as u32)
        }
    }
}

/// All absent pairs in lexicographic order (global normalized form).
fn non_edges(g: &Graph) -> Vec<(u32, u32)> {
    let n = g.n();
    let mut out = Vec::new();
    match g.kind() {
        GraphKind::General => {
            for u in 0..n {
                for v in (u + 1)..n {
                    if !g.has_edge(u, v) {
                        out.push((u as u32, v as u32));
                    }
                }
            }
        }
        GraphKind::Bipartite => {
            for a in 0..n {
                for b in n..2 * n {
                    if !g.has_edge(a, b) {
                        out.push((a as u32, b as u32));
                    }
                }
            }
        }
    }
    out
}

/// One independent weight per edge, drawn in the stored (sorted) edge order
/// so the result is a pure function of (graph, distribution, seed).
pub fn assign_weights(g: &Graph, dist: WeightDistribution, src: &RandomSource) -> WeightedGraph {
    let mut rng = src.rng();
    let weights = (0..g.edge_count()).map(|_| dist.sample(&mut rng)).collect();
    WeightedGraph::new(g.clone(), weights).expect("sampled weights are nonnegative finite")
}
