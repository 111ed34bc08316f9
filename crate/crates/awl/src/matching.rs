//! Minimum-weight bipartite perfect matching by successive shortest
//! augmenting paths with dual potentials, instrumented per prefix step.
//!
//! Processing A-vertices one at a time keeps every prefix matching globally
//! optimal, so the sequence of augmentation costs is itself the object of
//! study: each step records the cost increment, the last A-vertex on the
//! augmenting path, and how many unmatched B-neighbors that vertex had.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::analysis;
use crate::graph::WeightedGraph;

#[derive(Debug, Error)]
pub enum MatchError {
    #[error("matching requires a bipartite graph")]
    NotBipartite,
    #[error("order must be a permutation of the A side")]
    BadOrder,
    #[error("no perfect matching: Hall violator A-set {0:?} has too small a neighborhood")]
    Infeasible(Vec<usize>),
    #[error("brute-force oracle limited to n <= {limit}, got n = {n}")]
    SizeGuard { n: usize, limit: usize },
    #[error("replication batches disagree on n: {0} vs {1}")]
    MixedSizes(usize, usize),
    #[error("at least one replication required")]
    Empty,
}

/// Data recorded at step r of the incremental matching.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementRecord {
    /// prefix size, 1-based
    pub r: usize,
    /// cost increment C(n,r) - C(n,r-1)
    pub delta_c: f64,
    /// last A-vertex on the augmenting path
    pub sigma_vertex: usize,
    /// neighbors of `sigma_vertex` among B-vertices unmatched before this step
    pub delta_r: usize,
    /// edges on the augmenting path (odd)
    pub path_edges: usize,
    /// maximum edge weight in the matching after this step
    pub max_edge_weight: f64,
    /// B-vertex newly covered at this step
    pub matched_b: usize,
}

/// A perfect matching with its per-step increment history and the final
/// dual potentials (every matched edge is tight in reduced costs).
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingResult {
    pub total_weight: f64,
    /// A-local index -> B-local index
    pub matching: Vec<usize>,
    pub increments: Vec<IncrementRecord>,
    pub dual_a: Vec<f64>,
    pub dual_b: Vec<f64>,
}

impl MatchingResult {
    pub fn n(&self) -> usize {
        self.matching.len()
    }

    /// CSV with columns r, delta_C, sigma_vertex, delta_r, path_edges,
    /// max_edge_weight.
    pub fn increments_csv(&self) -> String {
        let mut out = String::from("r,delta_C,sigma_vertex,delta_r,path_edges,max_edge_weight\n");
        for rec in &self.increments {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                rec.r, rec.delta_c, rec.sigma_vertex, rec.delta_r, rec.path_edges, rec.max_edge_weight
            );
        }
        out
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    b: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, b): shortest-path ties break by B-vertex index
        other
            .dist
            .partial_cmp(&self.dist)
            .expect("finite reduced costs")
            .then_with(|| other.b.cmp(&self.b))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const UNSET: u32 = u32::MAX;

/// Process the A side in the given order, augmenting by a shortest path in
/// reduced costs at each step. Potentials keep every prefix matching
/// optimal for its A-prefix.
pub fn match_increments(wg: &WeightedGraph, order: &[usize]) -> Result<MatchingResult, MatchError> {
    if !wg.graph.is_bipartite() {
        return Err(MatchError::NotBipartite);
    }
    let n = wg.graph.n();
    if order.len() != n {
        return Err(MatchError::BadOrder);
    }
    let mut seen = vec![false; n];
    for &a in order {
        if a >= n || seen[a] {
            return Err(MatchError::BadOrder);
        }
        seen[a] = true;
    }

    // per-A adjacency as (B-local, weight), sorted by B index
    let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    for (u, v, w) in wg.iter_edges() {
        adj[u as usize].push((v - n as u32, w));
    }
    for list in &mut adj {
        list.sort_unstable_by_key(|&(b, _)| b);
    }
    let weight_of = |a: usize, b: u32| -> f64 {
        let list = &adj[a];
        list[list.binary_search_by_key(&b, |&(bb, _)| bb).expect("matched edge exists")].1
    };

    let mut match_a: Vec<u32> = vec![UNSET; n];
    let mut match_b: Vec<u32> = vec![UNSET; n];
    let mut pot_a = vec![0.0f64; n];
    let mut pot_b = vec![0.0f64; n];
    let mut increments = Vec::with_capacity(n);

    let mut dist = vec![f64::INFINITY; n];
    let mut way = vec![UNSET; n];
    let mut settled = vec![false; n];

    for (step, &a_new) in order.iter().enumerate() {
        let r = step + 1;
        if adj[a_new].is_empty() {
            return Err(MatchError::Infeasible(vec![a_new]));
        }
        // dual-feasible entry for the new vertex
        let mut ua = f64::INFINITY;
        for &(b, w) in &adj[a_new] {
            ua = ua.min(w - pot_b[b as usize]);
        }
        pot_a[a_new] = ua;

        dist.fill(f64::INFINITY);
        way.fill(UNSET);
        settled.fill(false);
        let mut settled_list: Vec<(u32, f64)> = Vec::new();
        let mut heap = BinaryHeap::new();
        for &(b, w) in &adj[a_new] {
            let rc = w - ua - pot_b[b as usize];
            if rc < dist[b as usize] {
                dist[b as usize] = rc;
                way[b as usize] = a_new as u32;
                heap.push(HeapEntry { dist: rc, b });
            }
        }

        let mut found: Option<(u32, f64)> = None;
        while let Some(HeapEntry { dist: db, b }) = heap.pop() {
            let bi = b as usize;
            if settled[bi] || db > dist[bi] {
                continue;
            }
            settled[bi] = true;
            settled_list.push((b, db));
            if match_b[bi] == UNSET {
                found = Some((b, db));
                break;
            }
            let a2 = match_b[bi] as usize;
            for &(b2, w2) in &adj[a2] {
                let b2i = b2 as usize;
                if settled[b2i] {
                    continue;
                }
                let nd = db + (w2 - pot_a[a2] - pot_b[b2i]);
                if nd < dist[b2i] {
                    dist[b2i] = nd;
                    way[b2i] = a2 as u32;
                    heap.push(HeapEntry { dist: nd, b: b2 });
                }
            }
        }

        let (b_star, d_star) = match found {
            Some(hit) => hit,
            None => {
                // every settled B-vertex is matched: those matches plus the
                // new vertex form a Hall violator
                let mut hall: Vec<usize> = settled_list
                    .iter()
                    .map(|&(b, _)| match_b[b as usize] as usize)
                    .collect();
                hall.push(a_new);
                hall.sort_unstable();
                return Err(MatchError::Infeasible(hall));
            }
        };

        // last A-vertex on the augmenting path, and its unmatched-neighbor
        // count before the path flips anything
        let sigma = way[b_star as usize] as usize;
        let delta_r = adj[sigma]
            .iter()
            .filter(|&&(b, _)| match_b[b as usize] == UNSET)
            .count();

        // potential update over settled vertices
        for &(b, db) in &settled_list {
            let slack = d_star - db;
            pot_b[b as usize] -= slack;
            if match_b[b as usize] != UNSET {
                pot_a[match_b[b as usize] as usize] += slack;
            }
        }
        pot_a[a_new] += d_star;

        // augment: flip along way[] back to the new vertex
        let mut delta_c = 0.0;
        let mut path_a_count = 0usize;
        let mut b_cur = b_star;
        loop {
            let a_i = way[b_cur as usize] as usize;
            let prev_b = match_a[a_i];
            delta_c += weight_of(a_i, b_cur);
            match_a[a_i] = b_cur;
            match_b[b_cur as usize] = a_i as u32;
            path_a_count += 1;
            if a_i == a_new {
                break;
            }
            delta_c -= weight_of(a_i, prev_b);
            b_cur = prev_b;
        }

        let mut max_edge_weight = 0.0f64;
        for &a in &order[..r] {
            max_edge_weight = max_edge_weight.max(weight_of(a, match_a[a]));
        }

        #[cfg(debug_assertions)]
        if n <= 64 {
            for &a in &order[..r] {
                let w = weight_of(a, match_a[a]);
                let slack = w - pot_a[a] - pot_b[match_a[a] as usize];
                debug_assert!(
                    slack.abs() <= 1e-9,
                    "matched edge not tight at step {}: slack {}",
                    r,
                    slack
                );
            }
        }

        increments.push(IncrementRecord {
            r,
            delta_c,
            sigma_vertex: sigma,
            delta_r,
            path_edges: 2 * path_a_count - 1,
            max_edge_weight,
            matched_b: b_star as usize,
        });
    }

    let matching: Vec<usize> = match_a.iter().map(|&b| b as usize).collect();
    let total_weight = matching
        .iter()
        .enumerate()
        .map(|(a, &b)| weight_of(a, b as u32))
        .sum();
    Ok(MatchingResult { total_weight, matching, increments, dual_a: pot_a, dual_b: pot_b })
}

/// Minimum-weight perfect matching: `match_increments` with the identity
/// order.
pub fn min_cost_perfect_matching(wg: &WeightedGraph) -> Result<MatchingResult, MatchError> {
    let order: Vec<usize> = (0..wg.graph.n()).collect();
    match_increments(wg, &order)
}

const BRUTE_LIMIT: usize = 8;

/// Oracle: minimum over all n! assignments, skipping non-edges. n <= 8.
pub fn matching_brute(wg: &WeightedGraph) -> Result<f64, MatchError> {
    if !wg.graph.is_bipartite() {
        return Err(MatchError::NotBipartite);
    }
    let n = wg.graph.n();
    if n > BRUTE_LIMIT {
        return Err(MatchError::SizeGuard { n, limit: BRUTE_LIMIT });
    }
    let mut cost = vec![vec![None::<f64>; n]; n];
    for (u, v, w) in wg.iter_edges() {
        cost[u as usize][v as usize - n] = Some(w);
    }
    fn descend(cost: &[Vec<Option<f64>>], a: usize, used: u16, acc: f64, best: &mut f64) {
        let n = cost.len();
        if a == n {
            if acc < *best {
                *best = acc;
            }
            return;
        }
        if acc >= *best {
            return;
        }
        for (b, c) in cost[a].iter().enumerate() {
            if used & (1 << b) != 0 {
                continue;
            }
            if let Some(w) = c {
                descend(cost, a + 1, used | (1 << b), acc + w, best);
            }
        }
    }
    let mut best = f64::INFINITY;
    descend(&cost, 0, 0, 0.0, &mut best);
    if best.is_infinite() {
        return Err(MatchError::Infeasible((0..n).collect()));
    }
    Ok(best)
}

/// Per-prefix aggregate over replicated matchings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementStats {
    pub r: usize,
    pub mean_delta_c: f64,
    pub se_delta_c: f64,
    /// mean over replications of (1/r) * sum_{i<=r} 1/delta_i
    pub mean_inv_delta: f64,
    pub se_inv_delta: f64,
    /// closed-form (1/(alpha r)) * sum_{i=1}^r 1/(n-i+1)
    pub prediction: f64,
}

fn mean_se(values: &[f64]) -> (f64, f64) {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Monte Carlo means of the cost increment and of the delta-reciprocal sum,
/// with standard errors, against the closed-form prediction at density
/// `alpha`. All replications must share one n.
pub fn increment_statistics(
    results: &[MatchingResult],
    alpha: f64,
) -> Result<Vec<IncrementStats>, MatchError> {
    let n = results.first().ok_or(MatchError::Empty)?.n();
    for res in results {
        if res.n() != n {
            return Err(MatchError::MixedSizes(n, res.n()));
        }
    }
    // per replication, prefix sums of 1/delta_i
    let inv_prefix: Vec<Vec<f64>> = results
        .iter()
        .map(|res| {
            let mut acc = 0.0;
            res.increments
                .iter()
                .map(|rec| {
                    acc += 1.0 / rec.delta_r as f64;
                    acc
                })
                .collect()
        })
        .collect();
    let hn = analysis::harmonic_table(n);
    let mut out = Vec::with_capacity(n);
    for r in 1..=n {
        let dc: Vec<f64> = results.iter().map(|res| res.increments[r - 1].delta_c).collect();
        let inv: Vec<f64> = inv_prefix.iter().map(|p| p[r - 1] / r as f64).collect();
        let (mean_delta_c, se_delta_c) = mean_se(&dc);
        let (mean_inv_delta, se_inv_delta) = mean_se(&inv);
        // sum_{i=1}^r 1/(n-i+1) = H_n - H_{n-r}
        let prediction = (hn[n] - hn[n - r]) / (alpha * r as f64);
        out.push(IncrementStats {
            r,
            mean_delta_c,
            se_delta_c,
            mean_inv_delta,
            se_inv_delta,
            prediction,
        });
    }
    Ok(out)
}

/// How many augmentation steps each A-vertex ended as the path's last
/// A-vertex. Sums to n.
pub fn sigma_counts(result: &MatchingResult) -> Vec<usize> {
    let mut counts = vec![0usize; result.n()];
    for rec in &result.increments {
        counts[rec.sigma_vertex] += 1;
    }
    counts
}

/// Long-edge diagnostic: compare the heaviest edge used by any prefix
/// matching against the threshold w1 = 2 w0 log n, w0 = c1 log n / (n p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongEdgeReport {
    pub max_edge_weight: f64,
    pub w0: f64,
    pub w1: f64,
    pub exceeds: bool,
}

pub fn long_edge_report(
    result: &MatchingResult,
    n: usize,
    p_effective: f64,
    c1: f64,
) -> LongEdgeReport {
    let log_n = (n as f64).ln();
    let w0 = c1 * log_n / (n as f64 * p_effective);
    let w1 = 2.0 * w0 * log_n;
    let max_edge_weight = result
        .increments
        .iter()
        .fold(0.0f64, |acc, rec| acc.max(rec.max_edge_weight));
    LongEdgeReport { max_edge_weight, w0, w1, exceeds: max_edge_weight > w1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::assign_weights;
    use crate::graph::Graph;
    use crate::rng::{random_permutation, unit_f64, RandomSource, WeightDistribution};
    use rayon::prelude::*;

    fn bip(n: usize, rows: &[(usize, usize, f64)]) -> WeightedGraph {
        let g = Graph::new_bipartite(n, rows.iter().map(|&(a, b, _)| (a, b)).collect()).unwrap();
        let mut weights = vec![0.0; rows.len()];
        for &(a, b, w) in rows {
            let key = (a as u32, (n + b) as u32);
            weights[g.edges().binary_search(&key).unwrap()] = w;
        }
        WeightedGraph::new(g, weights).unwrap()
    }

    /// Independent oracle for prefix costs: minimum-weight injection of the
    /// listed A-vertices into B by exhaustive recursion.
    fn brute_prefix(wg: &WeightedGraph, prefix: &[usize]) -> f64 {
        let n = wg.graph.n();
        let mut cost = vec![vec![None::<f64>; n]; n];
        for (u, v, w) in wg.iter_edges() {
            cost[u as usize][v as usize - n] = Some(w);
        }
        fn descend(
            cost: &[Vec<Option<f64>>],
            prefix: &[usize],
            i: usize,
            used: u16,
            acc: f64,
            best: &mut f64,
        ) {
            if i == prefix.len() {
                *best = best.min(acc);
                return;
            }
            for b in 0..cost.len() {
                if used & (1 << b) != 0 {
                    continue;
                }
                if let Some(w) = cost[prefix[i]][b] {
                    descend(cost, prefix, i + 1, used | (1 << b), acc + w, best);
                }
            }
        }
        let mut best = f64::INFINITY;
        descend(&cost, prefix, 0, 0, 0.0, &mut best);
        best
    }

    fn random_bip_instance(seed: u64, n: usize, edge_prob: f64) -> WeightedGraph {
        let src = RandomSource::new(seed);
        let mut rng = src.rng();
        let mut rows = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if unit_f64(&mut rng) < edge_prob {
                    rows.push((a, b, unit_f64(&mut rng)));
                }
            }
        }
        bip(n, &rows)
    }

    #[test]
    fn single_edge() {
        let wgr = bip(1, &[(0, 0, 0.7)]);
        let res = match_increments(&wgr, &[0]).unwrap();
        assert_eq!(res.total_weight, 0.7);
        assert_eq!(res.increments.len(), 1);
        let rec = &res.increments[0];
        assert_eq!(rec.delta_c, 0.7);
        assert_eq!(rec.delta_r, 1);
        assert_eq!(rec.path_edges, 1);
    }

    #[test]
    fn two_by_two_forced_trade() {
        let wgr = bip(
            2,
            &[(0, 0, 1.0), (0, 1, 2.0), (1, 0, 3.0), (1, 1, 1.0)],
        );
        let res = min_cost_perfect_matching(&wgr).unwrap();
        assert!((res.total_weight - 2.0).abs() < 1e-12);
        assert_eq!(res.matching, vec![0, 1]);
    }

    #[test]
    fn diagonal_only_graph() {
        let n = 5;
        let rows: Vec<(usize, usize, f64)> =
            (0..n).map(|i| (i, i, 0.1 * (i + 1) as f64)).collect();
        let wgr = bip(n, &rows);
        let res = min_cost_perfect_matching(&wgr).unwrap();
        let expect: f64 = rows.iter().map(|&(_, _, w)| w).sum();
        assert!((res.total_weight - expect).abs() < 1e-12);
        // every vertex is its own path end
        assert_eq!(sigma_counts(&res), vec![1; n]);
    }

    #[test]
    fn complete_two_by_two_equal_weights() {
        let wgr = bip(2, &[(0, 0, 0.4), (0, 1, 0.4), (1, 0, 0.4), (1, 1, 0.4)]);
        let res = min_cost_perfect_matching(&wgr).unwrap();
        assert!((res.total_weight - 0.8).abs() < 1e-12);
    }

    #[test]
    fn brute_small_cases() {
        let one = bip(1, &[(0, 0, 0.3)]);
        assert_eq!(matching_brute(&one).unwrap(), 0.3);

        let mut rows = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                rows.push((a, b, if a == b { 0.0 } else { 1.0 }));
            }
        }
        let ident = bip(3, &rows);
        assert_eq!(matching_brute(&ident).unwrap(), 0.0);
    }

    #[test]
    fn matcher_matches_brute_on_random_instances() {
        let mut feasible = 0;
        for seed in 0..60u64 {
            let n = 2 + (seed as usize % 6);
            let wgr = random_bip_instance(seed, n, 0.6);
            let order: Vec<usize> = (0..n).collect();
            match (matching_brute(&wgr), match_increments(&wgr, &order)) {
                (Ok(expected), Ok(res)) => {
                    assert!(
                        (res.total_weight - expected).abs() < 1e-9,
                        "seed {}: {} vs {}",
                        seed,
                        res.total_weight,
                        expected
                    );
                    feasible += 1;
                }
                (Err(MatchError::Infeasible(_)), Err(MatchError::Infeasible(_))) => {}
                (b, m) => panic!("seed {}: oracle {:?} vs matcher {:?}", seed, b, m),
            }
        }
        assert!(feasible >= 30);
    }

    #[test]
    fn prefix_costs_are_optimal() {
        for seed in 100..200u64 {
            let n = 4 + (seed as usize % 4);
            let wgr = random_bip_instance(seed, n, 0.8);
            let order = random_permutation(n, &mut RandomSource::new(seed ^ 0xff).rng());
            let res = match match_increments(&wgr, &order) {
                Ok(res) => res,
                Err(MatchError::Infeasible(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            let mut prefix_cost = 0.0;
            for r in 1..=n {
                prefix_cost += res.increments[r - 1].delta_c;
                let oracle = brute_prefix(&wgr, &order[..r]);
                assert!(
                    (prefix_cost - oracle).abs() < 1e-9,
                    "seed {} r {}: {} vs {}",
                    seed,
                    r,
                    prefix_cost,
                    oracle
                );
            }
        }
    }

    #[test]
    fn increments_are_nonnegative_and_sum_to_total() {
        let wgr = random_bip_instance(7, 7, 0.9);
        let res = min_cost_perfect_matching(&wgr).unwrap();
        let mut acc = 0.0;
        for rec in &res.increments {
            assert!(rec.delta_c >= -1e-12);
            assert!(rec.path_edges % 2 == 1);
            assert!(rec.delta_r >= 1);
            acc += rec.delta_c;
        }
        assert!((acc - res.total_weight).abs() < 1e-9);
    }

    #[test]
    fn order_invariance_of_total() {
        for seed in 0..50u64 {
            let n = 5 + (seed as usize % 3);
            let wgr = random_bip_instance(seed * 31 + 1, n, 1.0);
            let base = min_cost_perfect_matching(&wgr).unwrap().total_weight;
            for k in 0..10u64 {
                let order =
                    random_permutation(n, &mut RandomSource::stream(seed, k).rng());
                let res = match_increments(&wgr, &order).unwrap();
                assert!(
                    (res.total_weight - base).abs() < 1e-9,
                    "seed {} order {:?}",
                    seed,
                    order
                );
            }
        }
    }

    #[test]
    fn matched_edges_tight_in_reduced_costs() {
        let g = Graph::complete_bipartite(40);
        let wgr = assign_weights(&g, WeightDistribution::ExponentialMeanOne, &RandomSource::new(3));
        let res = min_cost_perfect_matching(&wgr).unwrap();
        for (a, &b) in res.matching.iter().enumerate() {
            let key = (a as u32, (40 + b) as u32);
            let w = wgr.weight(wgr.graph.edges().binary_search(&key).unwrap());
            let slack = w - res.dual_a[a] - res.dual_b[b];
            assert!(slack.abs() <= 1e-9, "a {}: slack {}", a, slack);
        }
    }

    #[test]
    fn delta_r_matches_independent_recount() {
        // replay the matched_b sequence to rebuild each B_{r-1} and recount
        for seed in 0..100u64 {
            let n = 6 + (seed as usize % 5);
            let wgr = random_bip_instance(seed * 7 + 3, n, 0.9);
            let order = random_permutation(n, &mut RandomSource::new(seed).rng());
            let res = match match_increments(&wgr, &order) {
                Ok(res) => res,
                Err(MatchError::Infeasible(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            let mut matched = vec![false; n];
            for rec in &res.increments {
                let recount = wgr
                    .graph
                    .neighbors(rec.sigma_vertex)
                    .iter()
                    .filter(|&&b| !matched[b as usize - n])
                    .count();
                assert_eq!(rec.delta_r, recount, "seed {} r {}", seed, rec.r);
                matched[rec.matched_b] = true;
            }
        }
    }

    #[test]
    fn infeasible_reports_hall_violator() {
        // a0 and a1 both see only b0
        let wgr = bip(3, &[(0, 0, 1.0), (1, 0, 1.0), (2, 1, 1.0), (2, 2, 1.0)]);
        match min_cost_perfect_matching(&wgr) {
            Err(MatchError::Infeasible(hall)) => {
                assert_eq!(hall, vec![0, 1]);
                // verify the witness: the joint neighborhood is smaller
                let mut nbrs = std::collections::BTreeSet::<u32>::new();
                for &a in &hall {
                    nbrs.extend(wgr.graph.neighbors(a));
                }
                assert!(nbrs.len() < hall.len());
            }
            other => panic!("expected infeasible, got {:?}", other),
        }
    }

    #[test]
    fn increment_statistics_single_rep() {
        let wgr = bip(1, &[(0, 0, 0.9)]);
        let res = match_increments(&wgr, &[0]).unwrap();
        let stats = increment_statistics(&[res], 1.0).unwrap();
        assert_eq!(stats.len(), 1);
        assert_eq!(stats[0].mean_delta_c, 0.9);
        assert_eq!(stats[0].mean_inv_delta, 1.0);
        // prediction at n = r = 1: H_1 / 1 = 1
        assert!((stats[0].prediction - 1.0).abs() < 1e-15);
    }

    #[test]
    fn increment_prediction_at_full_prefix_is_harmonic() {
        // complete bipartite, alpha = 1: prediction at r = n is H_n / n
        let n = 12;
        let g = Graph::complete_bipartite(n);
        let wgr = assign_weights(&g, WeightDistribution::ExponentialMeanOne, &RandomSource::new(4));
        let res = min_cost_perfect_matching(&wgr).unwrap();
        let stats = increment_statistics(&[res], 1.0).unwrap();
        let hn = analysis::harmonic(n as u64);
        assert!((stats[n - 1].prediction - hn / n as f64).abs() < 1e-12);
    }

    #[test]
    fn increment_statistics_rejects_mixed_sizes() {
        let a = min_cost_perfect_matching(&bip(1, &[(0, 0, 1.0)])).unwrap();
        let b = min_cost_perfect_matching(&bip(
            2,
            &[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)],
        ))
        .unwrap();
        assert!(matches!(
            increment_statistics(&[a, b], 1.0),
            Err(MatchError::MixedSizes(1, 2))
        ));
    }

    #[test]
    fn sigma_counts_sum_to_n_with_pinned_max() {
        let n = 50;
        let g = Graph::complete_bipartite(n);
        let wgr = assign_weights(
            &g,
            WeightDistribution::ExponentialMeanOne,
            &RandomSource::new(crate::DEFAULT_BASE_SEED),
        );
        let res = min_cost_perfect_matching(&wgr).unwrap();
        let counts = sigma_counts(&res);
        assert_eq!(counts.iter().sum::<usize>(), n);
        // pinned for the default seed; re-derive with the recount test above
        assert_eq!(counts.iter().max().copied().unwrap(), PINNED_MAX_SIGMA_COUNT);
    }

    // value observed once for (K_{50,50}, Exp(1), DEFAULT_BASE_SEED) and frozen
    const PINNED_MAX_SIGMA_COUNT: usize = 3;

    #[test]
    fn long_edge_formula() {
        // n = e^2, p = 1, c1 = 1: w0 = 2 e^-2, w1 = 8 e^-2
        let res = MatchingResult {
            total_weight: 0.0,
            matching: vec![],
            increments: vec![],
            dual_a: vec![],
            dual_b: vec![],
        };
        let n = std::f64::consts::E * std::f64::consts::E;
        let rep = long_edge_report(&res, n.round() as usize, 1.0, 1.0);
        // n rounds to 7, so evaluate the formula directly as well
        let exact_w0 = 1.0 * (7.0f64).ln() / 7.0;
        assert!((rep.w0 - exact_w0).abs() < 1e-12);
        assert!((rep.w1 - 2.0 * exact_w0 * (7.0f64).ln()).abs() < 1e-12);
        assert!(!rep.exceeds);
    }

    #[test]
    fn long_edge_all_below_unit_threshold() {
        let wgr = bip(2, &[(0, 0, 0.2), (0, 1, 0.3), (1, 0, 0.1), (1, 1, 0.4)]);
        let res = min_cost_perfect_matching(&wgr).unwrap();
        let rep = long_edge_report(&res, 100, 1.0, 10.0); // w1 = 2 * 10 * ln(100)^2 / 100 > 1
        assert!(rep.w1 > 1.0);
        assert!(!rep.exceeds);
    }

    #[test]
    fn random_bipartite_matching_tracks_inverse_density() {
        // on bipartite G(n, p) with exponential weights the matching cost
        // approaches zeta(2)/p; checked loosely at desk scale
        let n = 150usize;
        let p = 0.5;
        let empty = Graph::new_bipartite(n, vec![]).unwrap();
        let reps = 40u64;
        let vals: Vec<f64> = (0..reps)
            .into_par_iter()
            .map(|rep| {
                let src = RandomSource::stream(909, rep);
                let g = crate::ensembles::augment(
                    &empty,
                    &crate::ensembles::AugmentSpec::Bernoulli(p),
                    &src.substream(1),
                )
                .unwrap();
                let wgr =
                    assign_weights(&g, WeightDistribution::ExponentialMeanOne, &src.substream(2));
                min_cost_perfect_matching(&wgr).unwrap().total_weight
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / reps as f64;
        let target = analysis::ZETA2 / p;
        assert!(
            (mean - target).abs() / target <= 0.08,
            "mean = {} vs {}",
            mean,
            target
        );
    }

    #[test]
    fn long_edges_rare_on_complete_bipartite() {
        // 100 seeds on K_{200,200}: the c1 = 8 threshold is exceeded in at
        // most one run
        let n = 200;
        let g = Graph::complete_bipartite(n);
        let exceed_count: usize = (0..100u64)
            .into_par_iter()
            .map(|seed| {
                let wgr = assign_weights(
                    &g,
                    WeightDistribution::ExponentialMeanOne,
                    &RandomSource::stream(808, seed),
                );
                let res = min_cost_perfect_matching(&wgr).unwrap();
                long_edge_report(&res, n, 1.0, 8.0).exceeds as usize
            })
            .sum();
        assert!(exceed_count <= 1, "exceeded in {} of 100 runs", exceed_count);
    }
}
