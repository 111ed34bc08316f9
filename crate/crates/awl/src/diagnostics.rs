//! Structural diagnostics: co-degree pseudo-randomness, cut expansion
//! ratios, and pairwise edge-count discrepancy.

use thiserror::Error;

use crate::graph::Graph;
use crate::rng::{sample_distinct, RandomSource};

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("operation requires a bipartite graph")]
    NotBipartite,
    #[error("vertex subset must be a proper nonempty subset")]
    BadSubset,
    #[error("vertex {0} out of range or repeated in subset")]
    BadSubsetVertex(usize),
}

/// Co-degree deviation over all unordered pairs of A-vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodegreeReport {
    /// max over pairs u,v in A of |codeg(u,v) - alpha^2 n|
    pub mu_max: f64,
    /// mean of the same deviation over all pairs
    pub mu_mean: f64,
    /// mean A-degree over n
    pub alpha: f64,
}

/// Exact co-degree scan: codeg(u,v) counted through B-side adjacency,
/// O(sum of B-degrees squared).
pub fn codegree_deviation(g: &Graph) -> Result<CodegreeReport, DiagnosticsError> {
    if !g.is_bipartite() {
        return Err(DiagnosticsError::NotBipartite);
    }
    let n = g.n();
    let alpha = g.alpha();
    let target = alpha * alpha * n as f64;
    if n < 2 {
        return Ok(CodegreeReport { mu_max: 0.0, mu_mean: 0.0, alpha });
    }
    // triangular pair counts, index pair (u < v) -> u*n - u*(u+1)/2 + (v - u - 1)
    let pairs = n * (n - 1) / 2;
    let mut codeg = vec![0u32; pairs];
    for b in n..2 * n {
        let nbrs = g.neighbors(b);
        for (i, &u) in nbrs.iter().enumerate() {
            let u = u as usize;
            let row_base = u * n - u * (u + 1) / 2;
            for &v in &nbrs[i + 1..] {
                codeg[row_base + (v as usize - u - 1)] += 1;
            }
        }
    }
    let mut mu_max = 0.0f64;
    let mut sum = 0.0f64;
    for &c in &codeg {
        let dev = (c as f64 - target).abs();
        mu_max = mu_max.max(dev);
        sum += dev;
    }
    Ok(CodegreeReport { mu_max, mu_mean: sum / pairs as f64, alpha })
}

/// Boundary edges of S divided by |S|.
pub fn cut_ratio(g: &Graph, subset: &[usize]) -> Result<f64, DiagnosticsError> {
    let vcount = g.vertex_count();
    if subset.is_empty() || subset.len() >= vcount {
        return Err(DiagnosticsError::BadSubset);
    }
    let mut inside = vec![false; vcount];
    for &v in subset {
        if v >= vcount || inside[v] {
            return Err(DiagnosticsError::BadSubsetVertex(v));
        }
        inside[v] = true;
    }
    let mut boundary = 0usize;
    for &u in subset {
        for &w in g.neighbors(u) {
            if !inside[w as usize] {
                boundary += 1;
            }
        }
    }
    Ok(boundary as f64 / subset.len() as f64)
}

/// Minimum cut ratio over `trials` uniformly sampled subsets of the given
/// size. A diagnostic lower estimate, not an expansion certificate.
pub fn sample_min_cut_ratio(
    g: &Graph,
    size: usize,
    trials: usize,
    src: &RandomSource,
) -> Result<f64, DiagnosticsError> {
    let vcount = g.vertex_count();
    if size == 0 || size >= vcount {
        return Err(DiagnosticsError::BadSubset);
    }
    let mut rng = src.rng();
    let mut best = f64::INFINITY;
    for _ in 0..trials {
        let subset = sample_distinct(vcount, size, &mut rng);
        best = best.min(cut_ratio(g, &subset)?);
    }
    Ok(best)
}

/// Discrepancy check for one (X, Y) pair: is |e(X,Y) - alpha x y| within
/// (x y (alpha n + mu x))^(1/2)?
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCountReport {
    pub e_xy: usize,
    pub expected: f64,
    pub deviation: f64,
    pub bound: f64,
    pub satisfied: bool,
    /// alpha |X| > 1, the hypothesis under which the bound is claimed;
    /// a violation is flagged here rather than treated as fatal.
    pub hypothesis_met: bool,
}

/// Count edges between X (A-side locals) and Y (B-side locals) and compare
/// the deviation from alpha x y against the discrepancy bound. `mu` comes
/// from [`codegree_deviation`].
pub fn edge_count_deviation(
    g: &Graph,
    xs: &[usize],
    ys: &[usize],
    mu: f64,
) -> Result<EdgeCountReport, DiagnosticsError> {
    if !g.is_bipartite() {
        return Err(DiagnosticsError::NotBipartite);
    }
    let n = g.n();
    for &a in xs {
        if a >= n {
            return Err(DiagnosticsError::BadSubsetVertex(a));
        }
    }
    let mut in_y = vec![false; n];
    for &b in ys {
        if b >= n {
            return Err(DiagnosticsError::BadSubsetVertex(b));
        }
        in_y[b] = true;
    }
    let mut e_xy = 0usize;
    for &a in xs {
        for &w in g.neighbors(a) {
            if in_y[w as usize - n] {
                e_xy += 1;
            }
        }
    }
    let alpha = g.alpha();
    let x = xs.len() as f64;
    let y = ys.len() as f64;
    let expected = alpha * x * y;
    let deviation = (e_xy as f64 - expected).abs();
    let bound = (x * y * (alpha * n as f64 + mu * x)).sqrt();
    Ok(EdgeCountReport {
        e_xy,
        expected,
        deviation,
        bound,
        satisfied: deviation <= bound,
        hypothesis_met: alpha * x > 1.0,
    })
}
