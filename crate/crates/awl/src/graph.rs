//! Graph and weighted-graph value types.
//!
//! Vertices are global indices. A general graph on `n` vertices uses `0..n`.
//! A bipartite graph has `n` vertices per side: side A is `0..n`, side B is
//! `n..2n`, and every edge crosses sides. Edge lists are kept sorted by
//! normalized `(u, v)` pair with `u < v`; weights are assigned in that order,
//! so a `(graph, distribution, seed)` triple always yields the same weights.

use std::collections::BTreeSet;
use std::io::{self, BufRead, Write};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    General,
    Bipartite,
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("vertex {0} out of range (vertex count {1})")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) does not cross the bipartition")]
    NotCrossEdge(usize, usize),
    #[error("weight count {0} does not match edge count {1}")]
    WeightCountMismatch(usize, usize),
    #[error("weight {0} at edge index {1} is negative or not finite")]
    BadWeight(f64, usize),
    #[error("parse error at line {0}: {1}")]
    Parse(usize, String),
}

/// Undirected simple graph, general or bipartite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    kind: GraphKind,
    n: usize,
    edges: Vec<(u32, u32)>,
    augmented: Vec<bool>,
    adjacency: Vec<Vec<u32>>,
}

impl Graph {
    /// General graph from a list of unordered vertex pairs (any orientation).
    pub fn new_general(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        Self::build(GraphKind::General, n, edges)
    }

    /// Bipartite graph on `n + n` vertices from (A-index, B-index) local pairs.
    pub fn new_bipartite(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let global = edges.into_iter().map(|(a, b)| (a, n + b)).collect();
        Self::build(GraphKind::Bipartite, n, global)
    }

    fn build(kind: GraphKind, n: usize, raw: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let vcount = match kind {
            GraphKind::General => n,
            GraphKind::Bipartite => 2 * n,
        };
        let mut edges = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            if a >= vcount {
                return Err(GraphError::VertexOutOfRange(a, vcount));
            }
            if b >= vcount {
                return Err(GraphError::VertexOutOfRange(b, vcount));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if kind == GraphKind::Bipartite && !(u < n && v >= n) {
                return Err(GraphError::NotCrossEdge(u, v));
            }
            edges.push((u as u32, v as u32));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0 as usize, w[0].1 as usize));
        }
        let augmented = vec![false; edges.len()];
        let adjacency = build_adjacency(vcount, &edges);
        Ok(Self { kind, n, edges, augmented, adjacency })
    }

    /// Used by `augment`: rebuild with some edges flagged as augmentations.
    pub(crate) fn with_augmented(
        kind: GraphKind,
        n: usize,
        mut tagged: Vec<(u32, u32, bool)>,
    ) -> Self {
        tagged.sort_unstable();
        let edges: Vec<(u32, u32)> = tagged.iter().map(|&(u, v, _)| (u, v)).collect();
        debug_assert!(edges.windows(2).all(|w| w[0] != w[1]));
        let augmented = tagged.iter().map(|&(_, _, a)| a).collect();
        let vcount = match kind {
            GraphKind::General => n,
            GraphKind::Bipartite => 2 * n,
        };
        let adjacency = build_adjacency(vcount, &edges);
        Self { kind, n, edges, augmented, adjacency }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Self::new_general(n, edges).expect("complete graph is valid")
    }

    pub fn complete_bipartite(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                edges.push((a, b));
            }
        }
        Self::new_bipartite(n, edges).expect("complete bipartite graph is valid")
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn is_bipartite(&self) -> bool {
        self.kind == GraphKind::Bipartite
    }

    /// Vertex count for general graphs; per-side count for bipartite.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of vertices (2n for bipartite).
    pub fn vertex_count(&self) -> usize {
        match self.kind {
            GraphKind::General => self.n,
            GraphKind::Bipartite => 2 * self.n,
        }
    }

    /// Edges as normalized global pairs, sorted lexicographically.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// True if edge index `i` was added by augmentation.
    pub fn is_augmented(&self, i: usize) -> bool {
        self.augmented[i]
    }

    pub fn augmented_count(&self) -> usize {
        self.augmented.iter().filter(|&&a| a).count()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn mean_degree(&self) -> f64 {
        if self.vertex_count() == 0 {
            return 0.0;
        }
        2.0 * self.edge_count() as f64 / self.vertex_count() as f64
    }

    /// Density parameter: mean degree over n. For bipartite graphs this is
    /// |E| / n^2, i.e. the mean per-side degree over n; exactly d/n on a
    /// d-regular graph of either kind.
    pub fn alpha(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        match self.kind {
            GraphKind::General => self.mean_degree() / self.n as f64,
            GraphKind::Bipartite => self.edge_count() as f64 / (self.n as f64 * self.n as f64),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.component_of(0).len() == self.vertex_count()
    }

    /// Vertices reachable from `start` (BFS), ascending.
    pub fn component_of(&self, start: usize) -> Vec<usize> {
        let vcount = self.vertex_count();
        let mut seen = vec![false; vcount];
        let mut queue = std::collections::VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w as usize);
                }
            }
        }
        (0..vcount).filter(|&v| seen[v]).collect()
    }

    /// Plain-text edge list: header `kind n [nB]`, then `u v` per edge.
    /// Bipartite edges are written with local indices on each side.
    pub fn write_text(&self, w: &mut impl Write) -> io::Result<()> {
        match self.kind {
            GraphKind::General => writeln!(w, "general {}", self.n)?,
            GraphKind::Bipartite => writeln!(w, "bipartite {} {}", self.n, self.n)?,
        }
        for &(u, v) in &self.edges {
            let (a, b) = self.local_pair(u, v);
            writeln!(w, "{} {}", a, b)?;
        }
        Ok(())
    }

    pub fn read_text(r: &mut impl BufRead) -> Result<Self, GraphError> {
        let (kind, n, lines) = read_header_and_lines(r)?;
        let mut edges = Vec::new();
        for (lineno, line) in lines {
            let mut it = line.split_whitespace();
            let u = parse_field::<usize>(it.next(), lineno, "u")?;
            let v = parse_field::<usize>(it.next(), lineno, "v")?;
            if it.next().is_some() {
                return Err(GraphError::Parse(lineno, "trailing fields".into()));
            }
            edges.push((u, v));
        }
        match kind {
            GraphKind::General => Self::new_general(n, edges),
            GraphKind::Bipartite => Self::new_bipartite(n, edges),
        }
    }

    fn local_pair(&self, u: u32, v: u32) -> (usize, usize) {
        match self.kind {
            GraphKind::General => (u as usize, v as usize),
            GraphKind::Bipartite => (u as usize, v as usize - self.n),
        }
    }

    /// Set of normalized global edge pairs.
    pub fn edge_set(&self) -> BTreeSet<(u32, u32)> {
        self.edges.iter().copied().collect()
    }
}

fn build_adjacency(vcount: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut adjacency = vec![Vec::new(); vcount];
    for &(u, v) in edges {
        adjacency[u as usize].push(v);
        adjacency[v as usize].push(u);
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    adjacency
}

/// Graph plus one nonnegative finite weight per edge, aligned with
/// `graph.edges()` order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    pub graph: Graph,
    weights: Vec<f64>,
}

impl WeightedGraph {
    pub fn new(graph: Graph, weights: Vec<f64>) -> Result<Self, GraphError> {
        if weights.len() != graph.edge_count() {
            return Err(GraphError::WeightCountMismatch(weights.len(), graph.edge_count()));
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(GraphError::BadWeight(w, i));
            }
        }
        Ok(Self { graph, weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, edge_index: usize) -> f64 {
        self.weights[edge_index]
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Per-edge `(u, v, w)` rows in stored order.
    pub fn iter_edges(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.graph
            .edges()
            .iter()
            .zip(&self.weights)
            .map(|(&(u, v), &w)| (u, v, w))
    }

    /// Plain-text edge list with weights printed to 17 significant digits,
    /// which round-trips f64 exactly.
    pub fn write_text(&self, w: &mut impl Write) -> io::Result<()> {
        match self.graph.kind() {
            GraphKind::General => writeln!(w, "general {}", self.graph.n())?,
            GraphKind::Bipartite => writeln!(w, "bipartite {} {}", self.graph.n(), self.graph.n())?,
        }
        for (i, &(u, v)) in self.graph.edges().iter().enumerate() {
            let (a, b) = self.graph.local_pair(u, v);
            writeln!(w, "{} {} {:.16e}", a, b, self.weights[i])?;
        }
        Ok(())
    }

    pub fn read_text(r: &mut impl BufRead) -> Result<Self, GraphError> {
        let (kind, n, lines) = read_header_and_lines(r)?;
        let mut edges = Vec::new();
        for (lineno, line) in lines {
            let mut it = line.split_whitespace();
            let u = parse_field::<usize>(it.next(), lineno, "u")?;
            let v = parse_field::<usize>(it.next(), lineno, "v")?;
            let w = parse_field::<f64>(it.next(), lineno, "weight")?;
            if it.next().is_some() {
                return Err(GraphError::Parse(lineno, "trailing fields".into()));
            }
            edges.push((u, v, w));
        }
        // Edge storage is sorted; sort the parsed rows the same way so
        // weights line up no matter the input order.
        let graph = match kind {
            GraphKind::General => {
                Graph::new_general(n, edges.iter().map(|&(u, v, _)| (u, v)).collect())?
            }
            GraphKind::Bipartite => {
                Graph::new_bipartite(n, edges.iter().map(|&(u, v, _)| (u, v)).collect())?
            }
        };
        let mut weights = vec![0.0; edges.len()];
        for (u, v, w) in edges {
            let (mut gu, mut gv) = match kind {
                GraphKind::General => (u as u32, v as u32),
                GraphKind::Bipartite => (u as u32, (n + v) as u32),
            };
            if gu > gv {
                std::mem::swap(&mut gu, &mut gv);
            }
            let idx = graph
                .edges()
                .binary_search(&(gu, gv))
                .expect("edge present by construction");
            weights[idx] = w;
        }
        WeightedGraph::new(graph, weights)
    }
}

/// (kind, n, numbered non-blank body lines)
type ParsedHeader = (GraphKind, usize, Vec<(usize, String)>);

fn read_header_and_lines(r: &mut impl BufRead) -> Result<ParsedHeader, GraphError> {
    let mut header = String::new();
    r.read_line(&mut header)
        .map_err(|e| GraphError::Parse(1, e.to_string()))?;
    let mut it = header.split_whitespace();
    let kind = match it.next() {
        Some("general") => GraphKind::General,
        Some("bipartite") => GraphKind::Bipartite,
        other => {
            return Err(GraphError::Parse(
                1,
                format!("expected kind 'general' or 'bipartite', got {:?}", other),
            ))
        }
    };
    let n = parse_field::<usize>(it.next(), 1, "n")?;
    if kind == GraphKind::Bipartite {
        let nb = parse_field::<usize>(it.next(), 1, "nB")?;
        if nb != n {
            return Err(GraphError::Parse(1, format!("nB {} != nA {}", nb, n)));
        }
    }
    let mut lines = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| GraphError::Parse(i + 2, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        lines.push((i + 2, line));
    }
    Ok((kind, n, lines))
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    lineno: usize,
    name: &str,
) -> Result<T, GraphError> {
    field
        .ok_or_else(|| GraphError::Parse(lineno, format!("missing field {}", name)))?
        .parse::<T>()
        .map_err(|_| GraphError::Parse(lineno, format!("bad field {}", name)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::new_general(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    #[test]
    fn rejects_self_loop_and_duplicates() {
        assert_eq!(
            Graph::new_general(3, vec![(0, 0)]).unwrap_err(),
            GraphError::SelfLoop(0)
        );
        assert_eq!(
            Graph::new_general(3, vec![(0, 1), (1, 0)]).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        assert!(matches!(
            Graph::new_general(3, vec![(0, 5)]).unwrap_err(),
            GraphError::VertexOutOfRange(5, 3)
        ));
    }

    #[test]
    fn bipartite_edges_cross_sides() {
        let g = Graph::new_bipartite(2, vec![(0, 0), (1, 1)]).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert!(g.has_edge(0, 2) && g.has_edge(1, 3));
        assert_eq!(g.degree(0), 1);
    }

    #[test]
    fn adjacency_is_symmetric_and_sorted() {
        let g = cycle(6);
        for v in 0..6 {
            for &w in g.neighbors(v) {
                assert!(g.neighbors(w as usize).contains(&(v as u32)));
            }
            let mut sorted = g.neighbors(v).to_vec();
            sorted.sort_unstable();
            assert_eq!(sorted, g.neighbors(v));
        }
    }

    #[test]
    fn connectivity() {
        assert!(cycle(6).is_connected());
        let two = Graph::new_general(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(!two.is_connected());
        assert_eq!(two.component_of(0), vec![0, 1]);
    }

    #[test]
    fn alpha_matches_regular_degree() {
        let g = Graph::complete(5);
        assert!((g.alpha() - 4.0 / 5.0).abs() < 1e-15);
        let kb = Graph::complete_bipartite(4);
        assert!((kb.alpha() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weighted_graph_validates() {
        let g = cycle(3);
        assert!(WeightedGraph::new(g.clone(), vec![0.1, 0.2]).is_err());
        assert!(WeightedGraph::new(g.clone(), vec![0.1, -0.2, 0.3]).is_err());
        assert!(WeightedGraph::new(g.clone(), vec![0.1, f64::NAN, 0.3]).is_err());
        assert!(WeightedGraph::new(g, vec![0.1, 0.2, 0.3]).is_ok());
    }

    #[test]
    fn text_round_trip_general() {
        let g = cycle(5);
        let wg = WeightedGraph::new(g, vec![0.1, 0.25, 1.0 / 3.0, 0.625, 1e-300]).unwrap();
        let mut buf = Vec::new();
        wg.write_text(&mut buf).unwrap();
        let back = WeightedGraph::read_text(&mut buf.as_slice()).unwrap();
        assert_eq!(back.graph, wg.graph);
        for (a, b) in back.weights().iter().zip(wg.weights()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn text_round_trip_bipartite_unweighted() {
        let g = Graph::new_bipartite(3, vec![(0, 1), (1, 0), (2, 2)]).unwrap();
        let mut buf = Vec::new();
        g.write_text(&mut buf).unwrap();
        let back = Graph::read_text(&mut buf.as_slice()).unwrap();
        assert_eq!(back, g);
    }
}
