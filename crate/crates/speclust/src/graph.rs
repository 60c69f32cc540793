//! Weighted-graph representation: similarity matrices, degrees, Laplacians,
//! connectivity, and the cluster-wise edge split.
//!
//! Everything is dense `f64`. A [`SimilarityMatrix`] enforces at construction
//! that it is square, finite, nonnegative, exactly symmetric, and zero on the
//! diagonal, so downstream code never revalidates.

use crate::partition::Clustering;
use crate::tolerances::SYMMETRY_TOL;
use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must have at least one node")]
    Empty,
    #[error("entry ({i},{j}) = {value} is not finite")]
    NotFinite { i: usize, j: usize, value: f64 },
    #[error("entry ({i},{j}) = {value} is negative; similarities are nonnegative")]
    Negative { i: usize, j: usize, value: f64 },
    #[error("diagonal entry ({i},{i}) = {value}; self-similarity must be 0")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("asymmetry at ({i},{j}): {a} vs {b} exceeds tolerance")]
    Asymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("edge ({u},{v}) out of range for {n} nodes")]
    EdgeOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at node {u} is not allowed")]
    SelfLoop { u: usize },
    #[error("normalized Laplacian requested but node {i} has zero degree")]
    IsolatedNode { i: usize },
    #[error("labels cover {labels} nodes but the graph has {n}")]
    LabelSizeMismatch { labels: usize, n: usize },
}

/// Symmetric nonnegative weighted adjacency over `n` nodes, the universal
/// graph input. Weight 0 means "no edge"; the diagonal is identically 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    w: DMatrix<f64>,
}

impl SimilarityMatrix {
    /// Validate and ingest a dense matrix. Symmetry is checked within
    /// [`SYMMETRY_TOL`] relative to the largest entry, then enforced exactly
    /// by averaging mirrored entries.
    pub fn from_dense(m: DMatrix<f64>) -> Result<Self, GraphError> {
        let (rows, cols) = m.shape();
        if rows != cols {
            return Err(GraphError::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(GraphError::Empty);
        }
        let mut max_abs: f64 = 0.0;
        for j in 0..cols {
            for i in 0..rows {
                let v = m[(i, j)];
                if !v.is_finite() {
                    return Err(GraphError::NotFinite { i, j, value: v });
                }
                if v < 0.0 {
                    return Err(GraphError::Negative { i, j, value: v });
                }
                max_abs = max_abs.max(v.abs());
            }
        }
        for i in 0..rows {
            let v = m[(i, i)];
            if v != 0.0 {
                return Err(GraphError::NonzeroDiagonal { i, value: v });
            }
        }
        let tol = SYMMETRY_TOL * max_abs.max(1.0);
        let mut w = m;
        for i in 0..rows {
            for j in (i + 1)..cols {
                let a = w[(i, j)];
                let b = w[(j, i)];
                if (a - b).abs() > tol {
                    return Err(GraphError::Asymmetric { i, j, a, b });
                }
                let avg = 0.5 * (a + b);
                w[(i, j)] = avg;
                w[(j, i)] = avg;
            }
        }
        Ok(SimilarityMatrix { w })
    }

    /// Build from an undirected edge list. Duplicate mentions of an edge keep
    /// the maximum weight (mirroring how redundant directed lines in edge
    /// files are reconciled). Zero-weight entries are dropped.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut w = DMatrix::<f64>::zeros(n, n);
        for &(u, v, weight) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EdgeOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { u });
            }
            if !weight.is_finite() {
                return Err(GraphError::NotFinite { i: u, j: v, value: weight });
            }
            if weight < 0.0 {
                return Err(GraphError::Negative { i: u, j: v, value: weight });
            }
            let kept = w[(u, v)].max(weight);
            w[(u, v)] = kept;
            w[(v, u)] = kept;
        }
        Ok(SimilarityMatrix { w })
    }

    pub fn n(&self) -> usize {
        self.w.nrows()
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.w[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.w
    }

    /// Undirected edges with positive weight, as (u, v, w) with u < v.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let w = self.w[(u, v)];
                if w > 0.0 {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    /// Sum of all edge weights, each undirected edge counted once.
    pub fn total_weight(&self) -> f64 {
        self.edges().iter().map(|&(_, _, w)| w).sum()
    }
}

/// Weighted degrees (strengths): row sums of the similarity matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Degrees(Vec<f64>);

impl Degrees {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }
}

/// Which Laplacian to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianKind {
    /// `L = D − A`.
    Unnormalized,
    /// `L = I − D^{−1/2} A D^{−1/2}`.
    Normalized,
}

/// A graph Laplacian carrying the kind it was built as. Exactly symmetric by
/// construction (symmetrized by averaging to absorb rounding drift).
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    kind: LaplacianKind,
    m: DMatrix<f64>,
}

impl Laplacian {
    pub fn kind(&self) -> LaplacianKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }
}

/// The similarity matrix split along a clustering: `intra` keeps edges within
/// clusters, `inter` keeps edges between clusters; elementwise they add back
/// to the original.
#[derive(Debug, Clone)]
pub struct EdgeSplit {
    pub intra: SimilarityMatrix,
    pub inter: SimilarityMatrix,
}

/// Weighted degree of every node.
pub fn degrees(a: &SimilarityMatrix) -> Degrees {
    let m = a.as_matrix();
    Degrees((0..a.n()).map(|i| m.row(i).sum()).collect())
}

/// Build the requested Laplacian. The normalized kind requires every degree
/// to be positive.
pub fn laplacian(a: &SimilarityMatrix, kind: LaplacianKind) -> Result<Laplacian, GraphError> {
    let n = a.n();
    let d = degrees(a);
    let w = a.as_matrix();
    let mut m = DMatrix::zeros(n, n);
    match kind {
        LaplacianKind::Unnormalized => {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = if i == j { d.get(i) } else { -w[(i, j)] };
                }
            }
        }
        LaplacianKind::Normalized => {
            if let Some(i) = d.as_slice().iter().position(|&di| di == 0.0) {
                return Err(GraphError::IsolatedNode { i });
            }
            let inv_sqrt: Vec<f64> = d.as_slice().iter().map(|&di| 1.0 / di.sqrt()).collect();
            for i in 0..n {
                for j in 0..n {
                    let off = -inv_sqrt[i] * w[(i, j)] * inv_sqrt[j];
                    m[(i, j)] = if i == j { 1.0 + off } else { off };
                }
            }
        }
    }
    // Guard the symmetric-eigensolver contract against rounding drift.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
    Ok(Laplacian { kind, m })
}

/// True when the graph on edges with w > 0 has a single connected component.
pub fn is_connected(a: &SimilarityMatrix) -> bool {
    connected_components(a).k() == 1
}

/// Connected components as a clustering, labeled by first-visited order.
pub fn connected_components(a: &SimilarityMatrix) -> Clustering {
    let n = a.n();
    let w = a.as_matrix();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0usize;
    let mut stack = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = next;
        stack.push(start);
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if comp[v] == usize::MAX && w[(u, v)] > 0.0 {
                    comp[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    Clustering::try_new(comp).expect("every node was assigned a component")
}

/// Split edges into intra-cluster and inter-cluster parts per the labels.
pub fn edge_split(a: &SimilarityMatrix, labels: &Clustering) -> Result<EdgeSplit, GraphError> {
    let n = a.n();
    if labels.n() != n {
        return Err(GraphError::LabelSizeMismatch { labels: labels.n(), n });
    }
    let w = a.as_matrix();
    let l = labels.labels();
    let mut intra = DMatrix::zeros(n, n);
    let mut inter = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if l[i] == l[j] {
                intra[(i, j)] = w[(i, j)];
            } else {
                inter[(i, j)] = w[(i, j)];
            }
        }
    }
    Ok(EdgeSplit {
        intra: SimilarityMatrix { w: intra },
        inter: SimilarityMatrix { w: inter },
    })
}

/// The subgraph induced by `nodes` (in the given order).
pub fn induced_subgraph(a: &SimilarityMatrix, nodes: &[usize]) -> SimilarityMatrix {
    let m = nodes.len();
    let w = a.as_matrix();
    let mut sub = DMatrix::zeros(m, m);
    for (si, &i) in nodes.iter().enumerate() {
        for (sj, &j) in nodes.iter().enumerate() {
            sub[(si, sj)] = w[(i, j)];
        }
    }
    SimilarityMatrix { w: sub }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs;
    use proptest::prelude::*;

    fn single_edge() -> SimilarityMatrix {
        SimilarityMatrix::from_edges(2, &[(0, 1, 1.0)]).unwrap()
    }

    #[test]
    fn degrees_single_edge() {
        assert_eq!(degrees(&single_edge()).as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn degrees_clique_ring() {
        // Ring of three 4-cliques: internal nodes have degree 3, the two
        // bridge endpoints per clique have degree 4.
        let g = graphs::clique_ring(3, 4, 1.0, 1.0);
        let d = degrees(&g);
        let expected = [4.0, 3.0, 3.0, 4.0, 4.0, 3.0, 3.0, 4.0, 4.0, 3.0, 3.0, 4.0];
        assert_eq!(d.as_slice(), &expected);
    }

    #[test]
    fn degrees_weighted_triangle() {
        let g = SimilarityMatrix::from_edges(3, &[(0, 1, 0.5), (1, 2, 0.5), (0, 2, 0.5)]).unwrap();
        assert_eq!(degrees(&g).as_slice(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn laplacian_single_edge_both_kinds() {
        let g = single_edge();
        for kind in [LaplacianKind::Unnormalized, LaplacianKind::Normalized] {
            let l = laplacian(&g, kind).unwrap();
            let m = l.as_matrix();
            assert_eq!(m[(0, 0)], 1.0);
            assert_eq!(m[(1, 1)], 1.0);
            assert_eq!(m[(0, 1)], -1.0);
            assert_eq!(m[(1, 0)], -1.0);
        }
    }

    #[test]
    fn clique_ring_laplacian_block_form() {
        // The 12-node ring of 4-cliques has Laplacian blocks K + K' on the
        // diagonal (K the 4-clique Laplacian, K' = QQᵀ + QᵀQ) and Q / Qᵀ off
        // the diagonal, where Q's only nonzero entry is −1 at bottom-left.
        let mut q = DMatrix::zeros(4, 4);
        q[(3, 0)] = -1.0;
        let mut k = DMatrix::from_element(4, 4, -1.0);
        for i in 0..4 {
            k[(i, i)] = 3.0;
        }
        let kp = &q * q.transpose() + q.transpose() * &q;
        let diag = &k + &kp;

        let g = graphs::clique_ring(3, 4, 1.0, 1.0);
        let l = laplacian(&g, LaplacianKind::Unnormalized).unwrap();
        let m = l.as_matrix();
        let block = |bi: usize, bj: usize| m.view((4 * bi, 4 * bj), (4, 4)).clone_owned();
        for b in 0..3 {
            assert_eq!(block(b, b), diag);
        }
        assert_eq!(block(0, 1), q);
        assert_eq!(block(1, 2), q);
        assert_eq!(block(2, 0), q);
        assert_eq!(block(1, 0), q.transpose());
        assert_eq!(block(2, 1), q.transpose());
        assert_eq!(block(0, 2), q.transpose());
    }

    #[test]
    fn normalized_rejects_isolated_node() {
        let g = SimilarityMatrix::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        let err = laplacian(&g, LaplacianKind::Normalized).unwrap_err();
        assert!(matches!(err, GraphError::IsolatedNode { i: 2 }));
        assert!(laplacian(&g, LaplacianKind::Unnormalized).is_ok());
    }

    #[test]
    fn connectivity_basics() {
        assert!(is_connected(&single_edge()));
        let no_edges = SimilarityMatrix::from_dense(DMatrix::zeros(2, 2)).unwrap();
        assert!(!is_connected(&no_edges));
        assert!(is_connected(&graphs::clique_ring(3, 4, 1.0, 1.0)));
        let two = graphs::disjoint_union(&[graphs::complete(3, 1.0), graphs::complete(4, 1.0)]);
        assert_eq!(connected_components(&two).sizes(), vec![3, 4]);
    }

    #[test]
    fn edge_split_clique_ring_bridges() {
        let g = graphs::clique_ring(3, 4, 1.0, 1.0);
        let truth = Clustering::try_new(vec![0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2]).unwrap();
        let split = edge_split(&g, &truth).unwrap();
        let mut inter_edges = split.inter.edges();
        inter_edges.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(inter_edges, vec![(0, 11, 1.0), (3, 4, 1.0), (7, 8, 1.0)]);
        assert_eq!(split.intra.edges().len(), 18);
    }

    #[test]
    fn edge_split_trivial_labelings() {
        let g = graphs::clique_ring(3, 4, 1.0, 1.0);
        let one = Clustering::try_new(vec![0; 12]).unwrap();
        let split = edge_split(&g, &one).unwrap();
        assert_eq!(split.inter.total_weight(), 0.0);
        let singletons = Clustering::try_new((0..12).collect()).unwrap();
        let split = edge_split(&g, &singletons).unwrap();
        assert_eq!(split.intra.total_weight(), 0.0);
        let short = Clustering::try_new(vec![0, 1]).unwrap();
        assert!(matches!(
            edge_split(&g, &short),
            Err(GraphError::LabelSizeMismatch { labels: 2, n: 12 })
        ));
    }

    #[test]
    fn from_dense_validation() {
        let asym = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(matches!(SimilarityMatrix::from_dense(asym), Err(GraphError::Asymmetric { .. })));
        let neg = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        assert!(matches!(SimilarityMatrix::from_dense(neg), Err(GraphError::Negative { .. })));
        let diag = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(SimilarityMatrix::from_dense(diag), Err(GraphError::NonzeroDiagonal { .. })));
        assert!(matches!(
            SimilarityMatrix::from_edges(2, &[(0, 0, 1.0)]),
            Err(GraphError::SelfLoop { u: 0 })
        ));
    }

    proptest! {
        #[test]
        fn unnormalized_row_sums_vanish(g in graphs::proptest_graph(8)) {
            let l = laplacian(&g, LaplacianKind::Unnormalized).unwrap();
            let max_w = g.as_matrix().iter().fold(0.0f64, |m, &v| m.max(v.abs()));
            let tol = 1e-12 * max_w.max(1.0);
            for i in 0..g.n() {
                prop_assert!(l.as_matrix().row(i).sum().abs() <= tol);
            }
        }

        #[test]
        fn laplacian_permutation_equivariance(g in graphs::proptest_graph(7), seed in 0u64..1000) {
            let n = g.n();
            let perm = graphs::random_permutation(n, seed);
            let permuted = graphs::permute(&g, &perm);
            for kind in [LaplacianKind::Unnormalized, LaplacianKind::Normalized] {
                let lp = match (laplacian(&permuted, kind), laplacian(&g, kind)) {
                    (Ok(lp), Ok(l)) => (lp, l),
                    // Isolated nodes make the normalized kind unavailable for
                    // both orderings alike.
                    (Err(_), Err(_)) => continue,
                    _ => return Err(TestCaseError::fail("connectivity disagreed under permutation")),
                };
                let (lp, l) = lp;
                let m = l.as_matrix();
                let mp = lp.as_matrix();
                for i in 0..n {
                    for j in 0..n {
                        let diff = (mp[(perm[i], perm[j])] - m[(i, j)]).abs();
                        prop_assert!(diff <= 1e-12, "mismatch at ({},{}) diff {}", i, j, diff);
                    }
                }
            }
        }

        #[test]
        fn edge_split_reconstructs(g in graphs::proptest_graph(8), seed in 0u64..1000) {
            let labels = graphs::random_labels(g.n(), 3, seed);
            let split = edge_split(&g, &labels).unwrap();
            let w = g.as_matrix();
            let l = labels.labels();
            for i in 0..g.n() {
                for j in 0..g.n() {
                    let sum = split.intra.as_matrix()[(i, j)] + split.inter.as_matrix()[(i, j)];
                    prop_assert_eq!(sum, w[(i, j)]);
                    if l[i] == l[j] {
                        prop_assert_eq!(split.inter.as_matrix()[(i, j)], 0.0);
                    } else {
                        prop_assert_eq!(split.intra.as_matrix()[(i, j)], 0.0);
                    }
                }
            }
        }
    }
}
