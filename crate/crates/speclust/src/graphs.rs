//! Small graph constructors and graph-level utilities shared by examples,
//! benchmarks, and tests: cliques, paths, clique rings, bridged pairs,
//! disjoint unions, planted partitions, and seeded random graphs.

use crate::graph::SimilarityMatrix;
use crate::partition::Clustering;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Complete graph on `n` nodes with uniform edge weight.
pub fn complete(n: usize, w: f64) -> SimilarityMatrix {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v, w));
        }
    }
    SimilarityMatrix::from_edges(n, &edges).expect("complete graph is valid")
}

/// Path graph 0–1–…–(n−1) with unit weights.
pub fn path(n: usize) -> SimilarityMatrix {
    let edges: Vec<_> = (0..n - 1).map(|u| (u, u + 1, 1.0)).collect();
    SimilarityMatrix::from_edges(n, &edges).expect("path graph is valid")
}

/// `cliques` complete graphs of `size` nodes each, arranged in a ring: the
/// last node of each clique bridges to the first node of the next. With three
/// 4-cliques and unit weights this is the classic three-cluster fixture whose
/// unnormalized Laplacian spectrum is {0, 3−√6 (×2), 4 (×6), 3+√6 (×2), 6}.
pub fn clique_ring(cliques: usize, size: usize, intra_w: f64, bridge_w: f64) -> SimilarityMatrix {
    assert!(cliques >= 1 && size >= 2);
    let n = cliques * size;
    let mut edges = Vec::new();
    for c in 0..cliques {
        let base = c * size;
        for u in 0..size {
            for v in (u + 1)..size {
                edges.push((base + u, base + v, intra_w));
            }
        }
    }
    if cliques > 1 {
        for c in 0..cliques {
            let from = c * size + (size - 1);
            let to = ((c + 1) % cliques) * size;
            edges.push((from, to, bridge_w));
        }
    }
    SimilarityMatrix::from_edges(n, &edges).expect("clique ring is valid")
}

/// Ground-truth labels matching [`clique_ring`]: one cluster per clique.
pub fn clique_ring_truth(cliques: usize, size: usize) -> Clustering {
    let labels: Vec<usize> = (0..cliques * size).map(|i| i / size).collect();
    Clustering::try_new(labels).expect("labels are consecutive")
}

/// Two complete graphs of `size` nodes joined by a single bridge from the
/// last node of the first clique to the first node of the second.
pub fn bridged_pair(size: usize, intra_w: f64, bridge_w: f64) -> SimilarityMatrix {
    let n = 2 * size;
    let mut edges = Vec::new();
    for base in [0, size] {
        for u in 0..size {
            for v in (u + 1)..size {
                edges.push((base + u, base + v, intra_w));
            }
        }
    }
    edges.push((size - 1, size, bridge_w));
    SimilarityMatrix::from_edges(n, &edges).expect("bridged pair is valid")
}

/// Disjoint union; block `i`'s nodes occupy a contiguous index range after
/// the blocks before it.
pub fn disjoint_union(blocks: &[SimilarityMatrix]) -> SimilarityMatrix {
    let n: usize = blocks.iter().map(|b| b.n()).sum();
    let mut edges = Vec::new();
    let mut base = 0;
    for b in blocks {
        for (u, v, w) in b.edges() {
            edges.push((base + u, base + v, w));
        }
        base += b.n();
    }
    SimilarityMatrix::from_edges(n, &edges).expect("union of valid graphs is valid")
}

/// Component labels matching [`disjoint_union`]'s block layout.
pub fn disjoint_union_truth(block_sizes: &[usize]) -> Clustering {
    let mut labels = Vec::new();
    for (c, &s) in block_sizes.iter().enumerate() {
        labels.extend(std::iter::repeat(c).take(s));
    }
    Clustering::try_new(labels).expect("labels are consecutive")
}

/// Planted-partition graph: within each block, each pair gets an edge with
/// probability `p_in` and a weight drawn uniformly from `w_in`; across
/// blocks, probability `p_out` and weight from `w_out`. Deterministic per
/// seed. Returns the graph and the planted labels.
pub fn planted_partition(
    sizes: &[usize],
    p_in: f64,
    p_out: f64,
    w_in: (f64, f64),
    w_out: (f64, f64),
    seed: u64,
) -> (SimilarityMatrix, Clustering) {
    let n: usize = sizes.iter().sum();
    let truth = disjoint_union_truth(sizes);
    let labels = truth.labels();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let (p, w) = if labels[u] == labels[v] { (p_in, w_in) } else { (p_out, w_out) };
            if rng.gen::<f64>() < p {
                let weight = if w.0 == w.1 { w.0 } else { rng.gen_range(w.0..=w.1) };
                edges.push((u, v, weight));
            }
        }
    }
    let g = SimilarityMatrix::from_edges(n, &edges).expect("planted partition is valid");
    (g, truth)
}

/// Connected random graph: a random recursive spanning tree plus each extra
/// pair independently with probability `extra_prob`; weights drawn uniformly
/// from `w`. Deterministic per seed.
pub fn random_connected(n: usize, extra_prob: f64, w: (f64, f64), seed: u64) -> SimilarityMatrix {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = |rng: &mut ChaCha8Rng| if w.0 == w.1 { w.0 } else { rng.gen_range(w.0..=w.1) };
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let wt = weight(&mut rng);
        edges.push((u, v, wt));
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < extra_prob {
                let wt = weight(&mut rng);
                edges.push((u, v, wt));
            }
        }
    }
    SimilarityMatrix::from_edges(n, &edges).expect("random connected graph is valid")
}

/// A uniformly random permutation of `0..n` (Fisher–Yates, seeded).
pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Relocate node `i` to index `perm[i]`.
pub fn permute(a: &SimilarityMatrix, perm: &[usize]) -> SimilarityMatrix {
    let n = a.n();
    assert_eq!(perm.len(), n);
    let edges: Vec<_> = a.edges().into_iter().map(|(u, v, w)| (perm[u], perm[v], w)).collect();
    SimilarityMatrix::from_edges(n, &edges).expect("permutation preserves validity")
}

/// Seeded random labels over `k` clusters, guaranteed to use all `k` when
/// `n ≥ k` (first `k` nodes get distinct labels before shuffling).
pub fn random_labels(n: usize, k: usize, seed: u64) -> Clustering {
    let k = k.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw: Vec<i64> = (0..n)
        .map(|i| if i < k { i as i64 } else { rng.gen_range(0..k as i64) })
        .collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        raw.swap(i, j);
    }
    Clustering::from_labels(&raw).expect("n >= 1")
}

#[cfg(test)]
pub(crate) fn proptest_graph(max_n: usize) -> impl proptest::strategy::Strategy<Value = SimilarityMatrix> {
    use proptest::prelude::*;
    (2..=max_n, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen::<f64>() < 0.5 {
                    edges.push((u, v, rng.gen_range(0.1..=2.0)));
                }
            }
        }
        SimilarityMatrix::from_edges(n, &edges).expect("generated graph is valid")
    })
}
