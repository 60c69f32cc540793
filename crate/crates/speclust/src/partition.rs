//! Cluster assignments with canonical consecutive labels.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PartitionError {
    #[error("labels must be consecutive starting at 0: label {label} out of range for k={k}")]
    NonConsecutive { label: usize, k: usize },
    #[error("label {missing} in [0, {k}) never appears")]
    MissingLabel { missing: usize, k: usize },
    #[error("a clustering needs at least one node")]
    Empty,
}

/// A node → cluster assignment over `n` nodes.
///
/// Labels are consecutive integers starting at 0 and every label in `[0, k)`
/// appears at least once. Constructors normalize arbitrary ids into that
/// canonical form by first occurrence, so two inputs that induce the same
/// partition compare equal after construction up to label naming.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    labels: Vec<usize>,
    k: usize,
}

impl Clustering {
    /// Build from arbitrary integer ids, relabeling to consecutive ids in
    /// order of first occurrence.
    pub fn from_labels(raw: &[i64]) -> Result<Self, PartitionError> {
        if raw.is_empty() {
            return Err(PartitionError::Empty);
        }
        let mut seen: Vec<i64> = Vec::new();
        let mut labels = Vec::with_capacity(raw.len());
        for &id in raw {
            let c = match seen.iter().position(|&s| s == id) {
                Some(c) => c,
                None => {
                    seen.push(id);
                    seen.len() - 1
                }
            };
            labels.push(c);
        }
        Ok(Clustering { labels, k: seen.len() })
    }

    /// Accept labels that are already consecutive `[0, k)` with every label
    /// present; rejects anything else rather than renumbering.
    pub fn try_new(labels: Vec<usize>) -> Result<Self, PartitionError> {
        if labels.is_empty() {
            return Err(PartitionError::Empty);
        }
        let k = labels.iter().copied().max().unwrap() + 1;
        let mut present = vec![false; k];
        for &l in &labels {
            present[l] = true;
        }
        if let Some(missing) = present.iter().position(|p| !p) {
            return Err(PartitionError::MissingLabel { missing, k });
        }
        Ok(Clustering { labels, k })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// The same partition with labels renumbered in order of first
    /// occurrence, so the node at index 0 always carries label 0. Makes
    /// reported labels independent of internal naming choices (eigenbasis
    /// sign, centroid index).
    pub fn canonical(&self) -> Clustering {
        let raw: Vec<i64> = self.labels.iter().map(|&l| l as i64).collect();
        Self::from_labels(&raw).expect("nonempty by construction")
    }

    /// Number of nodes per cluster, indexed by label.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0usize; self.k];
        for &l in &self.labels {
            s[l] += 1;
        }
        s
    }

    /// Node indices belonging to cluster `c`, ascending.
    pub fn members(&self, c: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == c).then_some(i))
            .collect()
    }

    /// True when the two assignments induce the same set partition, ignoring
    /// label names.
    pub fn same_partition(&self, other: &Clustering) -> bool {
        if self.n() != other.n() || self.k != other.k {
            return false;
        }
        let a = Clustering::from_labels(&self.labels.iter().map(|&l| l as i64).collect::<Vec<_>>()).unwrap();
        let b = Clustering::from_labels(&other.labels.iter().map(|&l| l as i64).collect::<Vec<_>>()).unwrap();
        a.labels == b.labels
    }
}
