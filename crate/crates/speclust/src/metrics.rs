//! Clustering-agreement scores: normalized mutual information and adjusted
//! Rand score, both computed from a shared contingency table.
//!
//! The adjusted Rand score is evaluated in exact integer arithmetic so that
//! rational results such as -1/2 come out bit-exact; only the final division
//! happens in floating point.

use crate::partition::Clustering;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("clusterings cover different node counts: {a} vs {b}")]
    SizeMismatch { a: usize, b: usize },
}

/// Co-occurrence counts between two clusterings of the same node set.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    /// counts[i][j] = number of nodes in cluster i of `a` and cluster j of `b`.
    pub counts: Vec<Vec<usize>>,
    pub row_sums: Vec<usize>,
    pub col_sums: Vec<usize>,
    pub n: usize,
}

pub fn contingency(a: &Clustering, b: &Clustering) -> Result<ContingencyTable, MetricsError> {
    if a.n() != b.n() {
        return Err(MetricsError::SizeMismatch { a: a.n(), b: b.n() });
    }
    let mut counts = vec![vec![0usize; b.k()]; a.k()];
    for (&la, &lb) in a.labels().iter().zip(b.labels()) {
        counts[la][lb] += 1;
    }
    let row_sums: Vec<usize> = counts.iter().map(|row| row.iter().sum()).collect();
    let mut col_sums = vec![0usize; b.k()];
    for row in &counts {
        for (j, &c) in row.iter().enumerate() {
            col_sums[j] += c;
        }
    }
    Ok(ContingencyTable { counts, row_sums, col_sums, n: a.n() })
}

fn entropy(sizes: &[usize], n: usize) -> f64 {
    let n = n as f64;
    sizes
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Mutual information between the label distributions, normalized by the
/// arithmetic mean of the two label entropies. Lies in [0, 1]; symmetric.
/// When both partitions carry zero entropy (each is a single cluster) the
/// score is 1.0 if they are the same partition and 0.0 otherwise.
pub fn nmi(a: &Clustering, b: &Clustering) -> Result<f64, MetricsError> {
    if a.n() != b.n() {
        return Err(MetricsError::SizeMismatch { a: a.n(), b: b.n() });
    }
    if a.same_partition(b) {
        // Mathematically MI equals both entropies here; return the exact
        // value instead of accumulating rounding error.
        return Ok(1.0);
    }
    let table = contingency(a, b)?;
    let ha = entropy(&table.row_sums, table.n);
    let hb = entropy(&table.col_sums, table.n);
    if ha == 0.0 && hb == 0.0 {
        return Ok(0.0);
    }
    let n = table.n as f64;
    let mut mi = 0.0;
    for (i, row) in table.counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = c as f64 / n;
            let pa = table.row_sums[i] as f64 / n;
            let pb = table.col_sums[j] as f64 / n;
            mi += p * (p / (pa * pb)).ln();
        }
    }
    // Rounding can push the ratio a hair outside [0, 1]; the score is
    // mathematically bounded, so clamp the dust.
    Ok((mi / (0.5 * (ha + hb))).clamp(0.0, 1.0))
}

fn choose2(x: usize) -> i128 {
    let x = x as i128;
    x * (x - 1) / 2
}

/// Adjusted Rand score: pair-counting agreement corrected for chance,
/// 1.0 for identical partitions, near 0 for independent ones, and negative
/// for anti-correlated ones (deliberately not clamped). Evaluated as an
/// exact integer ratio. When the correction denominator vanishes (both
/// partitions trivial) the score is 1.0 if the partitions are identical and
/// 0.0 otherwise.
pub fn ars(a: &Clustering, b: &Clustering) -> Result<f64, MetricsError> {
    let table = contingency(a, b)?;
    let sum_ij: i128 = table.counts.iter().flatten().map(|&c| choose2(c)).sum();
    let sum_a: i128 = table.row_sums.iter().map(|&c| choose2(c)).sum();
    let sum_b: i128 = table.col_sums.iter().map(|&c| choose2(c)).sum();
    let total = choose2(table.n);
    // (sum_ij − sum_a·sum_b/total) / ((sum_a+sum_b)/2 − sum_a·sum_b/total),
    // cleared of fractions by multiplying through by 2·total.
    let num = 2 * total * sum_ij - 2 * sum_a * sum_b;
    let den = total * (sum_a + sum_b) - 2 * sum_a * sum_b;
    if den == 0 {
        return Ok(if a.same_partition(b) { 1.0 } else { 0.0 });
    }
    Ok(num as f64 / den as f64)
}

/// Arithmetic mean of `nmi` and `ars`, the single agreement number used for
/// benchmark summaries.
pub fn mean_score(a: &Clustering, b: &Clustering) -> Result<f64, MetricsError> {
    Ok(0.5 * (nmi(a, b)? + ars(a, b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cl(labels: &[i64]) -> Clustering {
        Clustering::from_labels(labels).unwrap()
    }

    #[test]
    fn identical_labelings_score_one() {
        for labels in [&[0, 0, 1, 1][..], &[0, 1, 2, 1, 0], &[0, 1]] {
            let c = cl(labels);
            assert_eq!(nmi(&c, &c).unwrap(), 1.0);
            assert_eq!(ars(&c, &c).unwrap(), 1.0);
            assert_eq!(mean_score(&c, &c).unwrap(), 1.0);
        }
    }

    #[test]
    fn crossed_pairs() {
        let a = cl(&[0, 0, 1, 1]);
        let b = cl(&[0, 1, 0, 1]);
        // All four contingency cells equal 1, so the label distributions are
        // independent and mutual information vanishes.
        assert_eq!(nmi(&a, &b).unwrap(), 0.0);
        // Exact rational: with no pair co-clustered in both, the adjusted
        // score is (0 - 2/3) / (2 - 2/3) = -1/2.
        assert_eq!(ars(&a, &b).unwrap(), -0.5);
        assert_eq!(mean_score(&a, &b).unwrap(), -0.25);
    }

    #[test]
    fn split_refinement_nmi() {
        // Entropies ln 2 and 1.5 ln 2 with mutual information ln 2 give
        // exactly 1/1.25 = 0.8.
        let a = cl(&[0, 0, 1, 1]);
        let b = cl(&[0, 0, 1, 2]);
        assert!((nmi(&a, &b).unwrap() - 0.8).abs() < 1e-12);
        assert!((nmi(&b, &a).unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn one_element_moved_ars_is_zero() {
        // Direct pair count over the 6 node pairs: 1 agrees-together,
        // 2 agree-apart, 3 disagree; the chance correction lands on 0.
        let a = cl(&[0, 0, 1, 1]);
        let b = cl(&[0, 0, 0, 1]);
        assert_eq!(ars(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_partitions() {
        let one = cl(&[0, 0, 0]);
        let singletons = cl(&[0, 1, 2]);
        assert_eq!(nmi(&one, &one).unwrap(), 1.0);
        assert_eq!(ars(&one, &one).unwrap(), 1.0);
        assert_eq!(ars(&singletons, &singletons).unwrap(), 1.0);
        // One side trivial, the other not: no shared information.
        assert_eq!(nmi(&one, &singletons).unwrap(), 0.0);
        assert_eq!(ars(&one, &singletons).unwrap(), 0.0);
        let tiny = cl(&[0]);
        assert_eq!(ars(&tiny, &tiny).unwrap(), 1.0);
        assert_eq!(nmi(&tiny, &tiny).unwrap(), 1.0);
    }

    #[test]
    fn size_mismatch_is_reported() {
        let a = cl(&[0, 1]);
        let b = cl(&[0, 1, 1]);
        assert_eq!(nmi(&a, &b).unwrap_err(), MetricsError::SizeMismatch { a: 2, b: 3 });
        assert_eq!(ars(&a, &b).unwrap_err(), MetricsError::SizeMismatch { a: 2, b: 3 });
    }

    #[test]
    fn contingency_marginals_consistent() {
        let a = cl(&[0, 0, 1, 1, 2, 2]);
        let b = cl(&[0, 1, 0, 1, 0, 1]);
        let t = contingency(&a, &b).unwrap();
        assert_eq!(t.n, 6);
        assert_eq!(t.row_sums, vec![2, 2, 2]);
        assert_eq!(t.col_sums, vec![3, 3]);
        let total: usize = t.counts.iter().flatten().sum();
        assert_eq!(total, 6);
    }

    // Independent oracles built on a different formulation: brute-force pair
    // counting for the adjusted Rand score and direct probability sums for
    // mutual information, sharing no code with the implementations above.

    fn oracle_ars(a: &[usize], b: &[usize]) -> f64 {
        let n = a.len();
        let (mut n11, mut n00, mut n10, mut n01) = (0f64, 0f64, 0f64, 0f64);
        for i in 0..n {
            for j in (i + 1)..n {
                match (a[i] == a[j], b[i] == b[j]) {
                    (true, true) => n11 += 1.0,
                    (false, false) => n00 += 1.0,
                    (true, false) => n10 += 1.0,
                    (false, true) => n01 += 1.0,
                }
            }
        }
        let den = (n11 + n10) * (n10 + n00) + (n11 + n01) * (n01 + n00);
        if den == 0.0 {
            let same = (0..n).all(|i| {
                (0..n).all(|j| (a[i] == a[j]) == (b[i] == b[j]))
            });
            return if same { 1.0 } else { 0.0 };
        }
        2.0 * (n11 * n00 - n10 * n01) / den
    }

    fn oracle_nmi(a: &[usize], b: &[usize]) -> f64 {
        let n = a.len() as f64;
        let count = |labels: &[usize], want: usize| labels.iter().filter(|&&l| l == want).count() as f64;
        let ka = a.iter().max().map_or(0, |m| m + 1);
        let kb = b.iter().max().map_or(0, |m| m + 1);
        let mut ha = 0.0;
        for l in 0..ka {
            let p = count(a, l) / n;
            if p > 0.0 {
                ha -= p * p.ln();
            }
        }
        let mut hb = 0.0;
        for l in 0..kb {
            let p = count(b, l) / n;
            if p > 0.0 {
                hb -= p * p.ln();
            }
        }
        if ha == 0.0 && hb == 0.0 {
            return 1.0;
        }
        let mut mi = 0.0;
        for la in 0..ka {
            for lb in 0..kb {
                let joint = a
                    .iter()
                    .zip(b)
                    .filter(|(&x, &y)| x == la && y == lb)
                    .count() as f64
                    / n;
                if joint > 0.0 {
                    mi += joint * (joint / ((count(a, la) / n) * (count(b, lb) / n))).ln();
                }
            }
        }
        (mi / (0.5 * (ha + hb))).clamp(0.0, 1.0)
    }

    #[test]
    fn exhaustive_oracle_agreement_small_n() {
        // Every pair of label vectors with n ≤ 5 and labels in {0,1,2}.
        for n in 1..=5usize {
            let total = 3usize.pow(n as u32);
            for xa in 0..total {
                for xb in 0..total {
                    let decode = |mut x: usize| -> Vec<i64> {
                        (0..n)
                            .map(|_| {
                                let l = (x % 3) as i64;
                                x /= 3;
                                l
                            })
                            .collect()
                    };
                    let la = decode(xa);
                    let lb = decode(xb);
                    let a = cl(&la);
                    let b = cl(&lb);
                    let raw_a: Vec<usize> = la.iter().map(|&v| v as usize).collect();
                    let raw_b: Vec<usize> = lb.iter().map(|&v| v as usize).collect();
                    let got_ars = ars(&a, &b).unwrap();
                    let want_ars = oracle_ars(&raw_a, &raw_b);
                    assert!(
                        (got_ars - want_ars).abs() < 1e-12,
                        "ars mismatch on {la:?} vs {lb:?}: {got_ars} vs {want_ars}"
                    );
                    let got_nmi = nmi(&a, &b).unwrap();
                    let want_nmi = oracle_nmi(&raw_a, &raw_b);
                    assert!(
                        (got_nmi - want_nmi).abs() < 1e-12,
                        "nmi mismatch on {la:?} vs {lb:?}: {got_nmi} vs {want_nmi}"
                    );
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn scores_invariant_under_relabeling(
            labels_a in proptest::collection::vec(0i64..4, 2..30),
            labels_b in proptest::collection::vec(0i64..4, 2..30),
            swap in 0usize..4,
        ) {
            let n = labels_a.len().min(labels_b.len());
            let a = cl(&labels_a[..n]);
            let b = cl(&labels_b[..n]);
            // Rename labels of a by a transposition.
            let renamed: Vec<i64> = labels_a[..n]
                .iter()
                .map(|&l| {
                    let l = l as usize;
                    let s = swap % 4;
                    let t = (swap + 1) % 4;
                    (if l == s { t } else if l == t { s } else { l }) as i64
                })
                .collect();
            let a2 = cl(&renamed);
            prop_assert!((nmi(&a, &b).unwrap() - nmi(&a2, &b).unwrap()).abs() < 1e-12);
            prop_assert!((ars(&a, &b).unwrap() - ars(&a2, &b).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn scores_symmetric_and_bounded(
            labels_a in proptest::collection::vec(0i64..4, 2..30),
            labels_b in proptest::collection::vec(0i64..4, 2..30),
        ) {
            let n = labels_a.len().min(labels_b.len());
            let a = cl(&labels_a[..n]);
            let b = cl(&labels_b[..n]);
            let nm = nmi(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&nm));
            prop_assert!((nm - nmi(&b, &a).unwrap()).abs() < 1e-12);
            let ar = ars(&a, &b).unwrap();
            prop_assert!(ar <= 1.0 + 1e-12);
            prop_assert!((ar - ars(&b, &a).unwrap()).abs() < 1e-12);
        }
    }
}
