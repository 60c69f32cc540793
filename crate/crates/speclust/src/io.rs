//! File interchange: dense matrix CSV, 1-indexed edge TSV (`network.dat`),
//! per-line label files and `community.dat`, and feature CSV with an
//! optional variance header row.

use crate::graph::{GraphError, SimilarityMatrix};
use crate::partition::{Clustering, PartitionError};
use crate::similarity::FeatureMatrix;
use nalgebra::DMatrix;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse { path: path.to_path_buf(), line, msg: msg.into() }
}

/// Read a dense square matrix: n rows of n comma-separated floats, no
/// header.
pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<SimilarityMatrix, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let v: f64 = field.trim().parse().map_err(|_| {
                parse_err(path, idx + 1, format!("expected a number, got {:?}", field.trim()))
            })?;
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(parse_err(
                    path,
                    idx + 1,
                    format!("ragged row: {} fields, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(parse_err(path, 1, "empty matrix file"));
    }
    if rows[0].len() != n {
        return Err(parse_err(
            path,
            1,
            format!("matrix must be square, got {} rows x {} columns", n, rows[0].len()),
        ));
    }
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    Ok(SimilarityMatrix::from_dense(m)?)
}

/// Write a dense square matrix as CSV (17 significant digits, round-trip
/// exact).
pub fn write_matrix_csv(path: impl AsRef<Path>, a: &SimilarityMatrix) -> Result<(), IoError> {
    std::fs::write(path, matrix_to_csv(a))?;
    Ok(())
}

/// CSV text for a similarity matrix; shared by the file writer and the CLI.
pub fn matrix_to_csv(a: &SimilarityMatrix) -> String {
    let m = a.as_matrix();
    let n = a.n();
    let mut out = String::new();
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", format_float(m[(i, j)]));
        }
        out.push('\n');
    }
    out
}

/// Shortest decimal that parses back to the same f64.
pub fn format_float(v: f64) -> String {
    let mut s = format!("{}", v);
    if s.parse::<f64>() != Ok(v) {
        s = format!("{:.17e}", v);
    }
    s
}

/// Read a 1-indexed tab-separated edge list (`network.dat`): lines
/// `u<TAB>v<TAB>w` (weight optional, default 1). Either or both directions
/// may be present; conflicting weights resolve to the maximum. Node count is
/// the largest id seen.
pub fn read_edge_tsv(path: impl AsRef<Path>) -> Result<SimilarityMatrix, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut n = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(parse_err(
                path,
                idx + 1,
                format!("expected 'u v [w]', got {} fields", fields.len()),
            ));
        }
        let u: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(path, idx + 1, format!("bad node id {:?}", fields[0])))?;
        let v: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(path, idx + 1, format!("bad node id {:?}", fields[1])))?;
        let w: f64 = if fields.len() == 3 {
            fields[2]
                .parse()
                .map_err(|_| parse_err(path, idx + 1, format!("bad weight {:?}", fields[2])))?
        } else {
            1.0
        };
        if u == 0 || v == 0 {
            return Err(parse_err(path, idx + 1, "node ids are 1-indexed"));
        }
        if u == v {
            return Err(parse_err(path, idx + 1, format!("self-loop on node {u}")));
        }
        if !(w.is_finite() && w >= 0.0) {
            return Err(parse_err(path, idx + 1, format!("bad weight {w}")));
        }
        n = n.max(u).max(v);
        edges.push((u - 1, v - 1, w));
    }
    if n == 0 {
        return Err(parse_err(path, 1, "empty edge list"));
    }
    // Symmetrize by max over both stated directions.
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (u, v, w) in edges {
        if w > m[(u, v)] {
            m[(u, v)] = w;
            m[(v, u)] = w;
        }
    }
    Ok(SimilarityMatrix::from_dense(m)?)
}

/// Write a 1-indexed tab-separated edge list; both directions are emitted,
/// matching the reference benchmark format.
pub fn write_edge_tsv(path: impl AsRef<Path>, a: &SimilarityMatrix) -> Result<(), IoError> {
    let m = a.as_matrix();
    let mut out = String::new();
    for i in 0..a.n() {
        for j in 0..a.n() {
            if i != j && m[(i, j)] > 0.0 {
                let _ = writeln!(out, "{}\t{}\t{}", i + 1, j + 1, format_float(m[(i, j)]));
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Read cluster labels, one integer per line (any integers; relabeled to
/// 0..k by first occurrence).
pub fn read_labels(path: impl AsRef<Path>) -> Result<Clustering, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut labels: Vec<i64> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let l: i64 = line
            .parse()
            .map_err(|_| parse_err(path, idx + 1, format!("expected an integer label, got {line:?}")))?;
        labels.push(l);
    }
    if labels.is_empty() {
        return Err(parse_err(path, 1, "empty labels file"));
    }
    Ok(Clustering::from_labels(&labels)?)
}

/// Write labels, one per line, for node 0..n in order.
pub fn write_labels(path: impl AsRef<Path>, c: &Clustering) -> Result<(), IoError> {
    let mut out = String::new();
    for &l in c.labels() {
        let _ = writeln!(out, "{l}");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Read a 1-indexed `community.dat`: lines `node<TAB>community`. Every node
/// 1..=max must appear exactly once.
pub fn read_community_dat(path: impl AsRef<Path>) -> Result<Clustering, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut pairs: Vec<(usize, i64)> = Vec::new();
    let mut n = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(
                path,
                idx + 1,
                format!("expected 'node community', got {} fields", fields.len()),
            ));
        }
        let node: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(path, idx + 1, format!("bad node id {:?}", fields[0])))?;
        let com: i64 = fields[1]
            .parse()
            .map_err(|_| parse_err(path, idx + 1, format!("bad community id {:?}", fields[1])))?;
        if node == 0 {
            return Err(parse_err(path, idx + 1, "node ids are 1-indexed"));
        }
        n = n.max(node);
        pairs.push((node - 1, com));
    }
    if n == 0 {
        return Err(parse_err(path, 1, "empty community file"));
    }
    let mut labels = vec![None; n];
    for (node, com) in pairs {
        labels[node] = Some(com);
    }
    let labels: Vec<i64> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| parse_err(path, 1, format!("node {} has no community", i + 1))))
        .collect::<Result<_, _>>()?;
    Ok(Clustering::from_labels(&labels)?)
}

/// Write a 1-indexed `community.dat` (community ids start at 1).
pub fn write_community_dat(path: impl AsRef<Path>, c: &Clustering) -> Result<(), IoError> {
    let mut out = String::new();
    for (i, &l) in c.labels().iter().enumerate() {
        let _ = writeln!(out, "{}\t{}", i + 1, l + 1);
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Read the `network.dat` / `community.dat` pair produced by reference
/// benchmark generators.
pub fn read_lfr(
    network: impl AsRef<Path>,
    community: impl AsRef<Path>,
) -> Result<(SimilarityMatrix, Clustering), IoError> {
    let graph = read_edge_tsv(&network)?;
    let truth = read_community_dat(&community)?;
    if truth.n() != graph.n() {
        return Err(parse_err(
            community.as_ref(),
            1,
            format!("{} community rows but {} graph nodes", truth.n(), graph.n()),
        ));
    }
    Ok((graph, truth))
}

/// Write a graph and its labels as a `network.dat` / `community.dat` pair.
pub fn write_lfr(
    network: impl AsRef<Path>,
    community: impl AsRef<Path>,
    graph: &SimilarityMatrix,
    truth: &Clustering,
) -> Result<(), IoError> {
    write_edge_tsv(network, graph)?;
    write_community_dat(community, truth)?;
    Ok(())
}

/// Read a feature CSV: n rows of d comma-separated floats. If the first
/// row's first field is the token `variances`, the remaining d fields of
/// that row are per-feature variances.
pub fn read_features_csv(path: impl AsRef<Path>) -> Result<FeatureMatrix, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut variances: Option<Vec<f64>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if rows.is_empty() && variances.is_none() && fields[0].eq_ignore_ascii_case("variances") {
            let vs: Vec<f64> = fields[1..]
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| parse_err(path, idx + 1, format!("bad variance {f:?}")))
                })
                .collect::<Result<_, _>>()?;
            variances = Some(vs);
            continue;
        }
        let row: Vec<f64> = fields
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| parse_err(path, idx + 1, format!("expected a number, got {f:?}")))
            })
            .collect::<Result<_, _>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(parse_err(
                    path,
                    idx + 1,
                    format!("ragged row: {} fields, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(path, 1, "no feature rows"));
    }
    let (n, d) = (rows.len(), rows[0].len());
    if let Some(vs) = &variances {
        if vs.len() != d {
            return Err(parse_err(
                path,
                1,
                format!("{} variances for {} features", vs.len(), d),
            ));
        }
    }
    let data = DMatrix::from_fn(n, d, |i, j| rows[i][j]);
    let fm = match variances {
        Some(vs) => FeatureMatrix::with_variances(data, vs),
        None => FeatureMatrix::new(data),
    };
    fm.map_err(|e| parse_err(path, 1, e.to_string()))
}

/// Write a feature CSV (with a `variances` header row when present).
pub fn write_features_csv(path: impl AsRef<Path>, f: &FeatureMatrix) -> Result<(), IoError> {
    let mut out = String::new();
    if let Some(vs) = f.variances() {
        out.push_str("variances");
        for v in vs {
            let _ = write!(out, ",{}", format_float(*v));
        }
        out.push('\n');
    }
    let m = f.data();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", format_float(m[(i, j)]));
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}
