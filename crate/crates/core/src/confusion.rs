//! Phoneme confusion matrices and the symmetrized confusion graph.
//!
//! CSV layout: first row `,label1,label2,...`; each following row
//! `labelK,c1,c2,...` in header order. `counts[i][j]` is the number of times
//! reference phoneme `i` was recognized as `j`.

use std::collections::BTreeSet;
use std::collections::HashMap;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::inventory::{is_token, PhonemeInventory};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        let n = labels.len();
        if counts.len() != n || counts.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("{n} labels but counts are not {n}x{n}")));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !is_token(l) || l.contains([',', '"']) {
                return Err(Error::parse(1, format!("invalid label `{l}`")));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicatePhoneme(l.clone()));
            }
        }
        Ok(ConfusionMatrix { labels, counts })
    }

    pub fn parse_csv(source: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(source.as_bytes());
        let mut records = reader.records();
        let header = match records.next() {
            Some(r) => r.map_err(|e| Error::parse(1, e.to_string()))?,
            None => return ConfusionMatrix::new(Vec::new(), Vec::new()),
        };
        let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let n = labels.len();
        let mut counts = Vec::with_capacity(n);
        for (i, rec) in records.enumerate() {
            let line_no = i + 2;
            let rec = rec.map_err(|e| Error::parse(line_no, e.to_string()))?;
            if rec.len() == 1 && rec.get(0) == Some("") {
                continue;
            }
            if rec.len() != n + 1 {
                return Err(Error::Shape(format!(
                    "line {line_no} has {} cells, expected {}",
                    rec.len().saturating_sub(1),
                    n
                )));
            }
            if counts.len() == n {
                return Err(Error::Shape(format!("more than {n} rows")));
            }
            let row_label = &rec[0];
            if row_label != labels[counts.len()] {
                return Err(Error::parse(
                    line_no,
                    format!(
                        "row label `{row_label}` does not match header `{}`",
                        labels[counts.len()]
                    ),
                ));
            }
            let row = rec
                .iter()
                .skip(1)
                .map(|cell| {
                    cell.parse::<u64>().map_err(|_| {
                        Error::parse(line_no, format!("`{cell}` is not a non-negative integer count"))
                    })
                })
                .collect::<Result<Vec<u64>>>()?;
            counts.push(row);
        }
        if counts.len() != n {
            return Err(Error::Shape(format!("{} rows for {n} labels", counts.len())));
        }
        ConfusionMatrix::new(labels, counts)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.counts) {
            out.push_str(l);
            for c in row {
                out.push(',');
                out.push_str(&c.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i][j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Fails with `UnknownPhoneme` on the first label missing from `inv`.
    pub fn check_inventory(&self, inv: &PhonemeInventory) -> Result<()> {
        match self.labels.iter().find(|l| !inv.contains(l)) {
            Some(l) => Err(Error::UnknownPhoneme(l.clone())),
            None => Ok(()),
        }
    }

    fn off_diagonal_clear(&self, i: usize) -> bool {
        (0..self.len()).all(|j| j == i || (self.counts[i][j] == 0 && self.counts[j][i] == 0))
    }

    /// Phonemes recognized only ever as themselves.
    pub fn true_positive_only(&self) -> BTreeSet<String> {
        (0..self.len())
            .filter(|&i| self.counts[i][i] > 0 && self.off_diagonal_clear(i))
            .map(|i| self.labels[i].clone())
            .collect()
    }

    /// Phonemes whose row and column are entirely zero.
    pub fn unseen(&self) -> BTreeSet<String> {
        (0..self.len())
            .filter(|&i| self.counts[i][i] == 0 && self.off_diagonal_clear(i))
            .map(|i| self.labels[i].clone())
            .collect()
    }
}

pub fn load_confusion(source: &str) -> Result<ConfusionMatrix> {
    ConfusionMatrix::parse_csv(source)
}

pub fn true_positive_only(m: &ConfusionMatrix) -> BTreeSet<String> {
    m.true_positive_only()
}

/// Undirected graph of confused phoneme pairs.
///
/// Vertices are sorted by symbol regardless of the matrix label order, so
/// vertex index order is lexicographic symbol order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusionGraph {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    weights: Vec<Vec<u64>>,
    adjacency: Vec<VertexSet>,
}

impl ConfusionGraph {
    pub fn from_matrix(m: &ConfusionMatrix) -> Self {
        let mut order: Vec<usize> = (0..m.len()).collect();
        order.sort_by(|&a, &b| m.labels[a].cmp(&m.labels[b]));
        let n = order.len();
        let vertices: Vec<String> = order.iter().map(|&i| m.labels[i].clone()).collect();
        let mut weights = vec![vec![0; n]; n];
        let mut adjacency = vec![VertexSet::empty(n); n];
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let (i, j) = (order[a], order[b]);
                let w = m.counts[i][j] + m.counts[j][i];
                weights[a][b] = w;
                if w > 0 {
                    adjacency[a].insert(b);
                }
            }
        }
        let index = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        ConfusionGraph {
            vertices,
            index,
            weights,
            adjacency,
        }
    }

    /// Same vertices, keeping only edges for which `keep(a, b)` holds.
    pub fn filter_edges(&self, keep: impl Fn(&str, &str) -> bool) -> Self {
        let mut g = self.clone();
        for a in 0..g.len() {
            for b in 0..g.len() {
                if a != b && !keep(&g.vertices[a], &g.vertices[b]) {
                    g.weights[a][b] = 0;
                    g.adjacency[a].remove(b);
                }
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    /// Symmetrized confusion count, `counts[i][j] + counts[j][i]`; zero on the diagonal.
    pub fn weight(&self, a: usize, b: usize) -> u64 {
        self.weights[a][b]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(b)
    }

    pub fn neighbors(&self, a: usize) -> &VertexSet {
        &self.adjacency[a]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn isolated(&self) -> Vec<&str> {
        (0..self.len())
            .filter(|&a| self.adjacency[a].is_empty())
            .map(|a| self.vertices[a].as_str())
            .collect()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    pub fn symbols_of(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|a| self.vertices[a].clone()).collect()
    }
}

pub fn to_graph(m: &ConfusionMatrix) -> ConfusionGraph {
    ConfusionGraph::from_matrix(m)
}
