//! Scoring viseme transcripts: alignment, correctness, and fold aggregation.
//!
//! Correctness is `C = (N - D - S) / N`, with counts pooled over every
//! utterance in the group before dividing. Insertions are counted but do not
//! enter `C`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::map::{apply_map, VisemeMap};
use crate::transcript::{Transcript, TranscriptSet};

/// One aligned position: reference label, hypothesis label, or both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlignedPair {
    pub reference: Option<String>,
    pub hypothesis: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ErrorCounts {
    pub n_ref: usize,
    pub matches: usize,
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
}

impl ErrorCounts {
    pub fn add(&mut self, other: &ErrorCounts) {
        self.n_ref += other.n_ref;
        self.matches += other.matches;
        self.substitutions += other.substitutions;
        self.deletions += other.deletions;
        self.insertions += other.insertions;
    }

    /// `(N - D - S) / N`; `None` when `N = 0`.
    pub fn correctness(&self) -> Option<f64> {
        (self.n_ref > 0)
            .then(|| (self.n_ref - self.deletions - self.substitutions) as f64 / self.n_ref as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlignmentResult {
    pub counts: ErrorCounts,
    pub pairs: Vec<AlignedPair>,
}

impl AlignmentResult {
    pub fn n_ref(&self) -> usize {
        self.counts.n_ref
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    Match,
    Sub,
    Del,
    Ins,
}

/// Minimum edit distance alignment with unit costs.
///
/// Traceback runs from the end and prefers match, then substitution, then
/// deletion, then insertion, so the chosen alignment is fixed among the
/// cost-minimal ones.
pub fn align_units(reference: &[String], hypothesis: &[String]) -> AlignmentResult {
    let (n, m) = (reference.len(), hypothesis.len());
    let mut dp = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in dp.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in dp[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let diag = dp[i - 1][j - 1] + usize::from(reference[i - 1] != hypothesis[j - 1]);
            dp[i][j] = diag.min(dp[i - 1][j] + 1).min(dp[i][j - 1] + 1);
        }
    }

    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = dp[i][j];
        let op = if i > 0 && j > 0 && reference[i - 1] == hypothesis[j - 1] && dp[i - 1][j - 1] == here {
            Op::Match
        } else if i > 0 && j > 0 && reference[i - 1] != hypothesis[j - 1] && dp[i - 1][j - 1] + 1 == here {
            Op::Sub
        } else if i > 0 && dp[i - 1][j] + 1 == here {
            Op::Del
        } else {
            Op::Ins
        };
        match op {
            Op::Match | Op::Sub => {
                i -= 1;
                j -= 1;
            }
            Op::Del => i -= 1,
            Op::Ins => j -= 1,
        }
        ops.push((op, i, j));
    }
    ops.reverse();

    let mut counts = ErrorCounts {
        n_ref: n,
        ..ErrorCounts::default()
    };
    let pairs = ops
        .into_iter()
        .map(|(op, i, j)| {
            let (r, h) = match op {
                Op::Match => {
                    counts.matches += 1;
                    (Some(i), Some(j))
                }
                Op::Sub => {
                    counts.substitutions += 1;
                    (Some(i), Some(j))
                }
                Op::Del => {
                    counts.deletions += 1;
                    (Some(i), None)
                }
                Op::Ins => {
                    counts.insertions += 1;
                    (None, Some(j))
                }
            };
            AlignedPair {
                reference: r.map(|i| reference[i].clone()),
                hypothesis: h.map(|j| hypothesis[j].clone()),
            }
        })
        .collect();
    AlignmentResult { counts, pairs }
}

pub fn align(reference: &Transcript, hypothesis: &Transcript) -> Result<AlignmentResult> {
    if reference.utterance_id != hypothesis.utterance_id {
        return Err(Error::IdMismatch {
            reference: reference.utterance_id.clone(),
            hypothesis: hypothesis.utterance_id.clone(),
        });
    }
    Ok(align_units(&reference.units, &hypothesis.units))
}

/// Pooled correctness over a collection of alignments.
pub fn correctness<'a>(results: impl IntoIterator<Item = &'a AlignmentResult>) -> Result<f64> {
    let mut total = ErrorCounts::default();
    for r in results {
        total.add(&r.counts);
    }
    total.correctness().ok_or(Error::EmptyReference)
}

/// Mean and standard error of per-group correctness.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectnessSummary<K: Ord = u32> {
    pub per_fold: BTreeMap<K, f64>,
    pub mean: f64,
    /// Sample standard deviation (n - 1) over sqrt(n); zero for a single group.
    pub std_error: f64,
    pub fold_count: usize,
}

/// Aggregates scores keyed by fold (or talker, or any other grouping).
pub fn aggregate<K: Ord + Clone>(scores: &BTreeMap<K, f64>) -> Result<CorrectnessSummary<K>> {
    let n = scores.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mean = scores.values().sum::<f64>() / n as f64;
    let std_error = if n < 2 {
        0.0
    } else {
        let var = scores.values().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        var.sqrt() / (n as f64).sqrt()
    };
    Ok(CorrectnessSummary {
        per_fold: scores.clone(),
        mean,
        std_error,
        fold_count: n,
    })
}

/// Pooled error counts for a whole transcript set and for each fold.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScoreReport {
    pub total: ErrorCounts,
    pub per_fold: BTreeMap<u32, ErrorCounts>,
}

impl ScoreReport {
    /// Correctness of every fold with at least one reference label.
    pub fn fold_correctness(&self) -> BTreeMap<u32, f64> {
        self.per_fold
            .iter()
            .filter_map(|(f, c)| c.correctness().map(|v| (*f, v)))
            .collect()
    }
}

/// Aligns each reference utterance with the hypothesis of the same id.
pub fn score(refs: &TranscriptSet, hyps: &TranscriptSet) -> Result<ScoreReport> {
    let mut report = ScoreReport::default();
    for r in refs {
        let h = hyps.get(&r.utterance_id).ok_or_else(|| Error::IdMismatch {
            reference: r.utterance_id.clone(),
            hypothesis: String::new(),
        })?;
        let a = align(r, h)?;
        report.total.add(&a.counts);
        report.per_fold.entry(r.fold).or_default().add(&a.counts);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub map_id: String,
    pub mean_c: f64,
    pub std_error: f64,
    pub fold_count: usize,
}

/// Scores every map against its own hypotheses.
///
/// `refs` are phoneme transcripts; each is converted through the map before
/// scoring. Folds are scored by pooling, then averaged. Rows come back sorted
/// by descending mean correctness, ties by map id.
pub fn sweep(
    maps: &[VisemeMap],
    refs: &TranscriptSet,
    hyps: &HashMap<String, TranscriptSet>,
) -> Result<Vec<SweepRow>> {
    let mut rows = maps
        .par_iter()
        .map(|map| {
            let map_hyps = hyps
                .get(map.id())
                .ok_or_else(|| Error::IncompleteSweep(format!("no hypotheses for map `{}`", map.id())))?;
            let mut per_fold: BTreeMap<u32, ErrorCounts> = BTreeMap::new();
            for r in refs {
                let h = map_hyps.get(&r.utterance_id).ok_or_else(|| {
                    Error::IncompleteSweep(format!(
                        "map `{}` has no hypothesis for `{}` (fold {})",
                        map.id(),
                        r.utterance_id,
                        r.fold
                    ))
                })?;
                let a = align(&apply_map(map, r), h)?;
                per_fold.entry(r.fold).or_default().add(&a.counts);
            }
            let scores: BTreeMap<u32, f64> = per_fold
                .iter()
                .filter_map(|(f, c)| c.correctness().map(|v| (*f, v)))
                .collect();
            let summary = aggregate(&scores)?;
            Ok(SweepRow {
                map_id: map.id().to_string(),
                mean_c: summary.mean,
                std_error: summary.std_error,
                fold_count: summary.fold_count,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        b.mean_c
            .total_cmp(&a.mean_c)
            .then_with(|| a.map_id.cmp(&b.map_id))
    });
    Ok(rows)
}

/// `map_id,mean_c,std_error,fold_count` CSV.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("map_id,mean_c,std_error,fold_count\n");
    for r in rows {
        out.push_str(&format!(
            "{},{:.6},{:.6},{}\n",
            r.map_id, r.mean_c, r.std_error, r.fold_count
        ));
    }
    out
}
