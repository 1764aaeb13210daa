//! Transcripts and the TSV file that carries them.
//!
//! One utterance per line: `<utterance_id>\t<fold>\t<label> <label> ...`.
//! The label field may be empty.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::inventory::is_token;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub utterance_id: String,
    /// 1-based cross-validation fold.
    pub fold: u32,
    pub units: Vec<String>,
}

impl Transcript {
    pub fn new<I, S>(utterance_id: impl Into<String>, fold: u32, units: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Transcript {
            utterance_id: utterance_id.into(),
            fold,
            units: units.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }
}

/// An ordered collection of transcripts with unique utterance ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TranscriptSet {
    items: Vec<Transcript>,
    index: HashMap<String, usize>,
}

impl TranscriptSet {
    pub fn new(items: Vec<Transcript>) -> Result<Self> {
        let mut index = HashMap::with_capacity(items.len());
        for (i, t) in items.iter().enumerate() {
            if !is_token(&t.utterance_id) {
                return Err(Error::parse(
                    i + 1,
                    format!("invalid utterance id `{}`", t.utterance_id),
                ));
            }
            if t.fold == 0 {
                return Err(Error::parse(i + 1, "folds are 1-based"));
            }
            if let Some(bad) = t.units.iter().find(|u| !is_token(u)) {
                return Err(Error::parse(i + 1, format!("invalid label `{bad}`")));
            }
            if index.insert(t.utterance_id.clone(), i).is_some() {
                return Err(Error::parse(
                    i + 1,
                    format!("duplicate utterance `{}`", t.utterance_id),
                ));
            }
        }
        Ok(TranscriptSet { items, index })
    }

    pub fn parse_tsv(source: &str) -> Result<Self> {
        let mut items = Vec::new();
        for (n, line) in source.lines().enumerate() {
            let line_no = n + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.splitn(3, '\t');
            let id = fields.next().unwrap_or_default();
            let fold = fields
                .next()
                .ok_or_else(|| Error::parse(line_no, "expected `<id>\\t<fold>\\t<labels>`"))?;
            let fold: u32 = fold
                .trim()
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad fold `{fold}`")))?;
            let units = fields.next().unwrap_or_default().split_whitespace();
            items.push(Transcript::new(id.trim(), fold, units));
        }
        Self::new(items)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for t in &self.items {
            out.push_str(&t.utterance_id);
            out.push('\t');
            out.push_str(&t.fold.to_string());
            out.push('\t');
            out.push_str(&t.units.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Transcript> {
        self.items.iter()
    }

    pub fn get(&self, utterance_id: &str) -> Option<&Transcript> {
        self.index.get(utterance_id).map(|&i| &self.items[i])
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Distinct folds in ascending order.
    pub fn folds(&self) -> Vec<u32> {
        let mut folds: Vec<u32> = self.items.iter().map(|t| t.fold).collect();
        folds.sort_unstable();
        folds.dedup();
        folds
    }
}

impl<'a> IntoIterator for &'a TranscriptSet {
    type Item = &'a Transcript;
    type IntoIter = std::slice::Iter<'a, Transcript>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}
