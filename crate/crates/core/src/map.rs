//! Viseme maps: many-to-one assignments of phonemes to viseme classes.
//!
//! Map file layout:
//!
//! ```text
//! # id: lee-vowels
//! # citation: Lee & Yook (2002)
//! # coverage: vowel
//! # excluded:
//! V01: iy ih
//! V02: eh ey ae
//! ```

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::inventory::{is_token, PhonemeClass, PhonemeInventory};
use crate::transcript::Transcript;

/// Reserved label of the class that receives uncovered phonemes.
pub const GARBAGE_LABEL: &str = "gar";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coverage {
    Consonant,
    Vowel,
    Full,
}

impl Coverage {
    pub fn as_str(self) -> &'static str {
        match self {
            Coverage::Consonant => "consonant",
            Coverage::Vowel => "vowel",
            Coverage::Full => "full",
        }
    }
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Coverage {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "consonant" => Ok(Coverage::Consonant),
            "vowel" => Ok(Coverage::Vowel),
            "full" => Ok(Coverage::Full),
            other => Err(format!("unknown coverage `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Viseme {
    pub label: String,
    pub members: Vec<String>,
}

impl Viseme {
    pub fn new<I, S>(label: impl Into<String>, members: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Viseme {
            label: label.into(),
            members: members.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_garbage(&self) -> bool {
        self.label == GARBAGE_LABEL
    }
}

#[derive(Clone, Debug)]
pub struct VisemeMap {
    id: String,
    citation: String,
    coverage: Coverage,
    classes: Vec<Viseme>,
    excluded: BTreeSet<String>,
    lookup: HashMap<String, usize>,
}

impl PartialEq for VisemeMap {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.citation == other.citation
            && self.coverage == other.coverage
            && self.classes == other.classes
            && self.excluded == other.excluded
    }
}

impl Eq for VisemeMap {}

impl VisemeMap {
    /// Builds a map, checking the partition and label invariants.
    pub fn new<I, S>(
        id: impl Into<String>,
        citation: impl Into<String>,
        coverage: Coverage,
        classes: Vec<Viseme>,
        excluded: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let id = id.into();
        if !is_token(&id) {
            return Err(Error::InvalidMap(format!("bad map id `{id}`")));
        }
        let mut labels = HashSet::new();
        let mut lookup = HashMap::new();
        for (ci, class) in classes.iter().enumerate() {
            if !is_token(&class.label) || class.label.contains(':') {
                return Err(Error::InvalidMap(format!("bad class label `{}`", class.label)));
            }
            if !labels.insert(class.label.as_str()) {
                return Err(Error::InvalidMap(format!(
                    "duplicate class label `{}`",
                    class.label
                )));
            }
            if class.members.is_empty() && !class.is_garbage() {
                return Err(Error::InvalidMap(format!("class `{}` is empty", class.label)));
            }
            for m in &class.members {
                if !is_token(m) {
                    return Err(Error::InvalidMap(format!("bad phoneme symbol `{m}`")));
                }
                if let Some(prev) = lookup.insert(m.clone(), ci) {
                    return Err(Error::OverlappingClasses {
                        symbol: m.clone(),
                        first: classes[prev].label.clone(),
                        second: class.label.clone(),
                    });
                }
            }
        }
        let excluded: BTreeSet<String> = excluded.into_iter().map(Into::into).collect();
        if let Some(s) = excluded.iter().find(|s| lookup.contains_key(*s)) {
            return Err(Error::InvalidMap(format!(
                "excluded phoneme `{s}` is also mapped"
            )));
        }
        Ok(VisemeMap {
            id,
            citation: citation.into(),
            coverage,
            classes,
            excluded,
            lookup,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn citation(&self) -> &str {
        &self.citation
    }

    pub fn coverage(&self) -> Coverage {
        self.coverage
    }

    pub fn classes(&self) -> &[Viseme] {
        &self.classes
    }

    pub fn excluded(&self) -> &BTreeSet<String> {
        &self.excluded
    }

    /// Classes other than the garbage class.
    pub fn visemes(&self) -> impl Iterator<Item = &Viseme> {
        self.classes.iter().filter(|c| !c.is_garbage())
    }

    /// Returns a copy with a new id and citation.
    pub fn renamed(mut self, id: impl Into<String>, citation: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if !is_token(&id) {
            return Err(Error::InvalidMap(format!("bad map id `{id}`")));
        }
        self.id = id;
        self.citation = citation.into();
        Ok(self)
    }

    /// The class containing `symbol`, if any (the garbage class included).
    pub fn class_of(&self, symbol: &str) -> Option<&Viseme> {
        self.lookup.get(symbol).map(|&i| &self.classes[i])
    }

    /// Label for `symbol`, with garbage fallback for uncovered or excluded symbols.
    pub fn label_for(&self, symbol: &str) -> &str {
        self.class_of(symbol).map_or(GARBAGE_LABEL, |c| c.label.as_str())
    }

    /// Covered symbols outside the garbage class.
    pub fn covered(&self) -> impl Iterator<Item = &str> {
        self.visemes().flat_map(|c| c.members.iter().map(String::as_str))
    }

    /// Members whose inventory class contradicts the map's coverage.
    /// Symbols missing from the inventory are reported too.
    pub fn coverage_violations(&self, inv: &PhonemeInventory) -> Vec<String> {
        let wanted = match self.coverage {
            Coverage::Full => return Vec::new(),
            Coverage::Consonant => PhonemeClass::Consonant,
            Coverage::Vowel => PhonemeClass::Vowel,
        };
        self.covered()
            .filter(|s| inv.classify(s).map_or(true, |c| c != wanted))
            .map(str::to_string)
            .collect()
    }

    pub fn parse(source: &str) -> Result<Self> {
        let mut id = None;
        let mut citation = String::new();
        let mut coverage = None;
        let mut excluded = Vec::new();
        let mut classes = Vec::new();
        for (n, raw) in source.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                let Some((key, value)) = comment.split_once(':') else {
                    continue;
                };
                let value = value.trim();
                match key.trim() {
                    "id" => id = Some(value.to_string()),
                    "citation" => citation = value.to_string(),
                    "coverage" => {
                        coverage = Some(value.parse::<Coverage>().map_err(|e| Error::parse(line_no, e))?)
                    }
                    "excluded" => excluded.extend(value.split_whitespace().map(str::to_string)),
                    _ => {}
                }
                continue;
            }
            let (label, members) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(line_no, "expected `<label>: <symbol> ...`"))?;
            classes.push(Viseme::new(label.trim(), members.split_whitespace()));
        }
        let id = id.ok_or_else(|| Error::parse(0, "missing `# id:` header"))?;
        let coverage = coverage.ok_or_else(|| Error::parse(0, "missing `# coverage:` header"))?;
        VisemeMap::new(id, citation, coverage, classes, excluded)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!(
            "# id: {}\n# citation: {}\n# coverage: {}\n# excluded:",
            self.id, self.citation, self.coverage
        );
        for s in &self.excluded {
            out.push(' ');
            out.push_str(s);
        }
        out.push('\n');
        for c in &self.classes {
            out.push_str(&c.label);
            out.push(':');
            for m in &c.members {
                out.push(' ');
                out.push_str(m);
            }
            out.push('\n');
        }
        out
    }
}

pub fn parse_map(source: &str) -> Result<VisemeMap> {
    VisemeMap::parse(source)
}

pub fn serialize_map(map: &VisemeMap) -> String {
    map.serialize()
}

/// Viseme and phoneme counts behind a confusion factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConfusionFactorReport {
    pub viseme_count: usize,
    pub phoneme_count: usize,
    pub cf: f64,
}

impl fmt::Display for ConfusionFactorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "V={} P={} CF={:.3}",
            self.viseme_count, self.phoneme_count, self.cf
        )
    }
}

/// V/P over the non-garbage classes. Excluded and garbage phonemes count in neither.
pub fn confusion_factor(map: &VisemeMap) -> Result<ConfusionFactorReport> {
    let viseme_count = map.visemes().count();
    let phoneme_count = map.covered().count();
    if viseme_count == 0 {
        return Err(Error::EmptyMap(map.id().to_string()));
    }
    Ok(ConfusionFactorReport {
        viseme_count,
        phoneme_count,
        cf: viseme_count as f64 / phoneme_count as f64,
    })
}

/// Replaces every phoneme by its viseme label; uncovered symbols become `gar`.
pub fn apply_map(map: &VisemeMap, transcript: &Transcript) -> Transcript {
    Transcript {
        utterance_id: transcript.utterance_id.clone(),
        fold: transcript.fold,
        units: transcript
            .units
            .iter()
            .map(|u| map.label_for(u).to_string())
            .collect(),
    }
}

fn require(map: &VisemeMap, expected: Coverage) -> Result<()> {
    if map.coverage() == expected {
        Ok(())
    } else {
        Err(Error::CoverageMismatch {
            id: map.id().to_string(),
            expected: expected.as_str(),
            found: map.coverage().as_str(),
        })
    }
}

/// Pairs a consonant map with a vowel map into a full map over `inventory`.
///
/// Class labels are prefixed `C-` and `V-`. A symbol listed by both halves
/// stays with the half matching its class (looked up in `inventory`, then the
/// built-in catalog inventory; unknown symbols stay consonants). Inventory
/// phonemes covered by neither half go to the garbage class.
pub fn combine(
    consonants: &VisemeMap,
    vowels: &VisemeMap,
    inventory: &PhonemeInventory,
) -> Result<VisemeMap> {
    require(consonants, Coverage::Consonant)?;
    require(vowels, Coverage::Vowel)?;

    let class_of = |s: &str| {
        inventory
            .classify(s)
            .or_else(|_| PhonemeInventory::catalog().classify(s))
            .unwrap_or(PhonemeClass::Consonant)
    };
    let cons_set: HashSet<&str> = consonants.covered().collect();
    let vow_set: HashSet<&str> = vowels.covered().collect();

    let mut classes = Vec::new();
    for (prefix, map, other, keep_class) in [
        ("C-", consonants, &vow_set, PhonemeClass::Consonant),
        ("V-", vowels, &cons_set, PhonemeClass::Vowel),
    ] {
        for class in map.visemes() {
            let members: Vec<&String> = class
                .members
                .iter()
                .filter(|m| !other.contains(m.as_str()) || class_of(m) == keep_class)
                .collect();
            if !members.is_empty() {
                classes.push(Viseme::new(
                    format!("{prefix}{}", class.label),
                    members.into_iter().cloned(),
                ));
            }
        }
    }

    let covered: HashSet<&str> = classes
        .iter()
        .flat_map(|c| c.members.iter().map(String::as_str))
        .collect();
    let garbage: Vec<String> = inventory
        .symbols()
        .filter(|s| !covered.contains(s))
        .map(str::to_string)
        .collect();
    let excluded: BTreeSet<String> = consonants
        .excluded()
        .iter()
        .chain(vowels.excluded())
        .filter(|s| !covered.contains(s.as_str()) && !garbage.contains(s))
        .cloned()
        .collect();
    if !garbage.is_empty() {
        classes.push(Viseme::new(GARBAGE_LABEL, garbage));
    }

    VisemeMap::new(
        format!("{}+{}", consonants.id(), vowels.id()),
        format!("{}; {}", consonants.citation(), vowels.citation()),
        Coverage::Full,
        classes,
        excluded,
    )
}
