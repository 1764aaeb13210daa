//! Phonemes and the inventories every other module resolves symbols against.
//!
//! An inventory file is plain text with one phoneme per line:
//!
//! ```text
//! # name: avl2
//! p consonant p
//! ae vowel æ
//! ```
//!
//! The optional third column is a display string (normally IPA). Comment
//! lines at the top of the file are kept so that shipped inventories
//! serialize back byte for byte; a `# name:` comment sets the inventory name.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const AVL2_SOURCE: &str = include_str!("../data/avl2.inv");
const CATALOG_SOURCE: &str = include_str!("../data/catalog.inv");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PhonemeClass {
    Vowel,
    Consonant,
}

impl PhonemeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PhonemeClass::Vowel => "vowel",
            PhonemeClass::Consonant => "consonant",
        }
    }
}

impl fmt::Display for PhonemeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PhonemeClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "vowel" => Ok(PhonemeClass::Vowel),
            "consonant" => Ok(PhonemeClass::Consonant),
            other => Err(format!("unknown phoneme class `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phoneme {
    symbol: String,
    ipa: Option<String>,
    class: PhonemeClass,
}

impl Phoneme {
    pub fn new(symbol: impl Into<String>, class: PhonemeClass, ipa: Option<String>) -> Result<Self> {
        let symbol = symbol.into();
        if !is_token(&symbol) {
            return Err(Error::parse(0, format!("invalid phoneme symbol `{symbol}`")));
        }
        Ok(Phoneme { symbol, ipa, class })
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    /// Display form; falls back to the ASCII symbol.
    pub fn ipa(&self) -> &str {
        self.ipa.as_deref().unwrap_or(&self.symbol)
    }

    pub fn class(&self) -> PhonemeClass {
        self.class
    }
}

/// A token is non-empty and free of whitespace.
pub(crate) fn is_token(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

#[derive(Clone, Debug)]
pub struct PhonemeInventory {
    name: String,
    header: Vec<String>,
    phonemes: Vec<Phoneme>,
    index: HashMap<String, usize>,
}

impl PartialEq for PhonemeInventory {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.phonemes == other.phonemes
    }
}

impl PhonemeInventory {
    pub fn new(name: impl Into<String>, phonemes: Vec<Phoneme>) -> Result<Self> {
        let name = name.into();
        let header = vec![format!("# name: {name}")];
        Self::build(name, header, phonemes)
    }

    fn build(name: String, header: Vec<String>, phonemes: Vec<Phoneme>) -> Result<Self> {
        let mut index = HashMap::with_capacity(phonemes.len());
        for (i, p) in phonemes.iter().enumerate() {
            if index.insert(p.symbol.clone(), i).is_some() {
                return Err(Error::DuplicatePhoneme(p.symbol.clone()));
            }
        }
        Ok(PhonemeInventory {
            name,
            header,
            phonemes,
            index,
        })
    }

    /// Parses the inventory file format.
    pub fn parse(source: &str) -> Result<Self> {
        let mut name = None;
        let mut header = Vec::new();
        let mut phonemes = Vec::new();
        for (n, raw) in source.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('#') {
                if phonemes.is_empty() {
                    if let Some(v) = line
                        .strip_prefix('#')
                        .map(str::trim)
                        .and_then(|c| c.strip_prefix("name:"))
                    {
                        name = Some(v.trim().to_string());
                    }
                    header.push(raw.trim_end().to_string());
                }
                continue;
            }
            let mut fields = line.split_whitespace();
            let symbol = fields.next().expect("non-empty line has a field");
            let class_tok = fields
                .next()
                .ok_or_else(|| Error::parse(line_no, format!("missing class for `{symbol}`")))?;
            let class = class_tok
                .parse::<PhonemeClass>()
                .map_err(|e| Error::parse(line_no, e))?;
            let ipa = fields.next().map(str::to_string);
            if fields.next().is_some() {
                return Err(Error::parse(line_no, "too many fields"));
            }
            phonemes.push(Phoneme {
                symbol: symbol.to_string(),
                ipa,
                class,
            });
        }
        let name = name.unwrap_or_else(|| "inventory".to_string());
        Self::build(name, header, phonemes)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for h in &self.header {
            out.push_str(h);
            out.push('\n');
        }
        for p in &self.phonemes {
            out.push_str(&p.symbol);
            out.push(' ');
            out.push_str(p.class.as_str());
            if let Some(ipa) = &p.ipa {
                out.push(' ');
                out.push_str(ipa);
            }
            out.push('\n');
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.phonemes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phonemes.is_empty()
    }

    /// Phonemes in declaration order.
    pub fn iter(&self) -> impl Iterator<Item = &Phoneme> {
        self.phonemes.iter()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.phonemes.iter().map(|p| p.symbol.as_str())
    }

    pub fn get(&self, symbol: &str) -> Option<&Phoneme> {
        self.index.get(symbol).map(|&i| &self.phonemes[i])
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.index.contains_key(symbol)
    }

    pub fn classify(&self, symbol: &str) -> Result<PhonemeClass> {
        self.get(symbol)
            .map(Phoneme::class)
            .ok_or_else(|| Error::UnknownPhoneme(symbol.to_string()))
    }

    /// The AVLetters2 inventory (29 phonemes, silence omitted).
    pub fn avl2() -> &'static PhonemeInventory {
        static AVL2: OnceLock<PhonemeInventory> = OnceLock::new();
        AVL2.get_or_init(|| PhonemeInventory::parse(AVL2_SOURCE).expect("shipped avl2.inv is valid"))
    }

    /// Every symbol used by the built-in maps.
    pub fn catalog() -> &'static PhonemeInventory {
        static CATALOG: OnceLock<PhonemeInventory> = OnceLock::new();
        CATALOG.get_or_init(|| PhonemeInventory::parse(CATALOG_SOURCE).expect("shipped catalog.inv is valid"))
    }

    #[cfg(test)]
    pub(crate) fn shipped_sources() -> [(&'static str, &'static str); 2] {
        [("avl2.inv", AVL2_SOURCE), ("catalog.inv", CATALOG_SOURCE)]
    }
}

pub fn load_inventory(source: &str) -> Result<PhonemeInventory> {
    PhonemeInventory::parse(source)
}

pub fn classify(inv: &PhonemeInventory, symbol: &str) -> Result<PhonemeClass> {
    inv.classify(symbol)
}
