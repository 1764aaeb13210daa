//! Built-in viseme maps and the catalog that serves them.
//!
//! The built-ins are 15 consonant maps, 8 vowel maps and 16 talker-dependent
//! maps derived from phoneme confusions (4 talkers, tight/loose, mixed/split).
//! Encoding notes live in `data/maps/CHANGELOG.md`.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::inventory::PhonemeInventory;
use crate::map::{combine, Coverage, VisemeMap};

const BUILTIN_SOURCES: &[(&str, &str)] = &[
    (
        "binnie-consonants",
        include_str!("../data/maps/binnie-consonants.map"),
    ),
    (
        "bozkurt-consonants",
        include_str!("../data/maps/bozkurt-consonants.map"),
    ),
    ("bozkurt-vowels", include_str!("../data/maps/bozkurt-vowels.map")),
    (
        "disney-consonants",
        include_str!("../data/maps/disney-consonants.map"),
    ),
    ("disney-vowels", include_str!("../data/maps/disney-vowels.map")),
    (
        "finn-consonants",
        include_str!("../data/maps/finn-consonants.map"),
    ),
    (
        "fisher-consonants",
        include_str!("../data/maps/fisher-consonants.map"),
    ),
    (
        "franks-consonants",
        include_str!("../data/maps/franks-consonants.map"),
    ),
    (
        "hazen-consonants",
        include_str!("../data/maps/hazen-consonants.map"),
    ),
    ("hazen-vowels", include_str!("../data/maps/hazen-vowels.map")),
    (
        "heider-consonants",
        include_str!("../data/maps/heider-consonants.map"),
    ),
    (
        "jeffers-consonants",
        include_str!("../data/maps/jeffers-consonants.map"),
    ),
    ("jeffers-vowels", include_str!("../data/maps/jeffers-vowels.map")),
    (
        "kricos-consonants",
        include_str!("../data/maps/kricos-consonants.map"),
    ),
    ("lee-consonants", include_str!("../data/maps/lee-consonants.map")),
    ("lee-vowels", include_str!("../data/maps/lee-vowels.map")),
    (
        "montgomery-vowels",
        include_str!("../data/maps/montgomery-vowels.map"),
    ),
    (
        "neti-consonants",
        include_str!("../data/maps/neti-consonants.map"),
    ),
    ("neti-vowels", include_str!("../data/maps/neti-vowels.map")),
    (
        "nichie-consonants",
        include_str!("../data/maps/nichie-consonants.map"),
    ),
    ("nichie-vowels", include_str!("../data/maps/nichie-vowels.map")),
    (
        "talker1-loose-mixed",
        include_str!("../data/maps/talker1-loose-mixed.map"),
    ),
    (
        "talker1-loose-split",
        include_str!("../data/maps/talker1-loose-split.map"),
    ),
    (
        "talker1-tight-mixed",
        include_str!("../data/maps/talker1-tight-mixed.map"),
    ),
    (
        "talker1-tight-split",
        include_str!("../data/maps/talker1-tight-split.map"),
    ),
    (
        "talker2-loose-mixed",
        include_str!("../data/maps/talker2-loose-mixed.map"),
    ),
    (
        "talker2-loose-split",
        include_str!("../data/maps/talker2-loose-split.map"),
    ),
    (
        "talker2-tight-mixed",
        include_str!("../data/maps/talker2-tight-mixed.map"),
    ),
    (
        "talker2-tight-split",
        include_str!("../data/maps/talker2-tight-split.map"),
    ),
    (
        "talker3-loose-mixed",
        include_str!("../data/maps/talker3-loose-mixed.map"),
    ),
    (
        "talker3-loose-split",
        include_str!("../data/maps/talker3-loose-split.map"),
    ),
    (
        "talker3-tight-mixed",
        include_str!("../data/maps/talker3-tight-mixed.map"),
    ),
    (
        "talker3-tight-split",
        include_str!("../data/maps/talker3-tight-split.map"),
    ),
    (
        "talker4-loose-mixed",
        include_str!("../data/maps/talker4-loose-mixed.map"),
    ),
    (
        "talker4-loose-split",
        include_str!("../data/maps/talker4-loose-split.map"),
    ),
    (
        "talker4-tight-mixed",
        include_str!("../data/maps/talker4-tight-mixed.map"),
    ),
    (
        "talker4-tight-split",
        include_str!("../data/maps/talker4-tight-split.map"),
    ),
    (
        "walden-consonants",
        include_str!("../data/maps/walden-consonants.map"),
    ),
    (
        "woodward-consonants",
        include_str!("../data/maps/woodward-consonants.map"),
    ),
];

/// Every built-in map, in catalog order (file name order).
pub fn builtin_maps() -> &'static [VisemeMap] {
    static MAPS: OnceLock<Vec<VisemeMap>> = OnceLock::new();
    MAPS.get_or_init(|| {
        BUILTIN_SOURCES
            .iter()
            .map(|(name, src)| {
                let map = VisemeMap::parse(src).unwrap_or_else(|e| panic!("built-in map {name}: {e}"));
                assert_eq!(map.id(), *name, "map id must match its file name");
                map
            })
            .collect()
    })
}

#[cfg(test)]
pub(crate) fn builtin_sources() -> &'static [(&'static str, &'static str)] {
    BUILTIN_SOURCES
}

/// Talker-dependent maps carry `full` coverage and a `talker` id prefix.
pub fn is_derived(map: &VisemeMap) -> bool {
    map.coverage() == Coverage::Full && map.id().starts_with("talker")
}

#[derive(Clone, Debug)]
pub struct Catalog {
    maps: Vec<VisemeMap>,
    index: HashMap<String, usize>,
}

impl Catalog {
    pub fn builtin() -> Self {
        Self::from_maps(builtin_maps().to_vec()).expect("built-in ids are unique")
    }

    pub fn from_maps(maps: Vec<VisemeMap>) -> Result<Self> {
        let mut index = HashMap::with_capacity(maps.len());
        for (i, m) in maps.iter().enumerate() {
            if index.insert(m.id().to_string(), i).is_some() {
                return Err(Error::DuplicateMapId(m.id().to_string()));
            }
        }
        Ok(Catalog { maps, index })
    }

    /// Adds a map; an id already in the catalog is an error.
    pub fn insert(&mut self, map: VisemeMap) -> Result<()> {
        if self.index.contains_key(map.id()) {
            return Err(Error::DuplicateMapId(map.id().to_string()));
        }
        self.index.insert(map.id().to_string(), self.maps.len());
        self.maps.push(map);
        Ok(())
    }

    /// Merges every `*.map` file in `dir`, in file name order.
    pub fn load_dir(&mut self, dir: &Path) -> Result<()> {
        let mut paths: Vec<_> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "map"))
            .collect();
        paths.sort();
        for p in paths {
            self.insert(VisemeMap::parse(&fs::read_to_string(&p)?)?)?;
        }
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&VisemeMap> {
        self.index.get(id).map(|&i| &self.maps[i])
    }

    pub fn require(&self, id: &str) -> Result<&VisemeMap> {
        self.get(id).ok_or_else(|| Error::UnknownMap(id.to_string()))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, VisemeMap> {
        self.maps.iter()
    }

    pub fn with_coverage(&self, coverage: Coverage) -> impl Iterator<Item = &VisemeMap> {
        self.maps.iter().filter(move |m| m.coverage() == coverage)
    }

    /// Every consonant × vowel pairing over `inventory`, consonant-major.
    pub fn all_pairings(&self, inventory: &PhonemeInventory) -> Result<Vec<VisemeMap>> {
        let mut out = Vec::new();
        for c in self.with_coverage(Coverage::Consonant) {
            for v in self.with_coverage(Coverage::Vowel) {
                out.push(combine(c, v, inventory)?);
            }
        }
        Ok(out)
    }
}
