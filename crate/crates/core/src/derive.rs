//! Talker-dependent viseme maps built from a phoneme confusion matrix.
//!
//! The tight pass gives every phoneme that was only ever recognized as
//! itself its own class, then repeatedly takes the largest clique of mutually
//! confused phonemes among those still unassigned. The loose pass folds each
//! singleton class of the tight map into the multi-phoneme class it is most
//! confused with, if any.
//!
//! In split mode vowel–consonant edges are dropped from the confusion graph
//! before either pass, so no class can mix the two.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::bitset::VertexSet;
use crate::clique::max_clique;
use crate::confusion::{ConfusionGraph, ConfusionMatrix};
use crate::error::{Error, Result};
use crate::inventory::PhonemeInventory;
use crate::map::{Coverage, Viseme, VisemeMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassMode {
    /// Vowels and consonants may share a class.
    Mixed,
    /// Every class is all-vowel or all-consonant.
    Split,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Tight,
    Loose,
}

/// How a singleton's confusion with a candidate class is totalled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MergeAggregation {
    /// Sum of symmetrized counts over all class members.
    #[default]
    Sum,
    /// Largest single symmetrized count to any member.
    MaxEdge,
}

macro_rules! token_enum {
    ($ty:ident { $($var:ident => $tok:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$var => $tok),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
                match s {
                    $($tok => Ok($ty::$var),)+
                    other => Err(format!("unknown {} `{other}`", stringify!($ty))),
                }
            }
        }
    };
}

token_enum!(ClassMode { Mixed => "mixed", Split => "split" });
token_enum!(Stage { Tight => "tight", Loose => "loose" });
token_enum!(MergeAggregation { Sum => "sum", MaxEdge => "max-edge" });

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivationConfig {
    pub mode: ClassMode,
    pub stage: Stage,
    pub aggregation: MergeAggregation,
}

impl DerivationConfig {
    pub fn new(stage: Stage, mode: ClassMode) -> Self {
        DerivationConfig {
            mode,
            stage,
            aggregation: MergeAggregation::Sum,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    TruePositive,
    Clique,
}

/// One class emitted by the tight pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightStep {
    pub kind: StepKind,
    /// Unassigned phonemes just before this step, sorted.
    pub pool: Vec<String>,
    pub class: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct TightDerivation {
    pub map: VisemeMap,
    pub steps: Vec<TightStep>,
}

/// A singleton folded into a multi-phoneme class by the loose pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Merge {
    pub phoneme: String,
    /// Sorted members of the receiving class as it stood after the tight pass.
    pub into: Vec<String>,
    pub mass: u64,
}

#[derive(Clone, Debug)]
pub struct LooseDerivation {
    pub map: VisemeMap,
    pub merges: Vec<Merge>,
}

/// The confusion graph used for clique search under `mode`.
fn mode_graph(m: &ConfusionMatrix, inv: &PhonemeInventory, mode: ClassMode) -> Result<ConfusionGraph> {
    let g = ConfusionGraph::from_matrix(m);
    match mode {
        ClassMode::Mixed => Ok(g),
        ClassMode::Split => {
            m.check_inventory(inv)?;
            Ok(g.filter_edges(|a, b| inv.classify(a).ok() == inv.classify(b).ok()))
        }
    }
}

fn build_map(classes: Vec<Vec<String>>, stage: Stage, mode: ClassMode) -> Result<VisemeMap> {
    let classes = classes
        .into_iter()
        .enumerate()
        .map(|(i, members)| Viseme::new(format!("V{:02}", i + 1), members))
        .collect();
    VisemeMap::new(
        "derived",
        format!("derived(matrix, {stage}, {mode})"),
        Coverage::Full,
        classes,
        Vec::<String>::new(),
    )
}

pub fn derive_tight_traced(
    m: &ConfusionMatrix,
    inv: &PhonemeInventory,
    mode: ClassMode,
) -> Result<TightDerivation> {
    let g = mode_graph(m, inv, mode)?;
    let mut unassigned = g.all_vertices();
    let mut steps = Vec::new();

    for symbol in m.true_positive_only() {
        let v = g.index_of(&symbol).expect("matrix label is a vertex");
        steps.push(TightStep {
            kind: StepKind::TruePositive,
            pool: g.symbols_of(&unassigned),
            class: vec![symbol],
        });
        unassigned.remove(v);
    }

    while !unassigned.is_empty() {
        let clique = max_clique(&g, &unassigned);
        steps.push(TightStep {
            kind: StepKind::Clique,
            pool: g.symbols_of(&unassigned),
            class: g.symbols_of(&clique),
        });
        unassigned.remove_all(&clique);
    }

    let map = build_map(
        steps.iter().map(|s| s.class.clone()).collect(),
        Stage::Tight,
        mode,
    )?;
    Ok(TightDerivation { map, steps })
}

/// Tightly confused map: every multi-phoneme class is a clique of the
/// (mode-restricted) confusion graph, chosen largest first.
pub fn derive_tight(m: &ConfusionMatrix, inv: &PhonemeInventory, mode: ClassMode) -> Result<VisemeMap> {
    derive_tight_traced(m, inv, mode).map(|d| d.map)
}

pub fn derive_loose_traced(
    tight: &VisemeMap,
    m: &ConfusionMatrix,
    inv: &PhonemeInventory,
    mode: ClassMode,
    aggregation: MergeAggregation,
) -> Result<LooseDerivation> {
    let map_labels: BTreeSet<&str> = tight.covered().collect();
    let matrix_labels: BTreeSet<&str> = m.labels().iter().map(String::as_str).collect();
    if map_labels != matrix_labels {
        let only_map: Vec<_> = map_labels.difference(&matrix_labels).collect();
        let only_matrix: Vec<_> = matrix_labels.difference(&map_labels).collect();
        return Err(Error::LabelMismatch(format!(
            "only in map: {only_map:?}; only in matrix: {only_matrix:?}"
        )));
    }
    let g = mode_graph(m, inv, mode)?;

    let mut classes: Vec<Vec<usize>> = tight
        .visemes()
        .map(|c| {
            let mut v: Vec<usize> = c
                .members
                .iter()
                .map(|s| g.index_of(s).expect("checked above"))
                .collect();
            v.sort_unstable();
            v
        })
        .collect();
    let targets: Vec<usize> = (0..classes.len()).filter(|&i| classes[i].len() > 1).collect();
    let mut singletons: Vec<usize> = (0..classes.len()).filter(|&i| classes[i].len() == 1).collect();
    singletons.sort_by_key(|&i| classes[i][0]);

    // Masses are read from the tight classes; merges are applied afterwards.
    let mut merges = Vec::new();
    let mut absorbed = VertexSet::empty(classes.len());
    let mut additions: Vec<Vec<usize>> = vec![Vec::new(); classes.len()];
    for &si in &singletons {
        let x = classes[si][0];
        let mut best: Option<(u64, usize)> = None;
        for &ti in &targets {
            let weights = classes[ti].iter().map(|&c| g.weight(x, c));
            let mass = match aggregation {
                MergeAggregation::Sum => weights.sum(),
                MergeAggregation::MaxEdge => weights.max().unwrap_or(0),
            };
            if mass == 0 {
                continue;
            }
            // Ties go to the class with the smallest symbol; targets are scanned
            // in tight order, so compare first members explicitly.
            let better = match best {
                None => true,
                Some((bm, bi)) => mass > bm || (mass == bm && classes[ti][0] < classes[bi][0]),
            };
            if better {
                best = Some((mass, ti));
            }
        }
        if let Some((mass, ti)) = best {
            merges.push(Merge {
                phoneme: g.vertices()[x].clone(),
                into: classes[ti].iter().map(|&c| g.vertices()[c].clone()).collect(),
                mass,
            });
            additions[ti].push(x);
            absorbed.insert(si);
        }
    }

    for (ti, extra) in additions.into_iter().enumerate() {
        classes[ti].extend(extra);
        classes[ti].sort_unstable();
    }
    let out: Vec<Vec<String>> = classes
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !absorbed.contains(*i))
        .map(|(_, c)| c.into_iter().map(|v| g.vertices()[v].clone()).collect())
        .collect();
    let map = build_map(out, Stage::Loose, mode)?;
    Ok(LooseDerivation { map, merges })
}

/// Loosely confused map: singletons of `tight` merged into the multi-phoneme
/// class with the greatest summed confusion.
pub fn derive_loose(
    tight: &VisemeMap,
    m: &ConfusionMatrix,
    inv: &PhonemeInventory,
    mode: ClassMode,
) -> Result<VisemeMap> {
    derive_loose_traced(tight, m, inv, mode, MergeAggregation::Sum).map(|d| d.map)
}

/// Runs the configured stage; loose runs the tight pass first.
pub fn derive(m: &ConfusionMatrix, inv: &PhonemeInventory, config: &DerivationConfig) -> Result<VisemeMap> {
    let tight = derive_tight(m, inv, config.mode)?;
    match config.stage {
        Stage::Tight => Ok(tight),
        Stage::Loose => derive_loose_traced(&tight, m, inv, config.mode, config.aggregation).map(|d| d.map),
    }
}
