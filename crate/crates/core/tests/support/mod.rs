//! Oracles and generators shared by the integration tests.
//!
//! Everything here works from raw matrix counts and plain vectors, never from
//! the library's graph or clique code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use visemap_core::{ConfusionMatrix, PhonemeClass, PhonemeInventory, Transcript, TranscriptSet};

pub const DENSITIES: [f64; 3] = [0.1, 0.3, 0.6];

/// British letter names as AVL2 phoneme strings.
pub const LETTERS: [(&str, &str); 26] = [
    ("a", "ey"),
    ("b", "b iy"),
    ("c", "s iy"),
    ("d", "d iy"),
    ("e", "iy"),
    ("f", "eh f"),
    ("g", "jh iy"),
    ("h", "ey ch"),
    ("i", "ay"),
    ("j", "jh ey"),
    ("k", "k ey"),
    ("l", "eh l"),
    ("m", "eh m"),
    ("n", "eh n"),
    ("o", "ow"),
    ("p", "p iy"),
    ("q", "k y uw"),
    ("r", "aa"),
    ("s", "eh s"),
    ("t", "t iy"),
    ("u", "y uw"),
    ("v", "v iy"),
    ("w", "d ah b ax l y uw"),
    ("x", "eh k s"),
    ("y", "w ay"),
    ("z", "z eh d"),
];

/// The 25 phonemes spoken in the letter names.
pub fn alphabet_phonemes() -> BTreeSet<String> {
    LETTERS
        .iter()
        .flat_map(|(_, p)| p.split_whitespace().map(str::to_string))
        .collect()
}

/// `folds` recitations of the alphabet, one fold per recitation.
pub fn alphabet_references(folds: u32) -> TranscriptSet {
    let mut items = Vec::new();
    for fold in 1..=folds {
        for (letter, phones) in LETTERS {
            items.push(Transcript::new(
                format!("r{fold}-{letter}"),
                fold,
                phones.split_whitespace(),
            ));
        }
    }
    TranscriptSet::new(items).unwrap()
}

/// Random matrix over `n` labels drawn from `inv`; every pair is confused
/// with probability `density`, in one or both directions. Label order is shuffled.
pub fn random_matrix<R: Rng>(rng: &mut R, inv: &PhonemeInventory, n: usize, density: f64) -> ConfusionMatrix {
    let mut symbols: Vec<String> = inv.symbols().map(str::to_string).collect();
    symbols.shuffle(rng);
    symbols.truncate(n);
    let mut counts = vec![vec![0u64; n]; n];
    for (i, row) in counts.iter_mut().enumerate() {
        row[i] = if rng.gen_bool(0.85) {
            rng.gen_range(1..10)
        } else {
            0
        };
    }
    for (i, j) in (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))) {
        if rng.gen_bool(density) {
            match rng.gen_range(0..3) {
                0 => counts[i][j] = rng.gen_range(1..6),
                1 => counts[j][i] = rng.gen_range(1..6),
                _ => {
                    counts[i][j] = rng.gen_range(1..6);
                    counts[j][i] = rng.gen_range(1..6);
                }
            }
        }
    }
    ConfusionMatrix::new(symbols, counts).unwrap()
}

/// Symmetrized confusion between two labels, read straight from the counts.
pub fn sym_count(m: &ConfusionMatrix, a: &str, b: &str) -> u64 {
    let (i, j) = (m.index_of(a).unwrap(), m.index_of(b).unwrap());
    if i == j {
        0
    } else {
        m.count(i, j) + m.count(j, i)
    }
}

/// Edge test for the oracle; in split mode cross-class pairs never connect.
pub fn oracle_edge(m: &ConfusionMatrix, inv: Option<&PhonemeInventory>, a: &str, b: &str) -> bool {
    if let Some(inv) = inv {
        if inv.classify(a).unwrap() != inv.classify(b).unwrap() {
            return false;
        }
    }
    sym_count(m, a, b) > 0
}

/// Exhaustive maximum clique over `pool` (sorted symbols): largest size, then
/// lexicographically smallest sorted member list.
pub fn brute_force_max_clique(
    m: &ConfusionMatrix,
    split: Option<&PhonemeInventory>,
    pool: &[String],
) -> Vec<String> {
    assert!(pool.len() <= 16);
    let mut pool = pool.to_vec();
    pool.sort();
    let mut best: Vec<String> = Vec::new();
    for mask in 1u32..(1 << pool.len()) {
        let members: Vec<&String> = (0..pool.len())
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| &pool[i])
            .collect();
        let is_clique = members
            .iter()
            .enumerate()
            .all(|(x, a)| members[x + 1..].iter().all(|b| oracle_edge(m, split, a, b)));
        if !is_clique {
            continue;
        }
        let cand: Vec<String> = members.into_iter().cloned().collect();
        if cand.len() > best.len() || (cand.len() == best.len() && cand < best) {
            best = cand;
        }
    }
    best
}

/// Labels whose only recognitions are as themselves.
pub fn oracle_true_positive(m: &ConfusionMatrix) -> BTreeSet<String> {
    let n = m.len();
    (0..n)
        .filter(|&i| {
            m.count(i, i) > 0 && (0..n).all(|j| j == i || (m.count(i, j) == 0 && m.count(j, i) == 0))
        })
        .map(|i| m.labels()[i].clone())
        .collect()
}

/// A partition as nested sets, and the receiving class chosen for each tight singleton.
pub type LooseOracle = (
    BTreeSet<BTreeSet<String>>,
    BTreeMap<String, Option<BTreeSet<String>>>,
);

/// Expected loose partition from a tight partition, by direct per-class summation.
pub fn oracle_loose(
    tight: &[Vec<String>],
    m: &ConfusionMatrix,
    split: Option<&PhonemeInventory>,
) -> LooseOracle {
    let multi: Vec<BTreeSet<String>> = tight
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| c.iter().cloned().collect())
        .collect();
    let mut chosen: BTreeMap<String, Option<BTreeSet<String>>> = BTreeMap::new();
    for c in tight.iter().filter(|c| c.len() == 1) {
        let x = &c[0];
        let mut best: Option<(u64, &BTreeSet<String>)> = None;
        for class in &multi {
            let mass: u64 = class
                .iter()
                .filter(|y| split.is_none_or(|inv| inv.classify(x).unwrap() == inv.classify(y).unwrap()))
                .map(|y| sym_count(m, x, y))
                .sum();
            if mass == 0 {
                continue;
            }
            let take = match best {
                None => true,
                Some((bm, bc)) => mass > bm || (mass == bm && class.first() < bc.first()),
            };
            if take {
                best = Some((mass, class));
            }
        }
        chosen.insert(x.clone(), best.map(|(_, c)| c.clone()));
    }
    let mut result: Vec<BTreeSet<String>> = multi.clone();
    let mut out = BTreeSet::new();
    for (x, target) in &chosen {
        match target {
            Some(t) => {
                let slot = result
                    .iter_mut()
                    .zip(&multi)
                    .find(|(_, orig)| *orig == t)
                    .unwrap()
                    .0;
                slot.insert(x.clone());
            }
            None => {
                out.insert(BTreeSet::from([x.clone()]));
            }
        }
    }
    out.extend(result);
    (out, chosen)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum EditOp {
    Match,
    Sub,
    Del,
    Ins,
}

/// Enumerates every monotone alignment; returns (cost, ops) of the minimal-cost
/// alignment whose op string read from the end is lexicographically smallest
/// under Match < Sub < Del < Ins.
pub fn brute_force_alignment(r: &[String], h: &[String]) -> (usize, Vec<EditOp>) {
    fn walk(
        r: &[String],
        h: &[String],
        i: usize,
        j: usize,
        ops: &mut Vec<EditOp>,
        cost: usize,
        best: &mut Option<(usize, Vec<EditOp>)>,
    ) {
        if let Some((bc, _)) = best {
            if cost > *bc {
                return;
            }
        }
        if i == r.len() && j == h.len() {
            let rev: Vec<EditOp> = ops.iter().rev().copied().collect();
            let better = match best {
                None => true,
                Some((bc, bops)) => cost < *bc || (cost == *bc && rev < *bops),
            };
            if better {
                *best = Some((cost, rev));
            }
            return;
        }
        if i < r.len() && j < h.len() {
            let (op, c) = if r[i] == h[j] {
                (EditOp::Match, 0)
            } else {
                (EditOp::Sub, 1)
            };
            ops.push(op);
            walk(r, h, i + 1, j + 1, ops, cost + c, best);
            ops.pop();
        }
        if i < r.len() {
            ops.push(EditOp::Del);
            walk(r, h, i + 1, j, ops, cost + 1, best);
            ops.pop();
        }
        if j < h.len() {
            ops.push(EditOp::Ins);
            walk(r, h, i, j + 1, ops, cost + 1, best);
            ops.pop();
        }
    }
    let mut best = None;
    walk(r, h, 0, 0, &mut Vec::new(), 0, &mut best);
    let (cost, rev) = best.unwrap();
    (cost, rev.into_iter().rev().collect())
}

/// A small inventory with both classes, for split-mode tests.
pub fn mixed_inventory() -> &'static PhonemeInventory {
    let inv = PhonemeInventory::catalog();
    assert!(inv.iter().any(|p| p.class() == PhonemeClass::Vowel));
    assert!(inv.iter().any(|p| p.class() == PhonemeClass::Consonant));
    inv
}
