//! Exact maximum clique search.
//!
//! Branch and bound over candidate sets with a pivot rule: only vertices
//! outside the pivot's neighbourhood are branched on, and a branch is cut
//! once `|clique| + |candidates|` cannot beat the incumbent. Ties between
//! maximum cliques go to the lexicographically smallest sorted member list,
//! found by fixing members one at a time, smallest first.

use crate::bitset::VertexSet;
use crate::confusion::ConfusionGraph;

/// Size of a maximum clique inside `candidates`.
pub fn clique_number(g: &ConfusionGraph, candidates: &VertexSet) -> usize {
    let mut best = 0;
    expand(g, 0, candidates.clone(), &mut best);
    best
}

fn expand(g: &ConfusionGraph, size: usize, mut pool: VertexSet, best: &mut usize) {
    if pool.is_empty() {
        *best = (*best).max(size);
        return;
    }
    if size + pool.len() <= *best {
        return;
    }
    let pivot = pool
        .iter()
        .max_by_key(|&u| pool.intersection(g.neighbors(u)).len())
        .expect("pool is non-empty");
    let branch = pool.difference(g.neighbors(pivot));
    for v in branch.iter() {
        if size + pool.len() <= *best {
            return;
        }
        expand(g, size + 1, pool.intersection(g.neighbors(v)), best);
        pool.remove(v);
    }
}

/// A maximum clique of the subgraph induced on `candidates`; among equal-size
/// cliques the one whose sorted members are lexicographically smallest.
/// Vertex indices follow symbol order, so this is also symbol order.
pub fn max_clique(g: &ConfusionGraph, candidates: &VertexSet) -> VertexSet {
    let mut clique = VertexSet::empty(g.len());
    let mut need = clique_number(g, candidates);
    let mut pool = candidates.clone();
    while need > 0 {
        let v = pool
            .iter()
            .find(|&v| 1 + clique_number(g, &pool.intersection(g.neighbors(v))) == need)
            .expect("a vertex of some maximum clique remains in the pool");
        clique.insert(v);
        pool = pool.intersection(g.neighbors(v));
        for u in pool.clone().iter().take_while(|&u| u < v) {
            pool.remove(u);
        }
        need -= 1;
    }
    clique
}

/// [`max_clique`] over symbols rather than vertex indices. Unknown symbols are ignored.
pub fn max_clique_symbols<'a>(
    g: &ConfusionGraph,
    candidates: impl IntoIterator<Item = &'a str>,
) -> Vec<String> {
    let set = VertexSet::from_indices(g.len(), candidates.into_iter().filter_map(|s| g.index_of(s)));
    g.symbols_of(&max_clique(g, &set))
}
