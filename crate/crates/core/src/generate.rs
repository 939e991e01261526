//! Seeded random graph families for self-tests and benchmarks.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{DirectedGraph, Mode};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn push_pair<R: Rng>(edges: &mut Vec<(usize, usize)>, i: usize, j: usize, mode: Mode, rng: &mut R) {
    match mode {
        Mode::Symmetric => {
            edges.push((i, j));
            edges.push((j, i));
        }
        Mode::Oriented if rng.random_bool(0.5) => edges.push((i, j)),
        Mode::Oriented => edges.push((j, i)),
    }
}

/// Each unordered pair is joined with probability `p`: by one randomly
/// directed edge in oriented mode, by both directions in symmetric mode.
pub fn erdos_renyi<R: Rng>(n: usize, p: f64, mode: Mode, rng: &mut R) -> DirectedGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                push_pair(&mut edges, i, j, mode, rng);
            }
        }
    }
    DirectedGraph::new(n, edges, mode).expect("generated edges are distinct")
}

/// Uniform random recursive tree with random edge directions, relabelled by
/// a random permutation and with shuffled edge order.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> DirectedGraph {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let parent = rng.random_range(0..v);
        push_pair(&mut edges, perm[parent], perm[v], Mode::Oriented, rng);
    }
    edges.shuffle(rng);
    DirectedGraph::oriented(n, edges).expect("tree edges are distinct")
}

/// A random tree plus Erdős–Rényi extra edges; always connected.
pub fn random_connected<R: Rng>(n: usize, p: f64, mode: Mode, rng: &mut R) -> DirectedGraph {
    let tree = random_tree(n, rng);
    let mut used: HashSet<(usize, usize)> = tree.edges().iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
    let mut edges = Vec::new();
    for &(i, j) in tree.edges() {
        push_pair(&mut edges, i, j, mode, rng);
    }
    for i in 0..n {
        for j in i + 1..n {
            if !used.contains(&(i, j)) && rng.random_bool(p) {
                used.insert((i, j));
                push_pair(&mut edges, i, j, mode, rng);
            }
        }
    }
    DirectedGraph::new(n, edges, mode).expect("generated edges are distinct")
}

/// Each edge index flipped independently with probability one half.
pub fn random_flips<R: Rng>(m: usize, rng: &mut R) -> BTreeSet<usize> {
    (0..m).filter(|_| rng.random_bool(0.5)).collect()
}

pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}
