//! Fundamental cycles of a spanning forest and their role as the kernel of `d*`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact_rank, rank_of_vectors, SparseVec};
use crate::gauss::GaussInt;
use crate::graph::{connected_components, spanning_tree, DirectedGraph, SpanningTree};
use crate::linmap::{SpaceTag, StateVector};
use crate::operators::build_incidence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleKind {
    /// Closed by a non-tree edge through the tree path between its endpoints.
    Fundamental,
    /// `d_ij + d_ji` for a reciprocal pair of edges.
    Reciprocal,
}

/// Signed edge combination of a closed walk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub kind: CycleKind,
    pub defining_edge: usize,
    /// `(edge index, ±1)`, sorted by edge index.
    pub edges: Vec<(usize, i8)>,
}

impl Cycle {
    pub fn to_sparse(&self) -> SparseVec {
        self.edges.iter().map(|&(e, s)| (e, BigInt::from(s))).collect()
    }

    pub fn to_exact(&self, m: usize) -> Vec<GaussInt> {
        let mut v = vec![GaussInt::default(); m];
        for &(e, s) in &self.edges {
            v[e] = GaussInt::real(i64::from(s));
        }
        v
    }

    pub fn to_state_vector(&self, m: usize) -> StateVector {
        let mut coeffs = vec![Complex64::default(); m];
        for &(e, s) in &self.edges {
            coeffs[e] = Complex64::new(f64::from(s), 0.0);
        }
        StateVector::new(SpaceTag::Edge(m), coeffs).expect("length matches edge count")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    pub cycles: Vec<Cycle>,
    pub tree: SpanningTree,
}

impl CycleBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn sparse_vectors(&self) -> Vec<SparseVec> {
        self.cycles.iter().map(Cycle::to_sparse).collect()
    }
}

fn check_tree(g: &DirectedGraph, tree: &SpanningTree) -> Result<()> {
    let mismatch = |why: &str| Err(Error::TreeMismatch(why.to_string()));
    if tree.shape() != (g.n(), g.m()) {
        return mismatch("vertex or edge count differs");
    }
    let reps: BTreeSet<usize> = g.undirected_edges().iter().map(|u| u.rep).collect();
    if !tree.tree_edges().is_disjoint(tree.non_tree_edges())
        || tree
            .tree_edges()
            .union(tree.non_tree_edges())
            .copied()
            .collect::<BTreeSet<_>>()
            != reps
    {
        return mismatch("tree and non-tree edges do not partition the undirected edges");
    }
    let components = connected_components(g).len();
    if tree.tree_edges().len() + components != g.n() {
        return mismatch("tree edge count is not n minus the number of components");
    }
    for v in 0..g.n() {
        if let (Some(p), Some(e)) = (tree.parent_vertex(v), tree.parent_edge(v)) {
            let (a, b) = g.edge(e);
            if !((a, b) == (p, v) || (a, b) == (v, p)) || !tree.tree_edges().contains(&e) {
                return mismatch("parent edge does not join a vertex to its parent");
            }
        }
    }
    Ok(())
}

/// Sign of edge `e` when walked from `from` to its other endpoint.
fn step(g: &DirectedGraph, e: usize, from: usize) -> (usize, i8) {
    let (a, _) = g.edge(e);
    (e, if a == from { 1 } else { -1 })
}

/// One cycle per non-tree undirected edge, walked along that edge from tail
/// to head and back through the tree; then one 2-cycle per reciprocal pair.
pub fn fundamental_cycle_basis(g: &DirectedGraph, tree: &SpanningTree) -> Result<CycleBasis> {
    check_tree(g, tree)?;
    let mut cycles = Vec::new();
    for &e in tree.non_tree_edges() {
        let (tail, head) = g.edge(e);
        let mut edges = vec![(e, 1i8)];
        // Walk up from both ends to the lowest common ancestor; the head side
        // is walked toward the root, the tail side away from it.
        let (mut u, mut v) = (head, tail);
        let mut down = Vec::new();
        while u != v {
            if tree.depth(u) >= tree.depth(v) {
                let pe = tree
                    .parent_edge(u)
                    .ok_or_else(|| Error::TreeMismatch("endpoints in different trees".into()))?;
                edges.push(step(g, pe, u));
                u = tree.parent_vertex(u).expect("parent edge implies parent vertex");
            } else {
                let pe = tree
                    .parent_edge(v)
                    .ok_or_else(|| Error::TreeMismatch("endpoints in different trees".into()))?;
                let parent = tree.parent_vertex(v).expect("parent edge implies parent vertex");
                down.push(step(g, pe, parent));
                v = parent;
            }
        }
        edges.extend(down);
        edges.sort_unstable_by_key(|&(e, _)| e);
        cycles.push(Cycle {
            kind: CycleKind::Fundamental,
            defining_edge: e,
            edges,
        });
    }
    for u in g.undirected_edges() {
        if let Some(partner) = u.partner {
            cycles.push(Cycle {
                kind: CycleKind::Reciprocal,
                defining_edge: partner,
                edges: vec![(u.rep, 1), (partner, 1)],
            });
        }
    }
    Ok(CycleBasis {
        cycles,
        tree: tree.clone(),
    })
}

/// Cycle basis from the BFS forest rooted at vertex 0.
pub fn cycle_basis(g: &DirectedGraph) -> CycleBasis {
    let tree = spanning_tree(g, 0).expect("vertex 0 exists");
    fundamental_cycle_basis(g, &tree).expect("tree built from the same graph")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleSpaceReport {
    pub cycle_count: usize,
    /// `m − n + #components`.
    pub circuit_rank: usize,
    /// `m − rank d*`, exact.
    pub dim_ker_d_star: usize,
    pub all_annihilated: bool,
    /// Exact rank of the stacked cycle vectors.
    pub cycle_matrix_rank: usize,
    pub spans_kernel: bool,
    pub is_forest: bool,
    /// `(n − rank d) + (m − rank d*)`, exact.
    pub dim_ker_hs: usize,
    pub components: usize,
    /// Exact rank of the tree-edge differences `x_i − x_k` in `H₀`.
    pub tree_difference_rank: usize,
    pub tree_differences_independent: bool,
    pub cycles: Vec<Cycle>,
    pub pass: bool,
}

pub fn cycle_space_report(g: &DirectedGraph) -> CycleSpaceReport {
    let basis = cycle_basis(g);
    let inc = build_incidence(g);
    let (n, m) = (g.n(), g.m());
    let components = connected_components(g).len();

    let all_annihilated = basis.cycles.iter().all(|c| {
        inc.d_star
            .apply_exact(&c.to_exact(m))
            .expect("cycle lives in the edge space")
            .iter()
            .all(|x| *x == GaussInt::default())
    });
    let cycle_matrix_rank = rank_of_vectors(&basis.sparse_vectors(), m);
    let rank_d = exact_rank(&inc.d);
    let rank_d_star = exact_rank(&inc.d_star);
    let dim_ker_d_star = m - rank_d_star;
    let circuit_rank = m + components - n;
    let spans_kernel = all_annihilated && cycle_matrix_rank == basis.len() && basis.len() == dim_ker_d_star;
    let is_forest = g.m() + components == n;
    let dim_ker_hs = (n - rank_d) + dim_ker_d_star;

    let differences: Vec<SparseVec> = basis
        .tree
        .tree_edges()
        .iter()
        .map(|&e| {
            let (i, k) = g.edge(e);
            let (lo, hi) = (i.min(k), i.max(k));
            let sign = if lo == i { 1 } else { -1 };
            vec![(lo, BigInt::from(sign)), (hi, BigInt::from(-sign))]
        })
        .collect();
    let tree_difference_rank = rank_of_vectors(&differences, n);
    let tree_differences_independent = tree_difference_rank == n - components;

    let forest_ok = !is_forest || (basis.is_empty() && dim_ker_hs == components);
    let pass = spans_kernel && basis.len() == circuit_rank && tree_differences_independent && forest_ok;

    CycleSpaceReport {
        cycle_count: basis.len(),
        circuit_rank,
        dim_ker_d_star,
        all_annihilated,
        cycle_matrix_rank,
        spans_kernel,
        is_forest,
        dim_ker_hs,
        components,
        tree_difference_rank,
        tree_differences_independent,
        cycles: basis.cycles,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::symmetrize;

    fn c3() -> DirectedGraph {
        DirectedGraph::oriented(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn triangle_cycle() {
        let basis = cycle_basis(&c3());
        assert_eq!(basis.tree.tree_edges(), &BTreeSet::from([0, 2]));
        assert_eq!(basis.len(), 1);
        // Non-tree edge (1,2) walked 1 → 2, back 2 → 0 → 1.
        assert_eq!(basis.cycles[0].edges, vec![(0, 1), (1, 1), (2, 1)]);
        let r = cycle_space_report(&c3());
        assert!(r.pass);
        assert_eq!((r.cycle_count, r.cycle_matrix_rank, r.dim_ker_d_star), (1, 1, 1));
    }

    #[test]
    fn against_the_grain_edges_get_minus_signs() {
        // 0→1, 1→2, 0→2: the cycle 0→1→2→0 walks edge 2 backwards.
        let g = DirectedGraph::oriented(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let basis = cycle_basis(&g);
        let c = &basis.cycles[0];
        assert_eq!(c.edges.iter().map(|&(_, s)| s).sum::<i8>(), 1);
        assert!(cycle_space_report(&g).all_annihilated);
    }

    #[test]
    fn reciprocal_pair_two_cycle() {
        let pair = DirectedGraph::oriented(2, vec![(0, 1), (1, 0)]).unwrap();
        let basis = cycle_basis(&pair);
        assert_eq!(basis.cycles.len(), 1);
        assert_eq!(basis.cycles[0].kind, CycleKind::Reciprocal);
        assert_eq!(basis.cycles[0].edges, vec![(0, 1), (1, 1)]);
        assert!(cycle_space_report(&pair).pass);
    }

    #[test]
    fn trees_have_no_cycles() {
        let star = DirectedGraph::oriented(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let r = cycle_space_report(&star);
        assert!(r.pass && r.is_forest);
        assert_eq!(r.cycle_count, 0);
        assert_eq!(r.dim_ker_hs, 1);
    }

    #[test]
    fn symmetrized_triangle_has_four_cycles() {
        let r = cycle_space_report(&symmetrize(&c3()));
        assert!(r.pass);
        assert_eq!(r.cycle_count, 4);
        assert_eq!(r.cycle_matrix_rank, 4);
        assert_eq!(r.dim_ker_d_star, 4);
        let kinds: Vec<_> = r.cycles.iter().map(|c| c.kind).collect();
        assert_eq!(kinds.iter().filter(|&&k| k == CycleKind::Reciprocal).count(), 3);
    }

    #[test]
    fn foreign_tree_is_rejected() {
        let path = DirectedGraph::oriented(3, vec![(0, 1), (1, 2)]).unwrap();
        let tree = spanning_tree(&path, 0).unwrap();
        assert!(matches!(
            fundamental_cycle_basis(&c3(), &tree),
            Err(Error::TreeMismatch(_))
        ));
        let other = DirectedGraph::oriented(3, vec![(0, 2), (2, 1), (1, 0)]).unwrap();
        let t2 = spanning_tree(&other, 0).unwrap();
        assert!(matches!(
            fundamental_cycle_basis(&c3(), &t2),
            Err(Error::TreeMismatch(_))
        ));
    }

    #[test]
    fn disconnected_graph() {
        let g = DirectedGraph::oriented(7, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (4, 6)]).unwrap();
        let r = cycle_space_report(&g);
        assert!(r.pass);
        assert_eq!(r.cycle_count, 2);
        assert_eq!(r.components, 2);
    }
}
