//! The graph operators: incidence maps, degree and adjacency operators,
//! both Laplacians, the Dirac operator and the supercharges.
//!
//! Conventions: `d x_i` is the sum of edges ending at `i` minus the sum of
//! edges starting at `i`, so the row of `d` for edge `(t, h)` carries `-1`
//! at column `t` and `+1` at column `h`, and `d* d_{th} = x_h - x_t`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauss::GaussInt;
use crate::graph::DirectedGraph;
use crate::linmap::{LinearMap, SpaceTag, StateVector};

fn one() -> GaussInt {
    GaussInt::real(1)
}

pub fn vertex_space(g: &DirectedGraph) -> SpaceTag {
    SpaceTag::Vertex(g.n())
}

pub fn edge_space(g: &DirectedGraph) -> SpaceTag {
    SpaceTag::Edge(g.m())
}

pub fn super_space(g: &DirectedGraph) -> SpaceTag {
    SpaceTag::Super {
        vertices: g.n(),
        edges: g.m(),
    }
}

/// Incidence maps `H₀ → H₁` and the adjoint of their difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incidence {
    /// Head incidence: `d1 x_i` sums the edges ending at `i`.
    pub d1: LinearMap,
    /// Tail incidence: `d2 x_i` sums the edges starting at `i`.
    pub d2: LinearMap,
    pub d: LinearMap,
    pub d_star: LinearMap,
}

pub fn build_incidence(g: &DirectedGraph) -> Incidence {
    let (h0, h1) = (vertex_space(g), edge_space(g));
    let d1 = LinearMap::from_triplets(h0, h1, g.edges().iter().enumerate().map(|(e, &(_, h))| (e, h, one())));
    let d2 = LinearMap::from_triplets(h0, h1, g.edges().iter().enumerate().map(|(e, &(t, _))| (e, t, one())));
    let d = d1.sub(&d2).expect("d1 and d2 share spaces");
    let d_star = d.adjoint();
    Incidence { d1, d2, d, d_star }
}

/// Degree, adjacency and Laplacian operators on the vertex space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOperators {
    pub v_in: LinearMap,
    pub v_out: LinearMap,
    pub v: LinearMap,
    pub a_in: LinearMap,
    pub a_out: LinearMap,
    pub a: LinearMap,
    /// Graph Laplacian `d*d = V − A`.
    pub laplacian: LinearMap,
}

/// Builds the vertex operators as products of the elementary incidence maps.
pub fn build_vertex_operators(g: &DirectedGraph) -> VertexOperators {
    let Incidence { d1, d2, d, d_star } = build_incidence(g);
    let (d1s, d2s) = (d1.adjoint(), d2.adjoint());
    let v_in = d1s.compose(&d1).expect("H0 -> H1 -> H0");
    let v_out = d2s.compose(&d2).expect("H0 -> H1 -> H0");
    let a_in = d2s.compose(&d1).expect("H0 -> H1 -> H0");
    let a_out = d1s.compose(&d2).expect("H0 -> H1 -> H0");
    let v = v_in.add(&v_out).expect("same spaces");
    let a = a_in.add(&a_out).expect("same spaces");
    let laplacian = d_star.compose(&d).expect("H0 -> H1 -> H0");
    VertexOperators {
        v_in,
        v_out,
        v,
        a_in,
        a_out,
        a,
        laplacian,
    }
}

/// The same operators read off the edge list: degree counts, adjacency with
/// multiplicity, and `L = V − A`.
pub fn vertex_operators_from_edges(g: &DirectedGraph) -> VertexOperators {
    let h0 = vertex_space(g);
    let diag = |deg: Vec<usize>| LinearMap::diagonal(h0, deg.into_iter().map(|k| GaussInt::real(k as i64)));
    let v_in = diag(g.in_degrees());
    let v_out = diag(g.out_degrees());
    let v = diag(g.in_degrees().iter().zip(g.out_degrees()).map(|(a, b)| a + b).collect());
    // A^in x_i = Σ_{k→i} x_k puts a 1 at (k, i) for each edge (k, i).
    let a_in = LinearMap::from_triplets(h0, h0, g.edges().iter().map(|&(k, i)| (k, i, one())));
    let a_out = LinearMap::from_triplets(h0, h0, g.edges().iter().map(|&(i, k)| (k, i, one())));
    let a = LinearMap::from_triplets(
        h0,
        h0,
        (0..g.n()).flat_map(|i| {
            (0..g.n())
                .filter(move |&k| k != i)
                .map(move |k| (k, i, GaussInt::real(g.multiplicity(k, i) as i64)))
        }),
    );
    let laplacian = v.sub(&a).expect("same spaces");
    VertexOperators {
        v_in,
        v_out,
        v,
        a_in,
        a_out,
        a,
        laplacian,
    }
}

/// Edge Laplacian `dd*` on `H₁`.
pub fn build_edge_laplacian(g: &DirectedGraph) -> LinearMap {
    let inc = build_incidence(g);
    inc.d.compose(&inc.d_star).expect("H1 -> H0 -> H1")
}

/// Operators on the direct sum `H = H₀ ⊕ H₁`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperOperators {
    pub dirac: LinearMap,
    pub q_plus: LinearMap,
    pub q_minus: LinearMap,
    pub q1: LinearMap,
    pub q2: LinearMap,
    /// Grading: `+1` on vertices, `-1` on edges.
    pub chi: LinearMap,
    pub p0: LinearMap,
    pub p1: LinearMap,
    /// `H_S = D²`.
    pub hamiltonian: LinearMap,
}

pub fn build_super_operators(g: &DirectedGraph) -> SuperOperators {
    let Incidence { d, d_star, .. } = build_incidence(g);
    let (h0, h1, h) = (vertex_space(g), edge_space(g), super_space(g));
    let z00 = LinearMap::zero(h0, h0);
    let z01 = LinearMap::zero(h1, h0);
    let z10 = LinearMap::zero(h0, h1);
    let z11 = LinearMap::zero(h1, h1);
    let i = GaussInt::i();
    let block = |a: &LinearMap, b: &LinearMap, c: &LinearMap, e: &LinearMap| {
        LinearMap::block(a, b, c, e).expect("blocks built on the graph's own spaces")
    };

    let dirac = block(&z00, &d_star, &d, &z11);
    let q_plus = block(&z00, &z01, &d, &z11);
    let q_minus = block(&z00, &d_star, &z10, &z11);
    let q2 = block(&z00, &d_star.scale(&i), &d.scale(&-&i), &z11);
    let id0 = LinearMap::identity(h0);
    let id1 = LinearMap::identity(h1);
    let chi = block(&id0, &z01, &z10, &id1.neg());
    let p0 = block(&id0, &z01, &z10, &z11);
    let p1 = block(&z00, &z01, &z10, &id1);
    let hamiltonian = dirac.compose(&dirac).expect("H -> H");
    debug_assert_eq!(hamiltonian.domain(), h);

    SuperOperators {
        q1: dirac.clone(),
        dirac,
        q_plus,
        q_minus,
        q2,
        chi,
        p0,
        p1,
        hamiltonian,
    }
}

/// The antisymmetric edge combination `b_ij = d_ij − d_ji`.
pub fn antisymmetric_edge(g: &DirectedGraph, i: usize, j: usize) -> Result<StateVector> {
    let fwd = g.edge_index(i, j).ok_or(Error::MissingEdge(i, j))?;
    let back = g.edge_index(j, i).ok_or(Error::MissingEdge(j, i))?;
    let mut coeffs = vec![0.0; g.m()];
    coeffs[fwd] = 1.0;
    coeffs[back] = -1.0;
    StateVector::from_real(edge_space(g), &coeffs)
}

/// `−Σ_{k∼i} ε_{ki} (f_k − f_i)` at every vertex, summed over undirected
/// neighbours with their multiplicity.
pub fn laplacian_stencil(g: &DirectedGraph, f: &StateVector) -> Result<StateVector> {
    if f.space() != vertex_space(g) {
        return Err(Error::SpaceMismatch {
            expected: vertex_space(g),
            found: f.space(),
        });
    }
    let x = f.coeffs();
    let mut out = vec![Complex64::default(); g.n()];
    for u in g.undirected_edges() {
        let (i, k) = g.edge(u.rep);
        let eps = if u.partner.is_some() { 2.0 } else { 1.0 };
        out[i] -= eps * (x[k] - x[i]);
        out[k] -= eps * (x[i] - x[k]);
    }
    StateVector::new(vertex_space(g), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::symmetrize;

    fn g(v: i64) -> GaussInt {
        GaussInt::real(v)
    }

    fn dense(m: &LinearMap) -> Vec<Vec<i64>> {
        (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| i64::try_from(m.get(r, c).re).unwrap()).collect())
            .collect()
    }

    fn k2() -> DirectedGraph {
        DirectedGraph::oriented(2, vec![(0, 1)]).unwrap()
    }

    fn c3() -> DirectedGraph {
        DirectedGraph::oriented(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn k2_incidence() {
        let inc = build_incidence(&k2());
        assert_eq!(dense(&inc.d), vec![vec![-1, 1]]);
        // d* d_01 = x_1 - x_0
        let col = inc.d_star.apply_exact(&[g(1)]).unwrap();
        assert_eq!(col, vec![g(-1), g(1)]);
    }

    #[test]
    fn path_differential() {
        let path = DirectedGraph::oriented(3, vec![(0, 1), (1, 2)]).unwrap();
        let inc = build_incidence(&path);
        let f = [g(5), g(-2), g(7)];
        assert_eq!(inc.d.apply_exact(&f).unwrap(), vec![g(-2 - 5), g(7 + 2)]);
        assert_eq!(inc.d_star, inc.d1.adjoint().sub(&inc.d2.adjoint()).unwrap());
    }

    #[test]
    fn k2_laplacian() {
        let ops = build_vertex_operators(&k2());
        assert_eq!(dense(&ops.laplacian), vec![vec![1, -1], vec![-1, 1]]);
    }

    #[test]
    fn reciprocal_pair_operators() {
        let pair = DirectedGraph::oriented(2, vec![(0, 1), (1, 0)]).unwrap();
        let ops = build_vertex_operators(&pair);
        assert_eq!(dense(&ops.a), vec![vec![0, 2], vec![2, 0]]);
        assert_eq!(dense(&ops.v), vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(dense(&ops.laplacian), vec![vec![2, -2], vec![-2, 2]]);
        assert_eq!(ops, vertex_operators_from_edges(&pair));
    }

    #[test]
    fn c3_vertex_operators() {
        let ops = build_vertex_operators(&c3());
        assert_eq!(dense(&ops.v), vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]);
        assert_eq!(dense(&ops.a), vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(
            dense(&ops.laplacian),
            vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]
        );
        assert_eq!(ops, vertex_operators_from_edges(&c3()));
        let direct = ops.v.sub(&ops.a).unwrap();
        assert_eq!(direct, ops.laplacian);
    }

    #[test]
    fn in_and_out_adjacency_are_mutual_adjoints() {
        let g = DirectedGraph::oriented(4, vec![(0, 1), (1, 2), (3, 1), (2, 0)]).unwrap();
        let ops = build_vertex_operators(&g);
        assert_eq!(ops.a_in.adjoint(), ops.a_out);
        assert!(ops.a.is_self_adjoint());
        assert_eq!(ops, vertex_operators_from_edges(&g));
    }

    #[test]
    fn stencil_matches_laplacian() {
        let pair = DirectedGraph::oriented(3, vec![(0, 1), (1, 0), (1, 2)]).unwrap();
        let f = StateVector::from_real(SpaceTag::Vertex(3), &[1.0, -2.0, 5.0]).unwrap();
        let direct = laplacian_stencil(&pair, &f).unwrap();
        // ε₀₁ = 2: (Lf)₀ = −2(f₁ − f₀) = 6, (Lf)₁ = −2(f₀ − f₁) − (f₂ − f₁) = −13.
        assert_eq!(direct.coeffs()[0].re, 6.0);
        assert_eq!(direct.coeffs()[1].re, -13.0);
        assert_eq!(direct, build_vertex_operators(&pair).laplacian.apply(&f).unwrap());
    }

    #[test]
    fn k2_edge_laplacian_doubles() {
        assert_eq!(dense(&build_edge_laplacian(&k2())), vec![vec![2]]);
    }

    #[test]
    fn k2_dirac_matrix() {
        let ops = build_super_operators(&k2());
        assert_eq!(dense(&ops.q1), vec![vec![0, 0, -1], vec![0, 0, 1], vec![-1, 1, 0]]);
        assert_eq!(
            dense(&ops.hamiltonian),
            vec![vec![1, -1, 0], vec![-1, 1, 0], vec![0, 0, 2]]
        );
    }

    #[test]
    fn projectors_and_grading() {
        let ops = build_super_operators(&c3());
        let id = LinearMap::identity(super_space(&c3()));
        assert_eq!(ops.chi.compose(&ops.chi).unwrap(), id);
        assert_eq!(ops.p0.add(&ops.p1).unwrap(), id);
        assert!(ops.p0.compose(&ops.p1).unwrap().is_zero());
        let f = StateVector::from_real(SpaceTag::Vertex(3), &[1.0, 2.0, 3.0]).unwrap();
        let gv = StateVector::from_real(SpaceTag::Edge(3), &[4.0, 5.0, 6.0]).unwrap();
        let v = StateVector::join(&f, &gv).unwrap();
        let (pf, pg) = ops.chi.apply(&v).unwrap().split().unwrap();
        assert_eq!(pf, f);
        assert_eq!(pg, gv.scale((-1.0).into()));
    }

    #[test]
    fn q2_is_i_chi_q1() {
        for graph in [k2(), c3(), symmetrize(&c3())] {
            let ops = build_super_operators(&graph);
            let i = GaussInt::i();
            assert_eq!(ops.q2, ops.chi.compose(&ops.q1).unwrap().scale(&i));
            // With the charge as constructed, i·Q1·χ is its negative.
            assert_eq!(ops.q2.neg(), ops.q1.compose(&ops.chi).unwrap().scale(&i));
        }
    }

    #[test]
    fn antisymmetric_edge_vector() {
        let s = symmetrize(&k2());
        let b = antisymmetric_edge(&s, 0, 1).unwrap();
        assert_eq!(b.coeffs()[0].re, 1.0);
        assert_eq!(b.coeffs()[1].re, -1.0);
        assert_eq!(antisymmetric_edge(&k2(), 0, 1), Err(Error::MissingEdge(1, 0)));
    }
}
