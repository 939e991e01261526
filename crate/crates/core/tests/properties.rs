use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;
use susygraph_core::cycles::{cycle_space_report, fundamental_cycle_basis};
use susygraph_core::exact::rank_of_vectors;
use susygraph_core::generate::{erdos_renyi, random_connected, random_flips, random_permutation, seeded};
use susygraph_core::graph::{
    bfs_spheres, connected_components, parse_edge_list, reorient, spanning_tree, symmetrize, write_edge_list,
};
use susygraph_core::operators::{
    build_edge_laplacian, build_incidence, build_super_operators, build_vertex_operators, laplacian_stencil,
    vertex_operators_from_edges,
};
use susygraph_core::spectral::{
    kernel_report, multisets_match, pairing_check, symmetric_spectrum, zero_mode_classification, SPECTRAL_TOL,
};
use susygraph_core::susy::{verify_grading, verify_superalgebra};
use susygraph_core::{DirectedGraph, GaussInt, LinearMap, Mode, SpaceTag, StateVector};

/// Oriented graphs with some reciprocal pairs, symmetric graphs, or plain
/// oriented graphs, from a seed.
fn graph(seed: u64, max_n: usize) -> DirectedGraph {
    let mut rng = seeded(seed);
    let n = rng.random_range(1..=max_n);
    let p = rng.random_range(0.05..0.6);
    match seed % 3 {
        0 => erdos_renyi(n, p, Mode::Oriented, &mut rng),
        1 => erdos_renyi(n, p, Mode::Symmetric, &mut rng),
        _ => {
            let g = erdos_renyi(n, p, Mode::Oriented, &mut rng);
            let mut edges = g.edges().to_vec();
            for &(i, j) in g.edges() {
                if rng.random_bool(0.3) {
                    edges.push((j, i));
                }
            }
            DirectedGraph::oriented(n, edges).unwrap()
        }
    }
}

fn permutation_map(perm: &[usize]) -> LinearMap {
    let n = perm.len();
    LinearMap::from_triplets(
        SpaceTag::Vertex(n),
        SpaceTag::Vertex(n),
        perm.iter().enumerate().map(|(v, &p)| (p, v, GaussInt::real(1))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn superalgebra_and_grading_hold_exactly(seed in any::<u64>()) {
        let g = graph(seed, 18);
        let a = verify_superalgebra(&g);
        let b = verify_grading(&g);
        prop_assert!(a.all_pass(), "{:?}", a);
        prop_assert!(b.all_pass(), "{:?}", b);
        for r in a.relations.iter().chain(&b.relations) {
            prop_assert_eq!(r.nonzero_entries, 0);
        }
    }

    #[test]
    fn factorized_and_direct_vertex_operators_agree(seed in any::<u64>()) {
        let g = graph(seed, 20);
        let ops = build_vertex_operators(&g);
        prop_assert_eq!(&ops, &vertex_operators_from_edges(&g));
        let inc = build_incidence(&g);
        prop_assert_eq!(inc.d.clone(), inc.d1.sub(&inc.d2).unwrap());
        prop_assert_eq!(inc.d_star.clone(), inc.d1.adjoint().sub(&inc.d2.adjoint()).unwrap());
        prop_assert!(ops.a.is_self_adjoint());
        for r in 0..g.n() {
            let sum = ops.laplacian.row(r).fold(GaussInt::default(), |acc, (_, v)| acc + v.clone());
            prop_assert_eq!(sum, GaussInt::default());
        }
    }

    #[test]
    fn laplacian_is_orientation_independent(seed in any::<u64>()) {
        let g = erdos_renyi(12, 0.4, Mode::Oriented, &mut seeded(seed));
        let flips = random_flips(g.m(), &mut seeded(seed ^ 1));
        let h = reorient(&g, &flips).unwrap();
        prop_assert_eq!(build_vertex_operators(&g).laplacian, build_vertex_operators(&h).laplacian);
        prop_assert_eq!(reorient(&h, &flips).unwrap(), g.clone());
        let s = |x: &DirectedGraph| symmetric_spectrum(&build_edge_laplacian(x), "dd*").unwrap().eigenvalues;
        prop_assert!(multisets_match(&s(&g), &s(&h), SPECTRAL_TOL).pass);
        prop_assert!(verify_superalgebra(&h).all_pass());
    }

    #[test]
    fn relabeling_conjugates_the_laplacian(seed in any::<u64>()) {
        let g = graph(seed, 14);
        let perm = random_permutation(g.n(), &mut seeded(seed));
        let h = g.relabeled(&perm).unwrap();
        let p = permutation_map(&perm);
        let conj = p.compose(&build_vertex_operators(&g).laplacian).unwrap().compose(&p.adjoint()).unwrap();
        prop_assert_eq!(conj, build_vertex_operators(&h).laplacian);
        prop_assert!(verify_grading(&h).all_pass());
        let (kg, kh) = (kernel_report(&g), kernel_report(&h));
        prop_assert_eq!((kg.dim_ker_d, kg.dim_ker_d_star, kg.dim_ker_hs), (kh.dim_ker_d, kh.dim_ker_d_star, kh.dim_ker_hs));
        let s = |x: &DirectedGraph| symmetric_spectrum(&build_super_operators(x).hamiltonian, "H_S").unwrap().eigenvalues;
        prop_assert!(multisets_match(&s(&g), &s(&h), SPECTRAL_TOL).pass);
    }

    #[test]
    fn kernel_dimensions_are_consistent(seed in any::<u64>()) {
        let g = graph(seed, 20);
        let k = kernel_report(&g);
        prop_assert!(k.pass, "{:?}", k);
        let components = connected_components(&g).len();
        prop_assert_eq!(k.dim_ker_d, components);
        prop_assert_eq!(k.dim_ker_d_star + g.n(), g.m() + components);
        prop_assert!(zero_mode_classification(&g).pass);
    }

    #[test]
    fn pairing_holds(seed in any::<u64>()) {
        let g = graph(seed, 16);
        prop_assert!(pairing_check(&g, SPECTRAL_TOL).pass);
    }

    #[test]
    fn cycle_span_does_not_depend_on_the_tree(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let mode = if seed % 2 == 0 { Mode::Oriented } else { Mode::Symmetric };
        let g = random_connected(rng.random_range(2..16), 0.3, mode, &mut rng);
        let r1 = rng.random_range(0..g.n());
        let a = fundamental_cycle_basis(&g, &spanning_tree(&g, 0).unwrap()).unwrap();
        let b = fundamental_cycle_basis(&g, &spanning_tree(&g, r1).unwrap()).unwrap();
        prop_assert_eq!(a.len(), b.len());
        let mut stacked = a.sparse_vectors();
        stacked.extend(b.sparse_vectors());
        prop_assert_eq!(rank_of_vectors(&stacked, g.m()), a.len());
        for c in a.cycles.iter().chain(&b.cycles) {
            prop_assert!(c.edges.iter().all(|&(_, s)| s == 1 || s == -1));
        }
        prop_assert!(cycle_space_report(&g).pass);
    }

    #[test]
    fn spanning_forest_sizes(seed in any::<u64>()) {
        let g = graph(seed, 25);
        let t = spanning_tree(&g, 0).unwrap();
        let components = connected_components(&g).len();
        prop_assert_eq!(t.tree_edges().len() + components, g.n());
        let undirected = g.undirected_edges().len();
        prop_assert_eq!(t.tree_edges().len() + t.non_tree_edges().len(), undirected);
        prop_assert!(t.tree_edges().is_disjoint(t.non_tree_edges()));
    }

    #[test]
    fn bfs_layers_partition_the_component(seed in any::<u64>()) {
        let g = graph(seed, 25);
        let root = (seed as usize) % g.n();
        let b = bfs_spheres(&g, root).unwrap();
        let component = connected_components(&g).into_iter().find(|c| c.contains(&root)).unwrap();
        let total: usize = b.layers.iter().map(Vec::len).sum();
        prop_assert_eq!(total, component.len());
        let seen: BTreeSet<usize> = b.layers.iter().flatten().copied().collect();
        prop_assert_eq!(seen.len(), total);
        for (l, layer) in b.layers.iter().enumerate() {
            for &v in layer {
                prop_assert_eq!(b.dist[v], Some(l));
            }
        }
        // Adjacent vertices are at most one layer apart.
        for &(i, j) in g.edges() {
            if let (Some(a), Some(c)) = (b.dist[i], b.dist[j]) {
                prop_assert!(a.abs_diff(c) <= 1);
            }
        }
    }

    #[test]
    fn edge_list_round_trip(seed in any::<u64>()) {
        let g = graph(seed, 20);
        prop_assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g.clone());
        let s = symmetrize(&g.with_mode(Mode::Oriented).unwrap());
        prop_assert_eq!(symmetrize(&s), s.clone());
        prop_assert!(s.m() >= g.m() && s.m() <= 2 * g.m());
    }

    #[test]
    fn laplacian_matches_stencil(seed in any::<u64>(), values in proptest::collection::vec(-10.0f64..10.0, 20)) {
        let g = graph(seed, 20);
        let f = StateVector::from_real(SpaceTag::Vertex(g.n()), &values[..g.n()]).unwrap();
        let a = build_vertex_operators(&g).laplacian.apply(&f).unwrap();
        let b = laplacian_stencil(&g, &f).unwrap();
        prop_assert!(a.sub(&b).unwrap().max_abs() <= 1e-12);
    }
}
