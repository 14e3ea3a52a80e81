use grt_core::catalog::{ghz, hexagonal_type1, hexagonal_type3, pentagonal_ame, pentagonal_isolated, SignBranch};
use grt_core::constraints::{
    check_graph_constrained, check_hypergraph_constrained, compose_graphs, faithful_hypergraph, ConstraintGraph,
    ConstraintHypergraph,
};
use grt_core::tensor::{as_operator, contract, proportional_to_identity, reduce_to, Bipartition, DenseTensor};

fn hex_triangles() -> Vec<Vec<usize>> {
    (1..=6).map(|i| vec![0, i, i % 6 + 1]).collect()
}

fn with_013() -> ConstraintHypergraph {
    let mut edges = hex_triangles();
    edges.push(vec![0, 1, 3]);
    ConstraintHypergraph::new(7, &edges).unwrap()
}

#[test]
fn type1_satisfies_triangles_but_not_013() {
    let t = hexagonal_type1(0.05, 0, 0, SignBranch::Minus).unwrap().tensor;
    let h = ConstraintHypergraph::new(7, &hex_triangles()).unwrap();
    assert!(check_hypergraph_constrained(&t, &h, 1e-10).unwrap().pass);
    let r = check_hypergraph_constrained(&t, &with_013(), 1e-10).unwrap();
    assert!(!r.pass);
    let failed: Vec<_> = r.failures().map(|f| f.subset.clone()).collect();
    assert_eq!(failed, vec![vec![0, 1, 3]]);
}

#[test]
fn type3_satisfies_013_as_well() {
    for a in [0.0, 2f64.sqrt() / 16.0 - 1e-6] {
        let t = hexagonal_type3(a).unwrap().tensor;
        assert!(check_hypergraph_constrained(&t, &with_013(), 1e-10).unwrap().pass, "a = {a}");
    }
}

#[test]
fn type1_bulk_and_two_neighbors_form_an_isometry() {
    let t = hexagonal_type1(0.05, 0, 0, SignBranch::Minus).unwrap().tensor;
    let v = as_operator(&t, &Bipartition::new(7, &[0, 1, 2]).unwrap()).unwrap();
    let id = proportional_to_identity(&(&v * v.adjoint()), 1e-12).unwrap();
    assert!(id.proportional, "{}", id.deviation);
}

#[test]
fn faithful_hypergraph_of_the_ame_pentagon_has_every_pair() {
    let h = faithful_hypergraph(&pentagonal_ame(0.3).tensor, 1e-10).unwrap();
    assert_eq!(h.len(), 5 + 10);
}

#[test]
fn faithful_hypergraph_of_the_isolated_pentagon_has_only_neighbor_pairs() {
    let h = faithful_hypergraph(&pentagonal_isolated().tensor, 1e-10).unwrap();
    let mut expected: Vec<Vec<usize>> = (0..5).map(|i| vec![i]).collect();
    expected.extend((0..5).map(|i| {
        let mut e = vec![i, (i + 1) % 5];
        e.sort();
        e
    }));
    expected.sort();
    let mut got: Vec<Vec<usize>> = h.hyperedges().cloned().collect();
    got.sort();
    assert_eq!(got, expected);
}

#[test]
fn faithful_hypergraph_of_a_product_state_is_empty() {
    let mut c = vec![0.0; 16];
    c[0] = 1.0;
    let t = DenseTensor::from_real(vec![2; 4], &c).unwrap();
    assert!(faithful_hypergraph(&t, 1e-10).unwrap().is_empty());
}

#[test]
fn contracted_pentagons_pass_the_two_path_graph() {
    let c5 = ConstraintGraph::cycle(5);
    let t1 = pentagonal_isolated().tensor;
    let t2 = pentagonal_ame(1.1).tensor;
    let pairing = [(3, 0), (4, 1)];
    let g = compose_graphs(&c5, &c5, &[3, 4], &[0, 1], &pairing).unwrap();
    let edges: Vec<_> = g.edges().collect();
    assert_eq!(edges, vec![(0, 1), (1, 2), (3, 4), (4, 5)]);
    let joined = contract(&t1, &t2, &pairing).unwrap();
    assert!(check_graph_constrained(&joined, &g, 1e-10).unwrap().pass);
}

#[test]
fn contracting_diagonal_legs_of_a_pentagon_is_rejected() {
    let c5 = ConstraintGraph::cycle(5);
    assert!(compose_graphs(&c5, &c5, &[0, 2], &[0, 1], &[(0, 0), (2, 1)]).is_err());
}

#[test]
fn glued_ghz_tensors_stay_one_uniform() {
    let t = contract(&ghz(3, 2), &ghz(3, 2), &[(2, 0)]).unwrap();
    assert_eq!(t.order(), 4);
    for site in 0..4 {
        let r = reduce_to(&t, &[site]).unwrap();
        assert!(proportional_to_identity(&r.entries, 1e-12).unwrap().proportional);
    }
    assert!(check_graph_constrained(&t, &ConstraintGraph::empty(4), 1e-12).unwrap().pass);
}
