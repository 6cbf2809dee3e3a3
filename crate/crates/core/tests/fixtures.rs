use std::path::PathBuf;

use sdprelax::io::{parse_csv_labeled, parse_edgelist, parse_tsplib, InstanceSpec};
use sdprelax::linalg::eig_decompose;
use sdprelax::spca::{sparse_pca, CovMatrix, SparsePcaOptions};
use sdprelax::{Graph, SymMatrix};

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(path(name)).unwrap()
}

fn same_edges(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n()
        && a.num_edges() == b.num_edges()
        && a.edges().iter().all(|e| b.has_edge(e.u, e.v))
}

#[test]
fn small_graph_fixtures_match_builders() {
    let load = |name: &str| parse_edgelist(&read(name), 1).unwrap();
    assert!(same_edges(&load("c5.edges"), &Graph::cycle(5).unwrap()));
    assert!(same_edges(&load("c8.edges"), &Graph::cycle(8).unwrap()));
    assert!(same_edges(&load("k5.edges"), &Graph::complete(5)));
    assert!(same_edges(&load("petersen.edges"), &Graph::petersen()));
}

#[test]
fn petersen_fixture_spectrum() {
    let g = parse_edgelist(&read("petersen.edges"), 1).unwrap();
    let eig = eig_decompose(&g.adjacency()).unwrap();
    let want = [3.0, 1.0, 1.0, 1.0, 1.0, 1.0, -2.0, -2.0, -2.0, -2.0];
    for (l, w) in eig.values.iter().zip(want) {
        assert!((l - w).abs() < 1e-9, "{:?}", eig.values);
    }
}

#[test]
fn tsplib_fixture_weights() {
    let tri = parse_tsplib(&read("tri.tsp")).unwrap();
    assert_eq!(tri.m_total(), 12.0);
    let gr5 = parse_tsplib(&read("gr5.tsp")).unwrap();
    assert_eq!((gr5.n(), gr5.num_edges(), gr5.m_total()), (5, 10, 192.0));
    // total of the rounded pairwise distances, computed independently
    let grid = parse_tsplib(&read("grid12.tsp")).unwrap();
    assert_eq!((grid.n(), grid.num_edges(), grid.m_total()), (12, 66, 6423.0));
}

#[test]
fn instance_spec_picks_format_from_extension() {
    let g = InstanceSpec::file(path("gr5.tsp")).load().unwrap();
    assert_eq!(g.m_total(), 192.0);
    let g = InstanceSpec::file(path("c5.edges")).load().unwrap();
    assert_eq!(g.num_edges(), 5);
}

#[test]
fn identity_csv() {
    let m = parse_csv_labeled(&read("identity3.csv")).unwrap();
    assert!(m.labels.is_none());
    assert_eq!(m.matrix, SymMatrix::identity(3));
}

fn pitprops() -> (Vec<String>, CovMatrix) {
    let m = parse_csv_labeled(&read("pitprops.csv")).unwrap();
    (m.labels.unwrap(), CovMatrix::new(m.matrix).unwrap())
}

#[test]
fn pitprops_is_a_correlation_matrix() {
    let (labels, c) = pitprops();
    assert_eq!(labels.len(), 13);
    assert_eq!(labels[0], "topdiam");
    assert_eq!(c.matrix().diagonal(), vec![1.0; 13]);
    // leading eigenvalues as published with the data
    let eig = eig_decompose(c.matrix()).unwrap();
    for (l, w) in eig.values.iter().zip([4.22, 2.38, 1.88]) {
        assert!((l - w).abs() < 0.01, "{:?}", &eig.values.as_slice()[..3]);
    }
}

#[test]
fn pitprops_sparse_components() {
    let (labels, c) = pitprops();
    let comps = sparse_pca(&c, &[5, 2, 2], &SparsePcaOptions::default()).unwrap();
    let names = |i: usize| -> Vec<&str> { comps[i].support.iter().map(|&j| labels[j].as_str()).collect() };
    assert_eq!(names(0).len(), 5);
    assert_eq!(names(1), ["moist", "testsg"]);
    for v in names(2) {
        assert!(["testsg", "ringtop", "ringbud"].contains(&v), "{:?}", names(2));
    }
}
