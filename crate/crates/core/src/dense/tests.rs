use super::*;

fn complete(n: usize) -> Arc<MultiDigraph> {
    Arc::new(
        MultiDigraph::from_edges(
            n,
            (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))),
        )
        .unwrap(),
    )
}

fn circulant(n: usize, offsets: &[usize]) -> Arc<MultiDigraph> {
    Arc::new(
        MultiDigraph::from_edges(n, (0..n).flat_map(|v| offsets.iter().map(move |s| (v, (v + s) % n)))).unwrap(),
    )
}

#[test]
fn complete_digraph_on_beta_k_vertices_is_returned_whole() {
    let p = DenseParams::<f64>::desk();
    let host = complete(25);
    let out = find_dense_immersion(&host, 2, &p).unwrap();
    assert_eq!(out.report.branch, Branch::Direct);
    assert_eq!(out.report.expander_vertices, 25);
    let pattern = out.certificate.pattern();
    assert!(pattern.is_simple());
    // every pair of the expander's underlying graph is present in some direction
    assert_eq!(pattern.underlying_simple().edge_count(), 25 * 24 / 2);
    assert_eq!(out.report.pattern_edges, pattern.edge_count());
    assert!(out.certificate.verify().is_valid());
}

#[test]
fn even_complete_digraph_short_circuits() {
    let p = DenseParams::<f64>::desk();
    let host = complete(20);
    let out = find_dense_immersion(&host, 2, &p).unwrap();
    assert_eq!(out.report.branch, Branch::Biclique);
    assert_eq!(out.report.regular_half_degree, 9);
    assert_eq!(out.certificate.pattern().vertex_count(), 18);
    assert_eq!(out.certificate.pattern().edge_count(), 81);
    assert!(out.certificate.verify().is_valid());
}

#[test]
fn sparse_circulant_takes_a_biclique_branch() {
    let p = DenseParams::<f64>::desk();
    let host = circulant(60, &[1, 7, 18, 26]);
    let out = find_dense_immersion(&host, 2, &p).unwrap();
    let n = out.report.expander_vertices;
    let expected = if n <= 25 {
        Branch::Direct
    } else if small_case_applies(n, 2) {
        Branch::Small
    } else {
        Branch::Large
    };
    assert_eq!(out.report.branch, expected);
    assert_ne!(out.report.branch, Branch::Biclique);
    assert!(out.report.pattern_edges >= 2);
    assert!(out.certificate.verify().is_valid());
}

#[test]
fn low_degree_is_refused() {
    let host = circulant(10, &[1]);
    assert!(matches!(
        find_dense_immersion(&host, 2, &DenseParams::<f64>::desk()),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        find_dense_immersion(&complete(30), 2, &DenseParams::<f64>::paper()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn strict_large_case_reports_its_branch() {
    // paper profile with k = 1: 100-regular after regularization
    let mut p = DenseParams::<f64>::paper();
    p.regular_factor = Some(2);
    p.min_degree_factor = 4;
    let host = circulant(150, &[1, 4, 9, 16]);
    let err = find_dense_immersion(&host, 1, &p).unwrap_err();
    match err {
        Error::HypothesisNotMet { stage, .. } => assert!(stage.starts_with("large branch"), "{stage}"),
        e => panic!("{e}"),
    }
}
