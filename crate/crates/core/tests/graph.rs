mod common;

use chipfire::{fixtures, parse_graph, Error, MultiDigraph};
use proptest::prelude::*;

fn any_digraph(max_n: usize, max_arcs: usize) -> impl Strategy<Value = MultiDigraph> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, 1u32..=2), 0..=max_arcs).prop_map(move |arcs| {
            let arcs: Vec<_> = arcs.into_iter().filter(|&(u, v, _)| u != v).collect();
            MultiDigraph::new(n, arcs).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn laplacian_matches_definition(g in any_digraph(5, 10)) {
        let l = g.laplacian();
        let n = g.vertex_count();
        for v in 0..n {
            prop_assert_eq!(l.column(v).iter().sum::<i64>(), 0);
            for u in 0..n {
                let expected = if u == v { -g.out_degrees()[v] } else { i64::from(g.multiplicity(v, u)) };
                prop_assert_eq!(l.get(u, v), expected);
            }
        }
    }

    #[test]
    fn strong_connectivity_matches_closure(g in any_digraph(5, 8)) {
        prop_assert_eq!(g.is_strongly_connected(), common::strongly_connected(&g));
    }

    #[test]
    fn text_format_round_trips(g in any_digraph(5, 10)) {
        prop_assert_eq!(parse_graph(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn degree_vectors_count_arcs(g in any_digraph(5, 10)) {
        let total = g.arc_count() as i64;
        prop_assert_eq!(g.out_degree_vector().degree(), total);
        prop_assert_eq!(g.in_degree_vector().degree(), total);
        prop_assert_eq!(g.termination_bound(), total - g.vertex_count() as i64);
    }
}

fn fixture_file(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn fixture_files_match_builtin_graphs() {
    let cases = [
        ("g1.txt", fixtures::g1()),
        ("g2.txt", fixtures::g2()),
        ("g3.txt", fixtures::g3()),
        ("c3.txt", fixtures::directed_cycle(3)),
        ("c4.txt", fixtures::directed_cycle(4)),
        ("c5.txt", fixtures::directed_cycle(5)),
        ("c6.txt", fixtures::directed_cycle(6)),
        ("k2.txt", fixtures::bidirected_k2()),
        ("k3.txt", fixtures::bidirected_k3()),
        ("c4-undirected.txt", fixtures::undirected_c4()),
    ];
    for (file, expected) in cases {
        let parsed = parse_graph(&fixture_file(file)).unwrap();
        assert_eq!(parsed, expected, "{file}");
        assert_eq!(parse_graph(&parsed.to_text()).unwrap(), parsed, "{file}");
    }
}

#[test]
fn fixture_classes() {
    assert!(fixtures::g2().is_eulerian() && !fixtures::g2().is_bidirected());
    assert!(!fixtures::g3().is_eulerian());
    assert_eq!(fixtures::g3().arc_count(), 8);
    assert_eq!(fixtures::g3().termination_bound(), 4);
    assert_eq!(fixtures::undirected_c4().undirected_edge_count(), Some(4));
    assert!(fixtures::g1().is_strongly_connected());
}

#[test]
fn parse_errors_carry_line_numbers() {
    let line_of = |text: &str| match parse_graph(text) {
        Err(Error::Parse { line, .. }) => line,
        other => panic!("expected a parse error, got {other:?}"),
    };
    assert_eq!(line_of("digraph 2\n0 1\n1 1\n"), 3);
    assert_eq!(line_of("# comment\ndigraph 2\n\n0 5\n"), 4);
    assert_eq!(line_of("digraph 2\n0 x\n"), 2);
    assert_eq!(line_of("graph 2\n"), 1);
    assert_eq!(line_of("# only a comment\n"), 0);
}
