//! Named example graphs. The same graphs ship as text files under
//! `fixtures/` at the repository root.

use crate::graph::MultiDigraph;

/// Six vertices, twelve arcs; two minimally non-terminating classes of
/// different degree.
pub fn g1() -> MultiDigraph {
    MultiDigraph::from_arcs(
        6,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 0),
            (0, 4),
            (1, 5),
            (2, 0),
            (3, 1),
            (4, 2),
            (5, 3),
        ],
    )
    .expect("valid fixture")
}

/// Eulerian, not bidirected, two classes per degree.
pub fn g2() -> MultiDigraph {
    MultiDigraph::from_arcs(4, &[(0, 1), (0, 3), (1, 0), (1, 2), (2, 0), (3, 1)])
        .expect("valid fixture")
}

/// Non-Eulerian with doubled arcs `2 -> 1` and `3 -> 2`.
pub fn g3() -> MultiDigraph {
    MultiDigraph::new(
        4,
        [
            (0, 1, 1),
            (0, 3, 1),
            (1, 0, 1),
            (2, 1, 2),
            (3, 2, 2),
            (3, 0, 1),
        ],
    )
    .expect("valid fixture")
}

/// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
pub fn directed_cycle(n: usize) -> MultiDigraph {
    assert!(n >= 2, "directed cycle needs at least two vertices");
    MultiDigraph::new(n, (0..n).map(|i| (i, (i + 1) % n, 1))).expect("valid fixture")
}

pub fn bidirected_k2() -> MultiDigraph {
    MultiDigraph::from_undirected(2, [(0, 1, 1)]).expect("valid fixture")
}

pub fn bidirected_k3() -> MultiDigraph {
    MultiDigraph::from_undirected(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]).expect("valid fixture")
}

/// Undirected 4-cycle.
pub fn undirected_c4() -> MultiDigraph {
    MultiDigraph::from_undirected(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])
        .expect("valid fixture")
}
