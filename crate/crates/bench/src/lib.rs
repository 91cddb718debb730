//! Benchmark inputs shared by the criterion targets.

use chipfire::{fixtures, ChipDistribution, MultiDigraph};

/// Named graphs of increasing difficulty.
pub fn workloads() -> Vec<(&'static str, MultiDigraph)> {
    vec![
        ("c6", fixtures::directed_cycle(6)),
        ("g2", fixtures::g2()),
        ("g3", fixtures::g3()),
        ("g1", fixtures::g1()),
    ]
}

/// A distribution piled on vertex 0 just below the pigeonhole bound.
pub fn near_bound_pile(graph: &MultiDigraph) -> ChipDistribution {
    let mut x = ChipDistribution::zeros(graph.vertex_count());
    x[0] = graph.termination_bound().max(0);
    x
}
