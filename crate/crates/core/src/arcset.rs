//! Feedback and turnback arc sets, acyclic orientations, and the
//! certificates of non-termination built from them.

use crate::chips::ChipDistribution;
use crate::engine::ChipEngine;
use crate::error::{Error, Result};
use crate::graph::{table_is_acyclic, ArcSubset, MultiDigraph};

/// The ordering DP allocates `2^n` cells.
pub const MAX_DP_VERTICES: usize = 20;
/// Default cap on `|E|` for inclusion-minimal FAS enumeration.
pub const DEFAULT_FAS_ENUMERATION_ARCS: u64 = 12;
/// Default cap on distinct undirected edges for orientation enumeration.
pub const DEFAULT_ORIENTATION_EDGES: usize = 16;

pub fn is_feedback_arc_set(graph: &MultiDigraph, arcs: &ArcSubset) -> Result<bool> {
    graph.is_acyclic_after(&ArcSubset::empty(graph.vertex_count()), arcs)
}

pub fn is_turnback_arc_set(graph: &MultiDigraph, arcs: &ArcSubset) -> Result<bool> {
    graph.is_acyclic_after(arcs, &ArcSubset::empty(graph.vertex_count()))
}

/// Exact minimum feedback arc set with the vertex ordering that realizes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimumFas {
    pub size: u64,
    /// Vertices in an order whose backward arcs form a minimum FAS.
    pub ordering: Vec<usize>,
    /// The backward arcs of `ordering`.
    pub arcs: ArcSubset,
}

/// Dynamic program over vertex subsets: placing `v` right after the prefix
/// `S` turns every arc into `v` from outside `S + v` into a backward arc.
pub fn minimum_feedback_arc_set(graph: &MultiDigraph) -> Result<MinimumFas> {
    let n = graph.vertex_count();
    if n > MAX_DP_VERTICES {
        return Err(Error::SizeLimitExceeded {
            what: "minfas vertex count",
            limit: MAX_DP_VERTICES as u64,
            actual: n as u64,
        });
    }
    let full = (1usize << n) - 1;
    let indeg = graph.in_degrees();
    let mut best = vec![u64::MAX; full + 1];
    let mut last = vec![usize::MAX; full + 1];
    best[0] = 0;
    let mut from_prefix = vec![0i64; n];
    for set in 0..full {
        if best[set] == u64::MAX {
            continue;
        }
        from_prefix.iter_mut().for_each(|c| *c = 0);
        for u in (0..n).filter(|&u| set >> u & 1 == 1) {
            for (v, slot) in from_prefix.iter_mut().enumerate() {
                *slot += i64::from(graph.multiplicity(u, v));
            }
        }
        for v in (0..n).filter(|&v| set >> v & 1 == 0) {
            let cost = best[set] + (indeg[v] - from_prefix[v]) as u64;
            let next = set | 1 << v;
            if cost < best[next] {
                best[next] = cost;
                last[next] = v;
            }
        }
    }

    let mut ordering = Vec::with_capacity(n);
    let mut set = full;
    while set != 0 {
        let v = last[set];
        ordering.push(v);
        set &= !(1 << v);
    }
    ordering.reverse();

    let mut position = vec![0usize; n];
    for (i, &v) in ordering.iter().enumerate() {
        position[v] = i;
    }
    let mut arcs = ArcSubset::empty(n);
    for (u, v, k) in graph.arcs() {
        if position[u] > position[v] {
            arcs.set_multiplicity(u, v, k);
        }
    }
    debug_assert_eq!(arcs.cardinality(), best[full]);
    Ok(MinimumFas {
        size: best[full],
        ordering,
        arcs,
    })
}

pub fn minfas(graph: &MultiDigraph) -> Result<u64> {
    Ok(minimum_feedback_arc_set(graph)?.size)
}

/// Minimum turnback arc set: the minimum FAS from the ordering DP, which is
/// inclusion-minimal and hence reverses to an acyclic digraph.
pub fn min_turnback(graph: &MultiDigraph) -> Result<(u64, ArcSubset)> {
    let fas = minimum_feedback_arc_set(graph)?;
    debug_assert!(is_turnback_arc_set(graph, &fas.arcs).unwrap_or(false));
    Ok((fas.size, fas.arcs))
}

/// All inclusion-minimal feedback arc sets.
///
/// A minimal set takes either every parallel copy of a pair or none, so the
/// search runs over subsets of distinct pairs.
pub fn minimal_feedback_arc_sets(graph: &MultiDigraph) -> Result<Vec<ArcSubset>> {
    minimal_feedback_arc_sets_with_limit(graph, DEFAULT_FAS_ENUMERATION_ARCS)
}

pub fn minimal_feedback_arc_sets_with_limit(
    graph: &MultiDigraph,
    arc_limit: u64,
) -> Result<Vec<ArcSubset>> {
    if graph.arc_count() > arc_limit {
        return Err(Error::SizeLimitExceeded {
            what: "minimal FAS enumeration arc count",
            limit: arc_limit,
            actual: graph.arc_count(),
        });
    }
    let n = graph.vertex_count();
    let pairs: Vec<(usize, usize, u32)> = graph.arcs().collect();
    let base: Vec<u32> = (0..n * n)
        .map(|i| graph.multiplicity(i / n, i % n))
        .collect();
    let is_fas = |mask: u64| {
        let mut table = base.clone();
        for (i, &(u, v, _)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                table[u * n + v] = 0;
            }
        }
        table_is_acyclic(n, &table)
    };
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        if !is_fas(mask) {
            continue;
        }
        // FAS is upward closed, so checking single-pair removals suffices.
        let minimal = (0..pairs.len())
            .filter(|&i| mask >> i & 1 == 1)
            .all(|i| !is_fas(mask & !(1 << i)));
        if minimal {
            let mut set = ArcSubset::empty(n);
            for (i, &(u, v, k)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    set.set_multiplicity(u, v, k);
                }
            }
            out.push(set);
        }
    }
    Ok(out)
}

/// One direction per undirected edge copy of a bidirected graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation {
    arcs: ArcSubset,
}

impl Orientation {
    /// Checks that `arcs` picks exactly one direction for every copy of each
    /// undirected edge of `graph`.
    pub fn new(graph: &MultiDigraph, arcs: ArcSubset) -> Result<Self> {
        if !graph.is_bidirected() {
            return Err(Error::NotBidirected);
        }
        graph.check_subset(&arcs)?;
        let n = graph.vertex_count();
        for u in 0..n {
            for v in u + 1..n {
                if arcs.multiplicity(u, v) + arcs.multiplicity(v, u) != graph.multiplicity(u, v) {
                    return Err(Error::NotASubset(u, v));
                }
            }
        }
        Ok(Orientation { arcs })
    }

    pub fn arcs(&self) -> &ArcSubset {
        &self.arcs
    }

    pub fn indegree(&self) -> ChipDistribution {
        self.arcs.indegree()
    }

    pub fn is_acyclic(&self) -> bool {
        let n = self.arcs.vertex_count();
        let table: Vec<u32> = (0..n * n)
            .map(|i| self.arcs.multiplicity(i / n, i % n))
            .collect();
        table_is_acyclic(n, &table)
    }

    pub fn reversed(&self) -> Orientation {
        let n = self.arcs.vertex_count();
        let mut arcs = ArcSubset::empty(n);
        for (u, v, k) in self.arcs.arcs() {
            arcs.set_multiplicity(v, u, k);
        }
        Orientation { arcs }
    }

    pub fn to_text(&self) -> String {
        self.arcs.to_text()
    }
}

/// All acyclic orientations of a bidirected graph. Parallel copies must all
/// point the same way, otherwise they form a 2-cycle.
pub fn acyclic_orientations(graph: &MultiDigraph) -> Result<Vec<Orientation>> {
    acyclic_orientations_with_limit(graph, DEFAULT_ORIENTATION_EDGES)
}

pub fn acyclic_orientations_with_limit(
    graph: &MultiDigraph,
    edge_limit: usize,
) -> Result<Vec<Orientation>> {
    if !graph.is_bidirected() {
        return Err(Error::NotBidirected);
    }
    let n = graph.vertex_count();
    let edges: Vec<(usize, usize, u32)> = graph.arcs().filter(|&(u, v, _)| u < v).collect();
    if edges.len() > edge_limit {
        return Err(Error::SizeLimitExceeded {
            what: "orientation enumeration edge count",
            limit: edge_limit as u64,
            actual: edges.len() as u64,
        });
    }
    let mut out = Vec::new();
    for mask in 0u64..1 << edges.len() {
        let mut arcs = ArcSubset::empty(n);
        for (i, &(u, v, k)) in edges.iter().enumerate() {
            if mask >> i & 1 == 0 {
                arcs.set_multiplicity(u, v, k);
            } else {
                arcs.set_multiplicity(v, u, k);
            }
        }
        let o = Orientation { arcs };
        if o.is_acyclic() {
            out.push(o);
        }
    }
    Ok(out)
}

/// `x ~ indegree(T) + slack` with `T` a turnback arc set and `slack >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TurnbackWitness {
    pub turnback: ArcSubset,
    pub indegree: ChipDistribution,
    pub slack: ChipDistribution,
    /// The equivalent distribution reached by the game, `indegree + slack`.
    pub reached: ChipDistribution,
}

/// Replays the canonical game until every vertex has fired, then takes as
/// `T` the arcs `u -> v` where `u` fired last after `v` did. Parallel copies
/// of a pair are classified together.
fn replay_witness(
    engine: &mut ChipEngine<'_>,
    x: &ChipDistribution,
) -> Result<Option<TurnbackWitness>> {
    let graph = engine.graph();
    let Some((reached, last)) = engine.play_until_all_fired(x)? else {
        return Ok(None);
    };
    let n = graph.vertex_count();
    let mut turnback = ArcSubset::empty(n);
    for (u, v, k) in graph.arcs() {
        if last[u] > last[v] {
            turnback.set_multiplicity(u, v, k);
        }
    }
    let indegree = turnback.indegree();
    let slack = &reached - &indegree;
    assert!(
        slack.is_effective(),
        "every vertex receives at least its T-indegree after its last firing"
    );
    Ok(Some(TurnbackWitness {
        turnback,
        indegree,
        slack,
        reached,
    }))
}

/// Certificate of non-termination on an Eulerian digraph, or `None` when `x`
/// terminates.
pub fn nonterm_witness_turnback(
    graph: &MultiDigraph,
    x: &ChipDistribution,
) -> Result<Option<TurnbackWitness>> {
    if !graph.is_eulerian() {
        return Err(Error::NotEulerian);
    }
    let mut engine = ChipEngine::new(graph)?;
    nonterm_witness_turnback_with(&mut engine, x)
}

pub fn nonterm_witness_turnback_with(
    engine: &mut ChipEngine<'_>,
    x: &ChipDistribution,
) -> Result<Option<TurnbackWitness>> {
    if !engine.graph().is_eulerian() {
        return Err(Error::NotEulerian);
    }
    replay_witness(engine, x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientationWitness {
    pub orientation: Orientation,
    pub slack: ChipDistribution,
    pub reached: ChipDistribution,
}

/// Certificate of non-termination on an undirected graph: an acyclic
/// orientation whose indegree vector plus a non-negative slack is
/// equivalent to `x`.
pub fn nonterm_witness_acyclic_orientation(
    graph: &MultiDigraph,
    x: &ChipDistribution,
) -> Result<Option<OrientationWitness>> {
    if !graph.is_bidirected() {
        return Err(Error::NotBidirected);
    }
    let mut engine = ChipEngine::new(graph)?;
    nonterm_witness_acyclic_orientation_with(&mut engine, x)
}

pub fn nonterm_witness_acyclic_orientation_with(
    engine: &mut ChipEngine<'_>,
    x: &ChipDistribution,
) -> Result<Option<OrientationWitness>> {
    let graph = engine.graph();
    if !graph.is_bidirected() {
        return Err(Error::NotBidirected);
    }
    let Some(w) = replay_witness(engine, x)? else {
        return Ok(None);
    };
    let orientation = Orientation::new(graph, w.turnback)?;
    Ok(Some(OrientationWitness {
        orientation,
        slack: w.slack,
        reached: w.reached,
    }))
}
