//! Seeded random graphs and exhaustive small-graph enumeration.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chips::ChipDistribution;
use crate::graph::MultiDigraph;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for trial `index` of a sweep seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Copy, Debug)]
pub struct EulerianParams {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_cycles: usize,
    pub max_arcs: u64,
    /// Probability that a superposed cycle is a 2-cycle.
    pub two_cycle_bias: f64,
}

impl Default for EulerianParams {
    fn default() -> Self {
        EulerianParams {
            min_vertices: 2,
            max_vertices: 5,
            max_cycles: 4,
            max_arcs: 12,
            two_cycle_bias: 0.4,
        }
    }
}

/// Superposes random directed cycles until the union is strongly connected.
pub fn random_eulerian<R: Rng>(rng: &mut R, params: &EulerianParams) -> MultiDigraph {
    loop {
        let n = rng.gen_range(params.min_vertices..=params.max_vertices);
        let cycles = rng.gen_range(1..=params.max_cycles);
        let mut arcs = Vec::new();
        let mut vertices: Vec<usize> = (0..n).collect();
        for _ in 0..cycles {
            let len = if rng.gen_bool(params.two_cycle_bias) {
                2
            } else {
                rng.gen_range(2..=n)
            };
            vertices.shuffle(rng);
            for i in 0..len {
                arcs.push((vertices[i], vertices[(i + 1) % len], 1));
            }
        }
        if arcs.len() as u64 > params.max_arcs {
            continue;
        }
        let g = MultiDigraph::new(n, arcs).expect("cycle arcs are loop-free");
        if g.is_strongly_connected() {
            return g;
        }
    }
}

/// Random connected undirected graph: a random spanning tree plus
/// `extra_edges` further edges, as a bidirected digraph.
pub fn random_connected_undirected<R: Rng>(
    rng: &mut R,
    n: usize,
    extra_edges: usize,
    allow_parallel: bool,
) -> MultiDigraph {
    assert!(n >= 1);
    let mut edges: Vec<(usize, usize, u32)> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((order[j], order[i], 1));
    }
    let max_simple = n * (n - 1) / 2;
    let mut added = 0;
    let mut attempts = 0;
    while added < extra_edges && n >= 2 && attempts < 100 * (extra_edges + 1) {
        attempts += 1;
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let (u, v) = (u.min(v), u.max(v));
        let present = edges
            .iter()
            .any(|&(a, b, _)| (a.min(b), a.max(b)) == (u, v));
        if present && (!allow_parallel) {
            if edges.len() >= max_simple {
                break;
            }
            continue;
        }
        edges.push((u, v, 1));
        added += 1;
    }
    MultiDigraph::from_undirected(n, edges).expect("tree edges are loop-free")
}

/// Random strongly connected digraph with `n` vertices and at most
/// `max_arcs` arcs (counting multiplicity).
pub fn random_strongly_connected<R: Rng>(rng: &mut R, n: usize, max_arcs: u64) -> MultiDigraph {
    assert!(n >= 2 && max_arcs >= n as u64);
    loop {
        // A Hamiltonian cycle guarantees strong connectivity; extra arcs add
        // asymmetry and multiplicity.
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut arcs: Vec<(usize, usize, u32)> =
            (0..n).map(|i| (order[i], order[(i + 1) % n], 1)).collect();
        let extra = rng.gen_range(0..=(max_arcs - n as u64));
        for _ in 0..extra {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                arcs.push((u, v, 1));
            }
        }
        let g = MultiDigraph::new(n, arcs).expect("no loops");
        if g.is_strongly_connected() {
            return g;
        }
    }
}

pub fn random_distribution<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> ChipDistribution {
    ChipDistribution::new((0..n).map(|_| rng.gen_range(lo..=hi)).collect())
}

/// Every vector in `{lo..=hi}^n`, lexicographic.
pub fn box_vectors(n: usize, lo: i64, hi: i64) -> Vec<ChipDistribution> {
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (lo..=hi).map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(ChipDistribution::new).collect()
}

/// Every connected simple undirected graph on vertex set `0..n` (labelled)
/// with at most `max_edges` edges, as bidirected digraphs.
pub fn connected_simple_graphs(n: usize, max_edges: usize) -> Vec<MultiDigraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        if mask.count_ones() as usize > max_edges {
            continue;
        }
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &(u, v))| (u, v, 1));
        let g = MultiDigraph::from_undirected(n, edges).expect("simple edges");
        if g.is_strongly_connected() {
            out.push(g);
        }
    }
    out
}
