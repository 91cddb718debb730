//! Loop-free multidigraphs, their degree data and Laplacian.
//!
//! Vertices are dense indices `0..n`. Arc multiplicities live in a dense
//! `n x n` count table, which keeps degree vectors and subset bookkeeping
//! trivial at the sizes this crate targets.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::chips::ChipDistribution;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiDigraph {
    n: usize,
    mult: Vec<u32>,
    out_deg: Vec<i64>,
    in_deg: Vec<i64>,
    arc_count: u64,
    strongly_connected: bool,
    undirected_edges: Option<u64>,
}

impl MultiDigraph {
    /// Builds a digraph from `(u, v, k)` triples, `k` parallel copies of `u -> v`.
    /// Repeated pairs accumulate.
    pub fn new<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u32)>,
    {
        let mut mult = vec![0u32; n * n];
        for (u, v, k) in arcs {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::LoopArc(u));
            }
            mult[u * n + v] += k;
        }
        Ok(Self::from_table(n, mult, None))
    }

    /// Single-multiplicity arc list.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, arcs.iter().map(|&(u, v)| (u, v, 1)))
    }

    /// Bidirected graph: each undirected edge `{u, v}` (with multiplicity)
    /// becomes the pair of arcs `u -> v`, `v -> u`.
    pub fn from_undirected<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u32)>,
    {
        let mut mult = vec![0u32; n * n];
        let mut m = 0u64;
        for (u, v, k) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::LoopArc(u));
            }
            mult[u * n + v] += k;
            mult[v * n + u] += k;
            m += u64::from(k);
        }
        Ok(Self::from_table(n, mult, Some(m)))
    }

    pub(crate) fn from_table(n: usize, mult: Vec<u32>, undirected_edges: Option<u64>) -> Self {
        debug_assert_eq!(mult.len(), n * n);
        let mut out_deg = vec![0i64; n];
        let mut in_deg = vec![0i64; n];
        for u in 0..n {
            for v in 0..n {
                let k = i64::from(mult[u * n + v]);
                out_deg[u] += k;
                in_deg[v] += k;
            }
        }
        let arc_count = out_deg.iter().sum::<i64>() as u64;
        let mut g = MultiDigraph {
            n,
            mult,
            out_deg,
            in_deg,
            arc_count,
            strongly_connected: false,
            undirected_edges,
        };
        g.strongly_connected = g.compute_strongly_connected();
        g
    }

    fn compute_strongly_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let reach = |forward: bool| {
            let mut seen = vec![false; self.n];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            while let Some(u) = queue.pop_front() {
                for (w, flag) in seen.iter_mut().enumerate() {
                    let k = if forward {
                        self.multiplicity(u, w)
                    } else {
                        self.multiplicity(w, u)
                    };
                    if k > 0 && !*flag {
                        *flag = true;
                        queue.push_back(w);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(true) && reach(false)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// `|E|`, counting multiplicity.
    pub fn arc_count(&self) -> u64 {
        self.arc_count
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        self.mult[u * self.n + v]
    }

    pub fn out_degrees(&self) -> &[i64] {
        &self.out_deg
    }

    pub fn in_degrees(&self) -> &[i64] {
        &self.in_deg
    }

    pub fn out_degree_vector(&self) -> ChipDistribution {
        ChipDistribution::new(self.out_deg.clone())
    }

    pub fn in_degree_vector(&self) -> ChipDistribution {
        ChipDistribution::new(self.in_deg.clone())
    }

    /// Distinct ordered pairs with their multiplicities, row-major order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        let n = self.n;
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(move |(i, &k)| (i / n, i % n, k))
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.strongly_connected
    }

    pub fn require_strongly_connected(&self) -> Result<()> {
        if self.strongly_connected {
            Ok(())
        } else {
            Err(Error::NotStronglyConnected)
        }
    }

    pub fn is_eulerian(&self) -> bool {
        self.out_deg == self.in_deg
    }

    pub fn is_bidirected(&self) -> bool {
        (0..self.n)
            .all(|u| (u + 1..self.n).all(|v| self.multiplicity(u, v) == self.multiplicity(v, u)))
    }

    /// Number of undirected edges, defined for bidirected graphs only.
    pub fn undirected_edge_count(&self) -> Option<u64> {
        match self.undirected_edges {
            Some(m) => Some(m),
            None if self.is_bidirected() => Some(self.arc_count / 2),
            None => None,
        }
    }

    /// Degree threshold `|E| - |V|`: anything of larger degree is non-terminating.
    pub fn termination_bound(&self) -> i64 {
        self.arc_count as i64 - self.n as i64
    }

    pub fn laplacian(&self) -> LaplacianMatrix {
        let n = self.n;
        let mut entries = vec![0i64; n * n];
        for u in 0..n {
            for v in 0..n {
                entries[u * n + v] = if u == v {
                    -self.out_deg[v]
                } else {
                    i64::from(self.multiplicity(v, u))
                };
            }
        }
        LaplacianMatrix { n, entries }
    }

    /// Indegree vector of the arc subset, `v -> #selected arcs entering v`.
    pub fn subgraph_indegree(&self, arcs: &ArcSubset) -> Result<ChipDistribution> {
        self.check_subset(arcs)?;
        let n = self.n;
        let mut indeg = vec![0i64; n];
        for (_, v, k) in arcs.arcs() {
            indeg[v] += i64::from(k);
        }
        Ok(ChipDistribution::new(indeg))
    }

    /// Whether the digraph obtained by reversing `reversed` and deleting
    /// `removed` is acyclic.
    pub fn is_acyclic_after(&self, reversed: &ArcSubset, removed: &ArcSubset) -> Result<bool> {
        self.check_subset(reversed)?;
        self.check_subset(removed)?;
        let n = self.n;
        let mut table = self.mult.clone();
        for u in 0..n {
            for v in 0..n {
                let r = reversed.multiplicity(u, v);
                let d = removed.multiplicity(u, v);
                if r + d > self.multiplicity(u, v) {
                    return Err(Error::OverlappingArcSets(u, v));
                }
                table[u * n + v] -= r + d;
            }
        }
        for (u, v, k) in reversed.arcs() {
            table[v * n + u] += k;
        }
        Ok(table_is_acyclic(n, &table))
    }

    pub fn is_acyclic(&self) -> bool {
        table_is_acyclic(self.n, &self.mult)
    }

    pub(crate) fn check_subset(&self, arcs: &ArcSubset) -> Result<()> {
        if arcs.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: arcs.n,
            });
        }
        for u in 0..self.n {
            for v in 0..self.n {
                if arcs.multiplicity(u, v) > self.multiplicity(u, v) {
                    return Err(Error::NotASubset(u, v));
                }
            }
        }
        Ok(())
    }

    /// All arcs as an [`ArcSubset`].
    pub fn all_arcs(&self) -> ArcSubset {
        ArcSubset {
            n: self.n,
            mult: self.mult.clone(),
        }
    }

    /// Serializes in the graph text format. Bidirected graphs built from an
    /// undirected edge list are written back as `undirected`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.undirected_edges.is_some() {
            let _ = writeln!(out, "undirected {}", self.n);
            for u in 0..self.n {
                for v in u + 1..self.n {
                    write_arc_line(&mut out, u, v, self.multiplicity(u, v));
                }
            }
        } else {
            let _ = writeln!(out, "digraph {}", self.n);
            for (u, v, k) in self.arcs() {
                write_arc_line(&mut out, u, v, k);
            }
        }
        out
    }
}

fn write_arc_line(out: &mut String, u: usize, v: usize, k: u32) {
    match k {
        0 => {}
        1 => {
            let _ = writeln!(out, "{u} {v}");
        }
        _ => {
            let _ = writeln!(out, "{u} {v} {k}");
        }
    }
}

fn check_vertex(v: usize, n: usize) -> Result<()> {
    if v < n {
        Ok(())
    } else {
        Err(Error::VertexOutOfRange { vertex: v, n })
    }
}

/// Kahn's algorithm on a dense count table.
pub(crate) fn table_is_acyclic(n: usize, table: &[u32]) -> bool {
    let mut indeg = vec![0u64; n];
    for u in 0..n {
        for v in 0..n {
            indeg[v] += u64::from(table[u * n + v]);
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(u) = stack.pop() {
        removed += 1;
        for v in 0..n {
            let k = u64::from(table[u * n + v]);
            if k > 0 {
                indeg[v] -= k;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
    }
    removed == n
}

/// Sub-multiset of a graph's arcs, as a dense count table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcSubset {
    n: usize,
    mult: Vec<u32>,
}

impl ArcSubset {
    pub fn empty(n: usize) -> Self {
        ArcSubset {
            n,
            mult: vec![0; n * n],
        }
    }

    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u32)>,
    {
        let mut set = Self::empty(n);
        for (u, v, k) in arcs {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::LoopArc(u));
            }
            set.mult[u * n + v] += k;
        }
        Ok(set)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        self.mult[u * self.n + v]
    }

    pub fn set_multiplicity(&mut self, u: usize, v: usize, k: u32) {
        self.mult[u * self.n + v] = k;
    }

    /// `|T|`, counting multiplicity.
    pub fn cardinality(&self) -> u64 {
        self.mult.iter().map(|&k| u64::from(k)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.iter().all(|&k| k == 0)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        let n = self.n;
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(move |(i, &k)| (i / n, i % n, k))
    }

    pub fn indegree(&self) -> ChipDistribution {
        let mut indeg = vec![0i64; self.n];
        for (_, v, k) in self.arcs() {
            indeg[v] += i64::from(k);
        }
        ChipDistribution::new(indeg)
    }

    pub fn is_subset_of(&self, other: &ArcSubset) -> bool {
        self.n == other.n && self.mult.iter().zip(&other.mult).all(|(a, b)| a <= b)
    }

    /// `u v [k]` lines, matching the graph file grammar.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (u, v, k) in self.arcs() {
            write_arc_line(&mut out, u, v, k);
        }
        out
    }
}

/// Integer Laplacian, `L(u,v) = -d+(v)` on the diagonal and `m(v,u)` off it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplacianMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl LaplacianMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.n + col]
    }

    pub fn column(&self, col: usize) -> Vec<i64> {
        (0..self.n).map(|row| self.get(row, col)).collect()
    }

    pub fn row(&self, row: usize) -> &[i64] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    /// `L z`.
    pub fn apply(&self, z: &[i64]) -> ChipDistribution {
        assert_eq!(z.len(), self.n, "length mismatch");
        ChipDistribution::new(
            (0..self.n)
                .map(|row| self.row(row).iter().zip(z).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }
}

/// Parses the graph text format:
///
/// ```text
/// digraph 3        # or `undirected N`
/// 0 1
/// 1 2 2            # two parallel arcs
/// ```
pub fn parse_graph(text: &str) -> Result<MultiDigraph> {
    let mut header: Option<(bool, usize)> = None;
    let mut arcs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        match header {
            None => {
                let undirected = match fields[0] {
                    "digraph" => false,
                    "undirected" => true,
                    other => {
                        return Err(parse_err(format!(
                            "expected `digraph N` or `undirected N`, found `{other}`"
                        )))
                    }
                };
                if fields.len() != 2 {
                    return Err(parse_err("header takes exactly one vertex count".into()));
                }
                let n = fields[1]
                    .parse::<usize>()
                    .map_err(|_| parse_err(format!("bad vertex count `{}`", fields[1])))?;
                header = Some((undirected, n));
            }
            Some((_, n)) => {
                if !(2..=3).contains(&fields.len()) {
                    return Err(parse_err("expected `u v [k]`".into()));
                }
                let num = |s: &str, what: &str| {
                    s.parse::<usize>()
                        .map_err(|_| parse_err(format!("bad {what} `{s}`")))
                };
                let u = num(fields[0], "vertex")?;
                let v = num(fields[1], "vertex")?;
                let k = match fields.get(2) {
                    Some(s) => s
                        .parse::<u32>()
                        .map_err(|_| parse_err(format!("bad multiplicity `{s}`")))?,
                    None => 1,
                };
                if u >= n || v >= n {
                    return Err(parse_err(format!("vertex out of range 0..{n}")));
                }
                if u == v {
                    return Err(parse_err(format!("loop at vertex {u}")));
                }
                arcs.push((u, v, k));
            }
        }
    }
    match header {
        None => Err(Error::Parse {
            line: 0,
            message: "missing `digraph N` / `undirected N` header".into(),
        }),
        Some((true, n)) => MultiDigraph::from_undirected(n, arcs),
        Some((false, n)) => MultiDigraph::new(n, arcs),
    }
}

impl FromStr for MultiDigraph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_graph(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn directed_cycle_degrees() {
        let c3 = MultiDigraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(c3.out_degrees(), &[1, 1, 1]);
        assert!(c3.is_strongly_connected());
        assert!(c3.is_eulerian());
        assert!(!c3.is_bidirected());
    }

    #[test]
    fn g2_and_g3_degrees() {
        let g2 = fixtures::g2();
        assert_eq!(g2.out_degrees(), &[2, 2, 1, 1]);
        assert!(g2.is_eulerian());
        assert!(!g2.is_bidirected());

        let g3 = fixtures::g3();
        assert_eq!(g3.out_degrees(), &[2, 1, 2, 3]);
        assert_eq!(g3.arc_count(), 8);
        assert!(!g3.is_eulerian());
        assert_eq!(g3.termination_bound(), 4);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            MultiDigraph::from_arcs(2, &[(1, 1)]),
            Err(Error::LoopArc(1))
        );
        assert_eq!(
            MultiDigraph::from_arcs(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        );
        assert_eq!(
            MultiDigraph::from_undirected(3, [(2, 2, 1)]),
            Err(Error::LoopArc(2))
        );
    }

    #[test]
    fn strong_connectivity() {
        let one_way = MultiDigraph::from_arcs(2, &[(0, 1)]).unwrap();
        assert!(!one_way.is_strongly_connected());
        assert_eq!(
            one_way.require_strongly_connected(),
            Err(Error::NotStronglyConnected)
        );
        assert!(fixtures::g1().is_strongly_connected());
    }

    #[test]
    fn undirected_construction() {
        let path = MultiDigraph::from_undirected(2, [(0, 1, 1)]).unwrap();
        assert_eq!(path.multiplicity(0, 1), 1);
        assert_eq!(path.multiplicity(1, 0), 1);
        let tri = MultiDigraph::from_undirected(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        assert_eq!(tri.arc_count(), 6);
        assert_eq!(tri.out_degrees(), &[2, 2, 2]);
        assert!(tri.is_bidirected() && tri.is_eulerian());
        assert_eq!(tri.undirected_edge_count(), Some(3));
        assert_eq!(fixtures::g2().undirected_edge_count(), None);
    }

    #[test]
    fn laplacian_columns() {
        let c3 = fixtures::directed_cycle(3);
        let l = c3.laplacian();
        assert_eq!(l.column(0), vec![-1, 1, 0]);
        assert_eq!(l.column(1), vec![0, -1, 1]);
        assert_eq!(l.column(2), vec![1, 0, -1]);

        let k2 = fixtures::bidirected_k2();
        let l = k2.laplacian();
        assert_eq!(l.row(0), &[-1, 1]);
        assert_eq!(l.row(1), &[1, -1]);

        assert_eq!(fixtures::g2().laplacian().column(0), vec![-2, 1, 0, 1]);
    }

    #[test]
    fn indegree_of_subsets() {
        let c3 = fixtures::directed_cycle(3);
        assert_eq!(
            c3.subgraph_indegree(&ArcSubset::empty(3)).unwrap(),
            ChipDistribution::zeros(3)
        );
        assert_eq!(
            c3.subgraph_indegree(&c3.all_arcs()).unwrap(),
            c3.in_degree_vector()
        );
        let t = ArcSubset::from_arcs(3, [(2, 0, 1)]).unwrap();
        assert_eq!(
            c3.subgraph_indegree(&t).unwrap(),
            ChipDistribution::from([1, 0, 0])
        );
        let bogus = ArcSubset::from_arcs(3, [(0, 2, 1)]).unwrap();
        assert_eq!(c3.subgraph_indegree(&bogus), Err(Error::NotASubset(0, 2)));
    }

    #[test]
    fn acyclic_after_modification() {
        let c3 = fixtures::directed_cycle(3);
        let none = ArcSubset::empty(3);
        let back = ArcSubset::from_arcs(3, [(2, 0, 1)]).unwrap();
        assert!(c3.is_acyclic_after(&none, &back).unwrap());
        assert!(c3.is_acyclic_after(&back, &none).unwrap());
        assert!(!c3.is_acyclic_after(&none, &none).unwrap());
        assert_eq!(
            c3.is_acyclic_after(&back, &back),
            Err(Error::OverlappingArcSets(2, 0))
        );
    }

    #[test]
    fn parser_accepts_comments_and_multiplicities() {
        let g: MultiDigraph = "# G3\ndigraph 4\n0 1\n0 3\n1 0\n2 1 2  # doubled\n\n3 2 2\n3 0\n"
            .parse()
            .unwrap();
        assert_eq!(g, fixtures::g3());
        let u: MultiDigraph = "undirected 3\n0 1\n1 2\n".parse().unwrap();
        assert!(u.is_bidirected());
        assert_eq!(u.undirected_edge_count(), Some(2));
    }

    #[test]
    fn parser_reports_line_numbers() {
        let err = parse_graph("digraph 2\n0 1\n1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_graph("graph 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_graph("digraph 2\n0 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(matches!(
            parse_graph("# nothing\n"),
            Err(Error::Parse { line: 0, .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        for g in [
            fixtures::g1(),
            fixtures::g2(),
            fixtures::g3(),
            fixtures::bidirected_k3(),
        ] {
            assert_eq!(parse_graph(&g.to_text()).unwrap(), g);
        }
    }
}
