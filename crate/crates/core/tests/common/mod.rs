//! Independent oracles shared by the integration tests. None of these call
//! the lattice, the engine or the arc-set algorithms under test.
#![allow(dead_code, clippy::needless_range_loop)]

use chipfire::chips::compositions;
use chipfire::engine::{play, LowestIndex};
use chipfire::{ChipDistribution, MultiDigraph, Outcome};
use proptest::prelude::*;

/// Strongly connected: the cycle `0 -> 1 -> ... -> 0` plus random arcs.
pub fn strong_digraph(
    min_n: usize,
    max_n: usize,
    max_extra: usize,
) -> impl Strategy<Value = MultiDigraph> {
    (min_n..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec(1u32..=2, n),
            prop::collection::vec((0..n, 0..n), 0..=max_extra),
        )
            .prop_map(move |(cycle, extra)| {
                let mut arcs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, cycle[i])).collect();
                arcs.extend(
                    extra
                        .into_iter()
                        .filter(|&(u, v)| u != v)
                        .map(|(u, v)| (u, v, 1)),
                );
                MultiDigraph::new(n, arcs).unwrap()
            })
    })
}

/// Termination by plain simulation of one legal game.
pub fn simulate_nonterminating(g: &MultiDigraph, x: &ChipDistribution) -> bool {
    let trace = play(g, x, &mut LowestIndex, None).unwrap();
    matches!(trace.outcome, Outcome::CycleDetected { .. })
}

/// Least degree of a non-negative `a` with `x + a` non-terminating.
pub fn brute_force_dist(g: &MultiDigraph, x: &ChipDistribution) -> u64 {
    (0u64..)
        .find(|&d| compositions(g.vertex_count(), d).any(|a| simulate_nonterminating(g, &(x + &a))))
        .unwrap()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Q(i128, i128);

impl Q {
    fn int(a: i64) -> Q {
        Q(a as i128, 1)
    }
    fn norm(self) -> Q {
        let g = gcd(self.0, self.1).max(1);
        let s = if self.1 < 0 { -1 } else { 1 };
        Q(s * self.0 / g, s * self.1 / g)
    }
    fn sub(self, o: Q) -> Q {
        Q(self.0 * o.1 - o.0 * self.1, self.1 * o.1).norm()
    }
    fn mul(self, o: Q) -> Q {
        Q(self.0 * o.0, self.1 * o.1).norm()
    }
    fn div(self, o: Q) -> Q {
        Q(self.0 * o.1, self.1 * o.0).norm()
    }
    fn is_zero(self) -> bool {
        self.0 == 0
    }
}

fn det(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut acc = Q(1, 1);
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q(0, 1);
        };
        if p != col {
            a.swap(col, p);
            acc = Q(-acc.0, acc.1);
        }
        acc = acc.mul(a[col][col]);
        for r in col + 1..n {
            let f = a[r][col].div(a[col][col]);
            for c in col..n {
                a[r][c] = a[r][c].sub(f.mul(a[col][c]));
            }
        }
    }
    acc
}

/// Order of the degree-zero class group: the gcd of the maximal minors of
/// the Laplacian with its last row dropped.
pub fn class_group_order(g: &MultiDigraph) -> u64 {
    let n = g.vertex_count();
    if n == 1 {
        return 1;
    }
    let mut acc = 0i128;
    for skip in 0..n {
        let m = (0..n - 1)
            .map(|u| {
                (0..n)
                    .filter(|&v| v != skip)
                    .map(|v| Q::int(laplacian_entry(g, u, v)))
                    .collect()
            })
            .collect();
        let d = det(m);
        assert_eq!(d.1, 1);
        acc = gcd(acc, d.0);
    }
    acc as u64
}

/// Unique rational solution of `A z = b` for square invertible `A`.
fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Vec<Q> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("invertible");
        a.swap(col, p);
        b.swap(col, p);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].div(a[col][col]);
                for c in col..n {
                    a[r][c] = a[r][c].sub(f.mul(a[col][c]));
                }
                b[r] = b[r].sub(f.mul(b[col]));
            }
        }
    }
    (0..n).map(|i| b[i].div(a[i][i])).collect()
}

fn laplacian_entry(g: &MultiDigraph, u: usize, v: usize) -> i64 {
    if u == v {
        -g.out_degrees()[v]
    } else {
        i64::from(g.multiplicity(v, u))
    }
}

/// Positive primitive kernel vector of the Laplacian, from the rational
/// solution with last coordinate fixed to 1.
pub fn period_vector(g: &MultiDigraph) -> Vec<i64> {
    let n = g.vertex_count();
    if n == 1 {
        return vec![1];
    }
    let a = (0..n - 1)
        .map(|u| {
            (0..n - 1)
                .map(|v| Q::int(laplacian_entry(g, u, v)))
                .collect()
        })
        .collect();
    let b = (0..n - 1)
        .map(|u| Q::int(-laplacian_entry(g, u, n - 1)))
        .collect();
    let mut z = solve(a, b);
    z.push(Q(1, 1));
    let lcm = z.iter().fold(1i128, |l, q| l / gcd(l, q.1) * q.1);
    let ints: Vec<i128> = z.iter().map(|q| q.0 * (lcm / q.1)).collect();
    let g0 = ints.iter().fold(0, |acc, &x| gcd(acc, x));
    ints.iter().map(|&x| (x / g0) as i64).collect()
}

/// Whether `w` is an integer combination of Laplacian columns.
pub fn in_laplacian_image(g: &MultiDigraph, w: &[i64]) -> bool {
    let n = g.vertex_count();
    if w.iter().sum::<i64>() != 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    // Rows 0..n-1 determine the system once degree zero holds. Fix z_last = 0;
    // the general solution is z0 + t r.
    let a = (0..n - 1)
        .map(|u| {
            (0..n - 1)
                .map(|v| Q::int(laplacian_entry(g, u, v)))
                .collect()
        })
        .collect();
    let b = (0..n - 1).map(|u| Q::int(w[u])).collect();
    let mut z0 = solve(a, b);
    z0.push(Q(0, 1));
    let r = period_vector(g);
    let r_last = r[n - 1] as i128;
    (0..r_last).any(|k| {
        z0.iter()
            .zip(&r)
            .all(|(q, &ri)| (q.0 * r_last + q.1 * k * ri as i128) % (q.1 * r_last) == 0)
    })
}

pub fn equivalent(g: &MultiDigraph, x: &ChipDistribution, y: &ChipDistribution) -> bool {
    in_laplacian_image(g, (x - y).as_slice())
}

/// `f ~ e` for some non-negative `e`, by scanning all `e` of degree `deg f`.
pub fn equi_effective(g: &MultiDigraph, f: &ChipDistribution) -> bool {
    let d = f.degree();
    d >= 0 && compositions(g.vertex_count(), d as u64).any(|e| equivalent(g, f, &e))
}

/// Largest `r` such that `f - e` is equi-effective for every non-negative
/// `e` of degree `r`; `-1` if `f` itself is not.
pub fn definitional_rank(g: &MultiDigraph, f: &ChipDistribution) -> i64 {
    let mut r = -1;
    loop {
        let next = r + 1;
        let ok = compositions(g.vertex_count(), next as u64).all(|e| equi_effective(g, &(f - &e)));
        if !ok {
            return r;
        }
        r = next;
    }
}

/// Spanning arborescences oriented towards `root`, by trying every choice
/// of one out-arc copy per non-root vertex.
pub fn in_arborescences(g: &MultiDigraph, root: usize) -> u64 {
    let n = g.vertex_count();
    let others: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let mut total = 0;
    let mut parent = vec![usize::MAX; n];
    fn rec(
        g: &MultiDigraph,
        root: usize,
        others: &[usize],
        i: usize,
        parent: &mut Vec<usize>,
        weight: u64,
        total: &mut u64,
    ) {
        if i == others.len() {
            let reaches = others.iter().all(|&v| {
                let mut cur = v;
                for _ in 0..parent.len() {
                    if cur == root {
                        return true;
                    }
                    cur = parent[cur];
                }
                cur == root
            });
            if reaches {
                *total += weight;
            }
            return;
        }
        let v = others[i];
        for w in 0..g.vertex_count() {
            let k = g.multiplicity(v, w);
            if k > 0 {
                parent[v] = w;
                rec(g, root, others, i + 1, parent, weight * u64::from(k), total);
            }
        }
    }
    rec(g, root, &others, 0, &mut parent, 1, &mut total);
    total
}

/// Reachability closure by Floyd–Warshall.
pub fn strongly_connected(g: &MultiDigraph) -> bool {
    let n = g.vertex_count();
    let mut reach: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| u == v || g.multiplicity(u, v) > 0).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    reach.iter().all(|row| row.iter().all(|&b| b))
}

/// Every arc copy as a separate item, so sub-multisets become subsets.
pub fn arc_copies(g: &MultiDigraph) -> Vec<(usize, usize)> {
    g.arcs()
        .flat_map(|(u, v, k)| std::iter::repeat_n((u, v), k as usize))
        .collect()
}

/// Acyclicity of the graph on `0..n` with the given arcs, by repeatedly
/// deleting sinks.
pub fn acyclic(n: usize, arcs: &[(usize, usize)]) -> bool {
    let mut alive = vec![true; n];
    loop {
        let sink = (0..n).find(|&v| alive[v] && !arcs.iter().any(|&(a, b)| a == v && alive[b]));
        match sink {
            Some(v) => alive[v] = false,
            None => return alive.iter().all(|&a| !a),
        }
    }
}

/// Minimum number of arc copies whose deletion (or, with `reverse`,
/// reversal) leaves the graph acyclic, over all subsets of copies.
pub fn brute_force_min_arc_set(g: &MultiDigraph, reverse: bool) -> u64 {
    let copies = arc_copies(g);
    let n = g.vertex_count();
    let mut best = u64::MAX;
    for mask in 0u32..1 << copies.len() {
        let size = u64::from(mask.count_ones());
        if size >= best {
            continue;
        }
        let arcs: Vec<(usize, usize)> = copies
            .iter()
            .enumerate()
            .filter_map(|(i, &(u, v))| {
                if mask >> i & 1 == 0 {
                    Some((u, v))
                } else if reverse {
                    Some((v, u))
                } else {
                    None
                }
            })
            .collect();
        if acyclic(n, &arcs) {
            best = size;
        }
    }
    best
}
