//! Deciding the Riemann–Roch and natural Riemann–Roch properties, and
//! checking the undirected identity and Eulerian bounds numerically.
//!
//! A graph has the Riemann–Roch property with canonical distribution `K`
//! and offset `t` when `dist(x) - dist(K - x) = t - deg(x)` for every `x`.
//! The decision reduces this to the finite set of minimally non-terminating
//! (MNT) classes: all of them must have degree `dist(0)`, and `x -> K - x`
//! must map MNT classes to MNT classes.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::arcset;
use crate::chips::{composition_count, compositions, ChipDistribution};
use crate::engine::{ChipEngine, Termination};
use crate::error::{Error, Result};
use crate::graph::MultiDigraph;
use crate::lattice::{LaplacianLattice, DEFAULT_CLASS_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Cap on non-negative candidate vectors scanned during MNT enumeration.
    pub max_candidates: u64,
    /// Cap on the class group order for explicit class walks.
    pub max_classes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_candidates: 5_000_000,
            max_classes: DEFAULT_CLASS_LIMIT,
        }
    }
}

/// A minimally non-terminating class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MntClass {
    pub degree: i64,
    /// Canonical lattice representative.
    pub representative: ChipDistribution,
    /// A non-negative member of the class.
    pub effective_member: ChipDistribution,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RrFailure {
    /// MNT classes occur at several degrees (or at a degree other than `dist(0)`).
    DegreeSpread { degrees: Vec<i64> },
    /// `|E| != 2 dist(0)`; only reported by the natural check.
    ArcCountMismatch { arcs: u64, dist0: u64 },
    /// No `K` maps MNT classes onto MNT classes.
    NoPairingK,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RrReport {
    pub holds: bool,
    /// `dist(0)`, the offset of the formula.
    pub t: u64,
    #[serde(rename = "K")]
    pub k: Option<ChipDistribution>,
    /// Every valid `K` found, when requested.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub k_candidates: Vec<ChipDistribution>,
    pub mnt: Vec<MntClass>,
    pub failure_reason: Option<RrFailure>,
}

/// Divisor-theoretic queries on one strongly connected digraph, sharing a
/// lattice, a termination engine and a per-class verdict memo.
pub struct DivisorTheory<'g> {
    graph: &'g MultiDigraph,
    lattice: LaplacianLattice,
    engine: ChipEngine<'g>,
    class_memo: HashMap<ChipDistribution, Termination>,
    limits: SearchLimits,
    dist0: Option<u64>,
    mnt: Option<Vec<MntClass>>,
}

impl<'g> DivisorTheory<'g> {
    pub fn new(graph: &'g MultiDigraph) -> Result<Self> {
        Self::with_limits(graph, SearchLimits::default())
    }

    pub fn with_limits(graph: &'g MultiDigraph, limits: SearchLimits) -> Result<Self> {
        let engine = ChipEngine::new(graph)?;
        let lattice = LaplacianLattice::new(&graph.laplacian())?;
        Ok(DivisorTheory {
            graph,
            lattice,
            engine,
            class_memo: HashMap::new(),
            limits,
            dist0: None,
            mnt: None,
        })
    }

    pub fn graph(&self) -> &'g MultiDigraph {
        self.graph
    }

    pub fn lattice(&self) -> &LaplacianLattice {
        &self.lattice
    }

    pub fn engine(&mut self) -> &mut ChipEngine<'g> {
        &mut self.engine
    }

    /// Termination verdict, memoized per linear equivalence class.
    pub fn decide(&mut self, x: &ChipDistribution) -> Result<Termination> {
        let key = self.lattice.canonical_rep(x);
        if let Some(&t) = self.class_memo.get(&key) {
            return Ok(t);
        }
        let t = self.engine.decide(x)?;
        self.class_memo.insert(key, t);
        Ok(t)
    }

    pub fn dist(&mut self, x: &ChipDistribution) -> Result<u64> {
        self.engine.dist(x)
    }

    pub fn dist0(&mut self) -> Result<u64> {
        if let Some(d) = self.dist0 {
            return Ok(d);
        }
        let d = self
            .engine
            .dist(&ChipDistribution::zeros(self.graph.vertex_count()))?;
        self.dist0 = Some(d);
        Ok(d)
    }

    /// Non-terminating, and removing any single chip makes it terminate.
    pub fn is_minimally_nonterminating(&mut self, x: &ChipDistribution) -> Result<bool> {
        if self.decide(x)?.is_terminating() {
            return Ok(false);
        }
        for v in 0..self.graph.vertex_count() {
            let y = x - &ChipDistribution::unit(x.len(), v);
            if !self.decide(&y)?.is_terminating() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Admissible MNT degrees: `dist(0) ..= |E| - |V| + 1`.
    fn mnt_degree_range(&mut self) -> Result<std::ops::RangeInclusive<i64>> {
        let lo = self.dist0()? as i64;
        let hi = self.graph.termination_bound() + 1;
        Ok(lo..=hi)
    }

    /// Every MNT class, sorted by degree then canonical representative.
    ///
    /// Every non-terminating class has a non-negative member, so scanning
    /// non-negative vectors of each admissible degree reaches all classes.
    pub fn enumerate_mnt_classes(&mut self) -> Result<Vec<MntClass>> {
        if let Some(m) = &self.mnt {
            return Ok(m.clone());
        }
        let n = self.graph.vertex_count();
        let range = self.mnt_degree_range()?;
        let total: u64 = range
            .clone()
            .map(|d| composition_count(n, d.max(0) as u64))
            .fold(0u64, u64::saturating_add);
        if total > self.limits.max_candidates {
            return Err(Error::SizeLimitExceeded {
                what: "MNT candidate vectors",
                limit: self.limits.max_candidates,
                actual: total,
            });
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for d in range {
            if d < 0 {
                continue;
            }
            for y in compositions(n, d as u64) {
                let key = self.lattice.canonical_rep(&y);
                if !seen.insert(key.clone()) {
                    continue;
                }
                if self.is_minimally_nonterminating(&y)? {
                    out.push(MntClass {
                        degree: d,
                        representative: key,
                        effective_member: y,
                    });
                }
            }
        }
        out.sort();
        self.mnt = Some(out.clone());
        Ok(out)
    }

    /// Independent MNT enumeration: walk every class of each admissible
    /// degree through the lattice, move non-terminating representatives to a
    /// non-negative member by legal play, and test that member.
    pub fn enumerate_mnt_classes_by_class_walk(&mut self) -> Result<Vec<MntClass>> {
        let range = self.mnt_degree_range()?;
        let mut out = Vec::new();
        for d in range {
            let classes = self
                .lattice
                .enumerate_classes_with_limit(d, self.limits.max_classes)?;
            for rep in classes {
                let Some(member) = self.engine.nonnegative_equivalent(&rep)? else {
                    continue;
                };
                if self.is_minimally_nonterminating(&member)? {
                    out.push(MntClass {
                        degree: d,
                        representative: rep,
                        effective_member: member,
                    });
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn mnt_keys(&mut self) -> Result<BTreeSet<ChipDistribution>> {
        Ok(self
            .enumerate_mnt_classes()?
            .into_iter()
            .map(|c| c.representative)
            .collect())
    }

    /// `K - x` is MNT for every MNT `x`.
    fn pairs_mnt_classes(&self, k: &ChipDistribution, keys: &BTreeSet<ChipDistribution>) -> bool {
        keys.iter()
            .all(|rep| keys.contains(&self.lattice.canonical_rep(&(k - rep))))
    }

    fn degree_failure(&mut self) -> Result<Option<RrFailure>> {
        let t = self.dist0()? as i64;
        let mnt = self.enumerate_mnt_classes()?;
        let degrees: BTreeSet<i64> = mnt.iter().map(|c| c.degree).collect();
        if degrees.iter().any(|&d| d != t) {
            return Ok(Some(RrFailure::DegreeSpread {
                degrees: degrees.into_iter().collect(),
            }));
        }
        Ok(None)
    }

    /// Decides the Riemann–Roch property.
    ///
    /// Candidates for `K` are `rep(c0) + rep(c)` over MNT classes `c` for a
    /// fixed first class `c0`: the pairing at `c0` forces `K - rep(c0)` to be
    /// MNT. Candidates are tried in canonical lexicographic order.
    pub fn rr_check(&mut self, all_candidates: bool) -> Result<RrReport> {
        let t = self.dist0()?;
        let mnt = self.enumerate_mnt_classes()?;
        let mut report = RrReport {
            holds: false,
            t,
            k: None,
            k_candidates: Vec::new(),
            mnt: mnt.clone(),
            failure_reason: None,
        };
        if let Some(failure) = self.degree_failure()? {
            report.failure_reason = Some(failure);
            return Ok(report);
        }
        let keys = self.mnt_keys()?;
        let Some(first) = keys.iter().next().cloned() else {
            report.failure_reason = Some(RrFailure::NoPairingK);
            return Ok(report);
        };
        let candidates: BTreeSet<ChipDistribution> = keys
            .iter()
            .map(|rep| self.lattice.canonical_rep(&(&first + rep)))
            .collect();
        for k in candidates {
            if self.pairs_mnt_classes(&k, &keys) {
                if report.k.is_none() {
                    report.k = Some(k.clone());
                }
                report.k_candidates.push(k);
                if !all_candidates {
                    break;
                }
            }
        }
        if !all_candidates {
            report.k_candidates.clear();
        }
        report.holds = report.k.is_some();
        if !report.holds {
            report.failure_reason = Some(RrFailure::NoPairingK);
        }
        Ok(report)
    }

    /// Riemann–Roch with `K = d+` and `t = |E| / 2`.
    pub fn natural_rr_check(&mut self) -> Result<RrReport> {
        let t = self.dist0()?;
        let mnt = self.enumerate_mnt_classes()?;
        let mut report = RrReport {
            holds: false,
            t,
            k: None,
            k_candidates: Vec::new(),
            mnt,
            failure_reason: None,
        };
        if let Some(failure) = self.degree_failure()? {
            report.failure_reason = Some(failure);
            return Ok(report);
        }
        let arcs = self.graph.arc_count();
        if arcs != 2 * t {
            report.failure_reason = Some(RrFailure::ArcCountMismatch { arcs, dist0: t });
            return Ok(report);
        }
        let k = self.graph.out_degree_vector();
        let keys = self.mnt_keys()?;
        if self.pairs_mnt_classes(&k, &keys) {
            report.holds = true;
            report.k = Some(k);
        } else {
            report.failure_reason = Some(RrFailure::NoPairingK);
        }
        Ok(report)
    }
}

pub fn enumerate_mnt_classes(graph: &MultiDigraph) -> Result<Vec<MntClass>> {
    DivisorTheory::new(graph)?.enumerate_mnt_classes()
}

pub fn rr_check(graph: &MultiDigraph) -> Result<RrReport> {
    DivisorTheory::new(graph)?.rr_check(false)
}

pub fn natural_rr_check(graph: &MultiDigraph) -> Result<RrReport> {
    DivisorTheory::new(graph)?.natural_rr_check()
}

/// One evaluation of an identity `lhs == rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub x: ChipDistribution,
    pub lhs: i64,
    pub rhs: i64,
    pub passed: bool,
}

/// One evaluation of `lower <= value <= upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub x: ChipDistribution,
    pub lower: i64,
    pub value: i64,
    pub upper: i64,
    pub passed: bool,
}

/// `dist(x) - dist(d - x) = m - deg(x)` on an undirected graph, with `m` the
/// number of undirected edges.
pub fn verify_undirected_rr(
    graph: &MultiDigraph,
    xs: &[ChipDistribution],
) -> Result<Vec<IdentityCheck>> {
    let m = graph.undirected_edge_count().ok_or(Error::NotBidirected)? as i64;
    let mut engine = ChipEngine::new(graph)?;
    let d = graph.out_degree_vector();
    xs.iter()
        .map(|x| {
            let lhs = engine.dist(x)? as i64 - engine.dist(&(&d - x))? as i64;
            let rhs = m - x.degree();
            Ok(IdentityCheck {
                x: x.clone(),
                lhs,
                rhs,
                passed: lhs == rhs,
            })
        })
        .collect()
}

/// `minfas - deg(x) <= dist(x) - dist(d- - x) <= |E| - minfas - deg(x)` on an
/// Eulerian digraph, with `|E|` the arc count.
pub fn verify_eulerian_weak_rr(
    graph: &MultiDigraph,
    xs: &[ChipDistribution],
) -> Result<Vec<BoundCheck>> {
    if !graph.is_eulerian() {
        return Err(Error::NotEulerian);
    }
    let mut engine = ChipEngine::new(graph)?;
    let minfas = arcset::minfas(graph)? as i64;
    let arcs = graph.arc_count() as i64;
    let d_in = graph.in_degree_vector();
    xs.iter()
        .map(|x| {
            let value = engine.dist(x)? as i64 - engine.dist(&(&d_in - x))? as i64;
            let lower = minfas - x.degree();
            let upper = arcs - minfas - x.degree();
            Ok(BoundCheck {
                x: x.clone(),
                lower,
                value,
                upper,
                passed: lower <= value && value <= upper,
            })
        })
        .collect()
}

/// Evaluates `dist(x) - dist(K - x) = t - deg(x)` with the `K` and `t` of a
/// positive report.
pub fn rr_formula_spot_check(
    graph: &MultiDigraph,
    report: &RrReport,
    xs: &[ChipDistribution],
) -> Result<Vec<IdentityCheck>> {
    let k = report
        .k
        .as_ref()
        .filter(|_| report.holds)
        .expect("spot check needs a report with holds = true");
    let t = report.t as i64;
    let mut engine = ChipEngine::new(graph)?;
    xs.iter()
        .map(|x| {
            let lhs = engine.dist(x)? as i64 - engine.dist(&(k - x))? as i64;
            let rhs = t - x.degree();
            Ok(IdentityCheck {
                x: x.clone(),
                lhs,
                rhs,
                passed: lhs == rhs,
            })
        })
        .collect()
}
