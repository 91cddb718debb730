//! Seeded property sweeps. Each sweep runs on one given graph or on a batch
//! of random graphs from the class the property is about, and stops
//! recording details after the first counterexample.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::arcset::{self, Orientation};
use crate::chips::{compositions, ChipDistribution};
use crate::engine::{play, ChipEngine, HighestIndex, LowestIndex, Outcome, RotatingPointer};
use crate::error::{Error, Result};
use crate::generate::{self, EulerianParams};
use crate::graph::{ArcSubset, MultiDigraph};
use crate::lattice::LaplacianLattice;
use crate::riemann_roch::{self, DivisorTheory};

/// Cap on sub-multisets visited by brute-force arc-set searches.
pub const MAX_BRUTE_FORCE_SUBSETS: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Abelian,
    DistInvariance,
    Gallai,
    MinfasTurnback,
    TurnbackCharacterization,
    AcyclicCharacterization,
    UndirectedRr,
    EulerianWeakRr,
    RrFormula,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::Abelian,
        Property::DistInvariance,
        Property::Gallai,
        Property::MinfasTurnback,
        Property::TurnbackCharacterization,
        Property::AcyclicCharacterization,
        Property::UndirectedRr,
        Property::EulerianWeakRr,
        Property::RrFormula,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Abelian => "abelian",
            Property::DistInvariance => "dist-invariance",
            Property::Gallai => "gallai",
            Property::MinfasTurnback => "minfas-turnback",
            Property::TurnbackCharacterization => "turnback-characterization",
            Property::AcyclicCharacterization => "acyclic-characterization",
            Property::UndirectedRr => "undirected-rr",
            Property::EulerianWeakRr => "eulerian-weak-rr",
            Property::RrFormula => "rr-formula",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown property `{s}`"))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    /// Sampled distributions (or pairs) per graph, where the property is
    /// not checked exhaustively.
    pub trials: usize,
    /// Random graphs to draw when no graph is given.
    pub random_graphs: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            trials: 20,
            random_graphs: 20,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub graph: String,
    pub distribution: Option<ChipDistribution>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub property: String,
    pub seed: u64,
    pub graphs: usize,
    pub checks: u64,
    pub failures: u64,
    /// Graphs outside the property's hypothesis (rr-formula only).
    pub skipped: u64,
    pub first_counterexample: Option<Counterexample>,
}

impl SweepReport {
    fn new(property: Property, seed: u64) -> Self {
        SweepReport {
            property: property.name().to_string(),
            seed,
            graphs: 0,
            checks: 0,
            failures: 0,
            skipped: 0,
            first_counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn check(
        &mut self,
        ok: bool,
        graph: &MultiDigraph,
        x: Option<&ChipDistribution>,
        detail: impl FnOnce() -> String,
    ) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(Counterexample {
                    graph: graph.to_text(),
                    distribution: x.cloned(),
                    detail: detail(),
                });
            }
        }
    }
}

/// Runs `property` on `graph`, or on `config.random_graphs` random graphs
/// when `graph` is `None`.
pub fn run_sweep(
    property: Property,
    graph: Option<&MultiDigraph>,
    config: &SweepConfig,
) -> Result<SweepReport> {
    let mut report = SweepReport::new(property, config.seed);
    match graph {
        Some(g) => {
            let mut rng = generate::trial_rng(config.seed, 0);
            check_graph(property, g, &mut rng, config.trials, &mut report)?;
        }
        None => {
            for i in 0..config.random_graphs {
                let mut rng = generate::trial_rng(config.seed, i as u64);
                let g = random_graph_for(property, &mut rng);
                check_graph(property, &g, &mut rng, config.trials, &mut report)?;
            }
        }
    }
    Ok(report)
}

/// A random graph from the class `property` is stated for.
pub fn random_graph_for<R: Rng>(property: Property, rng: &mut R) -> MultiDigraph {
    match property {
        Property::Abelian | Property::RrFormula => {
            let n = rng.gen_range(2..=4);
            generate::random_strongly_connected(rng, n, 8)
        }
        Property::DistInvariance => {
            let n = rng.gen_range(2..=5);
            generate::random_strongly_connected(rng, n, 10)
        }
        Property::Gallai | Property::MinfasTurnback => {
            let n = rng.gen_range(2..=5);
            generate::random_strongly_connected(rng, n, 10)
        }
        Property::TurnbackCharacterization => generate::random_eulerian(
            rng,
            &EulerianParams {
                max_vertices: 4,
                max_arcs: 8,
                ..EulerianParams::default()
            },
        ),
        Property::AcyclicCharacterization => {
            let n = rng.gen_range(2..=4);
            let extra = rng.gen_range(0..=2);
            generate::random_connected_undirected(rng, n, extra, true)
        }
        Property::UndirectedRr => {
            let n = rng.gen_range(2..=5);
            let extra = rng.gen_range(0..=3);
            generate::random_connected_undirected(rng, n, extra, true)
        }
        Property::EulerianWeakRr => generate::random_eulerian(rng, &EulerianParams::default()),
    }
}

fn check_graph<R: Rng>(
    property: Property,
    g: &MultiDigraph,
    rng: &mut R,
    trials: usize,
    report: &mut SweepReport,
) -> Result<()> {
    g.require_strongly_connected()?;
    report.graphs += 1;
    match property {
        Property::Abelian => check_abelian(g, rng, trials, report),
        Property::DistInvariance => check_dist_invariance(g, rng, trials, report),
        Property::Gallai => check_gallai(g, report),
        Property::MinfasTurnback => check_minfas_turnback(g, report),
        Property::TurnbackCharacterization => {
            check_turnback_characterization(g, rng, trials, report)
        }
        Property::AcyclicCharacterization => check_acyclic_characterization(g, rng, trials, report),
        Property::UndirectedRr => check_undirected_rr(g, rng, trials, report),
        Property::EulerianWeakRr => check_eulerian_weak_rr(g, rng, trials, report),
        Property::RrFormula => check_rr_formula(g, rng, trials, report),
    }
}

/// The box `{-1..=max d+}^n` when it has at most 10^4 points, otherwise
/// `trials` random points from it.
fn test_points<R: Rng>(g: &MultiDigraph, rng: &mut R, trials: usize) -> Vec<ChipDistribution> {
    let n = g.vertex_count();
    let hi = g.out_degrees().iter().copied().max().unwrap_or(0);
    let side = (hi + 2) as u64;
    let exhaustive = side
        .checked_pow(n as u32)
        .is_some_and(|size| size <= 10_000);
    if exhaustive {
        generate::box_vectors(n, -1, hi)
    } else {
        (0..trials)
            .map(|_| generate::random_distribution(rng, n, -1, hi))
            .collect()
    }
}

fn check_abelian<R: Rng>(
    g: &MultiDigraph,
    rng: &mut R,
    trials: usize,
    report: &mut SweepReport,
) -> Result<()> {
    let laplacian = g.laplacian();
    for x in test_points(g, rng, trials) {
        let traces = [
            play(g, &x, &mut LowestIndex, None)?,
            play(g, &x, &mut HighestIndex, None)?,
            play(g, &x, &mut RotatingPointer::default(), None)?,
        ];
        let verdicts: Vec<_> = traces.iter().map(|t| t.termination()).collect();
        report.check(
            verdicts.iter().all(|&v| v == verdicts[0]),
            g,
            Some(&x),
            || format!("strategies disagree on termination: {verdicts:?}"),
        );
        for t in &traces {
            let counts: Vec<i64> = t.fire_counts.iter().map(|&c| c as i64).collect();
            let end = match &t.outcome {
                Outcome::Terminated { final_state } => final_state,
                Outcome::CycleDetected { repeated_state, .. } => repeated_state,
            };
            report.check(&x + &laplacian.apply(&counts) == *end, g, Some(&x), || {
                "end state differs from x + L * fire counts".to_string()
            });
            if !t.cycle_segment().is_empty() {
                let fired: BTreeSet<usize> = t.cycle_segment().iter().copied().collect();
                report.check(fired.len() == g.vertex_count(), g, Some(&x), || {
                    format!("state cycle fires only {fired:?}")
                });
            }
        }
        if verdicts[0].is_terminating() {
            let first = &traces[0];
            for t in &traces[1..] {
                report.check(
                    t.moves() == first.moves()
                        && t.fire_counts == first.fire_counts
                        && t.outcome == first.outcome,
                    g,
                    Some(&x),
                    || {
                        format!(
                            "terminating games differ: {} moves {:?} vs {} moves {:?}",
                            first.moves(),
                            first.fire_counts,
                            t.moves(),
                            t.fire_counts
                        )
                    },
                );
            }
        }
    }
    Ok(())
}

fn check_dist_invariance<R: Rng>(
    g: &MultiDigraph,
    rng: &mut R,
    trials: usize,
    report: &mut SweepReport,
) -> Result<()> {
    let n = g.vertex_count();
    let laplacian = g.laplacian();
    let mut engine = ChipEngine::new(g)?;
    for _ in 0..trials {
        let x = generate::random_distribution(rng, n, -2, 3);
        let z: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let y = &x + &laplacian.apply(&z);
        let (tx, ty) = (engine.decide(&x)?, engine.decide(&y)?);
        let (dx, dy) = (engine.dist(&x)?, engine.dist(&y)?);
        report.check(tx == ty && dx == dy, g, Some(&x), || {
            format!("x + L*{z:?} = {y}: verdicts {tx:?}/{ty:?}, dist {dx}/{dy}")
        });
    }
    Ok(())
}

/// Every sub-multiset of the arcs, in mixed-radix order.
pub fn all_arc_subsets(graph: &MultiDigraph) -> Result<Vec<ArcSubset>> {
    let arcs: Vec<(usize, usize, u32)> = graph.arcs().collect();
    let total = arcs
        .iter()
        .try_fold(1u64, |acc, &(_, _, k)| acc.checked_mul(u64::from(k) + 1))
        .filter(|&t| t <= MAX_BRUTE_FORCE_SUBSETS)
        .ok_or(Error::SizeLimitExceeded {
            what: "arc sub-multisets",
            limit: MAX_BRUTE_FORCE_SUBSETS,
            actual: graph.arc_count(),
        })?;
    let n = graph.vertex_count();
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0u32; arcs.len()];
    loop {
        let mut s = ArcSubset::empty(n);
        for (&(u, v, _), &c) in arcs.iter().zip(&digits) {
            s.set_multiplicity(u, v, c);
        }
        out.push(s);
        let mut i = 0;
        loop {
            if i == arcs.len() {
                return Ok(out);
            }
            if digits[i] < arcs[i].2 {
                digits[i] += 1;
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn check_gallai(g: &MultiDigraph, report: &mut SweepReport) -> Result<()> {
    for fas in arcset::minimal_feedback_arc_sets(g)? {
        let ok = arcset::is_turnback_arc_set(g, &fas)?;
        report.check(ok, g, None, || {
            format!(
                "minimal feedback arc set {{{}}} is not a turnback set",
                fas.to_text()
            )
        });
    }
    Ok(())
}

fn check_minfas_turnback(g: &MultiDigraph, report: &mut SweepReport) -> Result<()> {
    let mut best_fas = u64::MAX;
    let mut best_turnback = u64::MAX;
    for s in all_arc_subsets(g)? {
        let size = s.cardinality();
        if size < best_fas && g.is_acyclic_after(&ArcSubset::empty(g.vertex_count()), &s)? {
            best_fas = size;
        }
        if size < best_turnback && arcset::is_turnback_arc_set(g, &s)? {
            best_turnback = size;
        }
    }
    let fast = arcset::minfas(g)?;
    let (tb_size, tb) = arcset::min_turnback(g)?;
    report.check(fast == best_fas, g, None, || {
        format!("minfas {fast}, brute force {best_fas}")
    });
    report.check(best_turnback == best_fas, g, None, || {
        format!("minimum turnback {best_turnback} differs from minimum feedback {best_fas}")
    });
    let tb_ok =
        tb_size == fast && tb.cardinality() == tb_size && arcset::is_turnback_arc_set(g, &tb)?;
    report.check(tb_ok, g, None, || {
        format!(
            "turnback witness {{{}}} of claimed size {tb_size} is invalid",
            tb.to_text()
        )
    });
    Ok(())
}

/// Canonical representatives of `{rho + a : rho in bases, a >= 0}` at each
/// degree in `degrees`. A class is non-terminating iff it is listed, by the
/// characterization under test, so this oracle never runs a game.
fn dominated_classes(
    lattice: &LaplacianLattice,
    bases: &BTreeSet<ChipDistribution>,
    degrees: std::ops::RangeInclusive<i64>,
) -> Vec<(i64, HashSet<ChipDistribution>)> {
    let n = lattice.dim();
    let full = lattice.pic0_order() as usize;
    degrees
        .map(|deg| {
            let mut reps = HashSet::new();
            'outer: for rho in bases {
                let extra = deg - rho.degree();
                if extra < 0 {
                    continue;
                }
                for a in compositions(n, extra as u64) {
                    reps.insert(lattice.canonical_rep(&(rho + &a)));
                    if reps.len() == full {
                        break 'outer;
                    }
                }
            }
            (deg, reps)
        })
        .collect()
}

fn characterization_sweep<R: Rng>(
    g: &MultiDigraph,
    rng: &mut R,
    trials: usize,
    report: &mut SweepReport,
    bases: &BTreeSet<ChipDistribution>,
    what: &str,
    mut witness: impl FnMut(
        &mut ChipEngine<'_>,
        &ChipDistribution,
    ) -> Result<Option<(ChipDistribution, bool)>>,
) -> Result<()> {
    let lattice = LaplacianLattice::new(&g.laplacian())?;
    let points = test_points(g, rng, trials);
    let lo = points.iter().map(|x| x.degree()).min().unwrap_or(0);
    let hi = points.iter().map(|x| x.degree()).max().unwrap_or(0);
    let table = dominated_classes(&lattice, bases, lo..=hi);
    let mut engine = ChipEngine::new(g)?;
    for x in points {
        let reps = &table[(x.degree() - lo) as usize].1;
        let oracle = reps.contains(&lattice.canonical_rep(&x));
        let nonterm = !engine.decide(&x)?.is_terminating();
        report.check(oracle == nonterm, g, Some(&x), || {
            format!("engine says non-terminating={nonterm}, {what} oracle says {oracle}")
        });
        match witness(&mut engine, &x)? {
            Some((reached, valid)) => {
                let ok = nonterm && valid && lattice.equivalent(&x, &reached)?;
                report.check(ok, g, Some(&x), || {
                    format!("invalid {what} witness reaching {reached}")
                });
            }
            None => report.check(!nonterm, g, Some(&x), || {
                format!("no {what} witness for a non-terminating x")
            }),
        }
    }
    Ok(())
}

fn check_turnback_characterization<R: Rng>(
    g: &MultiDigraph,
    rng: &mut R,
    trials: usize,
    report: &mut SweepReport,
) -> Result<()> {
    if !g.is_eulerian() {
        return Err(Error::NotEulerian);
    }
    let mut bases = BTreeSet::new();
    for s in all_arc_subsets(g)? {
        if arcset::is_turnback_arc_set(g, &s)? {
            bases.insert(s.indegree());
        }
    }
    characterization_sweep(g, rng, trials, report, &bases, "turnback", |engine, x| {
        let graph = engine.graph();
        Ok(arcset::nonterm_witness_turnback_with(engine, x)?.map(|w| {
            let valid = arcset::is_turnback_arc_set(graph, &w.turnback).unwrap_or(false)
                && w.slack.is_effective()
                && w.indegree == w.turnback.indegree()
                && &w.indegree + &w.slack == w.reached;
            (w.reached, valid)
        }))
    })
}

fn check_acyclic_characterization<R: Rng>(
    g: &MultiDigraph,
    rng: &mut R,
    trials: usize,
    report: &mut SweepReport,
) -> Result<()> {
    let m = g.undirected_edge_count().ok_or(Error::NotBidirected)? as i64;
    let orientations = arcset::acyclic_orientations(g)?;
    for o in &orientations {
        report.check(o.indegree().degree() == m, g, None, || {
            format!("orientation {{{}}} has indegree sum != {m}", o.to_text())
        });
    }
    let mut engine = ChipEngine::new(g)?;
    let dist0 = engine.dist(&ChipDistribution::zeros(g.vertex_count()))? as i64;
    report.check(dist0 == m, g, None, || {
        format!("dist(0) = {dist0}, edge count {m}")
    });
    let bases: BTreeSet<ChipDistribution> =
        orientations.iter().map(Orientation::indegree).collect();
    characterization_sweep(
        g,
        rng,
        trials,
        report,
        &bases,
        "acyclic orientation",
        |engine, x| {
            Ok(
                arcset::nonterm_witness_acyclic_orientation_with(engine, x)?.map(|w| {
                    let valid = w.orientation.is_acyclic()
                        && w.slack.is_effective()
                        && &w.orientation.indegree() + &w.slack == w.reached;
                    (w.reached, valid)
                }),
            )
        },
    )
}

fn check_undirected_rr<R: Rng>(
    g: &MultiDigraph,
    rng: &mut R,
    trials: usize,
    report: &mut SweepReport,
) -> Result<()> {
    let xs: Vec<_> = (0..trials)
        .map(|_| generate::random_distribution(rng, g.vertex_count(), -1, 3))
        .collect();
    for c in riemann_roch::verify_undirected_rr(g, &xs)? {
        report.check(c.passed, g, Some(&c.x), || {
            format!("dist(x) - dist(d - x) = {}, expected {}", c.lhs, c.rhs)
        });
    }
    Ok(())
}

fn check_eulerian_weak_rr<R: Rng>(
    g: &MultiDigraph,
    rng: &mut R,
    trials: usize,
    report: &mut SweepReport,
) -> Result<()> {
    if !g.is_eulerian() {
        return Err(Error::NotEulerian);
    }
    let mut xs: Vec<_> = (0..trials)
        .map(|_| generate::random_distribution(rng, g.vertex_count(), -1, 3))
        .collect();
    let (_, turnback) = arcset::min_turnback(g)?;
    let tight_low = turnback.indegree();
    let tight_high = &g.in_degree_vector() - &tight_low;
    xs.push(tight_low.clone());
    xs.push(tight_high.clone());
    for c in riemann_roch::verify_eulerian_weak_rr(g, &xs)? {
        report.check(c.passed, g, Some(&c.x), || {
            format!("{} <= {} <= {} fails", c.lower, c.value, c.upper)
        });
        if c.x == tight_low && c.value != c.lower {
            report.check(false, g, Some(&c.x), || {
                format!("lower bound {} not attained, value {}", c.lower, c.value)
            });
        }
        if c.x == tight_high && c.value != c.upper {
            report.check(false, g, Some(&c.x), || {
                format!("upper bound {} not attained, value {}", c.upper, c.value)
            });
        }
    }
    Ok(())
}

fn check_rr_formula<R: Rng>(
    g: &MultiDigraph,
    rng: &mut R,
    trials: usize,
    report: &mut SweepReport,
) -> Result<()> {
    let mut theory = DivisorTheory::new(g)?;
    let rr = theory.rr_check(false)?;
    if !rr.holds {
        report.skipped += 1;
        return Ok(());
    }
    let k = rr.k.clone().expect("positive report carries K");
    let t = rr.t as i64;
    let dist_k = theory.dist(&k)?;
    report.check(k.degree() == 2 * t && dist_k == 0, g, Some(&k), || {
        format!("K has degree {} and dist {dist_k}, t = {t}", k.degree())
    });
    let spread: BTreeSet<i64> = rr.mnt.iter().map(|c| c.degree).collect();
    report.check(spread.iter().all(|&d| d == t), g, None, || {
        format!("MNT degrees {spread:?} differ from dist(0) = {t}")
    });
    let xs: Vec<_> = (0..trials)
        .map(|_| generate::random_distribution(rng, g.vertex_count(), -2, 4))
        .collect();
    for c in riemann_roch::rr_formula_spot_check(g, &rr, &xs)? {
        report.check(c.passed, g, Some(&c.x), || {
            format!(
                "dist(x) - dist(K - x) = {}, expected {} with K = {k}",
                c.lhs, c.rhs
            )
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn property_names_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
        assert!("nope".parse::<Property>().is_err());
    }

    #[test]
    fn subset_enumeration_counts_multiplicities() {
        let subsets = all_arc_subsets(&fixtures::g3()).unwrap();
        // Four single arcs and two doubled pairs.
        assert_eq!(subsets.len(), 2usize.pow(4) * 3 * 3);
        assert_eq!(subsets.iter().filter(|s| s.is_empty()).count(), 1);
    }

    #[test]
    fn fixture_sweeps_pass() {
        let config = SweepConfig {
            trials: 10,
            random_graphs: 0,
            seed: 1,
        };
        let c3 = fixtures::directed_cycle(3);
        for p in [
            Property::Abelian,
            Property::Gallai,
            Property::MinfasTurnback,
            Property::RrFormula,
        ] {
            let r = run_sweep(p, Some(&c3), &config).unwrap();
            assert!(r.passed() && r.checks > 0, "{r:?}");
        }
        let g2 = fixtures::g2();
        let r = run_sweep(Property::TurnbackCharacterization, Some(&g2), &config).unwrap();
        assert!(r.passed(), "{r:?}");
        let r = run_sweep(Property::EulerianWeakRr, Some(&g2), &config).unwrap();
        assert!(r.passed(), "{r:?}");
        let k3 = fixtures::bidirected_k3();
        let r = run_sweep(Property::AcyclicCharacterization, Some(&k3), &config).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn class_mismatch_is_an_error() {
        let config = SweepConfig::default();
        assert_eq!(
            run_sweep(Property::UndirectedRr, Some(&fixtures::g2()), &config),
            Err(Error::NotBidirected)
        );
        assert_eq!(
            run_sweep(Property::EulerianWeakRr, Some(&fixtures::g3()), &config),
            Err(Error::NotEulerian)
        );
    }

    #[test]
    fn counterexample_is_recorded_once() {
        let g = fixtures::g2();
        let mut r = SweepReport::new(Property::Abelian, 0);
        let x = ChipDistribution::zeros(4);
        r.check(false, &g, Some(&x), || "first".into());
        r.check(false, &g, None, || "second".into());
        assert_eq!(r.failures, 2);
        assert_eq!(r.first_counterexample.unwrap().detail, "first");
    }
}
