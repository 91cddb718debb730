//! Chip-firing games: legal play, termination, `dist`, rank and
//! equi-effectivity.
//!
//! The verdict of a game does not depend on the order of legal firings, so
//! every decision here uses the lowest-index active vertex. Chip counts in a
//! legal game stay inside a box fixed by the initial distribution, which
//! makes state repetition the complete test for non-termination.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::chips::{compositions, ChipDistribution};
use crate::error::{Error, Result};
use crate::graph::MultiDigraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Terminating,
    NonTerminating,
}

impl Termination {
    pub fn is_terminating(self) -> bool {
        self == Termination::Terminating
    }
}

/// `|E| - |V|`; every distribution of larger degree is non-terminating.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TerminationBound(pub i64);

impl TerminationBound {
    pub fn of(graph: &MultiDigraph) -> Self {
        TerminationBound(graph.termination_bound())
    }

    pub fn forces_non_termination(self, degree: i64) -> bool {
        degree > self.0
    }
}

/// Picks the next vertex to fire among the active ones.
pub trait Strategy {
    fn choose(&mut self, graph: &MultiDigraph, state: &[i64]) -> Option<usize>;
}

fn is_active(graph: &MultiDigraph, state: &[i64], v: usize) -> bool {
    state[v] >= graph.out_degrees()[v]
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LowestIndex;

impl Strategy for LowestIndex {
    fn choose(&mut self, graph: &MultiDigraph, state: &[i64]) -> Option<usize> {
        (0..state.len()).find(|&v| is_active(graph, state, v))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct HighestIndex;

impl Strategy for HighestIndex {
    fn choose(&mut self, graph: &MultiDigraph, state: &[i64]) -> Option<usize> {
        (0..state.len()).rev().find(|&v| is_active(graph, state, v))
    }
}

/// Scans cyclically from just past the previously fired vertex.
#[derive(Clone, Copy, Debug, Default)]
pub struct RotatingPointer {
    next: usize,
}

impl Strategy for RotatingPointer {
    fn choose(&mut self, graph: &MultiDigraph, state: &[i64]) -> Option<usize> {
        let n = state.len();
        let v = (0..n)
            .map(|i| (self.next + i) % n)
            .find(|&v| is_active(graph, state, v))?;
        self.next = (v + 1) % n;
        Some(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Terminated {
        #[serde(rename = "final")]
        final_state: ChipDistribution,
    },
    CycleDetected {
        repeated_state: ChipDistribution,
        /// Step index at which `repeated_state` was first seen.
        cycle_start: usize,
        cycle_length: usize,
    },
}

/// Record of a legal game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameTrace {
    pub initial: ChipDistribution,
    pub firing_sequence: Vec<usize>,
    pub fire_counts: Vec<u64>,
    pub outcome: Outcome,
}

/// Machine-readable summary of a [`GameTrace`].
#[derive(Clone, Debug, Serialize)]
pub struct GameRecord {
    pub outcome: Outcome,
    pub moves: usize,
    pub fire_counts: Vec<u64>,
}

impl GameTrace {
    pub fn moves(&self) -> usize {
        self.firing_sequence.len()
    }

    pub fn termination(&self) -> Termination {
        match self.outcome {
            Outcome::Terminated { .. } => Termination::Terminating,
            Outcome::CycleDetected { .. } => Termination::NonTerminating,
        }
    }

    /// Firings between the two visits of the repeated state.
    pub fn cycle_segment(&self) -> &[usize] {
        match self.outcome {
            Outcome::CycleDetected { cycle_start, .. } => &self.firing_sequence[cycle_start..],
            Outcome::Terminated { .. } => &[],
        }
    }

    pub fn record(&self) -> GameRecord {
        GameRecord {
            outcome: self.outcome.clone(),
            moves: self.moves(),
            fire_counts: self.fire_counts.clone(),
        }
    }

    /// One `step i: fire v -> state` line per firing.
    pub fn to_log(&self, graph: &MultiDigraph) -> String {
        let mut state = self.initial.clone();
        let mut out = String::new();
        for (i, &v) in self.firing_sequence.iter().enumerate() {
            state = fire(graph, &state, v).expect("trace replays within range");
            let _ = writeln!(out, "step {}: fire {} -> {}", i + 1, v, state);
        }
        out
    }
}

/// `x + L 1_v`, legal or not.
pub fn fire(graph: &MultiDigraph, x: &ChipDistribution, v: usize) -> Result<ChipDistribution> {
    let n = graph.vertex_count();
    x.check_len(n)?;
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    let mut state = x.clone().into_vec();
    fire_in_place(graph, &mut state, v)?;
    Ok(ChipDistribution::new(state))
}

pub(crate) fn fire_in_place(graph: &MultiDigraph, state: &mut [i64], v: usize) -> Result<()> {
    state[v] = state[v]
        .checked_sub(graph.out_degrees()[v])
        .ok_or(Error::ChipOverflow)?;
    for (w, slot) in state.iter_mut().enumerate() {
        let k = graph.multiplicity(v, w);
        if k > 0 {
            *slot = slot.checked_add(i64::from(k)).ok_or(Error::ChipOverflow)?;
        }
    }
    Ok(())
}

/// Number of distinct states a legal game from `x` can visit, plus one.
///
/// Each entry stays within `[min(0, x(v)), sum of positive parts]`.
pub fn default_step_limit(x: &ChipDistribution) -> u64 {
    let hi: i64 = x.as_slice().iter().map(|&c| c.max(0)).sum();
    let mut product: u64 = 1;
    for &c in x.as_slice() {
        let lo = c.min(0);
        let width = (hi - lo + 1) as u64;
        product = product.saturating_mul(width);
    }
    product.saturating_add(1)
}

/// Plays a legal game until it stabilizes or revisits a state.
pub fn play<S: Strategy + ?Sized>(
    graph: &MultiDigraph,
    x: &ChipDistribution,
    strategy: &mut S,
    step_limit: Option<u64>,
) -> Result<GameTrace> {
    graph.require_strongly_connected()?;
    let n = graph.vertex_count();
    x.check_len(n)?;
    let limit = step_limit.unwrap_or_else(|| default_step_limit(x));

    let mut state = x.clone().into_vec();
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut firing_sequence = Vec::new();
    let mut fire_counts = vec![0u64; n];
    loop {
        let step = firing_sequence.len();
        if let Some(&first) = seen.get(&state) {
            return Ok(GameTrace {
                initial: x.clone(),
                firing_sequence,
                fire_counts,
                outcome: Outcome::CycleDetected {
                    repeated_state: ChipDistribution::new(state),
                    cycle_start: first,
                    cycle_length: step - first,
                },
            });
        }
        let Some(v) = strategy.choose(graph, &state) else {
            return Ok(GameTrace {
                initial: x.clone(),
                firing_sequence,
                fire_counts,
                outcome: Outcome::Terminated {
                    final_state: ChipDistribution::new(state),
                },
            });
        };
        if step as u64 >= limit {
            return Err(Error::StepLimitExceeded(limit));
        }
        seen.insert(state.clone(), step);
        fire_in_place(graph, &mut state, v)?;
        firing_sequence.push(v);
        fire_counts[v] += 1;
    }
}

/// Termination oracle bound to one graph, remembering verdicts for every
/// state it has seen. All states of one legal game share the verdict.
#[derive(Debug)]
pub struct ChipEngine<'g> {
    graph: &'g MultiDigraph,
    out_arcs: Vec<Vec<(usize, i64)>>,
    bound: TerminationBound,
    cache: HashMap<Vec<i64>, Termination>,
    cache_limit: usize,
}

const DEFAULT_CACHE_LIMIT: usize = 1 << 20;

impl<'g> ChipEngine<'g> {
    pub fn new(graph: &'g MultiDigraph) -> Result<Self> {
        graph.require_strongly_connected()?;
        let n = graph.vertex_count();
        let out_arcs = (0..n)
            .map(|v| {
                (0..n)
                    .filter_map(|w| {
                        let k = graph.multiplicity(v, w);
                        (k > 0).then_some((w, i64::from(k)))
                    })
                    .collect()
            })
            .collect();
        Ok(ChipEngine {
            graph,
            out_arcs,
            bound: TerminationBound::of(graph),
            cache: HashMap::new(),
            cache_limit: DEFAULT_CACHE_LIMIT,
        })
    }

    pub fn graph(&self) -> &'g MultiDigraph {
        self.graph
    }

    fn step(&self, state: &mut [i64], v: usize) -> Result<()> {
        let d = self.graph.out_degrees()[v];
        state[v] = state[v].checked_sub(d).ok_or(Error::ChipOverflow)?;
        for &(w, k) in &self.out_arcs[v] {
            state[w] = state[w].checked_add(k).ok_or(Error::ChipOverflow)?;
        }
        Ok(())
    }

    fn lowest_active(&self, state: &[i64]) -> Option<usize> {
        let d = self.graph.out_degrees();
        (0..state.len()).find(|&v| state[v] >= d[v])
    }

    pub fn decide(&mut self, x: &ChipDistribution) -> Result<Termination> {
        x.check_len(self.graph.vertex_count())?;
        if self.bound.forces_non_termination(x.degree()) {
            return Ok(Termination::NonTerminating);
        }
        if let Some(&t) = self.cache.get(x.as_slice()) {
            return Ok(t);
        }
        let limit = default_step_limit(x);
        let mut state = x.as_slice().to_vec();
        let mut visited: Vec<Vec<i64>> = Vec::new();
        let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
        let verdict = loop {
            if let Some(&t) = self.cache.get(&state) {
                break t;
            }
            if seen.contains_key(&state) {
                break Termination::NonTerminating;
            }
            let Some(v) = self.lowest_active(&state) else {
                visited.push(state.clone());
                break Termination::Terminating;
            };
            if visited.len() as u64 >= limit {
                return Err(Error::StepLimitExceeded(limit));
            }
            seen.insert(state.clone(), ());
            visited.push(state.clone());
            self.step(&mut state, v)?;
        };
        if self.cache.len() + visited.len() > self.cache_limit {
            self.cache.clear();
        }
        for s in visited {
            self.cache.insert(s, verdict);
        }
        Ok(verdict)
    }

    /// Minimum number of chips, added non-negatively, that makes `x`
    /// non-terminating.
    pub fn dist(&mut self, x: &ChipDistribution) -> Result<u64> {
        if !self.decide(x)?.is_terminating() {
            return Ok(0);
        }
        let n = self.graph.vertex_count();
        let max_extra = (self.bound.0 + 1 - x.degree()).max(0) as u64;
        for d in 1..=max_extra {
            for y in compositions(n, d) {
                if !self.decide(&(x + &y))?.is_terminating() {
                    return Ok(d);
                }
            }
        }
        // deg(x) + max_extra > |E| - |V|, so the loop always returns.
        unreachable!("distribution above the termination bound was judged terminating")
    }

    /// `rank(f) = dist(d+ - 1 - f) - 1`.
    pub fn rank(&mut self, f: &ChipDistribution) -> Result<i64> {
        let dual = self.dual(f)?;
        Ok(self.dist(&dual)? as i64 - 1)
    }

    /// `f` is equivalent to an effective divisor iff `d+ - 1 - f` terminates.
    pub fn is_equi_effective(&mut self, f: &ChipDistribution) -> Result<bool> {
        let dual = self.dual(f)?;
        Ok(self.decide(&dual)?.is_terminating())
    }

    /// `d+ - 1 - f`.
    pub fn dual(&self, f: &ChipDistribution) -> Result<ChipDistribution> {
        let n = self.graph.vertex_count();
        f.check_len(n)?;
        Ok(&(&self.graph.out_degree_vector() - &ChipDistribution::constant(n, 1)) - f)
    }

    /// Plays the canonical game from a non-terminating `x` until no entry is
    /// negative. Returns `None` for terminating input.
    pub fn nonnegative_equivalent(
        &mut self,
        x: &ChipDistribution,
    ) -> Result<Option<ChipDistribution>> {
        if self.decide(x)?.is_terminating() {
            return Ok(None);
        }
        let limit = default_step_limit(x).saturating_mul(2);
        let mut state = x.as_slice().to_vec();
        let mut steps = 0u64;
        while state.iter().any(|&c| c < 0) {
            let v = self
                .lowest_active(&state)
                .expect("non-terminating game always has an active vertex");
            self.step(&mut state, v)?;
            steps += 1;
            if steps > limit {
                return Err(Error::StepLimitExceeded(limit));
            }
        }
        Ok(Some(ChipDistribution::new(state)))
    }

    /// Canonical game from a non-terminating `x`, stopped at the first moment
    /// every vertex has fired. Returns that state and each vertex's last
    /// firing step, or `None` if `x` terminates.
    pub fn play_until_all_fired(
        &mut self,
        x: &ChipDistribution,
    ) -> Result<Option<(ChipDistribution, Vec<u64>)>> {
        if self.decide(x)?.is_terminating() {
            return Ok(None);
        }
        let n = self.graph.vertex_count();
        let limit = default_step_limit(x).saturating_mul(2);
        let mut state = x.as_slice().to_vec();
        let mut last_fired: Vec<Option<u64>> = vec![None; n];
        let mut remaining = n;
        let mut step = 0u64;
        while remaining > 0 {
            let v = self
                .lowest_active(&state)
                .expect("non-terminating game always has an active vertex");
            self.step(&mut state, v)?;
            if last_fired[v].is_none() {
                remaining -= 1;
            }
            last_fired[v] = Some(step);
            step += 1;
            if step > limit {
                return Err(Error::StepLimitExceeded(limit));
            }
        }
        let last = last_fired
            .into_iter()
            .map(|t| t.expect("all fired"))
            .collect();
        Ok(Some((ChipDistribution::new(state), last)))
    }
}

pub fn decide_termination(graph: &MultiDigraph, x: &ChipDistribution) -> Result<Termination> {
    ChipEngine::new(graph)?.decide(x)
}

pub fn dist(graph: &MultiDigraph, x: &ChipDistribution) -> Result<u64> {
    ChipEngine::new(graph)?.dist(x)
}

pub fn rank(graph: &MultiDigraph, f: &ChipDistribution) -> Result<i64> {
    ChipEngine::new(graph)?.rank(f)
}

pub fn is_equi_effective(graph: &MultiDigraph, f: &ChipDistribution) -> Result<bool> {
    ChipEngine::new(graph)?.is_equi_effective(f)
}
