//! `chipfire`: command-line front end for the chip-firing library.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use chipfire::arcset;
use chipfire::engine::{play, LowestIndex};
use chipfire::riemann_roch::SearchLimits;
use chipfire::sweep::{run_sweep, Property, SweepConfig};
use chipfire::{
    parse_graph, ChipDistribution, ChipEngine, DivisorTheory, Error, LaplacianLattice,
    MultiDigraph, Outcome,
};
use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use output::{Format, Record};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Graph summary: degrees, classes, minfas, dist(0).
    Info,
    /// Whether --dist terminates.
    Terminates,
    /// Play the lowest-index legal game from --dist.
    Run,
    /// Chips needed to make --dist non-terminating.
    Dist,
    /// Divisor rank of --dist.
    Rank,
    /// Whether --dist and --dist2 are linearly equivalent.
    Equivalent,
    /// Canonical class representative of --dist.
    Canonical,
    /// One representative per class of degree --degree.
    Classes,
    /// Minimum feedback arc set.
    Minfas,
    /// Minimally non-terminating classes.
    Mnt,
    /// Decide the Riemann-Roch property.
    RrCheck,
    /// Decide the natural Riemann-Roch property.
    NaturalRr,
    /// Run a property sweep: abelian, dist-invariance, gallai,
    /// minfas-turnback, turnback-characterization, acyclic-characterization,
    /// undirected-rr, eulerian-weak-rr, rr-formula.
    Verify,
}

#[derive(Debug, Parser)]
#[command(
    name = "chipfire",
    version,
    about = "Chip-firing and divisor theory on strongly connected multidigraphs"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Property name, for `verify` only.
    property: Option<String>,
    /// Graph file (`digraph N` or `undirected N`, then `u v [k]` lines).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Chip distribution as comma-separated integers.
    #[arg(long, allow_hyphen_values = true)]
    dist: Option<String>,
    /// Second distribution, for `equivalent`.
    #[arg(long, allow_hyphen_values = true)]
    dist2: Option<String>,
    /// Class degree, for `classes`.
    #[arg(long, allow_hyphen_values = true)]
    degree: Option<i64>,
    /// Samples per graph in `verify`.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Seed for `verify`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random graphs drawn by `verify` when no --graph is given.
    #[arg(long, default_value_t = 20)]
    random_graphs: usize,
    /// Firing cap for `run` (default: the number of reachable states).
    #[arg(long)]
    step_limit: Option<u64>,
    /// Cap on candidate vectors scanned by `mnt`, `rr-check`, `natural-rr`.
    #[arg(long)]
    max_candidates: Option<u64>,
    /// List every valid K in `rr-check`.
    #[arg(long)]
    all_candidates: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

enum Failure {
    Usage(String),
    Input(String),
    Limit(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
            Failure::Limit(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Limit(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimitExceeded { .. } | Error::StepLimitExceeded(_) | Error::ChipOverflow => {
                Failure::Limit(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn arcs_value(arcs: impl Iterator<Item = (usize, usize, u32)>) -> Value {
    Value::Array(arcs.map(|(u, v, k)| json!([u, v, k])).collect())
}

struct Inputs<'a> {
    cli: &'a Cli,
    graph: Option<MultiDigraph>,
}

impl Inputs<'_> {
    fn graph(&self) -> CliResult<&MultiDigraph> {
        self.graph
            .as_ref()
            .ok_or_else(|| Failure::Usage(format!("`{}` needs --graph", self.command_name())))
    }

    fn command_name(&self) -> String {
        self.cli
            .command
            .to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }

    fn dist_arg(&self, value: &Option<String>, flag: &str) -> CliResult<ChipDistribution> {
        let text = value
            .as_deref()
            .ok_or_else(|| Failure::Usage(format!("`{}` needs {flag}", self.command_name())))?;
        let x: ChipDistribution = text.parse().map_err(Failure::from)?;
        let n = self.graph()?.vertex_count();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.len(),
            }
            .into());
        }
        Ok(x)
    }

    fn dist(&self) -> CliResult<ChipDistribution> {
        self.dist_arg(&self.cli.dist, "--dist")
    }

    fn theory(&self) -> CliResult<DivisorTheory<'_>> {
        let mut limits = SearchLimits::default();
        if let Some(m) = self.cli.max_candidates {
            limits.max_candidates = m;
        }
        Ok(DivisorTheory::with_limits(self.graph()?, limits)?)
    }
}

fn load_graph(path: &PathBuf) -> CliResult<MultiDigraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn execute(cli: &Cli) -> CliResult<Record> {
    if cli.property.is_some() && cli.command != Command::Verify {
        return Err(Failure::Usage(
            "a property name is only accepted by `verify`".into(),
        ));
    }
    let graph = cli.graph.as_ref().map(load_graph).transpose()?;
    let inputs = Inputs { cli, graph };
    let mut r = Record::new(&inputs.command_name());
    match cli.command {
        Command::Info => info(&inputs, &mut r)?,
        Command::Terminates => {
            let x = inputs.dist()?;
            let verdict = ChipEngine::new(inputs.graph()?)?.decide(&x)?;
            r.set("dist", to_value(&x))
                .set("degree", x.degree())
                .set("terminating", verdict.is_terminating())
                .set(
                    "verdict",
                    if verdict.is_terminating() {
                        "terminating"
                    } else {
                        "non-terminating"
                    },
                );
        }
        Command::Run => {
            let g = inputs.graph()?;
            let x = inputs.dist()?;
            let trace = play(g, &x, &mut LowestIndex, cli.step_limit)?;
            r.set("initial", to_value(&x))
                .set("strategy", "lowest-index");
            match &trace.outcome {
                Outcome::Terminated { final_state } => {
                    r.set("outcome", "terminated")
                        .set("final", to_value(final_state));
                }
                Outcome::CycleDetected {
                    repeated_state,
                    cycle_start,
                    cycle_length,
                } => {
                    r.set("outcome", "cycle-detected")
                        .set("repeated_state", to_value(repeated_state))
                        .set("cycle_start", *cycle_start)
                        .set("cycle_length", *cycle_length);
                }
            }
            r.set("moves", trace.moves())
                .set("fire_counts", to_value(&trace.fire_counts))
                .set("firing_sequence", to_value(&trace.firing_sequence))
                .trailer(trace.to_log(g));
        }
        Command::Dist => {
            let x = inputs.dist()?;
            let value = ChipEngine::new(inputs.graph()?)?.dist(&x)?;
            r.set("dist", to_value(&x)).set("value", value);
        }
        Command::Rank => {
            let x = inputs.dist()?;
            let mut engine = ChipEngine::new(inputs.graph()?)?;
            let rank = engine.rank(&x)?;
            r.set("dist", to_value(&x))
                .set("rank", rank)
                .set("equi_effective", rank >= 0);
        }
        Command::Equivalent => {
            let x = inputs.dist()?;
            let y = inputs.dist_arg(&cli.dist2, "--dist2")?;
            let lattice = LaplacianLattice::new(&inputs.graph()?.laplacian())?;
            r.set("dist", to_value(&x))
                .set("dist2", to_value(&y))
                .set("equivalent", lattice.equivalent(&x, &y)?);
        }
        Command::Canonical => {
            let x = inputs.dist()?;
            let lattice = LaplacianLattice::new(&inputs.graph()?.laplacian())?;
            r.set("dist", to_value(&x))
                .set("degree", x.degree())
                .set("canonical", to_value(&lattice.canonical_rep(&x)));
        }
        Command::Classes => {
            let degree = cli
                .degree
                .ok_or_else(|| Failure::Usage("`classes` needs --degree".into()))?;
            let lattice = LaplacianLattice::new(&inputs.graph()?.laplacian())?;
            let classes = lattice.enumerate_classes(degree)?;
            r.set("degree", degree)
                .set("pic0_order", lattice.pic0_order())
                .set(
                    "invariant_factors",
                    lattice
                        .snf_invariants()
                        .iter()
                        .map(|d| d.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                )
                .set("classes", to_value(&classes));
        }
        Command::Minfas => {
            let g = inputs.graph()?;
            let fas = arcset::minimum_feedback_arc_set(g)?;
            r.set("minfas", fas.size)
                .set("ordering", to_value(&fas.ordering))
                .set("feedback_arcs", arcs_value(fas.arcs.arcs()))
                .set("turnback", arcset::is_turnback_arc_set(g, &fas.arcs)?);
        }
        Command::Mnt => {
            let mut theory = inputs.theory()?;
            let mnt = theory.enumerate_mnt_classes()?;
            r.set("dist0", theory.dist0()?)
                .set("count", mnt.len())
                .set("classes", to_value(&mnt));
        }
        Command::RrCheck => {
            let report = inputs.theory()?.rr_check(cli.all_candidates)?;
            append_report(&mut r, to_value(&report));
        }
        Command::NaturalRr => {
            let report = inputs.theory()?.natural_rr_check()?;
            append_report(&mut r, to_value(&report));
        }
        Command::Verify => verify(&inputs, &mut r)?,
    }
    Ok(r)
}

fn append_report(r: &mut Record, report: Value) {
    if let Value::Object(fields) = report {
        for (k, v) in fields {
            r.set(&k, v);
        }
    }
}

fn info(inputs: &Inputs<'_>, r: &mut Record) -> CliResult<()> {
    let g = inputs.graph()?;
    let strongly_connected = g.is_strongly_connected();
    r.set("vertices", g.vertex_count())
        .set("arcs", g.arc_count())
        .set("out_degrees", to_value(&g.out_degree_vector()))
        .set("in_degrees", to_value(&g.in_degree_vector()))
        .set("eulerian", g.is_eulerian())
        .set("bidirected", g.is_bidirected())
        .set("strongly_connected", strongly_connected)
        .set("undirected_edges", to_value(&g.undirected_edge_count()))
        .set("termination_bound", g.termination_bound())
        .set("minfas", arcset::minfas(g)?);
    if strongly_connected {
        let lattice = LaplacianLattice::new(&g.laplacian())?;
        let dist0 = ChipEngine::new(g)?.dist(&ChipDistribution::zeros(g.vertex_count()))?;
        r.set("dist0", dist0)
            .set("pic0_order", lattice.pic0_order());
    } else {
        r.set("dist0", Value::Null).set("pic0_order", Value::Null);
    }
    Ok(())
}

fn verify(inputs: &Inputs<'_>, r: &mut Record) -> CliResult<()> {
    let cli = inputs.cli;
    let name = cli
        .property
        .as_deref()
        .ok_or_else(|| Failure::Usage("`verify` needs a property name".into()))?;
    let property: Property = name.parse().map_err(Failure::Usage)?;
    let config = SweepConfig {
        trials: cli.trials,
        random_graphs: cli.random_graphs,
        seed: cli.seed,
    };
    let report = run_sweep(property, inputs.graph.as_ref(), &config)?;
    r.set("status", if report.passed() { "pass" } else { "fail" });
    append_report(r, to_value(&report));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(record) => {
            print!("{}", record.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
