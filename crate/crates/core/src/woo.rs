//! The WOO driver: depth sweeps over a partition tree of the decision box,
//! expanding at most one leaf per depth, gated by `ν_min`.
//!
//! ```text
//! evaluate root; t = 1
//! while budget remains:
//!     ν_min = +∞
//!     for l in 0 ..= min(depth(T), h_max(t)):
//!         c = best leaf at depth l
//!         if g(c) < ν_min: ν_min = g(c); expand c
//!         t = t + 1
//! ```
//!
//! Every paid evaluation is offered to a Pareto archive, so the archive at
//! any iteration is the non-dominated subset of all points sampled so far.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use log::{debug, info};
use serde::{Deserialize, Serialize};

use crate::benchmarks::MultiObjectiveProblem;
use crate::error::{Error, Result};
use crate::pareto::ParetoArchive;
use crate::partition::{PartitionSpec, PartitionTree};
use crate::pointset::write_points;
use crate::scalarization::{
    ReferencePoint, Sample, ScalarizedObjective, TchebycheffScalarizer, WeightVector,
};
use crate::space::{DecisionVector, NormOrder};

/// Value `ν_min` is reset to at the start of every sweep.
pub const NU_MIN_RESET: f64 = f64::INFINITY;

/// Depth cap `h_max(t)` of the sweep starting at iteration `t`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HmaxSchedule {
    /// `⌈√t⌉`.
    #[default]
    Sqrt,
    /// `⌈c·t⌉`.
    Linear { c: f64 },
    /// Fixed `H`.
    Constant { h: usize },
}

impl HmaxSchedule {
    pub fn linear(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::config(format!(
                "linear h_max slope must be positive, got {c}"
            )));
        }
        Ok(Self::Linear { c })
    }

    pub fn constant(h: usize) -> Result<Self> {
        if h == 0 {
            return Err(Error::config("constant h_max must be positive"));
        }
        Ok(Self::Constant { h })
    }

    /// Parses `sqrt`, `linear:<c>` or `constant:<H>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s, None),
        };
        let bad = || Error::config(format!("invalid h_max schedule '{s}'"));
        match (name, arg) {
            ("sqrt", None) => Ok(Self::Sqrt),
            ("linear", Some(a)) => Self::linear(a.parse().map_err(|_| bad())?),
            ("constant", Some(a)) => Self::constant(a.parse().map_err(|_| bad())?),
            _ => Err(bad()),
        }
    }

    pub fn at(&self, t: usize) -> usize {
        let t = t.max(1);
        match *self {
            Self::Sqrt => {
                let r = t.isqrt();
                if r * r == t {
                    r
                } else {
                    r + 1
                }
            }
            Self::Linear { c } => ((c * t as f64).ceil() as usize).max(1),
            Self::Constant { h } => h,
        }
    }
}

impl fmt::Display for HmaxSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sqrt => write!(f, "sqrt"),
            Self::Linear { c } => write!(f, "linear:{c}"),
            Self::Constant { h } => write!(f, "constant:{h}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WooConfig {
    pub arity: usize,
    pub budget: usize,
    pub hmax: HmaxSchedule,
    /// Defaults to all ones.
    pub weights: Option<WeightVector>,
    /// Defaults to the origin.
    pub reference_point: Option<ReferencePoint>,
    pub order: NormOrder,
    pub reuse_coincident: bool,
}

impl Default for WooConfig {
    fn default() -> Self {
        Self {
            arity: 3,
            budget: 1000,
            hmax: HmaxSchedule::Sqrt,
            weights: None,
            reference_point: None,
            order: NormOrder::Infinity,
            reuse_coincident: true,
        }
    }
}

impl WooConfig {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn partition_spec(&self) -> Result<PartitionSpec> {
        PartitionSpec::new(self.arity, self.reuse_coincident)
    }

    /// The scalarizer for an `m`-objective problem.
    pub fn scalarizer(&self, m: usize) -> Result<TchebycheffScalarizer> {
        let w = self
            .weights
            .clone()
            .unwrap_or_else(|| WeightVector::ones(m));
        let z = self
            .reference_point
            .clone()
            .unwrap_or_else(|| ReferencePoint::zeros(m));
        if w.dim() != m {
            return Err(Error::config(format!(
                "{} weights given for {m} objectives",
                w.dim()
            )));
        }
        if z.dim() != m {
            return Err(Error::config(format!(
                "reference point has {} entries for {m} objectives",
                z.dim()
            )));
        }
        TchebycheffScalarizer::new(w, z, self.order)
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::config("budget must be at least 1"));
        }
        self.partition_spec()?;
        match self.hmax {
            HmaxSchedule::Linear { c } => HmaxSchedule::linear(c).map(|_| ()),
            HmaxSchedule::Constant { h } => HmaxSchedule::constant(h).map(|_| ()),
            HmaxSchedule::Sqrt => Ok(()),
        }
    }
}

/// State after iteration `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub t: usize,
    pub sweep: usize,
    /// Evaluations paid so far; the archive at this iteration is the
    /// non-dominated subset of the first `evals` samples.
    pub evals: usize,
    pub g_best: f64,
    /// Index into [`RunTrace::samples`] of `x(t)`.
    pub best: usize,
    pub max_depth: usize,
    pub archive_len: usize,
}

/// One leaf expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub sweep: usize,
    pub t: usize,
    pub depth: usize,
    pub index: u128,
    pub value: f64,
    pub children: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    BudgetExhausted,
    /// A sweep could not expand anything and the next one would repeat it.
    Stalled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub evaluations: usize,
    pub reused: usize,
    pub cells: usize,
    pub sweeps: usize,
    pub stop: StopReason,
    pub partial_expansion: bool,
}

#[derive(Debug, Clone)]
pub struct RunTrace {
    pub problem: String,
    pub config: WooConfig,
    pub scalarizer: TchebycheffScalarizer,
    pub records: Vec<IterationRecord>,
    /// Every paid evaluation, in order.
    pub samples: Vec<Sample>,
    pub archive: ParetoArchive,
    pub expansions: Vec<Expansion>,
    pub tree: PartitionTree,
    pub stats: RunStats,
    pub wall_time: Duration,
}

impl RunTrace {
    pub fn last(&self) -> &IterationRecord {
        self.records
            .last()
            .expect("a trace always holds the root record")
    }

    /// `x(t)` of a record.
    pub fn best_point(&self, record: &IterationRecord) -> &Sample {
        &self.samples[record.best]
    }

    /// Equality of everything except wall-time.
    pub fn same_run(&self, other: &RunTrace) -> bool {
        self.problem == other.problem
            && self.config == other.config
            && self.records == other.records
            && self.samples == other.samples
            && self.archive == other.archive
            && self.expansions == other.expansions
            && self.stats == other.stats
    }

    /// Writes the final archive as a point set: `x1..xn, y1..ym` per row.
    pub fn write_archive<W: Write>(&self, out: W) -> Result<()> {
        let rows: Vec<Vec<f64>> = self
            .archive
            .members()
            .iter()
            .map(|e| e.x.iter().chain(e.y.iter()).copied().collect())
            .collect();
        let (n, m) = self
            .samples
            .first()
            .map(|s| (s.x.dim(), s.y.dim()))
            .unwrap_or((0, 0));
        let columns: Vec<String> = (1..=n)
            .map(|i| format!("x{i}"))
            .chain((1..=m).map(|j| format!("y{j}")))
            .collect();
        let comments = vec![
            format!("problem: {}", self.problem),
            format!("columns: {}", columns.join(",")),
        ];
        write_points(out, &comments, &rows)
    }

    pub fn write_archive_file(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_archive(std::io::BufWriter::new(file))
    }
}

/// `x(t)`: the earliest sample with the smallest scalarized value.
pub fn best_sample(trace: &RunTrace) -> Result<(DecisionVector, f64)> {
    best_of(&trace.samples)
        .map(|i| (trace.samples[i].x.clone(), trace.samples[i].g))
        .ok_or_else(|| Error::domain("trace has no evaluations"))
}

pub(crate) fn best_of(samples: &[Sample]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, s) in samples.iter().enumerate() {
        if best.is_none_or(|b| s.g < samples[b].g) {
            best = Some(i);
        }
    }
    best
}

struct Driver<'p> {
    objective: ScalarizedObjective<'p>,
    tree: PartitionTree,
    archive: ParetoArchive,
    synced: usize,
    records: Vec<IterationRecord>,
}

impl Driver<'_> {
    fn sync_archive(&mut self) -> Result<()> {
        for s in &self.objective.samples()[self.synced..] {
            self.archive.insert(s.x.clone(), s.y.clone())?;
        }
        self.synced = self.objective.samples().len();
        Ok(())
    }

    fn record(&mut self, t: usize, sweep: usize) -> Result<()> {
        self.sync_archive()?;
        let best = self.objective.best_index().expect("root was evaluated");
        self.records.push(IterationRecord {
            t,
            sweep,
            evals: self.objective.counter().used(),
            g_best: self.objective.samples()[best].g,
            best,
            max_depth: self.tree.depth(),
            archive_len: self.archive.len(),
        });
        Ok(())
    }
}

/// Runs WOO on `problem` until the budget is spent.
///
/// Running out of budget is the normal way to stop; a non-finite objective
/// value aborts the run with an error.
pub fn run(problem: &MultiObjectiveProblem, config: &WooConfig) -> Result<RunTrace> {
    config.validate()?;
    let start = Instant::now();
    let scalarizer = config.scalarizer(problem.num_objectives())?;
    let spec = config.partition_spec()?;
    let mut objective = ScalarizedObjective::new(problem, scalarizer.clone(), config.budget)?;
    let tree = PartitionTree::make_root(problem.domain(), spec, &mut objective)?;
    let mut d = Driver {
        objective,
        tree,
        archive: ParetoArchive::new(),
        synced: 0,
        records: Vec::new(),
    };
    let mut expansions = Vec::new();
    let mut t = 1;
    let mut sweep = 0;
    d.record(t, sweep)?;

    let stop = 'run: loop {
        if d.objective.counter().is_exhausted() {
            break StopReason::BudgetExhausted;
        }
        sweep += 1;
        let paid_before = d.objective.counter().used();
        let mut nu_min = NU_MIN_RESET;
        let top = d.tree.depth().min(config.hmax.at(t));
        for l in 0..=top {
            if d.objective.counter().is_exhausted() {
                break 'run StopReason::BudgetExhausted;
            }
            if let Some(leaf) = d.tree.best_leaf_at_depth(l) {
                let (value, index) = (d.tree.cell(leaf).value, d.tree.cell(leaf).index);
                if value < nu_min {
                    nu_min = value;
                    let outcome = d.tree.expand(leaf, &mut d.objective);
                    expansions.push(Expansion {
                        sweep,
                        t,
                        depth: l,
                        index,
                        value,
                        children: d.tree.cell(leaf).children.len(),
                    });
                    match outcome {
                        Ok(_) => {}
                        Err(e) if e.is_budget_exhausted() => {
                            t += 1;
                            d.record(t, sweep)?;
                            break 'run StopReason::BudgetExhausted;
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
            t += 1;
            d.record(t, sweep)?;
        }
        if d.objective.counter().used() == paid_before
            && d.tree.depth().min(config.hmax.at(t)) <= top
        {
            debug!("sweep {sweep} expanded nothing and the next one would repeat it; stopping");
            break StopReason::Stalled;
        }
    };

    let Driver {
        objective,
        tree,
        archive,
        records,
        ..
    } = d;
    let stats = RunStats {
        evaluations: objective.counter().used(),
        reused: tree.reused(),
        cells: tree.cells().len(),
        sweeps: sweep,
        stop,
        partial_expansion: tree.partial_expansion().is_some(),
    };
    let wall_time = start.elapsed();
    info!(
        "{}: {} evaluations, {} iterations, depth {}, archive {} ({:?})",
        problem.name(),
        stats.evaluations,
        records.len(),
        tree.depth(),
        archive.len(),
        wall_time
    );
    Ok(RunTrace {
        problem: problem.name().to_string(),
        config: config.clone(),
        scalarizer,
        records,
        samples: objective.into_samples(),
        archive,
        expansions,
        tree,
        stats,
        wall_time,
    })
}
