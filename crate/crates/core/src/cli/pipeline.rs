//! One experiment end to end: run, reference set, indicator, offset,
//! smoothness estimate, bound curve, and the checks between them.

use std::io::Write;
use std::path::Path;

use serde_json::json;

use crate::analysis::{
    check_bounds, compute_offset, estimate_smoothness, finite_time_curve, indicator_series,
    per_iteration_bound, regret_from, require_ideal, BoundCheck, BoundCurve, IndicatorSeries,
    Minimizer, NearOptimality, Offset, SmoothnessModel,
};
use crate::benchmarks::{problem_by_name, reference_set, MultiObjectiveProblem};
use crate::cli::config::ExperimentConfig;
use crate::error::Result;
use crate::pareto::ReferenceSet;
use crate::pointset::format_value;
use crate::scalarization::ReferencePoint;
use crate::woo::{run, RunTrace};

pub const TRACE_HEADER: &str = "t,evals,g_best,indicator,bound,regret,max_depth";

#[derive(Debug, Clone)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub problem: MultiObjectiveProblem,
    pub trace: RunTrace,
    pub reference: ReferenceSet,
    pub indicator: IndicatorSeries,
    pub per_iteration: Vec<f64>,
    pub offset: Offset,
    pub regret: Vec<f64>,
    pub model: SmoothnessModel,
    pub minimizer: Minimizer,
    pub fit: NearOptimality,
    pub curve: BoundCurve,
    /// `bound(t) + offset` at each recorded iteration.
    pub comparison: Vec<f64>,
    pub check: BoundCheck,
}

impl RunReport {
    pub fn ts(&self) -> Vec<usize> {
        self.trace.records.iter().map(|r| r.t).collect()
    }

    pub fn write_trace<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{TRACE_HEADER}")?;
        for (i, r) in self.trace.records.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.t,
                r.evals,
                format_value(r.g_best),
                format_value(self.indicator.values[i]),
                format_value(self.comparison[i]),
                format_value(self.regret[i]),
                r.max_depth
            )?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_trace_file(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_trace(std::io::BufWriter::new(file))
    }

    pub fn metadata(&self) -> serde_json::Value {
        let last = self.trace.last();
        json!({
            "problem": self.trace.problem,
            "alphas": self.config.alphas,
            "config": self.trace.config,
            "scalarizer": self.trace.scalarizer,
            "deterministic": self.config.deterministic,
            "reference": {
                "provenance": self.reference.provenance().to_string(),
                "points": self.reference.len(),
                "resolution": self.reference.resolution(),
                "tolerance": self.reference.tolerance(),
            },
            "offset": self.offset,
            "smoothness": {
                "delta": self.model.delta(),
                "near_opt_dim": self.model.near_opt_dim(),
                "packing_constant": self.model.packing_constant(),
                "counts": self.fit.counts,
                "residuals": self.fit.residuals,
                "provenance": self.model.provenance(),
                "minimizer": self.minimizer,
            },
            "stats": self.trace.stats,
            "iterations": self.trace.records.len(),
            "final": {
                "t": last.t,
                "evals": last.evals,
                "g_best": last.g_best,
                "x_best": self.trace.best_point(last).x,
                "indicator": self.indicator.values.last(),
                "archive": self.trace.archive.len(),
            },
            "indicator_clamps": self.indicator.clamps,
            "check": self.check,
            "passed": self.check.passed(),
            "wall_time_seconds": self.trace.wall_time.as_secs_f64(),
        })
    }

    /// Writes `trace.csv`, `archive.csv` and `metadata.json` into `dir`.
    pub fn write_artifacts(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        self.write_trace_file(&dir.join("trace.csv"))?;
        self.trace.write_archive_file(&dir.join("archive.csv"))?;
        let meta = serde_json::to_string_pretty(&self.metadata())?;
        std::fs::write(dir.join("metadata.json"), meta + "\n")?;
        Ok(())
    }
}

/// Resolves the problem and fills `z*` with its ideal point when unset.
pub fn prepare(config: &ExperimentConfig) -> Result<(MultiObjectiveProblem, ExperimentConfig)> {
    config.validate()?;
    let problem = problem_by_name(&config.problem, config.alphas)?;
    let mut config = config.clone();
    if config.woo.reference_point.is_none() {
        if let Some(ideal) = problem.ideal() {
            config.woo.reference_point = Some(ReferencePoint::new(ideal.to_vec())?);
        }
    }
    Ok((problem, config))
}

pub fn execute(config: &ExperimentConfig) -> Result<RunReport> {
    let (problem, config) = prepare(config)?;
    let scalarizer = config.woo.scalarizer(problem.num_objectives())?;
    require_ideal(&problem, &scalarizer)?;
    let spec = config.woo.partition_spec()?;

    let trace = run(&problem, &config.woo)?;
    let reference = reference_set(&problem, config.reference_budget, config.reference_scheme)?;
    let indicator = indicator_series(&trace, &reference)?;
    let offset = compute_offset(&problem, &scalarizer, &reference, config.offset_budget)?;
    let regret = regret_from(&indicator.values, offset.value);
    let per_iteration = per_iteration_bound(&trace, scalarizer.weights());
    let (model, minimizer, fit) =
        estimate_smoothness(&problem, &scalarizer, spec, config.smoothness)?;
    let horizon = trace.last().t;
    let curve = finite_time_curve(
        &model,
        scalarizer.weights(),
        &config.woo.hmax,
        offset.value,
        horizon,
    );
    let comparison: Vec<f64> = trace
        .records
        .iter()
        .map(|r| curve.points[r.t - 1].with_offset)
        .collect();
    let ts: Vec<usize> = trace.records.iter().map(|r| r.t).collect();
    let check = check_bounds(
        &ts,
        &indicator.values,
        &per_iteration,
        &comparison,
        reference.tolerance(),
    );
    Ok(RunReport {
        config,
        problem,
        trace,
        reference,
        indicator,
        per_iteration,
        offset,
        regret,
        model,
        minimizer,
        fit,
        curve,
        comparison,
        check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(problem: &str) -> ExperimentConfig {
        let mut c = ExperimentConfig::for_problem(problem);
        c.woo.budget = 150;
        c.reference_budget = 20_000;
        c.offset_budget = 20_000;
        c.smoothness.max_depth = 6;
        c.smoothness.grid_budget = 200;
        c.smoothness.minimizer_budget = 20_000;
        c
    }

    #[test]
    fn small_run_passes_both_bounds() {
        for p in ["eq7-a", "eq7-h", "fonseca-fleming"] {
            let r = execute(&small(p)).unwrap();
            assert!(r.check.passed(), "{p}: {:?}", r.check);
            assert_eq!(r.regret.len(), r.trace.records.len());
        }
    }

    #[test]
    fn trace_csv_has_one_row_per_record() {
        let r = execute(&small("eq7-c")).unwrap();
        let mut buf = Vec::new();
        r.write_trace(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(TRACE_HEADER));
        assert_eq!(lines.count(), r.trace.records.len());
    }

    #[test]
    fn unknown_problem_is_a_config_error() {
        let err = execute(&ExperimentConfig::for_problem("nope")).unwrap_err();
        assert!(matches!(err, crate::error::Error::Config(_)));
    }
}
