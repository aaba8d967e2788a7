use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::benchmarks::{problem_by_name, problem_names, reference_set, SamplingScheme};
use crate::cli::config::ExperimentConfig;
use crate::cli::pipeline::{execute, RunReport};
use crate::cli::CliError;
use crate::pareto::epsilon_indicator;
use crate::pointset::{format_significant, format_value, read_points_file, write_points_file};

pub const SUMMARY_HEADER: &str = "instance,problem,evaluations,iterations,final_g,final_indicator,offset,\
near_opt_dim,packing_constant,tolerance,per_iteration_max_excess,bound_max_excess,first_violation_t,mean_gap,pass";

fn io(e: std::io::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

/// `woo run`: one experiment, artifacts in `<out>/<problem>/`.
pub fn cmd_run(
    config_path: &Path,
    out: Option<&Path>,
    budget: Option<usize>,
    stdout: &mut dyn Write,
) -> Result<RunReport, CliError> {
    let mut config = ExperimentConfig::from_file(config_path)?;
    if let Some(b) = budget {
        config.woo.budget = b;
    }
    let root = out
        .map(Path::to_path_buf)
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("results"));
    let report = execute(&config)?;
    let dir = root.join(&report.trace.problem);
    report.write_artifacts(&dir)?;
    let last = report.trace.last();
    writeln!(
        stdout,
        "{}: {} evaluations, {} iterations, g_best {}, indicator {}, archive {}",
        report.trace.problem,
        last.evals,
        report.trace.records.len(),
        format_significant(last.g_best, 6),
        format_significant(*report.indicator.values.last().expect("non-empty"), 6),
        report.trace.archive.len()
    )
    .map_err(io)?;
    writeln!(stdout, "artifacts written to {}", dir.display()).map_err(io)?;
    if !report.check.passed() {
        return Err(CliError::Violation(format!(
            "{}: bound violated (per-iteration at t = {:?}, finite-time at t = {:?})",
            report.trace.problem,
            report.check.per_iteration_first_violation,
            report.check.bound_first_violation
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct ValidateOptions {
    /// Synthetic labels (`a`–`h`) or registered problem names.
    pub instances: Vec<String>,
    pub budget: Option<usize>,
    pub out: PathBuf,
    /// Worker threads; `None` uses all cores.
    pub parallel: Option<usize>,
    pub base: ExperimentConfig,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            instances: ('a'..='h').map(String::from).collect(),
            budget: None,
            out: PathBuf::from("results/validate"),
            parallel: None,
            base: ExperimentConfig::default(),
        }
    }
}

fn resolve_instance(token: &str) -> Result<String, CliError> {
    let token = token.trim();
    let name = match token.chars().collect::<Vec<_>>()[..] {
        [c @ 'a'..='h'] => format!("eq7-{c}"),
        _ => token.to_string(),
    };
    if problem_names().contains(&name) {
        Ok(name)
    } else {
        Err(CliError::Usage(format!("unknown instance '{token}'")))
    }
}

/// One summary row per validated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationRow {
    pub instance: String,
    pub problem: String,
    pub passed: bool,
    pub mean_gap: f64,
    pub seconds: f64,
}

/// `woo validate`: runs every instance, checks both bounds at every
/// iteration, writes `<problem>.csv` traces and `summary.csv`.
pub fn cmd_validate(
    opts: &ValidateOptions,
    stdout: &mut dyn Write,
) -> Result<Vec<ValidationRow>, CliError> {
    if opts.instances.is_empty() || opts.instances.iter().all(|s| s.trim().is_empty()) {
        return Err(CliError::Usage("no instances to validate".into()));
    }
    let names = opts
        .instances
        .iter()
        .map(|s| resolve_instance(s))
        .collect::<Result<Vec<_>, _>>()?;
    let configs: Vec<ExperimentConfig> = names
        .iter()
        .map(|name| {
            let mut c = opts.base.clone();
            c.problem = name.clone();
            if let Some(b) = opts.budget {
                c.woo.budget = b;
            }
            c
        })
        .collect();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.parallel {
        if n == 0 {
            return Err(CliError::Usage("--parallel must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Runtime(e.to_string()))?;
    let results: Vec<(crate::error::Result<RunReport>, f64)> = pool.install(|| {
        configs
            .par_iter()
            .map(|c| {
                let start = Instant::now();
                let r = execute(c);
                (r, start.elapsed().as_secs_f64())
            })
            .collect()
    });

    std::fs::create_dir_all(&opts.out).map_err(io)?;
    let mut summary = vec![SUMMARY_HEADER.to_string()];
    let mut rows = Vec::new();
    writeln!(
        stdout,
        "{:<10} {:<16} {:>6} {:>14} {:>14} {:>9}",
        "instance", "problem", "pass", "max_excess", "mean_gap", "seconds"
    )
    .map_err(io)?;
    for ((token, name), (result, seconds)) in opts.instances.iter().zip(&names).zip(results) {
        let report = result.map_err(CliError::from)?;
        report.write_trace_file(&opts.out.join(format!("{name}.csv")))?;
        let last = report.trace.last();
        let check = &report.check;
        let first = check
            .per_iteration_first_violation
            .into_iter()
            .chain(check.bound_first_violation)
            .min();
        summary.push(format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            token.trim(),
            name,
            last.evals,
            report.trace.records.len(),
            format_value(last.g_best),
            format_value(*report.indicator.values.last().expect("non-empty")),
            format_value(report.offset.value),
            format_value(report.model.near_opt_dim()),
            format_value(report.model.packing_constant()),
            format_value(check.tolerance),
            format_value(check.per_iteration_max_excess),
            format_value(check.bound_max_excess),
            first.map(|t| t.to_string()).unwrap_or_default(),
            format_value(check.mean_gap),
            check.passed()
        ));
        writeln!(
            stdout,
            "{:<10} {:<16} {:>6} {:>14} {:>14} {:>9.2}",
            token.trim(),
            name,
            if check.passed() { "ok" } else { "FAIL" },
            format_significant(
                check.per_iteration_max_excess.max(check.bound_max_excess),
                4
            ),
            format_significant(check.mean_gap, 6),
            seconds
        )
        .map_err(io)?;
        if let Some(t) = first {
            writeln!(stdout, "  violation on {name} at t = {t}").map_err(io)?;
        }
        rows.push(ValidationRow {
            instance: token.trim().to_string(),
            problem: name.clone(),
            passed: check.passed(),
            mean_gap: check.mean_gap,
            seconds,
        });
    }
    std::fs::write(opts.out.join("summary.csv"), summary.join("\n") + "\n").map_err(io)?;
    let failed: Vec<&str> = rows
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.problem.as_str())
        .collect();
    if failed.is_empty() {
        Ok(rows)
    } else {
        Err(CliError::Violation(format!(
            "bound violated on {}",
            failed.join(", ")
        )))
    }
}

/// `woo indicator A B`: prints `I_ε+(A, B)` to 12 significant digits.
pub fn cmd_indicator(a: &Path, b: &Path, stdout: &mut dyn Write) -> Result<f64, CliError> {
    let pa = read_points_file(a)?;
    let pb = read_points_file(b)?;
    if pa[0].len() != pb[0].len() {
        return Err(CliError::Usage(format!(
            "dimension mismatch: {} has {} columns, {} has {}",
            a.display(),
            pa[0].len(),
            b.display(),
            pb[0].len()
        )));
    }
    let v = epsilon_indicator(&pa, &pb)?;
    writeln!(stdout, "{}", format_significant(v, 12)).map_err(io)?;
    Ok(v)
}

/// `woo reference PROBLEM`: samples (or reuses) a reference set at
/// `<out>/<problem>-<scheme>-<budget>.csv`.
pub fn cmd_reference(
    problem: &str,
    scheme: SamplingScheme,
    budget: usize,
    out: &Path,
    stdout: &mut dyn Write,
) -> Result<PathBuf, CliError> {
    let p = problem_by_name(problem, None)?;
    let path = out.join(format!("{}-{}-{budget}.csv", p.name(), scheme.as_str()));
    if path.exists() {
        if let Ok(points) = read_points_file(&path) {
            writeln!(
                stdout,
                "{} points in {} (cached)",
                points.len(),
                path.display()
            )
            .map_err(io)?;
            return Ok(path);
        }
    }
    let r = reference_set(&p, budget, scheme)?;
    std::fs::create_dir_all(out).map_err(io)?;
    let comments = vec![
        format!("problem: {}", p.name()),
        format!("provenance: {}", r.provenance()),
        format!(
            "resolution: {}",
            r.resolution()
                .map(format_value)
                .unwrap_or_else(|| "unknown".into())
        ),
    ];
    let rows: Vec<&[f64]> = r.points().iter().map(|y| y.as_slice()).collect();
    write_points_file(&path, &comments, &rows).map_err(|e| CliError::Runtime(e.to_string()))?;
    writeln!(stdout, "{} points in {}", r.len(), path.display()).map_err(io)?;
    Ok(path)
}

pub fn cmd_list_problems(stdout: &mut dyn Write) -> Result<(), CliError> {
    writeln!(
        stdout,
        "{:<16} {:>2} {:>2}  {:<24} description",
        "name", "n", "m", "lipschitz"
    )
    .map_err(io)?;
    for name in problem_names() {
        let p = problem_by_name(&name, None)?;
        let lipschitz = p
            .lipschitz()
            .map(|l| {
                l.iter()
                    .map(|v| format_significant(*v, 6))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .unwrap_or_else(|| "-".into());
        writeln!(
            stdout,
            "{:<16} {:>2} {:>2}  {:<24} {}",
            name,
            p.num_variables(),
            p.num_objectives(),
            lipschitz,
            p.description()
        )
        .map_err(io)?;
    }
    Ok(())
}
