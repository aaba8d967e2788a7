//! Regret and bound machinery.
//!
//! Two bounds are checked against the ε-indicator of a run's archive:
//!
//! - the per-iteration bound `I¹ε+(Y^t_*) ≤ max_j(1/w_j) · g_w(x(t))`;
//! - the finite-time bound `r(t) ≤ max_j(1/w_j) · δ(min(h(t), h_max(t)+1))`,
//!   where `h(t)` is the smallest `h` with
//!   `C · h_max(t) · Σ_{l=0}^{h} δ(l)^{−d} ≥ t`.
//!
//! `δ`, `d` and `C` are estimated numerically (see [`estimate_smoothness`]).

use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::benchmarks::{grid_points, grid_shape, MultiObjectiveProblem};
use crate::error::{Error, Result};
use crate::pareto::{unary_epsilon_detailed, EpsilonTracker, ReferenceSet};
use crate::partition::{split_geometry, PartitionSpec};
use crate::scalarization::{TchebycheffScalarizer, WeightVector};
use crate::space::{Hyperbox, ObjectiveVector};
use crate::woo::{HmaxSchedule, RunTrace};

/// Scalarized value `g_w(x)` of a problem, outside any budget.
pub fn scalar_value(
    problem: &MultiObjectiveProblem,
    scalarizer: &TchebycheffScalarizer,
    x: &[f64],
) -> Result<f64> {
    scalarizer.scalarize(&problem.evaluate(x)?)
}

fn scalar_values(
    problem: &MultiObjectiveProblem,
    scalarizer: &TchebycheffScalarizer,
    points: &[Vec<f64>],
) -> Result<Vec<f64>> {
    points
        .par_iter()
        .map(|x| scalar_value(problem, scalarizer, x))
        .collect()
}

fn argmin(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if best.is_none_or(|b| *v < values[b]) {
            best = Some(i);
        }
    }
    best
}

/// Bound checks need `z*` to be the problem's ideal point when it is known.
pub fn require_ideal(
    problem: &MultiObjectiveProblem,
    scalarizer: &TchebycheffScalarizer,
) -> Result<()> {
    match problem.ideal() {
        Some(ideal) if ideal.as_slice() != scalarizer.reference().as_slice() => {
            Err(Error::config(format!(
                "bound validation on {} needs z* = {:?}, got {:?}",
                problem.name(),
                ideal.as_slice(),
                scalarizer.reference().as_slice()
            )))
        }
        _ => Ok(()),
    }
}

/// Unary ε-indicator of the archive at every recorded iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSeries {
    pub values: Vec<f64>,
    /// Values before clamping negatives to zero.
    pub raw: Vec<f64>,
    pub clamps: usize,
}

pub fn indicator_series(trace: &RunTrace, reference: &ReferenceSet) -> Result<IndicatorSeries> {
    let mut tracker = EpsilonTracker::new(reference);
    let mut added = 0;
    let mut values = Vec::with_capacity(trace.records.len());
    let mut raw = Vec::with_capacity(trace.records.len());
    let mut last = None;
    for r in &trace.records {
        if r.evals != added || last.is_none() {
            for s in &trace.samples[added..r.evals] {
                tracker.add(&s.y)?;
            }
            added = r.evals;
            last = Some(tracker.current());
        }
        let u = last.expect("set above");
        values.push(u.value);
        raw.push(u.raw);
    }
    if tracker.clamps() > 0 {
        info!(
            "{}: negative indicator clamped {} times against the sampled reference",
            trace.problem,
            tracker.clamps()
        );
    }
    Ok(IndicatorSeries {
        values,
        raw,
        clamps: tracker.clamps(),
    })
}

/// `r(t) = I¹ε+(Y^t_*) − offset`.
pub fn regret(trace: &RunTrace, reference: &ReferenceSet, offset: Option<f64>) -> Result<Vec<f64>> {
    let offset = offset.ok_or_else(|| Error::config("regret needs the offset term"))?;
    Ok(regret_from(
        &indicator_series(trace, reference)?.values,
        offset,
    ))
}

pub fn regret_from(indicator: &[f64], offset: f64) -> Vec<f64> {
    let r: Vec<f64> = indicator.iter().map(|v| v - offset).collect();
    if let Some(neg) = r.iter().find(|v| **v < 0.0) {
        debug!("negative regret {neg}: reference or offset sampling error");
    }
    r
}

/// `max_j(1/w_j) · g_w(x(t))` per recorded iteration.
pub fn per_iteration_bound(trace: &RunTrace, weights: &WeightVector) -> Vec<f64> {
    let k = weights.max_inverse();
    trace.records.iter().map(|r| k * r.g_best).collect()
}

/// A located global minimizer of `g_w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Minimizer {
    pub x: Vec<f64>,
    pub g: f64,
}

/// Grid argmin of `g_w` over `budget` points, refined by repeatedly zooming
/// a small grid around the incumbent.
pub fn locate_minimizer(
    problem: &MultiObjectiveProblem,
    scalarizer: &TchebycheffScalarizer,
    budget: usize,
) -> Result<Minimizer> {
    let domain = problem.domain();
    let n = domain.dim();
    let shape = grid_shape(n, budget.max(1));
    let points = grid_points(domain, &shape);
    let values = scalar_values(problem, scalarizer, &points)?;
    let i = argmin(&values).ok_or_else(|| Error::Diagnostic("empty minimizer grid".into()))?;
    let (mut x, mut g) = (points[i].clone(), values[i]);
    let mut half: Vec<f64> = (0..n)
        .map(|a| domain.width(a) / (shape[a].max(2) - 1) as f64)
        .collect();
    let per_axis = if n <= 3 { 9 } else { 3 };
    for _ in 0..200 {
        if (0..n).all(|a| half[a] <= 1e-15 * domain.width(a)) {
            break;
        }
        let lower: Vec<f64> = (0..n)
            .map(|a| (x[a] - half[a]).max(domain.lower()[a]))
            .collect();
        let upper: Vec<f64> = (0..n)
            .map(|a| (x[a] + half[a]).min(domain.upper()[a]))
            .collect();
        let zoom = Hyperbox::new(lower, upper)?;
        let points = grid_points(&zoom, &vec![per_axis; n]);
        let values = scalar_values(problem, scalarizer, &points)?;
        if let Some(j) = argmin(&values) {
            if values[j] < g {
                g = values[j];
                x = points[j].clone();
            }
        }
        for h in &mut half {
            *h *= 2.0 / (per_axis - 1) as f64;
        }
    }
    if !g.is_finite() {
        return Err(Error::Diagnostic(format!(
            "no minimizer of {} located",
            problem.name()
        )));
    }
    Ok(Minimizer { x, g })
}

/// Where `δ`, `d` and `C` came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SmoothnessProvenance {
    Analytic,
    Estimated {
        grid_budget: usize,
        minimizer_budget: usize,
        max_depth: usize,
    },
}

/// `δ(l)`, near-optimality dimension `d` and packing constant `C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessModel {
    delta: Vec<f64>,
    near_opt_dim: f64,
    packing_constant: f64,
    provenance: SmoothnessProvenance,
}

impl SmoothnessModel {
    pub fn new(
        delta: Vec<f64>,
        near_opt_dim: f64,
        packing_constant: f64,
        provenance: SmoothnessProvenance,
    ) -> Result<Self> {
        if delta.is_empty() {
            return Err(Error::config("smoothness model needs at least one δ value"));
        }
        if delta.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(Error::config("δ values must be positive and finite"));
        }
        if delta.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::config("δ must be non-increasing"));
        }
        if !(near_opt_dim.is_finite() && near_opt_dim >= 0.0) {
            return Err(Error::config(format!(
                "near-optimality dimension {near_opt_dim} is invalid"
            )));
        }
        if !(packing_constant.is_finite() && packing_constant > 0.0) {
            return Err(Error::config(format!(
                "packing constant {packing_constant} is invalid"
            )));
        }
        Ok(Self {
            delta,
            near_opt_dim,
            packing_constant,
            provenance,
        })
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn near_opt_dim(&self) -> f64 {
        self.near_opt_dim
    }

    pub fn packing_constant(&self) -> f64 {
        self.packing_constant
    }

    pub fn provenance(&self) -> &SmoothnessProvenance {
        &self.provenance
    }

    pub fn max_depth(&self) -> usize {
        self.delta.len() - 1
    }

    /// `δ(l)`; past the stored depths, extends geometrically with the last
    /// observed ratio clamped into `(0, 1)`.
    pub fn delta_at(&self, l: usize) -> f64 {
        let h = self.max_depth();
        if l <= h {
            return self.delta[l];
        }
        let ratio = if h == 0 {
            0.5
        } else {
            (self.delta[h] / self.delta[h - 1]).clamp(f64::EPSILON, 1.0 - f64::EPSILON)
        };
        debug!("extrapolating δ({l}) from depth {h} with ratio {ratio}");
        (self.delta[h] * ratio.powi((l - h) as i32)).max(f64::MIN_POSITIVE)
    }
}

/// For each depth `h ≤ max_depth`, the sup of `g_w − g*` over a grid of
/// `grid_budget` points (plus the representative) in every depth-`h` cell
/// whose closed box contains `minimizer`. A running minimum makes the
/// sequence non-increasing; values are floored at the smallest positive
/// normal float.
pub fn estimate_delta(
    problem: &MultiObjectiveProblem,
    scalarizer: &TchebycheffScalarizer,
    spec: PartitionSpec,
    max_depth: usize,
    grid_budget: usize,
    minimizer: &Minimizer,
) -> Result<Vec<f64>> {
    let domain = problem.domain();
    let n = domain.dim();
    if !domain.contains(&minimizer.x) {
        return Err(Error::Diagnostic(
            "minimizer lies outside the domain".into(),
        ));
    }
    let shape = grid_shape(n, grid_budget.max(1));
    let mut cells = vec![(domain.clone(), domain.center())];
    let mut delta: Vec<f64> = Vec::with_capacity(max_depth + 1);
    for h in 0..=max_depth {
        if h > 0 {
            let axis = (h - 1) % n;
            cells = cells
                .iter()
                .flat_map(|(b, rep)| split_geometry(b, rep, axis, spec.arity))
                .filter(|(b, _)| b.contains(&minimizer.x))
                .collect();
        }
        if cells.is_empty() {
            return Err(Error::Diagnostic(format!(
                "lost the minimizer cell at depth {h}"
            )));
        }
        let mut sup = f64::NEG_INFINITY;
        for (b, rep) in &cells {
            let mut points = grid_points(b, &shape);
            points.push(rep.clone());
            let worst = scalar_values(problem, scalarizer, &points)?
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            sup = sup.max(worst - minimizer.g);
        }
        let prev = delta.last().copied().unwrap_or(f64::INFINITY);
        delta.push(sup.min(prev).max(f64::MIN_POSITIVE));
    }
    Ok(delta)
}

/// Fitted near-optimality dimension and packing constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearOptimality {
    pub d: f64,
    pub c: f64,
    /// `N(h)`: number of depth-`h` cells whose representative is `δ(h)`-optimal.
    pub counts: Vec<usize>,
    /// Least-squares residuals of `ln N(h)` around the fitted line.
    pub residuals: Vec<f64>,
}

/// Largest number of cells enumerated at one depth.
pub const MAX_ENUMERATED_CELLS: usize = 2_000_000;

/// Counts `δ(h)`-optimal cells by enumerating every depth-`h` cell, fits `d`
/// as the slope of `ln N(h)` against `ln(1/δ(h))` (clamped to `[0, n]` and
/// rounded up to a multiple of 0.1), then sets `C` to the smallest value
/// `≥ 1` with `N(h) ≤ C·δ(h)^{−d}` at every depth.
pub fn estimate_near_opt_dim(
    problem: &MultiObjectiveProblem,
    scalarizer: &TchebycheffScalarizer,
    spec: PartitionSpec,
    delta: &[f64],
    g_star: f64,
) -> Result<NearOptimality> {
    if delta.is_empty() {
        return Err(Error::config("near-optimality fit needs δ values"));
    }
    let domain = problem.domain();
    let n = domain.dim();
    let mut level = vec![(domain.clone(), domain.center())];
    let mut counts = Vec::with_capacity(delta.len());
    for (h, dh) in delta.iter().enumerate() {
        if h > 0 {
            if level.len().saturating_mul(spec.arity) > MAX_ENUMERATED_CELLS {
                return Err(Error::config(format!(
                    "depth {h} has more than {MAX_ENUMERATED_CELLS} cells; lower the analysis depth"
                )));
            }
            let axis = (h - 1) % n;
            level = level
                .iter()
                .flat_map(|(b, rep)| split_geometry(b, rep, axis, spec.arity))
                .collect();
        }
        let reps: Vec<Vec<f64>> = level.iter().map(|(_, r)| r.clone()).collect();
        let values = scalar_values(problem, scalarizer, &reps)?;
        counts.push(values.iter().filter(|g| **g <= g_star + dh).count());
    }

    let xs: Vec<f64> = delta.iter().map(|d| -d.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|c| (*c.max(&1) as f64).ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if var > 1e-12 {
        cov / var
    } else if counts.last() > counts.first() {
        n as f64
    } else {
        0.0
    };
    let d = ((slope.clamp(0.0, n as f64) * 10.0 - 1e-9).ceil() / 10.0).max(0.0);
    let c = counts
        .iter()
        .zip(delta)
        .map(|(nh, dh)| *nh as f64 * dh.powf(d))
        .fold(1.0f64, f64::max);
    let residuals = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y - (my + slope * (x - mx)))
        .collect::<Vec<_>>();
    debug!("near-optimality fit: d = {d}, C = {c}, N = {counts:?}, residuals = {residuals:?}");
    Ok(NearOptimality {
        d,
        c,
        counts,
        residuals,
    })
}

/// Budgets for [`estimate_smoothness`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessOptions {
    pub max_depth: usize,
    pub grid_budget: usize,
    pub minimizer_budget: usize,
}

impl Default for SmoothnessOptions {
    fn default() -> Self {
        Self {
            max_depth: 10,
            grid_budget: 2_000,
            minimizer_budget: 1_000_000,
        }
    }
}

/// Full estimate: minimizer, `δ`, then `(d, C)`.
pub fn estimate_smoothness(
    problem: &MultiObjectiveProblem,
    scalarizer: &TchebycheffScalarizer,
    spec: PartitionSpec,
    options: SmoothnessOptions,
) -> Result<(SmoothnessModel, Minimizer, NearOptimality)> {
    let minimizer = locate_minimizer(problem, scalarizer, options.minimizer_budget)?;
    let delta = estimate_delta(
        problem,
        scalarizer,
        spec,
        options.max_depth,
        options.grid_budget,
        &minimizer,
    )?;
    let fit = estimate_near_opt_dim(problem, scalarizer, spec, &delta, minimizer.g)?;
    let model = SmoothnessModel::new(
        delta,
        fit.d,
        fit.c,
        SmoothnessProvenance::Estimated {
            grid_budget: options.grid_budget,
            minimizer_budget: options.minimizer_budget,
            max_depth: options.max_depth,
        },
    )?;
    Ok((model, minimizer, fit))
}

/// Smallest `h` with `C · h_max(t) · Σ_{l=0}^{h} δ(l)^{−d} ≥ t`.
pub fn h_of_t(model: &SmoothnessModel, hmax: &HmaxSchedule, t: usize) -> usize {
    let scale = model.packing_constant() * hmax.at(t) as f64;
    let d = model.near_opt_dim();
    let mut sum = 0.0;
    let mut h = 0;
    loop {
        sum += model.delta_at(h).powf(-d);
        if scale * sum >= t as f64 {
            return h;
        }
        h += 1;
    }
}

/// One point of the finite-time bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    pub t: usize,
    pub h: usize,
    /// `max_j(1/w_j) · δ(min(h(t), h_max(t)+1))`.
    pub bound: f64,
    /// `bound + offset`, the quantity compared with the indicator.
    pub with_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub offset: f64,
    pub points: Vec<BoundPoint>,
}

pub fn finite_time_bound(
    model: &SmoothnessModel,
    weights: &WeightVector,
    hmax: &HmaxSchedule,
    t: usize,
) -> (usize, f64) {
    let h = h_of_t(model, hmax, t);
    (
        h,
        weights.max_inverse() * model.delta_at(h.min(hmax.at(t) + 1)),
    )
}

/// The bound for `t = 1..=horizon`.
pub fn finite_time_curve(
    model: &SmoothnessModel,
    weights: &WeightVector,
    hmax: &HmaxSchedule,
    offset: f64,
    horizon: usize,
) -> BoundCurve {
    let points = (1..=horizon.max(1))
        .map(|t| {
            let (h, bound) = finite_time_bound(model, weights, hmax, t);
            BoundPoint {
                t,
                h,
                bound,
                with_offset: bound + offset,
            }
        })
        .collect();
    BoundCurve { offset, points }
}

/// Offset term: unary ε-indicator of `{f(argmin g_w)}`, with the argmin
/// taken over a `budget`-point grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Offset {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub g: f64,
    pub value: f64,
    pub raw: f64,
}

pub fn compute_offset(
    problem: &MultiObjectiveProblem,
    scalarizer: &TchebycheffScalarizer,
    reference: &ReferenceSet,
    budget: usize,
) -> Result<Offset> {
    let domain = problem.domain();
    let points = grid_points(domain, &grid_shape(domain.dim(), budget.max(1)));
    let values = scalar_values(problem, scalarizer, &points)?;
    let i = argmin(&values).ok_or_else(|| Error::Diagnostic("empty offset grid".into()))?;
    let y: ObjectiveVector = problem.evaluate(&points[i])?;
    let u = unary_epsilon_detailed(std::iter::once(&y), reference)?;
    Ok(Offset {
        x: points[i].clone(),
        y: y.into_inner(),
        g: values[i],
        value: u.value,
        raw: u.raw,
    })
}

/// Result of comparing an indicator series with its two bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub tolerance: f64,
    /// Largest `indicator − per_iteration_bound` over all iterations.
    pub per_iteration_max_excess: f64,
    pub per_iteration_first_violation: Option<usize>,
    /// Largest `indicator − (bound + offset)`.
    pub bound_max_excess: f64,
    pub bound_first_violation: Option<usize>,
    /// Mean of `bound + offset − indicator`.
    pub mean_gap: f64,
}

impl BoundCheck {
    pub fn passed(&self) -> bool {
        self.per_iteration_first_violation.is_none() && self.bound_first_violation.is_none()
    }
}

/// Compares per-iteration series (all indexed like `ts`).
pub fn check_bounds(
    ts: &[usize],
    indicator: &[f64],
    per_iteration: &[f64],
    comparison: &[f64],
    tolerance: f64,
) -> BoundCheck {
    let excess = |bound: &[f64]| -> (f64, Option<usize>) {
        let mut max = f64::NEG_INFINITY;
        let mut first = None;
        for ((t, i), b) in ts.iter().zip(indicator).zip(bound) {
            let e = i - b;
            max = max.max(e);
            if e > tolerance && first.is_none() {
                first = Some(*t);
            }
        }
        (max, first)
    };
    let (per_iteration_max_excess, per_iteration_first_violation) = excess(per_iteration);
    let (bound_max_excess, bound_first_violation) = excess(comparison);
    let mean_gap = comparison
        .iter()
        .zip(indicator)
        .map(|(b, i)| b - i)
        .sum::<f64>()
        / indicator.len().max(1) as f64;
    BoundCheck {
        tolerance,
        per_iteration_max_excess,
        per_iteration_first_violation,
        bound_max_excess,
        bound_first_violation,
        mean_gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{problem_by_name, reference_set, SamplingScheme};
    use crate::pareto::Provenance;
    use crate::woo::{run, WooConfig};

    fn single(name: &str, f: fn(f64) -> f64) -> MultiObjectiveProblem {
        MultiObjectiveProblem::new(
            name,
            Hyperbox::cube(1, -1.0, 1.0).unwrap(),
            1,
            move |x: &[f64]| vec![f(x[0])],
        )
        .unwrap()
    }

    fn thirds(h: usize) -> Vec<f64> {
        (0..=h).map(|l| 3f64.powi(-(l as i32))).collect()
    }

    fn model(delta: Vec<f64>, d: f64, c: f64) -> SmoothnessModel {
        SmoothnessModel::new(delta, d, c, SmoothnessProvenance::Analytic).unwrap()
    }

    #[test]
    fn per_iteration_examples() {
        let w = |v: &[f64]| WeightVector::new(v.to_vec()).unwrap();
        assert_eq!(w(&[1.0, 1.0]).max_inverse() * 0.5, 0.5);
        assert_eq!(w(&[2.0, 1.0]).max_inverse() * 0.5, 0.5);
        assert_eq!(w(&[0.5, 2.0]).max_inverse() * 1.0, 2.0);
        let p = problem_by_name("eq7-b", None).unwrap();
        let trace = run(&p, &WooConfig::default().with_budget(30)).unwrap();
        let b = per_iteration_bound(&trace, &WeightVector::ones(2));
        assert_eq!(b.len(), trace.records.len());
        assert!(b.iter().zip(&trace.records).all(|(b, r)| *b == r.g_best));
    }

    #[test]
    fn delta_of_abs_is_powers_of_three() {
        let p = single("abs", f64::abs);
        let s = TchebycheffScalarizer::standard(1);
        let m = locate_minimizer(&p, &s, 10_001).unwrap();
        assert!(m.g.abs() < 1e-12 && m.x[0].abs() < 1e-12);
        let delta = estimate_delta(&p, &s, PartitionSpec::default(), 6, 101, &m).unwrap();
        assert!((delta[0] - 1.0).abs() < 1e-12);
        for (h, d) in delta.iter().enumerate() {
            assert!((d - 3f64.powi(-(h as i32))).abs() < 1e-12, "δ({h}) = {d}");
        }
        let fit = estimate_near_opt_dim(&p, &s, PartitionSpec::default(), &delta, m.g).unwrap();
        assert_eq!(fit.d, 0.0);
        assert!(fit.c >= 1.0);
        assert!(fit.counts.iter().all(|c| *c == 1));
    }

    #[test]
    fn delta_at_depth_zero_is_the_range() {
        let p = problem_by_name("eq7-a", None).unwrap();
        let s = TchebycheffScalarizer::standard(2);
        let (model, m, _) = estimate_smoothness(
            &p,
            &s,
            PartitionSpec::default(),
            SmoothnessOptions {
                max_depth: 5,
                grid_budget: 201,
                minimizer_budget: 10_001,
            },
        )
        .unwrap();
        assert!((m.g - 0.5).abs() < 1e-9);
        // max over [−1, 1] of max(|x|, |x − 1|) is 2 at x = −1.
        assert!((model.delta()[0] - 1.5).abs() < 1e-9);
        assert!(model.delta().windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn constant_function_has_full_dimension() {
        let p = single("flat", |_| 0.25);
        let s = TchebycheffScalarizer::standard(1);
        let m = locate_minimizer(&p, &s, 101).unwrap();
        let delta = estimate_delta(&p, &s, PartitionSpec::default(), 5, 11, &m).unwrap();
        assert!(delta.iter().all(|d| *d == f64::MIN_POSITIVE));
        let fit = estimate_near_opt_dim(&p, &s, PartitionSpec::default(), &delta, m.g).unwrap();
        assert_eq!(fit.d, 1.0);
        assert_eq!(fit.counts, vec![1, 3, 9, 27, 81, 243]);
        assert!(fit.c >= 1.0);
        assert!(estimate_near_opt_dim(&p, &s, PartitionSpec::default(), &[], 0.0).is_err());
    }

    #[test]
    fn h_of_t_examples() {
        let one = HmaxSchedule::constant(1).unwrap();
        let flat = model(vec![1.0; 4], 0.0, 1.0);
        for t in 1..20 {
            assert_eq!(h_of_t(&flat, &one, t), t - 1);
        }
        assert_eq!(h_of_t(&model(vec![1.0; 4], 0.0, 2.0), &one, 4), 1);
        assert_eq!(h_of_t(&model(thirds(5), 1.0, 1.0), &one, 5), 2);
        let m = model(thirds(3), 0.5, 1.5);
        let mut prev = 0;
        for t in 1..500 {
            let h = h_of_t(&m, &HmaxSchedule::constant(4).unwrap(), t);
            assert!(h >= prev);
            prev = h;
        }
        // A growing h_max can lower h(t): at t = 4 → 5, √t rounds up from 2 to 3.
        let flat = model(vec![1.0; 2], 0.0, 1.0);
        assert_eq!(h_of_t(&flat, &HmaxSchedule::Sqrt, 4), 1);
        assert_eq!(h_of_t(&flat, &HmaxSchedule::Sqrt, 5), 1);
        assert_eq!(h_of_t(&flat, &HmaxSchedule::Sqrt, 9), 2);
        assert_eq!(h_of_t(&flat, &HmaxSchedule::Sqrt, 10), 2);
    }

    #[test]
    fn finite_time_curve_examples() {
        let m = model(thirds(4), 0.0, 1.0);
        let w = WeightVector::ones(2);
        let curve = finite_time_curve(&m, &w, &HmaxSchedule::Sqrt, 0.0, 200);
        assert_eq!(curve.points[0].t, 1);
        assert_eq!(curve.points[0].h, 0);
        assert_eq!(curve.points[0].bound, 1.0);
        assert!(curve.points.windows(2).all(|p| p[1].bound <= p[0].bound));
        let shifted = finite_time_curve(&m, &w, &HmaxSchedule::Sqrt, 0.25, 10);
        assert!(shifted
            .points
            .iter()
            .all(|p| p.with_offset == p.bound + 0.25));
    }

    #[test]
    fn extrapolation_keeps_the_last_ratio() {
        let m = model(thirds(2), 0.0, 1.0);
        assert!((m.delta_at(3) - 3f64.powi(-3)).abs() < 1e-15);
        assert!((m.delta_at(6) - 3f64.powi(-6)).abs() < 1e-15);
        let flat = model(vec![0.5, 0.5], 0.0, 1.0);
        assert!(flat.delta_at(5) < 0.5 && flat.delta_at(5) > 0.0);
        assert!(
            SmoothnessModel::new(vec![0.5, 1.0], 0.0, 1.0, SmoothnessProvenance::Analytic).is_err()
        );
        assert!(SmoothnessModel::new(vec![], 0.0, 1.0, SmoothnessProvenance::Analytic).is_err());
    }

    #[test]
    fn regret_is_indicator_minus_offset() {
        let p = problem_by_name("eq7-a", None).unwrap();
        let reference = reference_set(&p, 2001, SamplingScheme::Grid).unwrap();
        let trace = run(&p, &WooConfig::default().with_budget(100)).unwrap();
        let ind = indicator_series(&trace, &reference).unwrap();
        let r = regret(&trace, &reference, Some(0.125)).unwrap();
        for (a, b) in r.iter().zip(&ind.values) {
            assert_eq!(*a, b - 0.125);
        }
        assert!(regret(&trace, &reference, None).is_err());
        assert!(r.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn archive_equal_to_reference_has_zero_indicator() {
        let p = problem_by_name("eq7-c", None).unwrap();
        let trace = run(&p, &WooConfig::default().with_budget(60)).unwrap();
        let front: Vec<ObjectiveVector> = trace.archive.objectives().cloned().collect();
        let reference = ReferenceSet::new(front, Provenance::Analytic, Some(0.0)).unwrap();
        let ind = indicator_series(&trace, &reference).unwrap();
        assert_eq!(*ind.values.last().unwrap(), 0.0);
        let r = regret_from(&ind.values, 0.1);
        assert_eq!(*r.last().unwrap(), -0.1);
    }

    #[test]
    fn offset_on_coincident_optima_is_small() {
        let p = problem_by_name("eq7-d", None).unwrap();
        let s = TchebycheffScalarizer::standard(2);
        let reference = reference_set(&p, 100_000, SamplingScheme::Grid).unwrap();
        let off = compute_offset(&p, &s, &reference, 100_000).unwrap();
        assert!(off.value.abs() <= 1e-4);
        assert!((off.x[0] - 0.57).abs() <= 1e-4);
    }

    #[test]
    fn ideal_point_is_enforced() {
        let p = problem_by_name("eq7-a", None).unwrap();
        assert!(require_ideal(&p, &TchebycheffScalarizer::standard(2)).is_ok());
        let shifted = TchebycheffScalarizer::new(
            WeightVector::ones(2),
            crate::scalarization::ReferencePoint::new(vec![0.1, 0.0]).unwrap(),
            crate::space::NormOrder::Infinity,
        )
        .unwrap();
        assert!(require_ideal(&p, &shifted).is_err());
    }

    #[test]
    fn bound_check_reports_first_violation() {
        let ts = [1, 2, 3];
        let c = check_bounds(
            &ts,
            &[0.5, 0.4, 0.3],
            &[0.5, 0.5, 0.2],
            &[1.0, 0.39, 0.35],
            1e-6,
        );
        assert_eq!(c.per_iteration_first_violation, Some(3));
        assert_eq!(c.bound_first_violation, Some(2));
        assert!(!c.passed());
        assert!((c.mean_gap - (0.5 - 0.01 + 0.05) / 3.0).abs() < 1e-12);
    }
}
