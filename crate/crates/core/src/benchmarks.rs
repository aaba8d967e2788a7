//! Test problems and reference-set generation.
//!
//! The shipped problems are the synthetic bi-objective family
//! `f_j(x) = ‖x − c_j‖∞^{α_j}` on `[−1, 1]^n` (eight named instances, `eq7-a`
//! to `eq7-h`) and the Fonseca–Fleming problem on `[−4, 4]²`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pareto::{Provenance, ReferenceSet};
use crate::space::{DecisionVector, Hyperbox, ObjectiveVector};

type Evaluator = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type FrontSampler = Arc<dyn Fn(usize) -> Vec<Vec<f64>> + Send + Sync>;

/// `m` black-box objectives over a box domain, plus whatever is known about
/// them (Lipschitz constants, per-objective minimizers, ideal point, front).
#[derive(Clone)]
pub struct MultiObjectiveProblem {
    name: String,
    domain: Hyperbox,
    m: usize,
    evaluator: Evaluator,
    lipschitz: Option<Vec<f64>>,
    minimizers: Option<Vec<DecisionVector>>,
    ideal: Option<ObjectiveVector>,
    front: Option<FrontSampler>,
    description: String,
}

impl fmt::Debug for MultiObjectiveProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiObjectiveProblem")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("m", &self.m)
            .field("lipschitz", &self.lipschitz)
            .field("minimizers", &self.minimizers)
            .field("ideal", &self.ideal)
            .finish_non_exhaustive()
    }
}

impl MultiObjectiveProblem {
    pub fn new<F>(name: impl Into<String>, domain: Hyperbox, m: usize, evaluator: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        if m == 0 {
            return Err(Error::config("a problem needs at least one objective"));
        }
        if domain.dim() == 0 {
            return Err(Error::config(
                "a problem needs at least one decision variable",
            ));
        }
        Ok(Self {
            name: name.into(),
            domain,
            m,
            evaluator: Arc::new(evaluator),
            lipschitz: None,
            minimizers: None,
            ideal: None,
            front: None,
            description: String::new(),
        })
    }

    /// Per-objective Lipschitz constants with respect to ‖·‖₂.
    pub fn with_lipschitz(mut self, constants: Vec<f64>) -> Result<Self> {
        if constants.len() != self.m || constants.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return Err(Error::config(
                "need one finite, non-negative Lipschitz constant per objective",
            ));
        }
        self.lipschitz = Some(constants);
        Ok(self)
    }

    pub fn with_minimizers(mut self, minimizers: Vec<DecisionVector>) -> Result<Self> {
        if minimizers.len() != self.m || minimizers.iter().any(|x| !self.domain.contains(x)) {
            return Err(Error::config("need one in-domain minimizer per objective"));
        }
        self.minimizers = Some(minimizers);
        Ok(self)
    }

    pub fn with_ideal(mut self, ideal: ObjectiveVector) -> Result<Self> {
        if ideal.dim() != self.m {
            return Err(Error::config(
                "ideal point dimension differs from objective count",
            ));
        }
        self.ideal = Some(ideal);
        Ok(self)
    }

    /// Attaches a sampler of `k` points on the true Pareto front.
    pub fn with_front<F>(mut self, sampler: F) -> Self
    where
        F: Fn(usize) -> Vec<Vec<f64>> + Send + Sync + 'static,
    {
        self.front = Some(Arc::new(sampler));
        self
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = description.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn domain(&self) -> &Hyperbox {
        &self.domain
    }

    pub fn num_variables(&self) -> usize {
        self.domain.dim()
    }

    pub fn num_objectives(&self) -> usize {
        self.m
    }

    pub fn lipschitz(&self) -> Option<&[f64]> {
        self.lipschitz.as_deref()
    }

    pub fn minimizers(&self) -> Option<&[DecisionVector]> {
        self.minimizers.as_deref()
    }

    pub fn ideal(&self) -> Option<&ObjectiveVector> {
        self.ideal.as_ref()
    }

    pub fn has_analytic_front(&self) -> bool {
        self.front.is_some()
    }

    /// Evaluates `f(x)`. Non-finite output is an error carrying the input.
    pub fn evaluate(&self, x: &[f64]) -> Result<ObjectiveVector> {
        if x.len() != self.num_variables() {
            return Err(Error::domain(format!(
                "{} expects {} decision variables, got {}",
                self.name,
                self.num_variables(),
                x.len()
            )));
        }
        let values = (self.evaluator)(x);
        if values.len() != self.m {
            return Err(Error::domain(format!(
                "{} returned {} objectives, declared {}",
                self.name,
                values.len(),
                self.m
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                x: x.to_vec(),
                values,
            });
        }
        ObjectiveVector::new(values)
    }

    /// Analytic reference set of `k` front samples, if a sampler is attached.
    pub fn analytic_reference(&self, k: usize) -> Option<Result<ReferenceSet>> {
        let sampler = self.front.as_ref()?;
        let points = sampler(k.max(1))
            .into_iter()
            .map(ObjectiveVector::new)
            .collect::<Result<Vec<_>>>();
        Some(points.and_then(|p| ReferenceSet::new(p, Provenance::Analytic, Some(0.0))))
    }
}

/// One member of the synthetic family `f_j(x) = ‖x − c_j‖∞^{α_j}` on
/// `[−1, 1]^n`, with constant-vector centers `c_j = (c_j, …, c_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticInstance {
    pub label: char,
    pub centers: [f64; 2],
    pub alphas: [f64; 2],
    pub n: usize,
}

/// Center pairs of the four conflict levels, from most to least conflicting.
pub const SYNTHETIC_CENTERS: [[f64; 2]; 4] = [[0.0, 1.0], [0.21, 0.81], [0.47, 0.61], [0.57, 0.57]];

impl SyntheticInstance {
    /// Instances `a`–`d` are one-dimensional, `e`–`h` two-dimensional, each
    /// run through the four center pairs in order. Exponents default to 1.
    pub fn labelled(label: char) -> Result<Self> {
        let k = match label {
            'a'..='h' => label as usize - 'a' as usize,
            other => {
                return Err(Error::config(format!(
                    "unknown synthetic instance '{other}'"
                )))
            }
        };
        Ok(Self {
            label,
            centers: SYNTHETIC_CENTERS[k % 4],
            alphas: [1.0, 1.0],
            n: if k < 4 { 1 } else { 2 },
        })
    }

    pub fn with_alphas(mut self, alphas: [f64; 2]) -> Self {
        self.alphas = alphas;
        self
    }

    pub fn name(&self) -> String {
        format!("eq7-{}", self.label)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::config("synthetic instance needs n >= 1"));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::config(format!(
                "exponent alpha must be positive, got {a}"
            )));
        }
        if let Some(c) = self.centers.iter().find(|c| !(-1.0..=1.0).contains(*c)) {
            return Err(Error::config(format!("center {c} lies outside [-1, 1]")));
        }
        Ok(())
    }
}

fn inf_distance(x: &[f64], c: f64) -> f64 {
    x.iter().fold(0.0, |acc, v| acc.max((v - c).abs()))
}

/// Builds the synthetic problem for `instance`.
///
/// Lipschitz constants (w.r.t. ‖·‖₂) are 1 for `α = 1` and `α·D^{α−1}` for
/// `α > 1`, with `D` the largest ‖·‖∞ distance from the center to the domain.
/// For `α < 1` the objective is not Lipschitz and no constants are recorded.
pub fn synthetic(instance: &SyntheticInstance) -> Result<MultiObjectiveProblem> {
    instance.validate()?;
    let n = instance.n;
    let [c1, c2] = instance.centers;
    let [a1, a2] = instance.alphas;
    let domain = Hyperbox::cube(n, -1.0, 1.0)?;
    let lipschitz: Option<Vec<f64>> = [(c1, a1), (c2, a2)]
        .iter()
        .map(|&(c, a)| {
            let reach = domain.max_inf_distance_from(&vec![c; n]);
            if a == 1.0 {
                Some(1.0)
            } else if a > 1.0 {
                Some(a * reach.powf(a - 1.0))
            } else {
                None
            }
        })
        .collect();
    let spread = (c2 - c1).abs();
    let mut problem =
        MultiObjectiveProblem::new(instance.name(), domain, 2, move |x: &[f64]| {
            vec![inf_distance(x, c1).powf(a1), inf_distance(x, c2).powf(a2)]
        })?
        .with_minimizers(vec![
            DecisionVector::new(vec![c1; n])?,
            DecisionVector::new(vec![c2; n])?,
        ])?
        .with_ideal(ObjectiveVector::new(vec![0.0, 0.0])?)?
        .with_front(move |k| {
            if spread == 0.0 {
                return vec![vec![0.0, 0.0]];
            }
            let k = k.max(2);
            (0..k)
                .map(|i| {
                    let s = spread * i as f64 / (k - 1) as f64;
                    vec![s.powf(a1), (spread - s).powf(a2)]
                })
                .collect()
        })
        .with_description(format!(
            "n={n}, centers=({c1}, {c2}), alpha=({a1}, {a2}), domain [-1,1]^{n}"
        ));
    if let Some(l) = lipschitz {
        problem = problem.with_lipschitz(l)?;
    }
    Ok(problem)
}

/// Fonseca–Fleming on `[−4, 4]²`:
/// `f₁ = 1 − exp(−Σ(x_i − 1/√2)²)`, `f₂ = 1 − exp(−Σ(x_i + 1/√2)²)`.
pub fn fonseca_fleming() -> MultiObjectiveProblem {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let f = move |x: &[f64], shift: f64| {
        let r2: f64 = x.iter().map(|v| (v - shift) * (v - shift)).sum();
        1.0 - (-r2).exp()
    };
    // sup ‖∇f_j‖₂ = sup 2r·exp(−r²) = √2·exp(−1/2), attained at r = 1/√2.
    let lipschitz = 2f64.sqrt() * (-0.5f64).exp();
    MultiObjectiveProblem::new(
        "fonseca-fleming",
        Hyperbox::cube(2, -4.0, 4.0).expect("valid box"),
        2,
        move |x: &[f64]| vec![f(x, s), f(x, -s)],
    )
    .and_then(|p| p.with_lipschitz(vec![lipschitz, lipschitz]))
    .and_then(|p| {
        p.with_minimizers(vec![
            DecisionVector::new(vec![s, s])?,
            DecisionVector::new(vec![-s, -s])?,
        ])
    })
    .and_then(|p| p.with_ideal(ObjectiveVector::new(vec![0.0, 0.0])?))
    .expect("Fonseca-Fleming metadata is consistent")
    .with_front(move |k| {
        let k = k.max(2);
        (0..k)
            .map(|i| {
                let t = -s + 2.0 * s * i as f64 / (k - 1) as f64;
                let d1 = 2.0 * (t - s) * (t - s);
                let d2 = 2.0 * (t + s) * (t + s);
                vec![1.0 - (-d1).exp(), 1.0 - (-d2).exp()]
            })
            .collect()
    })
    .with_description("n=2, domain [-4,4]^2")
}

/// Registered problem names, in display order.
pub fn problem_names() -> Vec<String> {
    ('a'..='h')
        .map(|c| format!("eq7-{c}"))
        .chain(std::iter::once("fonseca-fleming".to_string()))
        .collect()
}

/// Looks a problem up by name. `alphas` applies to the synthetic family only.
pub fn problem_by_name(name: &str, alphas: Option<[f64; 2]>) -> Result<MultiObjectiveProblem> {
    if name == "fonseca-fleming" {
        return Ok(fonseca_fleming());
    }
    let label = name
        .strip_prefix("eq7-")
        .and_then(|rest| {
            let mut chars = rest.chars();
            match (chars.next(), chars.next()) {
                (Some(c @ 'a'..='h'), None) => Some(c),
                _ => None,
            }
        })
        .ok_or_else(|| Error::config(format!("unknown problem '{name}'")))?;
    let mut instance = SyntheticInstance::labelled(label)?;
    if let Some(a) = alphas {
        instance = instance.with_alphas(a);
    }
    synthetic(&instance)
}

/// How reference-set sample points are laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingScheme {
    /// Tensor grid including the box faces; axis counts as equal as possible.
    #[default]
    Grid,
    /// Halton sequence.
    LowDiscrepancy,
}

impl SamplingScheme {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(SamplingScheme::Grid),
            "low-discrepancy" | "halton" => Ok(SamplingScheme::LowDiscrepancy),
            other => Err(Error::config(format!("unknown sampling scheme '{other}'"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SamplingScheme::Grid => "grid",
            SamplingScheme::LowDiscrepancy => "low-discrepancy",
        }
    }
}

impl fmt::Display for SamplingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-axis point counts whose product is the largest value ≤ `budget`
/// reachable with counts differing by at most one.
pub fn grid_shape(n: usize, budget: usize) -> Vec<usize> {
    let budget = budget.max(1);
    let mut k = (budget as f64).powf(1.0 / n as f64).floor().max(1.0) as usize;
    let pow = |k: usize| (0..n).try_fold(1usize, |acc, _| acc.checked_mul(k));
    while pow(k + 1).is_some_and(|p| p <= budget) {
        k += 1;
    }
    while k > 1 && pow(k).is_none_or(|p| p > budget) {
        k -= 1;
    }
    let mut shape = vec![k; n];
    let mut total = pow(k).unwrap_or(usize::MAX);
    for count in shape.iter_mut() {
        let grown = total / k * (k + 1);
        if grown <= budget {
            *count = k + 1;
            total = grown;
        }
    }
    shape
}

/// Tensor grid over `domain` with the given per-axis counts. Axes with a
/// single point use the box center. The last axis varies fastest.
pub fn grid_points(domain: &Hyperbox, shape: &[usize]) -> Vec<Vec<f64>> {
    let n = domain.dim();
    let axes: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let (lo, hi, k) = (domain.lower()[i], domain.upper()[i], shape[i]);
            if k <= 1 {
                vec![0.5 * (lo + hi)]
            } else {
                (0..k)
                    .map(|j| {
                        if j == k - 1 {
                            hi
                        } else {
                            lo + (hi - lo) * j as f64 / (k - 1) as f64
                        }
                    })
                    .collect()
            }
        })
        .collect();
    let total: usize = axes.iter().map(Vec::len).product();
    (0..total)
        .map(|mut flat| {
            let mut x = vec![0.0; n];
            for i in (0..n).rev() {
                let len = axes[i].len();
                x[i] = axes[i][flat % len];
                flat /= len;
            }
            x
        })
        .collect()
}

fn first_primes(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|p| *p * *p <= candidate)
            .all(|p| !candidate.is_multiple_of(*p))
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    out
}

/// First `count` Halton points (indices 1..=count) mapped into `domain`.
pub fn halton_points(domain: &Hyperbox, count: usize) -> Vec<Vec<f64>> {
    let bases = first_primes(domain.dim());
    (1..=count as u64)
        .map(|i| {
            bases
                .iter()
                .enumerate()
                .map(|(axis, &b)| domain.lower()[axis] + domain.width(axis) * radical_inverse(i, b))
                .collect()
        })
        .collect()
}

/// Samples `budget` points, keeps the non-dominated objective vectors and
/// records how they were produced. These evaluations are not charged to any
/// optimization run.
///
/// The recorded resolution is `max_j L_j · r` where `r` bounds the ‖·‖₂
/// distance from any domain point to the nearest sample: half the grid
/// diagonal for grids, and the same quantity at the equivalent grid spacing
/// for Halton points (a heuristic there).
pub fn reference_set(
    problem: &MultiObjectiveProblem,
    budget: usize,
    scheme: SamplingScheme,
) -> Result<ReferenceSet> {
    if budget == 0 {
        return Err(Error::config("reference budget must be positive"));
    }
    let domain = problem.domain();
    let n = domain.dim();
    let shape = grid_shape(n, budget);
    let points = match scheme {
        SamplingScheme::Grid => grid_points(domain, &shape),
        SamplingScheme::LowDiscrepancy => halton_points(domain, budget),
    };
    let values = points
        .par_iter()
        .map(|x| problem.evaluate(x))
        .collect::<Result<Vec<_>>>()?;
    let evaluated = values.len();
    let covering_radius = (0..n)
        .map(|i| {
            let gaps = if shape[i] > 1 { shape[i] - 1 } else { 1 };
            let half = 0.5 * domain.width(i) / gaps as f64;
            let half = if shape[i] > 1 {
                half
            } else {
                domain.width(i) / 2.0
            };
            match scheme {
                SamplingScheme::Grid => half * half,
                SamplingScheme::LowDiscrepancy => 4.0 * half * half,
            }
        })
        .sum::<f64>()
        .sqrt();
    let resolution = problem
        .lipschitz()
        .map(|l| l.iter().fold(0.0f64, |acc, v| acc.max(*v)) * covering_radius);
    ReferenceSet::new(
        values,
        Provenance::Sampled {
            scheme: scheme.as_str().to_string(),
            budget,
            evaluated,
        },
        resolution,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pareto::dominates;

    #[test]
    fn synthetic_examples() {
        let a = synthetic(&SyntheticInstance::labelled('a').unwrap()).unwrap();
        assert_eq!(a.evaluate(&[0.5]).unwrap().as_slice(), &[0.5, 0.5]);
        let d = synthetic(&SyntheticInstance::labelled('d').unwrap()).unwrap();
        assert_eq!(d.evaluate(&[0.57]).unwrap().as_slice(), &[0.0, 0.0]);
        let e = synthetic(&SyntheticInstance::labelled('e').unwrap()).unwrap();
        assert_eq!(e.num_variables(), 2);
        assert_eq!(e.evaluate(&[0.0, 0.0]).unwrap().as_slice(), &[0.0, 1.0]);
    }

    #[test]
    fn synthetic_rejects_bad_instances() {
        let bad = SyntheticInstance::labelled('a')
            .unwrap()
            .with_alphas([0.0, 1.0]);
        assert!(synthetic(&bad).is_err());
        let mut outside = SyntheticInstance::labelled('b').unwrap();
        outside.centers = [0.0, 1.5];
        assert!(synthetic(&outside).is_err());
        assert!(SyntheticInstance::labelled('z').is_err());
    }

    #[test]
    fn lipschitz_metadata_for_exponents() {
        let p = synthetic(
            &SyntheticInstance::labelled('a')
                .unwrap()
                .with_alphas([2.0, 0.5]),
        )
        .unwrap();
        assert!(p.lipschitz().is_none());
        let p = synthetic(
            &SyntheticInstance::labelled('a')
                .unwrap()
                .with_alphas([2.0, 3.0]),
        )
        .unwrap();
        // Center 0: reach 1 ⇒ 2·1; center 1: reach 2 ⇒ 3·2² = 12.
        assert_eq!(p.lipschitz().unwrap(), &[2.0, 12.0]);
    }

    #[test]
    fn fonseca_fleming_examples() {
        let p = fonseca_fleming();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let y = p.evaluate(&[s, s]).unwrap();
        assert_eq!(y[0], 0.0);
        assert!((y[1] - (1.0 - (-4.0f64).exp())).abs() < 1e-15);
        assert!((y[1] - 0.981684).abs() < 1e-6);
        let origin = p.evaluate(&[0.0, 0.0]).unwrap();
        assert_eq!(origin[0], origin[1]);
        assert!((origin[0] - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn known_minimizers_attain_the_ideal_point() {
        for name in problem_names() {
            let p = problem_by_name(&name, None).unwrap();
            let ideal = p.ideal().unwrap();
            for (j, x) in p.minimizers().unwrap().iter().enumerate() {
                let y = p.evaluate(x).unwrap();
                assert!((y[j] - ideal[j]).abs() <= 1e-12, "{name} objective {j}");
            }
        }
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(problem_names().len(), 9);
        assert!(problem_by_name("eq7-i", None).is_err());
        assert!(problem_by_name("eq7-ab", None).is_err());
        assert!(problem_by_name("zdt1", None).is_err());
        assert_eq!(problem_by_name("eq7-f", None).unwrap().num_variables(), 2);
    }

    #[test]
    fn grid_shape_is_balanced() {
        assert_eq!(grid_shape(1, 10), vec![10]);
        assert_eq!(grid_shape(2, 500_000), vec![707, 707]);
        assert_eq!(grid_shape(2, 12), vec![4, 3]);
        assert_eq!(grid_shape(3, 1), vec![1, 1, 1]);
        for (n, b) in [(1, 7), (2, 1000), (3, 999), (2, 99_999)] {
            let s = grid_shape(n, b);
            let total: usize = s.iter().product();
            assert!(total <= b);
            let (lo, hi) = (s.iter().min().unwrap(), s.iter().max().unwrap());
            assert!(hi - lo <= 1);
        }
    }

    #[test]
    fn grid_includes_faces() {
        let d = Hyperbox::new(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap();
        let pts = grid_points(&d, &[2, 3]);
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![0.0, 0.0]);
        assert_eq!(pts[5], vec![1.0, 2.0]);
        assert_eq!(grid_points(&d, &[1, 1]), vec![vec![0.5, 1.0]]);
    }

    #[test]
    fn halton_points_stay_in_domain() {
        let d = Hyperbox::cube(3, -4.0, 4.0).unwrap();
        let pts = halton_points(&d, 200);
        assert!(pts.iter().all(|x| d.contains(x)));
        assert_eq!(pts[0], vec![0.0, -4.0 + 8.0 / 3.0, -4.0 + 8.0 / 5.0]);
    }

    #[test]
    fn reference_for_first_instance_contains_balanced_point() {
        let p = problem_by_name("eq7-a", None).unwrap();
        let r = reference_set(&p, 100_000, SamplingScheme::Grid).unwrap();
        let closest = r
            .points()
            .iter()
            .map(|y| (y[0] - 0.5).abs().max((y[1] - 0.5).abs()))
            .fold(f64::INFINITY, f64::min);
        assert!(closest <= 1e-4, "closest balanced point at {closest}");
        assert!(r.resolution().unwrap() <= 1e-4);
    }

    #[test]
    fn reference_collapses_for_coincident_centers() {
        let p = problem_by_name("eq7-d", None).unwrap();
        let r = reference_set(&p, 10_001, SamplingScheme::Grid).unwrap();
        assert_eq!(r.len(), 1);
        let y = &r.points()[0];
        assert!(y[0] <= r.resolution().unwrap() && y[0] == y[1]);
    }

    #[test]
    fn fonseca_fleming_reference_range() {
        let p = fonseca_fleming();
        let r = reference_set(&p, 500_000, SamplingScheme::Grid).unwrap();
        assert!(r.len() > 10);
        assert!(r
            .points()
            .iter()
            .all(|y| (0.0..1.0).contains(&y[0]) && (0.0..1.0).contains(&y[1])));
    }

    #[test]
    fn small_reference_is_mutually_nondominated() {
        for name in ["eq7-b", "eq7-f", "fonseca-fleming"] {
            let p = problem_by_name(name, None).unwrap();
            for scheme in [SamplingScheme::Grid, SamplingScheme::LowDiscrepancy] {
                let r = reference_set(&p, 400, scheme).unwrap();
                let pts = r.points();
                for (i, a) in pts.iter().enumerate() {
                    for (k, b) in pts.iter().enumerate() {
                        assert!(i == k || (!dominates(a, b) && a != b), "{name} {scheme}");
                    }
                }
            }
        }
    }

    #[test]
    fn analytic_fronts_sit_on_sampled_fronts() {
        for name in ["eq7-b", "eq7-g", "fonseca-fleming"] {
            let p = problem_by_name(name, None).unwrap();
            let analytic = p.analytic_reference(200).unwrap().unwrap();
            let sampled = reference_set(&p, 250_000, SamplingScheme::Grid).unwrap();
            let tol = sampled.resolution().unwrap() + 1e-12;
            let to_vec = |r: &ReferenceSet| -> Vec<Vec<f64>> {
                r.points().iter().map(|y| y.to_vec()).collect()
            };
            let gap =
                crate::pareto::epsilon_indicator(&to_vec(&sampled), &to_vec(&analytic)).unwrap();
            assert!(
                gap <= tol,
                "{name}: sampled front misses analytic front by {gap} > {tol}"
            );
        }
    }
}
