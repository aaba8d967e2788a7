//! Weighted Tchebycheff scalarization `g_w(x) = ‖w ⊙ |f(x) − z*|‖_p`.
//!
//! `p = ∞` is the Tchebycheff function proper and the only order used by the
//! bound machinery; `p = 1` and `p = 2` complete the weighted-norm family.

use serde::{Deserialize, Serialize};

use crate::benchmarks::MultiObjectiveProblem;
use crate::error::{Error, Result};
use crate::space::{norm_unchecked, DecisionVector, EvaluationCounter, NormOrder, ObjectiveVector};

/// Strictly positive, finite objective weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::config("weight vector must not be empty"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::config(format!(
                "weights must be strictly positive and finite, got {w}"
            )));
        }
        Ok(Self(weights))
    }

    pub fn ones(m: usize) -> Self {
        Self(vec![1.0; m.max(1)])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `max_j 1/w_j`, the factor converting `g_w` into an ε-indicator bound.
    pub fn max_inverse(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, w| acc.max(1.0 / w))
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

/// Reference point `z*`. Bound checks require it to be the ideal point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ReferencePoint(Vec<f64>);

impl ReferencePoint {
    pub fn new(z: Vec<f64>) -> Result<Self> {
        if z.is_empty() || z.iter().any(|v| !v.is_finite()) {
            return Err(Error::config(
                "reference point must be non-empty and finite",
            ));
        }
        Ok(Self(z))
    }

    pub fn zeros(m: usize) -> Self {
        Self(vec![0.0; m.max(1)])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl TryFrom<Vec<f64>> for ReferencePoint {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ReferencePoint> for Vec<f64> {
    fn from(z: ReferencePoint) -> Self {
        z.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TchebycheffScalarizer {
    weights: WeightVector,
    reference: ReferencePoint,
    order: NormOrder,
}

impl TchebycheffScalarizer {
    pub fn new(weights: WeightVector, reference: ReferencePoint, order: NormOrder) -> Result<Self> {
        if weights.dim() != reference.dim() {
            return Err(Error::config(format!(
                "weights have {} entries but the reference point has {}",
                weights.dim(),
                reference.dim()
            )));
        }
        Ok(Self {
            weights,
            reference,
            order,
        })
    }

    /// Unit weights, zero reference, `p = ∞`.
    pub fn standard(m: usize) -> Self {
        Self {
            weights: WeightVector::ones(m),
            reference: ReferencePoint::zeros(m),
            order: NormOrder::Infinity,
        }
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn reference(&self) -> &ReferencePoint {
        &self.reference
    }

    pub fn order(&self) -> NormOrder {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.weights.dim()
    }

    pub fn scalarize(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.dim() {
            return Err(Error::domain(format!(
                "objective vector has {} entries, scalarizer expects {}",
                y.len(),
                self.dim()
            )));
        }
        if let Some(v) = y.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "cannot scalarize non-finite value {v}"
            )));
        }
        Ok(self.scalarize_unchecked(y))
    }

    pub(crate) fn scalarize_unchecked(&self, y: &[f64]) -> f64 {
        let weighted: Vec<f64> = y
            .iter()
            .zip(&self.reference.0)
            .zip(&self.weights.0)
            .map(|((yj, zj), wj)| wj * (yj - zj).abs())
            .collect();
        norm_unchecked(&weighted, self.order)
    }
}

/// Lipschitz constant of `g_w` (ℓ∞ form) for objectives with constants `L_j`
/// with respect to ‖·‖₂: `√m · max_j w_j L_j`.
pub fn lipschitz_bound(constants: &[f64], weights: &WeightVector) -> Result<f64> {
    if constants.len() != weights.dim() {
        return Err(Error::domain(format!(
            "{} Lipschitz constants for {} weights",
            constants.len(),
            weights.dim()
        )));
    }
    if let Some(l) = constants.iter().find(|l| l.is_nan() || **l < 0.0) {
        return Err(Error::domain(format!(
            "Lipschitz constants must be >= 0, got {l}"
        )));
    }
    let worst = constants
        .iter()
        .zip(weights.as_slice())
        .fold(0.0f64, |acc, (l, w)| acc.max(l * w));
    Ok((constants.len() as f64).sqrt() * worst)
}

/// A single-objective function the partition tree can sample.
pub trait ScalarFunction {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64>;
}

impl<F: FnMut(&[f64]) -> f64> ScalarFunction for F {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        Ok(self(x))
    }
}

/// One paid evaluation of the multi-objective function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub x: DecisionVector,
    pub y: ObjectiveVector,
    pub g: f64,
}

/// `x ↦ g_w(f(x))` over a problem, charging each call to a budget and
/// logging the raw objective vectors.
pub struct ScalarizedObjective<'p> {
    problem: &'p MultiObjectiveProblem,
    scalarizer: TchebycheffScalarizer,
    counter: EvaluationCounter,
    samples: Vec<Sample>,
    best: Option<usize>,
}

impl<'p> ScalarizedObjective<'p> {
    pub fn new(
        problem: &'p MultiObjectiveProblem,
        scalarizer: TchebycheffScalarizer,
        budget: usize,
    ) -> Result<Self> {
        if scalarizer.dim() != problem.num_objectives() {
            return Err(Error::config(format!(
                "scalarizer has dimension {} but {} has {} objectives",
                scalarizer.dim(),
                problem.name(),
                problem.num_objectives()
            )));
        }
        Ok(Self {
            problem,
            scalarizer,
            counter: EvaluationCounter::new(budget)?,
            samples: Vec::new(),
            best: None,
        })
    }

    pub fn counter(&self) -> &EvaluationCounter {
        &self.counter
    }

    pub fn scalarizer(&self) -> &TchebycheffScalarizer {
        &self.scalarizer
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    /// Index of the earliest sample with the smallest `g`.
    pub fn best_index(&self) -> Option<usize> {
        self.best
    }

    pub fn into_samples(self) -> Vec<Sample> {
        self.samples
    }
}

impl ScalarFunction for ScalarizedObjective<'_> {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        self.counter.charge()?;
        let y = self.problem.evaluate(x)?;
        let g = self.scalarizer.scalarize_unchecked(&y);
        let x = DecisionVector::new(x.to_vec())?;
        let improves = match self.best {
            None => true,
            Some(b) => g < self.samples[b].g,
        };
        if improves {
            self.best = Some(self.samples.len());
        }
        self.samples.push(Sample { x, y, g });
        Ok(g)
    }
}
