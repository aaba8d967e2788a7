//! Shared numeric vocabulary: decision and objective vectors, box domains,
//! vector norms and evaluation-budget accounting.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::domain(format!("{what} must not be empty")));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::domain(format!(
            "{what} contains non-finite value {bad}"
        )));
    }
    Ok(())
}

macro_rules! finite_vector {
    ($(#[$meta:meta])* $name:ident, $what:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(Vec<f64>);

        impl $name {
            /// Wraps `values`, rejecting empty or non-finite input.
            pub fn new(values: Vec<f64>) -> Result<Self> {
                check_finite(&values, $what)?;
                Ok(Self(values))
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.0
            }

            pub fn into_inner(self) -> Vec<f64> {
                self.0
            }
        }

        impl Deref for $name {
            type Target = [f64];

            fn deref(&self) -> &[f64] {
                &self.0
            }
        }

        impl TryFrom<Vec<f64>> for $name {
            type Error = Error;

            fn try_from(values: Vec<f64>) -> Result<Self> {
                Self::new(values)
            }
        }

        impl TryFrom<&[f64]> for $name {
            type Error = Error;

            fn try_from(values: &[f64]) -> Result<Self> {
                Self::new(values.to_vec())
            }
        }
    };
}

finite_vector!(
    /// A point `x` of the decision space. Always non-empty and finite.
    DecisionVector,
    "decision vector"
);

finite_vector!(
    /// An objective vector `y = f(x)`. Always non-empty and finite.
    ObjectiveVector,
    "objective vector"
);

/// Axis-aligned box `[lower, upper]` in ℝⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperbox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Hyperbox {
    /// Zero-width intervals are allowed; inverted ones are not.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::domain(format!(
                "box bounds have different lengths ({} vs {})",
                lower.len(),
                upper.len()
            )));
        }
        check_finite(&lower, "box lower bound")?;
        check_finite(&upper, "box upper bound")?;
        if let Some(i) = (0..lower.len()).find(|&i| lower[i] > upper[i]) {
            return Err(Error::domain(format!(
                "box axis {i} has lower {} > upper {}",
                lower[i], upper[i]
            )));
        }
        Ok(Self { lower, upper })
    }

    /// The cube `[lo, hi]^n`.
    pub fn cube(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; n], vec![hi; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| 0.5 * (lo + hi))
            .collect()
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.width(i)).product()
    }

    /// True when every axis has positive width.
    pub fn is_solid(&self) -> bool {
        (0..self.dim()).all(|i| self.width(i) > 0.0)
    }

    /// Closed-box membership.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    /// Projects `x` onto the box.
    pub fn clamp(&self, x: &mut [f64]) {
        for (i, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lower[i], self.upper[i]);
        }
    }

    /// Largest ‖x − c‖∞ over the box.
    pub fn max_inf_distance_from(&self, c: &[f64]) -> f64 {
        (0..self.dim())
            .map(|i| {
                (self.lower[i] - c[i])
                    .abs()
                    .max((self.upper[i] - c[i]).abs())
            })
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Hyperbox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.dim())
            .map(|i| format!("[{}, {}]", self.lower[i], self.upper[i]))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Norm order for [`norm`]: ℓ₁, ℓ₂ or ℓ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum NormOrder {
    One,
    Two,
    #[default]
    Infinity,
}

impl NormOrder {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "l1" | "one" => Ok(NormOrder::One),
            "2" | "l2" | "two" => Ok(NormOrder::Two),
            "inf" | "infinity" | "linf" | "max" => Ok(NormOrder::Infinity),
            other => Err(Error::config(format!("unknown norm order '{other}'"))),
        }
    }
}

impl fmt::Display for NormOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormOrder::One => "1",
            NormOrder::Two => "2",
            NormOrder::Infinity => "inf",
        })
    }
}

/// ℓp norm of `v`.
pub fn norm(v: &[f64], p: NormOrder) -> Result<f64> {
    check_finite(v, "norm argument")?;
    Ok(norm_unchecked(v, p))
}

pub(crate) fn norm_unchecked(v: &[f64], p: NormOrder) -> f64 {
    match p {
        NormOrder::One => v.iter().map(|x| x.abs()).sum(),
        NormOrder::Two => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        NormOrder::Infinity => v.iter().fold(0.0, |acc, x| acc.max(x.abs())),
    }
}

/// Element-wise (Hadamard) product.
pub fn hadamard(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != b.len() {
        return Err(Error::domain(format!(
            "hadamard length mismatch ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter().zip(b).map(|(x, y)| x * y).collect())
}

/// Counts objective-vector evaluations against a fixed budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationCounter {
    used: usize,
    budget: usize,
}

impl EvaluationCounter {
    pub fn new(budget: usize) -> Result<Self> {
        if budget == 0 {
            return Err(Error::config("evaluation budget must be positive"));
        }
        Ok(Self { used: 0, budget })
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn remaining(&self) -> usize {
        self.budget - self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.budget
    }

    /// Charges one evaluation, or signals exhaustion without charging.
    pub fn charge(&mut self) -> Result<()> {
        if self.is_exhausted() {
            return Err(Error::BudgetExhausted {
                budget: self.budget,
            });
        }
        self.used += 1;
        Ok(())
    }
}
