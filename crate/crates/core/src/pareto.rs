//! Pareto dominance, non-dominated archives and the additive ε-indicator.

use std::cmp::Ordering;
use std::fmt;

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{DecisionVector, ObjectiveVector};

/// How `y1` relates to `y2` under minimization.
///
/// [`compare`] returns the strongest label that applies. Note that a pair
/// with all `y1_j <= y2_j` is either `Equal` or `Dominates`, so `compare`
/// never yields `WeaklyDominates` itself; the variant exists so callers can
/// express the weak relation (see [`DominanceRelation::is_weak`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DominanceRelation {
    StrictlyDominates,
    Dominates,
    WeaklyDominates,
    Incomparable,
    Equal,
}

impl DominanceRelation {
    /// `y1 ⪯ y2`.
    pub fn is_weak(self) -> bool {
        !matches!(self, DominanceRelation::Incomparable)
    }

    /// `y1 ≺ y2` in the Pareto sense.
    pub fn is_dominating(self) -> bool {
        matches!(
            self,
            DominanceRelation::StrictlyDominates | DominanceRelation::Dominates
        )
    }
}

fn check_dims(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::domain(format!(
            "objective dimension mismatch ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Classifies `y1` against `y2`.
pub fn compare(y1: &[f64], y2: &[f64]) -> Result<DominanceRelation> {
    check_dims(y1, y2)?;
    let mut all_le = true;
    let mut all_lt = true;
    let mut all_eq = true;
    for (a, b) in y1.iter().zip(y2) {
        all_le &= a <= b;
        all_lt &= a < b;
        all_eq &= a == b;
    }
    Ok(if all_eq {
        DominanceRelation::Equal
    } else if all_lt {
        DominanceRelation::StrictlyDominates
    } else if all_le {
        DominanceRelation::Dominates
    } else {
        DominanceRelation::Incomparable
    })
}

/// `a ≺ b`: no worse everywhere and better somewhere. Lengths must match.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        strictly_better |= x < y;
    }
    strictly_better
}

/// `a ⪯ b`.
pub fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// A sampled point kept by a [`ParetoArchive`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub x: DecisionVector,
    pub y: ObjectiveVector,
    /// Position in the stream of points offered to the archive.
    pub order: usize,
}

/// Outcome of [`ParetoArchive::insert`].
#[derive(Debug, Clone, PartialEq)]
pub struct InsertionReport {
    pub accepted: bool,
    pub evicted: Vec<ArchiveEntry>,
}

/// Mutually non-dominated set of sampled points with no duplicate objective
/// vectors. When equal vectors are offered, the first one stays.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParetoArchive {
    members: Vec<ArchiveEntry>,
    offered: usize,
    dims: Option<(usize, usize)>,
}

impl ParetoArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in the order they were offered.
    pub fn members(&self) -> &[ArchiveEntry] {
        &self.members
    }

    pub fn objectives(&self) -> impl Iterator<Item = &ObjectiveVector> {
        self.members.iter().map(|e| &e.y)
    }

    /// Number of points offered so far, accepted or not.
    pub fn offered(&self) -> usize {
        self.offered
    }

    fn check(&mut self, x: &DecisionVector, y: &ObjectiveVector) -> Result<()> {
        match self.dims {
            None => {
                self.dims = Some((x.dim(), y.dim()));
                Ok(())
            }
            Some((n, m)) if n == x.dim() && m == y.dim() => Ok(()),
            Some((n, m)) => Err(Error::domain(format!(
                "archive holds (n={n}, m={m}) points, got (n={}, m={})",
                x.dim(),
                y.dim()
            ))),
        }
    }

    pub fn insert(&mut self, x: DecisionVector, y: ObjectiveVector) -> Result<InsertionReport> {
        self.check(&x, &y)?;
        let order = self.offered;
        self.offered += 1;
        let rejected = self
            .members
            .iter()
            .any(|e| e.y.as_slice() == y.as_slice() || dominates(&e.y, &y));
        if rejected {
            return Ok(InsertionReport {
                accepted: false,
                evicted: Vec::new(),
            });
        }
        let (evicted, kept): (Vec<_>, Vec<_>) = std::mem::take(&mut self.members)
            .into_iter()
            .partition(|e| dominates(&y, &e.y));
        self.members = kept;
        self.members.push(ArchiveEntry { x, y, order });
        Ok(InsertionReport {
            accepted: true,
            evicted,
        })
    }

    /// Member objective vectors of `self` and `other` coincide as sets.
    pub fn same_front(&self, other: &ParetoArchive) -> bool {
        let key = |a: &ParetoArchive| {
            let mut ys: Vec<Vec<f64>> = a.objectives().map(|y| y.to_vec()).collect();
            ys.sort_by(|p, q| lexicographic(p, q));
            ys
        };
        key(self) == key(other)
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Builds the archive of all points not dominated by, and not equal to, an
/// earlier point of the input.
pub fn nondominated_filter(
    points: Vec<(DecisionVector, ObjectiveVector)>,
) -> Result<ParetoArchive> {
    let Some((x0, y0)) = points.first() else {
        return Err(Error::domain("cannot filter an empty point list"));
    };
    let (n, m) = (x0.dim(), y0.dim());
    if let Some((x, y)) = points.iter().find(|(x, y)| x.dim() != n || y.dim() != m) {
        return Err(Error::domain(format!(
            "inconsistent point dimensions: expected (n={n}, m={m}), got (n={}, m={})",
            x.dim(),
            y.dim()
        )));
    }
    if m != 2 {
        let mut archive = ParetoArchive::new();
        for (x, y) in points {
            archive.insert(x, y)?;
        }
        return Ok(archive);
    }

    // Bi-objective sweep: sort by (y1, y2, input order); a point survives iff
    // its y2 is strictly below every y2 seen so far.
    let total = points.len();
    let keep = nondominated_indices_2d(points.iter().map(|(_, y)| [y[0], y[1]]));
    let mut keep_mask = vec![false; total];
    for i in keep {
        keep_mask[i] = true;
    }
    let members = points
        .into_iter()
        .enumerate()
        .filter(|(i, _)| keep_mask[*i])
        .map(|(order, (x, y))| ArchiveEntry { x, y, order })
        .collect();
    Ok(ParetoArchive {
        members,
        offered: total,
        dims: Some((n, m)),
    })
}

/// Indices of the first occurrences of non-dominated bi-objective points.
pub(crate) fn nondominated_indices_2d(points: impl Iterator<Item = [f64; 2]>) -> Vec<usize> {
    let pts: Vec<[f64; 2]> = points.collect();
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| lexicographic(&pts[a], &pts[b]).then(a.cmp(&b)));
    let mut best = f64::INFINITY;
    let mut keep = Vec::new();
    for i in idx {
        if pts[i][1] < best {
            best = pts[i][1];
            keep.push(i);
        }
    }
    keep.sort_unstable();
    keep
}

/// Additive ε-indicator `I_ε+(A, B) = max_b min_a max_j (a_j − b_j)`.
///
/// The smallest uniform translation after which every element of `B` is
/// weakly dominated by some element of `A`.
pub fn epsilon_indicator<A: AsRef<[f64]>, B: AsRef<[f64]>>(a: &[A], b: &[B]) -> Result<f64> {
    let (Some(a0), Some(_)) = (a.first(), b.first()) else {
        return Err(Error::domain("ε-indicator needs two non-empty sets"));
    };
    let m = a0.as_ref().len();
    if let Some(bad) = a
        .iter()
        .map(|p| p.as_ref().len())
        .chain(b.iter().map(|p| p.as_ref().len()))
        .find(|&len| len != m)
    {
        return Err(Error::domain(format!(
            "objective dimension mismatch ({m} vs {bad})"
        )));
    }
    let mut worst = f64::NEG_INFINITY;
    for q in b {
        let q = q.as_ref();
        let mut best = f64::INFINITY;
        for p in a {
            let gap = max_gap(p.as_ref(), q);
            if gap < best {
                best = gap;
                // This b can no longer raise the outer maximum.
                if best <= worst {
                    break;
                }
            }
        }
        worst = worst.max(best);
    }
    Ok(worst)
}

#[inline]
fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(f64::NEG_INFINITY, |acc, (x, y)| acc.max(x - y))
}

/// Where a reference set came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    /// Points sampled from a known front.
    Analytic,
    /// Non-dominated subset of `evaluated` sampled points.
    Sampled {
        scheme: String,
        budget: usize,
        evaluated: usize,
    },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Analytic => f.write_str("analytic"),
            Provenance::Sampled {
                scheme,
                budget,
                evaluated,
            } => write!(
                f,
                "sampled(scheme={scheme}, budget={budget}, evaluated={evaluated})"
            ),
        }
    }
}

/// Approximation of the Pareto front used as the second argument of the
/// unary indicator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSet {
    points: Vec<ObjectiveVector>,
    provenance: Provenance,
    /// Upper bound on the ε-distance between this set and the true front,
    /// when known.
    resolution: Option<f64>,
}

impl ReferenceSet {
    /// Keeps the non-dominated, de-duplicated subset of `points`.
    pub fn new(
        points: Vec<ObjectiveVector>,
        provenance: Provenance,
        resolution: Option<f64>,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("reference set must not be empty"));
        }
        let m = points[0].dim();
        if points.iter().any(|p| p.dim() != m) {
            return Err(Error::domain("reference points have mixed dimensions"));
        }
        let points = if m == 2 {
            let keep = nondominated_indices_2d(points.iter().map(|y| [y[0], y[1]]));
            keep.into_iter().map(|i| points[i].clone()).collect()
        } else {
            let mut kept: Vec<ObjectiveVector> = Vec::new();
            for y in points {
                if kept
                    .iter()
                    .any(|k| k.as_slice() == y.as_slice() || dominates(k, &y))
                {
                    continue;
                }
                kept.retain(|k| !dominates(&y, k));
                kept.push(y);
            }
            kept
        };
        Ok(Self {
            points,
            provenance,
            resolution,
        })
    }

    pub fn points(&self) -> &[ObjectiveVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn resolution(&self) -> Option<f64> {
        self.resolution
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.provenance, Provenance::Sampled { .. })
    }

    /// Indicator tolerance implied by the reference: `max(1e-6, resolution)`.
    pub fn tolerance(&self) -> f64 {
        self.resolution.unwrap_or(0.0).max(1e-6)
    }
}

/// Unary indicator value with its pre-clamp value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnaryEpsilon {
    pub value: f64,
    pub raw: f64,
    pub clamped: bool,
}

fn clamp_unary(raw: f64, reference: &ReferenceSet) -> UnaryEpsilon {
    if raw < 0.0 && reference.is_sampled() {
        debug!("clamping negative unary ε-indicator {raw} against sampled reference");
        UnaryEpsilon {
            value: 0.0,
            raw,
            clamped: true,
        }
    } else {
        UnaryEpsilon {
            value: raw,
            raw,
            clamped: false,
        }
    }
}

/// `I¹_ε+(A) = I_ε+(A, R)` for the objective vectors of `archive`.
///
/// Against a sampled reference, a negative value can only come from gaps in
/// the reference, so it is clamped to zero (and logged).
pub fn unary_epsilon(archive: &ParetoArchive, reference: &ReferenceSet) -> Result<f64> {
    Ok(unary_epsilon_detailed(archive.objectives(), reference)?.value)
}

pub fn unary_epsilon_detailed<'a>(
    points: impl IntoIterator<Item = &'a ObjectiveVector>,
    reference: &ReferenceSet,
) -> Result<UnaryEpsilon> {
    let a: Vec<&[f64]> = points.into_iter().map(|y| y.as_slice()).collect();
    let b: Vec<&[f64]> = reference.points().iter().map(|y| y.as_slice()).collect();
    let raw = epsilon_indicator(&a, &b)?;
    let out = clamp_unary(raw, reference);
    if out.clamped {
        warn!("unary ε-indicator {raw} < 0 against sampled reference; clamped to 0");
    }
    Ok(out)
}

/// Maintains `I_ε+(S, R)` while points are added to `S` one at a time.
///
/// Dominated points never change the indicator, so the value over every
/// offered point equals the value over their non-dominated subset.
#[derive(Debug, Clone)]
pub struct EpsilonTracker<'r> {
    reference: &'r ReferenceSet,
    per_reference: Vec<f64>,
    clamps: usize,
}

impl<'r> EpsilonTracker<'r> {
    pub fn new(reference: &'r ReferenceSet) -> Self {
        Self {
            reference,
            per_reference: vec![f64::INFINITY; reference.len()],
            clamps: 0,
        }
    }

    pub fn add(&mut self, y: &[f64]) -> Result<()> {
        check_dims(y, &self.reference.points()[0])?;
        for (best, q) in self.per_reference.iter_mut().zip(self.reference.points()) {
            let gap = max_gap(y, q);
            if gap < *best {
                *best = gap;
            }
        }
        Ok(())
    }

    /// Current value; `+∞` before any point was added.
    pub fn current(&mut self) -> UnaryEpsilon {
        let raw = self
            .per_reference
            .iter()
            .fold(f64::NEG_INFINITY, |acc, v| acc.max(*v));
        let out = clamp_unary(raw, self.reference);
        if out.clamped {
            self.clamps += 1;
        }
        out
    }

    /// How many calls to [`current`](Self::current) clamped a negative value.
    pub fn clamps(&self) -> usize {
        self.clamps
    }
}
