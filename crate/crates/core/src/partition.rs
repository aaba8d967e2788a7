//! P-ary hierarchical partitioning of a box domain.
//!
//! A cell at depth `h` is split into `P` equal slabs along axis `h mod n`,
//! so every node at a given depth splits the same coordinate and the axes
//! are visited round-robin. Each cell is represented by its center.
//!
//! Representatives are derived from the parent's representative by an
//! offset along the split axis. For odd `P` the middle child's offset is
//! exactly zero, so its representative coincides bit-for-bit with the
//! parent's, and its value can be reused without paying an evaluation.

use std::io::Write;

use crate::error::{Error, Result};
use crate::pointset::format_value;
use crate::scalarization::ScalarFunction;
use crate::space::{DecisionVector, Hyperbox};

/// Shape of the partition: arity and whether coincident representatives
/// reuse the parent's value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionSpec {
    pub arity: usize,
    pub reuse_coincident: bool,
}

impl Default for PartitionSpec {
    fn default() -> Self {
        Self {
            arity: 3,
            reuse_coincident: true,
        }
    }
}

impl PartitionSpec {
    pub fn new(arity: usize, reuse_coincident: bool) -> Result<Self> {
        if arity < 2 {
            return Err(Error::config(format!(
                "partition arity must be >= 2, got {arity}"
            )));
        }
        Ok(Self {
            arity,
            reuse_coincident,
        })
    }
}

/// Splits `bounds` into `arity` equal slabs along `axis`. Returns each
/// child's box and representative, in ascending order along the axis.
pub fn split_geometry(
    bounds: &Hyperbox,
    representative: &[f64],
    axis: usize,
    arity: usize,
) -> Vec<(Hyperbox, Vec<f64>)> {
    let lo = bounds.lower()[axis];
    let hi = bounds.upper()[axis];
    let width = hi - lo;
    let cut = |k: usize| {
        if k == 0 {
            lo
        } else if k == arity {
            hi
        } else {
            lo + width * k as f64 / arity as f64
        }
    };
    (0..arity)
        .map(|k| {
            let mut lower = bounds.lower().to_vec();
            let mut upper = bounds.upper().to_vec();
            lower[axis] = cut(k);
            upper[axis] = cut(k + 1);
            let child = Hyperbox::new(lower, upper).expect("slab of a valid box");
            let mut rep = representative.to_vec();
            let steps = 2 * k as i64 + 1 - arity as i64;
            if steps != 0 {
                rep[axis] += steps as f64 * width / (2 * arity) as f64;
            }
            child.clamp(&mut rep);
            (child, rep)
        })
        .collect()
}

/// Identifier of a cell inside its [`PartitionTree`].
pub type CellId = usize;

/// Node `(depth, index)` of the tree.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub depth: usize,
    /// Position among the `P^depth` nodes of this depth.
    pub index: u128,
    pub bounds: Hyperbox,
    pub representative: DecisionVector,
    /// Scalarized value at the representative, recorded once.
    pub value: f64,
    pub split_axis_next: usize,
    /// Value copied from the parent rather than evaluated.
    pub reused: bool,
    pub parent: Option<CellId>,
    pub children: Vec<CellId>,
}

impl Cell {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct PartitionTree {
    spec: PartitionSpec,
    cells: Vec<Cell>,
    leaves_by_depth: Vec<Vec<CellId>>,
    evaluations: usize,
    reused: usize,
    partial: Option<CellId>,
}

impl PartitionTree {
    /// Creates the root over `domain` and evaluates its center.
    pub fn make_root<F: ScalarFunction + ?Sized>(
        domain: &Hyperbox,
        spec: PartitionSpec,
        f: &mut F,
    ) -> Result<Self> {
        PartitionSpec::new(spec.arity, spec.reuse_coincident)?;
        if !domain.is_solid() {
            return Err(Error::domain(format!(
                "cannot partition degenerate box {domain}"
            )));
        }
        let center = domain.center();
        let value = f.evaluate(&center)?;
        let root = Cell {
            depth: 0,
            index: 0,
            bounds: domain.clone(),
            representative: DecisionVector::new(center)?,
            value,
            split_axis_next: 0,
            reused: false,
            parent: None,
            children: Vec::new(),
        };
        Ok(Self {
            spec,
            cells: vec![root],
            leaves_by_depth: vec![vec![0]],
            evaluations: 1,
            reused: 0,
            partial: None,
        })
    }

    pub fn spec(&self) -> PartitionSpec {
        self.spec
    }

    pub fn arity(&self) -> usize {
        self.spec.arity
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn root(&self) -> &Cell {
        &self.cells[0]
    }

    /// Deepest depth holding a leaf.
    pub fn depth(&self) -> usize {
        self.leaves_by_depth
            .iter()
            .rposition(|l| !l.is_empty())
            .unwrap_or(0)
    }

    /// Leaves at depth `h`, in creation order.
    pub fn leaves_at(&self, h: usize) -> &[CellId] {
        self.leaves_by_depth
            .get(h)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Cell> {
        self.leaves_by_depth
            .iter()
            .flatten()
            .map(|&id| &self.cells[id])
    }

    /// Objective calls made by the tree (root included).
    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// Children whose value was copied from a coincident parent.
    pub fn reused(&self) -> usize {
        self.reused
    }

    /// The cell whose expansion was cut short by the budget, if any.
    pub fn partial_expansion(&self) -> Option<CellId> {
        self.partial
    }

    /// Leaf at depth `h` with the smallest value; ties go to the smaller index.
    pub fn best_leaf_at_depth(&self, h: usize) -> Option<CellId> {
        self.leaves_at(h).iter().copied().min_by(|&a, &b| {
            let (ca, cb) = (&self.cells[a], &self.cells[b]);
            ca.value.total_cmp(&cb.value).then(ca.index.cmp(&cb.index))
        })
    }

    /// Splits `leaf` into `P` children, evaluating each child's representative.
    ///
    /// If the budget runs out part-way, the children created so far are kept,
    /// the leaf is marked expanded, and the budget signal is returned.
    pub fn expand<F: ScalarFunction + ?Sized>(
        &mut self,
        leaf: CellId,
        f: &mut F,
    ) -> Result<Vec<CellId>> {
        let parent = &self.cells[leaf];
        if !parent.is_leaf() || self.partial == Some(leaf) {
            return Err(Error::domain(format!(
                "cell ({}, {}) is not an unexpanded leaf",
                parent.depth, parent.index
            )));
        }
        let depth = parent.depth;
        let arity = self.spec.arity;
        let axis = parent.split_axis_next;
        let n = parent.bounds.dim();
        let base_index = parent
            .index
            .checked_mul(arity as u128)
            .ok_or_else(|| Error::domain(format!("node index overflow below depth {depth}")))?;
        let geometry = split_geometry(&parent.bounds, &parent.representative, axis, arity);
        let parent_rep = parent.representative.clone();
        let parent_value = parent.value;

        let slot = self.leaves_by_depth[depth]
            .iter()
            .position(|&id| id == leaf)
            .expect("leaf is registered at its depth");
        self.leaves_by_depth[depth].remove(slot);
        if self.leaves_by_depth.len() <= depth + 1 {
            self.leaves_by_depth.push(Vec::new());
        }

        let mut created = Vec::with_capacity(arity);
        for (k, (bounds, rep)) in geometry.into_iter().enumerate() {
            let coincident = self.spec.reuse_coincident && rep.as_slice() == parent_rep.as_slice();
            let value = if coincident {
                parent_value
            } else {
                match f.evaluate(&rep) {
                    Ok(v) => v,
                    Err(e) => {
                        if e.is_budget_exhausted() {
                            self.partial = Some(leaf);
                        } else if created.is_empty() {
                            // Nothing was paid for: restore the leaf.
                            self.leaves_by_depth[depth].insert(slot, leaf);
                        } else {
                            self.partial = Some(leaf);
                        }
                        return Err(e);
                    }
                }
            };
            if coincident {
                self.reused += 1;
            } else {
                self.evaluations += 1;
            }
            let id = self.cells.len();
            self.cells.push(Cell {
                depth: depth + 1,
                index: base_index + k as u128,
                bounds,
                representative: DecisionVector::new(rep)?,
                value,
                split_axis_next: (axis + 1) % n,
                reused: coincident,
                parent: Some(leaf),
                children: Vec::new(),
            });
            self.cells[leaf].children.push(id);
            self.leaves_by_depth[depth + 1].push(id);
            created.push(id);
        }
        Ok(created)
    }

    /// Writes `depth,index,lower…,upper…,rep…,value` rows for every leaf.
    pub fn write_leaves_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let n = self.root().bounds.dim();
        let mut header = vec!["depth".to_string(), "index".to_string()];
        for prefix in ["lower", "upper", "rep"] {
            header.extend((1..=n).map(|i| format!("{prefix}{i}")));
        }
        header.push("value".into());
        writeln!(out, "{}", header.join(","))?;
        for cell in self.leaves() {
            let mut row = vec![cell.depth.to_string(), cell.index.to_string()];
            row.extend(cell.bounds.lower().iter().map(|v| format_value(*v)));
            row.extend(cell.bounds.upper().iter().map(|v| format_value(*v)));
            row.extend(cell.representative.iter().map(|v| format_value(*v)));
            row.push(format_value(cell.value));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::EvaluationCounter;

    fn spec(arity: usize) -> PartitionSpec {
        PartitionSpec::new(arity, true).unwrap()
    }

    /// Scalar function with a budget, for exercising partial expansion.
    struct Budgeted<F> {
        f: F,
        counter: EvaluationCounter,
    }

    impl<F: FnMut(&[f64]) -> f64> ScalarFunction for Budgeted<F> {
        fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
            self.counter.charge()?;
            Ok((self.f)(x))
        }
    }

    /// Reference construction: boxes of every depth-`h` cell, built directly
    /// from cut positions (`lower + width·k/P`) without the tree.
    fn direct_boxes(domain: &Hyperbox, arity: usize, h: usize) -> Vec<Hyperbox> {
        let n = domain.dim();
        let mut boxes = vec![domain.clone()];
        for depth in 0..h {
            let axis = depth % n;
            boxes = boxes
                .into_iter()
                .flat_map(|b| {
                    let (lo, w) = (b.lower()[axis], b.width(axis));
                    (0..arity).map(move |k| {
                        let mut l = b.lower().to_vec();
                        let mut u = b.upper().to_vec();
                        l[axis] = lo + w * k as f64 / arity as f64;
                        u[axis] = lo + w * (k + 1) as f64 / arity as f64;
                        Hyperbox::new(l, u).unwrap()
                    })
                })
                .collect();
        }
        boxes
    }

    #[test]
    fn root_examples() {
        let mut abs = |x: &[f64]| x[0].abs();
        let t = PartitionTree::make_root(&Hyperbox::cube(1, -1.0, 1.0).unwrap(), spec(3), &mut abs)
            .unwrap();
        assert_eq!(t.root().representative.as_slice(), &[0.0]);
        assert_eq!(t.root().value, 0.0);

        let ff = crate::benchmarks::fonseca_fleming();
        let scal = crate::scalarization::TchebycheffScalarizer::standard(2);
        let mut g = |x: &[f64]| scal.scalarize(&ff.evaluate(x).unwrap()).unwrap();
        let t = PartitionTree::make_root(ff.domain(), spec(3), &mut g).unwrap();
        assert_eq!(t.root().representative.as_slice(), &[0.0, 0.0]);
        assert!((t.root().value - 0.632121).abs() < 1e-6);

        let b = Hyperbox::new(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap();
        let t = PartitionTree::make_root(&b, spec(3), &mut |_: &[f64]| 0.0).unwrap();
        assert_eq!(t.root().representative.as_slice(), &[0.5, 1.0]);
    }

    #[test]
    fn degenerate_domain_is_rejected() {
        let b = Hyperbox::new(vec![0.0, 0.0], vec![0.0, 1.0]).unwrap();
        assert!(PartitionTree::make_root(&b, spec(3), &mut |_: &[f64]| 0.0).is_err());
        assert!(PartitionSpec::new(1, true).is_err());
    }

    #[test]
    fn ternary_split_in_one_dimension() {
        let mut calls = Vec::new();
        let mut f = |x: &[f64]| {
            calls.push(x[0]);
            x[0]
        };
        let mut t =
            PartitionTree::make_root(&Hyperbox::cube(1, -1.0, 1.0).unwrap(), spec(3), &mut f)
                .unwrap();
        let kids = t.expand(0, &mut f).unwrap();
        let boxes: Vec<(f64, f64)> = kids
            .iter()
            .map(|&k| (t.cell(k).bounds.lower()[0], t.cell(k).bounds.upper()[0]))
            .collect();
        assert_eq!(boxes[0].0, -1.0);
        assert!((boxes[0].1 + 1.0 / 3.0).abs() < 1e-15);
        assert!((boxes[1].1 - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(boxes[2].1, 1.0);
        let reps: Vec<f64> = kids.iter().map(|&k| t.cell(k).representative[0]).collect();
        assert!((reps[0] + 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(reps[1], 0.0);
        assert!((reps[2] - 2.0 / 3.0).abs() < 1e-15);
        // Middle child reused the root's value.
        assert!(t.cell(kids[1]).reused);
        assert_eq!(calls.len(), 3);
        assert_eq!(t.evaluations(), 3);
        assert_eq!(t.reused(), 1);
        assert_eq!(t.leaves_at(0).len(), 0);
        assert_eq!(t.leaves_at(1), kids.as_slice());
        let indices: Vec<u128> = kids.iter().map(|&k| t.cell(k).index).collect();
        assert_eq!(indices, vec![0, 1, 2]);
    }

    #[test]
    fn reuse_can_be_disabled() {
        let mut f = |x: &[f64]| x[0];
        let s = PartitionSpec::new(3, false).unwrap();
        let mut t =
            PartitionTree::make_root(&Hyperbox::cube(1, -1.0, 1.0).unwrap(), s, &mut f).unwrap();
        t.expand(0, &mut f).unwrap();
        assert_eq!(t.evaluations(), 4);
        assert_eq!(t.reused(), 0);
    }

    #[test]
    fn even_arity_never_reuses() {
        let mut f = |x: &[f64]| x[0];
        let mut t =
            PartitionTree::make_root(&Hyperbox::cube(1, -1.0, 1.0).unwrap(), spec(2), &mut f)
                .unwrap();
        let kids = t.expand(0, &mut f).unwrap();
        assert_eq!(kids.len(), 2);
        assert_eq!(t.cell(kids[0]).representative[0], -0.5);
        assert_eq!(t.cell(kids[1]).representative[0], 0.5);
        assert_eq!(t.reused(), 0);
    }

    #[test]
    fn round_robin_axes() {
        let mut f = |x: &[f64]| x[0] * x[0] + x[1] * x[1];
        let mut t =
            PartitionTree::make_root(&Hyperbox::cube(2, -1.0, 1.0).unwrap(), spec(3), &mut f)
                .unwrap();
        let kids = t.expand(0, &mut f).unwrap();
        for &k in &kids {
            assert_eq!(t.cell(k).bounds.width(1), 2.0);
            assert!((t.cell(k).bounds.width(0) - 2.0 / 3.0).abs() < 1e-15);
            assert_eq!(t.cell(k).split_axis_next, 1);
        }
        let grandkids = t.expand(kids[1], &mut f).unwrap();
        for &k in &grandkids {
            assert!((t.cell(k).bounds.width(1) - 2.0 / 3.0).abs() < 1e-15);
            assert_eq!(t.cell(k).split_axis_next, 0);
        }
        let next = t.expand(grandkids[0], &mut f).unwrap();
        assert!((t.cell(next[0]).bounds.width(0) - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn best_leaf_selection() {
        let vals = [0.3, 0.1, 0.7];
        let mut i = 0;
        let mut f = |_: &[f64]| {
            let v = if i == 0 { 5.0 } else { vals[(i - 1) % 3] };
            i += 1;
            v
        };
        let s = PartitionSpec::new(3, false).unwrap();
        let mut t =
            PartitionTree::make_root(&Hyperbox::cube(1, 0.0, 1.0).unwrap(), s, &mut f).unwrap();
        let kids = t.expand(0, &mut f).unwrap();
        assert_eq!(t.best_leaf_at_depth(1), Some(kids[1]));
        assert_eq!(t.best_leaf_at_depth(0), None);
        assert_eq!(t.best_leaf_at_depth(7), None);

        let mut tie = |_: &[f64]| 0.5;
        let mut t =
            PartitionTree::make_root(&Hyperbox::cube(1, 0.0, 1.0).unwrap(), spec(2), &mut tie)
                .unwrap();
        let kids = t.expand(0, &mut tie).unwrap();
        assert_eq!(t.best_leaf_at_depth(1), Some(kids[0]));
    }

    #[test]
    fn partial_expansion_keeps_paid_children() {
        let mut f = Budgeted {
            f: |x: &[f64]| x[0],
            counter: EvaluationCounter::new(2).unwrap(),
        };
        let s = PartitionSpec::new(3, false).unwrap();
        let mut t =
            PartitionTree::make_root(&Hyperbox::cube(1, -1.0, 1.0).unwrap(), s, &mut f).unwrap();
        let err = t.expand(0, &mut f).unwrap_err();
        assert!(err.is_budget_exhausted());
        assert_eq!(t.cell(0).children.len(), 1);
        assert_eq!(t.partial_expansion(), Some(0));
        assert_eq!(t.leaves_at(1).len(), 1);
        assert!(t.expand(0, &mut f).is_err());
    }

    #[test]
    fn expanding_a_non_leaf_fails() {
        let mut f = |x: &[f64]| x[0];
        let mut t =
            PartitionTree::make_root(&Hyperbox::cube(1, -1.0, 1.0).unwrap(), spec(3), &mut f)
                .unwrap();
        t.expand(0, &mut f).unwrap();
        assert!(t.expand(0, &mut f).is_err());
    }

    /// Deterministic walk: expand every leaf of a few depths, then check the
    /// tiling, the widths against the direct construction and the
    /// evaluation accounting.
    #[test]
    fn full_expansion_tiles_the_domain() {
        let domain = Hyperbox::new(vec![-1.0, 0.0], vec![2.0, 1.0]).unwrap();
        let mut f = |x: &[f64]| (x[0] - 0.3).abs() + (x[1] - 0.6).abs();
        let mut t = PartitionTree::make_root(&domain, spec(3), &mut f).unwrap();
        for h in 0..5 {
            let leaves: Vec<CellId> = t.leaves_at(h).to_vec();
            for leaf in leaves {
                t.expand(leaf, &mut f).unwrap();
            }
            let total: f64 = t.leaves().map(|c| c.bounds.volume()).sum();
            assert!((total - domain.volume()).abs() <= 1e-12 * domain.volume());
        }
        let mut leaves: Vec<&Cell> = t.leaves().collect();
        leaves.sort_by_key(|c| c.index);
        let direct = direct_boxes(&domain, 3, 5);
        assert_eq!(leaves.len(), direct.len());
        for (cell, b) in leaves.iter().zip(&direct) {
            assert_eq!(cell.bounds.dim(), 2);
            for axis in 0..2 {
                assert!((cell.bounds.lower()[axis] - b.lower()[axis]).abs() < 1e-12);
                assert!((cell.bounds.upper()[axis] - b.upper()[axis]).abs() < 1e-12);
            }
            let center = cell.bounds.center();
            assert!(cell.bounds.contains(&cell.representative));
            for (r, c) in cell.representative.iter().zip(&center) {
                assert!((r - c).abs() < 1e-12);
            }
        }
        // Every representative evaluated once, except reused middles.
        assert_eq!(t.evaluations() + t.reused(), t.cells().len());

        // Random points land in exactly one leaf (lower index wins on faces).
        let mut s = 7u64;
        for _ in 0..500 {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let u = (s >> 11) as f64 / (1u64 << 53) as f64;
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let v = (s >> 11) as f64 / (1u64 << 53) as f64;
            let p = [-1.0 + 3.0 * u, v];
            let interior = leaves
                .iter()
                .filter(|c| {
                    (0..2).all(|a| c.bounds.lower()[a] < p[a] && p[a] < c.bounds.upper()[a])
                })
                .count();
            let closed = leaves.iter().filter(|c| c.bounds.contains(&p)).count();
            assert!(interior <= 1 && closed >= 1);
        }
    }

    #[test]
    fn deep_walk_follows_monotone_minimizer() {
        // f(x) = |x − 0.2| on [−1, 1]: the best leaf always contains 0.2.
        let mut f = |x: &[f64]| (x[0] - 0.2).abs();
        let mut t =
            PartitionTree::make_root(&Hyperbox::cube(1, -1.0, 1.0).unwrap(), spec(3), &mut f)
                .unwrap();
        let mut current = 0;
        for h in 0..30 {
            t.expand(current, &mut f).unwrap();
            current = t.best_leaf_at_depth(h + 1).unwrap();
            assert!(
                t.cell(current).bounds.contains(&[0.2]),
                "lost the minimizer at depth {}",
                h + 1
            );
        }
        assert!(t.cell(current).bounds.width(0) < 1e-13);
    }

    #[test]
    fn leaf_dump_has_one_row_per_leaf() {
        let mut f = |x: &[f64]| x[0] + x[1];
        let mut t =
            PartitionTree::make_root(&Hyperbox::cube(2, -1.0, 1.0).unwrap(), spec(3), &mut f)
                .unwrap();
        t.expand(0, &mut f).unwrap();
        let mut buf = Vec::new();
        t.write_leaves_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "depth,index,lower1,lower2,upper1,upper2,rep1,rep2,value"
        );
        assert_eq!(lines.len(), 4);
    }
}
