//! Cell decompositions of the compact metric spaces the engine works on.
//!
//! Every metric value is an integer number of *steps*, where one step is the
//! mesh of the decomposition (`1/M` on the circle and interval, `1/N` per axis
//! on an `N x N` torus, `1` on a finite discrete space). Rational values are
//! only materialized at the API boundary, so all comparisons are exact.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cellset::{Cell, CellSet};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Default cap on the number of cells a space may have.
pub const DEFAULT_MAX_CELLS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    /// Circle of circumference 1, cells `[i/M, (i+1)/M)`.
    Circle,
    /// Flat 2-torus with the max-of-coordinates metric, `N x N` cells.
    Torus,
    /// Unit interval, cells `[i/M, (i+1)/M)`.
    Interval,
    /// `M` points with the discrete metric.
    Finite,
}

impl SpaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Circle => "circle",
            SpaceKind::Torus => "torus",
            SpaceKind::Interval => "interval",
            SpaceKind::Finite => "finite",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "circle" => Ok(SpaceKind::Circle),
            "torus" => Ok(SpaceKind::Torus),
            "interval" => Ok(SpaceKind::Interval),
            "finite" => Ok(SpaceKind::Finite),
            other => Err(Error::UnsupportedKind(other.to_string())),
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An epsilon-cell decomposition of a compact metric space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscreteSpace {
    kind: SpaceKind,
    resolution: usize,
    cells: usize,
}

impl DiscreteSpace {
    pub fn new(kind: SpaceKind, resolution: usize) -> Result<Self> {
        Self::with_cap(kind, resolution, DEFAULT_MAX_CELLS)
    }

    pub fn with_cap(kind: SpaceKind, resolution: usize, max_cells: usize) -> Result<Self> {
        let min = if kind == SpaceKind::Finite { 1 } else { 2 };
        if resolution < min {
            return Err(Error::InvalidResolution {
                kind: kind.name(),
                min,
                got: resolution,
            });
        }
        let cells = match kind {
            SpaceKind::Torus => resolution
                .checked_mul(resolution)
                .ok_or(Error::TooManyCells {
                    cells: usize::MAX,
                    cap: max_cells,
                })?,
            _ => resolution,
        };
        if cells > max_cells || cells > Cell::MAX as usize {
            return Err(Error::TooManyCells {
                cells,
                cap: max_cells,
            });
        }
        Ok(Self {
            kind,
            resolution,
            cells,
        })
    }

    pub fn circle(m: usize) -> Result<Self> {
        Self::new(SpaceKind::Circle, m)
    }

    pub fn torus(n: usize) -> Result<Self> {
        Self::new(SpaceKind::Torus, n)
    }

    pub fn interval(m: usize) -> Result<Self> {
        Self::new(SpaceKind::Interval, m)
    }

    pub fn finite(m: usize) -> Result<Self> {
        Self::new(SpaceKind::Finite, m)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    /// Cells per axis.
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Total number of cells `M`.
    pub fn cell_count(&self) -> usize {
        self.cells
    }

    /// Denominator of every metric value.
    pub fn denominator(&self) -> i64 {
        match self.kind {
            SpaceKind::Finite => 1,
            _ => self.resolution as i64,
        }
    }

    /// Mesh of the decomposition; one metric step.
    pub fn cell_size(&self) -> Rational {
        Rational::new(1, self.denominator())
    }

    pub fn full(&self) -> CellSet {
        CellSet::full(self.cells)
    }

    pub fn empty(&self) -> CellSet {
        CellSet::empty(self.cells)
    }

    pub fn singleton(&self, cell: Cell) -> CellSet {
        CellSet::singleton(self.cells, cell)
    }

    pub fn check_cell(&self, cell: Cell) -> Result<()> {
        if (cell as usize) < self.cells {
            Ok(())
        } else {
            Err(Error::CellOutOfRange {
                cell,
                cells: self.cells,
            })
        }
    }

    /// Torus cell holding the lattice point `(x/N, y/N)`.
    pub fn torus_cell(&self, x: usize, y: usize) -> Cell {
        debug_assert_eq!(self.kind, SpaceKind::Torus);
        let n = self.resolution;
        ((x % n) * n + (y % n)) as Cell
    }

    /// Inverse of [`torus_cell`](Self::torus_cell).
    pub fn torus_coords(&self, cell: Cell) -> (usize, usize) {
        let n = self.resolution;
        (cell as usize / n, cell as usize % n)
    }

    fn cyclic_steps(a: usize, b: usize, n: usize) -> u32 {
        let d = a.abs_diff(b);
        d.min(n - d) as u32
    }

    /// Distance between two cells in steps of [`cell_size`](Self::cell_size).
    pub fn metric_steps(&self, i: Cell, j: Cell) -> u32 {
        let (i, j) = (i as usize, j as usize);
        match self.kind {
            SpaceKind::Circle => Self::cyclic_steps(i, j, self.resolution),
            SpaceKind::Interval => i.abs_diff(j) as u32,
            SpaceKind::Torus => {
                let n = self.resolution;
                let dx = Self::cyclic_steps(i / n, j / n, n);
                let dy = Self::cyclic_steps(i % n, j % n, n);
                dx.max(dy)
            }
            SpaceKind::Finite => u32::from(i != j),
        }
    }

    pub fn metric(&self, i: Cell, j: Cell) -> Rational {
        self.steps_to_rational(self.metric_steps(i, j))
    }

    pub fn steps_to_rational(&self, steps: u32) -> Rational {
        Rational::new(steps as i64, self.denominator())
    }

    pub fn diameter_steps(&self) -> u32 {
        match self.kind {
            SpaceKind::Circle | SpaceKind::Torus => (self.resolution / 2) as u32,
            SpaceKind::Interval => (self.resolution - 1) as u32,
            SpaceKind::Finite => u32::from(self.cells > 1),
        }
    }

    pub fn diameter(&self) -> Rational {
        self.steps_to_rational(self.diameter_steps())
    }

    /// Smallest step count `k` with `d < radius  <=>  steps(d) < k`.
    pub fn steps_below(&self, radius: Rational) -> u32 {
        let scaled = radius * self.denominator();
        if scaled <= Rational::from_integer(0) {
            return 0;
        }
        scaled.ceil().to_integer().min(u32::MAX as i64) as u32
    }

    /// Largest step count `k` with `d <= tolerance  <=>  steps(d) <= k`;
    /// `None` for a negative tolerance.
    pub fn steps_at_most(&self, tolerance: Rational) -> Option<u32> {
        let scaled = tolerance * self.denominator();
        if scaled < Rational::from_integer(0) {
            return None;
        }
        Some(scaled.floor().to_integer().min(u32::MAX as i64) as u32)
    }

    /// Cells at distance exactly one step.
    pub fn neighbors(&self, cell: Cell) -> Vec<Cell> {
        let mut out = Vec::with_capacity(8);
        self.for_each_neighbor(cell, |n| out.push(n));
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Visits the one-step neighbors of `cell` (a neighbor may repeat on
    /// tiny tori).
    fn for_each_neighbor(&self, cell: Cell, mut visit: impl FnMut(Cell)) {
        let c = cell as usize;
        match self.kind {
            SpaceKind::Circle => {
                let m = self.resolution;
                for n in [(c + 1) % m, (c + m - 1) % m] {
                    if n != c {
                        visit(n as Cell);
                    }
                }
            }
            SpaceKind::Interval => {
                if c > 0 {
                    visit((c - 1) as Cell);
                }
                if c + 1 < self.resolution {
                    visit((c + 1) as Cell);
                }
            }
            SpaceKind::Torus => {
                let n = self.resolution;
                let (x, y) = (c / n, c % n);
                for dx in [n - 1, 0, 1] {
                    for dy in [n - 1, 0, 1] {
                        let t = self.torus_cell(x + dx, y + dy);
                        if t != cell {
                            visit(t);
                        }
                    }
                }
            }
            SpaceKind::Finite => (0..self.cells as Cell).filter(|&j| j != cell).for_each(visit),
        }
    }

    /// Step distance from every cell to the nearest member of `set`
    /// (`u32::MAX` everywhere when `set` is empty).
    pub fn distance_field(&self, set: &CellSet) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.cells];
        if set.is_empty() {
            return dist;
        }
        if self.kind == SpaceKind::Finite {
            for (c, d) in dist.iter_mut().enumerate() {
                *d = u32::from(!set.contains(c as Cell));
            }
            return dist;
        }
        // every non-finite metric is the hop metric of its neighbor graph
        let mut queue = VecDeque::with_capacity(self.cells);
        for c in set.iter() {
            dist[c as usize] = 0;
            queue.push_back(c);
        }
        while let Some(c) = queue.pop_front() {
            let next = dist[c as usize] + 1;
            self.for_each_neighbor(c, |n| {
                if dist[n as usize] == u32::MAX {
                    dist[n as usize] = next;
                    queue.push_back(n);
                }
            });
        }
        dist
    }

    /// `sup_{x in X} d(x, set)` in steps; `None` for an empty set.
    pub fn distance_to_full_steps(&self, set: &CellSet) -> Option<u32> {
        if set.is_empty() {
            return None;
        }
        if set.is_full() {
            return Some(0);
        }
        self.distance_field(set).into_iter().max()
    }

    /// Hausdorff distance in steps.
    pub fn hausdorff_steps(&self, a: &CellSet, b: &CellSet) -> Result<u32> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::HausdorffUndefinedOnEmpty);
        }
        if a == b {
            return Ok(0);
        }
        let to_b = self.distance_field(b);
        let to_a = self.distance_field(a);
        let ab = a.iter().map(|c| to_b[c as usize]).max().unwrap_or(0);
        let ba = b.iter().map(|c| to_a[c as usize]).max().unwrap_or(0);
        Ok(ab.max(ba))
    }

    pub fn hausdorff(&self, a: &CellSet, b: &CellSet) -> Result<Rational> {
        self.hausdorff_steps(a, b).map(|s| self.steps_to_rational(s))
    }

    /// Open ball: all cells `j` with `metric(center, j) < radius`.
    pub fn ball(&self, center: Cell, radius: Rational) -> CellSet {
        self.fatten(&self.singleton(center), radius)
    }

    /// All cells strictly within `radius` of some member of `set`.
    pub fn fatten(&self, set: &CellSet, radius: Rational) -> CellSet {
        let limit = self.steps_below(radius);
        if limit <= 1 {
            return if limit == 1 { set.clone() } else { self.empty() };
        }
        let dist = self.distance_field(set);
        CellSet::from_cells(
            self.cells,
            dist.iter()
                .enumerate()
                .filter(|(_, &d)| d < limit)
                .map(|(c, _)| c as Cell),
        )
    }

    /// Balls of the given radius centered at every cell, in cell order.
    pub fn basis(&self, radius: Rational) -> Vec<CellSet> {
        (0..self.cells as Cell)
            .map(|c| self.ball(c, radius))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn brute_hausdorff(space: &DiscreteSpace, a: &CellSet, b: &CellSet) -> u32 {
        let directed = |x: &CellSet, y: &CellSet| {
            x.iter()
                .map(|p| y.iter().map(|q| space.metric_steps(p, q)).min().unwrap())
                .max()
                .unwrap()
        };
        directed(a, b).max(directed(b, a))
    }

    #[test]
    fn build_space_examples() {
        let circle = DiscreteSpace::circle(8).unwrap();
        assert_eq!(circle.cell_count(), 8);
        assert_eq!(circle.diameter(), ratio(1, 2));
        // exhaustive max over the 28 pairs
        let max = (0..8)
            .flat_map(|i| (i + 1..8).map(move |j| (i, j)))
            .map(|(i, j)| circle.metric(i, j))
            .max()
            .unwrap();
        assert_eq!(max, ratio(1, 2));

        let interval = DiscreteSpace::interval(10).unwrap();
        assert_eq!(interval.cell_count(), 10);
        assert_eq!(interval.diameter(), ratio(9, 10));
        assert_eq!(interval.metric(0, 9), ratio(9, 10));

        let torus = DiscreteSpace::torus(4).unwrap();
        assert_eq!(torus.cell_count(), 16);
        assert_eq!(torus.diameter(), ratio(1, 2));
    }

    #[test]
    fn build_space_rejects_bad_input() {
        assert!(matches!(
            DiscreteSpace::circle(1),
            Err(Error::InvalidResolution { .. })
        ));
        assert!(matches!(
            SpaceKind::parse("sphere"),
            Err(Error::UnsupportedKind(_))
        ));
        assert!(matches!(
            DiscreteSpace::with_cap(SpaceKind::Torus, 64, 1000),
            Err(Error::TooManyCells { .. })
        ));
        assert!(DiscreteSpace::finite(1).is_ok());
    }

    #[test]
    fn metric_axioms_exhaustive_small_spaces() {
        for space in [
            DiscreteSpace::circle(7).unwrap(),
            DiscreteSpace::circle(8).unwrap(),
            DiscreteSpace::interval(9).unwrap(),
            DiscreteSpace::torus(5).unwrap(),
            DiscreteSpace::torus(8).unwrap(),
            DiscreteSpace::finite(6).unwrap(),
        ] {
            let m = space.cell_count() as Cell;
            let mut diam = 0;
            for i in 0..m {
                assert_eq!(space.metric_steps(i, i), 0);
                for j in 0..m {
                    let dij = space.metric_steps(i, j);
                    assert_eq!(dij, space.metric_steps(j, i));
                    diam = diam.max(dij);
                    for k in 0..m {
                        assert!(space.metric_steps(i, k) <= dij + space.metric_steps(j, k));
                    }
                }
            }
            assert_eq!(diam, space.diameter_steps(), "{:?}", space.kind());
        }
    }

    #[test]
    fn distance_field_matches_metric() {
        for space in [
            DiscreteSpace::circle(11).unwrap(),
            DiscreteSpace::interval(9).unwrap(),
            DiscreteSpace::torus(6).unwrap(),
        ] {
            let set = CellSet::from_cells(space.cell_count(), [0, 3]);
            let field = space.distance_field(&set);
            for c in 0..space.cell_count() as Cell {
                let want = set.iter().map(|s| space.metric_steps(c, s)).min().unwrap();
                assert_eq!(field[c as usize], want);
            }
        }
    }

    #[test]
    fn hausdorff_examples() {
        let space = DiscreteSpace::circle(8).unwrap();
        let a = CellSet::from_cells(8, [1, 2, 6]);
        assert_eq!(space.hausdorff(&a, &a).unwrap(), ratio(0, 1));
        let zero = space.singleton(0);
        assert_eq!(space.hausdorff(&zero, &space.full()).unwrap(), ratio(1, 2));
        let pair = CellSet::from_cells(8, [0, 4]);
        assert_eq!(space.hausdorff(&zero, &pair).unwrap(), ratio(1, 2));
        assert_eq!(
            space.hausdorff(&zero, &space.empty()),
            Err(Error::HausdorffUndefinedOnEmpty)
        );
    }

    #[test]
    fn hausdorff_is_metric_on_all_subsets_of_five_cells() {
        for space in [
            DiscreteSpace::circle(5).unwrap(),
            DiscreteSpace::interval(5).unwrap(),
        ] {
            let sets: Vec<CellSet> = (1u32..32)
                .map(|mask| CellSet::from_cells(5, (0..5).filter(|b| mask >> b & 1 == 1)))
                .collect();
            let d: Vec<Vec<u32>> = sets
                .iter()
                .map(|a| sets.iter().map(|b| space.hausdorff_steps(a, b).unwrap()).collect())
                .collect();
            for (i, a) in sets.iter().enumerate() {
                for (j, b) in sets.iter().enumerate() {
                    assert_eq!(d[i][j], brute_hausdorff(&space, a, b));
                    assert_eq!(d[i][j], d[j][i]);
                    assert_eq!(d[i][j] == 0, i == j);
                    for k in 0..sets.len() {
                        assert!(d[i][k] <= d[i][j] + d[j][k]);
                    }
                }
            }
        }
    }

    #[test]
    fn ball_examples() {
        let circle = DiscreteSpace::circle(8).unwrap();
        assert_eq!(circle.ball(0, ratio(13, 100)).to_vec(), vec![0, 1, 7]);
        assert!(circle.ball(3, ratio(3, 5)).is_full());
        let interval = DiscreteSpace::interval(10).unwrap();
        assert_eq!(interval.ball(0, ratio(15, 100)).to_vec(), vec![0, 1]);
        // the center always belongs to its ball
        assert_eq!(circle.ball(5, ratio(1, 1000)).to_vec(), vec![5]);
    }

    #[test]
    fn basis_examples() {
        let circle = DiscreteSpace::circle(8).unwrap();
        let basis = circle.basis(circle.cell_size());
        assert_eq!(basis.len(), 8);
        let mut union = circle.empty();
        for b in &basis {
            union.union_with(b);
        }
        assert!(union.is_full());

        // max-metric balls of radius 0.3 on the 4x4 torus: a 3x3 block
        let torus = DiscreteSpace::torus(4).unwrap();
        let basis = torus.basis(ratio(3, 10));
        assert_eq!(basis.len(), 16);
        for (c, b) in basis.iter().enumerate() {
            let brute = (0..16).filter(|&j| torus.metric(c as Cell, j) < ratio(3, 10)).count();
            assert_eq!(b.len(), brute);
            assert!(b.len() >= 9);
        }

        let interval = DiscreteSpace::interval(4).unwrap();
        let basis = interval.basis(ratio(1, 1));
        assert_eq!(basis.len(), 4);
        assert!(basis.iter().all(|b| b.is_full()));
    }

    #[test]
    fn distance_to_full_is_monotone() {
        let space = DiscreteSpace::circle(12).unwrap();
        let small = CellSet::from_cells(12, [0]);
        let big = CellSet::from_cells(12, [0, 6]);
        let d_small = space.distance_to_full_steps(&small).unwrap();
        let d_big = space.distance_to_full_steps(&big).unwrap();
        assert!(d_big <= d_small);
        assert_eq!(d_small, space.hausdorff_steps(&small, &space.full()).unwrap());
        assert_eq!(d_big, 3);
    }
}
