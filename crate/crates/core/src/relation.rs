//! Closed relations on a cell space, stored as per-cell successor lists.

use crate::cellset::{Cell, CellSet};
use crate::error::{Error, Result};
use crate::phase_space::DiscreteSpace;
use crate::rational::Rational;

/// A relation `phi: X -> X` at cell resolution: `successors(i)` is `phi(cell i)`.
///
/// Stored in compressed-row form with sorted, duplicate-free rows.
#[derive(Debug, Clone)]
pub struct CellRelation {
    space: DiscreteSpace,
    offsets: Vec<usize>,
    targets: Vec<Cell>,
    from_map: bool,
}

impl PartialEq for CellRelation {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.offsets == other.offsets && self.targets == other.targets
    }
}

impl Eq for CellRelation {}

impl CellRelation {
    /// Builds a relation from one successor list per cell.
    pub fn from_successors(space: &DiscreteSpace, rows: Vec<Vec<Cell>>) -> Result<Self> {
        if rows.len() != space.cell_count() {
            return Err(Error::InvalidParameter(format!(
                "expected {} successor rows, got {}",
                space.cell_count(),
                rows.len()
            )));
        }
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut row in rows {
            row.sort_unstable();
            row.dedup();
            for &t in &row {
                space.check_cell(t)?;
            }
            targets.extend_from_slice(&row);
            offsets.push(targets.len());
        }
        Ok(Self {
            space: space.clone(),
            offsets,
            targets,
            from_map: false,
        })
    }

    /// Builds a relation from a per-cell successor function.
    pub fn from_fn<F, I>(space: &DiscreteSpace, mut f: F) -> Result<Self>
    where
        F: FnMut(Cell) -> I,
        I: IntoIterator<Item = Cell>,
    {
        let rows = (0..space.cell_count() as Cell)
            .map(|c| f(c).into_iter().collect())
            .collect();
        Self::from_successors(space, rows)
    }

    pub fn from_sets(space: &DiscreteSpace, sets: &[CellSet]) -> Result<Self> {
        Self::from_successors(space, sets.iter().map(CellSet::to_vec).collect())
    }

    pub fn identity(space: &DiscreteSpace) -> Self {
        let m = space.cell_count();
        Self {
            space: space.clone(),
            offsets: (0..=m).collect(),
            targets: (0..m as Cell).collect(),
            from_map: true,
        }
    }

    pub fn empty(space: &DiscreteSpace) -> Self {
        Self {
            space: space.clone(),
            offsets: vec![0; space.cell_count() + 1],
            targets: Vec::new(),
            from_map: false,
        }
    }

    pub(crate) fn mark_from_map(mut self, from_map: bool) -> Self {
        self.from_map = from_map;
        self
    }

    /// True when the relation is the rasterization of a single map.
    pub fn is_rasterized_map(&self) -> bool {
        self.from_map
    }

    pub fn space(&self) -> &DiscreteSpace {
        &self.space
    }

    pub fn cell_count(&self) -> usize {
        self.space.cell_count()
    }

    pub fn successors(&self, cell: Cell) -> &[Cell] {
        let c = cell as usize;
        &self.targets[self.offsets[c]..self.offsets[c + 1]]
    }

    pub fn successor_set(&self, cell: Cell) -> CellSet {
        CellSet::from_cells(self.cell_count(), self.successors(cell).iter().copied())
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    /// Every cell has at least one successor.
    pub fn is_total(&self) -> bool {
        self.offsets.windows(2).all(|w| w[1] > w[0])
    }

    pub fn contains_edge(&self, from: Cell, to: Cell) -> bool {
        self.successors(from).binary_search(&to).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Cell, Cell)> + '_ {
        (0..self.cell_count() as Cell)
            .flat_map(move |c| self.successors(c).iter().map(move |&t| (c, t)))
    }

    /// `phi(A)`, the union of the successors of the members of `A`.
    pub fn image(&self, set: &CellSet) -> CellSet {
        let mut out = self.space.empty();
        self.image_into(set, &mut out);
        out
    }

    /// Writes `phi(A)` into `out`, clearing it first.
    pub fn image_into(&self, set: &CellSet, out: &mut CellSet) {
        out.clear();
        for c in set.iter() {
            for &t in self.successors(c) {
                out.insert(t);
            }
        }
    }

    /// `phi^n(A)`; `n = 0` returns `A`.
    pub fn iterate_image(&self, set: &CellSet, n: usize) -> CellSet {
        let mut current = set.clone();
        let mut next = self.space.empty();
        for _ in 0..n {
            if current.is_empty() {
                break;
            }
            self.image_into(&current, &mut next);
            std::mem::swap(&mut current, &mut next);
        }
        current
    }

    /// `phi^{-1} = {(y, x) : (x, y) in phi}`.
    pub fn inverse(&self) -> Self {
        let m = self.cell_count();
        let mut counts = vec![0usize; m + 1];
        for &t in &self.targets {
            counts[t as usize + 1] += 1;
        }
        for i in 0..m {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut fill = counts;
        let mut targets = vec![0; self.targets.len()];
        // sources are visited in increasing order, so rows come out sorted
        for (src, dst) in self.edges() {
            targets[fill[dst as usize]] = src;
            fill[dst as usize] += 1;
        }
        Self {
            space: self.space.clone(),
            offsets,
            targets,
            from_map: false,
        }
    }

    /// `outer o inner`: first `inner`, then `outer`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if outer.space != inner.space {
            return Err(Error::SpaceMismatch);
        }
        let m = inner.cell_count();
        let mut scratch = outer.space.empty();
        let mut rows = Vec::with_capacity(m);
        for c in 0..m as Cell {
            scratch.clear();
            for &mid in inner.successors(c) {
                for &t in outer.successors(mid) {
                    scratch.insert(t);
                }
            }
            rows.push(scratch.to_vec());
        }
        Self::from_successors(&outer.space, rows)
    }

    /// Cellwise union of relations on the same space.
    pub fn union_all<'a, I>(space: &DiscreteSpace, relations: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a CellRelation>,
    {
        let relations: Vec<&CellRelation> = relations.into_iter().collect();
        if relations.iter().any(|r| r.space != *space) {
            return Err(Error::SpaceMismatch);
        }
        let rows = (0..space.cell_count() as Cell)
            .map(|c| {
                relations
                    .iter()
                    .flat_map(|r| r.successors(c).iter().copied())
                    .collect()
            })
            .collect();
        let union = Self::from_successors(space, rows)?;
        let single = relations.len() == 1 && relations[0].from_map;
        Ok(union.mark_from_map(single))
    }

    /// `phi^n` as a relation.
    pub fn power(&self, n: usize) -> Self {
        let mut out = Self::identity(&self.space).mark_from_map(false);
        for _ in 0..n {
            out = Self::compose(self, &out).expect("same space");
        }
        out
    }

    /// Target-side fattening: `i -> j` iff `j` lies strictly within `radius`
    /// of `phi(i)`.
    pub fn fatten(&self, radius: Rational) -> Self {
        let rows = (0..self.cell_count() as Cell)
            .map(|c| self.space.fatten(&self.successor_set(c), radius).to_vec())
            .collect();
        Self::from_successors(&self.space, rows).expect("fattened cells are in range")
    }

    /// Restricts every successor set to `keep` and drops rows outside it.
    pub fn restrict(&self, keep: &CellSet) -> Self {
        let rows = (0..self.cell_count() as Cell)
            .map(|c| {
                if keep.contains(c) {
                    self.successors(c)
                        .iter()
                        .copied()
                        .filter(|&t| keep.contains(t))
                        .collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        Self::from_successors(&self.space, rows).expect("subset of valid cells")
    }
}
