//! Finite sets of cell indices, stored as bitsets over a fixed universe.

use std::fmt;

use fixedbitset::FixedBitSet;

/// Index of a cell in a [`DiscreteSpace`](crate::DiscreteSpace).
pub type Cell = u32;

/// A subset of `[0, M)` for a space with `M` cells.
///
/// Stands in for both compact and open sets: at a fixed resolution a cell is
/// simultaneously a closed cell and a basic open set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellSet {
    bits: FixedBitSet,
}

impl CellSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        Self { bits }
    }

    pub fn singleton(universe: usize, cell: Cell) -> Self {
        let mut set = Self::empty(universe);
        set.insert(cell);
        set
    }

    /// Builds a set from cell indices; panics on indices outside the universe.
    pub fn from_cells<I: IntoIterator<Item = Cell>>(universe: usize, cells: I) -> Self {
        let mut set = Self::empty(universe);
        for c in cells {
            set.insert(c);
        }
        set
    }

    /// Number of cells in the ambient space.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.bits.is_full()
    }

    pub fn insert(&mut self, cell: Cell) {
        assert!(
            (cell as usize) < self.universe(),
            "cell {cell} outside universe of {} cells",
            self.universe()
        );
        self.bits.insert(cell as usize);
    }

    pub fn remove(&mut self, cell: Cell) {
        self.bits.set(cell as usize, false);
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.bits.contains(cell as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = Cell> + '_ {
        self.bits.ones().map(|c| c as Cell)
    }

    pub fn first(&self) -> Option<Cell> {
        self.bits.minimum().map(|c| c as Cell)
    }

    pub fn to_vec(&self) -> Vec<Cell> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &CellSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &CellSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &CellSet) -> CellSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn intersects(&self, other: &CellSet) -> bool {
        !self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn clear(&mut self) {
        self.bits.clear();
    }
}

impl fmt::Debug for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CellSet<{}>", self.universe())?;
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_algebra() {
        let a = CellSet::from_cells(8, [1, 3, 5]);
        let b = CellSet::from_cells(8, [3, 4]);
        assert_eq!(a.union(&b).to_vec(), vec![1, 3, 4, 5]);
        assert_eq!(a.intersection(&b).to_vec(), vec![3]);
        assert!(a.intersects(&b));
        assert!(CellSet::singleton(8, 3).is_subset(&a));
        assert!(CellSet::full(8).is_full());
        assert_eq!(CellSet::full(8).len(), 8);
        assert!(CellSet::empty(8).is_empty());
        assert_eq!(a.first(), Some(1));
    }

    #[test]
    #[should_panic]
    fn rejects_out_of_universe_cells() {
        CellSet::singleton(4, 4);
    }
}
