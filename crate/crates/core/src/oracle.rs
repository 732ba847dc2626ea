//! Naive exhaustive verifier for spaces of at most 12 cells. Sets are `u32`
//! masks; limit behaviour is read off by iterating `2^M` steps (enough to
//! enter the cycle) and then collecting the next `2^M` sets. No hashing, no
//! distance fields, no pruning.

use crate::cellset::Cell;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::relation::CellRelation;
use crate::verdict::Verdict;

pub const ORACLE_MAX_CELLS: usize = 12;

struct Brute {
    m: usize,
    full: u32,
    succ: Vec<u32>,
    /// `metric_steps` for every pair.
    dist: Vec<Vec<u32>>,
}

impl Brute {
    fn new(rel: &CellRelation) -> Result<Self> {
        let m = rel.cell_count();
        if m > ORACLE_MAX_CELLS {
            return Err(Error::OracleTooLarge {
                max: ORACLE_MAX_CELLS,
                got: m,
            });
        }
        let space = rel.space();
        let succ = (0..m as Cell)
            .map(|c| rel.successors(c).iter().fold(0u32, |acc, &t| acc | (1 << t)))
            .collect();
        let dist = (0..m as Cell)
            .map(|i| (0..m as Cell).map(|j| space.metric_steps(i, j)).collect())
            .collect();
        Ok(Self {
            m,
            full: (1u32 << m) - 1,
            succ,
            dist,
        })
    }

    fn image(&self, set: u32) -> u32 {
        (0..self.m)
            .filter(|&c| set & (1 << c) != 0)
            .fold(0, |acc, c| acc | self.succ[c])
    }

    fn subsets(&self) -> impl Iterator<Item = u32> {
        1..=self.full
    }

    fn limit_sets(&self, start: u32) -> Vec<u32> {
        let t = 1usize << self.m;
        let mut s = start;
        for _ in 0..t {
            s = self.image(s);
        }
        let mut out = Vec::with_capacity(t);
        for _ in 0..t {
            out.push(s);
            s = self.image(s);
        }
        out
    }

    /// Every cell within `tol` steps of a member.
    fn within(&self, set: u32, tol: u32) -> bool {
        set != 0
            && (0..self.m).all(|y| {
                (0..self.m)
                    .filter(|&s| set & (1 << s) != 0)
                    .any(|s| self.dist[y][s] <= tol)
            })
    }

    fn ball(&self, center: usize, radius_steps: u32) -> u32 {
        (0..self.m)
            .filter(|&y| self.dist[center][y] < radius_steps)
            .fold(0, |acc, y| acc | (1 << y))
    }

    fn attracted(&self, start: u32, tol: u32) -> bool {
        self.limit_sets(start).into_iter().all(|s| self.within(s, tol))
    }

    fn attractor(&self, tol: u32) -> bool {
        self.subsets().all(|k| self.attracted(k, tol))
    }

    fn physical(&self, r: u32, tol: u32) -> bool {
        (0..self.m).all(|c| {
            let u = self.ball(c, r);
            self.subsets()
                .filter(|&k| k & !u == 0)
                .any(|k| self.attracted(k, tol))
        })
    }

    fn mixing(&self, r: u32) -> bool {
        (0..self.m).all(|w| {
            let limits = self.limit_sets(self.ball(w, r));
            (0..self.m).all(|v| {
                let v = self.ball(v, r);
                limits.iter().all(|s| s & v != 0)
            })
        })
    }

    fn exact(&self, r: u32) -> bool {
        (0..self.m).all(|w| {
            let mut s = self.ball(w, r);
            (0..=(1usize << self.m)).any(|_| {
                let hit = s == self.full;
                s = self.image(s);
                hit
            })
        })
    }

    /// Some limit set meets a proper `K` and misses a cell outside `K`.
    fn proper_witness(&self) -> bool {
        let mut limits: Vec<u32> = self.subsets().flat_map(|b| self.limit_sets(b)).collect();
        limits.sort_unstable();
        limits.dedup();
        limits.into_iter().any(|c| {
            (1..self.full).any(|k| {
                c & k != 0 && (0..self.m).any(|v| (k | c) & (1 << v) == 0)
            })
        })
    }

    /// Every singleton orbit is eventually full.
    fn uniform_bound(&self) -> bool {
        (0..self.m).all(|x| self.limit_sets(1 << x).into_iter().all(|s| s == self.full))
    }

    /// Adjacent cells keep `d_phi` within one step up to `n` iterates.
    fn adjacent_cells_stay_close(&self, n: usize) -> bool {
        (0..self.m).all(|i| {
            (0..self.m).filter(|&j| self.dist[i][j] == 1).all(|j| {
                let (mut a, mut b) = (1u32 << i, 1u32 << j);
                (0..=n).all(|_| {
                    let ok = self.hausdorff(a, b).is_some_and(|d| d <= 1);
                    a = self.image(a);
                    b = self.image(b);
                    ok
                })
            })
        })
    }

    fn hausdorff(&self, a: u32, b: u32) -> Option<u32> {
        if a == 0 || b == 0 {
            return None;
        }
        let directed = |x: u32, y: u32| {
            (0..self.m)
                .filter(|&p| x & (1 << p) != 0)
                .map(|p| {
                    (0..self.m)
                        .filter(|&q| y & (1 << q) != 0)
                        .map(|q| self.dist[p][q])
                        .min()
                        .unwrap_or(u32::MAX)
                })
                .max()
                .unwrap_or(0)
        };
        Some(directed(a, b).max(directed(b, a)))
    }
}

fn steps(rel: &CellRelation, tolerance: Rational) -> Result<u32> {
    rel.space()
        .steps_at_most(tolerance)
        .ok_or_else(|| Error::InvalidParameter(format!("negative tolerance {tolerance}")))
}

/// Attraction of every non-empty subset.
pub fn brute_attractor(rel: &CellRelation, tolerance: Rational) -> Result<Verdict> {
    let b = Brute::new(rel)?;
    Ok(Verdict::from_bool(b.attractor(steps(rel, tolerance)?)))
}

/// Every basis ball contains some subset (any subset) that is attracted.
pub fn brute_physical(rel: &CellRelation, basis_radius: Rational, tolerance: Rational) -> Result<Verdict> {
    let b = Brute::new(rel)?;
    let r = rel.space().steps_below(basis_radius);
    Ok(Verdict::from_bool(b.physical(r, steps(rel, tolerance)?)))
}

pub fn brute_mixing(rel: &CellRelation, basis_radius: Rational) -> Result<Verdict> {
    let b = Brute::new(rel)?;
    Ok(Verdict::from_bool(b.mixing(rel.space().steps_below(basis_radius))))
}

pub fn brute_exactness(rel: &CellRelation, basis_radius: Rational) -> Result<Verdict> {
    let b = Brute::new(rel)?;
    Ok(Verdict::from_bool(b.exact(rel.space().steps_below(basis_radius))))
}

/// Exhaustive evaluation of the attractor/mixing/exactness implications at
/// tolerance 0 over single-cell opens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationRecord {
    pub attractor: bool,
    pub physical: bool,
    pub mixing: bool,
    pub proper: bool,
    pub inverse_exact: bool,
    pub uniform_bound: bool,
    pub adjacent_cells_stay_close: bool,
    /// Labels of the violated implications.
    pub violations: Vec<&'static str>,
    /// Set when "attractor => equicontinuous" fails; expanding
    /// relations separate adjacent cells even when every orbit fills the
    /// space, so this is tracked apart from the other implications.
    pub equicontinuity_gap: bool,
}

pub fn brute_implications(rel: &CellRelation) -> Result<ImplicationRecord> {
    let b = Brute::new(rel)?;
    let inv = Brute::new(&rel.inverse())?;
    let attractor = b.attractor(0);
    let physical = b.physical(1, 0);
    let mixing = b.mixing(1);
    let proper = !b.proper_witness();
    let inverse_exact = inv.exact(1);
    let uniform_bound = b.uniform_bound();
    let adjacent_cells_stay_close = b.adjacent_cells_stay_close(1 << b.m);

    let mut violations = Vec::new();
    if physical != mixing {
        violations.push("physical <=> mixing");
    }
    if attractor && !physical {
        violations.push("attractor => physical");
    }
    if attractor && !proper {
        violations.push("attractor => proper");
    }
    if attractor != inverse_exact {
        violations.push("attractor <=> inverse exact");
    }
    if attractor && !uniform_bound {
        violations.push("attractor => uniform bound");
    }
    Ok(ImplicationRecord {
        attractor,
        physical,
        mixing,
        proper,
        inverse_exact,
        uniform_bound,
        adjacent_cells_stay_close,
        violations,
        equicontinuity_gap: attractor && !adjacent_cells_stay_close,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{rasterize_map, MapDescriptor, Rasterization};
    use crate::phase_space::DiscreteSpace;
    use crate::rational::ratio;

    #[test]
    fn attractor_examples() {
        let space = DiscreteSpace::circle(8).unwrap();
        let dbl = rasterize_map(&space, &MapDescriptor::TimesM { m: 2 }, Rasterization::Outer).unwrap();
        assert_eq!(brute_attractor(&dbl.inverse(), ratio(0, 1)).unwrap(), Verdict::Proved);
        let rot = rasterize_map(&space, &MapDescriptor::rotation(ratio(1, 8)), Rasterization::Outer).unwrap();
        assert_eq!(brute_attractor(&rot, ratio(0, 1)).unwrap(), Verdict::Refuted);
        let one = DiscreteSpace::finite(1).unwrap();
        assert_eq!(
            brute_attractor(&CellRelation::identity(&one), ratio(0, 1)).unwrap(),
            Verdict::Proved
        );
    }

    #[test]
    fn refuses_large_spaces() {
        let space = DiscreteSpace::circle(13).unwrap();
        assert!(matches!(
            brute_attractor(&CellRelation::identity(&space), ratio(0, 1)),
            Err(Error::OracleTooLarge { max: 12, got: 13 })
        ));
    }

    #[test]
    fn identity_refutes_everything() {
        let space = DiscreteSpace::circle(3).unwrap();
        let rec = brute_implications(&CellRelation::identity(&space)).unwrap();
        assert!(!rec.attractor && !rec.physical && !rec.mixing && !rec.inverse_exact);
        assert!(rec.violations.is_empty());
    }

    #[test]
    fn all_relations_on_two_cells() {
        let space = DiscreteSpace::finite(2).unwrap();
        for code in 0u32..16 {
            let rows = (0..2)
                .map(|c| (0..2).filter(|t| code & (1 << (2 * c + t)) != 0).collect())
                .collect();
            let rel = CellRelation::from_successors(&space, rows).unwrap();
            let rec = brute_implications(&rel).unwrap();
            assert!(rec.violations.is_empty(), "relation {code}: {:?}", rec.violations);
            assert!(!rec.equicontinuity_gap);
        }
    }

    #[test]
    fn expanding_relations_show_the_equicontinuity_gap() {
        let space = DiscreteSpace::circle(8).unwrap();
        let dbl = rasterize_map(&space, &MapDescriptor::TimesM { m: 2 }, Rasterization::Outer).unwrap();
        let rec = brute_implications(&dbl).unwrap();
        assert!(rec.attractor && rec.violations.is_empty());
        assert!(rec.equicontinuity_gap);
    }
}
