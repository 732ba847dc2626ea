//! Finite backward orbits `x_0, x_{-1}, x_{-2}, ...` with
//! `x_{-i} in R(x_{-i-1})`: dense orbits and pairs whose separation drops
//! below a schedule of thresholds.

use crate::cellset::{Cell, CellSet};
use crate::error::{Error, Result};
use crate::phase_space::DiscreteSpace;
use crate::rational::Rational;
use crate::relation::CellRelation;
use crate::topology::exactness_check;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackwardOrbit {
    /// `cells[i]` is `x_{-i}`.
    pub cells: Vec<Cell>,
    /// False when the relation is not a rasterized map, where the
    /// construction still applies but goes beyond the map setting.
    pub from_map: bool,
}

impl BackwardOrbit {
    pub fn new(x0: Cell, from_map: bool) -> Self {
        Self {
            cells: vec![x0],
            from_map,
        }
    }

    pub fn depth(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn tail(&self) -> Cell {
        *self.cells.last().expect("orbit holds x_0")
    }

    /// Re-checks `x_{-i} in R(x_{-i-1})` for every `i`.
    pub fn verify(&self, rel: &CellRelation) -> bool {
        self.cells.windows(2).all(|w| rel.contains_edge(w[1], w[0]))
    }

    pub fn cell_set(&self, space: &DiscreteSpace) -> CellSet {
        CellSet::from_cells(space.cell_count(), self.cells.iter().copied())
    }
}

/// Backward layers `L_0 = {start}`, `L_j = R^{-1}(L_{j-1})`, grown until
/// `stop` accepts a layer or `horizon` layers have been built.
struct Layers {
    layers: Vec<CellSet>,
}

impl Layers {
    fn grow(
        inverse: &CellRelation,
        start: Cell,
        horizon: usize,
        mut stop: impl FnMut(&CellSet) -> bool,
    ) -> Result<Option<Self>> {
        let mut layers = vec![inverse.space().singleton(start)];
        for step in 1..=horizon {
            let next = inverse.image(&layers[step - 1]);
            if next.is_empty() {
                return Err(Error::DeadEnd { cell: start, step });
            }
            let done = stop(&next);
            layers.push(next);
            if done {
                return Ok(Some(Self { layers }));
            }
        }
        Ok(None)
    }

    /// Forward path `z = p_j, p_{j-1}, ..., p_0 = start` through the layers,
    /// each step taking the lowest-index successor in the next layer. Returns
    /// `p_1, ..., p_j`, i.e. the cells to append to a backward orbit.
    fn path_from(&self, rel: &CellRelation, z: Cell) -> Vec<Cell> {
        let j = self.layers.len() - 1;
        let mut path = vec![z];
        let mut cur = z;
        for layer in self.layers[1..j].iter().rev() {
            cur = *rel
                .successors(cur)
                .iter()
                .find(|&&c| layer.contains(c))
                .expect("layer cells have successors in the previous layer");
            path.push(cur);
        }
        path.reverse();
        path
    }
}

/// Exactness, checked at resolution with single-cell opens.
fn require_exact(rel: &CellRelation, basis_radius: Rational) -> Result<()> {
    let horizon = 4 * rel.cell_count();
    let res = exactness_check(rel, basis_radius, horizon)?;
    if res.verdict.is_proved() {
        Ok(())
    } else {
        Err(Error::RequiresExactness)
    }
}

/// Extends `orbit` backwards to the least depth whose preimage layer meets
/// `target`, choosing the lowest-index cell there. Returns the number of
/// steps added.
pub fn extend_to_target(
    rel: &CellRelation,
    inverse: &CellRelation,
    orbit: &mut BackwardOrbit,
    target: &CellSet,
    horizon: usize,
) -> Result<usize> {
    let tail = orbit.tail();
    let layers = Layers::grow(inverse, tail, horizon, |layer| layer.intersects(target))?;
    let Some(layers) = layers else {
        return Err(Error::HorizonExceeded {
            horizon,
            depth: orbit.depth(),
            partial: orbit.cells.clone(),
        });
    };
    let last = layers.layers.last().expect("at least one layer");
    let z = last.intersection(target).first().expect("layer meets target");
    let path = layers.path_from(rel, z);
    let added = path.len();
    orbit.cells.extend(path);
    Ok(added)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseOrbit {
    pub orbit: BackwardOrbit,
    /// `d_H(orbit cells, X) + cell_size`.
    pub density_radius: Rational,
    /// `(target center, target radius, steps added)` for every target that
    /// needed an extension.
    pub extensions: Vec<(Cell, Rational, usize)>,
}

/// Backward orbit of `x0` meeting every basis ball, visiting targets from
/// coarse radii (`basis_radius * 2^k`) down to `basis_radius`. Targets the
/// orbit already meets are skipped.
pub fn backward_dense_orbit(
    rel: &CellRelation,
    x0: Cell,
    basis_radius: Rational,
    per_target_horizon: usize,
) -> Result<DenseOrbit> {
    let space = rel.space();
    space.check_cell(x0)?;
    if per_target_horizon == 0 {
        return Err(Error::InvalidHorizon);
    }
    require_exact(rel, basis_radius)?;
    let inverse = rel.inverse();
    let mut radii = vec![basis_radius];
    while *radii.last().expect("non-empty") * 2 <= space.diameter() {
        let next = *radii.last().expect("non-empty") * 2;
        radii.push(next);
    }
    radii.reverse();

    let mut orbit = BackwardOrbit::new(x0, rel.is_rasterized_map());
    let mut visited = orbit.cell_set(space);
    let mut extensions = Vec::new();
    for &radius in &radii {
        for center in 0..space.cell_count() as Cell {
            let target = space.ball(center, radius);
            if visited.intersects(&target) {
                continue;
            }
            let before = orbit.cells.len();
            let added = extend_to_target(rel, &inverse, &mut orbit, &target, per_target_horizon)?;
            for &c in &orbit.cells[before..] {
                visited.insert(c);
            }
            extensions.push((center, radius, added));
        }
    }
    let gap = space
        .distance_to_full_steps(&visited)
        .expect("orbit holds x_0");
    Ok(DenseOrbit {
        orbit,
        density_radius: space.steps_to_rational(gap) + space.cell_size(),
        extensions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checkpoint {
    pub depth: usize,
    pub epsilon: Rational,
    pub distance: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairedOrbits {
    pub x: BackwardOrbit,
    pub y: BackwardOrbit,
    pub checkpoints: Vec<Checkpoint>,
}

/// Extends the backward orbits of `x0` and `y0` in lockstep; for each
/// threshold the least common depth is found at which the two preimage
/// layers hold a pair closer than it, and the closest such pair (lowest
/// indices on ties) is chosen.
pub fn paired_backward_orbits(
    rel: &CellRelation,
    x0: Cell,
    y0: Cell,
    epsilon_schedule: &[Rational],
    per_target_horizon: usize,
) -> Result<PairedOrbits> {
    let space = rel.space();
    space.check_cell(x0)?;
    space.check_cell(y0)?;
    if per_target_horizon == 0 {
        return Err(Error::InvalidHorizon);
    }
    if epsilon_schedule.is_empty()
        || epsilon_schedule[0] <= Rational::from_integer(0)
        || epsilon_schedule.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::InvalidParameter(
            "epsilon schedule must be positive and strictly decreasing".into(),
        ));
    }
    require_exact(rel, space.cell_size())?;
    let inverse = rel.inverse();
    let from_map = rel.is_rasterized_map();
    let mut x = BackwardOrbit::new(x0, from_map);
    let mut y = BackwardOrbit::new(y0, from_map);
    let mut checkpoints = Vec::with_capacity(epsilon_schedule.len());

    for &epsilon in epsilon_schedule {
        let limit = space.steps_below(epsilon);
        let (tx, ty) = (x.tail(), y.tail());
        let mut lx = vec![space.singleton(tx)];
        let mut ly = vec![space.singleton(ty)];
        let mut found = None;
        for step in 1..=per_target_horizon {
            let nx = inverse.image(&lx[step - 1]);
            let ny = inverse.image(&ly[step - 1]);
            if nx.is_empty() || ny.is_empty() {
                let cell = if nx.is_empty() { tx } else { ty };
                return Err(Error::DeadEnd { cell, step });
            }
            let field = space.distance_field(&ny);
            let best = nx.iter().map(|c| (field[c as usize], c)).min();
            lx.push(nx);
            ly.push(ny);
            if let Some((d, cx)) = best.filter(|&(d, _)| d < limit) {
                let cy = ly[step]
                    .iter()
                    .find(|&c| space.metric_steps(cx, c) == d)
                    .expect("distance field attained");
                found = Some((cx, cy, d));
                break;
            }
        }
        let Some((cx, cy, d)) = found else {
            return Err(Error::HorizonExceeded {
                horizon: per_target_horizon,
                depth: x.depth(),
                partial: x.cells.clone(),
            });
        };
        x.cells.extend(Layers { layers: lx }.path_from(rel, cx));
        y.cells.extend(Layers { layers: ly }.path_from(rel, cy));
        checkpoints.push(Checkpoint {
            depth: x.depth(),
            epsilon,
            distance: space.steps_to_rational(d),
        });
    }
    Ok(PairedOrbits { x, y, checkpoints })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{rasterize_map, MapDescriptor, Rasterization};
    use crate::rational::ratio;

    fn doubling(m: usize) -> CellRelation {
        let space = DiscreteSpace::circle(m).unwrap();
        rasterize_map(&space, &MapDescriptor::TimesM { m: 2 }, Rasterization::Outer).unwrap()
    }

    #[test]
    fn dense_orbit_for_doubling() {
        let rel = doubling(64);
        let dense = backward_dense_orbit(&rel, 0, ratio(1, 64), 64).unwrap();
        assert!(dense.orbit.verify(&rel));
        assert!(dense.orbit.cell_set(rel.space()).is_full());
        assert_eq!(dense.density_radius, ratio(1, 64));
        assert!(dense.orbit.depth() <= 6 * 64);
        assert!(dense.extensions.iter().all(|&(_, _, j)| j <= 6));
    }

    #[test]
    fn identity_is_not_exact() {
        let rel = CellRelation::identity(&DiscreteSpace::circle(8).unwrap());
        assert!(matches!(
            backward_dense_orbit(&rel, 0, ratio(1, 8), 8),
            Err(Error::RequiresExactness)
        ));
    }

    #[test]
    fn explicit_target_extension() {
        // outer doubling on 8 cells: R^{-1}(0) = {0, 4}, R^{-2}(0) = {0, 2, 4, 6}
        let rel = doubling(8);
        let inv = rel.inverse();
        let space = rel.space().clone();
        let mut orbit = BackwardOrbit::new(0, true);
        assert_eq!(extend_to_target(&rel, &inv, &mut orbit, &space.singleton(4), 8).unwrap(), 1);
        assert_eq!(orbit.cells, vec![0, 4]);
        // R^{-1}(4) = {2, 6}, R^{-2}(4) = {1, 3, 5, 7}
        assert_eq!(extend_to_target(&rel, &inv, &mut orbit, &space.singleton(1), 8).unwrap(), 2);
        assert!(orbit.verify(&rel));
        assert_eq!(orbit.tail(), 1);
    }

    #[test]
    fn horizon_exceeded_keeps_partial_orbit() {
        let rel = doubling(64);
        let inv = rel.inverse();
        let mut orbit = BackwardOrbit::new(0, true);
        let far = rel.space().singleton(33);
        match extend_to_target(&rel, &inv, &mut orbit, &far, 2) {
            Err(Error::HorizonExceeded { partial, .. }) => assert_eq!(partial, vec![0]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn paired_orbits_for_doubling() {
        let rel = doubling(64);
        let schedule = [ratio(1, 4), ratio(1, 16), ratio(1, 64)];
        let pair = paired_backward_orbits(&rel, 0, 32, &schedule, 64).unwrap();
        assert!(pair.x.verify(&rel) && pair.y.verify(&rel));
        assert_eq!(pair.x.depth(), pair.y.depth());
        for (cp, eps) in pair.checkpoints.iter().zip(schedule) {
            assert!(cp.distance < eps);
            assert_eq!(
                rel.space().metric(pair.x.cells[cp.depth], pair.y.cells[cp.depth]),
                cp.distance
            );
        }
        assert_eq!(pair.checkpoints.last().unwrap().distance, ratio(0, 1));

        let same = paired_backward_orbits(&rel, 5, 5, &schedule, 64).unwrap();
        assert!(same.checkpoints.iter().all(|c| c.distance == ratio(0, 1)));
    }

    #[test]
    fn paired_orbits_first_meet_at_depth_three() {
        let rel = doubling(8);
        let pair = paired_backward_orbits(&rel, 0, 4, &[ratio(1, 8)], 8).unwrap();
        assert_eq!(pair.checkpoints[0].depth, 3);
        assert_eq!(pair.checkpoints[0].distance, ratio(0, 1));
        assert!(pair.x.verify(&rel) && pair.y.verify(&rel));
    }
}
