//! Built-in map descriptors and their exact cell rasterization.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cellset::Cell;
use crate::error::{Error, Result};
use crate::phase_space::{DiscreteSpace, SpaceKind};
use crate::rational::{self, Rational};
use crate::relation::CellRelation;

/// A continuous map drawn from the built-in catalogue.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "snake_case")]
pub enum MapDescriptor {
    /// `x -> x + alpha (mod 1)` on the circle.
    Rotation {
        #[serde(with = "rational::serde_str")]
        alpha: Rational,
    },
    /// `x -> m x (mod 1)` on the circle; expanding with constant `m`.
    TimesM { m: u32 },
    /// `(x, y) -> (x, y + x)` on the torus.
    TorusShear1,
    /// `(x, y) -> (x + y, y)` on the torus.
    TorusShear2,
    /// `x -> x + mu sin(2 pi x) (mod 1)`: repelling fixed point at 0,
    /// attracting fixed point at 1/2.
    MorseSmale {
        #[serde(with = "rational::serde_str")]
        mu: Rational,
    },
    Identity,
}

/// How a map becomes a cell relation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rasterization {
    /// `successors(i)` = every cell meeting the image of cell `i`.
    #[default]
    Outer,
    /// `successors(i)` = the cell of the image of the lattice point at the
    /// corner of cell `i`. Only for maps that preserve the lattice.
    Lattice,
}

impl MapDescriptor {
    pub fn rotation(alpha: Rational) -> Self {
        MapDescriptor::Rotation { alpha }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MapDescriptor::Rotation { .. } => "rotation",
            MapDescriptor::TimesM { .. } => "times_m",
            MapDescriptor::TorusShear1 => "torus_shear_1",
            MapDescriptor::TorusShear2 => "torus_shear_2",
            MapDescriptor::MorseSmale { .. } => "morse_smale",
            MapDescriptor::Identity => "identity",
        }
    }

    pub fn invertible(&self) -> bool {
        !matches!(self, MapDescriptor::TimesM { .. })
    }

    /// Expansion constant `sigma` for expanding maps.
    pub fn expansion(&self) -> Option<u32> {
        match self {
            MapDescriptor::TimesM { m } => Some(*m),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        match self {
            MapDescriptor::Rotation { alpha } if *alpha < zero || *alpha >= one => Err(
                Error::InvalidMap(format!("rotation angle {alpha} must lie in [0, 1)")),
            ),
            MapDescriptor::TimesM { m } if *m < 2 => {
                Err(Error::InvalidMap(format!("times_m needs m >= 2 (got {m})")))
            }
            MapDescriptor::MorseSmale { mu }
                if *mu <= zero || rational::to_f64(*mu) * TAU >= 1.0 =>
            {
                Err(Error::InvalidMap(format!(
                    "morse_smale needs 0 < mu < 1/(2 pi) (got {mu})"
                )))
            }
            _ => Ok(()),
        }
    }

    fn supports(&self, kind: SpaceKind) -> bool {
        match self {
            MapDescriptor::Identity => true,
            MapDescriptor::TorusShear1 | MapDescriptor::TorusShear2 => kind == SpaceKind::Torus,
            _ => kind == SpaceKind::Circle,
        }
    }

    /// Evaluates the underlying continuous map at a point given in unit
    /// coordinates (one coordinate per axis).
    pub fn apply_point(&self, p: &[f64]) -> Vec<f64> {
        let wrap = |v: f64| v.rem_euclid(1.0);
        match self {
            MapDescriptor::Rotation { alpha } => vec![wrap(p[0] + rational::to_f64(*alpha))],
            MapDescriptor::TimesM { m } => vec![wrap(p[0] * *m as f64)],
            MapDescriptor::TorusShear1 => vec![p[0], wrap(p[1] + p[0])],
            MapDescriptor::TorusShear2 => vec![wrap(p[0] + p[1]), p[1]],
            MapDescriptor::MorseSmale { mu } => {
                vec![wrap(morse_smale_lift(rational::to_f64(*mu), p[0]))]
            }
            MapDescriptor::Identity => p.to_vec(),
        }
    }

    fn mismatch(&self, space: &DiscreteSpace, detail: &str) -> Error {
        Error::DescriptorMismatch {
            map: self.to_string(),
            kind: space.kind().name(),
            detail: detail.to_string(),
        }
    }

    /// Rotation shift measured in cells, `alpha * M`.
    fn cell_shift(alpha: Rational, m: usize) -> Rational {
        alpha * m as i64
    }
}

impl fmt::Display for MapDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapDescriptor::Rotation { alpha } => write!(f, "rotation({alpha})"),
            MapDescriptor::TimesM { m } => write!(f, "times_m({m})"),
            MapDescriptor::MorseSmale { mu } => write!(f, "morse_smale({mu})"),
            other => f.write_str(other.name()),
        }
    }
}

fn morse_smale_lift(mu: f64, x: f64) -> f64 {
    x + mu * (TAU * x).sin()
}

/// Outer approximation of `descriptor` on `space` (or its lattice restriction).
pub fn rasterize_map(
    space: &DiscreteSpace,
    descriptor: &MapDescriptor,
    mode: Rasterization,
) -> Result<CellRelation> {
    descriptor.validate()?;
    if !descriptor.supports(space.kind()) {
        return Err(descriptor.mismatch(space, ""));
    }
    let m = space.cell_count();
    let n = space.resolution();
    let wrap = |v: i64, modulus: usize| v.rem_euclid(modulus as i64) as Cell;
    let relation = match (descriptor, mode) {
        (MapDescriptor::Identity, _) => CellRelation::identity(space),
        (MapDescriptor::Rotation { alpha }, mode) => {
            let shift = MapDescriptor::cell_shift(*alpha, m);
            let lo = shift.floor().to_integer();
            let hi = shift.ceil().to_integer();
            if mode == Rasterization::Lattice && lo != hi {
                return Err(descriptor.mismatch(space, " (angle is not a multiple of the cell size)"));
            }
            CellRelation::from_fn(space, |i| {
                let i = i as i64;
                (lo..=hi).map(move |s| wrap(i + s, m))
            })?
        }
        (MapDescriptor::TimesM { m: factor }, Rasterization::Outer) => {
            let factor = *factor as i64;
            let width = factor.min(m as i64);
            CellRelation::from_fn(space, |i| {
                let start = i as i64 * factor;
                (0..width).map(move |k| wrap(start + k, m))
            })?
        }
        (MapDescriptor::TimesM { m: factor }, Rasterization::Lattice) => {
            let factor = *factor as i64;
            CellRelation::from_fn(space, |i| [wrap(i as i64 * factor, m)])?
        }
        (MapDescriptor::TorusShear1 | MapDescriptor::TorusShear2, mode) => {
            let spread: i64 = if mode == Rasterization::Outer { 1 } else { 0 };
            let shear1 = matches!(descriptor, MapDescriptor::TorusShear1);
            CellRelation::from_fn(space, |cell| {
                let (x, y) = space.torus_coords(cell);
                let (x, y) = (x as i64, y as i64);
                (0..=spread).map(move |k| {
                    let (nx, ny) = if shear1 { (x, x + y + k) } else { (x + y + k, y) };
                    space.torus_cell(wrap(nx, n) as usize, wrap(ny, n) as usize)
                })
            })?
        }
        (MapDescriptor::MorseSmale { mu }, Rasterization::Outer) => {
            // increasing lift: the image of [a, b) is [f(a), f(b)); endpoints
            // within SNAP of a cell boundary (the fixed points 0 and 1/2 land
            // there exactly) are snapped instead of floored
            const SNAP: f64 = 1e-9;
            let snap_floor = |v: f64| {
                let r = v.round();
                if (v - r).abs() < SNAP { r as i64 } else { v.floor() as i64 }
            };
            let snap_ceil = |v: f64| {
                let r = v.round();
                if (v - r).abs() < SNAP { r as i64 } else { v.ceil() as i64 }
            };
            let mu = rational::to_f64(*mu);
            let scale = m as f64;
            CellRelation::from_fn(space, |i| {
                let a = i as f64 / scale;
                let b = (i as f64 + 1.0) / scale;
                let lo = snap_floor(morse_smale_lift(mu, a) * scale);
                let hi = snap_ceil(morse_smale_lift(mu, b) * scale) - 1;
                (lo..=hi.max(lo)).map(move |c| wrap(c, m))
            })?
        }
        (MapDescriptor::MorseSmale { .. }, Rasterization::Lattice) => {
            return Err(descriptor.mismatch(space, " (map does not preserve the lattice)"));
        }
    };
    Ok(relation.mark_from_map(true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent check: random points of each cell land in a listed successor.
    fn assert_sound(space: &DiscreteSpace, map: &MapDescriptor, samples: usize) {
        let rel = rasterize_map(space, map, Rasterization::Outer).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = space.resolution() as f64;
        for _ in 0..samples {
            let cell = rng.random_range(0..space.cell_count()) as Cell;
            let (target, point) = match space.kind() {
                SpaceKind::Torus => {
                    let (cx, cy) = space.torus_coords(cell);
                    let p = [
                        (cx as f64 + rng.random::<f64>()) / n,
                        (cy as f64 + rng.random::<f64>()) / n,
                    ];
                    let q = map.apply_point(&p);
                    let t = space.torus_cell((q[0] * n) as usize, (q[1] * n) as usize);
                    (t, p.to_vec())
                }
                _ => {
                    let p = [(cell as f64 + rng.random::<f64>()) / n];
                    let q = map.apply_point(&p);
                    (((q[0] * n) as usize % space.cell_count()) as Cell, p.to_vec())
                }
            };
            assert!(
                rel.contains_edge(cell, target),
                "{map}: point {point:?} of cell {cell} maps to cell {target}"
            );
        }
    }

    #[test]
    fn doubling_rows() {
        let space = DiscreteSpace::circle(16).unwrap();
        let rel = rasterize_map(&space, &MapDescriptor::TimesM { m: 2 }, Rasterization::Outer).unwrap();
        for i in 0..16u32 {
            assert_eq!(rel.successors(i), {
                let mut v = vec![(2 * i) % 16, (2 * i + 1) % 16];
                v.sort();
                v
            });
        }
        assert!(rel.is_rasterized_map());
    }

    #[test]
    fn rotation_rows() {
        let space = DiscreteSpace::circle(8).unwrap();
        let exact = rasterize_map(&space, &MapDescriptor::rotation(ratio(1, 8)), Rasterization::Outer).unwrap();
        for i in 0..8u32 {
            assert_eq!(exact.successors(i), &[(i + 1) % 8]);
        }
        // 0.3 * 8 = 2.4 cells: the shifted arc covers two cells
        let split = rasterize_map(&space, &MapDescriptor::rotation(ratio(3, 10)), Rasterization::Outer).unwrap();
        assert_eq!(split.successors(0), &[2, 3]);
        assert_eq!(split.successors(7), &[1, 2]);
        assert!(rasterize_map(&space, &MapDescriptor::rotation(ratio(3, 10)), Rasterization::Lattice).is_err());
    }

    #[test]
    fn torus_shear_rows() {
        let space = DiscreteSpace::torus(4).unwrap();
        let outer = rasterize_map(&space, &MapDescriptor::TorusShear1, Rasterization::Outer).unwrap();
        // column segment above (1/2, 1/2): rows 0 and 1 of column 2
        let c = space.torus_cell(2, 2);
        assert_eq!(
            outer.successor_set(c).to_vec(),
            vec![space.torus_cell(2, 0), space.torus_cell(2, 1)]
        );
        for i in 0..16 {
            assert!(outer.successors(i).len() <= 3);
        }
        let lattice = rasterize_map(&space, &MapDescriptor::TorusShear1, Rasterization::Lattice).unwrap();
        assert_eq!(lattice.successors(c), &[space.torus_cell(2, 0)]);
        // the lattice rows are the lattice-point images and sit inside the outer rows
        for (a, b) in lattice.edges() {
            assert!(outer.contains_edge(a, b));
        }
    }

    #[test]
    fn outer_rasterization_is_sound() {
        let circle = DiscreteSpace::circle(97).unwrap();
        let torus = DiscreteSpace::torus(13).unwrap();
        for map in [
            MapDescriptor::rotation(ratio(355, 1130)),
            MapDescriptor::rotation(ratio(5, 97)),
            MapDescriptor::TimesM { m: 2 },
            MapDescriptor::TimesM { m: 3 },
            MapDescriptor::MorseSmale { mu: ratio(1, 8) },
            MapDescriptor::Identity,
        ] {
            assert_sound(&circle, &map, 10_000);
        }
        for map in [
            MapDescriptor::TorusShear1,
            MapDescriptor::TorusShear2,
            MapDescriptor::Identity,
        ] {
            assert_sound(&torus, &map, 10_000);
        }
    }

    #[test]
    fn rejects_invalid_descriptors() {
        let circle = DiscreteSpace::circle(8).unwrap();
        let torus = DiscreteSpace::torus(4).unwrap();
        let outer = Rasterization::Outer;
        assert!(matches!(
            rasterize_map(&circle, &MapDescriptor::TorusShear1, outer),
            Err(Error::DescriptorMismatch { .. })
        ));
        assert!(matches!(
            rasterize_map(&torus, &MapDescriptor::TimesM { m: 2 }, outer),
            Err(Error::DescriptorMismatch { .. })
        ));
        assert!(rasterize_map(&circle, &MapDescriptor::TimesM { m: 1 }, outer).is_err());
        assert!(rasterize_map(&circle, &MapDescriptor::rotation(ratio(1, 1)), outer).is_err());
        assert!(rasterize_map(&circle, &MapDescriptor::MorseSmale { mu: ratio(1, 5) }, outer).is_err());
        assert!(rasterize_map(&circle, &MapDescriptor::MorseSmale { mu: ratio(1, 8) }, Rasterization::Lattice).is_err());
    }

    #[test]
    fn morse_smale_fixed_points() {
        let space = DiscreteSpace::circle(64).unwrap();
        let rel = rasterize_map(&space, &MapDescriptor::MorseSmale { mu: ratio(1, 8) }, Rasterization::Outer).unwrap();
        // repelling at 0: the first cell spreads over two cells
        assert_eq!(rel.successors(0), &[0, 1]);
        // attracting at 1/2: the cell is mapped into itself
        assert_eq!(rel.successors(32), &[32]);
    }

    #[test]
    fn serde_shape() {
        let map = MapDescriptor::rotation(ratio(263, 840));
        let json = serde_json::to_string(&map).unwrap();
        assert_eq!(json, r#"{"name":"rotation","params":{"alpha":"263/840"}}"#);
        let back: MapDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, map);
        let id: MapDescriptor = serde_json::from_str(r#"{"name":"identity"}"#).unwrap();
        assert_eq!(id, MapDescriptor::Identity);
    }
}
