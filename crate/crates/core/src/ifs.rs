//! Iterated function systems, their extended Hutchinson operator and the
//! minimality tests used on them.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::cellset::{Cell, CellSet};
use crate::error::{Error, Result};
use crate::maps::{rasterize_map, MapDescriptor, Rasterization};
use crate::phase_space::DiscreteSpace;
use crate::rational::Rational;
use crate::relation::CellRelation;
use crate::verdict::Verdict;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IfsOptions {
    /// Add `id_X` to the family (a "recording" IFS).
    pub adjoin_identity: bool,
    /// Add `f^{-1}` for every map `f`.
    pub symmetric_closure: bool,
    /// Replace every map by its inverse.
    pub use_inverse_family: bool,
    pub rasterization: Rasterization,
}

/// A finite family of maps on a discretized space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IfsSystem {
    space: DiscreteSpace,
    maps: Vec<MapDescriptor>,
    options: IfsOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

impl IfsSystem {
    pub fn new(space: DiscreteSpace, maps: Vec<MapDescriptor>, options: IfsOptions) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::EmptySystem);
        }
        for map in &maps {
            map.validate()?;
            if !map.invertible() {
                if options.symmetric_closure {
                    return Err(Error::NonInvertible {
                        option: "symmetric_closure",
                        map: map.to_string(),
                    });
                }
                if options.use_inverse_family {
                    return Err(Error::NonInvertible {
                        option: "use_inverse_family",
                        map: map.to_string(),
                    });
                }
            }
        }
        Ok(Self {
            space,
            maps,
            options,
        })
    }

    pub fn single(space: DiscreteSpace, map: MapDescriptor) -> Result<Self> {
        Self::new(space, vec![map], IfsOptions::default())
    }

    pub fn space(&self) -> &DiscreteSpace {
        &self.space
    }

    pub fn maps(&self) -> &[MapDescriptor] {
        &self.maps
    }

    pub fn options(&self) -> &IfsOptions {
        &self.options
    }

    /// Same maps and options on a different space.
    pub fn with_space(&self, space: DiscreteSpace) -> Self {
        Self {
            space,
            ..self.clone()
        }
    }

    /// The same system with `use_inverse_family` toggled (`F_-`).
    pub fn inverse_family(&self) -> Result<Self> {
        let mut options = self.options.clone();
        options.use_inverse_family = !options.use_inverse_family;
        Self::new(self.space.clone(), self.maps.clone(), options)
    }

    /// Rasterized relations of the maps as given.
    pub fn base_relations(&self) -> Result<Vec<CellRelation>> {
        self.maps
            .iter()
            .map(|m| rasterize_map(&self.space, m, self.options.rasterization))
            .collect()
    }

    /// Rasterized relations of the effective family after applying options:
    /// the (possibly inverted) maps, then their inverses under symmetric
    /// closure, then the identity if adjoined.
    pub fn effective_relations(&self) -> Result<Vec<CellRelation>> {
        let mut family = self.base_relations()?;
        if self.options.use_inverse_family {
            family = family.iter().map(CellRelation::inverse).collect();
        }
        if self.options.symmetric_closure {
            let inverses: Vec<_> = family.iter().map(CellRelation::inverse).collect();
            family.extend(inverses);
        }
        if self.options.adjoin_identity {
            family.push(CellRelation::identity(&self.space));
        }
        Ok(family)
    }

    /// The extended Hutchinson operator `F(A) = U_i f_i(A)` as a relation.
    pub fn hutchinson(&self) -> Result<CellRelation> {
        let family = self.effective_relations()?;
        CellRelation::union_all(&self.space, &family)
    }

    /// `f^n_w(A) = f_{w_n} o ... o f_{w_1}(A)`; indices are 0-based into the
    /// effective family.
    pub fn word_image(&self, word: &[usize], set: &CellSet) -> Result<CellSet> {
        let family = self.effective_relations()?;
        for &idx in word {
            if idx >= family.len() {
                return Err(Error::WordIndexOutOfRange {
                    index: idx,
                    maps: family.len(),
                });
            }
        }
        Ok(word
            .iter()
            .fold(set.clone(), |acc, &idx| family[idx].image(&acc)))
    }

    /// Forward or backward minimality of the family itself.
    pub fn minimality_check(&self, direction: Direction, horizon: usize) -> Result<MinimalityReport> {
        let rel = self.hutchinson()?;
        minimality_of(&directed(rel, direction), 1, horizon)
    }

    /// Minimality of `F^n` for every `n <= bound` ("totally minimal" up to
    /// the bound).
    pub fn total_minimality_check(
        &self,
        direction: Direction,
        bound: usize,
        horizon: usize,
    ) -> Result<TotalMinimality> {
        if bound == 0 {
            return Err(Error::InvalidParameter("minimality bound must be positive".into()));
        }
        let base = self.hutchinson()?;
        let mut power = base.clone();
        let mut per_power = Vec::with_capacity(bound);
        for n in 1..=bound {
            if n > 1 {
                power = CellRelation::compose(&base, &power)?;
            }
            per_power.push(minimality_of(&directed(power.clone(), direction), n, horizon)?);
        }
        let verdict = Verdict::all(per_power.iter().map(|r| r.verdict));
        Ok(TotalMinimality {
            direction,
            bound,
            verdict,
            per_power,
        })
    }

    /// Searches for a ball `U` around `fixed_cell` with `U` strictly inside
    /// `f(U)` for the map at `map_index` (0-based into the effective family).
    pub fn repelling_certificate(
        &self,
        map_index: usize,
        fixed_cell: Cell,
        max_radius_steps: u32,
    ) -> Result<Option<RepellingCertificate>> {
        let family = self.effective_relations()?;
        let map = family.get(map_index).ok_or(Error::WordIndexOutOfRange {
            index: map_index,
            maps: family.len(),
        })?;
        self.space.check_cell(fixed_cell)?;
        Ok(repelling_ball(map, fixed_cell, max_radius_steps))
    }
}

fn directed(rel: CellRelation, direction: Direction) -> CellRelation {
    match direction {
        Direction::Forward => rel,
        Direction::Backward => rel.inverse(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityReport {
    /// Which power `F^n` was checked.
    pub power: usize,
    pub verdict: Verdict,
    /// Deepest breadth-first layer needed to saturate a reachable set.
    pub max_depth: usize,
    /// A cell whose reachable set is a proper subset, with that set's size.
    pub failing_cell: Option<Cell>,
    pub failing_reach: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotalMinimality {
    pub direction: Direction,
    pub bound: usize,
    pub verdict: Verdict,
    pub per_power: Vec<MinimalityReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepellingCertificate {
    pub fixed_cell: Cell,
    pub radius: Rational,
    pub ball: CellSet,
    pub image: CellSet,
}

/// Minimality of a relation: the reachable set `U_{k>=0} R^k({c})` of every
/// cell must be the whole space.
pub fn minimality_of(rel: &CellRelation, power: usize, horizon: usize) -> Result<MinimalityReport> {
    if horizon == 0 {
        return Err(Error::InvalidHorizon);
    }
    let m = rel.cell_count();
    let mut max_depth = 0;
    let mut unresolved = false;
    let mut depth = vec![usize::MAX; m];
    let mut queue = VecDeque::new();
    for start in 0..m as Cell {
        depth.iter_mut().for_each(|d| *d = usize::MAX);
        depth[start as usize] = 0;
        queue.clear();
        queue.push_back(start);
        let mut reached = 1;
        let mut cut = false;
        while let Some(c) = queue.pop_front() {
            let d = depth[c as usize];
            if d >= horizon {
                cut = true;
                continue;
            }
            for &t in rel.successors(c) {
                if depth[t as usize] == usize::MAX {
                    depth[t as usize] = d + 1;
                    max_depth = max_depth.max(d + 1);
                    reached += 1;
                    queue.push_back(t);
                }
            }
        }
        if reached < m {
            if cut {
                unresolved = true;
            } else {
                return Ok(MinimalityReport {
                    power,
                    verdict: Verdict::Refuted,
                    max_depth,
                    failing_cell: Some(start),
                    failing_reach: Some(reached),
                });
            }
        }
    }
    Ok(MinimalityReport {
        power,
        verdict: if unresolved {
            Verdict::Unresolved
        } else {
            Verdict::Proved
        },
        max_depth,
        failing_cell: None,
        failing_reach: None,
    })
}

fn repelling_ball(map: &CellRelation, fixed: Cell, max_radius_steps: u32) -> Option<RepellingCertificate> {
    let space = map.space();
    if !map.contains_edge(fixed, fixed) {
        return None;
    }
    let limit = max_radius_steps.min(space.diameter_steps());
    (1..=limit).find_map(|k| {
        let radius = space.steps_to_rational(k);
        let ball = space.ball(fixed, radius);
        let image = map.image(&ball);
        (ball.is_subset(&image) && ball != image).then(|| RepellingCertificate {
            fixed_cell: fixed,
            radius,
            ball,
            image,
        })
    })
}
