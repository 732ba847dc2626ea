//! Topological exactness and mixing over a basis of open balls. Both are
//! decidable at resolution because every set orbit is eventually periodic.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::cellset::{Cell, CellSet};
use crate::error::{Error, Result};
use crate::orbit::{iterate_until_cycle, OrbitOutcome};
use crate::rational::Rational;
use crate::relation::CellRelation;
use crate::verdict::Verdict;

/// A basis open whose image sequence cycles without covering the space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessCertificate {
    pub center: Cell,
    pub open: CellSet,
    pub preperiod: usize,
    pub cycle: Vec<CellSet>,
}

impl ExactnessCertificate {
    /// Union of the cycle sets.
    pub fn core(&self) -> CellSet {
        let mut out = self.open.clone();
        out.clear();
        for set in &self.cycle {
            out.union_with(set);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessResult {
    pub verdict: Verdict,
    /// First `j` with `R^j(W) = X`, per basis open in center order.
    pub escape_times: Vec<Option<usize>>,
    /// One certificate per distinct limit-cycle core, each from the lowest
    /// center reaching it, in center order.
    pub certificates: Vec<ExactnessCertificate>,
    /// Per basis open, the index into `certificates` of the core it falls into.
    pub trapped_in: Vec<Option<usize>>,
}

impl ExactnessResult {
    pub fn certificate(&self) -> Option<&ExactnessCertificate> {
        self.certificates.first()
    }

    /// The certificate for the core that the open at `center` is trapped in.
    pub fn certificate_for(&self, center: Cell) -> Option<&ExactnessCertificate> {
        let idx = (*self.trapped_in.get(center as usize)?)?;
        self.certificates.get(idx)
    }

    pub fn max_escape_time(&self) -> Option<usize> {
        self.escape_times.iter().copied().try_fold(0, |acc, t| t.map(|t| acc.max(t)))
    }
}

enum OpenFate {
    Escaped(usize),
    Trapped { preperiod: usize, cycle: Vec<CellSet> },
    Unknown,
}

fn check_basis(basis_radius: Rational, rel: &CellRelation, horizon: usize) -> Result<Vec<CellSet>> {
    if horizon == 0 {
        return Err(Error::InvalidHorizon);
    }
    if basis_radius <= Rational::from_integer(0) {
        return Err(Error::InvalidParameter("basis radius must be positive".into()));
    }
    Ok(rel.space().basis(basis_radius))
}

/// Certifies or refutes `R^j(W) = X` for some `j`, for every basis open `W`.
pub fn exactness_check(rel: &CellRelation, basis_radius: Rational, horizon: usize) -> Result<ExactnessResult> {
    let basis = check_basis(basis_radius, rel, horizon)?;
    let fates: Vec<OpenFate> = basis
        .par_iter()
        .map(|open| match iterate_until_cycle(rel, open, horizon) {
            out if out.sets().iter().any(CellSet::is_full) => {
                OpenFate::Escaped(out.sets().iter().position(CellSet::is_full).unwrap_or(0))
            }
            OrbitOutcome::Cycled(orbit) => OpenFate::Trapped {
                preperiod: orbit.preperiod,
                cycle: orbit.cycle().to_vec(),
            },
            OrbitOutcome::HorizonReached(_) => OpenFate::Unknown,
        })
        .collect();

    let escape_times: Vec<Option<usize>> = fates
        .iter()
        .map(|f| match f {
            OpenFate::Escaped(j) => Some(*j),
            _ => None,
        })
        .collect();
    let mut index_of: HashMap<CellSet, usize> = HashMap::new();
    let mut certificates = Vec::new();
    let mut trapped_in = vec![None; fates.len()];
    for (c, (fate, open)) in fates.into_iter().zip(basis).enumerate() {
        if let OpenFate::Trapped { preperiod, cycle } = fate {
            let cert = ExactnessCertificate {
                center: c as Cell,
                open,
                preperiod,
                cycle,
            };
            let next = certificates.len();
            let idx = *index_of.entry(cert.core()).or_insert(next);
            if idx == next {
                certificates.push(cert);
            }
            trapped_in[c] = Some(idx);
        }
    }
    let verdict = match certificates.first() {
        Some(_) => Verdict::Refuted,
        None if escape_times_all(&escape_times) => Verdict::Proved,
        None => Verdict::Unresolved,
    };
    Ok(ExactnessResult {
        verdict,
        escape_times,
        certificates,
        trapped_in,
    })
}

fn escape_times_all(times: &[Option<usize>]) -> bool {
    times.iter().all(Option::is_some)
}

/// An ordered pair of basis opens `(W, V)` such that some set in the limit
/// cycle of `W` misses `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixingCounterexample {
    pub w_center: Cell,
    pub v_center: Cell,
    /// Index of the missing set in the orbit of `W`.
    pub missed_at: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixingResult {
    pub verdict: Verdict,
    /// `J_W = max_V J(W, V)` per basis open, when it exists.
    pub entry_times: Vec<Option<usize>>,
    pub counterexample: Option<MixingCounterexample>,
}

impl MixingResult {
    pub fn max_entry_time(&self) -> Option<usize> {
        self.entry_times.iter().copied().try_fold(0, |acc, t| t.map(|t| acc.max(t)))
    }
}

enum OpenMixing {
    Entry(usize),
    Miss(MixingCounterexample),
    Unknown,
}

/// For every ordered pair of basis opens `(W, V)`, `R^j(W)` must meet `V`
/// for all `j >= J`. A set meets the ball of radius `r` around `y` iff `y`
/// lies within `r` of it, so one distance field per orbit set settles all
/// `V` at once.
pub fn mixing_check(rel: &CellRelation, basis_radius: Rational, horizon: usize) -> Result<MixingResult> {
    let basis = check_basis(basis_radius, rel, horizon)?;
    let space = rel.space();
    let r = space.steps_below(basis_radius);
    let m = space.cell_count();
    let per_open: Vec<OpenMixing> = basis
        .par_iter()
        .enumerate()
        .map(|(w, open)| {
            let OrbitOutcome::Cycled(orbit) = iterate_until_cycle(rel, open, horizon) else {
                return OpenMixing::Unknown;
            };
            let mut last_miss: Vec<Option<usize>> = vec![None; m];
            for (idx, set) in orbit.sets.iter().enumerate() {
                if set.is_full() {
                    continue;
                }
                for (y, d) in space.distance_field(set).into_iter().enumerate() {
                    if d >= r {
                        last_miss[y] = Some(idx);
                    }
                }
            }
            let worst = last_miss
                .iter()
                .enumerate()
                .filter_map(|(y, miss)| miss.map(|i| (y, i)))
                .max_by_key(|&(y, i)| (i, std::cmp::Reverse(y)));
            match worst {
                Some((y, i)) if i >= orbit.preperiod => OpenMixing::Miss(MixingCounterexample {
                    w_center: w as Cell,
                    v_center: y as Cell,
                    missed_at: i,
                }),
                Some((_, i)) => OpenMixing::Entry(i + 1),
                None => OpenMixing::Entry(0),
            }
        })
        .collect();
    let entry_times = per_open
        .iter()
        .map(|o| match o {
            OpenMixing::Entry(j) => Some(*j),
            _ => None,
        })
        .collect::<Vec<_>>();
    let counterexample = per_open.iter().find_map(|o| match o {
        OpenMixing::Miss(c) => Some(*c),
        _ => None,
    });
    let verdict = match counterexample {
        Some(_) => Verdict::Refuted,
        None if entry_times.iter().all(Option::is_some) => Verdict::Proved,
        None => Verdict::Unresolved,
    };
    Ok(MixingResult {
        verdict,
        entry_times,
        counterexample,
    })
}
