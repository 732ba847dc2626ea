//! Attractor-type properties of a relation: attraction traces, physical
//! attraction over basis opens, proper-attractor witnesses, the sup-metric
//! `d_phi` and equicontinuity.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::cellset::{Cell, CellSet};
use crate::error::{Error, Result};
use crate::orbit::{iterate_until_cycle, OrbitOutcome, SetOrbit};
use crate::phase_space::DiscreteSpace;
use crate::rational::Rational;
use crate::relation::CellRelation;
use crate::verdict::Verdict;

/// `d_H(R^i(seed), X)` along the orbit of one seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttractionTrace {
    pub seed: CellSet,
    /// One entry per recorded set; `None` where the image is empty.
    pub distances: Vec<Option<Rational>>,
    pub converged_at: Option<usize>,
    /// `(preperiod, period)` when a cycle was detected within the horizon.
    pub cycle: Option<(usize, usize)>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttractorResult {
    pub verdict: Verdict,
    pub traces: Vec<AttractionTrace>,
}

pub fn singleton_seeds(space: &DiscreteSpace) -> Vec<CellSet> {
    (0..space.cell_count() as Cell).map(|c| space.singleton(c)).collect()
}

fn tolerance_steps(space: &DiscreteSpace, tolerance: Rational) -> Result<u32> {
    space
        .steps_at_most(tolerance)
        .ok_or_else(|| Error::InvalidParameter(format!("negative tolerance {tolerance}")))
}

/// Traces `seed` and judges convergence with `close(steps)` deciding when a
/// set counts as near the whole space.
fn trace_seed(
    rel: &CellRelation,
    seed: &CellSet,
    horizon: usize,
    close: impl Fn(u32) -> bool,
) -> AttractionTrace {
    let space = rel.space();
    let outcome = iterate_until_cycle(rel, seed, horizon);
    let steps: Vec<Option<u32>> = outcome
        .sets()
        .iter()
        .map(|s| space.distance_to_full_steps(s))
        .collect();
    let ok = |d: &Option<u32>| d.is_some_and(&close);
    // first index after which every recorded set is close
    let converged_at = steps
        .iter()
        .rposition(|d| !ok(d))
        .map_or(Some(0), |last_miss| Some(last_miss + 1))
        .filter(|&i| i < steps.len());
    let (cycle, verdict) = match &outcome {
        OrbitOutcome::Cycled(orbit) => {
            let holds = steps[orbit.preperiod..].iter().all(ok);
            (
                Some((orbit.preperiod, orbit.period)),
                Verdict::from_bool(holds),
            )
        }
        OrbitOutcome::HorizonReached(_) => (None, Verdict::Unresolved),
    };
    AttractionTrace {
        seed: seed.clone(),
        distances: steps
            .iter()
            .map(|d| d.map(|s| space.steps_to_rational(s)))
            .collect(),
        converged_at: if verdict.is_proved() { converged_at } else { None },
        cycle,
        verdict,
    }
}

/// Whether every seed's limit cycle lies within `tolerance` of the whole
/// space. Singleton seeds suffice since images distribute over unions.
pub fn attractor_check(
    rel: &CellRelation,
    seeds: &[CellSet],
    horizon: usize,
    tolerance: Rational,
) -> Result<AttractorResult> {
    if seeds.is_empty() {
        return Err(Error::EmptySeeds);
    }
    if horizon == 0 {
        return Err(Error::InvalidHorizon);
    }
    if seeds.iter().any(CellSet::is_empty) {
        return Err(Error::InvalidParameter("attractor seeds must be non-empty".into()));
    }
    let tol = tolerance_steps(rel.space(), tolerance)?;
    let traces: Vec<_> = seeds
        .par_iter()
        .map(|seed| trace_seed(rel, seed, horizon, |d| d <= tol))
        .collect();
    let verdict = Verdict::all(traces.iter().map(|t| t.verdict));
    Ok(AttractorResult { verdict, traces })
}

/// Worst `d_H(R^i({x}), X)` over all cells `x`, for `i = 0..=horizon`.
/// Cycled traces are unrolled past their recorded length. An entry is
/// `None` when some image has emptied out by step `i`.
pub fn attraction_profile(rel: &CellRelation, horizon: usize) -> Result<Vec<Option<Rational>>> {
    let res = attractor_check(rel, &singleton_seeds(rel.space()), horizon, Rational::from_integer(0))?;
    let space = rel.space();
    let mut worst: Vec<Option<u32>> = vec![Some(0); horizon + 1];
    for trace in &res.traces {
        for (i, slot) in worst.iter_mut().enumerate() {
            let j = match trace.cycle {
                Some((pre, per)) if i >= pre + per => pre + (i - pre) % per,
                _ => i,
            };
            let d = trace
                .distances
                .get(j)
                .copied()
                .flatten()
                .map(|d| (d * space.denominator()).to_integer() as u32);
            *slot = match (*slot, d) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
        }
    }
    Ok(worst
        .into_iter()
        .map(|d| d.map(|s| space.steps_to_rational(s)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenAttraction {
    pub center: Cell,
    pub verdict: Verdict,
    /// The attracted compact subset found inside the open.
    pub witness: Option<CellSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhysicalResult {
    pub verdict: Verdict,
    pub per_open: Vec<OpenAttraction>,
}

/// Every basis open must contain a compact set attracted to the whole space.
/// Singletons are tried first, then the open itself; since images are
/// monotone, the open failing means no subset of it can succeed.
pub fn physical_attractor_check(
    rel: &CellRelation,
    basis_radius: Rational,
    horizon: usize,
    tolerance: Rational,
) -> Result<PhysicalResult> {
    let space = rel.space();
    if basis_radius < space.cell_size() {
        return Err(Error::InvalidParameter(format!(
            "basis radius {basis_radius} is below the cell size {}",
            space.cell_size()
        )));
    }
    if horizon == 0 {
        return Err(Error::InvalidHorizon);
    }
    let tol = tolerance_steps(space, tolerance)?;
    let singles: Vec<Verdict> = (0..space.cell_count() as Cell)
        .into_par_iter()
        .map(|c| trace_seed(rel, &space.singleton(c), horizon, |d| d <= tol).verdict)
        .collect();
    let per_open: Vec<OpenAttraction> = space
        .basis(basis_radius)
        .into_par_iter()
        .enumerate()
        .map(|(center, open)| {
            if let Some(c) = open.iter().find(|&c| singles[c as usize].is_proved()) {
                return OpenAttraction {
                    center: center as Cell,
                    verdict: Verdict::Proved,
                    witness: Some(space.singleton(c)),
                };
            }
            let verdict = trace_seed(rel, &open, horizon, |d| d <= tol).verdict;
            OpenAttraction {
                center: center as Cell,
                verdict,
                witness: verdict.is_proved().then_some(open),
            }
        })
        .collect();
    let verdict = Verdict::all(per_open.iter().map(|o| o.verdict));
    Ok(PhysicalResult { verdict, per_open })
}

/// The tolerance at which physical attraction over a basis matches mixing
/// over the same basis exactly: a set meets every open ball of radius `r`
/// iff it is within `r - cell_size` of every cell.
pub fn paired_physical_tolerance(space: &DiscreteSpace, basis_radius: Rational) -> Rational {
    let k = space.steps_below(basis_radius).max(1);
    space.steps_to_rational(k - 1)
}

/// `(family, member, K, U, V)` with infinitely many `i` such that
/// `R^i(B_member)` meets `U` and misses `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperWitness {
    pub family: usize,
    pub member: usize,
    pub k: CellSet,
    pub u: CellSet,
    pub v: CellSet,
    /// Hit times up to the horizon, over all members of the family.
    pub hits: Vec<usize>,
}

/// Finite-horizon search for a witness that the whole space is not a proper
/// attractor. A witness is only reported when its hits recur in the detected
/// limit cycle, so the hit count is infinite at resolution.
pub fn proper_attractor_witness_search(
    rel: &CellRelation,
    families: &[Vec<CellSet>],
    candidates: &[CellSet],
    neighborhood_radius: Rational,
    horizon: usize,
    min_hits: usize,
) -> Result<Option<ProperWitness>> {
    let space = rel.space();
    if min_hits == 0 {
        return Err(Error::InvalidParameter("min_hits must be at least 1".into()));
    }
    if horizon == 0 {
        return Err(Error::InvalidHorizon);
    }
    if candidates.iter().any(|k| k.is_empty() || k.is_full()) {
        return Err(Error::ImproperCandidate);
    }
    let r_steps = space.steps_below(neighborhood_radius);
    if r_steps == 0 {
        return Err(Error::InvalidParameter("neighborhood radius must be positive".into()));
    }

    let mut orbits: HashMap<&CellSet, OrbitOutcome> = HashMap::new();
    for member in families.iter().flatten() {
        orbits
            .entry(member)
            .or_insert_with(|| iterate_until_cycle(rel, member, horizon));
    }
    // Cycle sets within r of every cell meet every basis open and can never
    // miss V, so only the sparse ones are worth pairing with candidates.
    let mut dense_cache: HashMap<&CellSet, bool> = HashMap::new();
    let mut useful: Vec<(usize, usize, &CellSet)> = Vec::new();
    for (f, family) in families.iter().enumerate() {
        for (j, member) in family.iter().enumerate() {
            let Some(orbit) = orbits[member].cycled() else {
                continue;
            };
            for c in orbit.cycle() {
                let dense = *dense_cache.entry(c).or_insert_with(|| {
                    space.distance_to_full_steps(c).is_some_and(|d| d < r_steps)
                });
                if !dense && !c.is_empty() {
                    useful.push((f, j, c));
                }
            }
        }
    }
    if useful.is_empty() {
        return Ok(None);
    }

    for k in candidates {
        let u = space.fatten(k, neighborhood_radius);
        for &(f, j, c) in &useful {
            if !c.intersects(&u) {
                continue;
            }
            let field = space.distance_field(&u.union(c));
            let Some(y) = field.iter().position(|&d| d >= r_steps) else {
                continue;
            };
            let v = space.ball(y as Cell, neighborhood_radius);
            let hits: Vec<usize> = (0..=horizon)
                .filter(|&i| {
                    families[f].iter().any(|member| {
                        let set = match &orbits[member] {
                            OrbitOutcome::Cycled(o) => o.at(i),
                            OrbitOutcome::HorizonReached(sets) => match sets.get(i) {
                                Some(s) => s,
                                None => return false,
                            },
                        };
                        set.intersects(&u) && !set.intersects(&v)
                    })
                })
                .collect();
            if hits.len() >= min_hits {
                return Ok(Some(ProperWitness {
                    family: f,
                    member: j,
                    k: k.clone(),
                    u,
                    v,
                    hits,
                }));
            }
        }
    }
    Ok(None)
}

/// Families and candidates used when none are supplied: constant singleton
/// families, orbit-sequence families `B_n = {x_n}` along every singleton
/// orbit that fails to approach the whole space within `tolerance`, and all
/// singleton candidates.
pub fn default_witness_families(
    rel: &CellRelation,
    horizon: usize,
    tolerance: Rational,
) -> Result<(Vec<Vec<CellSet>>, Vec<CellSet>)> {
    let space = rel.space();
    let seeds = singleton_seeds(space);
    let traces = attractor_check(rel, &seeds, horizon, tolerance)?.traces;
    let mut families: Vec<Vec<CellSet>> = seeds.iter().map(|s| vec![s.clone()]).collect();
    for trace in traces.iter().filter(|t| !t.verdict.is_proved()) {
        let orbit = iterate_until_cycle(rel, &trace.seed, horizon);
        let family: Vec<CellSet> = orbit
            .sets()
            .iter()
            .filter_map(|s| s.first().map(|c| space.singleton(c)))
            .collect();
        if family.len() > 1 {
            families.push(family);
        }
    }
    let candidates = if space.cell_count() > 1 { seeds } else { Vec::new() };
    Ok((families, candidates))
}

fn hausdorff_sequence_max(
    space: &DiscreteSpace,
    a: &[CellSet],
    b: &[CellSet],
) -> Result<u32> {
    a.iter()
        .zip(b)
        .map(|(x, y)| space.hausdorff_steps(x, y))
        .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
}

fn forward_sets(rel: &CellRelation, cell: Cell, n: usize) -> Vec<CellSet> {
    let mut sets = Vec::with_capacity(n + 1);
    sets.push(rel.space().singleton(cell));
    for k in 0..n {
        let next = rel.image(&sets[k]);
        sets.push(next);
    }
    sets
}

/// `max_{0 <= n <= N} d_H(R^n({i}), R^n({j}))`.
pub fn d_phi(rel: &CellRelation, i: Cell, j: Cell, n: usize) -> Result<Rational> {
    let space = rel.space();
    space.check_cell(i)?;
    space.check_cell(j)?;
    let steps = hausdorff_sequence_max(space, &forward_sets(rel, i, n), &forward_sets(rel, j, n))?;
    Ok(space.steps_to_rational(steps))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquicontinuityReport {
    pub horizon: usize,
    pub epsilon: Rational,
    pub equicontinuous_cells: CellSet,
    pub sensitivity_lower_bound: Rational,
}

/// Flags cells whose `d_phi` distance to every adjacent cell stays below
/// `epsilon` up to `n` iterates.
pub fn equicontinuity_report(rel: &CellRelation, n: usize, epsilon: Rational) -> Result<EquicontinuityReport> {
    let space = rel.space();
    if n == 0 {
        return Err(Error::InvalidParameter("equicontinuity needs N >= 1".into()));
    }
    if epsilon <= Rational::from_integer(0) {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let m = space.cell_count() as Cell;
    let sets: Vec<Vec<CellSet>> = (0..m).into_par_iter().map(|c| forward_sets(rel, c, n)).collect();
    let eps = space.steps_below(epsilon);
    // worst adjacent d_phi per cell
    let worst: Vec<u32> = (0..m)
        .into_par_iter()
        .map(|i| {
            space
                .neighbors(i)
                .into_iter()
                .map(|j| hausdorff_sequence_max(space, &sets[i as usize], &sets[j as usize]))
                .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
        })
        .collect::<Result<_>>()?;
    let equicontinuous_cells = CellSet::from_cells(
        m as usize,
        (0..m).filter(|&i| worst[i as usize] < eps),
    );
    let bound = worst.iter().copied().min().unwrap_or(0);
    Ok(EquicontinuityReport {
        horizon: n,
        epsilon,
        equicontinuous_cells,
        sensitivity_lower_bound: space.steps_to_rational(bound),
    })
}

/// Least `n` such that `d_H(R^i({x}), X) < tolerance` for every cell `x`
/// and every `i >= n`, including all phases of each limit cycle.
pub fn uniform_attraction_bound(rel: &CellRelation, horizon: usize, tolerance: Rational) -> Result<Option<usize>> {
    if horizon == 0 {
        return Err(Error::InvalidHorizon);
    }
    let space = rel.space();
    let Some(limit) = space.steps_below(tolerance).checked_sub(1) else {
        return Ok(None);
    };
    let per_cell: Vec<Option<usize>> = singleton_seeds(space)
        .par_iter()
        .map(|seed| {
            let t = trace_seed(rel, seed, horizon, |d| d <= limit);
            if t.verdict.is_proved() {
                t.converged_at
            } else {
                None
            }
        })
        .collect();
    Ok(per_cell
        .into_iter()
        .try_fold(0, |acc, n| n.map(|n| acc.max(n))))
}

/// The open-intersection form of attraction: for every seed `K` and basis
/// open `W`, `R^j(K)` meets `W` for all large `j`. Evaluated directly on the
/// limit cycles without distance fields.
pub fn open_intersection_check(
    rel: &CellRelation,
    seeds: &[CellSet],
    basis_radius: Rational,
    horizon: usize,
) -> Result<Verdict> {
    if seeds.is_empty() {
        return Err(Error::EmptySeeds);
    }
    let opens = rel.space().basis(basis_radius);
    let verdicts: Vec<Verdict> = seeds
        .par_iter()
        .map(|seed| match iterate_until_cycle(rel, seed, horizon) {
            OrbitOutcome::Cycled(orbit) => Verdict::from_bool(cycle_meets_all(&orbit, &opens)),
            OrbitOutcome::HorizonReached(_) => Verdict::Unresolved,
        })
        .collect();
    Ok(Verdict::all(verdicts))
}

fn cycle_meets_all(orbit: &SetOrbit, opens: &[CellSet]) -> bool {
    orbit
        .cycle()
        .iter()
        .all(|set| opens.iter().all(|w| set.intersects(w)))
}
