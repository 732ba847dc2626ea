//! Runs a selection of checks on a system and assembles a report; replays a
//! report against the engine.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::attractor::{
    attractor_check, default_witness_families, equicontinuity_report, paired_physical_tolerance,
    physical_attractor_check, proper_attractor_witness_search, singleton_seeds, uniform_attraction_bound,
};
use crate::cellset::Cell;
use crate::chain::{build_chain_graph, chain_mixing_check, chain_transitive_check, generate_pseudo_orbit, shadowing_search};
use crate::error::{Error, Result};
use crate::ifs::{Direction, IfsSystem};
use crate::inverse_limit::backward_dense_orbit;
use crate::maps::MapDescriptor;
use crate::phase_space::DiscreteSpace;
use crate::rational::{self, Rational};
use crate::relation::CellRelation;
use crate::report::{
    cells, AnalysisReport, CycleCertificate, MixingMiss, PropertyRecord, ProperWitnessRecord, ShadowRecord, Witness,
    REPORT_FORMAT,
};
use crate::system_file::SystemSpec;
use crate::topology::{exactness_check, mixing_check};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Attractor,
    InverseAttractor,
    Physical,
    ProperWitness,
    Exactness,
    Mixing,
    Chain,
    Shadowing,
    Equicontinuity,
    BackwardOrbit,
    Minimality,
    Repelling,
}

impl Check {
    pub const ALL: [Check; 12] = [
        Check::Attractor,
        Check::InverseAttractor,
        Check::Physical,
        Check::ProperWitness,
        Check::Exactness,
        Check::Mixing,
        Check::Chain,
        Check::Shadowing,
        Check::Equicontinuity,
        Check::BackwardOrbit,
        Check::Minimality,
        Check::Repelling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Attractor => "attractor",
            Check::InverseAttractor => "inverse-attractor",
            Check::Physical => "physical",
            Check::ProperWitness => "proper-witness",
            Check::Exactness => "exactness",
            Check::Mixing => "mixing",
            Check::Chain => "chain",
            Check::Shadowing => "shadowing",
            Check::Equicontinuity => "equicontinuity",
            Check::BackwardOrbit => "backward-orbit",
            Check::Minimality => "minimality",
            Check::Repelling => "repelling",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        Check::ALL
            .into_iter()
            .find(|c| c.name() == text)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown check `{text}`")))
    }

    /// Parses a comma-separated list, keeping order and dropping repeats.
    pub fn parse_list(text: &str) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for part in text.split(',').filter(|p| !p.trim().is_empty()) {
            let check = Check::parse(part)?;
            if !out.contains(&check) {
                out.push(check);
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidParameter("no checks selected".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// User-facing parameters; anything left out falls back to a default that
/// depends on the space.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(with = "rational::serde_str::option", skip_serializing_if = "Option::is_none")]
    pub basis_radius: Option<Rational>,
    #[serde(with = "rational::serde_str::option", skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<Rational>,
    #[serde(with = "rational::serde_str::option", skip_serializing_if = "Option::is_none")]
    pub physical_tolerance: Option<Rational>,
    #[serde(with = "rational::serde_str::option", skip_serializing_if = "Option::is_none")]
    pub delta: Option<Rational>,
    #[serde(with = "rational::serde_str::option", skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chains: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_check: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimality_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equicontinuity_horizon: Option<usize>,
    #[serde(with = "rational::serde_str::option", skip_serializing_if = "Option::is_none")]
    pub equicontinuity_epsilon: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_hits: Option<usize>,
}

impl AnalysisParams {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    /// Values set in `other` win.
    pub fn overlay(&self, other: &AnalysisParams) -> AnalysisParams {
        macro_rules! pick {
            ($($f:ident),*) => {
                AnalysisParams { $($f: other.$f.or(self.$f)),* }
            };
        }
        pick!(
            horizon,
            basis_radius,
            tolerance,
            physical_tolerance,
            delta,
            epsilon,
            rng_seed,
            chains,
            chain_length,
            n_check,
            minimality_bound,
            equicontinuity_horizon,
            equicontinuity_epsilon,
            min_hits
        )
    }

    /// Drops the values tied to a particular grid (horizon, radii,
    /// tolerances, delta, epsilon) so the rest can move to another resolution.
    pub fn without_grid_terms(&self) -> AnalysisParams {
        AnalysisParams {
            horizon: None,
            basis_radius: None,
            tolerance: None,
            physical_tolerance: None,
            delta: None,
            epsilon: None,
            equicontinuity_epsilon: None,
            ..self.clone()
        }
    }

    pub fn resolve(&self, space: &DiscreteSpace) -> Result<ResolvedParams> {
        let cs = space.cell_size();
        let basis_radius = self.basis_radius.unwrap_or(cs);
        let delta = self.delta.unwrap_or(cs * 3 / 2);
        let resolved = ResolvedParams {
            horizon: self.horizon.unwrap_or(4 * space.cell_count()),
            basis_radius,
            tolerance: self.tolerance.unwrap_or_default(),
            physical_tolerance: self
                .physical_tolerance
                .unwrap_or_else(|| paired_physical_tolerance(space, basis_radius)),
            delta,
            epsilon: self.epsilon.unwrap_or(delta * 2),
            rng_seed: self.rng_seed.unwrap_or(0),
            chains: self.chains.unwrap_or(20),
            chain_length: self.chain_length.unwrap_or(20),
            n_check: self.n_check.unwrap_or(8),
            minimality_bound: self.minimality_bound.unwrap_or(4),
            equicontinuity_horizon: self.equicontinuity_horizon.unwrap_or(8),
            equicontinuity_epsilon: self.equicontinuity_epsilon.unwrap_or(cs * 2),
            min_hits: self.min_hits.unwrap_or(1),
        };
        resolved.validate(space)?;
        Ok(resolved)
    }
}

/// Fully determined parameters as recorded in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedParams {
    pub horizon: usize,
    #[serde(with = "rational::serde_str")]
    pub basis_radius: Rational,
    #[serde(with = "rational::serde_str")]
    pub tolerance: Rational,
    #[serde(with = "rational::serde_str")]
    pub physical_tolerance: Rational,
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
    #[serde(with = "rational::serde_str")]
    pub epsilon: Rational,
    pub rng_seed: u64,
    pub chains: usize,
    pub chain_length: usize,
    pub n_check: usize,
    pub minimality_bound: usize,
    pub equicontinuity_horizon: usize,
    #[serde(with = "rational::serde_str")]
    pub equicontinuity_epsilon: Rational,
    pub min_hits: usize,
}

impl ResolvedParams {
    fn validate(&self, space: &DiscreteSpace) -> Result<()> {
        let zero = Rational::from_integer(0);
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if self.horizon == 0 {
            return Err(Error::InvalidHorizon);
        }
        if self.basis_radius < space.cell_size() {
            return bad("basis radius must be at least the cell size");
        }
        if self.tolerance < zero || self.physical_tolerance < zero {
            return bad("tolerances must be non-negative");
        }
        if self.delta <= zero || self.epsilon <= zero || self.equicontinuity_epsilon <= zero {
            return bad("delta and epsilon values must be positive");
        }
        if self.chains == 0 || self.chain_length == 0 || self.minimality_bound == 0 {
            return bad("chain counts, chain length and minimality bound must be positive");
        }
        if self.equicontinuity_horizon == 0 || self.min_hits == 0 {
            return bad("equicontinuity horizon and min_hits must be positive");
        }
        Ok(())
    }
}

/// Errors that mean "this construction does not apply here" rather than a
/// malformed request.
fn soft_failure(err: &Error) -> bool {
    matches!(
        err,
        Error::RequiresExactness | Error::HorizonExceeded { .. } | Error::DeadEnd { .. } | Error::HausdorffUndefinedOnEmpty
    )
}

fn attraction_witness(rel: &CellRelation, p: &ResolvedParams) -> Result<(Verdict, Witness)> {
    let space = rel.space();
    let res = attractor_check(rel, &singleton_seeds(space), p.horizon, p.tolerance)?;
    let n_dagger_tolerance = p.tolerance + space.cell_size();
    let n_dagger = if res.verdict.is_proved() {
        uniform_attraction_bound(rel, p.horizon, n_dagger_tolerance)?
    } else {
        None
    };
    let witness = Witness::Attraction {
        seeds: res.traces.len(),
        converged: res.traces.iter().filter(|t| t.verdict.is_proved()).count(),
        failing_seed: res
            .traces
            .iter()
            .find(|t| t.verdict.is_refuted())
            .and_then(|t| t.seed.first()),
        converged_at_max: res
            .traces
            .iter()
            .map(|t| t.converged_at)
            .try_fold(0, |acc, c| c.map(|c| acc.max(c))),
        n_dagger_tolerance,
        n_dagger,
    };
    Ok((res.verdict, witness))
}

fn run_one(check: Check, system: &IfsSystem, rel: &CellRelation, p: &ResolvedParams) -> Result<(Verdict, Witness)> {
    let space = system.space();
    match check {
        Check::Attractor => attraction_witness(rel, p),
        Check::InverseAttractor => attraction_witness(&rel.inverse(), p),
        Check::Physical => {
            let res = physical_attractor_check(rel, p.basis_radius, p.horizon, p.physical_tolerance)?;
            let singles = res
                .per_open
                .iter()
                .filter(|o| o.witness.as_ref().is_some_and(|w| w.len() == 1))
                .count();
            let opens = res.per_open.iter().filter(|o| o.witness.is_some()).count();
            let witness = Witness::Physical {
                tolerance: p.physical_tolerance,
                singleton_witnesses: singles,
                open_witnesses: opens - singles,
                failing_center: res.per_open.iter().find(|o| o.verdict.is_refuted()).map(|o| o.center),
            };
            Ok((res.verdict, witness))
        }
        Check::ProperWitness => {
            let (families, candidates) = default_witness_families(rel, p.horizon, p.tolerance)?;
            let found =
                proper_attractor_witness_search(rel, &families, &candidates, p.basis_radius, p.horizon, p.min_hits)?;
            // absence of a witness over finitely many families proves nothing
            let verdict = if found.is_some() {
                Verdict::Refuted
            } else {
                Verdict::Unresolved
            };
            let witness = Witness::ProperSearch {
                families: families.len(),
                candidates: candidates.len(),
                witness: found.map(|w| ProperWitnessRecord {
                    family: w.family,
                    member: w.member,
                    k: cells(&w.k),
                    u: cells(&w.u),
                    v: cells(&w.v),
                    hits: w.hits,
                }),
            };
            Ok((verdict, witness))
        }
        Check::Exactness => {
            let res = exactness_check(rel, p.basis_radius, p.horizon)?;
            let witness = Witness::Exactness {
                escape_time_max: res.max_escape_time(),
                certificates: res
                    .certificates
                    .iter()
                    .map(|c| CycleCertificate {
                        center: c.center,
                        open: cells(&c.open),
                        preperiod: c.preperiod,
                        cycle: c.cycle.iter().map(cells).collect(),
                        core: cells(&c.core()),
                    })
                    .collect(),
                trapped_in: res.trapped_in,
                escape_times: res.escape_times,
            };
            Ok((res.verdict, witness))
        }
        Check::Mixing => {
            let res = mixing_check(rel, p.basis_radius, p.horizon)?;
            let witness = Witness::Mixing {
                entry_time_max: res.max_entry_time(),
                counterexample: res.counterexample.map(|c| MixingMiss {
                    w_center: c.w_center,
                    v_center: c.v_center,
                    missed_at: c.missed_at,
                }),
                entry_times: res.entry_times,
            };
            Ok((res.verdict, witness))
        }
        Check::Chain => {
            let graph = build_chain_graph(system, p.delta)?;
            let transitive = chain_transitive_check(&graph);
            let mixing = chain_mixing_check(&graph, p.n_check);
            let witness = Witness::Chain {
                delta: p.delta,
                components: graph.sccs.len(),
                period: graph.period,
                transitive,
                mixing: mixing.mixing,
                bound: mixing.bound,
                verified_through: mixing.verified_through,
            };
            Ok((Verdict::from_bool(transitive && mixing.mixing), witness))
        }
        Check::Shadowing => {
            let chains = sample_chains(system, p)?;
            let mut records = Vec::with_capacity(chains.len());
            for chain in chains {
                let shadow = shadowing_search(system, &chain, p.epsilon)?;
                records.push(ShadowRecord {
                    cells: chain.cells,
                    word: chain.word,
                    shadow,
                });
            }
            let verdict = Verdict::from_bool(records.iter().all(|r| r.shadow.is_some()));
            Ok((
                verdict,
                Witness::Shadowing {
                    delta: p.delta,
                    epsilon: p.epsilon,
                    chains: records,
                },
            ))
        }
        Check::Equicontinuity => {
            let rep = equicontinuity_report(rel, p.equicontinuity_horizon, p.equicontinuity_epsilon)?;
            let verdict = Verdict::from_bool(rep.equicontinuous_cells.is_full());
            Ok((
                verdict,
                Witness::Equicontinuity {
                    horizon: rep.horizon,
                    epsilon: rep.epsilon,
                    equicontinuous_cells: rep.equicontinuous_cells.len(),
                    sensitivity_lower_bound: rep.sensitivity_lower_bound,
                },
            ))
        }
        Check::BackwardOrbit => {
            let dense = backward_dense_orbit(rel, 0, p.basis_radius, p.horizon)?;
            let verified = dense.orbit.verify(rel);
            let verdict = Verdict::from_bool(verified && dense.density_radius <= p.basis_radius);
            Ok((
                verdict,
                Witness::BackwardOrbit {
                    x0: 0,
                    depth: dense.orbit.depth(),
                    density_radius: dense.density_radius,
                    from_map: dense.orbit.from_map,
                    verified,
                    cells: dense.orbit.cells,
                },
            ))
        }
        Check::Minimality => {
            let fwd = system.total_minimality_check(Direction::Forward, p.minimality_bound, p.horizon)?;
            let bwd = system.total_minimality_check(Direction::Backward, p.minimality_bound, p.horizon)?;
            let verdict = Verdict::all([fwd.verdict, bwd.verdict]);
            Ok((
                verdict,
                Witness::Minimality {
                    bound: p.minimality_bound,
                    forward: fwd.per_power.iter().map(|r| r.verdict).collect(),
                    backward: bwd.per_power.iter().map(|r| r.verdict).collect(),
                },
            ))
        }
        Check::Repelling => {
            let Some(map_index) = system
                .maps()
                .iter()
                .position(|m| matches!(m, MapDescriptor::MorseSmale { .. }))
                .filter(|_| !system.options().use_inverse_family)
            else {
                return Ok((
                    Verdict::Unresolved,
                    Witness::Unavailable {
                        reason: "no map with a known repelling fixed point".into(),
                    },
                ));
            };
            let cert = system.repelling_certificate(map_index, 0, space.diameter_steps())?;
            let verdict = Verdict::from_bool(cert.is_some());
            Ok((
                verdict,
                Witness::Repelling {
                    map_index,
                    fixed_cell: 0,
                    radius: cert.as_ref().map(|c| c.radius),
                    image_size: cert.as_ref().map_or(0, |c| c.image.len()),
                    ball: cert.as_ref().map(|c| cells(&c.ball)).unwrap_or_default(),
                },
            ))
        }
    }
}

/// Chains for the shadowing check: chain `k` starts from a cell drawn from
/// `rng_seed` and walks with seed `rng_seed + k + 1`.
pub fn sample_chains(system: &IfsSystem, p: &ResolvedParams) -> Result<Vec<crate::chain::PseudoOrbit>> {
    let m = system.space().cell_count();
    let mut rng = ChaCha8Rng::seed_from_u64(p.rng_seed);
    (0..p.chains)
        .map(|k| {
            let start = rng.random_range(0..m) as Cell;
            generate_pseudo_orbit(system, p.delta, p.chain_length, start, p.rng_seed.wrapping_add(k as u64 + 1))
        })
        .collect()
}

/// Runs every check in order. Checks that do not apply (unsatisfied
/// hypotheses, exhausted horizons) yield `unresolved` records.
pub fn run_checks(
    system: &IfsSystem,
    checks: &[Check],
    params: &ResolvedParams,
    expected: &BTreeMap<Check, Verdict>,
) -> Result<Vec<PropertyRecord>> {
    let rel = system.hutchinson()?;
    let space = system.space();
    checks
        .iter()
        .map(|&check| {
            let start = Instant::now();
            let (verdict, witness) = match run_one(check, system, &rel, params) {
                Ok(out) => out,
                Err(err) if soft_failure(&err) => (
                    Verdict::Unresolved,
                    Witness::Unavailable {
                        reason: err.to_string(),
                    },
                ),
                Err(err) => return Err(err),
            };
            Ok(PropertyRecord {
                property: check,
                verdict,
                expected: expected.get(&check).copied(),
                resolution: space.resolution(),
                horizon: params.horizon,
                witness,
                wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect()
}

fn assumptions(params: &ResolvedParams) -> Vec<String> {
    vec![
        format!(
            "open sets are quantified over the basis of open balls of radius {}",
            params.basis_radius
        ),
        "verdicts hold for the discretized system at this resolution and horizon".into(),
        "attraction is checked over singleton seeds, which bound every compact seed".into(),
    ]
}

pub fn analyze(
    system_id: &str,
    system: &IfsSystem,
    checks: &[Check],
    params: &ResolvedParams,
    expected: &BTreeMap<Check, Verdict>,
) -> Result<AnalysisReport> {
    let records = run_checks(system, checks, params, expected)?;
    let space = system.space();
    Ok(AnalysisReport {
        format: REPORT_FORMAT,
        system_id: system_id.to_string(),
        system: SystemSpec::from_system(system),
        resolution: space.resolution(),
        cell_count: space.cell_count(),
        horizon: params.horizon,
        parameters: params.clone(),
        assumptions: assumptions(params),
        records,
    })
}

/// One disagreement found while replaying a report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayMismatch {
    pub property: Option<Check>,
    pub detail: String,
}

impl fmt::Display for ReplayMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.property {
            Some(p) => write!(f, "{p}: {}", self.detail),
            None => f.write_str(&self.detail),
        }
    }
}

/// Re-runs every recorded property and compares verdicts and witnesses.
pub fn replay_report(report: &AnalysisReport, max_cells: usize) -> Result<Vec<ReplayMismatch>> {
    let mut out = Vec::new();
    let system = report.system.build(Some(report.resolution), max_cells)?;
    let space = system.space();
    if space.cell_count() != report.cell_count {
        out.push(ReplayMismatch {
            property: None,
            detail: format!("cell count {} does not match {}", report.cell_count, space.cell_count()),
        });
    }
    if report.horizon != report.parameters.horizon {
        out.push(ReplayMismatch {
            property: None,
            detail: "report horizon differs from its parameters".into(),
        });
    }
    report.parameters.validate(space)?;
    let checks: Vec<Check> = report.records.iter().map(|r| r.property).collect();
    let fresh = run_checks(&system, &checks, &report.parameters, &BTreeMap::new())?;
    for (old, new) in report.records.iter().zip(fresh) {
        let property = Some(old.property);
        if old.resolution != new.resolution || old.horizon != new.horizon {
            out.push(ReplayMismatch {
                property,
                detail: "resolution or horizon differs from the report".into(),
            });
        }
        if old.verdict != new.verdict {
            out.push(ReplayMismatch {
                property,
                detail: format!("recorded {}, replay gives {}", old.verdict, new.verdict),
            });
        }
        if old.witness != new.witness {
            out.push(ReplayMismatch {
                property,
                detail: "witness does not reproduce".into(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::IfsOptions;
    use crate::rational::ratio;

    fn doubling(m: usize) -> IfsSystem {
        IfsSystem::single(DiscreteSpace::circle(m).unwrap(), MapDescriptor::TimesM { m: 2 }).unwrap()
    }

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(Check::parse(c.name()).unwrap(), c);
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(json, format!("\"{}\"", c.name()));
        }
        assert_eq!(
            Check::parse_list("exactness, mixing,exactness").unwrap(),
            vec![Check::Exactness, Check::Mixing]
        );
        assert!(Check::parse_list("exactness,bogus").is_err());
    }

    #[test]
    fn defaults_depend_on_space() {
        let space = DiscreteSpace::circle(64).unwrap();
        let p = AnalysisParams::default().resolve(&space).unwrap();
        assert_eq!(p.horizon, 256);
        assert_eq!(p.basis_radius, ratio(1, 64));
        assert_eq!(p.physical_tolerance, ratio(0, 1));
        assert_eq!(p.delta, ratio(3, 128));
        let over = AnalysisParams {
            horizon: Some(10),
            ..Default::default()
        };
        let merged = AnalysisParams {
            horizon: Some(99),
            delta: Some(ratio(1, 8)),
            ..Default::default()
        }
        .overlay(&over);
        assert_eq!((merged.horizon, merged.delta), (Some(10), Some(ratio(1, 8))));
        let bad = AnalysisParams {
            basis_radius: Some(ratio(1, 128)),
            ..Default::default()
        };
        assert!(bad.resolve(&space).is_err());
    }

    #[test]
    fn doubling_report_and_replay() {
        let sys = doubling(64);
        let params = AnalysisParams::default().resolve(sys.space()).unwrap();
        let expected = BTreeMap::from([(Check::Exactness, Verdict::Proved)]);
        let report = analyze(
            "doubling",
            &sys,
            &[Check::Exactness, Check::Mixing, Check::InverseAttractor, Check::BackwardOrbit],
            &params,
            &expected,
        )
        .unwrap();
        let ex = report.record(Check::Exactness).unwrap();
        assert!(ex.matches_expectation());
        match &ex.witness {
            Witness::Exactness { escape_time_max, .. } => assert_eq!(*escape_time_max, Some(6)),
            other => panic!("{other:?}"),
        }
        match &report.record(Check::InverseAttractor).unwrap().witness {
            Witness::Attraction { n_dagger, .. } => assert_eq!(*n_dagger, Some(6)),
            other => panic!("{other:?}"),
        }
        assert!(replay_report(&report, 1 << 20).unwrap().is_empty());

        let text = report.to_json();
        let mut back: AnalysisReport = serde_json::from_str(&text).unwrap();
        // timings are the only field allowed to drift through the text form
        for (b, r) in back.records.iter_mut().zip(&report.records) {
            assert!((b.wall_time_ms - r.wall_time_ms).abs() < 1e-9);
            b.wall_time_ms = r.wall_time_ms;
        }
        assert_eq!(back, report);

        let mut tampered = report.clone();
        if let Witness::Exactness { escape_times, .. } = &mut tampered.records[0].witness {
            escape_times[3] = Some(7);
        }
        assert_eq!(replay_report(&tampered, 1 << 20).unwrap().len(), 1);
    }

    #[test]
    fn unmet_hypotheses_are_unresolved() {
        let sys = IfsSystem::new(
            DiscreteSpace::circle(16).unwrap(),
            vec![MapDescriptor::rotation(ratio(1, 16))],
            IfsOptions::default(),
        )
        .unwrap();
        let params = AnalysisParams::default().resolve(sys.space()).unwrap();
        let records = run_checks(
            &sys,
            &[Check::BackwardOrbit, Check::Repelling, Check::ProperWitness],
            &params,
            &BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(records[0].verdict, Verdict::Unresolved);
        assert!(matches!(records[0].witness, Witness::Unavailable { .. }));
        assert_eq!(records[1].verdict, Verdict::Unresolved);
        // rotations keep singletons singletons: a witness exists
        assert_eq!(records[2].verdict, Verdict::Refuted);
    }
}
