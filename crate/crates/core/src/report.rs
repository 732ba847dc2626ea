//! Machine-readable analysis reports. Every record carries the resolution
//! and horizon it was computed at, and enough of the witness to be replayed.

use serde::{Deserialize, Serialize};

use crate::analysis::{Check, ResolvedParams};
use crate::cellset::{Cell, CellSet};
use crate::rational::{self, Rational};
use crate::system_file::SystemSpec;
use crate::verdict::Verdict;

pub const REPORT_FORMAT: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub format: u32,
    pub system_id: String,
    /// The exact system analysed, at the analysed resolution.
    pub system: SystemSpec,
    pub resolution: usize,
    pub cell_count: usize,
    pub horizon: usize,
    pub parameters: ResolvedParams,
    pub assumptions: Vec<String>,
    pub records: Vec<PropertyRecord>,
}

impl AnalysisReport {
    pub fn record(&self, check: Check) -> Option<&PropertyRecord> {
        self.records.iter().find(|r| r.property == check)
    }

    /// Records whose verdict differs from a stated expectation.
    pub fn mismatches(&self) -> impl Iterator<Item = &PropertyRecord> {
        self.records.iter().filter(|r| !r.matches_expectation())
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports are JSON-representable");
        out.push('\n');
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub property: Check,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Verdict>,
    pub resolution: usize,
    pub horizon: usize,
    pub witness: Witness,
    pub wall_time_ms: f64,
}

impl PropertyRecord {
    pub fn matches_expectation(&self) -> bool {
        self.expected.is_none_or(|e| e == self.verdict)
    }
}

pub fn cells(set: &CellSet) -> Vec<Cell> {
    set.to_vec()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCertificate {
    pub center: Cell,
    pub open: Vec<Cell>,
    pub preperiod: usize,
    pub cycle: Vec<Vec<Cell>>,
    /// Union of the cycle sets.
    pub core: Vec<Cell>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixingMiss {
    pub w_center: Cell,
    pub v_center: Cell,
    pub missed_at: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperWitnessRecord {
    pub family: usize,
    pub member: usize,
    pub k: Vec<Cell>,
    pub u: Vec<Cell>,
    pub v: Vec<Cell>,
    pub hits: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowRecord {
    pub cells: Vec<Cell>,
    pub word: Vec<usize>,
    pub shadow: Option<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Attraction {
        seeds: usize,
        converged: usize,
        failing_seed: Option<Cell>,
        converged_at_max: Option<usize>,
        #[serde(with = "rational::serde_str")]
        n_dagger_tolerance: Rational,
        n_dagger: Option<usize>,
    },
    Physical {
        #[serde(with = "rational::serde_str")]
        tolerance: Rational,
        singleton_witnesses: usize,
        open_witnesses: usize,
        failing_center: Option<Cell>,
    },
    ProperSearch {
        families: usize,
        candidates: usize,
        witness: Option<ProperWitnessRecord>,
    },
    Exactness {
        escape_time_max: Option<usize>,
        escape_times: Vec<Option<usize>>,
        certificates: Vec<CycleCertificate>,
        trapped_in: Vec<Option<usize>>,
    },
    Mixing {
        entry_time_max: Option<usize>,
        entry_times: Vec<Option<usize>>,
        counterexample: Option<MixingMiss>,
    },
    Chain {
        #[serde(with = "rational::serde_str")]
        delta: Rational,
        components: usize,
        period: Option<u64>,
        transitive: bool,
        mixing: bool,
        bound: Option<usize>,
        verified_through: Option<usize>,
    },
    Shadowing {
        #[serde(with = "rational::serde_str")]
        delta: Rational,
        #[serde(with = "rational::serde_str")]
        epsilon: Rational,
        chains: Vec<ShadowRecord>,
    },
    Equicontinuity {
        horizon: usize,
        #[serde(with = "rational::serde_str")]
        epsilon: Rational,
        equicontinuous_cells: usize,
        #[serde(with = "rational::serde_str")]
        sensitivity_lower_bound: Rational,
    },
    BackwardOrbit {
        x0: Cell,
        depth: usize,
        #[serde(with = "rational::serde_str")]
        density_radius: Rational,
        from_map: bool,
        verified: bool,
        cells: Vec<Cell>,
    },
    Minimality {
        bound: usize,
        forward: Vec<Verdict>,
        backward: Vec<Verdict>,
    },
    Repelling {
        map_index: usize,
        fixed_cell: Cell,
        #[serde(with = "rational::serde_str::option")]
        radius: Option<Rational>,
        ball: Vec<Cell>,
        image_size: usize,
    },
    Unavailable {
        reason: String,
    },
}
