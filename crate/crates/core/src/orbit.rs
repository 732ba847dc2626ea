//! Eventually periodic set sequences `A, R(A), R^2(A), ...`.

use std::collections::HashMap;

use crate::cellset::CellSet;
use crate::relation::CellRelation;

/// The sequence `sets[0..preperiod + period]`; `sets[preperiod..]` repeats
/// forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetOrbit {
    pub sets: Vec<CellSet>,
    pub preperiod: usize,
    pub period: usize,
}

impl SetOrbit {
    pub fn cycle(&self) -> &[CellSet] {
        &self.sets[self.preperiod..]
    }

    /// `R^i(A)` for any `i`, folding indices past the recorded prefix into
    /// the cycle.
    pub fn at(&self, i: usize) -> &CellSet {
        if i < self.sets.len() {
            &self.sets[i]
        } else {
            &self.sets[self.preperiod + (i - self.preperiod) % self.period]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitOutcome {
    Cycled(SetOrbit),
    /// No repetition among the first `horizon + 1` sets.
    HorizonReached(Vec<CellSet>),
}

impl OrbitOutcome {
    pub fn cycled(&self) -> Option<&SetOrbit> {
        match self {
            OrbitOutcome::Cycled(o) => Some(o),
            OrbitOutcome::HorizonReached(_) => None,
        }
    }

    pub fn sets(&self) -> &[CellSet] {
        match self {
            OrbitOutcome::Cycled(o) => &o.sets,
            OrbitOutcome::HorizonReached(s) => s,
        }
    }
}

/// Iterates `start` under `rel` until a set repeats or `horizon` steps have
/// been taken.
pub fn iterate_until_cycle(rel: &CellRelation, start: &CellSet, horizon: usize) -> OrbitOutcome {
    let mut seen: HashMap<CellSet, usize> = HashMap::new();
    let mut sets = vec![start.clone()];
    seen.insert(start.clone(), 0);
    let mut next = CellSet::empty(rel.cell_count());
    for step in 1..=horizon {
        rel.image_into(&sets[step - 1], &mut next);
        if let Some(&first) = seen.get(&next) {
            return OrbitOutcome::Cycled(SetOrbit {
                preperiod: first,
                period: step - first,
                sets,
            });
        }
        seen.insert(next.clone(), step);
        sets.push(next.clone());
    }
    OrbitOutcome::HorizonReached(sets)
}
