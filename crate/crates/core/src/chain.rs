//! delta-chains: the chain graph of an IFS, chain transitivity and mixing,
//! random pseudo-orbits and shadowing searches.

use num_integer::Integer;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::VecDeque;

use crate::cellset::{Cell, CellSet};
use crate::error::{Error, Result};
use crate::ifs::IfsSystem;
use crate::phase_space::DiscreteSpace;
use crate::rational::Rational;
use crate::relation::CellRelation;

/// Edge `i -> j` iff `j` lies strictly within `delta` of the Hutchinson
/// image of `i`; a delta-chain is a path in this graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainGraph {
    pub delta: Rational,
    pub edges: CellRelation,
    /// Strongly connected components, each sorted, ordered by first cell.
    pub sccs: Vec<Vec<Cell>>,
    /// Gcd of cycle lengths when the graph is strongly connected and has a
    /// cycle.
    pub period: Option<u64>,
}

impl ChainGraph {
    pub fn space(&self) -> &DiscreteSpace {
        self.edges.space()
    }

    /// Uses `edges` as given, e.g. a raw relation without fattening.
    pub fn from_relation(edges: CellRelation, delta: Rational) -> Self {
        let m = edges.cell_count();
        let mut graph = DiGraph::<(), ()>::with_capacity(m, edges.edge_count());
        for _ in 0..m {
            graph.add_node(());
        }
        for (u, v) in edges.edges() {
            graph.add_edge(NodeIndex::new(u as usize), NodeIndex::new(v as usize), ());
        }
        let mut sccs: Vec<Vec<Cell>> = tarjan_scc(&graph)
            .into_iter()
            .map(|comp| {
                let mut cells: Vec<Cell> = comp.into_iter().map(|n| n.index() as Cell).collect();
                cells.sort_unstable();
                cells
            })
            .collect();
        sccs.sort_unstable_by_key(|c| c[0]);
        let period = (sccs.len() == 1).then(|| graph_period(&edges)).flatten();
        Self {
            delta,
            edges,
            sccs,
            period,
        }
    }
}

/// Gcd over edges of `level(u) + 1 - level(v)` with breadth-first levels
/// from cell 0; assumes strong connectivity.
fn graph_period(edges: &CellRelation) -> Option<u64> {
    let m = edges.cell_count();
    let mut level = vec![u64::MAX; m];
    level[0] = 0;
    let mut queue = VecDeque::from([0 as Cell]);
    while let Some(u) = queue.pop_front() {
        for &v in edges.successors(u) {
            if level[v as usize] == u64::MAX {
                level[v as usize] = level[u as usize] + 1;
                queue.push_back(v);
            }
        }
    }
    let g = edges.edges().fold(0u64, |g, (u, v)| {
        let diff = (level[u as usize] + 1).abs_diff(level[v as usize]);
        g.gcd(&diff)
    });
    (g > 0).then_some(g)
}

pub fn build_chain_graph(system: &IfsSystem, delta: Rational) -> Result<ChainGraph> {
    if delta <= Rational::from_integer(0) {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    let edges = system.hutchinson()?.fatten(delta);
    Ok(ChainGraph::from_relation(edges, delta))
}

pub fn chain_transitive_check(graph: &ChainGraph) -> bool {
    graph.sccs.len() == 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMixing {
    pub mixing: bool,
    /// Every pair is joined by paths of every length `> bound`.
    pub bound: Option<usize>,
    /// Lengths `bound + 1 ..= bound + n_check` verified by set powering.
    pub verified_through: Option<usize>,
}

/// Primitivity of the chain graph: strongly connected with period 1. The
/// returned bound is the observed exponent minus one, re-verified for
/// `n_check` further lengths.
pub fn chain_mixing_check(graph: &ChainGraph, n_check: usize) -> ChainMixing {
    let not_mixing = ChainMixing {
        mixing: false,
        bound: None,
        verified_through: None,
    };
    if !chain_transitive_check(graph) || graph.period != Some(1) {
        return not_mixing;
    }
    let edges = &graph.edges;
    let m = edges.cell_count();
    let preds = edges.inverse();
    // cols[v] = sources with a path of the current length ending at v
    let mut cols: Vec<CellSet> = (0..m as Cell).map(|v| preds.successor_set(v)).collect();
    let step = |cols: &Vec<CellSet>| -> Vec<CellSet> {
        (0..m as Cell)
            .into_par_iter()
            .map(|v| {
                let mut acc = CellSet::empty(m);
                for &u in preds.successors(v) {
                    acc.union_with(&cols[u as usize]);
                }
                acc
            })
            .collect()
    };
    // Wielandt's bound caps the exponent of a primitive graph
    let cap = (m - 1) * (m - 1) + 1;
    let mut length = 1;
    while !cols.iter().all(CellSet::is_full) {
        if length >= cap {
            return not_mixing;
        }
        cols = step(&cols);
        length += 1;
    }
    let bound = length - 1;
    for _ in 0..n_check.saturating_sub(1) {
        cols = step(&cols);
        if !cols.iter().all(CellSet::is_full) {
            return not_mixing;
        }
    }
    ChainMixing {
        mixing: true,
        bound: Some(bound),
        verified_through: Some(bound + n_check),
    }
}

/// `x_{i+1}` lies within `delta` of `f_{w_i}(x_i)` for every `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoOrbit {
    pub cells: Vec<Cell>,
    /// Indices into the system's effective family.
    pub word: Vec<usize>,
    pub delta: Rational,
}

impl PseudoOrbit {
    pub fn is_valid(&self, system: &IfsSystem) -> Result<bool> {
        let family = system.effective_relations()?;
        let space = system.space();
        if self.word.len() + 1 != self.cells.len() {
            return Ok(false);
        }
        for (i, &k) in self.word.iter().enumerate() {
            let map = family.get(k).ok_or(Error::WordIndexOutOfRange {
                index: k,
                maps: family.len(),
            })?;
            let near = space.fatten(&map.successor_set(self.cells[i]), self.delta);
            if !near.contains(self.cells[i + 1]) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Random delta-pseudo-orbit with `length` cells: each step picks a map and
/// then a cell within `delta` of its image, both uniformly.
pub fn generate_pseudo_orbit(
    system: &IfsSystem,
    delta: Rational,
    length: usize,
    seed_cell: Cell,
    rng_seed: u64,
) -> Result<PseudoOrbit> {
    if length == 0 {
        return Err(Error::InvalidParameter("pseudo-orbit length must be positive".into()));
    }
    let space = system.space();
    space.check_cell(seed_cell)?;
    let family = system.effective_relations()?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut cells = vec![seed_cell];
    let mut word = Vec::with_capacity(length - 1);
    for step in 1..length {
        let x = cells[step - 1];
        let k = rng.random_range(0..family.len());
        let near = space.fatten(&family[k].successor_set(x), delta).to_vec();
        if near.is_empty() {
            return Err(Error::DeadEnd { cell: x, step });
        }
        word.push(k);
        cells.push(near[rng.random_range(0..near.len())]);
    }
    Ok(PseudoOrbit { cells, word, delta })
}

/// Lowest cell `y` whose orbit along the chain's word can stay strictly
/// within `epsilon` of every chain point. Tracks the set of branches that
/// have stayed close so far, so acceptance implies one genuine cell path.
pub fn shadowing_search(system: &IfsSystem, chain: &PseudoOrbit, epsilon: Rational) -> Result<Option<Cell>> {
    if epsilon <= Rational::from_integer(0) {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let family = system.effective_relations()?;
    let space = system.space();
    if let Some(&k) = chain.word.iter().find(|&&k| k >= family.len()) {
        return Err(Error::WordIndexOutOfRange {
            index: k,
            maps: family.len(),
        });
    }
    if chain.cells.is_empty() {
        return Ok(None);
    }
    let near: Vec<CellSet> = chain.cells.iter().map(|&x| space.ball(x, epsilon)).collect();
    let candidates = near[0].to_vec();
    Ok(candidates.into_par_iter().find_first(|&y| {
        let mut alive = space.singleton(y);
        for (i, &k) in chain.word.iter().enumerate() {
            alive = family[k].image(&alive);
            alive.intersect_with(&near[i + 1]);
            if alive.is_empty() {
                return false;
            }
        }
        true
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::IfsOptions;
    use crate::maps::{MapDescriptor, Rasterization};
    use crate::rational::ratio;

    fn single(m: usize, map: MapDescriptor) -> IfsSystem {
        IfsSystem::single(DiscreteSpace::circle(m).unwrap(), map).unwrap()
    }

    fn shears(n: usize) -> IfsSystem {
        IfsSystem::new(
            DiscreteSpace::torus(n).unwrap(),
            vec![MapDescriptor::TorusShear1, MapDescriptor::TorusShear2],
            IfsOptions {
                rasterization: Rasterization::Lattice,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn chain_graph_examples() {
        let rot = single(8, MapDescriptor::rotation(ratio(3, 8)));
        let g = build_chain_graph(&rot, ratio(3, 16)).unwrap();
        assert_eq!(g.edges.successors(0), &[2, 3, 4]);
        assert!(chain_transitive_check(&g));
        assert_eq!(g.period, Some(1));

        let id = single(8, MapDescriptor::Identity);
        let g = build_chain_graph(&id, ratio(3, 16)).unwrap();
        assert_eq!(g.edges.successors(0), &[0, 1, 7]);
        assert!(chain_transitive_check(&g));
        assert_eq!(g.period, Some(1));

        let dbl = single(8, MapDescriptor::TimesM { m: 2 });
        let g = build_chain_graph(&dbl, ratio(1, 8)).unwrap();
        assert_eq!(g.edges, dbl.hutchinson().unwrap());
        assert!(chain_transitive_check(&g));
        assert_eq!(g.period, Some(1));
    }

    #[test]
    fn disconnected_and_periodic_graphs() {
        let space = DiscreteSpace::circle(4).unwrap();
        let two_fixed = CellRelation::from_successors(&space, vec![vec![0], vec![1], vec![2], vec![3]]).unwrap();
        let g = ChainGraph::from_relation(two_fixed, space.cell_size());
        assert!(!chain_transitive_check(&g));
        assert_eq!(g.sccs.len(), 4);
        assert!(!chain_mixing_check(&g, 8).mixing);

        let pair = DiscreteSpace::finite(2).unwrap();
        let swap = CellRelation::from_successors(&pair, vec![vec![1], vec![0]]).unwrap();
        let g = ChainGraph::from_relation(swap, pair.cell_size());
        assert!(chain_transitive_check(&g));
        assert_eq!(g.period, Some(2));
        assert!(!chain_mixing_check(&g, 8).mixing);
    }

    #[test]
    fn chain_mixing_bounds() {
        let rot = single(8, MapDescriptor::rotation(ratio(3, 8)));
        let g = build_chain_graph(&rot, ratio(3, 16)).unwrap();
        let res = chain_mixing_check(&g, 8);
        assert!(res.mixing);
        let n = res.bound.unwrap();
        // independent check: R^len is complete for lengths n+1..n+8 but not n
        let complete = |len: usize| (0..8).all(|c| g.edges.iterate_image(&g.space().singleton(c), len).is_full());
        assert!((n + 1..=n + 8).all(complete));
        assert!(n == 0 || !complete(n));

        let dbl = single(8, MapDescriptor::TimesM { m: 2 });
        let g = build_chain_graph(&dbl, ratio(1, 8)).unwrap();
        assert!(chain_mixing_check(&g, 8).mixing);
    }

    #[test]
    fn torus_chain_graph_is_transitive() {
        let g = build_chain_graph(&shears(8), ratio(3, 16)).unwrap();
        assert!(chain_transitive_check(&g));
    }

    #[test]
    fn pseudo_orbits_are_valid_and_deterministic() {
        let dbl = single(4096, MapDescriptor::TimesM { m: 2 });
        let a = generate_pseudo_orbit(&dbl, ratio(1, 256), 20, 17, 42).unwrap();
        let b = generate_pseudo_orbit(&dbl, ratio(1, 256), 20, 17, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cells.len(), 20);
        assert!(a.is_valid(&dbl).unwrap());

        let sys = shears(16);
        let chain = generate_pseudo_orbit(&sys, ratio(2, 16), 50, 3, 9).unwrap();
        assert!(chain.is_valid(&sys).unwrap());
        assert!(chain.word.contains(&0) && chain.word.contains(&1));
    }

    #[test]
    fn exact_chains_follow_the_map() {
        let rot = single(64, MapDescriptor::rotation(ratio(5, 64)));
        let chain = generate_pseudo_orbit(&rot, ratio(1, 64), 30, 11, 1).unwrap();
        for (i, &c) in chain.cells.iter().enumerate() {
            assert_eq!(c as usize, (11 + 5 * i) % 64);
        }
        assert_eq!(shadowing_search(&rot, &chain, ratio(1, 64)).unwrap(), Some(11));
    }

    #[test]
    fn doubling_shadowing() {
        let dbl = single(4096, MapDescriptor::TimesM { m: 2 });
        for seed in 0..5 {
            let chain = generate_pseudo_orbit(&dbl, ratio(1, 256), 20, 100 * seed as Cell, seed).unwrap();
            assert!(shadowing_search(&dbl, &chain, ratio(1, 128)).unwrap().is_some());
        }
        let chain = generate_pseudo_orbit(&dbl, ratio(1, 256), 20, 0, 42).unwrap();
        assert_eq!(shadowing_search(&dbl, &chain, ratio(1, 4096)).unwrap(), None);
    }
}
