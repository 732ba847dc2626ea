//! Fixtures shared by the benchmarks.

use hutchlab::{gallery_entry, CellRelation, IfsSystem, ResolvedParams, DEFAULT_MAX_CELLS};

/// A gallery system at its own or an overridden resolution, with the
/// parameters the gallery would analyze it with.
pub fn gallery_fixture(id: &str, resolution: Option<usize>) -> (IfsSystem, CellRelation, ResolvedParams) {
    let entry = gallery_entry(id).unwrap_or_else(|| panic!("no gallery entry `{id}`"));
    let system = entry.spec.build(resolution, DEFAULT_MAX_CELLS).expect("gallery systems build");
    let params = match resolution {
        Some(_) => entry.spec.analysis.without_grid_terms(),
        None => entry.spec.analysis.clone(),
    }
    .resolve(system.space())
    .expect("gallery parameters resolve");
    let rel = system.hutchinson().expect("hutchinson operator");
    (system, rel, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        let (system, rel, params) = gallery_fixture("doubling", Some(256));
        assert_eq!(system.space().cell_count(), 256);
        assert_eq!(rel.cell_count(), 256);
        assert_eq!(params.horizon, 1024);
    }
}
