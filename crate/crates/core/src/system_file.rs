//! On-disk system descriptions: a space, a list of maps, IFS options,
//! expected verdicts and optional analysis parameters. TOML or JSON.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{AnalysisParams, Check};
use crate::error::{Error, Result};
use crate::ifs::{IfsOptions, IfsSystem};
use crate::maps::MapDescriptor;
use crate::phase_space::{DiscreteSpace, SpaceKind};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub kind: SpaceKind,
    pub resolution: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub space: SpaceSpec,
    pub maps: Vec<MapDescriptor>,
    #[serde(default)]
    pub options: IfsOptions,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expected: BTreeMap<Check, Verdict>,
    #[serde(default, skip_serializing_if = "AnalysisParams::is_empty")]
    pub analysis: AnalysisParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Toml,
    Json,
}

impl Format {
    /// `.json` selects JSON; anything else is read as TOML.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Toml,
        }
    }
}

/// Parse failures carry the location reported by the underlying parser.
#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
    #[error("line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl SystemSpec {
    pub fn from_system(system: &IfsSystem) -> Self {
        let space = system.space();
        Self {
            name: None,
            space: SpaceSpec {
                kind: space.kind(),
                resolution: space.resolution(),
            },
            maps: system.maps().to_vec(),
            options: system.options().clone(),
            expected: BTreeMap::new(),
            analysis: AnalysisParams::default(),
        }
    }

    pub fn parse(text: &str, format: Format) -> Result<Self, SpecError> {
        match format {
            Format::Toml => Ok(toml::from_str(text)?),
            Format::Json => serde_json::from_str(text).map_err(|e| SpecError::Json {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            }),
        }
    }

    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, Format::from_path(path))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Toml => toml::to_string_pretty(self).expect("system specs are TOML-representable"),
            Format::Json => {
                let mut out = serde_json::to_string_pretty(self).expect("system specs are JSON-representable");
                out.push('\n');
                out
            }
        }
    }

    /// Builds the system under a cell cap, optionally at another resolution.
    pub fn build(&self, resolution: Option<usize>, max_cells: usize) -> Result<IfsSystem> {
        let res = resolution.unwrap_or(self.space.resolution);
        let space = DiscreteSpace::with_cap(self.space.kind, res, max_cells)?;
        if self.maps.is_empty() {
            return Err(Error::EmptySystem);
        }
        IfsSystem::new(space, self.maps.clone(), self.options.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::Rasterization;
    use crate::phase_space::DEFAULT_MAX_CELLS;
    use crate::rational::ratio;

    const SAMPLE: &str = r#"
name = "pair"

[space]
kind = "circle"
resolution = 840

[[maps]]
name = "rotation"
params = { alpha = "263/840" }

[[maps]]
name = "rotation"
params = { alpha = "3/8" }

[options]
symmetric_closure = false

[expected]
minimality = "proved-at-resolution"
exactness = "refuted-at-resolution"
"#;

    #[test]
    fn parses_toml() {
        let spec = SystemSpec::parse(SAMPLE, Format::Toml).unwrap();
        assert_eq!(spec.space.resolution, 840);
        assert_eq!(spec.maps[0], MapDescriptor::rotation(ratio(263, 840)));
        assert_eq!(spec.expected[&Check::Exactness], Verdict::Refuted);
        let sys = spec.build(None, DEFAULT_MAX_CELLS).unwrap();
        assert_eq!(sys.maps().len(), 2);
    }

    #[test]
    fn round_trips_both_formats() {
        let mut spec = SystemSpec::parse(SAMPLE, Format::Toml).unwrap();
        spec.maps.push(MapDescriptor::TorusShear1);
        spec.options.rasterization = Rasterization::Lattice;
        spec.analysis.delta = Some(ratio(3, 16));
        for format in [Format::Toml, Format::Json] {
            let text = spec.render(format);
            assert_eq!(SystemSpec::parse(&text, format).unwrap(), spec, "{text}");
        }
    }

    #[test]
    fn reports_locations() {
        let broken = SAMPLE.replace("resolution = 840", "resolution = \"many\"");
        let err = SystemSpec::parse(&broken, Format::Toml).unwrap_err().to_string();
        assert!(err.contains("line 6"), "{err}");
        let err = SystemSpec::parse("{\n \"space\": 3 }", Format::Json).unwrap_err();
        assert!(matches!(err, SpecError::Json { line: 2, .. }));
        let bad_rational = SAMPLE.replace("263/840", "263/0");
        assert!(SystemSpec::parse(&bad_rational, Format::Toml).is_err());
    }

    #[test]
    fn enforces_cell_cap() {
        let spec = SystemSpec::parse(SAMPLE, Format::Toml).unwrap();
        assert!(matches!(spec.build(None, 100), Err(Error::TooManyCells { .. })));
        assert_eq!(spec.build(Some(64), 100).unwrap().space().cell_count(), 64);
    }
}
