//! Cell-resolution analysis of iterated function systems on compact spaces.

pub mod analysis;
pub mod attractor;
pub mod cellset;
pub mod chain;
pub mod error;
pub mod gallery;
pub mod ifs;
pub mod inverse_limit;
pub mod maps;
pub mod orbit;
pub mod oracle;
pub mod phase_space;
pub mod rational;
pub mod relation;
pub mod report;
pub mod system_file;
pub mod topology;
pub mod verdict;

pub use analysis::{analyze, replay_report, AnalysisParams, Check, ResolvedParams};
pub use cellset::{Cell, CellSet};
pub use error::{Error, Result};
pub use gallery::{build_gallery, gallery_entry, GalleryEntry};
pub use ifs::{Direction, IfsOptions, IfsSystem, MinimalityReport, TotalMinimality};
pub use maps::{rasterize_map, MapDescriptor, Rasterization};
pub use phase_space::{DiscreteSpace, SpaceKind, DEFAULT_MAX_CELLS};
pub use rational::{ratio, Rational};
pub use relation::CellRelation;
pub use report::{AnalysisReport, PropertyRecord, Witness};
pub use system_file::{Format, SpecError, SystemSpec};
pub use verdict::Verdict;
