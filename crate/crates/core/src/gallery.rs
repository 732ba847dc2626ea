//! Named systems with fixed parameters and the verdicts they should produce.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Signed;

use crate::analysis::{AnalysisParams, Check};
use crate::ifs::IfsOptions;
use crate::maps::{MapDescriptor, Rasterization};
use crate::phase_space::SpaceKind;
use crate::rational::{ratio, Rational};
use crate::system_file::{SpaceSpec, SystemSpec};
use crate::verdict::Verdict;

/// The stand-in for an irrational angle before it is snapped to a grid.
pub const SURROGATE_ANGLE: (i64, i64) = (355, 1130);

#[derive(Debug, Clone, PartialEq)]
pub struct GalleryEntry {
    pub id: &'static str,
    pub summary: &'static str,
    /// The statement this entry reproduces, in words.
    pub source: &'static str,
    /// The main run, with its expected verdicts and parameters embedded.
    pub spec: SystemSpec,
    /// Further runs of the same system at other resolutions.
    pub extra: Vec<SystemSpec>,
}

impl GalleryEntry {
    pub fn runs(&self) -> impl Iterator<Item = &SystemSpec> {
        std::iter::once(&self.spec).chain(&self.extra)
    }
}

/// `k/m` with `k` coprime to `m` and closest to `target * m`; ties go to the
/// lower integer shift before reduction mod `m`.
pub fn grid_rotation(target: Rational, m: usize) -> Rational {
    let m = m as i64;
    let exact = target * m;
    let coprime = |k: i64| k.rem_euclid(m).gcd(&m) == 1;
    let base = exact.floor().to_integer();
    let best = (0..=m)
        .flat_map(|off| [base - off, base + 1 + off])
        .filter(|&k| coprime(k))
        .min_by(|&a, &b| {
            let da = (Rational::from_integer(a) - exact).abs();
            let db = (Rational::from_integer(b) - exact).abs();
            da.cmp(&db).then(a.cmp(&b))
        })
        .expect("1 is coprime to every modulus");
    ratio(best.rem_euclid(m), m)
}

fn surrogate(m: usize) -> Rational {
    grid_rotation(ratio(SURROGATE_ANGLE.0, SURROGATE_ANGLE.1), m)
}

fn spec(
    name: &str,
    kind: SpaceKind,
    resolution: usize,
    maps: Vec<MapDescriptor>,
    options: IfsOptions,
    expected: &[(Check, Verdict)],
    analysis: AnalysisParams,
) -> SystemSpec {
    SystemSpec {
        name: Some(name.to_string()),
        space: SpaceSpec { kind, resolution },
        maps,
        options,
        expected: expected.iter().copied().collect::<BTreeMap<_, _>>(),
        analysis,
    }
}

use Check::*;
use Verdict::{Proved as P, Refuted as R};

fn doubling() -> GalleryEntry {
    GalleryEntry {
        id: "doubling",
        summary: "circle doubling map at 1024 cells",
        source: "every expanding circle map is topologically exact",
        spec: spec(
            "doubling",
            SpaceKind::Circle,
            1024,
            vec![MapDescriptor::TimesM { m: 2 }],
            IfsOptions::default(),
            &[(Exactness, P), (Mixing, P), (Physical, P), (InverseAttractor, P), (BackwardOrbit, P)],
            AnalysisParams::default(),
        ),
        extra: vec![],
    }
}

fn rotation_pair() -> GalleryEntry {
    let m = 840;
    let a = surrogate(m);
    GalleryEntry {
        id: "rotation_pair",
        summary: "two circle rotations a and a + 1/24; minimal but not exact",
        source: "a pair of rotations is totally minimal yet the circle is not an attractor",
        spec: spec(
            "rotation_pair",
            SpaceKind::Circle,
            m,
            vec![MapDescriptor::rotation(a), MapDescriptor::rotation(a + ratio(1, 24))],
            IfsOptions::default(),
            &[
                (Minimality, P),
                (Exactness, R),
                (Mixing, R),
                (Physical, R),
                (Attractor, R),
                (InverseAttractor, R),
            ],
            AnalysisParams {
                minimality_bound: Some(4),
                ..Default::default()
            },
        ),
        extra: vec![],
    }
}

fn torus_shears() -> GalleryEntry {
    let options = IfsOptions {
        rasterization: Rasterization::Lattice,
        ..Default::default()
    };
    let maps = vec![MapDescriptor::TorusShear1, MapDescriptor::TorusShear2];
    GalleryEntry {
        id: "torus_shears",
        summary: "the two unipotent shears of the 2-torus on a 16x16 lattice",
        source: "the shear pair is mixing but not exact; the rational orbit of (1/2, 1/2) is invariant",
        spec: spec(
            "torus_shears",
            SpaceKind::Torus,
            16,
            maps.clone(),
            options.clone(),
            &[(Mixing, P), (Physical, P), (Exactness, R), (Chain, P)],
            AnalysisParams {
                basis_radius: Some(ratio(2, 16)),
                delta: Some(ratio(3, 32)),
                ..Default::default()
            },
        ),
        extra: vec![spec(
            "torus_shears_n4",
            SpaceKind::Torus,
            4,
            maps,
            options,
            &[(Exactness, R)],
            AnalysisParams::default(),
        )],
    }
}

fn recording_ifs() -> GalleryEntry {
    let m = 256;
    GalleryEntry {
        id: "recording_ifs",
        summary: "one rotation together with the identity",
        source: "adjoining the identity to a minimal system makes it topologically exact",
        spec: spec(
            "recording_ifs",
            SpaceKind::Circle,
            m,
            vec![MapDescriptor::rotation(surrogate(m))],
            IfsOptions {
                adjoin_identity: true,
                ..Default::default()
            },
            &[(Exactness, P), (Mixing, P), (Physical, P)],
            AnalysisParams::default(),
        ),
        extra: vec![],
    }
}

fn symmetric_minimal() -> GalleryEntry {
    let a = ratio(SURROGATE_ANGLE.0, SURROGATE_ANGLE.1);
    GalleryEntry {
        id: "symmetric_minimal",
        summary: "rotation by a and by -a, closed under inverses",
        source: "a symmetric totally forward minimal system is topologically exact",
        spec: spec(
            "symmetric_minimal",
            SpaceKind::Circle,
            256,
            vec![MapDescriptor::rotation(a), MapDescriptor::rotation(ratio(1, 1) - a)],
            IfsOptions {
                symmetric_closure: true,
                ..Default::default()
            },
            &[(Minimality, P), (Exactness, P), (Mixing, P), (Physical, P)],
            AnalysisParams::default(),
        ),
        extra: vec![],
    }
}

fn repelling_minimal() -> GalleryEntry {
    let m = 512;
    GalleryEntry {
        id: "repelling_minimal",
        summary: "a rotation and a Morse-Smale map with a repelling fixed point at 0",
        source: "backward minimal with a repelling fixed point implies topologically exact",
        spec: spec(
            "repelling_minimal",
            SpaceKind::Circle,
            m,
            vec![
                MapDescriptor::rotation(surrogate(m)),
                MapDescriptor::MorseSmale { mu: ratio(1, 8) },
            ],
            IfsOptions::default(),
            &[(Minimality, P), (Repelling, P), (Exactness, P), (Mixing, P), (Physical, P)],
            AnalysisParams::default(),
        ),
        extra: vec![],
    }
}

fn chain_shadow() -> GalleryEntry {
    GalleryEntry {
        id: "chain_shadow",
        summary: "doubling at 4096 cells with pseudo-orbits and shadowing",
        source: "chain transitive with shadowing implies the space is a physical attractor",
        spec: spec(
            "chain_shadow",
            SpaceKind::Circle,
            4096,
            vec![MapDescriptor::TimesM { m: 2 }],
            IfsOptions::default(),
            &[(Chain, P), (Shadowing, P), (Physical, P), (Mixing, P)],
            AnalysisParams {
                delta: Some(ratio(1, 256)),
                epsilon: Some(ratio(1, 128)),
                rng_seed: Some(42),
                chains: Some(20),
                chain_length: Some(20),
                ..Default::default()
            },
        ),
        extra: vec![],
    }
}

pub fn build_gallery() -> Vec<GalleryEntry> {
    vec![
        doubling(),
        rotation_pair(),
        torus_shears(),
        recording_ifs(),
        symmetric_minimal(),
        repelling_minimal(),
        chain_shadow(),
    ]
}

pub fn gallery_entry(id: &str) -> Option<GalleryEntry> {
    build_gallery().into_iter().find(|e| e.id == id)
}
