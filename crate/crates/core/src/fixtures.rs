//! Bundled inputs, by name.

pub const SSET: &[(&str, &str)] = &[
    ("point", include_str!("../fixtures/point.sset")),
    ("circle", include_str!("../fixtures/circle.sset")),
    ("wedge2", include_str!("../fixtures/wedge2.sset")),
    ("wedge3", include_str!("../fixtures/wedge3.sset")),
    ("sphere", include_str!("../fixtures/sphere.sset")),
    ("torus", include_str!("../fixtures/torus.sset")),
    ("tetra", include_str!("../fixtures/tetra.sset")),
    ("rp2", include_str!("../fixtures/rp2.sset")),
];

pub const COALG: &[(&str, &str)] = &[
    ("borromean", include_str!("../fixtures/borromean.coalg")),
    ("zero", include_str!("../fixtures/zero.coalg")),
    ("exact", include_str!("../fixtures/exact.coalg")),
];

/// Simplicial fixtures with torsion-free homology.
pub const TORSION_FREE: &[&str] = &["point", "circle", "wedge2", "wedge3", "sphere", "torus", "tetra"];

pub fn sset(name: &str) -> Option<&'static str> {
    SSET.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn coalg(name: &str) -> Option<&'static str> {
    COALG.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
