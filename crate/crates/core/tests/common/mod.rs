#![allow(dead_code)]

use std::path::PathBuf;

use hypcert::geometry::params_from_lengths;
use hypcert::triangulation::TriangulationFile;
use hypcert::Triangulation;

/// Closed hyperbolic fixtures with near-solution lengths.
pub const HYPERBOLIC: [&str; 3] = ["m004_1_2", "s891_m1_4", "v3226_m5_1"];
/// Two tetrahedra glued along their boundaries, a 3-sphere.
pub const SPHERE: &str = "s3_two_tet";
/// The same sphere after seven 1-4 moves, with hyperbolic simplices.
pub const SPHERE_MOVED: &str = "s3_one_four_moves";

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.tri"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture exists")
}

pub fn fixture(name: &str) -> TriangulationFile {
    Triangulation::parse(&fixture_text(name)).expect("fixture parses")
}

/// Triangulation and the parameters of its bundled lengths.
pub fn with_params(name: &str) -> (Triangulation, Vec<f64>) {
    let f = fixture(name);
    let nu = params_from_lengths(f.lengths.as_ref().expect("fixture has lengths"));
    (f.triangulation, nu)
}

/// Deterministic generator for test data.
pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
