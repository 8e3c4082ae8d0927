//! Generator matrices shipped with the crate, in the text matrix format.

use crate::cli::matfile;
use crate::gfmatrix::GenMatrix;

/// `(file name, contents)` of every bundled matrix.
pub const FILES: &[(&str, &str)] = &[
    (
        "mds-4-2-gf3.mat",
        include_str!("../fixtures/mds-4-2-gf3.mat"),
    ),
    (
        "reed-muller-1-3.mat",
        include_str!("../fixtures/reed-muller-1-3.mat"),
    ),
    ("gf8-3x5.mat", include_str!("../fixtures/gf8-3x5.mat")),
    ("gf7-3x5.mat", include_str!("../fixtures/gf7-3x5.mat")),
    (
        "mds-4-2-gf5.mat",
        include_str!("../fixtures/mds-4-2-gf5.mat"),
    ),
    (
        "mds-6-2-gf7.mat",
        include_str!("../fixtures/mds-6-2-gf7.mat"),
    ),
    (
        "mds-6-3-gf7.mat",
        include_str!("../fixtures/mds-6-3-gf7.mat"),
    ),
    (
        "replicated-2x3-gf2.mat",
        include_str!("../fixtures/replicated-2x3-gf2.mat"),
    ),
];

fn load(name: &str) -> GenMatrix {
    let (_, text) = FILES
        .iter()
        .find(|(n, _)| *n == name)
        .expect("bundled fixture exists");
    matfile::load(text).expect("bundled fixture is valid")
}

/// Systematic [4,2] MDS code over GF(3).
pub fn mds_4_2_gf3() -> GenMatrix {
    load("mds-4-2-gf3.mat")
}

/// Non-systematic generator of the first-order Reed–Muller code of length 8.
pub fn reed_muller_1_3() -> GenMatrix {
    load("reed-muller-1-3.mat")
}

/// 3×5 matrix over GF(8) with modulus a³ + a + 1.
pub fn gf8_3x5() -> GenMatrix {
    load("gf8-3x5.mat")
}

/// Systematic 3×5 matrix over GF(7) with dual distance 2.
pub fn gf7_3x5() -> GenMatrix {
    load("gf7-3x5.mat")
}

pub fn mds_4_2_gf5() -> GenMatrix {
    load("mds-4-2-gf5.mat")
}

pub fn mds_6_2_gf7() -> GenMatrix {
    load("mds-6-2-gf7.mat")
}

pub fn mds_6_3_gf7() -> GenMatrix {
    load("mds-6-3-gf7.mat")
}

/// `(I_2 | e_1)` over GF(2).
pub fn replicated_2x3_gf2() -> GenMatrix {
    load("replicated-2x3-gf2.mat")
}

pub fn all() -> Vec<GenMatrix> {
    FILES.iter().map(|(name, _)| load(name)).collect()
}
