//! Small hand-written proto-algorithms used by tests, the CLI self-test and
//! the Python bindings.

use super::load_proto_algorithm;
use crate::exec::ProtoAlgorithm;

pub const CD: &str = include_str!("../../fixtures/cd.palg");
pub const CD_RENAMED: &str = include_str!("../../fixtures/cd_renamed.palg");
pub const CD_REORDERED: &str = include_str!("../../fixtures/cd_reordered.palg");
pub const DIAMOND_A: &str = include_str!("../../fixtures/diamond_a.palg");
pub const DIAMOND_B: &str = include_str!("../../fixtures/diamond_b.palg");
pub const CYC_A: &str = include_str!("../../fixtures/cyc_a.palg");
pub const CYC_B: &str = include_str!("../../fixtures/cyc_b.palg");
pub const SWAP_A: &str = include_str!("../../fixtures/swap_a.palg");
pub const SWAP_B: &str = include_str!("../../fixtures/swap_b.palg");
pub const SINGLE_PATH: &str = include_str!("../../fixtures/single_path.palg");
pub const SPINNER: &str = include_str!("../../fixtures/spinner.palg");

/// Every fixture by name.
pub const ALL: &[(&str, &str)] = &[
    ("cd", CD),
    ("cd_renamed", CD_RENAMED),
    ("cd_reordered", CD_REORDERED),
    ("diamond_a", DIAMOND_A),
    ("diamond_b", DIAMOND_B),
    ("cyc_a", CYC_A),
    ("cyc_b", CYC_B),
    ("swap_a", SWAP_A),
    ("swap_b", SWAP_B),
    ("single_path", SINGLE_PATH),
    ("spinner", SPINNER),
];

fn load(text: &str) -> ProtoAlgorithm {
    load_proto_algorithm(text).expect("fixture is well formed")
}

pub fn by_name(name: &str) -> Option<ProtoAlgorithm> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| load(t))
}

pub fn all() -> Vec<(&'static str, ProtoAlgorithm)> {
    ALL.iter().map(|(n, t)| (*n, load(t))).collect()
}

/// Countdown: decrement until zero.
pub fn cd() -> ProtoAlgorithm {
    load(CD)
}

pub fn cd_renamed() -> ProtoAlgorithm {
    load(CD_RENAMED)
}

pub fn cd_reordered() -> ProtoAlgorithm {
    load(CD_REORDERED)
}

/// Parity branch: six vertices against five, same behaviour.
pub fn diamond() -> (ProtoAlgorithm, ProtoAlgorithm) {
    (load(DIAMOND_A), load(DIAMOND_B))
}

/// One loop against two nested loops: same operations, different step counts.
pub fn cyc() -> (ProtoAlgorithm, ProtoAlgorithm) {
    (load(CYC_A), load(CYC_B))
}

/// Two commuting operations in either order.
pub fn swap() -> (ProtoAlgorithm, ProtoAlgorithm) {
    (load(SWAP_A), load(SWAP_B))
}

pub fn single_path() -> ProtoAlgorithm {
    load(SINGLE_PATH)
}

/// Never converges.
pub fn spinner() -> ProtoAlgorithm {
    load(SPINNER)
}
