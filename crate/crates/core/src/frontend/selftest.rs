//! Generate seeded instances and check every variant against its known
//! relation with the base.

use serde::Serialize;

use super::generate::{generate_random, GroundTruth, SizeParams, VariantTag};
use crate::equiv::{check_aeqv, check_ceqv, check_isomorphism, SimOptions, DEFAULT_ISO_BUDGET};
use crate::exec::ProtoAlgorithm;
use crate::graph::validate_algorithm_graph;
use crate::interp::{check_interpretation, DEFAULT_EXTENT_CAP};
use crate::prove::{prove_aeqv, ProveVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub seed: u64,
    /// `None` for the base instance.
    pub variant: Option<VariantTag>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub instances: usize,
    pub variants_checked: usize,
    pub failures: Vec<Failure>,
}

impl SelftestReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn validity(a: &ProtoAlgorithm) -> Option<String> {
    let g = validate_algorithm_graph(a.alphabet(), a.graph().graph());
    if !g.is_ok() {
        return Some(format!("graph rejected: {}", g.violations[0]));
    }
    match check_interpretation(a.alphabet(), a.interp(), DEFAULT_EXTENT_CAP) {
        Ok(r) if r.is_ok() => None,
        Ok(r) => Some(format!("interpretation rejected: {}", r.violations[0])),
        Err(e) => Some(format!("interpretation rejected: {e}")),
    }
}

/// The first expected verdict that does not hold, if any.
pub fn check_ground_truth(base: &ProtoAlgorithm, variant: &ProtoAlgorithm, truth: GroundTruth) -> Option<String> {
    let opts = SimOptions::default();
    let iso = || check_isomorphism(base, variant, DEFAULT_ISO_BUDGET);
    let aeqv = || check_aeqv(base, variant, opts).map_err(|e| e.to_string());
    let expect = |ok: bool, what: &str| (!ok).then(|| format!("expected {what}"));
    match truth {
        GroundTruth::Iso => expect(iso().is_proven(), "isomorphic"),
        GroundTruth::AeqvNotIso => expect(iso().is_refuted(), "not isomorphic")
            .or_else(|| expect(aeqv().is_ok_and(|v| v.is_proven()), "algorithmically equivalent")),
        GroundTruth::CeqvNotAeqv => expect(aeqv().is_ok_and(|v| v.is_refuted()), "not algorithmically equivalent")
            .or_else(|| {
                expect(check_ceqv(base, variant, opts).is_ok_and(|v| v.is_proven()), "computationally equivalent")
            }),
        GroundTruth::AeqvProcessUnequal => expect(aeqv().is_ok_and(|v| v.is_proven()), "algorithmically equivalent")
            .or_else(|| {
                let r = prove_aeqv(base, variant, None, DEFAULT_PROVE_BOUND);
                expect(
                    r.is_ok_and(|r| matches!(r.verdict, ProveVerdict::MethodInconclusive { .. })),
                    "process proof to be inconclusive",
                )
            }),
    }
}

/// Bound on unfolding steps used by the self-test's process proofs.
pub const DEFAULT_PROVE_BOUND: usize = 10_000;

pub fn selftest(seed: u64, count: usize, params: &SizeParams) -> SelftestReport {
    let mut report = SelftestReport::default();
    for seed in seed..seed + count as u64 {
        let g = generate_random(seed, params);
        report.instances += 1;
        if let Some(message) = validity(&g.base) {
            report.failures.push(Failure { seed, variant: None, message });
        }
        for v in &g.variants {
            report.variants_checked += 1;
            let problem =
                validity(&v.algorithm).or_else(|| check_ground_truth(&g.base, &v.algorithm, v.tag.ground_truth()));
            if let Some(message) = problem {
                report.failures.push(Failure { seed, variant: Some(v.tag), message });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let r = selftest(0, 20, &SizeParams::default());
        assert!(r.is_ok(), "{:?}", r.failures);
        assert_eq!(r.instances, 20);
        assert!(r.variants_checked >= 20);
    }
}
