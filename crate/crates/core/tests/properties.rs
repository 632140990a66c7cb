use proptest::prelude::*;

use protoalg::equiv::{check_aeqv, check_isomorphism, SimOptions, DEFAULT_ISO_BUDGET};
use protoalg::exec::{Outcome, Record};
use protoalg::frontend::generate::{generate_random, SizeParams};
use protoalg::frontend::{document_of, fixtures, parse, pretty};
use protoalg::graph::validate_algorithm_graph;
use protoalg::translate::{alpha_equivalent, graph_to_process, is_algorithm_process, rename};

fn params() -> impl Strategy<Value = SizeParams> {
    (2usize..5, 1usize..3, 1usize..3, 1usize..6, 0u32..=100, 0u32..=100).prop_map(
        |(domain, operations, predicates, body, l, s)| SizeParams {
            domain,
            operations,
            predicates,
            body,
            loop_percent: l,
            swap_percent: s,
        },
    )
}

#[test]
fn fixtures_reparse_identically() {
    for (name, text) in fixtures::ALL {
        let doc = parse(text).unwrap_or_else(|d| panic!("{name}: {d:?}"));
        let again = parse(&pretty(&doc)).expect("pretty output parses");
        assert_eq!(doc, again, "{name}");
        assert_eq!(pretty(&doc), pretty(&again), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parser_never_panics(text in "\\PC{0,200}") {
        let _ = parse(&text);
    }

    #[test]
    fn parser_survives_line_noise(lines in prop::collection::vec(
        prop_oneof![
            Just("ALPHABET".to_string()), Just("GRAPH".to_string()), Just("INTERP".to_string()),
            Just("PROCESS".to_string()), Just("fun ini fin f".to_string()), Just("pred p".to_string()),
            Just("root r".to_string()), "v [a-z] : [a-z]{1,4}", "edge [a-z] ->[01]? [a-z]",
            "domain (main|input|output) arity 1 range 0..[0-9]", "fun [a-z]+\\(x\\) = x\\[0\\]",
        ], 0..20)) {
        let _ = parse(&lines.join("\n"));
    }

    #[test]
    fn generated_documents_round_trip(seed in any::<u64>(), p in params()) {
        let g = generate_random(seed, &p);
        for a in std::iter::once(&g.base).chain(g.variants.iter().map(|v| &v.algorithm)) {
            let doc = document_of(a);
            let text = pretty(&doc);
            let back = parse(&text).expect("pretty output parses");
            prop_assert_eq!(&back, &doc);
            let rebuilt = back.proto_algorithm().unwrap();
            prop_assert_eq!(rebuilt.graph(), a.graph());
        }
    }

    #[test]
    fn generated_graphs_are_valid(seed in any::<u64>(), p in params()) {
        let g = generate_random(seed, &p);
        for a in std::iter::once(&g.base).chain(g.variants.iter().map(|v| &v.algorithm)) {
            prop_assert!(validate_algorithm_graph(a.alphabet(), a.graph().graph()).is_ok());
            let proc = graph_to_process(a.graph());
            prop_assert!(is_algorithm_process(&proc, a.alphabet()).is_ok());
        }
    }

    #[test]
    fn isomorphism_is_symmetric(seed in 0u64..10_000) {
        let g = generate_random(seed, &SizeParams::default());
        for v in &g.variants {
            let there = check_isomorphism(&g.base, &v.algorithm, DEFAULT_ISO_BUDGET);
            let back = check_isomorphism(&v.algorithm, &g.base, DEFAULT_ISO_BUDGET);
            prop_assert_eq!(there.is_proven(), back.is_proven());
        }
    }

    #[test]
    fn equivalence_is_reflexive(seed in 0u64..10_000) {
        let g = generate_random(seed, &SizeParams::default());
        prop_assert!(check_aeqv(&g.base, &g.base, SimOptions::default()).unwrap().is_proven());
    }

    #[test]
    fn trace_length_matches_step_count(seed in 0u64..10_000) {
        let a = generate_random(seed, &SizeParams::default()).base;
        for d in a.input_values() {
            let r = a.run(d, 500, Record { algorithmic: true, computational: false }).unwrap();
            let trace = r.algorithmic_trace.unwrap();
            match r.outcome {
                Outcome::Converged { nas, .. } => {
                    prop_assert_eq!(trace.len(), nas + 1);
                    prop_assert!(trace.last().unwrap().is_output());
                }
                Outcome::DivergedAtBound { bound } => prop_assert_eq!(trace.len(), bound + 1),
            }
        }
    }

    #[test]
    fn renaming_preserves_alpha_equivalence(seed in 0u64..10_000) {
        let a = generate_random(seed, &SizeParams::default()).base;
        let p = graph_to_process(a.graph());
        let map = p.spec.vars()
            .filter(|x| *x != p.root && *x != p.epsilon)
            .enumerate()
            .map(|(i, x)| (x.to_string(), format!("Z{i}")))
            .collect();
        prop_assert!(alpha_equivalent(&p, &rename(&p, &map)));
    }
}
