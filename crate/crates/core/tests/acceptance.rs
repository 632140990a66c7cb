//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;

use protoalg::equiv::{
    check_aeqv, check_ceqv, check_graph_isomorphism, check_isomorphism, check_simulation, replay_counterexample,
    verify_simulation_consequences, Direction, SimOptions, DEFAULT_ISO_BUDGET,
};
use protoalg::exec::{Outcome, ProtoAlgorithm, Record, State, StepKind};
use protoalg::frontend::fixtures;
use protoalg::frontend::generate::{generate_random, random_process, reachable_states, SizeParams};
use protoalg::graph::{validate_algorithm_graph, Clause, Digraph};
use protoalg::interp::{Bit, Value};
use protoalg::prove::{cross_validate_steps, prove_aeqv, ProveVerdict};
use protoalg::translate::{canonicalize, graph_to_process, process_to_graph};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts() -> SimOptions {
    SimOptions::default()
}

fn v(x: i64) -> Value {
    Value::scalar(x)
}

/// Fixture pairs sharing alphabet and interpretation, plus every fixture
/// paired with itself.
fn fixture_pairs() -> Vec<(String, ProtoAlgorithm, ProtoAlgorithm)> {
    let all = fixtures::all();
    let mut out = Vec::new();
    for (n, a) in &all {
        for (m, b) in &all {
            if a.alphabet() == b.alphabet() && a.interp() == b.interp() {
                out.push((format!("{n}/{m}"), a.clone(), b.clone()));
            }
        }
    }
    out.push(("cd/cd_renamed".into(), fixtures::cd(), fixtures::cd_renamed()));
    out
}

fn random_pairs(seeds: std::ops::Range<u64>) -> Vec<(String, ProtoAlgorithm, ProtoAlgorithm)> {
    let mut out = Vec::new();
    for seed in seeds {
        let g = generate_random(seed, &SizeParams::default());
        out.push((format!("seed {seed} base"), g.base.clone(), g.base.clone()));
        for var in &g.variants {
            out.push((format!("seed {seed} {}", var.tag.name()), g.base.clone(), var.algorithm.clone()));
        }
    }
    out
}

// 1 ------------------------------------------------------------------------

fn criterion_1() -> Check {
    let cd = fixtures::cd();
    let alphabet = cd.alphabet().clone();
    let base = cd.graph().graph().clone();
    let report = validate_algorithm_graph(&alphabet, &base);
    ensure(report.is_ok(), || format!("countdown rejected: {:?}", report.violations))?;

    type Mutation = fn(&mut Digraph);
    let mutants: [(Clause, Mutation); 8] = [
        (Clause::RootIni, |g| g.set_root("c").unwrap()),
        (Clause::IniVertex, |g| g.set_edge_label("r", "c", Some(Bit::One)).unwrap()),
        (Clause::FinVertex, |g| g.add_edge("h", "c", None).unwrap()),
        (Clause::FunctionVertex, |g| g.set_edge_label("g", "c", Some(Bit::Zero)).unwrap()),
        (Clause::PredicateVertex, |g| g.set_edge_label("c", "g", Some(Bit::One)).unwrap()),
        (Clause::LabelTotal, |g| g.set_label("g", None).unwrap()),
        (Clause::LabelInAlphabet, |g| g.set_label("g", Some("inc".into())).unwrap()),
        (Clause::PredicateCycle, |g| g.set_label("g", Some("iszero".into())).unwrap()),
    ];
    for (clause, mutate) in mutants {
        let mut g = base.clone();
        mutate(&mut g);
        let r = validate_algorithm_graph(&alphabet, &g);
        ensure(!r.is_ok() && r.cites(clause), || format!("mutant for `{clause}` not flagged: {:?}", r.violations))?;
    }
    Ok("countdown accepted; 8 single-clause mutants rejected citing their clause (7 structural + label totality)"
        .into())
}

// 2 ------------------------------------------------------------------------

/// Hand-written countdown: ini, then test/decrement until zero, then fin.
fn countdown_reference(n: i64) -> (i64, usize) {
    let mut steps = 1; // input -> c
    let mut x = n;
    loop {
        steps += 1; // leave c
        if x == 0 {
            break;
        }
        x -= 1;
        steps += 1; // g -> c
    }
    steps += 1; // h -> output
    (x, steps)
}

fn criterion_2() -> Check {
    let cd = fixtures::cd();
    for n in 0..=3 {
        let (out, nas) = countdown_reference(n);
        ensure(nas == 2 * n as usize + 3, || format!("reference disagrees with 2n+3 at {n}"))?;
        let r = cd.run(&v(n), 1000, Record::NONE).map_err(|e| e.to_string())?;
        ensure(r.outcome == Outcome::Converged { output: v(out), nas }, || format!("n={n}: {:?}", r.outcome))?;
        let c = cd.run_computational(&v(n), 1000).map_err(|e| e.to_string())?;
        ensure(matches!(&c, Outcome::Converged { output, .. } if *output == v(0)), || {
            format!("n={n}: computational run {c:?}")
        })?;
    }
    Ok("nas = 2n+3 and output <0> for n = 0..3; computational runs agree".into())
}

// 3 ------------------------------------------------------------------------

fn criterion_3() -> Check {
    let (mut iso_pairs, mut implications) = (0, 0);
    for seed in 0..500 {
        let g = generate_random(seed, &SizeParams::default());
        let Some(var) = g.variant(protoalg::frontend::generate::VariantTag::Iso) else {
            return Err(format!("seed {seed}: no iso variant"));
        };
        ensure(check_isomorphism(&g.base, var, DEFAULT_ISO_BUDGET).is_proven(), || {
            format!("seed {seed}: iso variant not isomorphic")
        })?;
        iso_pairs += 1;
        for var in &g.variants {
            let b = &var.algorithm;
            let iso = check_isomorphism(&g.base, b, DEFAULT_ISO_BUDGET).is_proven();
            let aeqv = check_aeqv(&g.base, b, opts()).map_err(|e| e.to_string())?.is_proven();
            let ceqv = check_ceqv(&g.base, b, opts()).map_err(|e| e.to_string())?.is_proven();
            ensure(!iso || aeqv, || format!("seed {seed} {}: iso but not aeqv", var.tag.name()))?;
            ensure(!aeqv || ceqv, || format!("seed {seed} {}: aeqv but not ceqv", var.tag.name()))?;
            implications += 1;
        }
    }
    Ok(format!("{iso_pairs} iso variants proven; chain held on {implications} variant pairs"))
}

// 4 ------------------------------------------------------------------------

fn criterion_4() -> Check {
    let (a, b) = fixtures::diamond();
    ensure(check_aeqv(&a, &b, opts()).unwrap().is_proven(), || "DIAMOND: aeqv not proven".into())?;
    ensure(check_isomorphism(&a, &b, DEFAULT_ISO_BUDGET).is_refuted(), || "DIAMOND: iso not refuted".into())?;

    let (a, b) = fixtures::cyc();
    ensure(check_ceqv(&a, &b, opts()).unwrap().is_proven(), || "CYC: ceqv not proven".into())?;
    let v = check_aeqv(&a, &b, opts()).unwrap();
    let c = v.counterexample().ok_or("CYC: aeqv not refuted")?;
    let (x, y) = match c.direction {
        Direction::Forward => (&a, &b),
        Direction::Backward => (&b, &a),
    };
    ensure(replay_counterexample(x, y, StepKind::Algorithmic, &c.counterexample), || {
        "CYC: counterexample does not replay".into()
    })?;

    let (a, b) = fixtures::swap();
    ensure(check_aeqv(&a, &b, opts()).unwrap().is_proven(), || "SWAP: aeqv not proven".into())?;
    let r = prove_aeqv(&a, &b, None, 10_000).map_err(|e| e.to_string())?;
    ensure(matches!(r.verdict, ProveVerdict::MethodInconclusive { .. }), || {
        format!("SWAP: prove gave {:?}", r.verdict)
    })?;
    Ok("DIAMOND aeqv/not iso; CYC ceqv/not aeqv (replayed); SWAP aeqv/proof inconclusive".into())
}

// 5 ------------------------------------------------------------------------

fn criterion_5() -> Check {
    let mut witnesses = 0;
    let mut pairs = fixture_pairs();
    pairs.extend(random_pairs(0..100));
    for (name, a, b) in &pairs {
        for (x, y) in [(a, b), (b, a)] {
            let s = check_simulation(x, y, StepKind::Algorithmic, None, opts()).map_err(|e| e.to_string())?;
            if let Some(w) = s.witness() {
                let r = verify_simulation_consequences(x, y, w, 10_000);
                ensure(r.is_ok(), || format!("{name}: {:?}", r.violations))?;
                witnesses += 1;
            }
        }
    }
    let (a, b) = fixtures::cyc();
    let s = check_simulation(&a, &b, StepKind::Computational, None, opts()).map_err(|e| e.to_string())?;
    let w = s.witness().ok_or("CYC: no computational simulation")?;
    let r = verify_simulation_consequences(&a, &b, w, 10_000);
    ensure(r.fails(3), || "CYC computational witness satisfies the step-count clause".into())?;
    Ok(format!("{witnesses} algorithmic witnesses, zero violations; CYC computational witness fails clause 3"))
}

// 6 ------------------------------------------------------------------------

fn criterion_6() -> Check {
    let mut graphs: Vec<(String, ProtoAlgorithm)> =
        fixtures::all().into_iter().map(|(n, a)| (n.to_string(), a)).collect();
    graphs.extend((0..100).map(|s| (format!("seed {s}"), generate_random(s, &SizeParams::default()).base)));
    for (name, a) in &graphs {
        let p = graph_to_process(a.graph());
        let back = process_to_graph(&p, a.alphabet()).map_err(|e| format!("{name}: {e}"))?;
        ensure(check_graph_isomorphism(a.graph(), &back).is_some(), || format!("{name}: round trip not isomorphic"))?;
    }
    for seed in 0..100 {
        let (p, alphabet) = random_process(seed, &SizeParams::default());
        let g = process_to_graph(&p, &alphabet).map_err(|e| format!("process {seed}: {e}"))?;
        ensure(canonicalize(&graph_to_process(&g)) == canonicalize(&p), || {
            format!("process {seed}: round trip differs")
        })?;
    }
    Ok(format!("{} graphs and 100 processes round-trip", graphs.len()))
}

// 7 ------------------------------------------------------------------------

fn criterion_7() -> Check {
    let mut states = 0;
    let mut all: Vec<(String, ProtoAlgorithm)> = fixtures::all().into_iter().map(|(n, a)| (n.to_string(), a)).collect();
    all.extend((0..100).map(|s| (format!("seed {s}"), generate_random(s, &SizeParams::default()).base)));
    for (name, a) in &all {
        let r = cross_validate_steps(a);
        ensure(r.is_ok(), || format!("{name}: {:?}", r.mismatches))?;
        states += r.checked_states;
    }
    Ok(format!("{} algorithms, {states} reachable states, no mismatches", all.len()))
}

// 8 ------------------------------------------------------------------------

fn criterion_8() -> Check {
    let (mut proven, mut compared) = (0, 0);
    let mut pairs = fixture_pairs();
    pairs.extend(random_pairs(0..200));
    for (name, a, b) in &pairs {
        let Ok(r) = prove_aeqv(a, b, None, 10_000) else { continue };
        compared += 1;
        if r.verdict == ProveVerdict::Proven {
            proven += 1;
            ensure(check_aeqv(a, b, opts()).unwrap().is_proven(), || format!("{name}: proof without equivalence"))?;
        }
    }
    let (a, b) = fixtures::swap();
    let split = check_aeqv(&a, &b, opts()).unwrap().is_proven()
        && matches!(prove_aeqv(&a, &b, None, 10_000).unwrap().verdict, ProveVerdict::MethodInconclusive { .. });
    ensure(split, || "SWAP does not separate the proof method from equivalence".into())?;
    ensure(proven > 0, || "no pair was proven".into())?;
    Ok(format!("{proven} of {compared} same-signature pairs proven, all equivalent; SWAP split holds"))
}

// 9 ------------------------------------------------------------------------

fn tag(s: &State) -> u8 {
    match s {
        State::Input { .. } => 0,
        State::Internal { .. } => 1,
        State::Output { .. } => 2,
    }
}

fn step(a: &ProtoAlgorithm, kind: StepKind, s: &State) -> State {
    match kind {
        StepKind::Algorithmic => a.astep(s),
        StepKind::Computational => a.cstep(s),
    }
    .expect("reachable state")
}

/// The three defining conditions, checked literally on `r`.
fn is_simulation(a: &ProtoAlgorithm, b: &ProtoAlgorithm, kind: StepKind, r: &BTreeSet<(State, State)>) -> bool {
    let typed = r.iter().all(|(s, t)| tag(s) == tag(t));
    let inputs = a.input_values().iter().all(|d| {
        r.iter().filter(|(s, t)| *s == State::input(d.clone()) && matches!(t, State::Input { .. })).count() == 1
    });
    let outputs = b.output_values().iter().all(|e| {
        r.iter().filter(|(s, t)| *t == State::output(e.clone()) && matches!(s, State::Output { .. })).count() == 1
    });
    let closed = r.iter().all(|(s, t)| r.contains(&(step(a, kind, s), step(b, kind, t))));
    typed && inputs && outputs && closed
}

/// Does any simulation contain exactly the input pairs `fi`? Every such
/// relation contains the step closure of those pairs, and output states are
/// step fixpoints, so it suffices to try the closure extended by every
/// total map from the simulating side's outputs.
fn oracle(a: &ProtoAlgorithm, b: &ProtoAlgorithm, kind: StepKind, fi: &[(Value, Value)]) -> bool {
    let mut closure = BTreeSet::new();
    let mut work: Vec<(State, State)> =
        fi.iter().map(|(d, e)| (State::input(d.clone()), State::input(e.clone()))).collect();
    while let Some(p) = work.pop() {
        if closure.insert(p.clone()) {
            work.push((step(a, kind, &p.0), step(b, kind, &p.1)));
        }
    }
    let (outs_a, outs_b) = (a.output_values(), b.output_values());
    let total = (outs_a.len() as u64).pow(outs_b.len() as u32);
    (0..total).any(|mut code| {
        let mut r = closure.clone();
        for e in outs_b {
            let o = &outs_a[(code % outs_a.len() as u64) as usize];
            code /= outs_a.len() as u64;
            r.insert((State::output(o.clone()), State::output(e.clone())));
        }
        is_simulation(a, b, kind, &r)
    })
}

fn input_maps(a: &ProtoAlgorithm, b: &ProtoAlgorithm) -> Vec<Vec<(Value, Value)>> {
    let (ia, ib) = (a.input_values(), b.input_values());
    let total = (ib.len() as u64).pow(ia.len() as u32);
    (0..total)
        .map(|mut code| {
            ia.iter()
                .map(|d| {
                    let e = ib[(code % ib.len() as u64) as usize].clone();
                    code /= ib.len() as u64;
                    (d.clone(), e)
                })
                .collect()
        })
        .collect()
}

fn small_and_convergent(a: &ProtoAlgorithm) -> bool {
    reachable_states(a) <= 12
        && a.input_values()
            .iter()
            .all(|d| a.run(d, 1000, Record::NONE).is_ok_and(|r| matches!(r.outcome, Outcome::Converged { .. })))
}

fn criterion_9() -> Check {
    let params = SizeParams::tiny();
    let mut instances = Vec::new();
    for seed in 0..5000u64 {
        let g = generate_random(seed, &params);
        let algs: Vec<ProtoAlgorithm> =
            std::iter::once(g.base).chain(g.variants.into_iter().map(|v| v.algorithm)).collect();
        if algs.iter().all(small_and_convergent) {
            instances.push((seed, algs));
        }
        if instances.len() == 50 {
            break;
        }
    }
    ensure(instances.len() == 50, || format!("only {} qualifying instances", instances.len()))?;

    let (mut checks, mut proven) = (0, 0);
    for (i, (seed, algs)) in instances.iter().enumerate() {
        // Each instance against its variants, itself and the next instance.
        let next = &instances[(i + 1) % instances.len()].1[0];
        let mut pairs: Vec<(&ProtoAlgorithm, &ProtoAlgorithm)> = Vec::new();
        for x in algs.iter().chain([next]) {
            pairs.push((&algs[0], x));
            pairs.push((x, &algs[0]));
        }
        for (a, b) in pairs {
            for kind in [StepKind::Algorithmic, StepKind::Computational] {
                for fi in input_maps(a, b) {
                    let got = check_simulation(a, b, kind, Some(&fi), opts()).map_err(|e| e.to_string())?;
                    ensure(!got.is_unknown(), || format!("seed {seed}: unknown verdict"))?;
                    let want = oracle(a, b, kind, &fi);
                    ensure(got.is_proven() == want, || {
                        format!("seed {seed} {kind} {fi:?}: checker {} but oracle {want}", got.name())
                    })?;
                    checks += 1;
                    proven += want as usize;
                }
            }
        }
    }
    Ok(format!("50 instances, {checks} fixed-map checks ({proven} simulations), zero disagreements"))
}

// 10 -----------------------------------------------------------------------

fn criterion_10() -> Check {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let f = |n: &str| dir.join(format!("{n}.palg")).display().to_string();
    let invocations: Vec<Vec<String>> = vec![
        vec!["validate".into(), f("cd")],
        vec!["run".into(), f("cd"), "--all".into(), "--trace".into()],
        vec!["trace".into(), f("cyc_b"), "--input".into(), "2".into(), "--kind".into(), "computational".into()],
        vec!["iso".into(), f("cd"), f("cd_renamed")],
        vec!["equiv".into(), "--kind".into(), "algorithmic".into(), f("cyc_a"), f("cyc_b")],
        vec!["equiv".into(), f("swap_a"), f("swap_b")],
        vec!["prove".into(), f("swap_a"), f("swap_b")],
        vec!["to-process".into(), f("diamond_a")],
        vec!["selftest".into(), "--seed".into(), "11".into(), "--count".into(), "5".into()],
    ];
    for args in &invocations {
        let run =
            || Command::new(env!("CARGO_BIN_EXE_palg")).arg("--json").args(args).output().map_err(|e| e.to_string());
        let (x, y) = (run()?, run()?);
        ensure(x.stdout == y.stdout && x.status == y.status, || format!("{args:?}: outputs differ"))?;
        ensure(!x.stdout.is_empty(), || format!("{args:?}: no output"))?;
        serde_json::from_slice::<serde_json::Value>(&x.stdout).map_err(|e| format!("{args:?}: not JSON: {e}"))?;
    }
    Ok(format!("{} invocations byte-identical across two runs", invocations.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("graph clause mutants", criterion_1),
        ("countdown execution", criterion_2),
        ("iso => aeqv => ceqv", criterion_3),
        ("strictness examples", criterion_4),
        ("simulation consequences", criterion_5),
        ("translation round trips", criterion_6),
        ("step/unfolding agreement", criterion_7),
        ("proof soundness", criterion_8),
        ("simulation search vs brute force", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
