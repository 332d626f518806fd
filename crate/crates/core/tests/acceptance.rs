//! End-to-end acceptance suite. Each test prints one pass/fail line
//! (visible with `cargo test --test acceptance -- --nocapture`) and fails
//! loudly on any violation.

use std::time::{Duration, Instant};

use num::{BigRational, ToPrimitive, Zero};

use subzero::automaton::SubzeroAutomaton;
use subzero::bounds::{bound_f, bound_g, bound_h, BoundError, BoundParams};
use subzero::calculus::{validate_derivation, Profile};
use subzero::engine::{decide_from, derivable, normalize, saturate, Verdict};
use subzero::examples::{
    l3_block_schedule, l3_measure_bound, make_branching_fragment, make_example12, make_l3,
    BlockSchedule,
};
use subzero::format::derivation_from_json;
use subzero::multiset::Multiset;
use subzero::oracle::{
    enumerate_derivations, enumerate_finite_runs, mc_zero_measure, random_automaton,
    random_run_graph, seeded_rng, EnumerationCaps, RandomAutomatonConfig, RandomRunGraphConfig,
};
use subzero::realizer::{graph_profile, realize};
use subzero::runcheck::{
    check_partial_run, is_accepting_run, zero_measure_exact, zero_measure_is_zero_structural,
};

fn verdict_line(criterion: &str, ok: bool) {
    println!(
        "acceptance {criterion}: {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion failed: {criterion}");
}

/// The shared random corpus: 200 automata with |Q| <= 3, alphabet <= 2,
/// at most 6 transitions.
fn corpus() -> Vec<SubzeroAutomaton> {
    (0..200u64)
        .map(|seed| {
            let cfg = RandomAutomatonConfig {
                num_states: 1 + (seed % 3) as usize,
                num_letters: 1 + (seed % 2) as usize,
                num_transitions: (seed % 7) as usize,
                p_all: 0.6,
                p_zero: 0.35,
            };
            random_automaton(&mut seeded_rng(seed), &cfg)
        })
        .collect()
}

fn profile(a: &SubzeroAutomaton, root: &str, bound: &str, ports: &[&str]) -> Profile {
    Profile::new(
        a.state_by_name(root).unwrap(),
        a.state_by_name(bound).unwrap(),
        Multiset::from_states(
            a.num_states(),
            &ports
                .iter()
                .map(|n| a.state_by_name(n).unwrap())
                .collect::<Vec<_>>(),
        ),
    )
}

#[test]
fn criterion_1_l3_is_empty_from_every_state() {
    let start = Instant::now();
    let a = make_l3();
    let saturation = saturate(&a).unwrap();
    let mut ok = true;
    for q in a.states() {
        ok &= decide_from(&saturation, q).unwrap() == Verdict::Empty;
    }
    ok &= start.elapsed() < Duration::from_secs(1);
    verdict_line("1 (three-state language has no regular member)", ok);
}

#[test]
fn criterion_2_example12_nonempty_with_accepting_witness() {
    let start = Instant::now();
    let a = make_example12();
    let q = a.state_by_name("q").unwrap();
    let saturation = saturate(&a).unwrap();
    let mut ok = true;
    match decide_from(&saturation, q).unwrap() {
        Verdict::NonEmpty(w) => {
            ok &= w.size() <= 12;
            ok &= validate_derivation(&a, &w).is_ok();
            ok &= w.conclusion().root == q && w.conclusion().ports.is_empty();
            let g = realize(&a, &w).unwrap();
            ok &= is_accepting_run(&a, &g);
            ok &= zero_measure_exact(&a, &g) == BigRational::zero();
        }
        Verdict::Empty => ok = false,
    }
    ok &= start.elapsed() < Duration::from_secs(1);
    verdict_line("2 (two-state automaton accepts the all-a tree)", ok);
}

#[test]
fn criterion_3_branching_fixture_and_engine_agree() {
    let a = make_branching_fragment();
    let json = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/branching_derivation.json"
    ))
    .unwrap();
    let fixture = derivation_from_json(&a, &json).unwrap();
    let mut ok = validate_derivation(&a, &fixture).is_ok();
    ok &= fixture.conclusion()
        == &profile(&a, "p", "p", &["q1", "q1", "q1", "q2", "q2", "q3", "q4"]);

    let target = profile(&a, "p", "p", &["q1", "q2", "q3", "q4"]);
    ok &= derivable(&a, &target).unwrap();

    let caps = EnumerationCaps::new(20, 3, 1);
    match enumerate_derivations(&a, &target, &caps).unwrap() {
        Some(d) => {
            ok &= validate_derivation(&a, &d).is_ok();
            ok &= d.conclusion() == &target;
            ok &= d.size() <= 20;
        }
        None => ok = false,
    }
    verdict_line("3 (finite branching fixture, engine and oracle)", ok);
}

#[test]
fn criterion_4_every_witness_realizes_to_a_valid_partial_run() {
    let start = Instant::now();
    let mut ok = true;
    let mut witnesses = 0usize;
    for a in corpus() {
        let saturation = saturate(&a).unwrap();
        for (np, w) in saturation.all_witnesses() {
            witnesses += 1;
            if !validate_derivation(&a, &w).is_ok() || normalize(w.conclusion()) != np {
                ok = false;
                continue;
            }
            let Ok(g) = realize(&a, &w) else {
                ok = false;
                continue;
            };
            let report = check_partial_run(&a, &g).unwrap();
            ok &= report.is_ok();
            // The realized graph tracks the conclusion: equal root and
            // ports, bound at most the declared one.
            let gp = graph_profile(&a, &g);
            ok &= gp.root == w.conclusion().root;
            ok &= gp.ports == w.conclusion().ports;
            ok &= gp.bound <= w.conclusion().bound;
        }
    }
    let elapsed = start.elapsed();
    ok &= witnesses > 0;
    ok &= elapsed < Duration::from_secs(60);
    verdict_line(
        &format!("4 (soundness round-trip, {witnesses} witnesses, {elapsed:.2?})"),
        ok,
    );
}

#[test]
fn criterion_5_empirical_completeness_against_the_oracle() {
    let mut ok = true;
    let mut finite_profiles = 0usize;
    let mut oracle_hits = 0usize;
    for a in corpus() {
        let saturation = saturate(&a).unwrap();
        // (a) Every depth-limited finite-run profile is derivable.
        for root in a.states() {
            for p in enumerate_finite_runs(&a, root, 4).unwrap() {
                finite_profiles += 1;
                if !saturation.contains(&normalize(&p)) {
                    eprintln!("missing finite-run profile {}", p.display(&a));
                    ok = false;
                }
            }
        }
        // (b) Whenever the capped enumeration proves some empty-port
        // profile, the engine must answer NONEMPTY.
        let caps = EnumerationCaps::new(12, 3, 1);
        for q0 in a.states() {
            for bound in a.states() {
                let target = Profile::new(q0, bound, Multiset::empty(a.num_states()));
                if let Some(d) = enumerate_derivations(&a, &target, &caps).unwrap() {
                    oracle_hits += 1;
                    ok &= validate_derivation(&a, &d).is_ok();
                    ok &= decide_from(&saturation, q0).unwrap().is_nonempty();
                }
            }
        }
    }
    ok &= finite_profiles > 0 && oracle_hits > 0;
    verdict_line(
        &format!(
            "5 (empirical completeness: {finite_profiles} finite-run profiles, {oracle_hits} oracle finds)"
        ),
        ok,
    );
}

#[test]
fn criterion_6_measure_checker_against_structure_and_sampling() {
    let start = Instant::now();
    let mut ok = true;
    for seed in 1000..1050u64 {
        let cfg = RandomRunGraphConfig {
            max_nodes: 8,
            num_states: 3,
            num_letters: 2,
            port_probability: 0.25,
            p_all: 0.6,
            p_zero: 0.4,
        };
        let (a, g) = random_run_graph(&mut seeded_rng(seed), &cfg);
        let exact = zero_measure_exact(&a, &g);
        ok &= exact >= BigRational::zero() && exact <= num::One::one();
        ok &= exact.is_zero() == zero_measure_is_zero_structural(&a, &g);
        let estimate = mc_zero_measure(&a, &g, 100_000, 200, seed);
        let exact_f = exact.to_f64().unwrap();
        if (estimate - exact_f).abs() > 0.02 {
            eprintln!("seed {seed}: estimate {estimate} vs exact {exact_f}");
            ok = false;
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(120);
    verdict_line(&format!("6 (exact measure checker, {elapsed:.2?})"), ok);
}

#[test]
fn criterion_7_bound_recurrences() {
    let mut ok = true;
    // Base case is exactly linear.
    let p2 = BoundParams::new(2);
    for n in 0..=100u64 {
        ok &= bound_f(&p2, 0, n).unwrap() == (8 * n + 8).into();
    }
    // Monotone in every numeric argument on the grid.
    for size_q in 1..=3u64 {
        let p = BoundParams::new(size_q);
        for q in 0..=2u64 {
            for n in 0..=4u64 {
                if n < 4 {
                    ok &= bound_f(&p, q, n).unwrap() <= bound_f(&p, q, n + 1).unwrap();
                }
                if q >= 1 {
                    ok &= bound_f(&p, q - 1, n).unwrap() <= bound_f(&p, q, n).unwrap();
                    for k in 0..=3u64 {
                        ok &= bound_h(&p, q, n, k).unwrap() <= bound_h(&p, q, n, k + 1).unwrap();
                        ok &= bound_g(&p, q, n, k).unwrap() <= bound_g(&p, q, n, k + 1).unwrap();
                    }
                }
            }
        }
    }
    // One-step recurrence consistency.
    let p = BoundParams::new(2);
    for q in 1..=2u64 {
        for n in 1..=4u64 {
            for k in 0..=4u64 {
                let expect = bound_f(&p, q - 1, 2 * n).unwrap()
                    + bound_h(&p, q, n, k).unwrap() * n
                    + n * n;
                ok &= bound_h(&p, q, n, k + 1).unwrap() == expect;
                let wide = n + p.size_q;
                let expect = bound_f(&p, q - 1, 2 * wide).unwrap()
                    + bound_g(&p, q, n, k).unwrap() * wide
                    + wide * wide;
                ok &= bound_g(&p, q, n, k + 1).unwrap() == expect;
            }
        }
    }
    // Exhausting the budget is an explicit report, not a crash.
    let mut tight = BoundParams::new(3);
    tight.max_steps = 50;
    ok &= matches!(bound_f(&tight, 3, 8), Err(BoundError::Overflow(_)));
    verdict_line("7 (size-bound recurrences)", ok);
}

#[test]
fn criterion_8_block_schedule_arithmetic() {
    let mut ok = true;
    for k in 1..=20 {
        let schedule = l3_block_schedule(k);
        ok &= schedule.satisfies_invariant();
        let (sum, within) = l3_measure_bound(&schedule);
        ok &= within && sum <= num::One::one();
    }
    let schedule = l3_block_schedule(3);
    ok &= schedule.values() == [0, 2, 5, 11];
    let (sum, within) = l3_measure_bound(&schedule);
    ok &= within && sum == BigRational::new(25.into(), 64.into());
    ok &= BlockSchedule::from_values(vec![0, 2, 4]).is_none();
    verdict_line("8 (block schedule arithmetic)", ok);
}

#[test]
fn criterion_9_parity_reducts_agree_with_the_oracle() {
    let mut ok = true;
    let mut hits = 0usize;
    for seed in 2000..2100u64 {
        let cfg = RandomAutomatonConfig {
            num_states: 1 + (seed % 3) as usize,
            num_letters: 1 + (seed % 2) as usize,
            num_transitions: (seed % 7) as usize,
            p_all: 0.6,
            p_zero: 0.0,
        };
        let a = random_automaton(&mut seeded_rng(seed), &cfg);
        assert!(a.q_zero().is_empty());
        let saturation = saturate(&a).unwrap();
        let caps = EnumerationCaps::new(12, 3, 1);
        for q0 in a.states() {
            for bound in a.states() {
                let target = Profile::new(q0, bound, Multiset::empty(a.num_states()));
                if enumerate_derivations(&a, &target, &caps).unwrap().is_some() {
                    hits += 1;
                    ok &= decide_from(&saturation, q0).unwrap().is_nonempty();
                }
            }
        }
    }
    ok &= hits > 0;
    verdict_line(
        &format!("9 (parity reducts agree with the oracle, {hits} finds)"),
        ok,
    );
}
